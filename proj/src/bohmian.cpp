#include "gapthermal/bohmian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gapthermal/errors.hpp"
#include "gapthermal/field.hpp"

namespace gapthermal {

namespace {

// Runge-Kutta-Fehlberg 4(5) tableau; the 4th-order solution is propagated.
constexpr double kA[6][5] = {
    {0, 0, 0, 0, 0},
    {1.0 / 4, 0, 0, 0, 0},
    {3.0 / 32, 9.0 / 32, 0, 0, 0},
    {1932.0 / 2197, -7200.0 / 2197, 7296.0 / 2197, 0, 0},
    {439.0 / 216, -8.0, 3680.0 / 513, -845.0 / 4104, 0},
    {-8.0 / 27, 2.0, -3544.0 / 2565, 1859.0 / 4104, -11.0 / 40},
};
constexpr double kC[6] = {0, 1.0 / 4, 3.0 / 8, 12.0 / 13, 1.0, 1.0 / 2};
constexpr double kB4[6] = {25.0 / 216, 0, 1408.0 / 2565, 2197.0 / 4104, -1.0 / 5, 0};
constexpr double kB5[6] = {16.0 / 135, 0, 6656.0 / 12825, 28561.0 / 56430, -9.0 / 50, 2.0 / 55};

std::vector<double> coordinate_masses(const SpectralModel& model, std::span<const double> masses) {
  const int dims = model.configuration_dimension();
  const int particles = model.kind() == ModelKind::box ? model.particles() : 1;
  if (masses.empty()) return std::vector<double>(dims, model.mass());
  if (static_cast<int>(masses.size()) != particles) {
    throw InvalidParameter("expected one mass per particle");
  }
  std::vector<double> out;
  const int per_particle = dims / particles;
  for (double m : masses) {
    if (!(m > 0.0)) throw InvalidParameter("masses must be positive");
    out.insert(out.end(), per_particle, m);
  }
  return out;
}

double mean_density(const WaveFunction& psi) {
  return psi.norm_squared() / psi.model().configuration_volume();
}

std::vector<Complex> evolved(const WaveFunction& psi, double t) {
  const auto modes = psi.spectrum().modes();
  const double hbar = psi.model().hbar();
  std::vector<Complex> out(psi.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = psi.coefficient(i) * std::polar(1.0, -modes[i].energy * t / hbar);
  }
  return out;
}

class VelocityField {
public:
  VelocityField(const WaveFunction& psi, std::span<const double> masses, double node_threshold)
      : psi_(psi), masses_(coordinate_masses(psi.model(), masses)),
        node_density_(node_threshold * mean_density(psi)) {}

  /// Velocity at (t, q), or nothing if q is off the domain or near a node.
  bool evaluate(double t, std::span<const double> q, std::vector<double>& v, double& density) const {
    if (!psi_.model().contains(q)) return false;
    const auto coefficients = evolved(psi_, t);
    const FieldJet jet = evaluate_jet(psi_.spectrum(), coefficients, q);
    density = std::norm(jet.value);
    if (!(density >= node_density_) || density == 0.0) return false;
    v.resize(q.size());
    for (std::size_t j = 0; j < q.size(); ++j) {
      v[j] = psi_.model().hbar() / masses_[j] * (std::conj(jet.value) * jet.gradient[j]).imag() /
             density;
    }
    return true;
  }

private:
  const WaveFunction& psi_;
  std::vector<double> masses_;
  double node_density_;
};

double wrap_angle(double q) {
  const double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(q, two_pi);
  if (r < 0.0) r += two_pi;
  return r;
}

}  // namespace

std::string to_string(TrajectoryStatus status) {
  switch (status) {
    case TrajectoryStatus::completed: return "completed";
    case TrajectoryStatus::node_abort: return "node-abort";
    case TrajectoryStatus::step_floor_abort: return "step-floor-abort";
  }
  return "?";
}

VelocitySample velocity(const WaveFunction& psi, std::span<const double> q,
                        std::span<const double> masses, double node_threshold) {
  const auto& model = psi.model();
  model.require_point(q);
  const auto mass = coordinate_masses(model, masses);
  const FieldJet jet = evaluate_jet(psi.spectrum(), psi.coefficients(), q);
  const double density = std::norm(jet.value);
  if (!(density >= node_threshold * mean_density(psi)) || density == 0.0) {
    throw NodeError("wave function has a node near the requested point",
                    std::vector<double>(q.begin(), q.end()), density);
  }
  VelocitySample sample{std::vector<double>(q.begin(), q.end()), std::vector<double>(q.size()),
                        density};
  for (std::size_t j = 0; j < q.size(); ++j) {
    sample.velocity[j] =
        model.hbar() / mass[j] * (std::conj(jet.value) * jet.gradient[j]).imag() / density;
  }
  return sample;
}

WaveFunction evolve_coefficients(const WaveFunction& psi, double t) {
  if (!std::isfinite(t)) throw InvalidParameter("evolution time must be finite");
  if (t == 0.0) return psi;
  WaveFunction out(psi.spectrum_ptr(), evolved(psi, t),
                   psi.provenance() == Provenance::gap ? Provenance::derived : psi.provenance());
  if (psi.seed()) out.with_seed(*psi.seed());
  return out;
}

Trajectory integrate_trajectory(const WaveFunction& psi, std::span<const double> q0,
                                std::span<const double> t_grid, std::span<const double> masses,
                                TrajectoryOptions options) {
  const auto& model = psi.model();
  model.require_point(q0);
  if (t_grid.empty()) throw InvalidParameter("time grid is empty");
  for (std::size_t k = 1; k < t_grid.size(); ++k) {
    if (!(t_grid[k] > t_grid[k - 1])) throw InvalidParameter("time grid must be increasing");
  }
  if (!(options.step_tolerance > 0.0) || !(options.min_step > 0.0) ||
      !(options.initial_step >= options.min_step)) {
    throw InvalidParameter("invalid trajectory tolerances");
  }

  const bool periodic = model.kind() != ModelKind::box;
  const VelocityField field(psi, masses, options.node_threshold);
  const std::size_t dims = q0.size();

  Trajectory trajectory;
  trajectory.seed = psi.seed();
  trajectory.spectrum_hash = psi.spectrum().hash();

  std::vector<double> y(q0.begin(), q0.end());
  double t = t_grid.front();
  std::vector<double> v;
  double density = 0.0;
  if (!field.evaluate(t, y, v, density)) {
    throw NodeError("trajectory starts at a node", y, density);
  }
  trajectory.min_density = density;

  auto record = [&](double step) {
    TrajectoryState state{y, t, density, step};
    if (periodic) state.q[0] = wrap_angle(state.q[0]);
    trajectory.states.push_back(std::move(state));
  };
  record(0.0);

  std::vector<std::vector<double>> k(6, std::vector<double>(dims));
  std::vector<double> stage(dims), y4(dims), y5(dims);
  double h = std::min(options.initial_step, options.max_step);
  std::size_t steps = 0;

  for (std::size_t target = 1; target < t_grid.size(); ++target) {
    const double t_end = t_grid[target];
    double last_step = 0.0;
    while (t < t_end) {
      if (++steps > options.max_steps) {
        trajectory.status = TrajectoryStatus::step_floor_abort;
        trajectory.message = "step budget exhausted";
        return trajectory;
      }
      const double remaining = t_end - t;
      const bool final_step = remaining <= h * (1.0 + 1e-9);
      const double step = final_step ? remaining : h;

      bool node_hit = false;
      for (int s = 0; s < 6 && !node_hit; ++s) {
        for (std::size_t j = 0; j < dims; ++j) {
          double acc = y[j];
          for (int r = 0; r < s; ++r) acc += step * kA[s][r] * k[r][j];
          stage[j] = acc;
        }
        double stage_density = 0.0;
        if (!field.evaluate(t + kC[s] * step, stage, k[s], stage_density)) {
          node_hit = true;
        } else {
          trajectory.min_density = std::min(trajectory.min_density, stage_density);
        }
      }

      double error = 0.0;
      if (!node_hit) {
        for (std::size_t j = 0; j < dims; ++j) {
          double s4 = 0.0, s5 = 0.0;
          for (int s = 0; s < 6; ++s) {
            s4 += kB4[s] * k[s][j];
            s5 += kB5[s] * k[s][j];
          }
          y4[j] = y[j] + step * s4;
          y5[j] = y[j] + step * s5;
          error = std::max(error, std::abs(y5[j] - y4[j]));
        }
        double end_density = 0.0;
        std::vector<double> scratch;
        if (!field.evaluate(t + step, y4, scratch, end_density)) node_hit = true;
      }

      if (node_hit) {
        ++trajectory.rejected_steps;
        h = 0.5 * step;
        if (h < options.min_step) {
          trajectory.status = TrajectoryStatus::node_abort;
          trajectory.message = "step floor reached near a node at t = " + std::to_string(t);
          return trajectory;
        }
        continue;
      }

      if (error <= options.step_tolerance) {
        t = final_step ? t_end : t + step;
        y = y4;
        ++trajectory.accepted_steps;
        last_step = step;
        field.evaluate(t, y, v, density);
        trajectory.min_density = std::min(trajectory.min_density, density);
      } else {
        ++trajectory.rejected_steps;
      }
      const double factor =
          error == 0.0 ? 4.0
                       : std::clamp(0.9 * std::pow(options.step_tolerance / error, 0.2), 0.1, 4.0);
      const double proposal = std::min(options.max_step, step * factor);
      // Keep the step found before clipping to the output time.
      h = final_step && error <= options.step_tolerance ? std::max(h, proposal) : proposal;
      h = std::min(h, options.max_step);
      if (h < options.min_step) {
        trajectory.status = TrajectoryStatus::step_floor_abort;
        trajectory.message = "error control drove the step below the floor at t = " +
                             std::to_string(t);
        return trajectory;
      }
    }
    record(last_step);
  }
  return trajectory;
}

}  // namespace gapthermal
