// Acceptance suite: one line per criterion, nonzero exit if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "gapthermal/bohmian.hpp"
#include "gapthermal/cli.hpp"
#include "gapthermal/diagnostics.hpp"
#include "gapthermal/errors.hpp"
#include "gapthermal/field.hpp"
#include "gapthermal/parallel.hpp"
#include "gapthermal/sampler.hpp"

using namespace gapthermal;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSqrtPi = 1.7724538509055160273;
constexpr double kBeta = 2.0;
constexpr int kOracleRange = 60;

// Tolerances.
constexpr double kStandardErrors = 5.0;
constexpr double kIncrementSlopeTolerance = 0.02;
constexpr double kHolderLow = 0.9, kHolderHigh = 1.1;
constexpr double kCutoffDoublingTolerance = 1e-8;
constexpr double kContinuationTolerance = 1e-6;
constexpr double kCauchyRiemannTolerance = 1e-5;
constexpr double kCauchyRiemannStep = 1e-5;
constexpr double kTrajectoryTolerance = 1e-8;
constexpr double kStationaryTolerance = 1e-12;
constexpr double kInvarianceUlps = 64.0;
constexpr double kChiSquare95With19Dof = 30.14352720564616;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* format, auto... args) {
  char buffer[512];
  std::snprintf(buffer, sizeof buffer, format, args...);
  return buffer;
}

// Independent Boltzmann sums on the circle at beta = 2 (E_n = n^2 / 2).
double circle_energy(int n) { return 0.5 * n * n; }

double circle_z() {
  double z = 0.0;
  for (int n = -kOracleRange; n <= kOracleRange; ++n) z += std::exp(-kBeta * circle_energy(n));
  return z;
}

double circle_expectation(const std::function<double(int)>& weight) {
  double sum = 0.0;
  for (int n = -kOracleRange; n <= kOracleRange; ++n) sum += weight(n) * std::exp(-kBeta * circle_energy(n));
  return sum / circle_z();
}

SpectrumPtr circle_spectrum() { return thermalize(SpectralModel::circle(), kBeta); }

Outcome within_se(const char* what, const MonteCarloMean& mc, double expected) {
  const double z = std::abs(mc.mean - expected) / mc.standard_error;
  return {z <= kStandardErrors, fmt("%s %.6g vs %.6g (%.2f SE)", what, mc.mean, expected, z)};
}

Outcome combine(const std::vector<Outcome>& parts) {
  Outcome out{true, ""};
  for (const auto& p : parts) {
    out.pass = out.pass && p.pass;
    if (!out.detail.empty()) out.detail += "; ";
    out.detail += p.detail;
  }
  return out;
}

// 1 -------------------------------------------------------------------------
Outcome gaussian_modulus() {
  const std::size_t m = 1'000'000;
  const auto mc = sample_gaussian_modulus(1.0, m, 101);
  const double expected = kSqrtPi / 2.0;
  const double tolerance = 5.0 * std::sqrt((4.0 - kPi) / kPi) / std::sqrt(double(m));
  const double diff = std::abs(mc.mean - expected);
  return {diff <= tolerance, fmt("E|Z| = %.6f vs %.6f, |diff| %.2e <= %.2e", mc.mean, expected, diff, tolerance)};
}

// 2 -------------------------------------------------------------------------
Outcome covariance() {
  const auto spec = circle_spectrum();
  const std::size_t m = 100'000;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < spec->size(); ++i) {
    for (std::size_t j = i + 1; j < spec->size(); ++j) pairs.emplace_back(i, j);
  }
  const auto est = estimate_covariance(SamplerKind::gap, spec, m, 202, pairs);
  double worst_z = 0.0, worst_off = 0.0;
  for (std::size_t i = 0; i < spec->size(); ++i) {
    const double p = std::exp(-kBeta * circle_energy(spec->mode(i).index[0])) / circle_z();
    if (est.standard_errors[i] > 0.0) {
      worst_z = std::max(worst_z, std::abs(est.diagonal[i] - p) / est.standard_errors[i]);
    } else if (est.diagonal[i] != p) {
      worst_z = std::numeric_limits<double>::infinity();
    }
  }
  for (const auto& o : est.off_diagonal) worst_off = std::max(worst_off, std::abs(o.value));
  const double bound = 5.0 / std::sqrt(double(m));
  return {worst_z <= kStandardErrors && worst_off <= bound,
          fmt("%zu modes, worst diagonal %.2f SE, worst off-diagonal %.2e <= %.2e", spec->size(), worst_z,
              worst_off, bound)};
}

// 3 -------------------------------------------------------------------------
Outcome ga_oracle() {
  const auto spec = circle_spectrum();
  const std::size_t m = 100'000;
  double closed = 1.0;
  for (int n = -kOracleRange; n <= kOracleRange; ++n) {
    const double p = std::exp(-kBeta * circle_energy(n)) / circle_z();
    closed += p * p;
  }
  const auto mixture = sample_statistic(SamplerKind::ga, spec, m, 303,
                                        [](const WaveFunction& psi) { return psi.norm_squared(); });
  // Reweighting G draws by ||psi||^2: E_GA X = E_G[X ||psi||^2] / E_G ||psi||^2 with X = ||psi||^2.
  std::vector<double> x(m), y(m);
  parallel_for(m, [&](std::size_t j) {
    const double n2 = sample_g(spec, {304, j}).norm_squared();
    x[j] = n2 * n2;
    y[j] = n2;
  });
  double mx = 0.0, my = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    mx += x[j];
    my += y[j];
  }
  mx /= m;
  my /= m;
  const double ratio = mx / my;
  double residual = 0.0;
  for (std::size_t j = 0; j < m; ++j) residual += std::pow(x[j] - ratio * y[j], 2);
  const double ratio_se = std::sqrt(residual / (m - 1.0) / m) / my;
  const double combined = std::hypot(mixture.standard_error, ratio_se);
  const double z = std::abs(mixture.mean - ratio) / combined;
  const double z_closed = std::abs(mixture.mean - closed) / mixture.standard_error;
  return {z <= kStandardErrors && z_closed <= kStandardErrors,
          fmt("mixture %.6f, reweighted G %.6f (%.2f combined SE), 1 + sum p^2 = %.6f (%.2f SE)", mixture.mean,
              ratio, z, closed, z_closed)};
}

// 4 -------------------------------------------------------------------------
Outcome sobolev() {
  const auto spec = circle_spectrum();
  std::vector<Outcome> parts;
  for (int ell : {1, 2, 3}) {
    const auto mc = sample_statistic(SamplerKind::g, spec, 10'000, 404,
                                     [ell](const WaveFunction& psi) { return sobolev_sum(psi, ell); });
    const double expected = circle_expectation([ell](int n) { return std::pow(double(n) * n, ell); });
    parts.push_back(within_se(fmt("l=%d:", ell).c_str(), mc, expected));
  }
  return combine(parts);
}

// 5 -------------------------------------------------------------------------
Outcome exp_weighted() {
  const auto spec = circle_spectrum();
  std::vector<Outcome> parts;
  for (double alpha : {0.25, 0.5}) {
    const auto mc = sample_statistic(SamplerKind::g, spec, 10'000, 505,
                                     [alpha](const WaveFunction& psi) { return exp_weighted_sum(psi, alpha); });
    const double expected = circle_expectation([alpha](int n) { return std::exp(2.0 * alpha * std::abs(n)); });
    parts.push_back(within_se(fmt("alpha=%.2f:", alpha).c_str(), mc, expected));
  }
  return combine(parts);
}

// 6 -------------------------------------------------------------------------
Outcome increments() {
  const auto spec = circle_spectrum();
  const double q = 1.0;
  std::vector<Outcome> parts;
  for (double dq : {1e-1, 1e-2, 1e-3}) {
    const auto mc = sample_statistic(SamplerKind::g, spec, 10'000, 606, [q, dq](const WaveFunction& psi) {
      return std::norm(evaluate(psi, q + dq) - evaluate(psi, q));
    });
    const double oracle =
        circle_expectation([dq](int n) { return (2.0 - 2.0 * std::cos(n * dq)) / (2.0 * kPi); });
    parts.push_back(within_se(fmt("dq=%.0e:", dq).c_str(), mc, oracle));
    const double library = increment_variance(*spec, q, dq);
    const double rel = std::abs(library - oracle) / oracle;
    parts.push_back({rel < 1e-6, fmt("kernel formula rel. error %.1e", rel)});
  }
  const double dq = 1e-3;
  const double slope = increment_variance(*spec, q, dq) / (dq * dq);
  const double limit = circle_expectation([](int n) { return double(n) * n / (2.0 * kPi); });
  const double rel = std::abs(slope - limit) / limit;
  parts.push_back({rel <= kIncrementSlopeTolerance,
                   fmt("var/dq^2 at 1e-3 = %.6g vs sum p n^2/2pi = %.6g (%.1e rel)", slope, limit, rel)});
  return combine(parts);
}

// 7 -------------------------------------------------------------------------
Outcome holder() {
  const auto spec = circle_spectrum();
  const std::vector<double> grid = {1e-2, std::pow(10.0, -2.5), 1e-3, std::pow(10.0, -3.5), 1e-4};
  const auto fit = holder_fit(spec, 1.0, grid, 10'000, 707);
  return {!fit.degenerate && fit.exponent >= kHolderLow && fit.exponent <= kHolderHigh,
          fmt("fitted exponent %.5f over dq in [1e-4, 1e-2]", fit.exponent)};
}

// 8 -------------------------------------------------------------------------
Outcome domain_sums() {
  const auto spec = circle_spectrum();
  std::vector<Outcome> parts;
  for (int ell : {1, 2}) {
    const auto mc = sample_statistic(SamplerKind::gap, spec, 10'000, 808,
                                     [ell](const WaveFunction& psi) { return domain_power_sum(psi, ell); });
    const double expected = circle_expectation([ell](int n) { return std::pow(circle_energy(n), 2 * ell); });
    parts.push_back(within_se(fmt("||H^%d psi||^2:", ell).c_str(), mc, expected));
  }
  const double eps = kBeta / 4.0;
  const auto mc = sample_statistic(SamplerKind::g, spec, 10'000, 809,
                                   [eps](const WaveFunction& psi) { return analytic_vector_sum(psi, eps); });
  double sum = 0.0;
  for (int n = -kOracleRange; n <= kOracleRange; ++n) sum += std::exp((eps - kBeta / 2.0) * circle_energy(n));
  const double expected = kSqrtPi / (2.0 * std::sqrt(circle_z())) * sum;
  parts.push_back(within_se("analytic vector (eps = beta/4):", mc, expected));
  return combine(parts);
}

// 9 -------------------------------------------------------------------------
Outcome cutoff_doubling() {
  const auto spec = circle_spectrum();
  const auto doubled = thermalize_to_cutoff(spec->model(), kBeta, 2 * spec->cutoff());
  double worst = 0.0;
  for (int ell = 0; ell <= 4; ++ell) {
    const double a = theorem1_condition(*spec, ell), b = theorem1_condition(*doubled, ell);
    worst = std::max(worst, std::abs(a - b) / b);
  }
  const double a = theorem1_analytic_condition(*spec, 0.5), b = theorem1_analytic_condition(*doubled, 0.5);
  const double analytic = std::abs(a - b) / b;
  return {worst < kCutoffDoublingTolerance && analytic < kCutoffDoublingTolerance,
          fmt("cutoff %d -> %d: worst l in 0..4 change %.1e, alpha=0.5 change %.1e", spec->cutoff(),
              doubled->cutoff(), worst, analytic)};
}

// 10 ------------------------------------------------------------------------
Outcome continuation() {
  const int cutoff = circle_spectrum()->cutoff();
  const auto wide = thermalize_to_cutoff(SpectralModel::circle(), kBeta, 2 * cutoff);
  double worst_diff = 0.0, worst_cr = 0.0;
  const double h = kCauchyRiemannStep;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto psi = sample_gap(wide, {1010, s});
    const auto narrow = truncate(psi, cutoff);
    for (int k = 0; k < 8; ++k) {
      for (double y : {-0.1, 0.1}) {
        const Complex z(2.0 * kPi * k / 8.0 + 0.3, y);
        const Complex full = evaluate_complex(psi, z).value;
        worst_diff = std::max(worst_diff, std::abs(full - evaluate_complex(narrow, z).value));
        const Complex dx = (evaluate_complex(psi, z + h).value - evaluate_complex(psi, z - h).value) / (2.0 * h);
        const Complex dy = (evaluate_complex(psi, z + Complex(0, h)).value -
                            evaluate_complex(psi, z - Complex(0, h)).value) /
                           (2.0 * h);
        worst_cr = std::max(worst_cr, std::abs(dx + Complex(0, 1) * dy) / std::abs(dx));
      }
    }
  }
  return {worst_diff < kContinuationTolerance && worst_cr < kCauchyRiemannTolerance,
          fmt("|Im z| = 0.1: N* vs 2N* max diff %.1e, Cauchy-Riemann residual %.1e", worst_diff, worst_cr)};
}

// 11 ------------------------------------------------------------------------
Outcome symmetrization() {
  std::vector<Outcome> parts;
  double worst_idem = 0.0;
  bool exclusion = true;
  for (int particles : {2, 3}) {
    const auto spec = thermalize(SpectralModel::box(particles, 1), 1.0);
    for (std::uint64_t trial = 0; trial < 5; ++trial) {
      CounterRng rng({1111 + static_cast<std::uint64_t>(particles), trial});
      std::vector<Complex> c(spec->size());
      double scale = 0.0;
      for (auto& x : c) {
        x = Complex(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0);
        scale = std::max(scale, std::abs(x));
      }
      const WaveFunction psi(spec, c);
      for (Symmetry sector : {Symmetry::symmetric, Symmetry::antisymmetric}) {
        const auto once = symmetrize(psi, sector);
        const auto twice = symmetrize(once, sector);
        for (std::size_t i = 0; i < spec->size(); ++i) {
          worst_idem = std::max(worst_idem, std::abs(once.coefficient(i) - twice.coefficient(i)) / scale);
          const auto& n = spec->mode(i).index;
          const bool repeated = n[0] == n[1] || (particles == 3 && (n[1] == n[2] || n[0] == n[2]));
          if (sector == Symmetry::antisymmetric && repeated && once.coefficient(i) != Complex(0.0)) {
            exclusion = false;
          }
        }
      }
    }
    const auto fermions = thermalize(SpectralModel::box(particles, 1, 1.0, 1.0, Symmetry::antisymmetric), 1.0);
    for (const auto& mode : fermions->modes()) {
      for (int j = 1; j < particles; ++j) exclusion = exclusion && mode.index[j - 1] < mode.index[j];
    }
  }
  const double machine = kInvarianceUlps * std::numeric_limits<double>::epsilon();
  parts.push_back({worst_idem <= machine, fmt("|P^2 - P| %.1e", worst_idem)});
  parts.push_back({exclusion, exclusion ? "(k,k) fermion modes vanish" : "(k,k) fermion mode survived"});

  // Direct sector sampling against projecting unsymmetrized draws.
  const double beta = 1.0;
  const std::size_t m = 10'000;
  const auto sector = thermalize(SpectralModel::box(2, 1, 1.0, 1.0, Symmetry::symmetric), beta);
  const auto plain = thermalize_to_cutoff(SpectralModel::box(2, 1), beta, sector->cutoff());
  const std::size_t k = sector->size();
  std::vector<double> direct(m * k), projected(m * k);
  parallel_for(m, [&](std::size_t j) {
    const auto a = sample_gap(sector, {1120, j});
    const auto b = project_to_sector(sample_g(plain, {1121, j}), sector);
    for (std::size_t s = 0; s < k; ++s) {
      direct[j * k + s] = std::norm(a.coefficient(s));
      projected[j * k + s] = std::norm(b.coefficient(s));
    }
  });
  std::vector<double> norms(m, 0.0);
  double mean_norm = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t s = 0; s < k; ++s) norms[j] += projected[j * k + s];
    mean_norm += norms[j] / m;
  }
  double worst = 0.0;
  for (std::size_t s = 0; s < k; ++s) {
    double d_mean = 0.0, p_mean = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      d_mean += direct[j * k + s] / m;
      p_mean += projected[j * k + s] / m;
    }
    const double ratio = p_mean / mean_norm;
    double d_var = 0.0, r_var = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      d_var += std::pow(direct[j * k + s] - d_mean, 2);
      r_var += std::pow(projected[j * k + s] - ratio * norms[j], 2);
    }
    const double se = std::hypot(std::sqrt(d_var / (m - 1.0) / m), std::sqrt(r_var / (m - 1.0) / m) / mean_norm);
    if (se > 0.0) worst = std::max(worst, std::abs(d_mean - ratio) / se);
  }
  parts.push_back({worst <= kStandardErrors, fmt("%zu sector modes, direct vs projected worst %.2f SE", k, worst)});
  return combine(parts);
}

// 12 ------------------------------------------------------------------------
double circle_distance(double a, double b) {
  const double d = std::fmod(std::abs(a - b), 2.0 * kPi);
  return std::min(d, 2.0 * kPi - d);
}

Outcome bohmian() {
  std::vector<Outcome> parts;
  const auto spec = circle_spectrum();

  const auto plane = WaveFunction::eigenstate(spec, *spec->find({2}));
  std::vector<double> grid;
  for (int t = 0; t <= 10; ++t) grid.push_back(t);
  const double q0[] = {0.5};
  const auto line = integrate_trajectory(plane, q0, grid);
  double worst_line = line.status == TrajectoryStatus::completed ? 0.0 : 1.0;
  for (const auto& s : line.states) worst_line = std::max(worst_line, circle_distance(s.q[0], 0.5 + 2.0 * s.t));
  parts.push_back({worst_line <= kTrajectoryTolerance, fmt("plane wave deviation %.1e", worst_line)});

  const auto box = thermalize(SpectralModel::box(1, 1), 1.0);
  const auto real_state = WaveFunction::eigenstate(box, *box->find({3}));
  const double r0[] = {1.0};
  const double rgrid[] = {0.0, 10.0};
  const auto still = integrate_trajectory(real_state, r0, rgrid);
  const double drift = std::abs(still.states.back().q[0] - 1.0);
  parts.push_back({still.status == TrajectoryStatus::completed && drift <= kStationaryTolerance,
                   fmt("real eigenstate drift %.1e", drift)});

  double worst_inv = 0.0;
  const auto pair_spec = thermalize(SpectralModel::box(2, 1), 1.0);
  for (const auto& psi : {sample_gap(spec, {1201, 0}), sample_gap(pair_spec, {1201, 1})}) {
    for (double factor : {0.3, 7.0}) {
      for (double phase : {0.4, 2.9}) {
        auto c = psi.coefficients();
        for (auto& x : c) x *= std::polar(factor, phase);
        const WaveFunction other(psi.spectrum_ptr(), c);
        double scale = 0.0, error = 0.0;
        for (int p = 0; p < 10; ++p) {
          std::vector<double> q(psi.model().configuration_dimension());
          for (std::size_t j = 0; j < q.size(); ++j) q[j] = 0.15 + 0.28 * p + 0.11 * j;
          const auto a = velocity(psi, q).velocity;
          const auto b = velocity(other, q).velocity;
          for (std::size_t j = 0; j < q.size(); ++j) {
            scale = std::max(scale, std::abs(a[j]));
            error = std::max(error, std::abs(a[j] - b[j]));
          }
        }
        worst_inv = std::max(worst_inv, error / scale);
      }
    }
  }
  const double machine = kInvarianceUlps * std::numeric_limits<double>::epsilon();
  parts.push_back({worst_inv <= machine, fmt("phase/scale invariance %.1e", worst_inv)});

  // Equivariance: start 10^4 points from |psi_0|^2, compare positions at t = 1 with |psi_1|^2.
  const auto psi = sample_gap(spec, {1202, 0});
  const int cells = 4096, bins = 20;
  const std::size_t count = 10'000;
  const double width = 2.0 * kPi / cells;
  std::vector<double> cdf(cells + 1, 0.0);
  for (int c = 0; c < cells; ++c) cdf[c + 1] = cdf[c] + std::norm(evaluate(psi, (c + 0.5) * width));
  for (auto& v : cdf) v /= cdf.back();
  std::vector<double> start(count);
  CounterRng rng({1203, 0});
  for (auto& x : start) {
    const double u = rng.uniform();
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const int c = std::clamp(static_cast<int>(it - cdf.begin()) - 1, 0, cells - 1);
    x = (c + (u - cdf[c]) / (cdf[c + 1] - cdf[c])) * width;
  }
  const double tgrid[] = {0.0, 1.0};
  std::vector<double> finish(count);
  std::vector<int> aborted(count, 0);
  parallel_for(count, [&](std::size_t i) {
    const double qi[] = {start[i]};
    const auto traj = integrate_trajectory(psi, qi, tgrid);
    aborted[i] = traj.status != TrajectoryStatus::completed;
    finish[i] = traj.states.back().q[0];
  });
  const auto later = evolve_coefficients(psi, 1.0);
  std::vector<double> expected(bins, 0.0), observed(bins, 0.0);
  double total = 0.0;
  for (int c = 0; c < cells; ++c) {
    const double w = std::norm(evaluate(later, (c + 0.5) * width));
    expected[c * bins / cells] += w;
    total += w;
  }
  for (auto& e : expected) e *= count / total;
  for (double q : finish) observed[std::min(bins - 1, static_cast<int>(q / (2.0 * kPi) * bins))] += 1.0;
  double chi2 = 0.0;
  for (int b = 0; b < bins; ++b) chi2 += std::pow(observed[b] - expected[b], 2) / expected[b];
  int failures = 0;
  for (int a : aborted) failures += a;
  parts.push_back({failures == 0 && chi2 < kChiSquare95With19Dof,
                   fmt("equivariance chi2 %.2f < %.2f (19 dof), %d aborted", chi2, kChiSquare95With19Dof, failures)});
  return combine(parts);
}

// 13 ------------------------------------------------------------------------
std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv = {"gap-thermal"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  return cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
}

Outcome determinism() {
  const auto root = fs::temp_directory_path() / "gap_thermal_acceptance_determinism";
  fs::remove_all(root);
  fs::create_directories(root);
  const auto out = root / "out";
  const std::vector<std::string> configs = {
      R"({"model":{"kind":"circle"},"beta":2.0,"samples":4,"seed":17,"sampler":"GAP",
          "bohm":{"q0":[[0.5],[2.0],[4.0]],"t_grid":[0.0,0.5,1.0]}})",
      R"({"model":{"kind":"box","N":2,"d":1,"symmetry":"antisymmetric"},"beta":1.0,"samples":3,"seed":5,
          "sampler":"GA","bohm":{"q0":[[0.7,2.1]],"t_grid":[0.0,0.25]}})"};
  std::size_t compared = 0;
  bool identical = true;
  for (std::size_t c = 0; c < configs.size(); ++c) {
    const auto path = root / ("config" + std::to_string(c) + ".json");
    std::ofstream(path) << configs[c];
    std::vector<std::vector<std::pair<std::string, std::string>>> runs;
    for (int repeat = 0; repeat < 2; ++repeat) {
      fs::remove_all(out);
      for (const char* cmd : {"sample", "bohm"}) {
        if (run_cli({cmd, "--config", path.string(), "--out", out.string()}) != 0) return {false, "CLI run failed"};
      }
      std::vector<std::pair<std::string, std::string>> files;
      for (const auto& entry : fs::directory_iterator(out)) {
        if (entry.path().extension() == ".csv") files.emplace_back(entry.path().filename().string(), slurp(entry.path()));
      }
      std::sort(files.begin(), files.end());
      runs.push_back(std::move(files));
    }
    identical = identical && runs[0] == runs[1] && !runs[0].empty();
    compared += runs[0].size();
  }
  fs::remove_all(root);
  return {identical, fmt("%zu coefficient/trajectory files byte-identical across repeated runs: %s", compared,
                         identical ? "yes" : "no")};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    Outcome (*run)();
  };
  const std::vector<Criterion> criteria = {
      {3, "GA size-bias oracle", ga_oracle},
      {1, "Gaussian modulus moment", gaussian_modulus},
      {2, "covariance reproduction", covariance},
      {4, "Sobolev expectation", sobolev},
      {5, "exponential-weight expectation", exp_weighted},
      {6, "increment variance", increments},
      {7, "Hoelder fit", holder},
      {8, "domain sums", domain_sums},
      {9, "smoothness condition sums under cutoff doubling", cutoff_doubling},
      {10, "analytic continuation", continuation},
      {11, "symmetrization", symmetrization},
      {12, "Bohmian trajectories", bohmian},
      {13, "determinism", determinism},
  };
  // Criterion 3 gates every other GA/GAP-based check.
  const std::vector<int> uses_mixture = {2, 8, 10, 11, 12, 13};
  std::vector<std::pair<int, std::string>> lines;
  bool gate = true;
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    if (!gate && std::find(uses_mixture.begin(), uses_mixture.end(), c.id) != uses_mixture.end()) {
      outcome = {false, "skipped: GA mixture oracle failed"};
    } else {
      try {
        outcome = c.run();
      } catch (const std::exception& e) {
        outcome = {false, std::string("exception: ") + e.what()};
      }
    }
    if (c.id == 3) gate = outcome.pass;
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !outcome.pass;
    lines.emplace_back(c.id, fmt("[%s] %2d %s: ", outcome.pass ? "PASS" : "FAIL", c.id, c.name) + outcome.detail +
                                 fmt(" (%.1fs)", seconds));
  }
  std::sort(lines.begin(), lines.end());
  for (const auto& [id, text] : lines) std::printf("%s\n", text.c_str());
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
