#include "gapthermal/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "gapthermal/errors.hpp"
#include "gapthermal/field.hpp"
#include "gapthermal/parallel.hpp"

namespace gapthermal {

namespace {

const double kHalfSqrtPi = 0.5 * std::sqrt(std::numbers::pi);

void require_norm(const SpectralModel& model) {
  if (!model.has_index_norm()) {
    throw UnsupportedModel("diagnostic needs mode indices with a norm (circle or box)");
  }
}

MonteCarloMean summarize(const std::vector<double>& values) {
  const double m = static_cast<double>(values.size());
  const double mean = std::accumulate(values.begin(), values.end(), 0.0) / m;
  double squares = 0.0;
  for (double v : values) squares += (v - mean) * (v - mean);
  const double variance = values.size() > 1 ? squares / (m - 1.0) : 0.0;
  return {mean, std::sqrt(variance / m), values.size()};
}

}  // namespace

double sobolev_sum(const WaveFunction& psi, int ell) {
  if (ell < 0) throw InvalidParameter("Sobolev order must be >= 0");
  const auto& model = psi.model();
  require_norm(model);
  const auto modes = psi.spectrum().modes();
  double sum = 0.0;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const double k = model.mode_norm(modes[i].index);
    sum += std::pow(k * k, ell) * std::norm(psi.coefficient(i));
  }
  return model.fourier_multiplicity() * sum;
}

double exp_weighted_sum(const WaveFunction& psi, double alpha) {
  if (!(alpha > 0.0)) throw InvalidParameter("strip half-width alpha must be positive");
  const auto& model = psi.model();
  require_norm(model);
  const auto modes = psi.spectrum().modes();
  double sum = 0.0;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    sum += std::exp(2.0 * alpha * model.mode_norm(modes[i].index)) * std::norm(psi.coefficient(i));
  }
  return model.fourier_multiplicity() * sum;
}

double spectral_domain_sum(const WaveFunction& psi, const std::function<double(double)>& f) {
  const auto modes = psi.spectrum().modes();
  double sum = 0.0;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const double p = modes[i].weight;
    const double value = p == 0.0 ? 0.0 : f(p);
    if (!std::isfinite(value)) {
      throw InvalidParameter("spectral function is not finite on a retained weight");
    }
    sum += value * value * std::norm(psi.coefficient(i));
  }
  return sum;
}

double domain_power_sum(const WaveFunction& psi, int ell) {
  if (ell < 1) throw InvalidParameter("domain power must be >= 1");
  const auto modes = psi.spectrum().modes();
  double sum = 0.0;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    sum += std::pow(modes[i].energy, 2 * ell) * std::norm(psi.coefficient(i));
  }
  return sum;
}

double analytic_vector_sum(const WaveFunction& psi, double epsilon) {
  if (!(epsilon > 0.0)) throw InvalidParameter("analytic-vector parameter must be positive");
  const auto modes = psi.spectrum().modes();
  double sum = 0.0;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    sum += std::exp(epsilon * std::abs(modes[i].energy)) * std::abs(psi.coefficient(i));
  }
  return sum;
}

std::function<double(double)> hamiltonian_power_function(const ThermalSpectrum& spectrum,
                                                         int ell) {
  const double beta = spectrum.beta();
  const double offset = spectrum.energy_offset();
  return [=](double x) { return x > 0.0 ? std::pow(-std::log(x) / beta + offset, ell) : 0.0; };
}

double expected_sum(const ThermalSpectrum& spectrum,
                    const std::function<double(const Mode&)>& weight) {
  double sum = 0.0;
  const auto modes = spectrum.modes();
  for (auto it = modes.rbegin(); it != modes.rend(); ++it) {
    const double w = weight(*it);
    if (!(w >= 0.0)) throw InvalidParameter("expected_sum weight must be nonnegative");
    sum += w * it->weight;
  }
  return sum;
}

double sobolev_expectation(const ThermalSpectrum& spectrum, int ell) {
  if (ell < 0) throw InvalidParameter("Sobolev order must be >= 0");
  const auto& model = spectrum.model();
  require_norm(model);
  return model.fourier_multiplicity() * expected_sum(spectrum, [&](const Mode& m) {
           const double k = model.mode_norm(m.index);
           return std::pow(k * k, ell);
         });
}

double exp_weighted_expectation(const ThermalSpectrum& spectrum, double alpha) {
  if (!(alpha > 0.0)) throw InvalidParameter("strip half-width alpha must be positive");
  const auto& model = spectrum.model();
  require_norm(model);
  return model.fourier_multiplicity() * expected_sum(spectrum, [&](const Mode& m) {
           return std::exp(2.0 * alpha * model.mode_norm(m.index));
         });
}

double domain_power_expectation(const ThermalSpectrum& spectrum, int ell) {
  if (ell < 1) throw InvalidParameter("domain power must be >= 1");
  return expected_sum(spectrum, [&](const Mode& m) { return std::pow(m.energy, 2 * ell); });
}

double analytic_vector_expectation(const ThermalSpectrum& spectrum, double epsilon) {
  if (!(epsilon > 0.0)) throw InvalidParameter("analytic-vector parameter must be positive");
  double sum = 0.0;
  const auto modes = spectrum.modes();
  for (auto it = modes.rbegin(); it != modes.rend(); ++it) {
    sum += std::exp(epsilon * std::abs(it->energy)) * std::sqrt(it->weight);
  }
  return kHalfSqrtPi * sum;
}

bool analytic_vector_in_regime(const ThermalSpectrum& spectrum, double epsilon) {
  return epsilon > 0.0 && epsilon < 0.5 * spectrum.beta();
}

double theorem1_condition(const ThermalSpectrum& spectrum, int ell) {
  if (ell < 0) throw InvalidParameter("derivative order must be >= 0");
  const auto& model = spectrum.model();
  double sum = 0.0;
  const auto modes = spectrum.modes();
  for (auto it = modes.rbegin(); it != modes.rend(); ++it) {
    sum += model.derivative_sup_bound(it->index, ell) * std::sqrt(it->weight);
  }
  return sum;
}

double theorem1_analytic_condition(const ThermalSpectrum& spectrum, double alpha) {
  if (!(alpha > 0.0)) throw InvalidParameter("continuation radius must be positive");
  const auto& model = spectrum.model();
  double sum = 0.0;
  const auto modes = spectrum.modes();
  for (auto it = modes.rbegin(); it != modes.rend(); ++it) {
    sum += model.continuation_sup_bound(it->index, alpha) * std::sqrt(it->weight);
  }
  return sum;
}

double gaussian_modulus_moment(double sigma) {
  if (!(sigma >= 0.0)) throw InvalidParameter("sigma must be >= 0");
  return kHalfSqrtPi * sigma;
}

MonteCarloMean sample_gaussian_modulus(double sigma, std::size_t samples, std::uint64_t seed) {
  if (!(sigma >= 0.0)) throw InvalidParameter("sigma must be >= 0");
  if (samples < 2) throw InvalidParameter("need at least two samples");
  std::vector<double> values(samples);
  parallel_for(samples, [&](std::size_t j) {
    CounterRng rng({seed, j});
    // |Z|^2 is exponential with mean sigma^2; the phase does not enter |Z|.
    values[j] = sigma * std::sqrt(-std::log(rng.uniform_open()));
  });
  return summarize(values);
}

MonteCarloMean sample_statistic(SamplerKind kind, const SpectrumPtr& spectrum, std::size_t samples,
                                std::uint64_t seed,
                                const std::function<double(const WaveFunction&)>& statistic) {
  if (samples < 2) throw InvalidParameter("need at least two samples");
  std::vector<double> values(samples);
  parallel_for(samples, [&](std::size_t j) {
    values[j] = statistic(sample(kind, spectrum, {seed, j}));
  });
  return summarize(values);
}

double increment_variance(const ThermalSpectrum& spectrum, double q, double dq) {
  const auto& model = spectrum.model();
  if (model.configuration_dimension() != 1) {
    throw UnsupportedModel("increment variance requires a one-dimensional model");
  }
  if (dq == 0.0 || !std::isfinite(dq)) throw InvalidParameter("dq must be nonzero and finite");
  const double shifted = q + dq;
  return kernel(spectrum, shifted, shifted).real() - 2.0 * kernel(spectrum, q, shifted).real() +
         kernel(spectrum, q, q).real();
}

HolderEstimate holder_fit(const SpectrumPtr& spectrum, double q, const std::vector<double>& dq_grid,
                          std::size_t samples, std::uint64_t seed) {
  const auto& model = spectrum->model();
  if (model.configuration_dimension() != 1) {
    throw UnsupportedModel("Hoelder fit requires a one-dimensional model");
  }
  if (samples < kMinHolderSamples) throw InvalidParameter("Hoelder fit needs at least 1000 samples");
  if (dq_grid.size() < 2) throw InvalidParameter("dq grid needs at least two points");
  for (std::size_t i = 0; i < dq_grid.size(); ++i) {
    if (!(dq_grid[i] > 0.0)) throw InvalidParameter("dq grid must be positive");
    if (i > 0 && !(dq_grid[i] < dq_grid[i - 1])) {
      throw InvalidParameter("dq grid must be strictly decreasing");
    }
  }
  if (dq_grid.front() / dq_grid.back() < 100.0 * (1.0 - 1e-12)) {
    throw InvalidParameter("dq grid must span at least two decades");
  }
  const double base[] = {q};
  model.require_point(base);
  for (double dq : dq_grid) {
    const double shifted[] = {q + dq};
    model.require_point(shifted);
  }

  const std::size_t points = dq_grid.size();
  std::vector<double> squares(samples * points);
  parallel_for(samples, [&](std::size_t j) {
    const WaveFunction psi = sample_g(spectrum, {seed, j});
    const Complex at_q = evaluate(psi, q);
    for (std::size_t k = 0; k < points; ++k) {
      squares[j * points + k] = std::norm(evaluate(psi, q + dq_grid[k]) - at_q);
    }
  });

  HolderEstimate estimate;
  estimate.dq_grid = dq_grid;
  estimate.samples = samples;
  estimate.rms_increments.assign(points, 0.0);
  for (std::size_t j = 0; j < samples; ++j) {
    for (std::size_t k = 0; k < points; ++k) estimate.rms_increments[k] += squares[j * points + k];
  }
  for (auto& r : estimate.rms_increments) r = std::sqrt(r / static_cast<double>(samples));

  if (std::any_of(estimate.rms_increments.begin(), estimate.rms_increments.end(),
                  [](double r) { return !(r > 0.0); })) {
    estimate.degenerate = true;
    return estimate;
  }
  double mean_x = 0.0, mean_y = 0.0;
  for (std::size_t k = 0; k < points; ++k) {
    mean_x += std::log(dq_grid[k]);
    mean_y += std::log(estimate.rms_increments[k]);
  }
  mean_x /= static_cast<double>(points);
  mean_y /= static_cast<double>(points);
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < points; ++k) {
    const double dx = std::log(dq_grid[k]) - mean_x;
    sxy += dx * (std::log(estimate.rms_increments[k]) - mean_y);
    sxx += dx * dx;
  }
  estimate.exponent = sxy / sxx;
  estimate.intercept = mean_y - estimate.exponent * mean_x;
  return estimate;
}

void DiagnosticsReport::add(const std::string& name, DiagnosticEntry entry) {
  if (!std::isfinite(entry.value) || entry.value < 0.0) {
    throw InternalError("diagnostic '" + name + "' is not a finite nonnegative value");
  }
  entries_.insert_or_assign(name, std::move(entry));
}

}  // namespace gapthermal
