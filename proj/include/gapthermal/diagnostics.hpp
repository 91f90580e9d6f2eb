#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gapthermal/rng.hpp"
#include "gapthermal/sampler.hpp"
#include "gapthermal/wave_function.hpp"

namespace gapthermal {

// ---------------------------------------------------------------------------
// Coefficient sums of a single wave function
// ---------------------------------------------------------------------------

/// sum_k ||k||^{2l} |c_k|^2 over the Fourier image.  On the circle the Fourier
/// and energy coefficients coincide; on the box every energy mode stands for
/// 2^{Nd} Fourier modes of equal modulus.
double sobolev_sum(const WaveFunction& psi, int ell);

/// sum_k e^{2 alpha ||k||} |c_k|^2 over the Fourier image.
double exp_weighted_sum(const WaveFunction& psi, double alpha);

/// sum_n f(p_n)^2 |c_n|^2.  f must be finite on every retained weight.
double spectral_domain_sum(const WaveFunction& psi, const std::function<double(double)>& f);

/// sum_n E_n^{2l} |c_n|^2 = ||H^l psi||^2 in the truncated model, l >= 1.
double domain_power_sum(const WaveFunction& psi, int ell);

/// sum_n e^{eps E_n} |c_n| (first power of the moduli).
double analytic_vector_sum(const WaveFunction& psi, double epsilon);

/// f(x) = (-(1/beta) log x + E_0)^l, so that f(rho) = H^l on the retained modes.
std::function<double(double)> hamiltonian_power_function(const ThermalSpectrum& spectrum, int ell);

// ---------------------------------------------------------------------------
// Spectrum-level sums and closed-form expectations
// ---------------------------------------------------------------------------

/// sum_n weight(n) p_n: the expectation of sum_n weight(n)|c_n|^2 under any
/// measure whose covariance is the spectrum's density matrix.
double expected_sum(const ThermalSpectrum& spectrum, const std::function<double(const Mode&)>& weight);

double sobolev_expectation(const ThermalSpectrum& spectrum, int ell);
double exp_weighted_expectation(const ThermalSpectrum& spectrum, double alpha);
double domain_power_expectation(const ThermalSpectrum& spectrum, int ell);

/// E_G sum_n e^{eps E_n}|c_n| = (sqrt(pi)/2) sum_n e^{eps E_n} sqrt(p_n).
double analytic_vector_expectation(const ThermalSpectrum& spectrum, double epsilon);

/// The sum over e^{eps E_n} |c_n| is only claimed finite for eps < beta / 2.
bool analytic_vector_in_regime(const ThermalSpectrum& spectrum, double epsilon);

/// sum_n ||grad^l phi_n||_inf sqrt(p_n).
double theorem1_condition(const ThermalSpectrum& spectrum, int ell);

/// sum_n ||phi_n|_K||_inf sqrt(p_n) with K the disk (strip) of radius alpha.
double theorem1_analytic_condition(const ThermalSpectrum& spectrum, double alpha);

/// E|Z| = (sqrt(pi)/2) sigma for a complex Gaussian with E|Z|^2 = sigma^2.
double gaussian_modulus_moment(double sigma);

struct MonteCarloMean {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t samples = 0;
};

/// Sample mean of |Z| over `samples` complex Gaussians with E|Z|^2 = sigma^2.
MonteCarloMean sample_gaussian_modulus(double sigma, std::size_t samples, std::uint64_t seed);

/// Mean and standard error of an arbitrary statistic over draws j = 0..M-1
/// of a sampler with RandomSeed{seed, j}.
MonteCarloMean sample_statistic(SamplerKind kind, const SpectrumPtr& spectrum, std::size_t samples,
                                std::uint64_t seed,
                                const std::function<double(const WaveFunction&)>& statistic);

// ---------------------------------------------------------------------------
// Increments and Hoelder fits (one-dimensional models)
// ---------------------------------------------------------------------------

/// E|psi(q+dq) - psi(q)|^2 = rho(q+dq, q+dq) - 2 Re rho(q, q+dq) + rho(q, q).
double increment_variance(const ThermalSpectrum& spectrum, double q, double dq);

struct HolderEstimate {
  /// Least-squares slope of log RMS increment against log dq.
  double exponent = 0.0;
  double intercept = 0.0;
  std::vector<double> dq_grid;
  std::vector<double> rms_increments;
  /// All increments vanished (e.g. the constant-eigenfunction model).
  bool degenerate = false;
  /// Reference constants of the sample-path bound K' dq^{p/2} |log dq|^{1+delta};
  /// recorded, not fitted.
  double variance_exponent = 2.0;
  double log_correction_delta = 0.0;
  std::size_t samples = 0;
};

inline constexpr std::size_t kMinHolderSamples = 1000;

/// Fits the Hoelder exponent of Psi^G at q from `samples` G draws.  The grid
/// must be strictly decreasing and span at least two decades.
HolderEstimate holder_fit(const SpectrumPtr& spectrum, double q, const std::vector<double>& dq_grid,
                          std::size_t samples, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Report
// ---------------------------------------------------------------------------

struct DiagnosticEntry {
  double value = 0.0;
  std::optional<double> expectation;
  std::optional<double> standard_error;
  std::map<std::string, double> parameters;
  std::map<std::string, bool> flags;
};

/// Named diagnostic results; values are finite and nonnegative.
class DiagnosticsReport {
public:
  void add(const std::string& name, DiagnosticEntry entry);
  const std::map<std::string, DiagnosticEntry>& entries() const noexcept { return entries_; }
  const DiagnosticEntry& at(const std::string& name) const { return entries_.at(name); }
  bool contains(const std::string& name) const { return entries_.contains(name); }

private:
  std::map<std::string, DiagnosticEntry> entries_;
};

}  // namespace gapthermal
