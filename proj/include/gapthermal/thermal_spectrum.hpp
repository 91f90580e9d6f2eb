#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "gapthermal/spectral_model.hpp"

namespace gapthermal {

/// Default tail mass for thermalize().  Small enough that sums weighted by
/// sqrt(p_n) (which decay like the square root of the tail) stay stable to
/// 1e-8 under cutoff doubling.
inline constexpr double kDefaultTailMass = 1e-20;

/// Default budget on the number of retained modes.
inline constexpr std::size_t kDefaultModeBudget = 4'000'000;

struct Mode {
  ModeIndex index;
  double energy;
  /// Boltzmann weight p_n, renormalized over the retained modes.
  double weight;
};

/// Truncated canonical density matrix rho_beta = e^{-beta H} / Z in the
/// eigenbasis of a SpectralModel.  Immutable after construction.
class ThermalSpectrum {
public:
  const SpectralModel& model() const noexcept { return model_; }
  double beta() const noexcept { return beta_; }
  std::span<const Mode> modes() const noexcept { return modes_; }
  const Mode& mode(std::size_t i) const { return modes_.at(i); }
  std::size_t size() const noexcept { return modes_.size(); }

  /// Sum of e^{-beta E_n} over retained modes.
  double partition_sum() const noexcept { return partition_sum_; }
  /// Analytic upper bound on the Boltzmann mass of discarded modes.
  double tail_bound() const noexcept { return tail_bound_; }
  /// Requested relative tail mass (0 for explicit cutoffs and custom spectra).
  double tail_mass() const noexcept { return tail_mass_; }
  /// Retained modes satisfy ||n|| <= cutoff; -1 for custom spectra.
  int cutoff() const noexcept { return cutoff_; }
  /// Constant E_0 with H = -(1/beta) log rho + E_0 on the retained modes.
  double energy_offset() const noexcept { return energy_offset_; }

  std::optional<std::size_t> find(const ModeIndex& index) const;
  /// FNV-1a hash over the canonical mode list (indices, energies, weights).
  std::uint64_t hash() const noexcept { return hash_; }

private:
  friend class SpectrumBuilder;
  ThermalSpectrum() = default;

  SpectralModel model_ = SpectralModel::circle();
  double beta_ = 1.0;
  std::vector<Mode> modes_;
  std::map<ModeIndex, std::size_t> lookup_;
  double partition_sum_ = 0.0;
  double tail_bound_ = 0.0;
  double tail_mass_ = 0.0;
  int cutoff_ = -1;
  double energy_offset_ = 0.0;
  std::uint64_t hash_ = 0;
};

using SpectrumPtr = std::shared_ptr<const ThermalSpectrum>;

/// Retains all modes with ||n|| <= N*, N* the smallest radius whose analytic
/// Gaussian tail bound is at most tail_mass * Z_trunc.
SpectrumPtr thermalize(const SpectralModel& model, double beta,
                       double tail_mass = kDefaultTailMass,
                       std::size_t mode_budget = kDefaultModeBudget);

/// Retains all modes with ||n|| <= cutoff (used for cutoff-doubling checks).
SpectrumPtr thermalize_to_cutoff(const SpectralModel& model, double beta, int cutoff,
                                 std::size_t mode_budget = kDefaultModeBudget);

/// Upper bound on sum_{||n|| > radius} e^{-beta E_n} over the model's
/// unsymmetrized index set.  Symmetry sectors are bounded by the same value.
double gaussian_tail_bound(const SpectralModel& model, double beta, int radius);

struct CustomWeight {
  int label;
  double weight;
  /// Defaults to hbar^2 n^2 / 2m on the circle basis and to -log p otherwise.
  std::optional<double> energy;
};

struct CustomModel {
  SpectralModel model;
  SpectrumPtr spectrum;
};

/// Finite spectrum given directly by its weights.  Weights must be
/// nonnegative and sum to 1 within 1e-12; zero weights are dropped.
CustomModel build_custom_model(std::span<const CustomWeight> weights,
                               CustomBasis basis = CustomBasis::abstract, double mass = 1.0,
                               double hbar = 1.0);

/// Position-space matrix element rho(q, q') of the truncated density matrix.
Complex kernel(const ThermalSpectrum& spectrum, std::span<const double> q,
               std::span<const double> q_prime);
Complex kernel(const ThermalSpectrum& spectrum, double q, double q_prime);

/// sum_n p_n |phi_n'(q)|^2, the mixed derivative d^2 rho / dq dq' on the
/// diagonal.  One-dimensional models only.
double kernel_mixed_derivative(const ThermalSpectrum& spectrum, double q);

/// The same spectrum restricted to ||n|| <= cutoff, weights renormalized.
SpectrumPtr restrict_to_cutoff(const ThermalSpectrum& spectrum, int cutoff);

}  // namespace gapthermal
