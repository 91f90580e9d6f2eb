#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gapthermal/rng.hpp"
#include "gapthermal/thermal_spectrum.hpp"

namespace gapthermal {

/// Which measure produced a wave function.
enum class Provenance { g, ga, gap, derived };

std::string to_string(Provenance provenance);
Provenance parse_provenance(const std::string& text);

/// Finite expansion psi = sum_n c_n phi_n over the retained modes of a
/// thermal spectrum.  Coefficient i belongs to spectrum->mode(i).
class WaveFunction {
public:
  WaveFunction(SpectrumPtr spectrum, std::vector<Complex> coefficients,
               Provenance provenance = Provenance::derived);

  /// Unit coefficient on one mode.
  static WaveFunction eigenstate(SpectrumPtr spectrum, std::size_t mode);

  const ThermalSpectrum& spectrum() const noexcept { return *spectrum_; }
  const SpectrumPtr& spectrum_ptr() const noexcept { return spectrum_; }
  const SpectralModel& model() const noexcept { return spectrum_->model(); }
  const std::vector<Complex>& coefficients() const noexcept { return coefficients_; }
  Complex coefficient(std::size_t i) const { return coefficients_.at(i); }
  std::size_t size() const noexcept { return coefficients_.size(); }
  Provenance provenance() const noexcept { return provenance_; }

  /// Seed the sample was drawn from, when it came from a sampler.
  const std::optional<RandomSeed>& seed() const noexcept { return seed_; }
  /// Mode singled out by the size-biased mixture (GA and GAP draws).
  const std::optional<std::size_t>& size_biased_mode() const noexcept { return size_biased_mode_; }

  WaveFunction& with_seed(RandomSeed seed) {
    seed_ = seed;
    return *this;
  }
  WaveFunction& with_size_biased_mode(std::size_t mode) {
    size_biased_mode_ = mode;
    return *this;
  }

  double norm_squared() const noexcept;
  double norm() const noexcept;

private:
  SpectrumPtr spectrum_;
  std::vector<Complex> coefficients_;
  Provenance provenance_;
  std::optional<RandomSeed> seed_;
  std::optional<std::size_t> size_biased_mode_;
};

}  // namespace gapthermal
