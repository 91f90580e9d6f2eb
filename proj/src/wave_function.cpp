#include "gapthermal/wave_function.hpp"

#include <cmath>

#include "gapthermal/errors.hpp"

namespace gapthermal {

std::string to_string(Provenance provenance) {
  switch (provenance) {
    case Provenance::g: return "G";
    case Provenance::ga: return "GA";
    case Provenance::gap: return "GAP";
    case Provenance::derived: return "derived";
  }
  return "?";
}

Provenance parse_provenance(const std::string& text) {
  if (text == "G") return Provenance::g;
  if (text == "GA") return Provenance::ga;
  if (text == "GAP") return Provenance::gap;
  if (text == "derived") return Provenance::derived;
  throw InvalidParameter("unknown provenance '" + text + "'");
}

WaveFunction::WaveFunction(SpectrumPtr spectrum, std::vector<Complex> coefficients,
                           Provenance provenance)
    : spectrum_(std::move(spectrum)), coefficients_(std::move(coefficients)),
      provenance_(provenance) {
  if (!spectrum_) throw InvalidParameter("wave function needs a spectrum");
  if (coefficients_.size() != spectrum_->size()) {
    throw InvalidParameter("coefficient count does not match the retained-mode count");
  }
  if (provenance_ == Provenance::gap && std::abs(norm_squared() - 1.0) > 1e-12) {
    throw InvalidParameter("GAP wave functions must have unit norm");
  }
}

WaveFunction WaveFunction::eigenstate(SpectrumPtr spectrum, std::size_t mode) {
  if (!spectrum || mode >= spectrum->size()) throw InvalidParameter("mode outside the spectrum");
  std::vector<Complex> coefficients(spectrum->size());
  coefficients[mode] = 1.0;
  return WaveFunction(std::move(spectrum), std::move(coefficients));
}

double WaveFunction::norm_squared() const noexcept {
  double sum = 0.0;
  for (const auto& c : coefficients_) sum += std::norm(c);
  return sum;
}

double WaveFunction::norm() const noexcept { return std::sqrt(norm_squared()); }

}  // namespace gapthermal
