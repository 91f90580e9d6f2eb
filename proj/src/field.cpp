#include "gapthermal/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gapthermal/errors.hpp"

namespace gapthermal {

namespace {

const double kInvSqrtTwoPi = 1.0 / std::sqrt(2.0 * std::numbers::pi);

bool is_circle_like(const SpectralModel& model) {
  return model.configuration_dimension() == 1 && model.kind() != ModelKind::box;
}

Complex minus_i_power(int k) {
  switch (k % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, -1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, 1.0};
  }
}

void require_box(const SpectralModel& model, const char* what) {
  if (model.kind() != ModelKind::box) throw UnsupportedModel(std::string(what) + " needs a box model");
}

// Visits every permutation of the N particle blocks with its parity.
template <typename Visit>
void for_each_block_permutation(int particles, Visit&& visit) {
  std::vector<int> perm(particles);
  for (int i = 0; i < particles; ++i) perm[i] = i;
  do {
    int inversions = 0;
    for (int i = 0; i < particles; ++i) {
      for (int j = i + 1; j < particles; ++j) inversions += perm[i] > perm[j];
    }
    visit(perm, inversions % 2 == 1);
  } while (std::next_permutation(perm.begin(), perm.end()));
}

ModeIndex permute_blocks(const ModeIndex& mode, const std::vector<int>& perm, int dimension) {
  ModeIndex out;
  out.components.reserve(mode.size());
  for (int slot : perm) {
    const auto src = mode.components.begin() + slot * dimension;
    out.components.insert(out.components.end(), src, src + dimension);
  }
  return out;
}

}  // namespace

Complex evaluate(const WaveFunction& psi, std::span<const double> q) {
  const auto& model = psi.model();
  model.require_point(q);
  const auto modes = psi.spectrum().modes();
  const auto& c = psi.coefficients();
  Complex sum = 0.0;
  if (is_circle_like(model)) {
    for (std::size_t i = 0; i < modes.size(); ++i) {
      const double phase = modes[i].index[0] * q[0];
      sum += c[i] * (kInvSqrtTwoPi * Complex(std::cos(phase), std::sin(phase)));
    }
    return sum;
  }
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (c[i] != 0.0) sum += c[i] * model.eigenfunction(modes[i].index, q);
  }
  return sum;
}

Complex evaluate(const WaveFunction& psi, double q) {
  return evaluate(psi, std::span<const double>(&q, 1));
}

Complex evaluate_derivative(const WaveFunction& psi, std::span<const double> q,
                            std::span<const int> orders) {
  const auto& model = psi.model();
  model.require_point(q);
  if (static_cast<int>(orders.size()) != model.configuration_dimension() ||
      std::any_of(orders.begin(), orders.end(), [](int m) { return m < 0; })) {
    throw InvalidParameter("unsupported derivative direction");
  }
  const auto modes = psi.spectrum().modes();
  const auto& c = psi.coefficients();
  Complex sum = 0.0;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (c[i] != 0.0) sum += c[i] * model.eigenfunction_derivative(modes[i].index, q, orders);
  }
  return sum;
}

Complex evaluate_derivative(const WaveFunction& psi, double q, int ell) {
  if (psi.model().configuration_dimension() != 1) {
    throw InvalidParameter("scalar derivative order needs a one-dimensional model");
  }
  return evaluate_derivative(psi, std::span<const double>(&q, 1), std::span<const int>(&ell, 1));
}

FieldJet evaluate_jet(const ThermalSpectrum& spectrum, std::span<const Complex> coefficients,
                      std::span<const double> q) {
  const auto& model = spectrum.model();
  model.require_point(q);
  if (coefficients.size() != spectrum.size()) {
    throw InvalidParameter("coefficient count does not match the spectrum");
  }
  const auto modes = spectrum.modes();
  const int dims = model.configuration_dimension();
  FieldJet jet{0.0, std::vector<Complex>(dims, 0.0)};
  if (is_circle_like(model)) {
    for (std::size_t i = 0; i < modes.size(); ++i) {
      const double n = modes[i].index[0];
      const Complex phi = kInvSqrtTwoPi * Complex(std::cos(n * q[0]), std::sin(n * q[0]));
      jet.value += coefficients[i] * phi;
      jet.gradient[0] += coefficients[i] * Complex(0.0, n) * phi;
    }
    return jet;
  }
  std::vector<int> orders(dims, 0);
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (coefficients[i] == 0.0) continue;
    jet.value += coefficients[i] * model.eigenfunction(modes[i].index, q);
    for (int j = 0; j < dims; ++j) {
      orders[j] = 1;
      jet.gradient[j] +=
          coefficients[i] * model.eigenfunction_derivative(modes[i].index, q, orders);
      orders[j] = 0;
    }
  }
  return jet;
}

ContinuationResult evaluate_complex(const WaveFunction& psi, std::span<const Complex> z,
                                    ContinuationOptions options) {
  const auto& model = psi.model();
  if (!model.has_eigenfunctions()) throw UnsupportedModel("model has no position representation");
  if (static_cast<int>(z.size()) != model.configuration_dimension()) {
    throw InvalidParameter("complex point has the wrong number of coordinates");
  }
  double strip = 0.0;
  for (const auto& zj : z) {
    if (!std::isfinite(zj.real()) || !std::isfinite(zj.imag())) {
      throw InvalidParameter("complex point must be finite");
    }
    strip = std::max(strip, std::abs(zj.imag()));
  }

  const auto& spectrum = psi.spectrum();
  const auto modes = spectrum.modes();
  const auto& c = psi.coefficients();
  Complex sum = 0.0;
  for (std::size_t i = 0; i < modes.size(); ++i) {
    if (c[i] != 0.0) sum += c[i] * model.eigenfunction_complex(modes[i].index, z);
  }

  double tail = 0.0;
  if (spectrum.cutoff() >= 0 && model.kind() != ModelKind::custom) {
    // Outer shell: modes within one unit of the cutoff radius.
    const double shell = spectrum.cutoff() - 1.0;
    double largest = 0.0;
    std::size_t count = 0;
    for (std::size_t i = 0; i < modes.size(); ++i) {
      if (model.mode_norm(modes[i].index) <= shell) continue;
      ++count;
      largest = std::max(largest,
                         std::abs(c[i]) * model.continuation_sup_bound(modes[i].index, strip));
    }
    tail = largest * static_cast<double>(count);
  }
  if (tail > options.tail_tolerance) {
    throw StripDivergence("truncated expansion unreliable at |Im z| = " + std::to_string(strip),
                          tail);
  }
  return {sum, tail};
}

ContinuationResult evaluate_complex(const WaveFunction& psi, Complex z,
                                    ContinuationOptions options) {
  return evaluate_complex(psi, std::span<const Complex>(&z, 1), options);
}

Complex FourierImage::at(const std::vector<int>& k) const {
  const auto it = coefficients.find(k);
  return it == coefficients.end() ? Complex(0.0) : it->second;
}

Complex FourierImage::evaluate(std::span<const double> q) const {
  if (static_cast<int>(q.size()) != dimension) throw InvalidParameter("point dimension mismatch");
  Complex sum = 0.0;
  for (const auto& [k, c] : coefficients) {
    double phase = 0.0;
    for (int j = 0; j < dimension; ++j) phase += k[j] * q[j];
    sum += c * Complex(std::cos(phase), std::sin(phase));
  }
  return scale * sum;
}

FourierImage fourier_from_energy(const WaveFunction& psi) {
  const auto& model = psi.model();
  require_box(model, "Fourier image");
  const int dims = model.index_dimension();
  if (dims > 20) throw ResourceLimit("Fourier image limited to N*d <= 20");

  FourierImage image;
  image.dimension = dims;
  // sin(nq) = (e^{inq} - e^{-inq}) / 2i and (2/pi)^{1/2} / 2 = (2 pi)^{-1/2}
  image.scale = std::pow(2.0 * std::numbers::pi, -0.5 * dims);
  const Complex phase = minus_i_power(dims);
  const auto modes = psi.spectrum().modes();
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const Complex a = psi.coefficient(i);
    if (a == 0.0) continue;
    for (const auto& term : model.product_expansion(modes[i].index)) {
      for (unsigned mask = 0; mask < (1u << dims); ++mask) {
        std::vector<int> k(term.index.components);
        double sign = 1.0;
        for (int j = 0; j < dims; ++j) {
          if (mask & (1u << j)) {
            k[j] = -k[j];
            sign = -sign;
          }
        }
        image.coefficients[k] += phase * sign * term.amplitude * a;
      }
    }
  }
  return image;
}

WaveFunction energy_from_fourier(const FourierImage& image, const SpectrumPtr& spectrum) {
  const auto& model = spectrum->model();
  require_box(model, "energy coefficients");
  if (image.dimension != model.index_dimension()) {
    throw InvalidParameter("Fourier image dimension does not match the model");
  }
  const Complex inverse_phase = 1.0 / minus_i_power(image.dimension);
  std::vector<Complex> coefficients(spectrum->size());
  for (std::size_t i = 0; i < spectrum->size(); ++i) {
    for (const auto& term : model.product_expansion(spectrum->mode(i).index)) {
      coefficients[i] += term.amplitude * inverse_phase * image.at(term.index.components);
    }
  }
  return WaveFunction(spectrum, std::move(coefficients));
}

WaveFunction symmetrize(const WaveFunction& psi, Symmetry sector) {
  const auto& model = psi.model();
  require_box(model, "symmetrization");
  if (model.symmetry() != Symmetry::none) {
    throw InvalidParameter("symmetrize expects an unsymmetrized box wave function");
  }
  if (sector == Symmetry::none) throw InvalidParameter("symmetrize needs a symmetry sector");
  if (model.particles() == 1) return WaveFunction(psi.spectrum_ptr(), psi.coefficients());

  const auto& spectrum = psi.spectrum();
  const auto modes = spectrum.modes();
  const int particles = model.particles();
  double factorial = 1.0;
  for (int k = 2; k <= particles; ++k) factorial *= k;

  std::vector<Complex> projected(psi.size(), 0.0);
  for (std::size_t i = 0; i < modes.size(); ++i) {
    Complex sum = 0.0;
    bool excluded = false;
    for_each_block_permutation(particles, [&](const std::vector<int>& perm, bool odd) {
      const auto j = spectrum.find(permute_blocks(modes[i].index, perm, model.dimension()));
      if (!j) throw InternalError("retained mode set is not closed under particle exchange");
      const bool flips = sector == Symmetry::antisymmetric && odd;
      if (flips && *j == i) excluded = true;
      sum += (flips ? -1.0 : 1.0) * psi.coefficient(*j);
    });
    projected[i] = excluded ? Complex(0.0) : sum / factorial;
  }
  return WaveFunction(psi.spectrum_ptr(), std::move(projected));
}

WaveFunction project_to_sector(const WaveFunction& psi, const SpectrumPtr& sector_spectrum) {
  const auto& model = psi.model();
  const auto& target = sector_spectrum->model();
  require_box(model, "sector projection");
  if (model.symmetry() != Symmetry::none || target.kind() != ModelKind::box ||
      target.symmetry() == Symmetry::none || target.particles() != model.particles() ||
      target.dimension() != model.dimension()) {
    throw InvalidParameter("sector projection maps an unsymmetrized box onto a sector of it");
  }
  std::vector<Complex> coefficients(sector_spectrum->size());
  for (std::size_t s = 0; s < sector_spectrum->size(); ++s) {
    for (const auto& term : target.product_expansion(sector_spectrum->mode(s).index)) {
      const auto j = psi.spectrum().find(term.index);
      if (!j) throw InvalidParameter("sector mode outside the unsymmetrized cutoff");
      coefficients[s] += term.amplitude * psi.coefficient(*j);
    }
  }
  return WaveFunction(sector_spectrum, std::move(coefficients));
}

WaveFunction truncate(const WaveFunction& psi, int cutoff) {
  auto restricted = restrict_to_cutoff(psi.spectrum(), cutoff);
  std::vector<Complex> coefficients(restricted->size());
  for (std::size_t i = 0; i < restricted->size(); ++i) {
    coefficients[i] = psi.coefficient(*psi.spectrum().find(restricted->mode(i).index));
  }
  return WaveFunction(std::move(restricted), std::move(coefficients));
}

}  // namespace gapthermal
