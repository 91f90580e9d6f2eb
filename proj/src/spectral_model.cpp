#include "gapthermal/spectral_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gapthermal/errors.hpp"

namespace gapthermal {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const double kInvSqrtTwoPi = 1.0 / std::sqrt(kTwoPi);

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw InvalidParameter(std::string(name) + " must be positive and finite");
  }
}

// d^m/dx^m sin(x) = sin(x + m pi / 2), cycled exactly.
double sine_derivative(int order, double x) {
  switch (order % 4) {
    case 0: return std::sin(x);
    case 1: return std::cos(x);
    case 2: return -std::sin(x);
    default: return -std::cos(x);
  }
}

// i^m
Complex imaginary_power(int m) {
  switch (m % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

int permutation_parity(const std::vector<int>& perm) {
  int inversions = 0;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    for (std::size_t j = i + 1; j < perm.size(); ++j) {
      if (perm[i] > perm[j]) ++inversions;
    }
  }
  return inversions % 2;
}

}  // namespace

std::string to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::circle: return "circle";
    case ModelKind::box: return "box";
    case ModelKind::custom: return "custom";
  }
  return "?";
}

std::string to_string(Symmetry symmetry) {
  switch (symmetry) {
    case Symmetry::none: return "none";
    case Symmetry::symmetric: return "symmetric";
    case Symmetry::antisymmetric: return "antisymmetric";
  }
  return "?";
}

std::string to_string(CustomBasis basis) {
  return basis == CustomBasis::circle ? "circle" : "abstract";
}

ModelKind parse_model_kind(const std::string& text) {
  if (text == "circle") return ModelKind::circle;
  if (text == "box") return ModelKind::box;
  if (text == "custom") return ModelKind::custom;
  throw InvalidParameter("unknown model kind '" + text + "'");
}

Symmetry parse_symmetry(const std::string& text) {
  if (text == "none") return Symmetry::none;
  if (text == "symmetric") return Symmetry::symmetric;
  if (text == "antisymmetric") return Symmetry::antisymmetric;
  throw InvalidParameter("unknown symmetry sector '" + text + "'");
}

CustomBasis parse_custom_basis(const std::string& text) {
  if (text == "abstract") return CustomBasis::abstract;
  if (text == "circle") return CustomBasis::circle;
  throw InvalidParameter("unknown custom basis '" + text + "'");
}

SpectralModel SpectralModel::circle(double mass, double hbar) {
  require_positive(mass, "mass");
  require_positive(hbar, "hbar");
  SpectralModel model;
  model.kind_ = ModelKind::circle;
  model.mass_ = mass;
  model.hbar_ = hbar;
  return model;
}

SpectralModel SpectralModel::box(int particles, int dimension, double mass, double hbar,
                                 Symmetry symmetry) {
  require_positive(mass, "mass");
  require_positive(hbar, "hbar");
  if (particles < 1) throw InvalidParameter("particle count must be >= 1");
  if (dimension < 1) throw InvalidParameter("spatial dimension must be >= 1");
  if (particles > 8 && symmetry != Symmetry::none) {
    throw ResourceLimit("symmetrized box models support at most 8 particles");
  }
  SpectralModel model;
  model.kind_ = ModelKind::box;
  model.particles_ = particles;
  model.dimension_ = dimension;
  model.mass_ = mass;
  model.hbar_ = hbar;
  model.symmetry_ = particles == 1 ? Symmetry::none : symmetry;
  return model;
}

SpectralModel SpectralModel::custom(CustomBasis basis, double mass, double hbar) {
  require_positive(mass, "mass");
  require_positive(hbar, "hbar");
  SpectralModel model;
  model.kind_ = ModelKind::custom;
  model.basis_ = basis;
  model.mass_ = mass;
  model.hbar_ = hbar;
  return model;
}

bool SpectralModel::on_circle() const noexcept {
  return kind_ == ModelKind::circle ||
         (kind_ == ModelKind::custom && basis_ == CustomBasis::circle);
}

int SpectralModel::index_dimension() const noexcept {
  return kind_ == ModelKind::box ? particles_ * dimension_ : 1;
}

int SpectralModel::configuration_dimension() const noexcept {
  if (kind_ == ModelKind::box) return particles_ * dimension_;
  return on_circle() ? 1 : 0;
}

double SpectralModel::energy(const ModeIndex& mode) const {
  if (!is_valid_mode(mode)) throw InvalidParameter("mode index does not belong to the model");
  if (kind_ == ModelKind::custom && basis_ == CustomBasis::abstract) {
    throw UnsupportedModel("abstract custom modes have no kinetic energy");
  }
  double squared = 0.0;
  for (int n : mode.components) squared += static_cast<double>(n) * n;
  return energy_scale() * squared;
}

double SpectralModel::mode_norm(const ModeIndex& mode) const {
  if (!has_index_norm()) throw UnsupportedModel("abstract custom modes carry no index norm");
  double squared = 0.0;
  for (int n : mode.components) squared += static_cast<double>(n) * n;
  return std::sqrt(squared);
}

double SpectralModel::fourier_multiplicity() const {
  return kind_ == ModelKind::box ? std::ldexp(1.0, index_dimension()) : 1.0;
}

bool SpectralModel::is_valid_mode(const ModeIndex& mode) const {
  if (static_cast<int>(mode.size()) != index_dimension()) return false;
  if (kind_ == ModelKind::box) {
    return std::all_of(mode.components.begin(), mode.components.end(),
                       [](int n) { return n >= 1; });
  }
  return true;
}

bool SpectralModel::is_canonical(const ModeIndex& mode) const {
  if (!is_valid_mode(mode)) return false;
  if (kind_ != ModelKind::box || symmetry_ == Symmetry::none) return true;
  const auto& c = mode.components;
  for (int i = 0; i + 1 < particles_; ++i) {
    const auto a = c.begin() + i * dimension_;
    const auto b = a + dimension_;
    const auto order = std::lexicographical_compare_three_way(a, b, b, b + dimension_);
    if (order > 0) return false;
    if (order == 0 && symmetry_ == Symmetry::antisymmetric) return false;
  }
  return true;
}

double SpectralModel::configuration_volume() const {
  if (kind_ == ModelKind::box) return std::pow(std::numbers::pi, index_dimension());
  if (on_circle()) return kTwoPi;
  throw UnsupportedModel("abstract custom model has no configuration space");
}

bool SpectralModel::contains(std::span<const double> q) const {
  if (static_cast<int>(q.size()) != configuration_dimension() || q.empty()) return false;
  for (double x : q) {
    if (!std::isfinite(x)) return false;
    if (kind_ == ModelKind::box && (x < 0.0 || x > std::numbers::pi)) return false;
  }
  return true;
}

void SpectralModel::require_point(std::span<const double> q) const {
  if (!has_eigenfunctions()) throw UnsupportedModel("model has no position representation");
  if (!contains(q)) throw InvalidParameter("configuration point outside the model's domain");
}

std::vector<ProductTerm> SpectralModel::product_expansion(const ModeIndex& mode) const {
  if (kind_ != ModelKind::box || symmetry_ == Symmetry::none) return {{mode, 1.0}};
  if (!is_canonical(mode)) throw InvalidParameter("mode is not a canonical sector representative");

  // Blocks are sorted, so equal blocks are adjacent and ranks are nondecreasing;
  // next_permutation then visits every distinct arrangement exactly once.
  std::vector<int> rank(particles_);
  for (int i = 1; i < particles_; ++i) {
    const auto a = mode.components.begin() + (i - 1) * dimension_;
    const bool same = std::equal(a, a + dimension_, a + dimension_);
    rank[i] = same ? rank[i - 1] : rank[i - 1] + 1;
  }
  std::vector<int> block_of_rank(particles_);
  for (int i = particles_ - 1; i >= 0; --i) block_of_rank[rank[i]] = i;

  std::vector<ProductTerm> terms;
  do {
    ModeIndex arranged;
    arranged.components.reserve(mode.size());
    for (int slot = 0; slot < particles_; ++slot) {
      const auto src = mode.components.begin() + block_of_rank[rank[slot]] * dimension_;
      arranged.components.insert(arranged.components.end(), src, src + dimension_);
    }
    const double sign =
        symmetry_ == Symmetry::antisymmetric && permutation_parity(rank) == 1 ? -1.0 : 1.0;
    terms.push_back({std::move(arranged), sign});
  } while (std::next_permutation(rank.begin(), rank.end()));

  const double amplitude = 1.0 / std::sqrt(static_cast<double>(terms.size()));
  for (auto& term : terms) term.amplitude *= amplitude;
  return terms;
}

Complex SpectralModel::product_eigenfunction(const ModeIndex& mode,
                                             std::span<const double> q) const {
  if (on_circle()) {
    const double phase = mode[0] * q[0];
    return kInvSqrtTwoPi * Complex(std::cos(phase), std::sin(phase));
  }
  double value = std::pow(2.0 / std::numbers::pi, 0.5 * index_dimension());
  for (std::size_t j = 0; j < mode.size(); ++j) value *= std::sin(mode[j] * q[j]);
  return value;
}

Complex SpectralModel::product_derivative(const ModeIndex& mode, std::span<const double> q,
                                          std::span<const int> orders) const {
  if (on_circle()) {
    const int m = orders[0];
    return imaginary_power(m) * std::pow(static_cast<double>(mode[0]), m) *
           product_eigenfunction(mode, q);
  }
  double value = std::pow(2.0 / std::numbers::pi, 0.5 * index_dimension());
  for (std::size_t j = 0; j < mode.size(); ++j) {
    const double n = mode[j];
    value *= std::pow(n, orders[j]) * sine_derivative(orders[j], n * q[j]);
  }
  return value;
}

Complex SpectralModel::product_complex(const ModeIndex& mode, std::span<const Complex> z) const {
  if (on_circle()) {
    return kInvSqrtTwoPi * std::exp(Complex(0.0, 1.0) * (static_cast<double>(mode[0]) * z[0]));
  }
  Complex value = std::pow(2.0 / std::numbers::pi, 0.5 * index_dimension());
  for (std::size_t j = 0; j < mode.size(); ++j) {
    value *= std::sin(static_cast<double>(mode[j]) * z[j]);
  }
  return value;
}

Complex SpectralModel::eigenfunction(const ModeIndex& mode, std::span<const double> q) const {
  require_point(q);
  if (!is_valid_mode(mode)) throw InvalidParameter("mode index does not belong to the model");
  Complex sum = 0.0;
  for (const auto& term : product_expansion(mode)) {
    sum += term.amplitude * product_eigenfunction(term.index, q);
  }
  return sum;
}

Complex SpectralModel::eigenfunction_derivative(const ModeIndex& mode, std::span<const double> q,
                                                std::span<const int> orders) const {
  require_point(q);
  if (!is_valid_mode(mode)) throw InvalidParameter("mode index does not belong to the model");
  if (static_cast<int>(orders.size()) != configuration_dimension() ||
      std::any_of(orders.begin(), orders.end(), [](int m) { return m < 0; })) {
    throw InvalidParameter("derivative multi-index must have one nonnegative order per coordinate");
  }
  Complex sum = 0.0;
  for (const auto& term : product_expansion(mode)) {
    sum += term.amplitude * product_derivative(term.index, q, orders);
  }
  return sum;
}

Complex SpectralModel::eigenfunction_complex(const ModeIndex& mode,
                                             std::span<const Complex> z) const {
  if (!has_eigenfunctions()) throw UnsupportedModel("model has no position representation");
  if (static_cast<int>(z.size()) != configuration_dimension()) {
    throw InvalidParameter("complex point has the wrong number of coordinates");
  }
  Complex sum = 0.0;
  for (const auto& term : product_expansion(mode)) {
    sum += term.amplitude * product_complex(term.index, z);
  }
  return sum;
}

double SpectralModel::derivative_sup_bound(const ModeIndex& mode, int ell) const {
  if (ell < 0) throw InvalidParameter("derivative order must be >= 0");
  if (!has_eigenfunctions()) {
    throw UnsupportedModel("abstract custom model provides no derivative bounds");
  }
  if (on_circle()) return std::pow(std::abs(static_cast<double>(mode[0])), ell) * kInvSqrtTwoPi;
  // |grad^l prod sin(n_j q_j)|^2 <= sum_{i_1..i_l} prod n_{i_k}^2 = ||n||^{2l}
  const double terms = static_cast<double>(product_expansion(mode).size());
  return std::sqrt(terms) * std::pow(2.0 / std::numbers::pi, 0.5 * index_dimension()) *
         std::pow(mode_norm(mode), ell);
}

double SpectralModel::continuation_sup_bound(const ModeIndex& mode, double alpha) const {
  if (!(alpha >= 0.0)) throw InvalidParameter("continuation radius must be >= 0");
  if (!has_eigenfunctions()) {
    throw UnsupportedModel("abstract custom model provides no continuation bounds");
  }
  if (on_circle()) return std::exp(alpha * std::abs(mode[0])) * kInvSqrtTwoPi;
  // sup_{|Im z| <= a} |sin(n z)| = cosh(n a)
  double value = std::pow(2.0 / std::numbers::pi, 0.5 * index_dimension());
  for (int n : mode.components) value *= std::cosh(alpha * n);
  return std::sqrt(static_cast<double>(product_expansion(mode).size())) * value;
}

}  // namespace gapthermal
