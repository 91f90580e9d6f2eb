#pragma once

#include <complex>
#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace gapthermal {

using Complex = std::complex<double>;

enum class ModelKind { circle, box, custom };

/// Exchange symmetry of the box Hilbert space.
enum class Symmetry { none, symmetric, antisymmetric };

/// Eigenfunction table of a custom model: either no position representation at
/// all, or labels interpreted as Fourier indices on the circle.
enum class CustomBasis { abstract, circle };

std::string to_string(ModelKind kind);
std::string to_string(Symmetry symmetry);
std::string to_string(CustomBasis basis);
ModelKind parse_model_kind(const std::string& text);
Symmetry parse_symmetry(const std::string& text);
CustomBasis parse_custom_basis(const std::string& text);

/// Integer label of one eigenmode.  Circle and custom modes carry a single
/// signed component; box modes carry N*d positive components ordered as
/// (n_{1,1}, ..., n_{1,d}, n_{2,1}, ..., n_{N,d}).
struct ModeIndex {
  std::vector<int> components;

  ModeIndex() = default;
  ModeIndex(std::initializer_list<int> values) : components(values) {}
  explicit ModeIndex(std::vector<int> values) : components(std::move(values)) {}

  std::size_t size() const noexcept { return components.size(); }
  int operator[](std::size_t i) const { return components[i]; }

  friend auto operator<=>(const ModeIndex&, const ModeIndex&) = default;
  friend bool operator==(const ModeIndex&, const ModeIndex&) = default;
};

/// One product eigenfunction (with sign and amplitude) inside a symmetrized
/// box mode.
struct ProductTerm {
  ModeIndex index;
  double amplitude;
};

/// An exactly diagonalized Hamiltonian: circle Laplacian, N particles in the
/// box [0, pi]^d with Dirichlet walls, or a finite custom spectrum.
///
/// Models are immutable values.  Energies of circle and box modes come from
/// E_n = hbar^2 |n|^2 / 2m; custom energies live in the thermal spectrum.
class SpectralModel {
public:
  static SpectralModel circle(double mass = 1.0, double hbar = 1.0);
  static SpectralModel box(int particles, int dimension, double mass = 1.0, double hbar = 1.0,
                           Symmetry symmetry = Symmetry::none);
  static SpectralModel custom(CustomBasis basis, double mass = 1.0, double hbar = 1.0);

  ModelKind kind() const noexcept { return kind_; }
  int particles() const noexcept { return particles_; }
  int dimension() const noexcept { return dimension_; }
  double mass() const noexcept { return mass_; }
  double hbar() const noexcept { return hbar_; }
  Symmetry symmetry() const noexcept { return symmetry_; }
  CustomBasis custom_basis() const noexcept { return basis_; }

  /// Length of a ModeIndex for this model.
  int index_dimension() const noexcept;
  /// Number of real coordinates of a configuration point; 0 when the model
  /// has no position representation.
  int configuration_dimension() const noexcept;
  bool has_eigenfunctions() const noexcept { return configuration_dimension() > 0; }
  /// True for models whose index set carries a Euclidean norm (circle, box,
  /// custom modes on the circle).
  bool has_index_norm() const noexcept { return has_eigenfunctions(); }

  /// hbar^2 / 2m.
  double energy_scale() const noexcept { return hbar_ * hbar_ / (2.0 * mass_); }
  /// Kinetic energy of a circle or box mode (also of custom circle modes).
  double energy(const ModeIndex& mode) const;

  /// |n| on the circle, Euclidean ||n|| on the box.
  double mode_norm(const ModeIndex& mode) const;
  /// Number of Fourier modes k with |k_j| = n_j per energy mode: 2^{Nd} for
  /// the box (sine = two exponentials per coordinate), 1 otherwise.
  double fourier_multiplicity() const;

  bool is_valid_mode(const ModeIndex& mode) const;
  /// True if the index is the canonical representative of its permutation
  /// orbit in the model's symmetry sector (always true when unsymmetrized).
  bool is_canonical(const ModeIndex& mode) const;

  /// Lebesgue measure of configuration space: 2 pi or pi^{Nd}.
  double configuration_volume() const;
  bool contains(std::span<const double> q) const;
  void require_point(std::span<const double> q) const;

  /// Expansion of a (possibly symmetrized) mode in unsymmetrized product
  /// eigenfunctions.  A single unit term outside symmetry sectors.
  std::vector<ProductTerm> product_expansion(const ModeIndex& mode) const;

  Complex eigenfunction(const ModeIndex& mode, std::span<const double> q) const;
  /// Mixed partial derivative; `orders[j]` is the order in coordinate j.
  Complex eigenfunction_derivative(const ModeIndex& mode, std::span<const double> q,
                                   std::span<const int> orders) const;
  /// Analytic continuation (circle: e^{inz}/sqrt(2 pi); box: the periodic sine
  /// product continued to complex arguments).
  Complex eigenfunction_complex(const ModeIndex& mode, std::span<const Complex> z) const;

  /// Upper bound on sup_q |grad^l phi_n(q)|.  Exact on the circle.
  double derivative_sup_bound(const ModeIndex& mode, int ell) const;
  /// Upper bound on |phi_n| over complex points whose imaginary parts are at
  /// most `alpha` per coordinate (circle: the disk of radius alpha).
  double continuation_sup_bound(const ModeIndex& mode, double alpha) const;

private:
  SpectralModel() = default;

  Complex product_eigenfunction(const ModeIndex& mode, std::span<const double> q) const;
  Complex product_derivative(const ModeIndex& mode, std::span<const double> q,
                             std::span<const int> orders) const;
  Complex product_complex(const ModeIndex& mode, std::span<const Complex> z) const;
  bool on_circle() const noexcept;

  ModelKind kind_ = ModelKind::circle;
  int particles_ = 1;
  int dimension_ = 1;
  double mass_ = 1.0;
  double hbar_ = 1.0;
  Symmetry symmetry_ = Symmetry::none;
  CustomBasis basis_ = CustomBasis::abstract;
};

}  // namespace gapthermal
