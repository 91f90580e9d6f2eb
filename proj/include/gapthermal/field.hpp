#pragma once

#include <map>
#include <span>
#include <vector>

#include "gapthermal/wave_function.hpp"

namespace gapthermal {

/// psi(q) = sum_n c_n phi_n(q).  Circle points may be any finite real (the
/// expansion is 2 pi periodic); box points must lie in [0, pi]^{Nd}.
Complex evaluate(const WaveFunction& psi, std::span<const double> q);
Complex evaluate(const WaveFunction& psi, double q);

/// Term-wise mixed partial derivative; `orders[j]` is the order in coordinate j.
Complex evaluate_derivative(const WaveFunction& psi, std::span<const double> q,
                            std::span<const int> orders);
/// l-th derivative of a one-dimensional wave function.
Complex evaluate_derivative(const WaveFunction& psi, double q, int ell);

/// Value and gradient at one point.
struct FieldJet {
  Complex value;
  std::vector<Complex> gradient;
};

/// Value and gradient of sum_i coefficients[i] phi_i(q) without building a
/// WaveFunction; used for time-evolved coefficients.
FieldJet evaluate_jet(const ThermalSpectrum& spectrum, std::span<const Complex> coefficients,
                      std::span<const double> q);

struct ContinuationOptions {
  /// Largest acceptable tail estimate (absolute).
  double tail_tolerance = 1e-6;
};

struct ContinuationResult {
  Complex value;
  /// Largest outer-shell term |c_n| sup|phi_n| times the outer-shell mode
  /// count.  Zero for finite (custom) spectra, which have no truncation.
  double tail_estimate;
};

/// Analytic continuation of psi to complex arguments (circle, or the
/// periodically extended box).  Throws StripDivergence when the tail estimate
/// exceeds the tolerance.
ContinuationResult evaluate_complex(const WaveFunction& psi, std::span<const Complex> z,
                                    ContinuationOptions options = {});
ContinuationResult evaluate_complex(const WaveFunction& psi, Complex z,
                                    ContinuationOptions options = {});

/// Fourier coefficients of the 2 pi periodic extension of a box wave function:
/// psi(q) = scale * sum_k c_k e^{i k.q}, with
/// c_k = (-i)^{Nd} (prod_j sign k_j) <phi_{|k|}|psi> and sign(0) = 0.
struct FourierImage {
  int dimension = 0;
  double scale = 1.0;
  std::map<std::vector<int>, Complex> coefficients;

  Complex at(const std::vector<int>& k) const;
  Complex evaluate(std::span<const double> q) const;
};

FourierImage fourier_from_energy(const WaveFunction& psi);
/// Inverse of fourier_from_energy onto the modes of `spectrum`.
WaveFunction energy_from_fourier(const FourierImage& image, const SpectrumPtr& spectrum);

/// Applies the (anti)symmetrization projector P = (1/N!) sum_s (+-1)^s U_s to an
/// unsymmetrized box wave function, in coefficient space.  The result is not
/// renormalized.  N = 1 returns a copy.
WaveFunction symmetrize(const WaveFunction& psi, Symmetry sector);

/// Coefficients <chi_s|psi> of an unsymmetrized box wave function in the
/// normalized sector basis of `sector_spectrum`.
WaveFunction project_to_sector(const WaveFunction& psi, const SpectrumPtr& sector_spectrum);

/// Keeps only modes with ||n|| <= cutoff (weights of the new spectrum are
/// renormalized; coefficients are copied unchanged).
WaveFunction truncate(const WaveFunction& psi, int cutoff);

}  // namespace gapthermal
