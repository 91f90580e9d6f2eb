#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gapthermal/diagnostics.hpp"
#include "gapthermal/errors.hpp"
#include "gapthermal/field.hpp"
#include "gapthermal/sampler.hpp"

using namespace gapthermal;

namespace {

constexpr double kPi = std::numbers::pi;

WaveFunction random_coefficients(const SpectrumPtr& spec, std::uint64_t seed) {
  CounterRng rng({seed, 0});
  std::vector<Complex> c(spec->size());
  for (auto& x : c) x = Complex(rng.uniform() - 0.5, rng.uniform() - 0.5);
  return WaveFunction(spec, std::move(c));
}

double max_difference(const WaveFunction& a, const WaveFunction& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a.coefficient(i) - b.coefficient(i)));
  }
  return worst;
}

}  // namespace

TEST_CASE("circle evaluation equals the direct eigenfunction sum and is periodic") {
  const auto spec = thermalize(SpectralModel::circle(), 2.0);
  const auto psi = sample_gap(spec, {4, 2});
  for (double q : {0.0, 0.3, 2.0, 6.0}) {
    Complex direct = 0.0;
    for (std::size_t i = 0; i < spec->size(); ++i) {
      const int n = spec->mode(i).index[0];
      direct += psi.coefficient(i) * std::polar(1.0 / std::sqrt(2.0 * kPi), n * q);
    }
    CHECK(std::abs(evaluate(psi, q) - direct) < 1e-14);
    CHECK(std::abs(evaluate(psi, q + 2.0 * kPi) - direct) < 1e-13);
  }
}

TEST_CASE("derivatives agree with finite differences and with the jet") {
  const auto spec = thermalize(SpectralModel::circle(), 2.0);
  const auto psi = sample_g(spec, {4, 3});
  const double q = 1.1, h = 1e-5;
  const Complex fd = (evaluate(psi, q + h) - evaluate(psi, q - h)) / (2.0 * h);
  CHECK(std::abs(evaluate_derivative(psi, q, 1) - fd) < 1e-8);
  const Complex fd2 = (evaluate_derivative(psi, q + h, 1) - evaluate_derivative(psi, q - h, 1)) / (2.0 * h);
  CHECK(std::abs(evaluate_derivative(psi, q, 2) - fd2) < 1e-7);

  const auto box = thermalize(SpectralModel::box(2, 1), 1.0);
  const auto phi = sample_gap(box, {1, 1});
  const double x[] = {0.8, 2.2};
  const auto jet = evaluate_jet(*box, phi.coefficients(), x);
  CHECK(std::abs(jet.value - evaluate(phi, x)) < 1e-14);
  for (int j = 0; j < 2; ++j) {
    int orders[] = {0, 0};
    orders[j] = 1;
    CHECK(std::abs(jet.gradient[j] - evaluate_derivative(phi, x, orders)) < 1e-13);
    double xp[] = {0.8, 2.2}, xm[] = {0.8, 2.2};
    xp[j] += h;
    xm[j] -= h;
    CHECK(std::abs(jet.gradient[j] - (evaluate(phi, xp) - evaluate(phi, xm)) / (2.0 * h)) < 1e-8);
  }
}

TEST_CASE("Parseval: the L2 norm of psi equals the coefficient norm") {
  const auto circle = thermalize(SpectralModel::circle(), 2.0);
  const auto box = thermalize(SpectralModel::box(2, 1, 1.0, 1.0, Symmetry::antisymmetric), 1.5);
  for (Provenance provenance : {Provenance::g, Provenance::gap}) {
    const auto kind = provenance == Provenance::g ? SamplerKind::g : SamplerKind::gap;
    const auto psi = sample(kind, circle, {2, 0});
    const int points = 64;
    double integral = 0.0;
    for (int j = 0; j < points; ++j) integral += std::norm(evaluate(psi, 2.0 * kPi * j / points));
    CHECK(integral * 2.0 * kPi / points == doctest::Approx(psi.norm_squared()).epsilon(1e-13));

    const auto phi = sample(kind, box, {2, 0});
    const int grid = 64;
    double box_integral = 0.0;
    for (int i = 0; i < grid; ++i) {
      for (int j = 0; j < grid; ++j) {
        const double q[] = {(i + 0.5) * kPi / grid, (j + 0.5) * kPi / grid};
        box_integral += std::norm(evaluate(phi, q));
      }
    }
    CHECK(box_integral * kPi * kPi / (grid * grid) == doctest::Approx(phi.norm_squared()).epsilon(1e-12));
  }
}

TEST_CASE("box Fourier image reproduces psi and round-trips") {
  for (Symmetry sym : {Symmetry::none, Symmetry::symmetric, Symmetry::antisymmetric}) {
    const auto spec = thermalize(SpectralModel::box(2, 1, 1.0, 1.0, sym), 1.0);
    const auto psi = sample_gap(spec, {6, 1});
    const auto image = fourier_from_energy(psi);
    for (double x : {0.3, 1.7}) {
      const double q[] = {x, 2.9 - x};
      CHECK(std::abs(image.evaluate(q) - evaluate(psi, q)) < 1e-13);
    }
    const auto back = energy_from_fourier(image, spec);
    CHECK(max_difference(back, psi) < 1e-15);

    for (int ell : {0, 1, 2}) {
      double sum = 0.0;
      for (const auto& [k, c] : image.coefficients) {
        const double k2 = k[0] * k[0] + k[1] * k[1];
        sum += std::pow(k2, ell) * std::norm(c);
      }
      CHECK(sobolev_sum(psi, ell) == doctest::Approx(sum).epsilon(1e-13));
    }
  }
  // sin(q) = (e^{iq} - e^{-iq}) / 2i
  const auto one = thermalize(SpectralModel::box(1, 1), 1.0);
  const auto image = fourier_from_energy(WaveFunction::eigenstate(one, 0));
  CHECK(std::abs(image.at({1}) - Complex(0, -1)) < 1e-16);
  CHECK(std::abs(image.at({-1}) - Complex(0, 1)) < 1e-16);
  CHECK(image.at({0}) == Complex(0.0));
}

TEST_CASE("symmetrization projector") {
  for (int particles : {2, 3}) {
    const auto spec = thermalize(SpectralModel::box(particles, 1), 1.0);
    const auto psi = random_coefficients(spec, 40 + particles);
    for (Symmetry sector : {Symmetry::symmetric, Symmetry::antisymmetric}) {
      const auto once = symmetrize(psi, sector);
      const auto twice = symmetrize(once, sector);
      CHECK(max_difference(once, twice) < 1e-15);
      CHECK(once.norm() <= psi.norm());
    }
    const auto anti = symmetrize(psi, Symmetry::antisymmetric);
    for (std::size_t i = 0; i < spec->size(); ++i) {
      const auto& n = spec->mode(i).index;
      const bool repeated = n[0] == n[1] || (particles == 3 && (n[1] == n[2] || n[0] == n[2]));
      if (repeated) CHECK(anti.coefficient(i) == Complex(0.0));
    }
  }
}

TEST_CASE("sector projection preserves the norm of already symmetric states") {
  const auto plain = thermalize(SpectralModel::box(2, 1), 1.0);
  for (Symmetry sector : {Symmetry::symmetric, Symmetry::antisymmetric}) {
    const auto sector_spec = thermalize(SpectralModel::box(2, 1, 1.0, 1.0, sector), 1.0);
    const auto sym = symmetrize(random_coefficients(plain, 9), sector);
    const auto projected = project_to_sector(sym, sector_spec);
    CHECK(projected.norm_squared() == doctest::Approx(sym.norm_squared()).epsilon(1e-13));
    const double q[] = {0.4, 1.9};
    CHECK(std::abs(evaluate(projected, q) - evaluate(sym, q)) < 1e-13);
  }
}

TEST_CASE("complex evaluation") {
  const auto spec = thermalize(SpectralModel::circle(), 2.0);
  const auto psi = sample_gap(spec, {12, 0});
  const auto real_axis = evaluate_complex(psi, Complex(1.2, 0.0));
  CHECK(std::abs(real_axis.value - evaluate(psi, 1.2)) < 1e-14);
  CHECK(real_axis.tail_estimate >= 0.0);
  CHECK(evaluate_complex(psi, Complex(1.2, 0.1)).tail_estimate < 1e-6);
  CHECK_THROWS_AS(evaluate_complex(psi, Complex(1.2, 8.0)), StripDivergence);

  // Term-by-term continuation of the Fourier series.
  const double q = 0.9, y = 0.3;
  Complex direct = 0.0;
  for (std::size_t i = 0; i < spec->size(); ++i) {
    const int n = spec->mode(i).index[0];
    direct += psi.coefficient(i) * std::exp(Complex(0.0, n) * Complex(q, y)) / std::sqrt(2.0 * kPi);
  }
  CHECK(std::abs(evaluate_complex(psi, Complex(q, y)).value - direct) < 1e-14);

  const std::vector<CustomWeight> w = {{1, 0.5, {}}, {-2, 0.5, {}}};
  const auto custom = build_custom_model(w, CustomBasis::circle).spectrum;
  CHECK(evaluate_complex(sample_gap(custom, {0, 0}), Complex(0.0, 5.0)).tail_estimate == 0.0);
}

TEST_CASE("truncation keeps coefficients of retained modes") {
  const auto spec = thermalize(SpectralModel::circle(), 2.0);
  const auto psi = sample_gap(spec, {3, 3});
  const auto small = truncate(psi, 3);
  CHECK(small.size() == 7);
  for (std::size_t i = 0; i < small.size(); ++i) {
    CHECK(small.coefficient(i) == psi.coefficient(*spec->find(small.spectrum().mode(i).index)));
  }
}

TEST_CASE("evaluation rejects points outside the box") {
  const auto spec = thermalize(SpectralModel::box(1, 1), 1.0);
  const auto psi = sample_gap(spec, {0, 0});
  CHECK_THROWS_AS(evaluate(psi, -0.1), InvalidParameter);
  CHECK_THROWS_AS(evaluate(psi, 4.0), InvalidParameter);
  CHECK(std::abs(evaluate(psi, 0.0)) < 1e-15);
  const std::vector<CustomWeight> w = {{0, 1.0, {}}};
  CHECK_THROWS_AS(evaluate(sample_gap(build_custom_model(w).spectrum, {0, 0}), 0.5), UnsupportedModel);
}
