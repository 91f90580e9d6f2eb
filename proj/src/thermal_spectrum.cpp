#include "gapthermal/thermal_spectrum.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "gapthermal/errors.hpp"

namespace gapthermal {

namespace {

constexpr int kMaxRadius = 1 << 20;

void require_beta(double beta) {
  if (!(beta > 0.0) || !std::isfinite(beta)) {
    throw InvalidParameter("inverse temperature beta must be positive and finite");
  }
}

std::uint64_t fnv1a(std::uint64_t hash, std::uint64_t word) {
  for (int byte = 0; byte < 8; ++byte) {
    hash ^= (word >> (8 * byte)) & 0xffU;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

// sum_{nu >= 1} e^{-a nu^2}, summed until terms underflow relative to the sum.
double positive_theta(double a) {
  double sum = 0.0;
  for (long nu = 1;; ++nu) {
    const double term = std::exp(-a * static_cast<double>(nu) * nu);
    sum += term;
    if (term <= sum * 1e-18 || term == 0.0) break;
  }
  return sum;
}

// Depth-first enumeration of n in N^K with ||n||^2 <= radius^2.
void enumerate_box(int depth, int dims, long remaining, std::vector<int>& current,
                   std::vector<ModeIndex>& out, std::size_t budget) {
  if (depth == dims) {
    if (out.size() >= budget) {
      throw ResourceLimit("retained mode count exceeds the budget of " + std::to_string(budget));
    }
    out.emplace_back(current);
    return;
  }
  const int slots_left = dims - depth - 1;  // each later coordinate needs at least 1
  for (int n = 1; static_cast<long>(n) * n + slots_left <= remaining; ++n) {
    current[depth] = n;
    enumerate_box(depth + 1, dims, remaining - static_cast<long>(n) * n, current, out, budget);
  }
}

std::vector<ModeIndex> enumerate_modes(const SpectralModel& model, int radius,
                                       std::size_t budget) {
  std::vector<ModeIndex> indices;
  if (model.kind() == ModelKind::circle) {
    if (static_cast<std::size_t>(2 * radius + 1) > budget) {
      throw ResourceLimit("retained mode count exceeds the budget of " + std::to_string(budget));
    }
    for (int n = -radius; n <= radius; ++n) indices.push_back({n});
    return indices;
  }
  const int dims = model.index_dimension();
  std::vector<int> current(dims, 1);
  enumerate_box(0, dims, static_cast<long>(radius) * radius, current, indices, budget);
  if (model.symmetry() != Symmetry::none) {
    std::erase_if(indices, [&](const ModeIndex& m) { return !model.is_canonical(m); });
  }
  return indices;
}

}  // namespace

class SpectrumBuilder {
public:
  /// With `boltzmann` set the weights are recomputed as e^{-beta E_n} / Z;
  /// otherwise the supplied weights are renormalized to sum to one.
  static SpectrumPtr build(const SpectralModel& model, double beta, std::vector<Mode> modes,
                           bool boltzmann, double tail_bound, double tail_mass, int cutoff) {
    auto spectrum = std::shared_ptr<ThermalSpectrum>(new ThermalSpectrum());
    std::stable_sort(modes.begin(), modes.end(), [](const Mode& a, const Mode& b) {
      return a.energy < b.energy || (a.energy == b.energy && a.index < b.index);
    });

    // Boltzmann factors are taken relative to the ground mode and summed
    // smallest first.
    const double ground = modes.front().energy;
    double shifted_sum = 0.0;
    for (auto it = modes.rbegin(); it != modes.rend(); ++it) {
      shifted_sum += boltzmann ? std::exp(-beta * (it->energy - ground)) : it->weight;
    }
    for (auto& mode : modes) {
      const double raw = boltzmann ? std::exp(-beta * (mode.energy - ground)) : mode.weight;
      mode.weight = raw / shifted_sum;
    }

    spectrum->model_ = model;
    spectrum->beta_ = beta;
    spectrum->partition_sum_ = boltzmann ? shifted_sum * std::exp(-beta * ground) : 1.0;
    spectrum->tail_bound_ = tail_bound;
    spectrum->tail_mass_ = tail_mass;
    spectrum->cutoff_ = cutoff;
    // -log(p_n) / beta + E_0 = E_n; for Boltzmann weights E_0 = -log(Z) / beta.
    spectrum->energy_offset_ = ground + std::log(modes.front().weight) / beta;

    std::uint64_t hash = 0xcbf29ce484222325ULL;
    hash = fnv1a(hash, static_cast<std::uint64_t>(model.kind()));
    for (std::size_t i = 0; i < modes.size(); ++i) {
      spectrum->lookup_.emplace(modes[i].index, i);
      for (int c : modes[i].index.components) hash = fnv1a(hash, static_cast<std::uint64_t>(c));
      hash = fnv1a(hash, std::bit_cast<std::uint64_t>(modes[i].energy));
      hash = fnv1a(hash, std::bit_cast<std::uint64_t>(modes[i].weight));
    }
    spectrum->hash_ = hash;
    spectrum->modes_ = std::move(modes);
    return spectrum;
  }
};

std::optional<std::size_t> ThermalSpectrum::find(const ModeIndex& index) const {
  const auto it = lookup_.find(index);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

double gaussian_tail_bound(const SpectralModel& model, double beta, int radius) {
  require_beta(beta);
  if (model.kind() == ModelKind::custom) return 0.0;
  const double a = beta * model.energy_scale();
  const double r = std::max(radius, 0);
  // One coordinate: sum_{n > R} e^{-a n^2} <= int_R^inf e^{-a x^2} dx.
  const double one_sided = 0.5 * std::sqrt(std::numbers::pi / a) * std::erfc(std::sqrt(a) * r);
  if (model.kind() == ModelKind::circle) return 2.0 * one_sided;
  const int dims = model.index_dimension();
  if (dims == 1) return one_sided;
  // sum_{||n||>R} e^{-a||n||^2} <= e^{-t a R^2} (sum_{nu>=1} e^{-(1-t) a nu^2})^K
  double best = std::numeric_limits<double>::infinity();
  for (int step = 1; step < 100; ++step) {
    const double t = step / 100.0;
    const double log_bound = -t * a * r * r + dims * std::log(positive_theta((1.0 - t) * a));
    best = std::min(best, std::exp(log_bound));
  }
  return best;
}

SpectrumPtr thermalize_to_cutoff(const SpectralModel& model, double beta, int cutoff,
                                 std::size_t mode_budget) {
  require_beta(beta);
  if (model.kind() == ModelKind::custom) {
    throw InvalidParameter("custom spectra are built from their weights, not thermalized");
  }
  if (cutoff < 0 || cutoff > kMaxRadius) throw ResourceLimit("mode cutoff out of range");
  const int dims = model.index_dimension();
  if (dims > 64) throw ResourceLimit("box index dimension N*d exceeds 64");
  if (model.kind() == ModelKind::box && static_cast<long>(cutoff) * cutoff < dims) {
    throw InvalidParameter("cutoff too small to retain any box mode");
  }
  std::vector<Mode> modes;
  for (auto& index : enumerate_modes(model, cutoff, mode_budget)) {
    const double energy = model.energy(index);
    modes.push_back({std::move(index), energy, 0.0});
  }
  if (modes.empty()) throw InvalidParameter("cutoff retains no modes in this symmetry sector");
  return SpectrumBuilder::build(model, beta, std::move(modes), true,
                                gaussian_tail_bound(model, beta, cutoff), 0.0, cutoff);
}

SpectrumPtr thermalize(const SpectralModel& model, double beta, double tail_mass,
                       std::size_t mode_budget) {
  require_beta(beta);
  if (!(tail_mass > 0.0)) throw InvalidParameter("tail mass must be positive");
  if (model.kind() == ModelKind::custom) {
    throw InvalidParameter("custom spectra are built from their weights, not thermalized");
  }
  const int dims = model.index_dimension();
  int radius = model.kind() == ModelKind::box
                   ? static_cast<int>(std::ceil(std::sqrt(static_cast<double>(dims))))
                   : 0;
  for (;; ++radius) {
    if (radius > kMaxRadius) throw ResourceLimit("no cutoff satisfies the requested tail mass");
    const double tail = gaussian_tail_bound(model, beta, radius);
    std::vector<ModeIndex> indices;
    try {
      indices = enumerate_modes(model, radius, mode_budget);
    } catch (const ResourceLimit&) {
      throw ResourceLimit("tail mass " + std::to_string(tail_mass) +
                          " needs more modes than the budget of " + std::to_string(mode_budget));
    }
    if (indices.empty()) continue;
    double partition = 0.0;
    for (const auto& index : indices) partition += std::exp(-beta * model.energy(index));
    if (tail <= tail_mass * partition) {
      auto spectrum = thermalize_to_cutoff(model, beta, radius, mode_budget);
      return SpectrumBuilder::build(model, beta,
                                    std::vector<Mode>(spectrum->modes().begin(),
                                                      spectrum->modes().end()),
                                    true, tail, tail_mass, radius);
    }
  }
}

CustomModel build_custom_model(std::span<const CustomWeight> weights, CustomBasis basis,
                               double mass, double hbar) {
  auto model = SpectralModel::custom(basis, mass, hbar);
  if (weights.empty()) throw InvalidParameter("custom spectrum needs at least one weight");
  double total = 0.0;
  for (const auto& w : weights) {
    if (!(w.weight >= 0.0) || !std::isfinite(w.weight)) {
      throw InvalidParameter("custom weights must be nonnegative and finite");
    }
    total += w.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw InvalidParameter("custom weights sum to " + std::to_string(total) + ", expected 1");
  }
  std::vector<Mode> modes;
  std::map<int, bool> seen;
  for (const auto& w : weights) {
    if (seen[w.label]) throw InvalidParameter("duplicate custom mode label");
    seen[w.label] = true;
    if (w.weight == 0.0) continue;
    double energy;
    if (w.energy) {
      energy = *w.energy;
    } else if (basis == CustomBasis::circle) {
      energy = model.energy(ModeIndex{w.label});
    } else {
      energy = -std::log(w.weight);
    }
    modes.push_back({ModeIndex{w.label}, energy, w.weight / total});
  }

  // The spectrum carries the given weights verbatim (renormalized), with a
  // nominal beta = 1 used only for regime annotations.
  return {model, SpectrumBuilder::build(model, 1.0, std::move(modes), false, 0.0, 0.0, -1)};
}

Complex kernel(const ThermalSpectrum& spectrum, std::span<const double> q,
               std::span<const double> q_prime) {
  const auto& model = spectrum.model();
  model.require_point(q);
  model.require_point(q_prime);
  double re = 0.0, im = 0.0;
  for (const auto& mode : spectrum.modes()) {
    const Complex a = model.eigenfunction(mode.index, q);
    const Complex b = model.eigenfunction(mode.index, q_prime);
    // a * conj(b), written out so that swapping q and q' conjugates exactly.
    re += mode.weight * (a.real() * b.real() + a.imag() * b.imag());
    im += mode.weight * (a.imag() * b.real() - a.real() * b.imag());
  }
  return {re, im};
}

Complex kernel(const ThermalSpectrum& spectrum, double q, double q_prime) {
  return kernel(spectrum, std::span<const double>(&q, 1), std::span<const double>(&q_prime, 1));
}

double kernel_mixed_derivative(const ThermalSpectrum& spectrum, double q) {
  const auto& model = spectrum.model();
  if (model.configuration_dimension() != 1) {
    throw UnsupportedModel("mixed kernel derivative requires a one-dimensional model");
  }
  const int order = 1;
  double sum = 0.0;
  for (const auto& mode : spectrum.modes()) {
    sum += mode.weight *
           std::norm(model.eigenfunction_derivative(mode.index, std::span<const double>(&q, 1),
                                                    std::span<const int>(&order, 1)));
  }
  return sum;
}

SpectrumPtr restrict_to_cutoff(const ThermalSpectrum& spectrum, int cutoff) {
  const auto& model = spectrum.model();
  if (!model.has_index_norm()) throw UnsupportedModel("restriction needs an index norm");
  std::vector<Mode> kept;
  for (const auto& mode : spectrum.modes()) {
    if (model.mode_norm(mode.index) <= cutoff + 1e-9) kept.push_back(mode);
  }
  if (kept.empty()) throw InvalidParameter("restriction retains no modes");
  const double tail = model.kind() == ModelKind::custom
                          ? 0.0
                          : gaussian_tail_bound(model, spectrum.beta(), cutoff);
  return SpectrumBuilder::build(model, spectrum.beta(), std::move(kept),
                                model.kind() != ModelKind::custom, tail, 0.0, cutoff);
}

}  // namespace gapthermal
