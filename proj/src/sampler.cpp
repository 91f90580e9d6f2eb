#include "gapthermal/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gapthermal/errors.hpp"
#include "gapthermal/parallel.hpp"

namespace gapthermal {

namespace {

constexpr std::size_t kBlockSize = 512;

// Complex Gaussian with E|z|^2 = variance: |z|^2 is exponential with mean
// `variance` and the phase is uniform (Box-Muller in polar form).
Complex complex_gaussian(CounterRng& rng, double variance) {
  const double radius = std::sqrt(-variance * std::log(rng.uniform_open()));
  const double phase = 2.0 * std::numbers::pi * rng.uniform();
  return std::polar(radius, phase);
}

std::size_t choose_mode(const ThermalSpectrum& spectrum, double u) {
  double cumulative = 0.0;
  const auto modes = spectrum.modes();
  for (std::size_t i = 0; i < modes.size(); ++i) {
    cumulative += modes[i].weight;
    if (u < cumulative) return i;
  }
  return modes.size() - 1;
}

WaveFunction draw_ga(const SpectrumPtr& spectrum, RandomSeed seed, std::uint64_t substream) {
  CounterRng rng(seed, substream);
  const std::size_t chosen = choose_mode(*spectrum, rng.uniform());
  std::vector<Complex> coefficients(spectrum->size());
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    const double p = spectrum->mode(i).weight;
    if (i == chosen) {
      // Gamma(2, p): sum of two exponentials with mean p.
      const double size = -p * (std::log(rng.uniform_open()) + std::log(rng.uniform_open()));
      coefficients[i] = std::polar(std::sqrt(size), 2.0 * std::numbers::pi * rng.uniform());
    } else {
      coefficients[i] = complex_gaussian(rng, p);
    }
  }
  WaveFunction psi(spectrum, std::move(coefficients), Provenance::ga);
  psi.with_seed(seed).with_size_biased_mode(chosen);
  return psi;
}

}  // namespace

std::string to_string(SamplerKind kind) {
  switch (kind) {
    case SamplerKind::g: return "G";
    case SamplerKind::ga: return "GA";
    case SamplerKind::gap: return "GAP";
  }
  return "?";
}

SamplerKind parse_sampler_kind(const std::string& text) {
  if (text == "G") return SamplerKind::g;
  if (text == "GA") return SamplerKind::ga;
  if (text == "GAP") return SamplerKind::gap;
  throw InvalidParameter("unknown sampler '" + text + "' (expected G, GA or GAP)");
}

WaveFunction sample_g(const SpectrumPtr& spectrum, RandomSeed seed) {
  if (!spectrum) throw InvalidParameter("sampler needs a spectrum");
  CounterRng rng(seed);
  std::vector<Complex> coefficients(spectrum->size());
  for (std::size_t i = 0; i < coefficients.size(); ++i) {
    coefficients[i] = complex_gaussian(rng, spectrum->mode(i).weight);
  }
  WaveFunction psi(spectrum, std::move(coefficients), Provenance::g);
  psi.with_seed(seed);
  return psi;
}

WaveFunction sample_ga(const SpectrumPtr& spectrum, RandomSeed seed) {
  if (!spectrum) throw InvalidParameter("sampler needs a spectrum");
  return draw_ga(spectrum, seed, 0);
}

WaveFunction sample_gap(const SpectrumPtr& spectrum, RandomSeed seed) {
  if (!spectrum) throw InvalidParameter("sampler needs a spectrum");
  for (std::uint64_t attempt = 0; attempt < 2; ++attempt) {
    const WaveFunction ga = draw_ga(spectrum, seed, attempt);
    const double norm = ga.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) continue;
    std::vector<Complex> coefficients = ga.coefficients();
    for (auto& c : coefficients) c /= norm;
    WaveFunction psi(spectrum, std::move(coefficients), Provenance::gap);
    psi.with_seed(seed).with_size_biased_mode(*ga.size_biased_mode());
    return psi;
  }
  throw InternalError("GAP sampler drew a zero-norm vector twice");
}

WaveFunction sample(SamplerKind kind, const SpectrumPtr& spectrum, RandomSeed seed) {
  switch (kind) {
    case SamplerKind::g: return sample_g(spectrum, seed);
    case SamplerKind::ga: return sample_ga(spectrum, seed);
    case SamplerKind::gap: return sample_gap(spectrum, seed);
  }
  throw InternalError("unknown sampler kind");
}

std::vector<WaveFunction> sample_batch(SamplerKind kind, const SpectrumPtr& spectrum,
                                       std::size_t count, std::uint64_t seed) {
  std::vector<std::optional<WaveFunction>> slots(count);
  parallel_for(count, [&](std::size_t j) { slots[j].emplace(sample(kind, spectrum, {seed, j})); });
  std::vector<WaveFunction> out;
  out.reserve(count);
  for (auto& slot : slots) out.push_back(std::move(*slot));
  return out;
}

CovarianceEstimate estimate_covariance(
    SamplerKind kind, const SpectrumPtr& spectrum, std::size_t samples, std::uint64_t seed,
    std::span<const std::pair<std::size_t, std::size_t>> pairs) {
  if (samples < kMinCovarianceSamples) {
    throw InvalidParameter("covariance estimation needs at least 100 samples");
  }
  const std::size_t n = spectrum->size();
  for (const auto& [j, k] : pairs) {
    if (j >= n || k >= n) throw InvalidParameter("off-diagonal pair outside the spectrum");
  }

  struct Block {
    std::vector<double> second, fourth;
    std::vector<Complex> cross;
  };
  const std::size_t blocks = (samples + kBlockSize - 1) / kBlockSize;
  std::vector<Block> partial(blocks);
  parallel_for(blocks, [&](std::size_t b) {
    Block& block = partial[b];
    block.second.assign(n, 0.0);
    block.fourth.assign(n, 0.0);
    block.cross.assign(pairs.size(), 0.0);
    const std::size_t end = std::min(samples, (b + 1) * kBlockSize);
    for (std::size_t s = b * kBlockSize; s < end; ++s) {
      const WaveFunction psi = sample(kind, spectrum, {seed, s});
      const auto& c = psi.coefficients();
      for (std::size_t i = 0; i < n; ++i) {
        const double m2 = std::norm(c[i]);
        block.second[i] += m2;
        block.fourth[i] += m2 * m2;
      }
      for (std::size_t p = 0; p < pairs.size(); ++p) {
        block.cross[p] += c[pairs[p].first] * std::conj(c[pairs[p].second]);
      }
    }
  });

  std::vector<double> second(n, 0.0), fourth(n, 0.0);
  std::vector<Complex> cross(pairs.size(), 0.0);
  for (const auto& block : partial) {
    for (std::size_t i = 0; i < n; ++i) {
      second[i] += block.second[i];
      fourth[i] += block.fourth[i];
    }
    for (std::size_t p = 0; p < pairs.size(); ++p) cross[p] += block.cross[p];
  }

  const double m = static_cast<double>(samples);
  CovarianceEstimate estimate;
  estimate.samples = samples;
  estimate.diagonal.resize(n);
  estimate.standard_errors.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double mean = second[i] / m;
    const double variance = std::max(0.0, (fourth[i] / m - mean * mean) * m / (m - 1.0));
    estimate.diagonal[i] = mean;
    estimate.standard_errors[i] = std::sqrt(variance / m);
  }
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    estimate.off_diagonal.push_back({pairs[p].first, pairs[p].second, cross[p] / m});
  }
  return estimate;
}

}  // namespace gapthermal
