#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gapthermal/rng.hpp"
#include "gapthermal/wave_function.hpp"

namespace gapthermal {

enum class SamplerKind { g, ga, gap };

std::string to_string(SamplerKind kind);
SamplerKind parse_sampler_kind(const std::string& text);

/// Gaussian measure G(rho): independent coefficients c_n = sqrt(p_n / 2)(xi + i eta).
WaveFunction sample_g(const SpectrumPtr& spectrum, RandomSeed seed);

/// Size-biased measure GA(rho)(dpsi) = ||psi||^2 G(rho)(dpsi), sampled exactly:
/// pick K with probability p_K, draw |c_K|^2 from the Gamma(2, p_K) law with a
/// uniform phase, and every other coefficient as under G(rho).
WaveFunction sample_ga(const SpectrumPtr& spectrum, RandomSeed seed);

/// GAP(rho): a GA draw projected onto the unit sphere.
WaveFunction sample_gap(const SpectrumPtr& spectrum, RandomSeed seed);

WaveFunction sample(SamplerKind kind, const SpectrumPtr& spectrum, RandomSeed seed);

/// Draw j of a batch uses RandomSeed{seed, j}.
std::vector<WaveFunction> sample_batch(SamplerKind kind, const SpectrumPtr& spectrum,
                                       std::size_t count, std::uint64_t seed);

inline constexpr std::size_t kMinCovarianceSamples = 100;

struct OffDiagonalEstimate {
  std::size_t row;
  std::size_t column;
  Complex value;  ///< (1/M) sum c_row conj(c_column)
};

/// Empirical second moments of a sampler, E|c_n|^2 and selected E c_j c_k^*.
struct CovarianceEstimate {
  std::vector<double> diagonal;
  /// Empirical standard errors of the diagonal means.  Under G(rho) they
  /// approach p_n / sqrt(M) since E|z|^4 = 2 (E|z|^2)^2 for complex Gaussians.
  std::vector<double> standard_errors;
  std::vector<OffDiagonalEstimate> off_diagonal;
  std::size_t samples = 0;
};

CovarianceEstimate estimate_covariance(SamplerKind kind, const SpectrumPtr& spectrum,
                                       std::size_t samples, std::uint64_t seed,
                                       std::span<const std::pair<std::size_t, std::size_t>>
                                           pairs = {});

}  // namespace gapthermal
