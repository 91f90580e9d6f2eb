#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace gapthermal {

/// Philox4x64-10 block function (Salmon et al., Random123).
using PhiloxCounter = std::array<std::uint64_t, 4>;
using PhiloxKey = std::array<std::uint64_t, 2>;

PhiloxCounter philox4x64(PhiloxCounter counter, PhiloxKey key) noexcept;

inline constexpr const char* kGeneratorName = "philox4x64-10";

/// Identifies one independent random stream.  Draw number `k` of stream `s`
/// under seed `x` is a pure function of (x, s, k), so samples can be produced
/// in any order or on any thread.
struct RandomSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
};

/// Counter-based generator over a single stream.  Satisfies
/// UniformRandomBitGenerator.
class CounterRng {
public:
  using result_type = std::uint64_t;

  explicit CounterRng(RandomSeed seed, std::uint64_t substream = 0) noexcept;

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept;

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform_open() noexcept;

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform() noexcept;

  std::uint64_t draws() const noexcept { return draws_; }

private:
  PhiloxKey key_;
  PhiloxCounter counter_;
  PhiloxCounter block_{};
  unsigned position_ = 4;
  std::uint64_t draws_ = 0;
};

}  // namespace gapthermal
