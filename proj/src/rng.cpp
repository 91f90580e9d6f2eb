#include "gapthermal/rng.hpp"

namespace gapthermal {

namespace {

constexpr std::uint64_t kMultiplier0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMultiplier1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

__extension__ typedef unsigned __int128 uint128;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
  const uint128 product = static_cast<uint128>(a) * b;
  hi = static_cast<std::uint64_t>(product >> 64);
  lo = static_cast<std::uint64_t>(product);
}

}  // namespace

PhiloxCounter philox4x64(PhiloxCounter ctr, PhiloxKey key) noexcept {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    std::uint64_t hi0, lo0, hi1, lo1;
    mulhilo(kMultiplier0, ctr[0], hi0, lo0);
    mulhilo(kMultiplier1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

// Counter layout: word 0 is the block number inside the stream, word 1 the
// stream, word 2 a substream tag (retries), word 3 unused.
CounterRng::CounterRng(RandomSeed seed, std::uint64_t substream) noexcept
    : key_{seed.seed, 0x6761702d7468726dULL}, counter_{0, seed.stream, substream, 0} {}

CounterRng::result_type CounterRng::operator()() noexcept {
  if (position_ == 4) {
    block_ = philox4x64(counter_, key_);
    ++counter_[0];
    position_ = 0;
  }
  ++draws_;
  return block_[position_++];
}

double CounterRng::uniform_open() noexcept {
  // (k + 0.5) / 2^53 never hits 0 or 1.
  const std::uint64_t bits = (*this)() >> 11;
  return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

double CounterRng::uniform() noexcept {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

}  // namespace gapthermal
