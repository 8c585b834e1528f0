#pragma once

#include <cmath>
#include <cstdint>

namespace bbb {

/// Identifies one logical random stream. Distinct (root_seed, stream_index)
/// pairs give independent streams; the same pair gives the same stream on
/// every run and with every worker count.
namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// SplitMix64 (Steele, Lea, Flood 2014). Used both as the sequential
// generator step and as the mixing hash for substream keys.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  return mix64(state += 0x9e3779b97f4a7c15ULL);
}
}  // namespace detail

struct SeedSpec {
  std::uint64_t root_seed = 0;
  std::uint64_t stream_index = 0;

  /// Child stream; hash-combined so derived streams never collide with
  /// sibling indices handed out elsewhere.
  SeedSpec stream(std::uint64_t offset) const {
    return SeedSpec{root_seed,
                    detail::mix64(stream_index ^ (0xa0761d6478bd642fULL +
                                                  offset * 0xe7037ed1a0b428dbULL))};
  }
};

/// Small counter-seeded generator. Every Monte Carlo sample owns a substream
/// keyed by (root_seed, stream_index, sample_index), so the sequence consumed
/// by one sample never leaks into the next and chunk scheduling is free to
/// change without changing any draw.
class Rng {
 public:
  explicit Rng(const SeedSpec& seed, std::uint64_t sample_index = 0) {
    std::uint64_t s = seed.root_seed;
    state_ = detail::splitmix64(s);
    s = state_ ^ (seed.stream_index * 0xd1342543de82ef95ULL);
    state_ = detail::splitmix64(s);
    s = state_ ^ (sample_index * 0x2545f4914f6cdd1dULL);
    state_ = detail::splitmix64(s);
  }

  std::uint64_t next_u64() { return detail::splitmix64(state_); }

  /// Uniform on (0,1); never returns 0 or 1.
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double exponential() { return -std::log(uniform()); }

  /// Standard normal, Box-Muller. Consumes two uniforms per value; the
  /// second value of the pair is cached.
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double r = std::sqrt(2.0 * exponential());
    double t = 6.283185307179586477 * uniform();
    cached_ = r * std::sin(t);
    have_cached_ = true;
    return r * std::cos(t);
  }

 private:
  std::uint64_t state_;
  double cached_ = 0.0;
  bool have_cached_ = false;
};

}  // namespace bbb
