// Counter-based randomness: every draw is a pure function of (seed, stream, index).
#pragma once

#include <cstdint>

namespace franson {

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Stateless random source keyed by (seed, stream).
///
/// Draw i of a source never depends on how many other draws were made or in
/// which order, so trial-indexed simulations are reproducible under any
/// execution plan.
class RandomSource {
 public:
  constexpr RandomSource(std::uint64_t seed, std::uint64_t stream)
      : seed_(seed), stream_(stream), key_(derive_key(seed, stream)) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  constexpr std::uint64_t bits(std::uint64_t index) const {
    return mix64(key_ + (index + 1) * 0x9e3779b97f4a7c15ULL);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  constexpr double uniform(std::uint64_t index) const {
    return static_cast<double>(bits(index) >> 11) * 0x1.0p-53;
  }

  /// A source on a different stream with the same seed.
  constexpr RandomSource substream(std::uint64_t stream) const { return {seed_, stream}; }

 private:
  static constexpr std::uint64_t derive_key(std::uint64_t seed, std::uint64_t stream) {
    return mix64(mix64(seed ^ 0x6a09e667f3bcc909ULL) ^ mix64(stream + 0xbb67ae8584caa73bULL));
  }

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t key_;
};

inline double draw_uniform(const RandomSource& rs, std::uint64_t index) { return rs.uniform(index); }

}  // namespace franson
