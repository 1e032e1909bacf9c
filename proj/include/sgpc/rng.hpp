#ifndef SGPC_RNG_HPP
#define SGPC_RNG_HPP

#include <cstdint>

namespace sgpc {

/// Deterministic 64-bit generator (splitmix64, Vigna 2015). One instance owns
/// one stream; independent streams for different purposes are derived from the
/// same master seed with distinct tags via derive_stream().
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [0,1) with 53 random bits.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on [-1,1).
  double uniform_pm1() { return 2.0 * uniform01() - 1.0; }

  /// Uniform integer in {0,...,n-1}, rejection-sampled so it is exactly uniform.
  std::uint64_t uniform_index(std::uint64_t n) {
    const std::uint64_t limit = n * (~std::uint64_t{0} / n);
    std::uint64_t v;
    do {
      v = next_u64();
    } while (v >= limit);
    return v % n;
  }

  /// Standard coin flip, +1 or -1 with equal probability.
  double sign_flip() { return (next_u64() & 1u) ? 1.0 : -1.0; }

 private:
  std::uint64_t state_;
};

/// Derives an independent stream from (master_seed, tag). The tag is scrambled
/// through one splitmix64 round so nearby tags give unrelated streams.
inline SplitMix64 derive_stream(std::uint64_t master_seed, std::uint64_t tag) {
  SplitMix64 scrambler(tag);
  return SplitMix64(master_seed ^ scrambler.next_u64());
}

}  // namespace sgpc

#endif
