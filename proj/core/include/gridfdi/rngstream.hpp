#pragma once

#include <cstdint>

namespace gridfdi {

/// Deterministic per-index random substream (xoshiro256** seeded through
/// splitmix64). Streams derived from the same seed but different indices
/// are independent, so work items can be distributed over any number of
/// threads and still reproduce bit-identical results: stream k always
/// produces the same draws regardless of which thread runs it.
///
/// std::uniform_real_distribution is implementation-defined, so the
/// uniform mapping is done by hand here.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t x = seed ^ (0x9e3779b97f4a7c15ull * (stream + 1));
    for (auto& w : s_) w = splitmix64(x);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform draw on [lo, hi); returns lo when the range is degenerate.
  double uniform(double lo, double hi) {
    const double u01 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    return lo + u01 * (hi - lo);
  }

 private:
  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  static std::uint64_t rotl(std::uint64_t v, int k) {
    return (v << k) | (v >> (64 - k));
  }

  std::uint64_t s_[4];
};

}  // namespace gridfdi
