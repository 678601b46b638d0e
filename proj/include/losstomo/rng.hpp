#pragma once

#include <cstdint>
#include <initializer_list>

namespace losstomo {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Hashes a tuple of counters into one 64-bit key.
inline std::uint64_t mix_keys(std::initializer_list<std::uint64_t> keys) {
  std::uint64_t state = 0x243f6a8885a308d3ULL;
  std::uint64_t h = 0;
  for (std::uint64_t k : keys) {
    state ^= k + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    h = splitmix64(state);
  }
  return h;
}

/// Counter-addressed random stream: the draws for (seed, replicate, tree,
/// probe) do not depend on how probes are distributed across threads.
class ProbeStream {
 public:
  ProbeStream(std::uint64_t seed, std::uint64_t replicate, std::uint64_t tree,
              std::uint64_t probe)
      : state_(mix_keys({seed, replicate, tree, probe})) {}

  std::uint64_t next() { return splitmix64(state_); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

}  // namespace losstomo
