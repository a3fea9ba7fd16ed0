#ifndef EXCINET_RANDOM_HPP
#define EXCINET_RANDOM_HPP

#include <cstdint>
#include <random>

namespace excinet {

/// SplitMix64 mixing step. Used both as a standalone generator for seed
/// derivation and to expand user seeds into well-separated engine seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed for sample `index` of the stream identified by `master`. Samples are
/// independent of how work is scheduled, and the first k seeds of a (master,
/// k+1)-run prefix those of a (master, k)-run by construction.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t s = master ^ (0x632be59bd9b4e019ULL * (index + 1));
  std::uint64_t a = splitmix64(s);
  std::uint64_t b = splitmix64(s);
  return a ^ (b << 1 | b >> 63);
}

/// Uniform double in [lo, hi) from the top 53 bits of the engine output.
/// std::uniform_real_distribution is not bit-stable across standard library
/// implementations; this mapping is.
inline double uniform_double(std::mt19937_64& engine, double lo, double hi) {
  const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

}  // namespace excinet

#endif  // EXCINET_RANDOM_HPP
