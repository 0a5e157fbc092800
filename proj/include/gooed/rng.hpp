#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace gooed {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Mixes a master seed with up to two stream identifiers into a fresh seed.
/// Used to split deterministic, statistically independent substreams
/// (per outer iteration, per design point, per retry) from one study seed.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t id_a,
                              std::uint64_t id_b = 0) {
  std::uint64_t s = master;
  std::uint64_t h = splitmix64(s);
  s ^= id_a * 0xff51afd7ed558ccdULL;
  h ^= splitmix64(s);
  s ^= id_b * 0xc4ceb9fe1a85ec53ULL;
  h ^= splitmix64(s);
  return h;
}

/// Seeded random stream with hand-rolled distribution transforms, so that
/// sequences are reproducible bit-for-bit for a given seed regardless of
/// standard-library version. Not thread safe; use one stream per task.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : gen_(seed) {}

  static RngStream derive(std::uint64_t master, std::uint64_t id_a,
                          std::uint64_t id_b = 0) {
    return RngStream(mix_seed(master, id_a, id_b));
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Marsaglia polar method (spare value cached).
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u = 0.0, v = 0.0, s = 0.0;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
  }

  /// Uniform integer in [0, n). Lemire multiply-shift; the O(n/2^64)
  /// modulo bias is far below anything observable here.
  std::uint64_t uniform_index(std::uint64_t n) {
    const unsigned __int128 m =
        static_cast<unsigned __int128>(gen_()) * static_cast<unsigned __int128>(n);
    return static_cast<std::uint64_t>(m >> 64);
  }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace gooed
