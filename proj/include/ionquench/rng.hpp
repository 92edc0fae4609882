#pragma once

#include <array>
#include <cmath>
#include <cstdint>

// Counter-based RNG (Philox4x32-10). A draw is a pure function of
// (key, counter), so parallel scheduling of realizations cannot change any
// stream: each realization owns a key, and the counter encodes the step and
// draw index.

namespace ionq {

struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter round_count(Counter c, Key k) {
    for (int r = 0; r < 10; ++r) {
      c = single_round(c, k);
      k[0] += 0x9E3779B9u;
      k[1] += 0xBB67AE85u;
    }
    return c;
  }

 private:
  static Counter single_round(const Counter& c, const Key& k) {
    const std::uint64_t p0 = std::uint64_t(0xD2511F53u) * c[0];
    const std::uint64_t p1 = std::uint64_t(0xCD9E8D57u) * c[2];
    return {std::uint32_t(p1 >> 32) ^ c[1] ^ k[0], std::uint32_t(p1),
            std::uint32_t(p0 >> 32) ^ c[3] ^ k[1], std::uint32_t(p0)};
  }
};

// Gaussian stream keyed on (seed, stream). Consecutive pairs of normals come
// from one Philox block; the block counter is (step, draw) so a fixed number
// of draws per step is not required.
class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint64_t stream)
      : key_{std::uint32_t(seed), std::uint32_t(seed >> 32)},
        stream_(stream) {}

  // Two independent standard normals for draw index `draw` of step `step`.
  std::array<double, 2> normal_pair(std::uint64_t step, std::uint32_t draw) const {
    Philox4x32::Counter ctr = {std::uint32_t(step), std::uint32_t(step >> 32),
                               std::uint32_t(stream_) ^ draw,
                               std::uint32_t(stream_ >> 32)};
    const auto out = Philox4x32::round_count(ctr, key_);
    const double u1 = to_open_unit(out[0], out[1]);
    const double u2 = to_open_unit(out[2], out[3]);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 6.283185307179586 * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
  }

 private:
  // 53-bit uniform in (0,1); never 0, so log() is safe.
  static double to_open_unit(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t bits = (std::uint64_t(hi) << 32) | lo;
    return (double(bits >> 11) + 0.5) * (1.0 / 9007199254740992.0);
  }

  Philox4x32::Key key_;
  std::uint64_t stream_;
};

// splitmix64 finalizer, used to derive per-realization seeds from
// (master seed, grid point index, realization index). The mixing chain is
// part of the on-disk reproducibility contract; do not change it.
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t point,
                                 std::uint64_t realization) {
  return mix64(mix64(master ^ mix64(point + 1)) ^ mix64(realization + 0x51ED2701ull));
}

}  // namespace ionq
