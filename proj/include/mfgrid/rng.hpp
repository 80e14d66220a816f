#pragma once

// Counter-based random numbers: every draw is a pure function of
// (seed, counter), so results do not depend on evaluation order or threads.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <utility>

namespace mfgrid {

// Philox4x32 with 10 rounds (Salmon et al., Random123).
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter ctr, Key key) {
    for (int r = 0; r < 10; ++r) {
      if (r > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      ctr = round(ctr, key);
    }
    return ctr;
  }

  static Key key_from_seed(std::uint64_t seed) {
    return {static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static Counter round(const Counter& c, const Key& k) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }
};

// Stream domains keep population draws and Brownian increments disjoint.
enum class RngDomain : std::uint32_t { brownian = 1, population = 2 };

inline Philox4x32::Counter make_counter(std::uint32_t a, std::uint32_t b,
                                        std::uint32_t c, RngDomain domain,
                                        std::uint32_t stream) {
  return {a, b, c, (static_cast<std::uint32_t>(domain) << 28) ^ (stream & 0x0FFFFFFFu)};
}

// Uniform in [0, 1) from the top 53 bits.
inline double to_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Two independent standard normals (Box-Muller) from one Philox block.
inline std::pair<double, double> normal_pair(const Philox4x32::Counter& out) {
  const double u1 = 1.0 - to_unit(out[0], out[1]);  // (0, 1]
  const double u2 = to_unit(out[2], out[3]);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * std::numbers::pi * u2;
  return {r * std::cos(theta), r * std::sin(theta)};
}

}  // namespace mfgrid
