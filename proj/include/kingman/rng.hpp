#pragma once

// Reproducible random number streams.
//
// All samplers in this library draw from kingman::Rng, a xoshiro256++
// generator with all distributions implemented in-house so that results are
// bit-reproducible for a fixed (seed, stream) key across platforms and
// library versions. Streams are derived by splitmix64 key mixing: the same
// (master seed, stream id) always yields the identical sequence, and adding
// replicates never perturbs existing ones.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string_view>

namespace kingman {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// FNV-1a, used to key streams by experiment name.
inline std::uint64_t hash_name(std::string_view name) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : name) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

namespace detail {

// Ziggurat tables for the standard exponential (256 layers). Layer widths
// x_i are decreasing in the build loop; x_255 = R is the base strip edge and
// V is the common layer area, so that 256*V = 1.
struct ExpZiggurat {
  static constexpr double kR = 7.69711747013104972;
  static constexpr double kV = 3.949659822581572e-3;
  static constexpr double kScale = 1.0 / 72057594037927936.0;  // 2^-56

  std::array<std::uint64_t, 256> ke;
  std::array<double, 256> we;
  std::array<double, 256> fe;

  ExpZiggurat() {
    const double m = 72057594037927936.0;  // 2^56
    double de = kR;
    double te = kR;
    const double q = kV / std::exp(-de);
    ke[0] = static_cast<std::uint64_t>((de / q) * m);
    ke[1] = 0;
    we[0] = q / m;
    we[255] = de / m;
    fe[0] = 1.0;
    fe[255] = std::exp(-de);
    for (int i = 254; i >= 1; --i) {
      de = -std::log(kV / de + std::exp(-de));
      ke[i + 1] = static_cast<std::uint64_t>((de / te) * m);
      te = de;
      fe[i] = std::exp(-de);
      we[i] = de / m;
    }
  }

  static const ExpZiggurat& instance() {
    static const ExpZiggurat z;
    return z;
  }
};

}  // namespace detail

// xoshiro256++ (Blackman & Vigna), seeded through splitmix64.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& w : state_) w = splitmix64(s);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0, 1), 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform on (0, 1], safe as a log argument.
  double uniform_pos() {
    return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  // Unbiased integer in [0, n) (Lemire's method).
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below: n must be positive");
    unsigned __int128 m = static_cast<unsigned __int128>(next()) * n;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo < n) {
      const std::uint64_t t = (0 - n) % n;
      while (lo < t) {
        m = static_cast<unsigned __int128>(next()) * n;
        lo = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  // Standard exponential via the 256-layer ziggurat.
  double exp_standard() {
    const auto& z = detail::ExpZiggurat::instance();
    for (;;) {
      const std::uint64_t u = next();
      const int i = static_cast<int>(u & 255U);
      const std::uint64_t j = u >> 8;
      const double x = static_cast<double>(j) * z.we[i];
      if (j < z.ke[i]) return x;
      if (i == 0) return detail::ExpZiggurat::kR - std::log(uniform_pos());
      if (z.fe[i] + uniform() * (z.fe[i - 1] - z.fe[i]) < std::exp(-x))
        return x;
    }
  }

  double exponential(double rate) {
    if (!(rate > 0.0))
      throw std::invalid_argument("Rng::exponential: rate must be > 0");
    return exp_standard() / rate;
  }

  // Standard normal, Box-Muller with a cached spare.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(2.0 * exp_standard());
    const double theta = 6.283185307179586476925286766559 * uniform();
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_{};
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Independent stream keyed by (master seed, stream id).
inline Rng split_rng(std::uint64_t master_seed, std::uint64_t stream_id) {
  std::uint64_t s = master_seed;
  const std::uint64_t a = splitmix64(s);
  s = stream_id ^ 0xD1B54A32D192ED03ULL;
  const std::uint64_t b = splitmix64(s);
  return Rng(a ^ (b * 0x9E3779B97F4A7C15ULL + 0x2545F4914F6CDD1DULL));
}

// Stream keyed by (master seed, experiment name, replicate index), so that
// distinct experiments sharing a master seed do not overlap.
inline Rng split_rng(std::uint64_t master_seed, std::string_view experiment,
                     std::uint64_t replicate) {
  return split_rng(master_seed ^ hash_name(experiment), replicate);
}

}  // namespace kingman
