#ifndef LVPOP_RNG_HPP
#define LVPOP_RNG_HPP

#include <cmath>
#include <cstdint>

namespace lvpop {

// splitmix64 (Steele, Lea, Vigna); bijective on 64-bit words.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Per-trial stream derivation: seed(base, i) = sm(sm(i + GAMMA) ^ sm(base)).
// For a fixed base this is injective in the trial index, since every stage
// is a bijection of the index. Stable across versions (golden-value tested).
inline std::uint64_t seed_for_trial(std::uint64_t base_seed, std::uint64_t trial_index) {
  std::uint64_t a = base_seed;
  std::uint64_t base_mix = splitmix64(a);
  std::uint64_t b = trial_index + 0x9e3779b97f4a7c15ULL;
  std::uint64_t idx_mix = splitmix64(b);
  std::uint64_t c = idx_mix ^ base_mix;
  return splitmix64(c);
}

// xoshiro256** 1.0 (Blackman, Vigna), seeded through splitmix64.
// One fixed generator for every stochastic component of the toolkit, so a
// (spec, state, seed, pairing) quadruple replays bit-exactly within a build.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
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

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Unbiased uniform integer in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % bound;
    }
  }

  // Number of failures before the first success of a Bernoulli(q) sequence,
  // by inversion: floor(log(1-u) / log(1-q)). Saturates at `cap`. The u < q
  // case is exactly skip = 0, so the logs are only paid on the q-tail.
  std::uint64_t geometric_skips(double q, std::uint64_t cap) {
    if (q >= 1.0) return 0;
    double u = uniform();
    if (u < q) return 0;
    double m = std::floor(std::log1p(-u) / std::log1p(-q));
    if (!(m >= 0)) return 0;
    if (m >= static_cast<double>(cap)) return cap;
    return static_cast<std::uint64_t>(m);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

}  // namespace lvpop

#endif
