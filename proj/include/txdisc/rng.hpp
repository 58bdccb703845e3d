#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <random>

namespace txdisc {

// SplitMix64 mixing step. Used to derive independent stream seeds from a
// master seed: seeds must not collide across (test index, variant) pairs,
// and the derivation must be a pure function so experiments replay exactly.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Chains splitmix64 over a path of stream tags, e.g.
// derive_seed(master, {kWorldStream, test_index}).
inline std::uint64_t derive_seed(std::uint64_t master,
                                 std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = splitmix64(master);
  for (std::uint64_t p : path) s = splitmix64(s ^ p);
  return s;
}

// Deterministic random stream with explicit samplers. The samplers are
// implemented here (not via std::*_distribution) so that a given seed
// produces the same sequence on every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Box-Muller; uses two uniforms per draw.
  double normal(double mean, double stddev) {
    const double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    const double u2 = uniform();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * mag * std::cos(2.0 * M_PI * u2);
  }

  bool bernoulli(double p) { return uniform() < p; }

  // Uniform on {0, ..., n-1}, unbiased via rejection.
  int uniform_int(int n) {
    const auto un = static_cast<std::uint64_t>(n);
    const std::uint64_t threshold = (0 - un) % un;  // 2^64 mod n
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= threshold) return static_cast<int>(r % un);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace txdisc
