#ifndef STREAMPUNCT_PRNG_HPP
#define STREAMPUNCT_PRNG_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace streampunct {

// Seeded draws used everywhere randomness appears. std::mt19937_64 output is
// specified by the standard, and the reductions below avoid the library
// distributions, so every draw is reproducible across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, n). n must be positive.
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(next_u64() % n); }

  // Uniform in [0, 1).
  double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool chance(double p) { return unit() < p; }

  template <class T>
  void shuffle(std::vector<T>& xs) {
    for (std::size_t i = xs.size(); i > 1; --i) {
      std::swap(xs[i - 1], xs[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

// Stable per-stream seed derivation (splitmix64 over the pair).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace streampunct

#endif
