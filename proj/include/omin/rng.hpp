#ifndef OMIN_RNG_HPP_INCLUDED
#define OMIN_RNG_HPP_INCLUDED

#include <cstdint>
#include <random>

namespace omin::rng {

constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ull;

// splitmix64 finalizer.
constexpr std::uint64_t mix(std::uint64_t x) noexcept {
  x += kGoldenGamma;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Seed of substream `index`: mix(seed + (index + 1) * golden_gamma).
constexpr std::uint64_t substream_seed(std::uint64_t seed,
                                       std::uint64_t index) noexcept {
  return mix(seed + (index + 1) * kGoldenGamma);
}

/// Deterministic stream over std::mt19937_64. The draw helpers are spelled
/// out because the std distributions differ between standard libraries.
class Stream {
public:
  explicit Stream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // 53-bit uniform in [0, 1).
  double uniform01() {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform01() < p; }

  // Unbiased integer in [0, bound) by rejection; bound > 0.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t x = next();
      if (x >= threshold)
        return x % bound;
    }
  }

private:
  std::mt19937_64 engine_;
};

inline Stream substream(std::uint64_t seed, std::uint64_t index) {
  return Stream(substream_seed(seed, index));
}

} // namespace omin::rng

#endif // OMIN_RNG_HPP_INCLUDED
