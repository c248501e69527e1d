#pragma once

#include <cstdint>

namespace fraczeta {

// Counter-based generator: every variate is a pure function of
// (seed, sample index, component), so parallel evaluation and reruns
// produce bit-identical streams.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t bits(std::uint64_t index, std::uint64_t component) const {
    std::uint64_t x = mix(seed_ ^ mix(index + 0x9e3779b97f4a7c15ull));
    return mix(x ^ mix(component + 0xbf58476d1ce4e5b9ull));
  }

  // Uniform in [0, 1).
  double uniform01(std::uint64_t index, std::uint64_t component) const {
    return static_cast<double>(bits(index, component) >> 11) * 0x1.0p-53;
  }

  double uniform(std::uint64_t index, std::uint64_t component, double lo,
                 double hi) const {
    return lo + (hi - lo) * uniform01(index, component);
  }

  std::uint64_t seed() const { return seed_; }

 private:
  // SplitMix64 finalizer.
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
};

}  // namespace fraczeta
