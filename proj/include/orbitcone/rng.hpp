#ifndef ORBITCONE_RNG_HPP
#define ORBITCONE_RNG_HPP

#include <cmath>
#include <cstdint>

namespace orbitcone {

/// Counter-free splittable PRNG (splitmix64 core). Every sampling loop in the
/// toolkit derives one stream per work item from (seed, index), so serial and
/// parallel execution produce identical draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  /// Substream for item `index` of a run seeded with `seed`.
  static Rng at(std::uint64_t seed, std::uint64_t index) {
    Rng r(mix(seed ^ mix(index + 0x9e3779b97f4a7c15ULL)));
    r.next_u64();
    return r;
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  /// Standard normal via Box-Muller (two fresh uniforms per call, no cache).
  double gauss() {
    double u1 = uniform();
    double u2 = uniform();
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 33)) * 0xff51afd7ed558ccdULL;
    z = (z ^ (z >> 33)) * 0xc4ceb9fe1a85ec53ULL;
    return z ^ (z >> 33);
  }

  std::uint64_t state_;
};

}  // namespace orbitcone

#endif
