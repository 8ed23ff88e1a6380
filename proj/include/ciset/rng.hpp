#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace ciset {

// Deterministic counter-based generator (SplitMix64). The stream is a pure
// function of the 64-bit seed and the draw counter, so identical seeds give
// bit-identical sequences on every platform. Streams are never shared across
// work items; split(i) derives an independent child stream per item, which
// keeps results reproducible regardless of thread scheduling.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : seed_(seed), state_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1) with 53 random mantissa bits.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

  // Child stream for work item `index`, independent of this stream's draw
  // position. Children of equal (seed, index) coincide.
  Rng split(std::uint64_t index) const {
    std::uint64_t z = seed_ ^ (0xD1B54A32D192ED03ULL * (index + 1));
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return Rng(z ^ (z >> 31));
  }

 private:
  std::uint64_t seed_;
  std::uint64_t state_;
};

// One componentwise-uniform draw in the axis box [lo, hi]; lo == hi pins the
// component exactly.
inline Eigen::VectorXd uniform_in_box(Rng& rng, const Eigen::VectorXd& lo,
                                      const Eigen::VectorXd& hi) {
  Eigen::VectorXd x(lo.size());
  for (Eigen::Index i = 0; i < lo.size(); ++i) x[i] = rng.uniform(lo[i], hi[i]);
  return x;
}

}  // namespace ciset
