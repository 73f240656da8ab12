#pragma once

#include <cstdint>
#include <random>

namespace gmol {

/// SplitMix64 finalizer; used to derive independent stream seeds.
std::uint64_t splitmix64(std::uint64_t x);

/// Seed for stream `stream` of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Seedable uniform source over the open interval (0,1).
///
/// Backed by std::mt19937_64, whose output sequence is fixed by the standard, so a
/// given seed yields the same draws on every conforming implementation. Instances
/// are not thread-safe; give each thread its own Rng with a derived seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Uniform draw strictly inside (0,1) with 53-bit resolution.
  double uniform();

  /// Uniform draw on (lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Independent child generator for sub-stream `stream`.
  Rng split(std::uint64_t stream) const { return Rng(derive_seed(seed_, stream)); }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace gmol
