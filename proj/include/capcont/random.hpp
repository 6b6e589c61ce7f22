#pragma once

#include <cstdint>
#include <random>

#include "capcont/linalg.hpp"

namespace capcont {

/// Seeded generator. Independent streams are derived from (seed, index)
/// with a splitmix64 counter hash, so trial results do not depend on the
/// order in which trials execute.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  static Rng stream(std::uint64_t seed, std::uint64_t index);

  double uniform(double lo = 0.0, double hi = 1.0);
  int uniform_int(int lo, int hi);  // inclusive
  double normal();
  Complex complex_normal();

  std::mt19937_64& engine() noexcept { return engine_; }

 private:
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Haar-random unit vector from a normalized complex Gaussian.
ComplexVector haar_vector(int d, Rng& rng);
PureState haar_pure_state(const Dims& dims, Rng& rng);

/// Haar-random unitary (QR of a Ginibre matrix with phase fix).
ComplexMatrix haar_unitary(int d, Rng& rng);

/// Induced-measure random state G G^dagger / Tr with G of size d x rank.
DensityMatrix random_density(const Dims& dims, int rank, Rng& rng);
DensityMatrix random_density(int d, int rank, Rng& rng);

/// GUE-style random Hermitian matrix.
ComplexMatrix random_hermitian(int d, Rng& rng);

}  // namespace capcont
