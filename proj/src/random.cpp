#include "capcont/random.hpp"

#include <cmath>

#include "capcont/errors.hpp"

namespace capcont {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

Rng Rng::stream(std::uint64_t seed, std::uint64_t index) {
  return Rng(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

double Rng::uniform(double lo, double hi) {
  // 53-bit mantissa straight from the engine.
  const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

int Rng::uniform_int(int lo, int hi) {
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(engine_() % span);
}

double Rng::normal() {
  // Box-Muller on two engine draws.
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

Complex Rng::complex_normal() { return {normal(), normal()}; }

ComplexVector haar_vector(int d, Rng& rng) {
  if (d < 1) throw ArgumentError("dimension must be positive");
  ComplexVector v(d);
  for (int i = 0; i < d; ++i) v(i) = rng.complex_normal();
  return v / v.norm();
}

PureState haar_pure_state(const Dims& dims, Rng& rng) {
  return PureState(haar_vector(static_cast<int>(dims_product(dims)), rng), dims);
}

ComplexMatrix haar_unitary(int d, Rng& rng) {
  ComplexMatrix g(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) g(i, j) = rng.complex_normal();
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j) {
    const Complex diag = r(j, j);
    const double a = std::abs(diag);
    if (a > 0.0) q.col(j) *= diag / a;
  }
  return q;
}

DensityMatrix random_density(const Dims& dims, int rank, Rng& rng) {
  const int d = static_cast<int>(dims_product(dims));
  if (rank < 1) throw ArgumentError("rank must be positive");
  ComplexMatrix g(d, rank);
  for (int j = 0; j < rank; ++j)
    for (int i = 0; i < d; ++i) g(i, j) = rng.complex_normal();
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return DensityMatrix::assume_valid(std::move(rho), dims);
}

DensityMatrix random_density(int d, int rank, Rng& rng) { return random_density(Dims{d}, rank, rng); }

ComplexMatrix random_hermitian(int d, Rng& rng) {
  ComplexMatrix g(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) g(i, j) = rng.complex_normal();
  return hermitian_part(g);
}

}  // namespace capcont
