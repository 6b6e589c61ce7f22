#include <doctest.h>

#include <cmath>

#include "capcont/errors.hpp"
#include "capcont/linalg.hpp"
#include "capcont/random.hpp"
#include "oracles.hpp"

using namespace capcont;

namespace {

ComplexMatrix diag(std::initializer_list<double> v) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<long>(v.size()), static_cast<long>(v.size()));
  long i = 0;
  for (double x : v) m(i, i) = x, ++i;
  return m;
}

}  // namespace

TEST_SUITE("linalg") {
  TEST_CASE("tensor of identities and diagonal projectors") {
    CHECK(tensor(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(2, 2)).isApprox(ComplexMatrix::Identity(4, 4)));
    CHECK(tensor(diag({1, 0}), diag({0, 1})).isApprox(diag({0, 1, 0, 0})));
  }

  TEST_CASE("tensor entries follow the index formula") {
    Rng rng(3);
    const ComplexMatrix a = random_hermitian(2, rng) + Complex(0, 1) * random_hermitian(2, rng);
    const ComplexMatrix b = random_hermitian(3, rng);
    const ComplexMatrix t = tensor(a, b);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 3; ++k)
          for (int l = 0; l < 3; ++l) CHECK(std::abs(t(3 * i + k, 3 * j + l) - a(i, j) * b(k, l)) < 1e-14);
    CHECK((t - oracle::kron(a, b)).norm() < 1e-13);
  }

  TEST_CASE("tensor rejects products past the dimension budget") {
    CHECK_THROWS_AS(tensor(ComplexMatrix::Identity(100, 100), ComplexMatrix::Identity(50, 50)), DimensionError);
  }

  TEST_CASE("partial trace of the maximally entangled pair is maximally mixed") {
    const DensityMatrix phi = PureState::maximally_entangled(2).density();
    CHECK(partial_trace(phi, {0}).matrix().isApprox(ComplexMatrix::Identity(2, 2) / 2.0));
    CHECK(partial_trace(phi, {1}).matrix().isApprox(ComplexMatrix::Identity(2, 2) / 2.0));
  }

  TEST_CASE("partial trace of a product state returns the factor") {
    Rng rng(5);
    const DensityMatrix a = random_density(2, 2, rng);
    const DensityMatrix b = random_density(3, 3, rng);
    const DensityMatrix ab = tensor(a, b);
    CHECK((partial_trace(ab, {0}).matrix() - a.matrix()).norm() < 1e-12);
    CHECK((partial_trace(ab, {1}).matrix() - b.matrix()).norm() < 1e-12);
  }

  TEST_CASE("partial trace satisfies the duality with X (x) I") {
    Rng rng(11);
    const DensityMatrix rho = random_density(Dims{2, 2}, 4, rng);
    const ComplexMatrix reduced = partial_trace(rho, {0}).matrix();
    for (int t = 0; t < 10; ++t) {
      const ComplexMatrix x = random_hermitian(2, rng);
      const Complex lhs = (reduced * x).trace();
      const Complex rhs = (rho.matrix() * oracle::kron(x, ComplexMatrix::Identity(2, 2))).trace();
      CHECK(std::abs(lhs - rhs) < 1e-12);
    }
  }

  TEST_CASE("partial trace agrees with explicit loops on three factors") {
    Rng rng(13);
    const DensityMatrix rho = random_density(Dims{2, 3, 2}, 5, rng);
    // Keep {0, 1}: trace the last factor.
    CHECK((partial_trace(rho, {0, 1}).matrix() - oracle::trace_second(rho.matrix(), 6, 2)).norm() < 1e-12);
    // Keep {1, 2}: trace the first factor.
    CHECK((partial_trace(rho, {1, 2}).matrix() - oracle::trace_first(rho.matrix(), 2, 6)).norm() < 1e-12);
    CHECK_THROWS_AS(partial_trace(rho, {3}), ArgumentError);
  }

  TEST_CASE("partial trace preserves trace and positivity") {
    for (std::uint64_t s = 0; s < 30; ++s) {
      Rng rng(s);
      const int da = rng.uniform_int(1, 4), db = rng.uniform_int(1, 4);
      const DensityMatrix rho = random_density(Dims{da, db}, rng.uniform_int(1, da * db), rng);
      for (int keep : {0, 1}) {
        const int k[] = {keep};
        const ComplexMatrix r = partial_trace(rho, k).matrix();
        CHECK(std::abs(r.trace() - 1.0) < tol::kTrace);
        CHECK(eigvalsh(r).minCoeff() > -tol::kPsd);
      }
    }
  }

  TEST_CASE("eigh sorts eigenvalues in descending order") {
    const Eigensystem es = eigh(diag({3, 1, 2}));
    CHECK(es.values(0) == doctest::Approx(3));
    CHECK(es.values(1) == doctest::Approx(2));
    CHECK(es.values(2) == doctest::Approx(1));
    ComplexMatrix x(2, 2);
    x << 0, 1, 1, 0;
    const RealVector ev = eigvalsh(x);
    CHECK(ev(0) == doctest::Approx(1));
    CHECK(ev(1) == doctest::Approx(-1));
  }

  TEST_CASE("eigh reconstructs random Hermitian matrices") {
    for (std::uint64_t s = 0; s < 10; ++s) {
      const ComplexMatrix h = oracle::random_hermitian(6, s);
      const Eigensystem es = eigh(h);
      CHECK((h - es.vectors * es.values.asDiagonal() * es.vectors.adjoint()).norm() < tol::kEig);
      CHECK((es.vectors.adjoint() * es.vectors - ComplexMatrix::Identity(6, 6)).norm() < 1e-10);
    }
  }

  TEST_CASE("eigh rejects non-Hermitian input") {
    ComplexMatrix x(2, 2);
    x << 0, 1, 0, 0;
    CHECK_THROWS_AS(eigh(x), ArgumentError);
  }

  TEST_CASE("density matrix spectrum lies in [0, 1] and sums to one") {
    Rng rng(17);
    for (int t = 0; t < 20; ++t) {
      const DensityMatrix rho = random_density(5, rng.uniform_int(1, 5), rng);
      const RealVector ev = eigvalsh(rho.matrix());
      CHECK(ev.minCoeff() >= -tol::kPsd);
      CHECK(ev.maxCoeff() <= 1.0 + tol::kPsd);
      CHECK(std::abs(ev.sum() - 1.0) < tol::kTrace);
    }
  }

  TEST_CASE("density matrix validation") {
    CHECK_THROWS_AS(DensityMatrix(diag({0.5, 0.6})), ArgumentError);
    CHECK_THROWS_AS(DensityMatrix(diag({1.5, -0.5})), ArgumentError);
    ComplexMatrix x = diag({0.5, 0.5});
    x(0, 1) = 0.3;
    CHECK_THROWS_AS(DensityMatrix{x}, ArgumentError);
    CHECK_THROWS_AS(DensityMatrix(diag({0.5, 0.5}), Dims{3}), DimensionError);
    CHECK_NOTHROW(DensityMatrix(diag({0.25, 0.25, 0.25, 0.25}), Dims{2, 2}));
  }

  TEST_CASE("purification of a pure state has a trivial reference") {
    const PureState psi = purify(DensityMatrix::basis_state(2, 0));
    CHECK(psi.dims().back() == 1);
    CHECK(std::abs(std::abs(psi.vector()(0)) - 1.0) < 1e-12);
  }

  TEST_CASE("purification of the maximally mixed qubit is maximally entangled") {
    const PureState psi = purify(DensityMatrix::maximally_mixed(2));
    CHECK(psi.dims() == Dims{2, 2});
    const DensityMatrix r = psi.density();
    CHECK((partial_trace(r, {0}).matrix() - ComplexMatrix::Identity(2, 2) / 2.0).norm() < 1e-12);
    CHECK((partial_trace(r, {1}).matrix() - ComplexMatrix::Identity(2, 2) / 2.0).norm() < 1e-12);
  }

  TEST_CASE("purify then trace out the reference round trips") {
    for (std::uint64_t s = 0; s < 100; ++s) {
      Rng rng(s);
      const int d = rng.uniform_int(2, 4);
      const DensityMatrix rho = random_density(d, rng.uniform_int(1, d), rng);
      const PureState psi = purify(rho);
      CHECK((partial_trace(psi.density(), {0}).matrix() - rho.matrix()).cwiseAbs().maxCoeff() < tol::kTrace);
    }
    Rng rng(99);
    const DensityMatrix rank2 = random_density(3, 2, rng);
    CHECK(purify(rank2).dims().back() == 2);
  }

  TEST_CASE("trace norm examples") {
    Rng rng(2);
    const DensityMatrix rho = random_density(3, 3, rng);
    CHECK(trace_norm(rho.matrix() - rho.matrix()) == doctest::Approx(0.0));
    CHECK(trace_norm(diag({1, -1})) == doctest::Approx(2.0));
    CHECK(trace_norm(diag({1, 0}) - diag({0.75, 0.25})) == doctest::Approx(0.5));
  }

  TEST_CASE("trace norm is a norm and matches the singular values") {
    for (std::uint64_t s = 0; s < 20; ++s) {
      const ComplexMatrix a = oracle::random_hermitian(4, 2 * s);
      const ComplexMatrix b = oracle::random_hermitian(4, 2 * s + 1);
      CHECK(trace_norm(a + b) <= trace_norm(a) + trace_norm(b) + 1e-12);
      CHECK(trace_norm(-2.5 * a) == doctest::Approx(2.5 * trace_norm(a)).epsilon(1e-12));
      CHECK(trace_norm(a) == doctest::Approx(oracle::trace_norm(a)).epsilon(1e-12));
      const ComplexMatrix nonherm = a + Complex(0, 1) * b.triangularView<Eigen::Upper>().toDenseMatrix();
      CHECK(trace_norm(nonherm) == doctest::Approx(oracle::trace_norm(nonherm)).epsilon(1e-10));
    }
  }

  TEST_CASE("factor permutation matches explicit reindexing") {
    Rng rng(21);
    const DensityMatrix a = random_density(2, 2, rng);
    const DensityMatrix b = random_density(3, 3, rng);
    const int swap[] = {1, 0};
    const ComplexMatrix swapped = permute_factors(tensor(a.matrix(), b.matrix()), Dims{2, 3}, swap);
    CHECK((swapped - oracle::kron(b.matrix(), a.matrix())).norm() < 1e-12);
    const ComplexVector u = haar_vector(2, rng), v = haar_vector(3, rng);
    ComplexVector uv(6), vu(6);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 3; ++j) uv(3 * i + j) = u(i) * v(j), vu(2 * j + i) = u(i) * v(j);
    CHECK((permute_factors(uv, Dims{2, 3}, swap) - vu).norm() < 1e-12);
  }

  TEST_CASE("spectral map applies a function to the eigenvalues") {
    const ComplexMatrix h = oracle::random_hermitian(4, 7);
    const ComplexMatrix sq = spectral_map(h, [](double x) { return x * x; });
    CHECK((sq - h * h).norm() < 1e-10);
  }
}

TEST_SUITE("random") {
  TEST_CASE("equal seeds give equal draws and streams differ") {
    Rng a(42), b(42);
    for (int i = 0; i < 5; ++i) CHECK(a.normal() == b.normal());
    Rng s0 = Rng::stream(42, 0), s1 = Rng::stream(42, 1), s0b = Rng::stream(42, 0);
    const double x0 = s0.uniform();
    CHECK(x0 != s1.uniform());
    CHECK(x0 == s0b.uniform());
  }

  TEST_CASE("uniform and integer draws stay in range") {
    Rng rng(1);
    for (int i = 0; i < 1000; ++i) {
      const double u = rng.uniform();
      CHECK((u >= 0.0 && u < 1.0));
      const int k = rng.uniform_int(2, 5);
      CHECK((k >= 2 && k <= 5));
    }
  }

  TEST_CASE("Haar unitaries are unitary and Haar vectors normalized") {
    Rng rng(8);
    for (int d : {1, 2, 5}) {
      const ComplexMatrix u = haar_unitary(d, rng);
      CHECK((u.adjoint() * u - ComplexMatrix::Identity(d, d)).norm() < 1e-12);
      CHECK(std::abs(haar_vector(d, rng).norm() - 1.0) < 1e-12);
    }
  }

  TEST_CASE("random density matrices have the requested rank") {
    Rng rng(4);
    for (int rank = 1; rank <= 4; ++rank) {
      const DensityMatrix rho = random_density(4, rank, rng);
      const RealVector ev = eigvalsh(rho.matrix());
      int numeric_rank = 0;
      for (long i = 0; i < ev.size(); ++i) numeric_rank += ev(i) > 1e-10 ? 1 : 0;
      CHECK(numeric_rank == rank);
    }
  }
}
