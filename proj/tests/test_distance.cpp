#include <doctest.h>

#include <cmath>

#include "capcont/channels.hpp"
#include "capcont/distance.hpp"
#include "capcont/errors.hpp"
#include "capcont/random.hpp"
#include "oracles.hpp"

using namespace capcont;

namespace {

SdpResult diamond(const QuantumChannel& a, const QuantumChannel& b) {
  return diamond_norm(HermitianPreservingMap::difference(a, b));
}

QuantumChannel random_ch(int din, int dout, std::uint64_t seed) {
  Rng rng(seed);
  return random_channel(din, dout, rng.uniform_int((din + dout - 1) / dout, din * dout), rng);
}

QuantumChannel phase(double theta) {
  ComplexMatrix u = ComplexMatrix::Identity(2, 2);
  u(1, 1) = std::polar(1.0, theta);
  return QuantumChannel(2, 2, {u});
}

void check_certified(const SdpResult& r) {
  CHECK(r.status == SdpStatus::kOptimal);
  CHECK(r.dual_value <= r.value + 1e-12);
  CHECK(r.gap() <= 1e-6 * (1.0 + std::abs(r.value)));
}

}  // namespace

TEST_SUITE("distance") {
  TEST_CASE("trace distance") {
    const DensityMatrix a = DensityMatrix::basis_state(2, 0);
    const DensityMatrix b = DensityMatrix::basis_state(2, 1);
    CHECK(trace_distance(a, b) == doctest::Approx(2.0));
    CHECK(trace_distance_half(a, b) == doctest::Approx(1.0));
    CHECK(trace_distance(a, a) == doctest::Approx(0.0));
    CHECK(trace_distance(a, DensityMatrix::maximally_mixed(2)) == doctest::Approx(1.0));
    Rng rng(3);
    for (int t = 0; t < 10; ++t) {
      const DensityMatrix r = random_density(3, 3, rng), s = random_density(3, 2, rng);
      CHECK(trace_distance(r, s) == doctest::Approx(oracle::trace_norm(r.matrix() - s.matrix())).epsilon(1e-10));
    }
    CHECK_THROWS_AS(trace_distance(a, DensityMatrix::maximally_mixed(3)), DimensionError);
  }

  TEST_CASE("channel minus itself has zero diamond norm") {
    for (std::uint64_t s = 0; s < 5; ++s) {
      const QuantumChannel ch = random_ch(2, 2, s);
      const SdpResult r = diamond(ch, ch);
      CHECK(r.value <= 1e-8);
      CHECK(r.dual_value >= -1e-12);
    }
  }

  TEST_CASE("identity against depolarizing") {
    for (double p : {0.1, 0.3, 0.5, 1.0}) {
      const QuantumChannel dep = depolarizing(2, p);
      const SdpResult r = diamond(identity_channel(2), dep);
      check_certified(r);
      CHECK(r.value == doctest::Approx(1.5 * p).epsilon(1e-6));
      CHECK(oracle::maximally_entangled_probe(identity_channel(2), dep) == doctest::Approx(1.5 * p).epsilon(1e-10));
      CHECK(oracle::depolarizing_distance(2, p) == doctest::Approx(1.5 * p));
    }
    const SdpResult r3 = diamond(identity_channel(3), depolarizing(3, 0.3));
    check_certified(r3);
    CHECK(r3.value == doctest::Approx(16.0 * 0.3 / 9.0).epsilon(1e-6));
  }

  TEST_CASE("identity against a phase rotation") {
    for (double theta : {0.3, 1.0, 2.5}) {
      const SdpResult r = diamond(identity_channel(2), phase(theta));
      check_certified(r);
      CHECK(r.value == doctest::Approx(2.0 * std::abs(std::sin(theta / 2.0))).epsilon(1e-6));
    }
  }

  TEST_CASE("erasure channels") {
    for (auto [p, q] : {std::pair{0.1, 0.4}, std::pair{0.0, 1.0}, std::pair{0.25, 0.3}}) {
      const SdpResult r = diamond(erasure(2, p), erasure(2, q));
      check_certified(r);
      CHECK(r.value == doctest::Approx(2.0 * std::abs(p - q)).epsilon(1e-6));
    }
  }

  TEST_CASE("orthogonal outputs reach the maximum") {
    const SdpResult r = diamond(sink_channel(2), embedded_identity(2));
    check_certified(r);
    CHECK(r.value == doctest::Approx(2.0).epsilon(1e-6));
  }

  TEST_CASE("homogeneity, symmetry and the triangle inequality") {
    for (std::uint64_t s = 0; s < 5; ++s) {
      const QuantumChannel a = random_ch(2, 2, s), b = random_ch(2, 2, s + 20), c = random_ch(2, 2, s + 40);
      const HermitianPreservingMap ab = HermitianPreservingMap::difference(a, b);
      const double base = diamond_norm(ab).value;
      for (double k : {0.5, 2.0}) CHECK(diamond_norm(ab.scaled(k)).value == doctest::Approx(k * base).epsilon(1e-6));
      CHECK(diamond(b, a).value == doctest::Approx(base).epsilon(1e-6));
      CHECK(base <= diamond(a, c).value + diamond(c, b).value + 2e-6);
      CHECK(base <= 2.0 + 1e-6);
    }
  }

  TEST_CASE("mixing scales the distance") {
    for (std::uint64_t s = 0; s < 4; ++s) {
      const QuantumChannel n = random_ch(2, 2, s), r = random_ch(2, 2, s + 7);
      const double q = 0.1 + 0.2 * static_cast<double>(s);
      const QuantumChannel m = mix({n, r}, {1 - q, q});
      CHECK(diamond(n, m).value == doctest::Approx(q * diamond(n, r).value).epsilon(1e-5));
    }
  }

  TEST_CASE("probes never exceed the certified value") {
    for (std::uint64_t s = 0; s < 10; ++s) {
      const QuantumChannel a = random_ch(2, 3, s), b = random_ch(2, 3, s + 30);
      const HermitianPreservingMap diff = HermitianPreservingMap::difference(a, b);
      const SdpResult r = diamond_norm(diff);
      check_certified(r);
      CHECK(diamond_lower_probe(diff, 50, s) <= r.value + 1e-6);
      CHECK(oracle::maximally_entangled_probe(a, b) <= r.value + 1e-6);
      // The reported input attains the lower bound.
      CHECK(r.dual_value <= r.value);
    }
  }

  TEST_CASE("probe value matches a direct computation") {
    Rng rng(4);
    const QuantumChannel a = random_ch(2, 2, 1), b = random_ch(2, 2, 2);
    const HermitianPreservingMap diff = HermitianPreservingMap::difference(a, b);
    const ComplexVector psi = haar_vector(4, rng);
    // psi ordered (input, reference); output on (out, reference).
    const ComplexMatrix pp = psi * psi.adjoint();
    ComplexMatrix expect = ComplexMatrix::Zero(4, 4);
    for (int r1 = 0; r1 < 2; ++r1)
      for (int r2 = 0; r2 < 2; ++r2) {
        ComplexMatrix block(2, 2);
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) block(i, j) = pp(i * 2 + r1, j * 2 + r2);
        const ComplexMatrix o = oracle::act(a, block) - oracle::act(b, block);
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) expect(i * 2 + r1, j * 2 + r2) = o(i, j);
      }
    CHECK(probe_value(diff, psi, 2) == doctest::Approx(oracle::trace_norm(expect)).epsilon(1e-10));
  }

  TEST_CASE("mismatched channels are rejected") {
    CHECK_THROWS_AS(HermitianPreservingMap::difference(identity_channel(2), identity_channel(3)), DimensionError);
  }
}
