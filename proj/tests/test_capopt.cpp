#include <doctest.h>

#include <cmath>

#include "capcont/capopt.hpp"
#include "capcont/channels.hpp"
#include "capcont/errors.hpp"
#include "capcont/random.hpp"

using namespace capcont;

namespace {

OptimizerOptions quick(std::uint64_t seed = 1, int restarts = 4) {
  OptimizerOptions o;
  o.restarts = restarts;
  o.max_iters = 1000;
  o.seed = seed;
  return o;
}

bool same_report(const OptimizationReport& a, const OptimizationReport& b) {
  return a.best_value == b.best_value && a.best_restart == b.best_restart && a.iterations == b.iterations &&
         a.restart_values == b.restart_values && a.converged == b.converged;
}

}  // namespace

TEST_SUITE("capopt") {
  TEST_CASE("coherent information maximization") {
    CHECK(max_coherent_information(identity_channel(2), quick()).best_value == doctest::Approx(1.0).epsilon(1e-6));
    for (double p : {0.0, 0.1, 0.25}) {
      const OptimizationReport r = max_coherent_information(erasure(2, p), quick());
      CHECK(r.best_value == doctest::Approx(1.0 - 2.0 * p).epsilon(tol::kOpt));
      CHECK(r.best_value <= 1.0 - 2.0 * p + tol::kEnt);
    }
    CHECK(std::abs(max_coherent_information(erasure(2, 0.5), quick()).best_value) < 1e-6);
  }

  TEST_CASE("Holevo maximization") {
    CHECK(max_holevo(identity_channel(2), 2, quick()).best_value == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(max_holevo(constant_channel(2), 3, quick()).best_value) < 1e-9);
    CHECK(max_holevo(erasure(2, 0.25), 2, quick()).best_value == doctest::Approx(0.75).epsilon(tol::kOpt));
    // Depolarizing qubit: 1 - H(p/2) at orthogonal inputs.
    const double p = 0.3;
    CHECK(max_holevo(depolarizing(2, p), 2, quick()).best_value ==
          doctest::Approx(1.0 - binary_entropy(p / 2.0)).epsilon(tol::kOpt));
  }

  TEST_CASE("codeword ensemble on the truncated classical example") {
    const int n = 8;
    std::vector<EnsembleItem> items;
    for (int k = 0; k < n; ++k) items.push_back({1.0 / n, DensityMatrix::basis_state(n, k)});
    CHECK(holevo_information(truncated_classical_example(n), Ensemble(std::move(items))) ==
          doctest::Approx(1.0).epsilon(1e-9));
  }

  TEST_CASE("private information maximization") {
    CHECK(max_private(identity_channel(2), 2, quick()).best_value == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(max_private(erasure(2, 0.5), 2, quick()).best_value) < 1e-6);
    const double priv = max_private(erasure(2, 0.25), 2, quick()).best_value;
    CHECK(priv >= 0.5 - tol::kOpt);
    CHECK(priv <= max_holevo(erasure(2, 0.25), 2, quick()).best_value + tol::kOpt);
  }

  TEST_CASE("sandwich on random channels") {
    for (std::uint64_t s = 0; s < 3; ++s) {
      Rng rng(s + 200);
      const QuantumChannel ch = random_channel(2, 2, 2, rng);
      const double coh = max_coherent_information(ch, quick(s)).best_value;
      const double priv = max_private(ch, 4, quick(s)).best_value;
      const double chi = max_holevo(ch, 4, quick(s)).best_value;
      CHECK(coh <= priv + tol::kOpt);
      CHECK(priv <= chi + tol::kOpt);
    }
  }

  TEST_CASE("argmax reproduces the reported value") {
    Rng rng(31);
    const QuantumChannel ch = random_channel(2, 3, 2, rng);
    const OptimizationReport coh = max_coherent_information(ch, quick());
    REQUIRE(coh.best_state.has_value());
    CHECK(coherent_information(ch, *coh.best_state) == doctest::Approx(coh.best_value).epsilon(tol::kEnt));
    const OptimizationReport chi = max_holevo(ch, 3, quick());
    REQUIRE(chi.best_ensemble.has_value());
    CHECK(chi.best_ensemble->size() == 3u);
    CHECK(holevo_information(ch, *chi.best_ensemble) == doctest::Approx(chi.best_value).epsilon(tol::kEnt));
    const OptimizationReport priv = max_private(ch, 3, quick());
    REQUIRE(priv.best_ensemble.has_value());
    CHECK(private_information(ch, *priv.best_ensemble) == doctest::Approx(priv.best_value).epsilon(tol::kEnt));
    CHECK(coh.restarts == 4);
    CHECK(coh.iterations.size() == 4u);
    CHECK(coh.restart_values.size() == 4u);
    CHECK(coh.restart_values[coh.best_restart] == doctest::Approx(coh.best_value).epsilon(tol::kEnt));
  }

  TEST_CASE("seeded runs are identical") {
    Rng rng(3);
    const QuantumChannel ch = random_channel(2, 2, 3, rng);
    CHECK(same_report(max_coherent_information(ch, quick(9)), max_coherent_information(ch, quick(9))));
    CHECK(same_report(max_holevo(ch, 3, quick(9)), max_holevo(ch, 3, quick(9))));
    CHECK(same_report(max_private(ch, 3, quick(9)), max_private(ch, 3, quick(9))));
  }

  TEST_CASE("input unitary does not change the optimum") {
    for (std::uint64_t s = 0; s < 2; ++s) {
      Rng rng(s + 40);
      const QuantumChannel ch = random_channel(2, 2, 2, rng);
      const QuantumChannel rotated = precompose_unitary(ch, haar_unitary(2, rng));
      CHECK(max_holevo(rotated, 3, quick(s, 8)).best_value ==
            doctest::Approx(max_holevo(ch, 3, quick(s, 8)).best_value).epsilon(tol::kOpt));
      const QuantumChannel er = precompose_unitary(erasure(2, 0.2), haar_unitary(2, rng));
      CHECK(max_coherent_information(er, quick(s)).best_value == doctest::Approx(0.6).epsilon(tol::kOpt));
    }
  }

  TEST_CASE("n-copy wrappers") {
    const NCopyReport one = n_copy_coherent_information(erasure(2, 0.25), 1, quick());
    CHECK(one.per_copy == doctest::Approx(one.single_letter));
    const NCopyReport id2 = n_copy_coherent_information(identity_channel(2), 2, quick());
    CHECK(id2.report.best_value == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(id2.per_copy == doctest::Approx(1.0).epsilon(1e-6));
    const NCopyReport er2 = n_copy_coherent_information(erasure(2, 0.25), 2, quick());
    CHECK(er2.per_copy == doctest::Approx(0.5).epsilon(tol::kOpt));
    CHECK(er2.superadditivity_consistent);
    const NCopyReport h2 = n_copy_holevo(identity_channel(2), 2, 4, quick());
    CHECK(h2.per_copy == doctest::Approx(1.0).epsilon(tol::kOpt));
    CHECK_THROWS_AS(n_copy_holevo(erasure(2, 0.1), 8, 2, quick()), DimensionError);
    CHECK_THROWS_AS(n_copy_private(identity_channel(2), 0, 2, quick()), ArgumentError);
  }

  TEST_CASE("invalid settings") {
    CHECK_THROWS_AS(max_holevo(identity_channel(2), 1, quick()), ArgumentError);
    OptimizerOptions bad = quick();
    bad.restarts = 0;
    CHECK_THROWS_AS(max_coherent_information(identity_channel(2), bad), ArgumentError);
  }
}
