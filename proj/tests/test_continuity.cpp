#include <doctest.h>

#include <cmath>

#include "capcont/channels.hpp"
#include "capcont/continuity.hpp"
#include "capcont/errors.hpp"
#include "capcont/random.hpp"
#include "oracles.hpp"

using namespace capcont;

namespace {

double worst_margin(const VerificationRun& run, const std::string& quantity) {
  double worst = 1e300;
  for (const auto& r : run.reports)
    if (r.quantity == quantity) worst = std::min(worst, r.margin);
  return worst;
}

int rows(const VerificationRun& run, const std::string& quantity) {
  int count = 0;
  for (const auto& r : run.reports) count += r.quantity == quantity;
  return count;
}

}  // namespace

TEST_SUITE("continuity") {
  TEST_CASE("closed-form bounds") {
    CHECK(fannes_bound(0.5, 2) == doctest::Approx(1.5));
    CHECK(output_entropy_bound(3, 0.0, 4) == 0.0);
    CHECK(output_entropy_bound(2, 0.25, 2) == doctest::Approx(2.0 + 4.0 * oracle::h2(0.25)).epsilon(1e-12));
    CHECK(output_entropy_bound(2, 0.25, 2) == doctest::Approx(5.245112).epsilon(1e-6));
    CHECK(af_bound(0.1, 3) == doctest::Approx(0.4 * std::log2(3.0) + 2.0 * oracle::h2(0.1)));
    const CapacityBounds zero = capacity_bounds(0.0, 2);
    CHECK(zero.classical == 0.0);
    CHECK(zero.quantum == 0.0);
    CHECK(zero.priv == 0.0);
    const CapacityBounds b = capacity_bounds(0.25, 2);
    CHECK(b.classical == doctest::Approx(5.245112).epsilon(1e-6));
    CHECK(b.quantum == b.classical);
    CHECK(b.priv == doctest::Approx(10.490224).epsilon(1e-6));
    for (double e : {0.01, 0.3, 0.9}) CHECK(capacity_bounds(e, 3).priv == doctest::Approx(2.0 * capacity_bounds(e, 3).classical));
  }

  TEST_CASE("bounds reject invalid arguments") {
    CHECK_THROWS_AS(fannes_bound(-0.1, 2), ArgumentError);
    CHECK_THROWS_AS(af_bound(1.5, 2), ArgumentError);
    CHECK_THROWS_AS(fannes_bound(0.1, 1), ArgumentError);
    CHECK_THROWS_AS(output_entropy_bound(0, 0.1, 2), ArgumentError);
  }

  TEST_CASE("output entropy bound is monotone") {
    for (int n = 1; n < 4; ++n)
      for (int d = 2; d < 5; ++d)
        for (double e = 0.0; e < 0.5; e += 0.01) {
          const double v = output_entropy_bound(n, e, d);
          CHECK(output_entropy_bound(n + 1, e, d) >= v);
          CHECK(output_entropy_bound(n, e, d + 1) >= v);
          CHECK(output_entropy_bound(n, e + 0.01, d) >= v);
        }
  }

  TEST_CASE("reports") {
    const BoundReport r = make_report("x", 1.0, 0.5, 0.1, 1, 2);
    CHECK(r.margin == doctest::Approx(-0.5));
    CHECK(r.violated());
    BoundReport soft = r;
    soft.asserted = false;
    CHECK_FALSE(soft.violated());
    const BoundReport tiny = make_report("y", 1.0 + 5e-8, 1.0, 0.1, 1, 2);
    CHECK_FALSE(tiny.violated());
    CHECK(tiny.violated(1e-9));
    const std::vector<BoundReport> all{r, soft, tiny};
    CHECK(count_violations(all) == 1);
  }

  TEST_CASE("hybrid sequence of identical channels is constant") {
    Rng rng(3);
    const QuantumChannel ch = random_channel(2, 2, 2, rng);
    const PureState phi = haar_pure_state(Dims{4, 2, 2}, rng);
    const HybridSequence h = hybrid_sequence(ch, ch, phi, 2);
    REQUIRE(h.states.size() == 3u);
    for (const auto& s : h.states) CHECK((s.matrix() - h.states[0].matrix()).norm() < 1e-12);
    for (double d : h.step_differences) CHECK(std::abs(d) < 1e-9);
    for (double d : h.step_distances) CHECK(d < 1e-9);
  }

  TEST_CASE("hybrid sequence endpoints and steps") {
    Rng rng(4);
    const QuantumChannel n = random_channel(2, 2, 2, rng);
    const QuantumChannel m = mix({n, random_channel(2, 2, 3, rng)}, {0.8, 0.2});
    const double eps = diamond_norm(HermitianPreservingMap::difference(n, m)).value;
    // n = 1: the endpoints are the two channel outputs on the last factor.
    const PureState phi1 = haar_pure_state(Dims{2, 2}, rng);
    const HybridSequence h1 = hybrid_sequence(n, m, phi1, 1);
    CHECK((h1.states[0].matrix() - apply_extended(n, phi1.density(), {1}).matrix()).norm() < 1e-12);
    CHECK((h1.states[1].matrix() - apply_extended(m, phi1.density(), {1}).matrix()).norm() < 1e-12);
    for (int t = 0; t < 10; ++t) {
      const PureState phi = haar_pure_state(Dims{4, 2, 2}, rng);
      const HybridSequence h = hybrid_sequence(n, m, phi, 2);
      REQUIRE(h.step_differences.size() == 2u);
      for (std::size_t k = 0; k < 2; ++k) {
        CHECK(h.step_distances[k] <= eps + tol::kTrace);
        CHECK(h.step_differences[k] <= af_bound(std::min(eps, 1.0), 2) + tol::kEnt);
        CHECK(h.step_distances[k] ==
              doctest::Approx(oracle::trace_norm(h.states[k + 1].matrix() - h.states[k].matrix())).epsilon(1e-9));
      }
      // Step 1 replaces the first channel factor: rho^1 = (I (x) M (x) N)(phi).
      const DensityMatrix r1 = apply_extended(n, apply_extended(m, phi.density(), {1}), {2});
      CHECK((h.states[1].matrix() - r1.matrix()).norm() < 1e-12);
      const double total = std::abs(von_neumann_entropy(h.states[0]) - von_neumann_entropy(h.states[2]));
      CHECK(total <= h.step_differences[0] + h.step_differences[1] + tol::kEnt);
    }
  }

  TEST_CASE("output-entropy harness on equal channels") {
    HarnessOptions opts;
    opts.trials = 10;
    opts.n = 2;
    const QuantumChannel ch = depolarizing(2, 0.2);
    const VerificationRun run = verify_output_entropy(ch, ch, opts);
    CHECK(run.epsilon <= 1e-8);
    CHECK(run.violations() == 0);
    for (const auto& r : run.reports)
      if (r.quantity == "output_entropy") CHECK(r.measured <= tol::kEnt);
  }

  TEST_CASE("output-entropy harness on identity against depolarizing") {
    for (int n : {1, 2}) {
      HarnessOptions opts;
      opts.trials = 20;
      opts.n = n;
      opts.seed = 5;
      const VerificationRun run = verify_output_entropy(identity_channel(2), depolarizing(2, 0.2), opts);
      CHECK(run.epsilon == doctest::Approx(0.3).epsilon(1e-6));
      CHECK(run.violations() == 0);
      CHECK(rows(run, "output_entropy") == 20);
      CHECK(rows(run, "hybrid_step") == 20 * n);
      CHECK(worst_margin(run, "output_entropy") >= -1e-6);
      CHECK(worst_margin(run, "telescoping") >= -tol::kEnt);
    }
  }

  TEST_CASE("harness refuses distances above one") {
    HarnessOptions opts;
    opts.trials = 2;
    CHECK_THROWS_AS(verify_output_entropy(sink_channel(2), embedded_identity(2), opts), DomainError);
  }

  TEST_CASE("harness is deterministic") {
    HarnessOptions opts;
    opts.trials = 8;
    opts.seed = 77;
    const ChannelPair pair = sample_channel_pair(2, 2, 1, 0);
    const VerificationRun a = verify_output_entropy(pair.n_ch, pair.m_ch, opts);
    const VerificationRun b = verify_output_entropy(pair.n_ch, pair.m_ch, opts);
    REQUIRE(a.reports.size() == b.reports.size());
    for (std::size_t i = 0; i < a.reports.size(); ++i) CHECK(a.reports[i].measured == b.reports[i].measured);
  }

  TEST_CASE("fixed-parameter capacity checks") {
    CapacityCheckOptions opts;
    opts.harness.trials = 10;
    const VerificationRun same = verify_capacity_continuity(erasure(2, 0.2), erasure(2, 0.2), opts);
    for (const auto& r : same.reports) CHECK(std::abs(r.measured) <= tol::kEnt);
    const VerificationRun run = verify_capacity_continuity(identity_channel(2), depolarizing(2, 0.1), opts);
    CHECK(run.epsilon == doctest::Approx(0.15).epsilon(1e-6));
    CHECK(run.violations() == 0);
    CHECK(rows(run, "holevo_fixed") == 10);
    CHECK(rows(run, "coherent_fixed") == 10);
    CHECK(rows(run, "private_fixed") == 10);
    const double base = output_entropy_bound(1, run.epsilon, 2);
    for (const auto& r : run.reports) {
      if (r.quantity == "private_fixed") CHECK(r.bound == doctest::Approx(4.0 * base));
      if (r.quantity == "coherent_fixed") CHECK(r.bound == doctest::Approx(2.0 * base));
    }
    // Maximally entangled input, computed directly.
    const PureState bell = PureState::maximally_entangled(2);
    const double gap = std::abs(coherent_information(identity_channel(2), bell) - coherent_information(depolarizing(2, 0.1), bell));
    CHECK(gap <= 2.0 * output_entropy_bound(1, 0.15, 2));
  }

  TEST_CASE("optimized rows are informational") {
    CapacityCheckOptions opts;
    opts.harness.trials = 2;
    opts.optimized = true;
    opts.optimizer.restarts = 2;
    opts.optimizer.max_iters = 300;
    const VerificationRun run = verify_capacity_continuity(erasure(2, 0.1), erasure(2, 0.2), opts);
    int optimized = 0;
    for (const auto& r : run.reports)
      if (r.quantity.find("optimized") != std::string::npos) {
        ++optimized;
        CHECK_FALSE(r.asserted);
      }
    CHECK(optimized == 3);
  }

  TEST_CASE("sampled channel pairs") {
    for (std::uint64_t i = 0; i < 5; ++i) {
      const ChannelPair p = sample_channel_pair(2, 2, 42, i);
      CHECK(p.q > 0.0);
      CHECK(p.q <= 0.3);
      CHECK(p.distance.value <= 0.5);
      CHECK(p.distance.gap() <= 1e-6);
      const ChannelPair again = sample_channel_pair(2, 2, 42, i);
      CHECK(again.distance.value == p.distance.value);
    }
  }

  TEST_CASE("entropy inequality suites") {
    for (int d : {2, 3}) {
      const SuiteSummary s = fannes_suite(d, 100, 1);
      CHECK(s.violations == 0);
      CHECK(s.worst_margin >= -tol::kEnt);
      CHECK(s.max_epsilon <= 0.5 + 1e-12);
    }
    const SuiteSummary af = af_suite(2, 3, 100, 2);
    CHECK(af.violations == 0);
    CHECK(af.trials == 100);
  }

  TEST_CASE("regularized gap arithmetic") {
    // f_n = n a + sin(n), g_n = n b: per-copy gap tends to |a - b|.
    const double a = 0.7, b = 0.5, c = 0.2 + 1.0;
    std::vector<double> f, g;
    for (int n = 1; n <= 200; ++n) {
      f.push_back(n * a + std::sin(n));
      g.push_back(n * b);
    }
    const RegularizedGap r = regularized_gap(f, g, c);
    CHECK(r.premise_holds);
    CHECK(r.limit_estimate <= c);
    CHECK(r.limit_estimate == doctest::Approx(0.2).epsilon(0.01));
    CHECK(r.per_copy_gaps.size() == 200u);
    const RegularizedGap tight = regularized_gap(f, g, 0.1);
    CHECK_FALSE(tight.premise_holds);
    const std::vector<double> one{1.0};
    CHECK_THROWS_AS(regularized_gap(one, f, 1.0), ArgumentError);
  }

  TEST_CASE("discontinuity demo") {
    const std::vector<int> ns{2, 4, 8};
    const std::vector<DiscontinuityRow> rows = discontinuity_demo(ns);
    REQUIRE(rows.size() == 3u);
    for (const auto& r : rows) {
      CHECK(r.two_over_log_n == doctest::Approx(2.0 / std::log2(r.n)));
      CHECK(r.diamond_eps <= r.two_over_log_n + 1e-6);
      CHECK(r.classical_lb == doctest::Approx(1.0).epsilon(1e-9));
      CHECK(r.quantum_lb >= 1.0 - 1e-9);
      CHECK(r.consistent);
    }
    CHECK_FALSE(rows[0].corollary_bound.has_value());
    REQUIRE(rows[2].corollary_bound.has_value());
    CHECK(rows[2].diamond_eps == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
    CHECK(*rows[2].corollary_bound == doctest::Approx(capacity_bounds(rows[2].diamond_eps, 9).classical));
  }
}
