#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "capcont/capopt.hpp"
#include "capcont/channels.hpp"
#include "capcont/distance.hpp"
#include "capcont/entropic.hpp"

namespace capcont {

// --- closed-form bounds (bits); eps must lie in [0, 1] -----------------------

/// eps log d + H(eps)
double fannes_bound(double eps, int d);

/// 4 eps log d_a + 2 H(eps)
double af_bound(double eps, int d_a);

/// n (4 eps log d_b + 2 H(eps)): output-entropy gap of n uses of two
/// channels at diamond distance eps.
double output_entropy_bound(int n, double eps, int d_b);

struct CapacityBounds {
  double classical;  // 8 eps log d_b + 4 H(eps)
  double quantum;    // 8 eps log d_b + 4 H(eps)
  double priv;       // 16 eps log d_b + 8 H(eps)
};
CapacityBounds capacity_bounds(double eps, int d_b);

// --- reports -----------------------------------------------------------------

/// One measured quantity against its bound. margin = bound - measured.
struct BoundReport {
  std::string quantity;
  double measured = 0.0;
  double bound = 0.0;
  double epsilon = 0.0;
  int n = 1;
  int d_b = 0;
  double margin = 0.0;
  /// Consistency-only rows (optimizer lower bounds) never count as violations.
  bool asserted = true;
  std::uint64_t seed = 0;
  int trial = 0;

  bool violated(double slack = tol::kEnt) const { return asserted && margin < -slack; }
};

BoundReport make_report(std::string quantity, double measured, double bound, double eps, int n, int d_b);

int count_violations(std::span<const BoundReport> reports, double slack = tol::kEnt);

// --- hybrid interpolation ------------------------------------------------------

/// rho^k = (I_A (x) M^{(x) k} (x) N^{(x) (n-k)})(phi), k = 0..n, on
/// A (x) B_1 (x) ... (x) B_n.
struct HybridSequence {
  std::vector<DensityMatrix> states;
  /// |S(B_k | A B_{!=k})_{rho^{k-1}} - S(B_k | A B_{!=k})_{rho^k}|, k = 1..n
  std::vector<double> step_differences;
  /// ||rho^k - rho^{k-1}||_1, k = 1..n
  std::vector<double> step_distances;
};

/// phi lives on A (x) A'^n with dim A' = d_in; dim A is inferred.
HybridSequence hybrid_sequence(const QuantumChannel& n_ch, const QuantumChannel& m_ch, const PureState& phi, int n);

// --- verification harnesses ---------------------------------------------------

struct VerificationRun {
  SdpResult distance;
  double epsilon = 0.0;  // certified upper bound on the diamond distance
  std::vector<BoundReport> reports;

  int violations(double slack = tol::kEnt) const { return count_violations(reports, slack); }
};

struct HarnessOptions {
  int n = 1;
  int trials = 50;
  std::uint64_t seed = 0;
  SdpOptions sdp;
};

/// For random pure phi: |S(rho^0) - S(rho^n)| against output_entropy_bound,
/// every hybrid step against af_bound, every step distance against eps, and
/// the telescoping sum. Throws DomainError when eps > 1.
VerificationRun verify_output_entropy(const QuantumChannel& n_ch, const QuantumChannel& m_ch, const HarnessOptions& opts);

struct CapacityCheckOptions {
  HarnessOptions harness;
  int ensemble_size = 4;
  /// Adds non-asserting rows comparing single-letter optimizer values.
  bool optimized = false;
  OptimizerOptions optimizer;
};

/// Fixed-parameter checks on shared random inputs at n copies:
///   holevo, coherent  vs 2 * output_entropy_bound(n, eps, d_b)
///   private           vs 4 * output_entropy_bound(n, eps, d_b)
VerificationRun verify_capacity_continuity(const QuantumChannel& n_ch, const QuantumChannel& m_ch, const CapacityCheckOptions& opts);

// --- sampling -------------------------------------------------------------------

/// N random, M = (1 - q) N + q R with q uniform in (0, max_q]. Pairs with a
/// certified distance above max_eps are redrawn.
struct ChannelPair {
  QuantumChannel n_ch;
  QuantumChannel m_ch;
  double q = 0.0;
  SdpResult distance;
  int redraws = 0;
};

ChannelPair sample_channel_pair(int d_in, int d_out, std::uint64_t seed, std::uint64_t index, double max_q = 0.3,
                                double max_eps = 0.5, const SdpOptions& sdp = {});

// --- entropy inequality suites ------------------------------------------------

struct SuiteSummary {
  std::string name;
  int d_a = 0;
  int d_b = 1;
  int trials = 0;
  int violations = 0;
  double worst_margin = 0.0;  // min over trials of bound - measured
  double max_epsilon = 0.0;
};

/// Pairs (rho, sigma) with sigma = (1 - s) rho + s tau and
/// ||rho - sigma||_1 drawn uniformly in (0, 1/2].
SuiteSummary fannes_suite(int d, int trials, std::uint64_t seed);

/// Same protocol on A (x) B against af_bound(eps, d_a) for S(A|B).
SuiteSummary af_suite(int d_a, int d_b, int trials, std::uint64_t seed);

// --- regularization arithmetic -------------------------------------------------

/// Given f_n(N), f_n(M) for n = 1..K and a per-copy constant c, checks
/// |f_n(N) - f_n(M)| <= n c and reports |f_K(N) - f_K(M)| / K, the finite
/// estimate of the regularized gap, which then cannot exceed c.
struct RegularizedGap {
  std::vector<double> per_copy_gaps;
  bool premise_holds = true;
  double limit_estimate = 0.0;
  double bound = 0.0;
};

RegularizedGap regularized_gap(std::span<const double> f_n, std::span<const double> g_n, double c);

// --- truncated discontinuity examples -------------------------------------------

struct DiscontinuityRow {
  int n = 0;
  double diamond_eps = 0.0;     // sink vs truncated classical example
  double two_over_log_n = 0.0;
  double classical_lb = 0.0;    // I(X;B) at the uniform codeword ensemble
  double quantum_lb = 0.0;      // coherent information, maximally entangled data input
  /// 8 eps log d_b + 4 H(eps); empty when eps > 1.
  std::optional<double> corollary_bound;
  double quantum_eps = 0.0;     // half sink vs truncated quantum example
  std::optional<double> quantum_bound;
  bool consistent = true;       // both gaps within their bounds (or bounds vacuous)
  SdpStatus status = SdpStatus::kOptimal;
};

std::vector<DiscontinuityRow> discontinuity_demo(std::span<const int> n_values, const SdpOptions& sdp = {});

}  // namespace capcont
