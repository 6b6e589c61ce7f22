#pragma once

#include <cstdint>
#include <string>

#include "capcont/channels.hpp"
#include "capcont/linalg.hpp"

namespace capcont {

/// Linear map with Hermitian Choi matrix, e.g. a difference of channels.
class HermitianPreservingMap {
 public:
  /// Validates Hermiticity of the Choi matrix within tol::kHerm.
  explicit HermitianPreservingMap(ChoiMatrix choi);

  static HermitianPreservingMap of(const QuantumChannel& ch);
  /// a - b
  static HermitianPreservingMap difference(const QuantumChannel& a, const QuantumChannel& b);

  HermitianPreservingMap scaled(double c) const;
  HermitianPreservingMap operator-(const HermitianPreservingMap& other) const;
  HermitianPreservingMap operator+(const HermitianPreservingMap& other) const;

  const ChoiMatrix& choi() const noexcept { return choi_; }
  int d_in() const noexcept { return choi_.d_in; }
  int d_out() const noexcept { return choi_.d_out; }

  /// Phi(x) for a d_in x d_in operator x.
  ComplexMatrix apply(const ComplexMatrix& x) const;

  /// (Phi (x) I)(|psi><psi|) for psi on in (x) ref.
  ComplexMatrix apply_extended(const ComplexVector& psi, int ref_dim) const;

 private:
  ChoiMatrix choi_;
};

/// ||rho - sigma||_1 (full one-norm).
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);
/// 1/2 ||rho - sigma||_1.
double trace_distance_half(const DensityMatrix& rho, const DensityMatrix& sigma);

enum class SdpStatus { kOptimal, kMaxIters, kInfeasible };
std::string to_string(SdpStatus status);

struct SdpOptions {
  double gap_tol = 1e-6;  // relative, against 1 + |value|
  int max_iters = 200;
};

struct SdpResult {
  double value = 0.0;       // certified upper bound (minimization side)
  double dual_value = 0.0;  // certified lower bound (maximization side)
  int iterations = 0;
  SdpStatus status = SdpStatus::kMaxIters;
  /// Input marginal rho of the maximizing extended state.
  ComplexMatrix optimal_input;

  double gap() const { return value - dual_value; }
};

/// Diamond norm via the semidefinite program
///   minimize  1/2 (||Tr_out Y0||_inf + ||Tr_out Y1||_inf)
///   s.t.      [[Y0, -J], [-J, Y1]] >= 0
/// solved by a primal-dual interior-point method with Nesterov-Todd
/// scaling. For Hermitian J the optimum is attained at Y0 = Y1 = Z, where
/// the block constraint is equivalent to Z >= J and Z >= -J; the solver
/// works in that reduced form.
///
/// Both reported bounds are re-certified after the solve: `value` comes
/// from a dual point repaired to exact feasibility, `dual_value` is
/// ||(Phi (x) I)(psi)||_1 at an explicit purification psi of the primal
/// input marginal.
SdpResult diamond_norm(const HermitianPreservingMap& map, const SdpOptions& options = {});

/// ||(Phi (x) I)(psi)||_1 for one pure input on in (x) ref.
double probe_value(const HermitianPreservingMap& map, const ComplexVector& psi, int ref_dim);

/// Max of probe_value over Haar-random pure states with ref dimension d_in.
double diamond_lower_probe(const HermitianPreservingMap& map, int trials, std::uint64_t seed);

}  // namespace capcont
