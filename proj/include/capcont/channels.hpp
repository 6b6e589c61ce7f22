#pragma once

#include <span>
#include <vector>

#include "capcont/linalg.hpp"

namespace capcont {

class Rng;

/// Completely positive trace-preserving map stored as a Kraus family of
/// d_out x d_in operators. Construction checks Sum K^dagger K = I.
class QuantumChannel {
 public:
  QuantumChannel(int d_in, int d_out, std::vector<ComplexMatrix> kraus);

  int d_in() const noexcept { return d_in_; }
  int d_out() const noexcept { return d_out_; }
  const std::vector<ComplexMatrix>& kraus() const noexcept { return kraus_; }

  /// Max-entry residual of Sum K^dagger K - I.
  double tp_residual() const;

 private:
  int d_in_;
  int d_out_;
  std::vector<ComplexMatrix> kraus_;
};

/// Choi matrix J = Sum_ij |i><j| (x) Phi(|i><j|), input factor first.
struct ChoiMatrix {
  ComplexMatrix matrix;
  int d_in = 0;
  int d_out = 0;
};

/// Isometry V: in -> out (x) env, rows indexed (b, e) with e fastest.
struct IsometricExtension {
  ComplexMatrix v;
  int d_in = 0;
  int d_out = 0;
  int d_env = 0;
};

DensityMatrix apply(const QuantumChannel& ch, const DensityMatrix& rho);

/// Linear extension to arbitrary d_in x d_in operators.
ComplexMatrix apply_to_operator(const QuantumChannel& ch, const ComplexMatrix& x);

/// Applies `ch` to every listed factor of rho (identity elsewhere).
DensityMatrix apply_extended(const QuantumChannel& ch, const DensityMatrix& rho, std::span<const int> channel_factors);
DensityMatrix apply_extended(const QuantumChannel& ch, const DensityMatrix& rho, std::initializer_list<int> channel_factors);

/// Applies a different channel to each listed factor.
DensityMatrix apply_local(const DensityMatrix& rho, std::span<const int> factors, std::span<const QuantumChannel* const> channels);

ChoiMatrix to_choi(const QuantumChannel& ch);

/// Canonical Kraus family from the Choi eigendecomposition, dropping
/// eigenvalues below tol::kPsd. Throws CpViolation / TpViolation.
QuantumChannel from_choi(const ChoiMatrix& choi);

/// Minimal Kraus family with the same action.
QuantumChannel canonicalize(const QuantumChannel& ch);

/// Most negative Choi eigenvalue (zero or positive for CP maps).
double choi_min_eigenvalue(const ChoiMatrix& choi);
double choi_tp_residual(const ChoiMatrix& choi);

/// Environment dimension equals the Kraus count of `ch`.
IsometricExtension stinespring(const QuantumChannel& ch);

/// rho -> Tr_out V rho V^dagger for the given dilation.
QuantumChannel complementary(const IsometricExtension& iso);
QuantumChannel complementary(const QuantumChannel& ch);

/// Tr_env V rho V^dagger.
ComplexMatrix apply_isometry_trace_env(const IsometricExtension& iso, const ComplexMatrix& rho);

QuantumChannel mix(std::span<const QuantumChannel> channels, std::span<const double> probs);
QuantumChannel mix(std::initializer_list<QuantumChannel> channels, std::initializer_list<double> probs);

/// Parallel composition a (x) b.
QuantumChannel tensor(const QuantumChannel& a, const QuantumChannel& b);
QuantumChannel tensor_power(const QuantumChannel& ch, int n);

/// Conjugates the channel input by a unitary: rho -> ch(U rho U^dagger).
QuantumChannel precompose_unitary(const QuantumChannel& ch, const ComplexMatrix& u);

// --- named constructions -----------------------------------------------------

QuantumChannel identity_channel(int d);

/// Every input goes to |0><0|; d_in = d_out = d.
QuantumChannel constant_channel(int d);

/// (1-p) rho + p |d><d|, the flag occupying the highest output index.
QuantumChannel erasure(int d, double p);

/// (1-p) rho + p I/d.
QuantumChannel depolarizing(int d, double p);

/// Qubit dephasing (1-p) rho + p Z rho Z.
QuantumChannel dephasing(double p);

/// Truncations of the infinite-dimensional examples. Input is an n-level
/// data span; output index 0 is the sink |0> and data level i maps to i+1.
QuantumChannel sink_channel(int n);          // Tr(rho) |0><0|
QuantumChannel half_sink_channel(int n);     // (Tr(rho) |0><0| + rho) / 2
QuantumChannel embedded_identity(int n);     // rho on levels 1..n

/// (1 - 1/log n) sink_channel(n) + (1/log n) embedded_identity(n)
QuantumChannel truncated_classical_example(int n);

/// (1 - 1/log n) half_sink_channel(n) + (1/log n) embedded_identity(n)
QuantumChannel truncated_quantum_example(int n);

/// Random channel from a Haar isometry with the given Kraus rank.
QuantumChannel random_channel(int d_in, int d_out, int kraus_rank, Rng& rng);

}  // namespace capcont
