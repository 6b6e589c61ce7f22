#pragma once

#include <span>
#include <vector>

#include "capcont/channels.hpp"
#include "capcont/linalg.hpp"

namespace capcont {

/// All entropies are in bits.
namespace tol {
inline constexpr double kEnt = 1e-7;
}

struct EnsembleItem {
  double prob;
  DensityMatrix state;
};

/// Finite ensemble {p_x, phi_x} over a common input space.
class Ensemble {
 public:
  explicit Ensemble(std::vector<EnsembleItem> items);

  const std::vector<EnsembleItem>& items() const noexcept { return items_; }
  std::size_t size() const noexcept { return items_.size(); }
  int dim() const noexcept { return items_.front().state.dim(); }

  /// Sum_x p_x phi_x
  DensityMatrix average() const;

 private:
  std::vector<EnsembleItem> items_;
};

/// Two disjoint, nonempty groups of factor indices. Factors in neither
/// group are traced out.
struct Bipartition {
  std::vector<int> a;
  std::vector<int> b;

  /// A = factor 0, B = factor 1.
  static Bipartition first_second() { return {{0}, {1}}; }
};

double binary_entropy(double p);
double shannon_entropy(std::span<const double> probs);

/// Entropy of an eigenvalue list after clipping each value to [0, 1].
double spectrum_entropy(const RealVector& eigenvalues);

double von_neumann_entropy(const DensityMatrix& rho);
double von_neumann_entropy(const ComplexMatrix& rho);

/// S(A|B) = S(AB) - S(B)
double conditional_entropy(const DensityMatrix& rho, const Bipartition& split);

/// I(A;B) = S(A) + S(B) - S(AB)
double mutual_information(const DensityMatrix& rho, const Bipartition& split);

/// S(B) - S(AB) on (I (x) ch)(rho); the channel acts on the last factor.
double coherent_information(const QuantumChannel& ch, const DensityMatrix& rho_aa);
double coherent_information(const QuantumChannel& ch, const PureState& psi_aa);

/// I(X;B) of Sum_x p_x |x><x| (x) ch(phi_x).
double holevo_information(const QuantumChannel& ch, const Ensemble& ens);

/// I(X;B) - I(X;E), E from the canonical dilation of `ch`.
double private_information(const QuantumChannel& ch, const Ensemble& ens);

/// Same, with the environment taken from an explicit dilation.
double private_information(const QuantumChannel& ch, const Ensemble& ens, const IsometricExtension& dilation);

/// Classical-quantum state Sum_x p_x |x><x| (x) rho_x on X (x) B.
DensityMatrix classical_quantum_state(std::span<const double> probs, std::span<const DensityMatrix> states);

}  // namespace capcont
