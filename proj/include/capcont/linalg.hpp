#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace capcont {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Ordered tensor-factor dimensions of a composite system.
using Dims = std::vector<int>;

namespace tol {
inline constexpr double kHerm = 1e-9;
inline constexpr double kTrace = 1e-9;
inline constexpr double kPsd = 1e-8;
inline constexpr double kEig = 1e-8;
inline constexpr double kTp = 1e-9;
}  // namespace tol

/// Largest matrix dimension any Kronecker-type construction may produce.
inline constexpr long kMaxDimension = 4096;

long dims_product(std::span<const int> dims);

/// Unit-trace positive semidefinite matrix with its tensor-factor structure.
/// Stored Hermitian-symmetrized; immutable after construction.
class DensityMatrix {
 public:
  /// Validates Hermiticity, positivity and unit trace.
  DensityMatrix(ComplexMatrix matrix, Dims dims);
  explicit DensityMatrix(ComplexMatrix matrix);

  /// Skips the positivity check. For results of operations that preserve
  /// the state space by construction (channel outputs, partial traces).
  static DensityMatrix assume_valid(ComplexMatrix matrix, Dims dims);

  static DensityMatrix maximally_mixed(int d);
  static DensityMatrix basis_state(int d, int index);

  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  const Dims& dims() const noexcept { return dims_; }
  int dim() const noexcept { return static_cast<int>(matrix_.rows()); }
  int factor_count() const noexcept { return static_cast<int>(dims_.size()); }

  /// Same matrix with a different factorization of the same total dimension.
  DensityMatrix with_dims(Dims dims) const;

 private:
  struct Trusted {};
  DensityMatrix(ComplexMatrix matrix, Dims dims, Trusted);

  ComplexMatrix matrix_;
  Dims dims_;
};

class PureState {
 public:
  /// Validates the squared norm against tol::kTrace.
  PureState(ComplexVector vector, Dims dims);
  explicit PureState(ComplexVector vector);

  /// Normalizes a nonzero vector.
  static PureState normalized(const ComplexVector& vector, Dims dims);
  static PureState maximally_entangled(int d);

  const ComplexVector& vector() const noexcept { return vector_; }
  const Dims& dims() const noexcept { return dims_; }
  int dim() const noexcept { return static_cast<int>(vector_.size()); }

  DensityMatrix density() const;

 private:
  ComplexVector vector_;
  Dims dims_;
};

struct Eigensystem {
  RealVector values;     // descending
  ComplexMatrix vectors;  // columns, matching `values`
};

/// Kronecker product; throws DimensionError past `max_dim`.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b, long max_dim = kMaxDimension);
DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b);

/// Reduced operator on the kept factors (ascending order). Works for any
/// square operator, not only states.
ComplexMatrix partial_trace(const ComplexMatrix& x, const Dims& dims, std::span<const int> keep);
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);
DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<int> keep);

/// Hermitian eigendecomposition with eigenvalues in descending order.
Eigensystem eigh(const ComplexMatrix& h);

/// Eigenvalues only, descending.
RealVector eigvalsh(const ComplexMatrix& h);

/// Purification on rho.dims() x [r], r the numerical rank of rho.
PureState purify(const DensityMatrix& rho);

/// Sum of singular values.
double trace_norm(const ComplexMatrix& x);

/// Largest absolute entry of x - x^dagger.
double hermiticity_residual(const ComplexMatrix& x);

ComplexMatrix hermitian_part(const ComplexMatrix& x);

/// Reorders tensor factors: factor perm[k] of the input becomes factor k.
ComplexMatrix permute_factors(const ComplexMatrix& x, const Dims& dims, std::span<const int> perm);
ComplexVector permute_factors(const ComplexVector& v, const Dims& dims, std::span<const int> perm);

/// (I (x) k (x) I) x, where k acts on factor `factor` of the row space of x.
/// The columns of x are untouched.
ComplexMatrix left_multiply_factor(const ComplexMatrix& x, const Dims& row_dims, int factor, const ComplexMatrix& k);

/// Sum_j (I (x) k_j (x) I) x (I (x) k_j (x) I)^dagger on one factor of a square operator.
ComplexMatrix conjugate_factor(const ComplexMatrix& x, const Dims& dims, int factor, std::span<const ComplexMatrix> kraus);

/// Applies f elementwise to the spectrum of a Hermitian matrix.
template <typename F>
ComplexMatrix spectral_map(const ComplexMatrix& h, F&& f) {
  const Eigensystem es = eigh(h);
  RealVector mapped(es.values.size());
  for (Eigen::Index i = 0; i < es.values.size(); ++i) mapped(i) = f(es.values(i));
  return es.vectors * mapped.asDiagonal() * es.vectors.adjoint();
}

}  // namespace capcont
