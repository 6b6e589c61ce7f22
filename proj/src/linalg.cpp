#include "capcont/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "capcont/errors.hpp"

namespace capcont {

namespace {

bool all_finite(const ComplexMatrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

std::vector<long> strides_of(const Dims& dims) {
  std::vector<long> strides(dims.size(), 1);
  for (int f = static_cast<int>(dims.size()) - 2; f >= 0; --f) strides[f] = strides[f + 1] * dims[f + 1];
  return strides;
}

// Flat offsets of every multi-index over `factors`, enumerated row-major.
std::vector<long> factor_offsets(const Dims& dims, const std::vector<long>& strides, const std::vector<int>& factors) {
  std::vector<long> out{0};
  for (int f : factors) {
    std::vector<long> next;
    next.reserve(out.size() * dims[f]);
    for (long base : out)
      for (int i = 0; i < dims[f]; ++i) next.push_back(base + i * strides[f]);
    out = std::move(next);
  }
  return out;
}

void check_dims(const Dims& dims, long total) {
  if (dims.empty()) throw ArgumentError("factor dimension list is empty");
  for (int d : dims)
    if (d < 1) throw ArgumentError("factor dimensions must be positive");
  if (dims_product(dims) != total) {
    std::ostringstream os;
    os << "factor dimensions multiply to " << dims_product(dims) << " but matrix dimension is " << total;
    throw DimensionError(os.str());
  }
}

}  // namespace

long dims_product(std::span<const int> dims) {
  long p = 1;
  for (int d : dims) p *= d;
  return p;
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(ComplexMatrix matrix, Dims dims) : dims_(std::move(dims)) {
  if (matrix.rows() != matrix.cols()) throw ArgumentError("density matrix must be square");
  if (matrix.rows() > kMaxDimension) throw DimensionError("density matrix exceeds maximum dimension");
  check_dims(dims_, matrix.rows());
  if (!all_finite(matrix)) throw ArgumentError("density matrix has non-finite entries");
  if (hermiticity_residual(matrix) > tol::kHerm) throw ArgumentError("density matrix is not Hermitian");
  matrix_ = hermitian_part(matrix);
  const double tr = matrix_.trace().real();
  if (std::abs(tr - 1.0) > tol::kTrace) {
    std::ostringstream os;
    os.precision(17);
    os << "density matrix trace is " << tr;
    throw ArgumentError(os.str());
  }
  const RealVector ev = eigvalsh(matrix_);
  if (ev(ev.size() - 1) < -tol::kPsd) throw ArgumentError("density matrix is not positive semidefinite");
}

DensityMatrix::DensityMatrix(ComplexMatrix matrix)
    : DensityMatrix(matrix, Dims{static_cast<int>(matrix.rows())}) {}

DensityMatrix::DensityMatrix(ComplexMatrix matrix, Dims dims, Trusted) : dims_(std::move(dims)) {
  if (matrix.rows() != matrix.cols()) throw ArgumentError("density matrix must be square");
  check_dims(dims_, matrix.rows());
  matrix_ = hermitian_part(matrix);
}

DensityMatrix DensityMatrix::assume_valid(ComplexMatrix matrix, Dims dims) {
  return DensityMatrix(std::move(matrix), std::move(dims), Trusted{});
}

DensityMatrix DensityMatrix::maximally_mixed(int d) {
  if (d < 1) throw ArgumentError("dimension must be positive");
  return assume_valid(ComplexMatrix::Identity(d, d) / static_cast<double>(d), Dims{d});
}

DensityMatrix DensityMatrix::basis_state(int d, int index) {
  if (index < 0 || index >= d) throw ArgumentError("basis index out of range");
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  m(index, index) = 1.0;
  return assume_valid(std::move(m), Dims{d});
}

DensityMatrix DensityMatrix::with_dims(Dims dims) const {
  check_dims(dims, dim());
  return DensityMatrix(matrix_, std::move(dims), Trusted{});
}

// ---------------------------------------------------------------------------
// PureState

PureState::PureState(ComplexVector vector, Dims dims) : vector_(std::move(vector)), dims_(std::move(dims)) {
  check_dims(dims_, vector_.size());
  if (std::abs(vector_.squaredNorm() - 1.0) > tol::kTrace) throw ArgumentError("pure state is not normalized");
}

PureState::PureState(ComplexVector vector) : PureState(vector, Dims{static_cast<int>(vector.size())}) {}

PureState PureState::normalized(const ComplexVector& vector, Dims dims) {
  const double n = vector.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw ArgumentError("cannot normalize a zero or non-finite vector");
  return PureState(vector / n, std::move(dims));
}

PureState PureState::maximally_entangled(int d) {
  ComplexVector v = ComplexVector::Zero(static_cast<long>(d) * d);
  for (int i = 0; i < d; ++i) v(static_cast<long>(i) * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
  return PureState(std::move(v), Dims{d, d});
}

DensityMatrix PureState::density() const {
  return DensityMatrix::assume_valid(vector_ * vector_.adjoint(), dims_);
}

// ---------------------------------------------------------------------------
// Products and partial traces

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b, long max_dim) {
  const long rows = static_cast<long>(a.rows()) * b.rows();
  const long cols = static_cast<long>(a.cols()) * b.cols();
  if (rows > max_dim || cols > max_dim) {
    std::ostringstream os;
    os << "tensor product dimension " << rows << "x" << cols << " exceeds limit " << max_dim;
    throw DimensionError(os.str());
  }
  ComplexMatrix out(rows, cols);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

DensityMatrix tensor(const DensityMatrix& a, const DensityMatrix& b) {
  Dims dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return DensityMatrix::assume_valid(tensor(a.matrix(), b.matrix()), std::move(dims));
}

ComplexMatrix partial_trace(const ComplexMatrix& x, const Dims& dims, std::span<const int> keep) {
  if (x.rows() != x.cols()) throw ArgumentError("partial trace needs a square operator");
  check_dims(dims, x.rows());
  const int nf = static_cast<int>(dims.size());
  std::vector<bool> kept(nf, false);
  for (int f : keep) {
    if (f < 0 || f >= nf) throw ArgumentError("partial trace factor index out of range");
    kept[f] = true;
  }
  std::vector<int> keep_list, trace_list;
  for (int f = 0; f < nf; ++f) (kept[f] ? keep_list : trace_list).push_back(f);
  if (keep_list.empty()) throw ArgumentError("partial trace must keep at least one factor");

  const auto strides = strides_of(dims);
  const auto ok = factor_offsets(dims, strides, keep_list);
  const auto ot = factor_offsets(dims, strides, trace_list);
  const long dk = static_cast<long>(ok.size());
  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
  for (long b = 0; b < dk; ++b)
    for (long a = 0; a < dk; ++a) {
      Complex s = 0.0;
      for (long t : ot) s += x(ok[a] + t, ok[b] + t);
      out(a, b) = s;
    }
  return out;
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  ComplexMatrix reduced = partial_trace(rho.matrix(), rho.dims(), keep);
  std::vector<int> sorted(keep.begin(), keep.end());
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  Dims dims;
  for (int f : sorted) dims.push_back(rho.dims()[f]);
  return DensityMatrix::assume_valid(std::move(reduced), std::move(dims));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::initializer_list<int> keep) {
  return partial_trace(rho, std::span<const int>(keep.begin(), keep.size()));
}

// ---------------------------------------------------------------------------
// Spectral

Eigensystem eigh(const ComplexMatrix& h) {
  if (h.rows() != h.cols()) throw ArgumentError("eigh needs a square matrix");
  const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  if (h.size() > 0 && hermiticity_residual(h) > tol::kHerm * scale) throw ArgumentError("eigh input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(h));
  if (solver.info() != Eigen::Success) throw NumericError("Hermitian eigensolver did not converge");
  Eigensystem out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

RealVector eigvalsh(const ComplexMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitian_part(h), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericError("Hermitian eigensolver did not converge");
  return solver.eigenvalues().reverse();
}

PureState purify(const DensityMatrix& rho) {
  const Eigensystem es = eigh(rho.matrix());
  int rank = 0;
  for (Eigen::Index i = 0; i < es.values.size(); ++i)
    if (es.values(i) > tol::kPsd) ++rank;
  rank = std::max(rank, 1);
  const int d = rho.dim();
  ComplexVector psi = ComplexVector::Zero(static_cast<long>(d) * rank);
  for (int k = 0; k < rank; ++k) {
    const double w = std::sqrt(std::max(es.values(k), 0.0));
    for (int i = 0; i < d; ++i) psi(static_cast<long>(i) * rank + k) = w * es.vectors(i, k);
  }
  Dims dims = rho.dims();
  dims.push_back(rank);
  return PureState::normalized(psi, std::move(dims));
}

double trace_norm(const ComplexMatrix& x) {
  if (x.rows() != x.cols()) throw ArgumentError("trace norm needs a square matrix");
  if (x.size() == 0) return 0.0;
  const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
  if (hermiticity_residual(x) <= 1e-14 * scale) return eigvalsh(x).cwiseAbs().sum();
  Eigen::BDCSVD<ComplexMatrix> svd(x);
  return svd.singularValues().sum();
}

double hermiticity_residual(const ComplexMatrix& x) {
  if (x.rows() != x.cols()) return std::numeric_limits<double>::infinity();
  if (x.size() == 0) return 0.0;
  return (x - x.adjoint()).cwiseAbs().maxCoeff();
}

ComplexMatrix hermitian_part(const ComplexMatrix& x) { return 0.5 * (x + x.adjoint()); }

// ---------------------------------------------------------------------------
// Factor-local operations

namespace {
std::vector<long> permutation_map(const Dims& dims, std::span<const int> perm) {
  const int nf = static_cast<int>(dims.size());
  if (static_cast<int>(perm.size()) != nf) throw ArgumentError("permutation length differs from factor count");
  std::vector<bool> seen(nf, false);
  for (int p : perm) {
    if (p < 0 || p >= nf || seen[p]) throw ArgumentError("invalid factor permutation");
    seen[p] = true;
  }
  const auto in_strides = strides_of(dims);
  Dims out_dims(nf);
  std::vector<long> out_strides(nf);
  for (int k = 0; k < nf; ++k) {
    out_dims[k] = dims[perm[k]];
    out_strides[k] = in_strides[perm[k]];
  }
  std::vector<int> order(nf);
  std::iota(order.begin(), order.end(), 0);
  return factor_offsets(out_dims, out_strides, order);
}
}  // namespace

ComplexMatrix permute_factors(const ComplexMatrix& x, const Dims& dims, std::span<const int> perm) {
  check_dims(dims, x.rows());
  const auto src = permutation_map(dims, perm);
  const long n = static_cast<long>(src.size());
  ComplexMatrix out(n, n);
  for (long j = 0; j < n; ++j)
    for (long i = 0; i < n; ++i) out(i, j) = x(src[i], src[j]);
  return out;
}

ComplexVector permute_factors(const ComplexVector& v, const Dims& dims, std::span<const int> perm) {
  check_dims(dims, v.size());
  const auto src = permutation_map(dims, perm);
  ComplexVector out(v.size());
  for (long i = 0; i < static_cast<long>(src.size()); ++i) out(i) = v(src[i]);
  return out;
}

ComplexMatrix left_multiply_factor(const ComplexMatrix& x, const Dims& row_dims, int factor, const ComplexMatrix& k) {
  check_dims(row_dims, x.rows());
  if (factor < 0 || factor >= static_cast<int>(row_dims.size())) throw ArgumentError("factor index out of range");
  const long din = row_dims[factor];
  if (k.cols() != din) throw DimensionError("operator input dimension does not match factor");
  const long dout = k.rows();
  long left = 1, right = 1;
  for (int f = 0; f < factor; ++f) left *= row_dims[f];
  for (int f = factor + 1; f < static_cast<int>(row_dims.size()); ++f) right *= row_dims[f];

  ComplexMatrix out(left * dout * right, x.cols());
  const ComplexMatrix kt = k.transpose();
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    for (long l = 0; l < left; ++l) {
      Eigen::Map<const ComplexMatrix> in_seg(x.col(c).data() + l * din * right, right, din);
      Eigen::Map<ComplexMatrix> out_seg(out.col(c).data() + l * dout * right, right, dout);
      out_seg.noalias() = in_seg * kt;
    }
  }
  return out;
}

ComplexMatrix conjugate_factor(const ComplexMatrix& x, const Dims& dims, int factor, std::span<const ComplexMatrix> kraus) {
  if (kraus.empty()) throw ArgumentError("empty Kraus family");
  ComplexMatrix acc;
  for (const ComplexMatrix& k : kraus) {
    const ComplexMatrix half = left_multiply_factor(x, dims, factor, k);
    const ComplexMatrix full = left_multiply_factor(half.adjoint(), dims, factor, k).adjoint();
    if (acc.size() == 0)
      acc = full;
    else
      acc += full;
  }
  return acc;
}

}  // namespace capcont
