#include "capcont/distance.hpp"

#include <algorithm>
#include <cmath>

#include "capcont/errors.hpp"
#include "capcont/random.hpp"

namespace capcont {

HermitianPreservingMap::HermitianPreservingMap(ChoiMatrix choi) : choi_(std::move(choi)) {
  const long n = static_cast<long>(choi_.d_in) * choi_.d_out;
  if (choi_.d_in < 1 || choi_.d_out < 1 || choi_.matrix.rows() != n || choi_.matrix.cols() != n)
    throw DimensionError("Choi matrix shape does not match its dimensions");
  const double scale = std::max(1.0, choi_.matrix.cwiseAbs().maxCoeff());
  if (hermiticity_residual(choi_.matrix) > tol::kHerm * scale) throw ArgumentError("map is not Hermiticity preserving");
  choi_.matrix = hermitian_part(choi_.matrix);
}

HermitianPreservingMap HermitianPreservingMap::of(const QuantumChannel& ch) { return HermitianPreservingMap(to_choi(ch)); }

HermitianPreservingMap HermitianPreservingMap::difference(const QuantumChannel& a, const QuantumChannel& b) {
  return of(a) - of(b);
}

HermitianPreservingMap HermitianPreservingMap::scaled(double c) const {
  return HermitianPreservingMap(ChoiMatrix{c * choi_.matrix, choi_.d_in, choi_.d_out});
}

HermitianPreservingMap HermitianPreservingMap::operator-(const HermitianPreservingMap& other) const {
  if (other.d_in() != d_in() || other.d_out() != d_out()) throw DimensionError("maps must share dimensions");
  return HermitianPreservingMap(ChoiMatrix{choi_.matrix - other.choi_.matrix, d_in(), d_out()});
}

HermitianPreservingMap HermitianPreservingMap::operator+(const HermitianPreservingMap& other) const {
  if (other.d_in() != d_in() || other.d_out() != d_out()) throw DimensionError("maps must share dimensions");
  return HermitianPreservingMap(ChoiMatrix{choi_.matrix + other.choi_.matrix, d_in(), d_out()});
}

ComplexMatrix HermitianPreservingMap::apply(const ComplexMatrix& x) const {
  const int din = d_in(), dout = d_out();
  if (x.rows() != din || x.cols() != din) throw DimensionError("operator dimension does not match map input");
  ComplexMatrix out = ComplexMatrix::Zero(dout, dout);
  for (int j = 0; j < din; ++j)
    for (int i = 0; i < din; ++i)
      if (x(i, j) != Complex(0.0)) out += x(i, j) * choi_.matrix.block(i * dout, j * dout, dout, dout);
  return out;
}

ComplexMatrix HermitianPreservingMap::apply_extended(const ComplexVector& psi, int ref_dim) const {
  const int din = d_in(), dout = d_out();
  if (ref_dim < 1 || psi.size() != static_cast<long>(din) * ref_dim) throw DimensionError("input vector does not match in (x) ref");
  // Output on out (x) ref: sum_ij Phi(|i><j|) (x) c_i c_j^dagger, c_i the ref amplitudes of input level i.
  const long n = static_cast<long>(dout) * ref_dim;
  ComplexMatrix out = ComplexMatrix::Zero(n, n);
  for (int i = 0; i < din; ++i) {
    const ComplexVector ci = psi.segment(static_cast<long>(i) * ref_dim, ref_dim);
    for (int j = 0; j < din; ++j) {
      const ComplexVector cj = psi.segment(static_cast<long>(j) * ref_dim, ref_dim);
      const ComplexMatrix outer = ci * cj.adjoint();
      const auto blk = choi_.matrix.block(i * dout, j * dout, dout, dout);
      for (int b = 0; b < dout; ++b)
        for (int bp = 0; bp < dout; ++bp)
          if (blk(b, bp) != Complex(0.0))
            out.block(static_cast<long>(b) * ref_dim, static_cast<long>(bp) * ref_dim, ref_dim, ref_dim) += blk(b, bp) * outer;
    }
  }
  return out;
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) throw DimensionError("states must have the same dimension");
  return trace_norm(rho.matrix() - sigma.matrix());
}

double trace_distance_half(const DensityMatrix& rho, const DensityMatrix& sigma) { return 0.5 * trace_distance(rho, sigma); }

std::string to_string(SdpStatus status) {
  switch (status) {
    case SdpStatus::kOptimal: return "optimal";
    case SdpStatus::kMaxIters: return "max-iters";
    case SdpStatus::kInfeasible: return "infeasible";
  }
  return "unknown";
}

double probe_value(const HermitianPreservingMap& map, const ComplexVector& psi, int ref_dim) {
  return trace_norm(map.apply_extended(psi, ref_dim));
}

double diamond_lower_probe(const HermitianPreservingMap& map, int trials, std::uint64_t seed) {
  if (trials < 1) throw ArgumentError("probe needs at least one trial");
  const int din = map.d_in();
  double best = 0.0;
  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(t));
    best = std::max(best, probe_value(map, haar_vector(din * din, rng), din));
  }
  return best;
}

}  // namespace capcont
