// Primal-dual interior-point solver for the diamond norm of a
// Hermiticity-preserving map with Choi matrix J (input factor first).
//
// Standard form, minimization side in X = (X1, X2, X3):
//   min  <-J, X1> + <J, X2>
//   s.t. X1 + X2 - X3 (x) I_out = 0,  Tr X3 = 1,  X1, X2, X3 >= 0
// and its dual in y = (Z, t):
//   max  t
//   s.t. S1 = -J - Z >= 0,  S2 = J - Z >= 0,  S3 = Tr_out Z - t I >= 0.
// With Z' = -Z, the dual is min ||Tr_out Z'||_inf over Z' >= +-J, and the
// diamond norm is minus either optimum.
//
// With Nesterov-Todd scaling W1, W2 for the two large blocks the Schur
// operator is Z -> W1 Z W1 + W2 Z W2 plus a rank-(d_in^2 + 1) correction.
// The first part is inverted in closed form after simultaneously
// diagonalizing W1 and W2; the correction is folded into a small dense
// system, so every iteration costs O(d_in^2 N^3) with N = d_in d_out.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>

#include "capcont/distance.hpp"
#include "capcont/errors.hpp"

namespace capcont {

namespace {

double inner(const ComplexMatrix& a, const ComplexMatrix& b) { return (a.adjoint() * b).trace().real(); }

struct NtScaling {
  ComplexMatrix g;      // W = g g^dagger
  ComplexMatrix g_inv;
  RealVector sv;        // g^-1 X g^-dagger = g^dagger S g = diag(sv)
  ComplexMatrix w;
};

std::optional<NtScaling> nt_scaling(const ComplexMatrix& x, const ComplexMatrix& s) {
  Eigen::LLT<ComplexMatrix> lx(x), ls(s);
  if (lx.info() != Eigen::Success || ls.info() != Eigen::Success) return std::nullopt;
  const ComplexMatrix lxm = lx.matrixL();
  const ComplexMatrix lsm = ls.matrixL();
  Eigen::BDCSVD<ComplexMatrix> svd(lsm.adjoint() * lxm, Eigen::ComputeFullU | Eigen::ComputeFullV);
  NtScaling nt;
  nt.sv = svd.singularValues();
  if (nt.sv.minCoeff() <= 0.0 || !nt.sv.allFinite()) return std::nullopt;
  const ComplexMatrix& v = svd.matrixV();
  const long n = x.rows();
  const ComplexMatrix lx_inv = lxm.triangularView<Eigen::Lower>().solve(ComplexMatrix::Identity(n, n));
  nt.g = lxm * v * nt.sv.cwiseSqrt().cwiseInverse().asDiagonal();
  nt.g_inv = nt.sv.cwiseSqrt().asDiagonal() * v.adjoint() * lx_inv;
  nt.w = hermitian_part(nt.g * nt.g.adjoint());
  return nt;
}

// Largest alpha in (0, inf] keeping x + alpha dx positive semidefinite.
double max_step(const ComplexMatrix& x, const ComplexMatrix& dx) {
  Eigen::LLT<ComplexMatrix> llt(x);
  if (llt.info() != Eigen::Success) return 0.0;
  const ComplexMatrix l = llt.matrixL();
  const auto tri = l.triangularView<Eigen::Lower>();
  const ComplexMatrix tmp = tri.solve(dx);
  const ComplexMatrix scaled = tri.solve(tmp.adjoint()).adjoint();
  const double lmin = eigvalsh(hermitian_part(scaled)).minCoeff();
  return lmin < 0.0 ? -1.0 / lmin : std::numeric_limits<double>::infinity();
}

class DiamondSolver {
 public:
  DiamondSolver(const ChoiMatrix& choi, const SdpOptions& options)
      : j_(choi.matrix), m_(choi.d_in), dout_(choi.d_out), n_(static_cast<long>(choi.d_in) * choi.d_out), opt_(options) {}

  SdpResult solve();

 private:
  struct Point {
    std::array<ComplexMatrix, 3> x;
    std::array<ComplexMatrix, 3> s;
    ComplexMatrix z;
    double t = 0.0;
  };
  struct Direction {
    std::array<ComplexMatrix, 3> dx;
    std::array<ComplexMatrix, 3> ds;
    ComplexMatrix dz;
    double dt = 0.0;
  };

  ComplexMatrix tr_out(const ComplexMatrix& z) const {
    const int keep[] = {0};
    return partial_trace(z, Dims{m_, dout_}, keep);
  }
  ComplexMatrix lift(const ComplexMatrix& y) const {
    return tensor(y, ComplexMatrix::Identity(dout_, dout_));
  }
  std::array<ComplexMatrix, 3> dual_slack(const ComplexMatrix& z, double t) const {
    return {-j_ - z, j_ - z, tr_out(z) - t * ComplexMatrix::Identity(m_, m_)};
  }

  // Schur machinery for the current scaling.
  ComplexMatrix l_inverse(const ComplexMatrix& r) const {
    const ComplexMatrix y = (q_inv_ * r * q_inv_.adjoint()).cwiseProduct(denom_);
    return q_inv_.adjoint() * y * q_inv_;
  }
  bool factor_schur();
  Direction solve_direction(const std::array<ComplexMatrix, 3>& rc) const;

  void certify(const Point& p);

  ComplexMatrix j_;
  int m_;
  int dout_;
  long n_;
  SdpOptions opt_;

  std::array<NtScaling, 3> nt_;
  std::array<ComplexMatrix, 3> rd_;
  ComplexMatrix rp_z_;
  double rp_t_ = 0.0;
  ComplexMatrix q_inv_;
  ComplexMatrix denom_;
  Eigen::PartialPivLU<ComplexMatrix> small_lu_;

  double best_upper_ = std::numeric_limits<double>::infinity();
  double best_lower_ = 0.0;
  ComplexMatrix best_input_;
};

bool DiamondSolver::factor_schur() {
  // W1 = Q Q^dagger, W2 = Q D Q^dagger with Q = g1 U.
  const ComplexMatrix g1_inv = nt_[0].g_inv;
  const ComplexMatrix inner_w2 = hermitian_part(g1_inv * nt_[1].w * g1_inv.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(inner_w2);
  if (es.info() != Eigen::Success) return false;
  const RealVector d = es.eigenvalues();
  q_inv_ = es.eigenvectors().adjoint() * g1_inv;
  denom_.resize(n_, n_);
  for (long j = 0; j < n_; ++j)
    for (long i = 0; i < n_; ++i) denom_(i, j) = 1.0 / (1.0 + d(i) * d(j));

  const ComplexMatrix& w3 = nt_[2].w;
  const ComplexMatrix p = w3 * w3;
  const long k = static_cast<long>(m_) * m_;
  ComplexMatrix sys = ComplexMatrix::Zero(k + 1, k + 1);
  for (int a = 0; a < m_; ++a)
    for (int b = 0; b < m_; ++b) {
      const ComplexMatrix basis = w3.col(a) * w3.row(b);  // W3 |a><b| W3
      const ComplexMatrix col = tr_out(l_inverse(lift(basis)));
      const long idx = static_cast<long>(a) * m_ + b;
      for (int r = 0; r < m_; ++r)
        for (int c = 0; c < m_; ++c) sys(static_cast<long>(r) * m_ + c, idx) = col(r, c);
      sys(idx, idx) += 1.0;
      sys(k, idx) = -p(b, a);
    }
  const ComplexMatrix g = tr_out(l_inverse(lift(p)));
  for (int r = 0; r < m_; ++r)
    for (int c = 0; c < m_; ++c) sys(static_cast<long>(r) * m_ + c, k) = -g(r, c);
  sys(k, k) = p.trace();
  small_lu_.compute(sys);
  return true;
}

DiamondSolver::Direction DiamondSolver::solve_direction(const std::array<ComplexMatrix, 3>& rc) const {
  // h = rp - A(Rc) + A(W rd W)
  std::array<ComplexMatrix, 3> wrw;
  for (int b = 0; b < 3; ++b) wrw[b] = nt_[b].w * rd_[b] * nt_[b].w;
  const ComplexMatrix h_z = rp_z_ - (rc[0] + rc[1] - lift(rc[2])) + (wrw[0] + wrw[1] - lift(wrw[2]));
  const Complex h_t = rp_t_ - rc[2].trace() + wrw[2].trace();

  const long k = static_cast<long>(m_) * m_;
  const ComplexMatrix linv_h = l_inverse(h_z);
  const ComplexMatrix r0 = tr_out(linv_h);
  ComplexVector rhs(k + 1);
  for (int r = 0; r < m_; ++r)
    for (int c = 0; c < m_; ++c) rhs(static_cast<long>(r) * m_ + c) = r0(r, c);
  rhs(k) = h_t;
  const ComplexVector sol = small_lu_.solve(rhs);
  ComplexMatrix y(m_, m_);
  for (int r = 0; r < m_; ++r)
    for (int c = 0; c < m_; ++c) y(r, c) = sol(static_cast<long>(r) * m_ + c);
  y = hermitian_part(y);

  Direction dir;
  dir.dt = sol(k).real();
  const ComplexMatrix& w3 = nt_[2].w;
  dir.dz = hermitian_part(linv_h - l_inverse(lift(w3 * y * w3)) + dir.dt * l_inverse(lift(w3 * w3)));
  // dS = rd - A*(dy), dX = Rc - W dS W
  const ComplexMatrix a3 = dir.dt * ComplexMatrix::Identity(m_, m_) - tr_out(dir.dz);
  dir.ds = {hermitian_part(rd_[0] - dir.dz), hermitian_part(rd_[1] - dir.dz), hermitian_part(rd_[2] - a3)};
  for (int b = 0; b < 3; ++b) dir.dx[b] = hermitian_part(rc[b] - nt_[b].w * dir.ds[b] * nt_[b].w);
  return dir;
}

void DiamondSolver::certify(const Point& p) {
  // Upper bound: Z' = -Z repaired to Z' >= +-J.
  const ComplexMatrix zp = -p.z;
  const double shift = std::max({0.0, -eigvalsh(zp - j_).minCoeff(), -eigvalsh(zp + j_).minCoeff()});
  const double upper = eigvalsh(tr_out(zp)).maxCoeff() + shift * dout_;
  best_upper_ = std::min(best_upper_, upper);

  // Lower bound: purification of the normalized input marginal.
  ComplexMatrix rho = spectral_map(p.x[2], [](double v) { return std::max(v, 0.0); });
  const double tr = rho.trace().real();
  if (!(tr > 0.0)) return;
  rho /= tr;
  const ComplexMatrix root = lift(spectral_map(rho, [](double v) { return std::sqrt(std::max(v, 0.0)); }));
  const double lower = trace_norm(hermitian_part(root * j_ * root));
  if (lower > best_lower_ || best_input_.size() == 0) {
    best_lower_ = std::max(best_lower_, lower);
    best_input_ = rho;
  }
}

SdpResult DiamondSolver::solve() {
  SdpResult result;
  const double jnorm = j_.size() ? j_.cwiseAbs().maxCoeff() : 0.0;
  if (jnorm == 0.0) {
    result.value = result.dual_value = 0.0;
    result.iterations = 0;
    result.status = SdpStatus::kOptimal;
    result.optimal_input = ComplexMatrix::Identity(m_, m_) / static_cast<double>(m_);
    return result;
  }
  const double spec = eigvalsh(j_).cwiseAbs().maxCoeff();

  // Strictly feasible start on both sides.
  Point p;
  p.x[2] = ComplexMatrix::Identity(m_, m_) / static_cast<double>(m_);
  p.x[0] = p.x[1] = 0.5 * lift(p.x[2]);
  p.z = -(spec + 1.0) * ComplexMatrix::Identity(n_, n_);
  p.t = -(spec + 1.0) * dout_ - 1.0;
  p.s = dual_slack(p.z, p.t);

  const double cone_dim = 2.0 * static_cast<double>(n_) + m_;
  const double target = std::min(1e-3 * opt_.gap_tol, 1e-10);
  int iter = 0;
  for (; iter < opt_.max_iters; ++iter) {
    certify(p);
    if (best_upper_ - best_lower_ <= target * (1.0 + std::abs(best_upper_))) break;

    // Residuals.
    rp_z_ = -(p.x[0] + p.x[1] - lift(p.x[2]));
    rp_t_ = 1.0 - p.x[2].trace().real();
    const auto slack = dual_slack(p.z, p.t);
    for (int b = 0; b < 3; ++b) rd_[b] = slack[b] - p.s[b];

    double mu = 0.0;
    for (int b = 0; b < 3; ++b) mu += inner(p.x[b], p.s[b]);
    mu /= cone_dim;
    if (!(mu > 0.0)) break;

    bool ok = true;
    for (int b = 0; b < 3 && ok; ++b) {
      auto nt = nt_scaling(p.x[b], p.s[b]);
      if (!nt) ok = false;
      else nt_[b] = std::move(*nt);
    }
    if (!ok || !factor_schur()) break;

    // Predictor.
    const Direction aff = solve_direction({-p.x[0], -p.x[1], -p.x[2]});
    double ap = 1.0, ad = 1.0;
    for (int b = 0; b < 3; ++b) {
      ap = std::min(ap, max_step(p.x[b], aff.dx[b]));
      ad = std::min(ad, max_step(p.s[b], aff.ds[b]));
    }
    double mu_aff = 0.0;
    for (int b = 0; b < 3; ++b) mu_aff += inner(p.x[b] + ap * aff.dx[b], p.s[b] + ad * aff.ds[b]);
    mu_aff /= cone_dim;
    const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3.0), 0.0, 1.0);

    // Corrector with the second-order term in the scaled space.
    std::array<ComplexMatrix, 3> rc;
    for (int b = 0; b < 3; ++b) {
      const NtScaling& nt = nt_[b];
      const ComplexMatrix dxs = nt.g_inv * aff.dx[b] * nt.g_inv.adjoint();
      const ComplexMatrix dss = nt.g.adjoint() * aff.ds[b] * nt.g;
      ComplexMatrix r = -(dxs * dss + dss * dxs);
      for (long i = 0; i < nt.sv.size(); ++i) r(i, i) += 2.0 * (sigma * mu - nt.sv(i) * nt.sv(i));
      for (long c = 0; c < r.cols(); ++c)
        for (long i = 0; i < r.rows(); ++i) r(i, c) /= (nt.sv(i) + nt.sv(c));
      rc[b] = hermitian_part(nt.g * r * nt.g.adjoint());
    }
    const Direction dir = solve_direction(rc);
    ap = 1.0;
    ad = 1.0;
    for (int b = 0; b < 3; ++b) {
      ap = std::min(ap, 0.95 * max_step(p.x[b], dir.dx[b]));
      ad = std::min(ad, 0.95 * max_step(p.s[b], dir.ds[b]));
    }
    if (ap < 1e-12 && ad < 1e-12) break;
    for (int b = 0; b < 3; ++b) {
      p.x[b] = hermitian_part(p.x[b] + ap * dir.dx[b]);
      p.s[b] = hermitian_part(p.s[b] + ad * dir.ds[b]);
    }
    p.z += ad * dir.dz;
    p.t += ad * dir.dt;
  }
  certify(p);

  result.value = best_upper_;
  result.dual_value = best_lower_;
  result.iterations = iter;
  result.optimal_input = best_input_;
  result.status = (best_upper_ - best_lower_ <= opt_.gap_tol * (1.0 + std::abs(best_upper_))) ? SdpStatus::kOptimal
                                                                                              : SdpStatus::kMaxIters;
  return result;
}

}  // namespace

SdpResult diamond_norm(const HermitianPreservingMap& map, const SdpOptions& options) {
  if (options.max_iters < 1) throw ArgumentError("SDP needs at least one iteration");
  if (!(options.gap_tol > 0.0)) throw ArgumentError("SDP gap tolerance must be positive");
  DiamondSolver solver(map.choi(), options);
  return solver.solve();
}

}  // namespace capcont
