#include "capcont/channels.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "capcont/errors.hpp"
#include "capcont/random.hpp"

namespace capcont {

namespace {

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    std::ostringstream os;
    os << what << " must lie in [0,1], got " << p;
    throw ArgumentError(os.str());
  }
}

ComplexMatrix ket_bra(int rows, int cols, int i, int j) {
  ComplexMatrix m = ComplexMatrix::Zero(rows, cols);
  m(i, j) = 1.0;
  return m;
}

// Largest Choi dimension for which tensor_power/mix re-canonicalize.
constexpr long kCanonicalizeLimit = 1024;

}  // namespace

QuantumChannel::QuantumChannel(int d_in, int d_out, std::vector<ComplexMatrix> kraus)
    : d_in_(d_in), d_out_(d_out), kraus_(std::move(kraus)) {
  if (d_in < 1 || d_out < 1) throw ArgumentError("channel dimensions must be positive");
  if (d_in > kMaxDimension || d_out > kMaxDimension) throw DimensionError("channel dimension exceeds limit");
  if (kraus_.empty()) throw ArgumentError("channel needs at least one Kraus operator");
  for (const auto& k : kraus_) {
    if (k.rows() != d_out || k.cols() != d_in) throw DimensionError("Kraus operator has wrong shape");
    if (!k.allFinite()) throw ArgumentError("Kraus operator has non-finite entries");
  }
  const double r = tp_residual();
  if (r > tol::kTp) throw TpViolation(r);
}

double QuantumChannel::tp_residual() const {
  ComplexMatrix s = ComplexMatrix::Zero(d_in_, d_in_);
  for (const auto& k : kraus_) s.noalias() += k.adjoint() * k;
  return (s - ComplexMatrix::Identity(d_in_, d_in_)).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// Action

ComplexMatrix apply_to_operator(const QuantumChannel& ch, const ComplexMatrix& x) {
  if (x.rows() != ch.d_in() || x.cols() != ch.d_in()) throw DimensionError("operator dimension does not match channel input");
  ComplexMatrix out = ComplexMatrix::Zero(ch.d_out(), ch.d_out());
  for (const auto& k : ch.kraus()) out.noalias() += k * x * k.adjoint();
  return out;
}

DensityMatrix apply(const QuantumChannel& ch, const DensityMatrix& rho) {
  if (rho.dim() != ch.d_in()) throw DimensionError("state dimension does not match channel input");
  return DensityMatrix::assume_valid(apply_to_operator(ch, rho.matrix()), Dims{ch.d_out()});
}

DensityMatrix apply_local(const DensityMatrix& rho, std::span<const int> factors,
                          std::span<const QuantumChannel* const> channels) {
  if (factors.size() != channels.size()) throw ArgumentError("one channel per factor required");
  ComplexMatrix m = rho.matrix();
  Dims dims = rho.dims();
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const int f = factors[i];
    const QuantumChannel& ch = *channels[i];
    if (f < 0 || f >= static_cast<int>(dims.size())) throw ArgumentError("channel factor index out of range");
    if (dims[f] != ch.d_in()) throw DimensionError("factor dimension does not match channel input");
    if (dims_product(dims) / dims[f] * ch.d_out() > kMaxDimension) throw DimensionError("extended output exceeds limit");
    m = conjugate_factor(m, dims, f, ch.kraus());
    dims[f] = ch.d_out();
  }
  return DensityMatrix::assume_valid(std::move(m), std::move(dims));
}

DensityMatrix apply_extended(const QuantumChannel& ch, const DensityMatrix& rho, std::span<const int> channel_factors) {
  std::vector<const QuantumChannel*> chs(channel_factors.size(), &ch);
  return apply_local(rho, channel_factors, chs);
}

DensityMatrix apply_extended(const QuantumChannel& ch, const DensityMatrix& rho, std::initializer_list<int> channel_factors) {
  return apply_extended(ch, rho, std::span<const int>(channel_factors.begin(), channel_factors.size()));
}

// ---------------------------------------------------------------------------
// Choi representation

ChoiMatrix to_choi(const QuantumChannel& ch) {
  const int din = ch.d_in(), dout = ch.d_out();
  const long n = static_cast<long>(din) * dout;
  ComplexMatrix j = ComplexMatrix::Zero(n, n);
  ComplexVector v(n);
  for (const auto& k : ch.kraus()) {
    for (int i = 0; i < din; ++i)
      for (int b = 0; b < dout; ++b) v(static_cast<long>(i) * dout + b) = k(b, i);
    j.noalias() += v * v.adjoint();
  }
  return {std::move(j), din, dout};
}

double choi_min_eigenvalue(const ChoiMatrix& choi) {
  const RealVector ev = eigvalsh(choi.matrix);
  return ev(ev.size() - 1);
}

double choi_tp_residual(const ChoiMatrix& choi) {
  const int keep[] = {0};
  const ComplexMatrix tr_out = partial_trace(choi.matrix, Dims{choi.d_in, choi.d_out}, keep);
  return (tr_out - ComplexMatrix::Identity(choi.d_in, choi.d_in)).cwiseAbs().maxCoeff();
}

QuantumChannel from_choi(const ChoiMatrix& choi) {
  const long n = static_cast<long>(choi.d_in) * choi.d_out;
  if (choi.d_in < 1 || choi.d_out < 1 || choi.matrix.rows() != n || choi.matrix.cols() != n)
    throw DimensionError("Choi matrix shape does not match its dimensions");
  if (hermiticity_residual(choi.matrix) > tol::kHerm) throw ArgumentError("Choi matrix is not Hermitian");
  const Eigensystem es = eigh(choi.matrix);
  const double min_ev = es.values(es.values.size() - 1);
  if (min_ev < -tol::kPsd) throw CpViolation(min_ev);
  const double tp = choi_tp_residual(choi);
  if (tp > tol::kTp) throw TpViolation(tp);

  std::vector<ComplexMatrix> kraus;
  for (Eigen::Index e = 0; e < es.values.size(); ++e) {
    if (es.values(e) < tol::kPsd) break;
    const double w = std::sqrt(es.values(e));
    ComplexMatrix k(choi.d_out, choi.d_in);
    for (int i = 0; i < choi.d_in; ++i)
      for (int b = 0; b < choi.d_out; ++b) k(b, i) = w * es.vectors(static_cast<long>(i) * choi.d_out + b, e);
    kraus.push_back(std::move(k));
  }
  if (kraus.empty()) throw NumericError("Choi matrix has no eigenvalue above the positivity tolerance");

  // Dropped eigenvalues leave a residual up to tol::kPsd; rescale so the
  // family is exactly trace preserving.
  ComplexMatrix s = ComplexMatrix::Zero(choi.d_in, choi.d_in);
  for (const auto& k : kraus) s.noalias() += k.adjoint() * k;
  const ComplexMatrix inv_sqrt = spectral_map(s, [](double x) { return 1.0 / std::sqrt(x); });
  for (auto& k : kraus) k = k * inv_sqrt;
  return QuantumChannel(choi.d_in, choi.d_out, std::move(kraus));
}

QuantumChannel canonicalize(const QuantumChannel& ch) { return from_choi(to_choi(ch)); }

// ---------------------------------------------------------------------------
// Stinespring

IsometricExtension stinespring(const QuantumChannel& ch) {
  const int env = static_cast<int>(ch.kraus().size());
  IsometricExtension iso{ComplexMatrix(static_cast<long>(ch.d_out()) * env, ch.d_in()), ch.d_in(), ch.d_out(), env};
  for (int e = 0; e < env; ++e) {
    const auto& k = ch.kraus()[e];
    for (int b = 0; b < ch.d_out(); ++b) iso.v.row(static_cast<long>(b) * env + e) = k.row(b);
  }
  return iso;
}

QuantumChannel complementary(const IsometricExtension& iso) {
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(iso.d_out);
  for (int b = 0; b < iso.d_out; ++b) kraus.push_back(iso.v.middleRows(static_cast<long>(b) * iso.d_env, iso.d_env));
  return QuantumChannel(iso.d_in, iso.d_env, std::move(kraus));
}

QuantumChannel complementary(const QuantumChannel& ch) { return complementary(stinespring(ch)); }

ComplexMatrix apply_isometry_trace_env(const IsometricExtension& iso, const ComplexMatrix& rho) {
  const ComplexMatrix full = iso.v * rho * iso.v.adjoint();
  const int keep[] = {0};
  return partial_trace(full, Dims{iso.d_out, iso.d_env}, keep);
}

// ---------------------------------------------------------------------------
// Composition

QuantumChannel mix(std::span<const QuantumChannel> channels, std::span<const double> probs) {
  if (channels.empty() || channels.size() != probs.size()) throw ArgumentError("mix needs one probability per channel");
  const int din = channels[0].d_in(), dout = channels[0].d_out();
  double total = 0.0;
  for (std::size_t i = 0; i < channels.size(); ++i) {
    if (channels[i].d_in() != din || channels[i].d_out() != dout) throw DimensionError("mixed channels must share dimensions");
    if (!(probs[i] >= 0.0) || !std::isfinite(probs[i])) throw ArgumentError("mixing probabilities must be nonnegative");
    total += probs[i];
  }
  if (std::abs(total - 1.0) > tol::kTrace) throw ArgumentError("mixing probabilities must sum to 1");

  std::vector<ComplexMatrix> kraus;
  for (std::size_t i = 0; i < channels.size(); ++i) {
    if (probs[i] == 0.0) continue;
    const double w = std::sqrt(probs[i] / total);
    for (const auto& k : channels[i].kraus()) kraus.push_back(w * k);
  }
  QuantumChannel out(din, dout, std::move(kraus));
  const long choi_dim = static_cast<long>(din) * dout;
  if (static_cast<long>(out.kraus().size()) > choi_dim && choi_dim <= kCanonicalizeLimit) return canonicalize(out);
  return out;
}

QuantumChannel mix(std::initializer_list<QuantumChannel> channels, std::initializer_list<double> probs) {
  return mix(std::span<const QuantumChannel>(channels.begin(), channels.size()),
             std::span<const double>(probs.begin(), probs.size()));
}

QuantumChannel tensor(const QuantumChannel& a, const QuantumChannel& b) {
  const long din = static_cast<long>(a.d_in()) * b.d_in();
  const long dout = static_cast<long>(a.d_out()) * b.d_out();
  if (din > kMaxDimension || dout > kMaxDimension) throw DimensionError("tensor product channel exceeds dimension limit");
  std::vector<ComplexMatrix> kraus;
  kraus.reserve(a.kraus().size() * b.kraus().size());
  for (const auto& ka : a.kraus())
    for (const auto& kb : b.kraus()) kraus.push_back(tensor(ka, kb));
  QuantumChannel out(static_cast<int>(din), static_cast<int>(dout), std::move(kraus));
  if (static_cast<long>(out.kraus().size()) > din * dout && din * dout <= kCanonicalizeLimit) return canonicalize(out);
  return out;
}

QuantumChannel tensor_power(const QuantumChannel& ch, int n) {
  if (n < 1) throw ArgumentError("tensor power needs n >= 1");
  double out_dim = std::pow(static_cast<double>(ch.d_out()), n);
  double in_dim = std::pow(static_cast<double>(ch.d_in()), n);
  if (out_dim > kMaxDimension || in_dim > kMaxDimension) throw DimensionError("tensor power exceeds dimension limit");
  QuantumChannel out = ch;
  for (int i = 1; i < n; ++i) out = tensor(out, ch);
  return out;
}

QuantumChannel precompose_unitary(const QuantumChannel& ch, const ComplexMatrix& u) {
  if (u.rows() != ch.d_in() || u.cols() != ch.d_in()) throw DimensionError("unitary dimension does not match channel input");
  std::vector<ComplexMatrix> kraus;
  for (const auto& k : ch.kraus()) kraus.push_back(k * u);
  return QuantumChannel(ch.d_in(), ch.d_out(), std::move(kraus));
}

// ---------------------------------------------------------------------------
// Named channels

QuantumChannel identity_channel(int d) {
  if (d < 1) throw ArgumentError("dimension must be positive");
  return QuantumChannel(d, d, {ComplexMatrix::Identity(d, d)});
}

QuantumChannel constant_channel(int d) {
  if (d < 1) throw ArgumentError("dimension must be positive");
  std::vector<ComplexMatrix> kraus;
  for (int i = 0; i < d; ++i) kraus.push_back(ket_bra(d, d, 0, i));
  return QuantumChannel(d, d, std::move(kraus));
}

QuantumChannel erasure(int d, double p) {
  if (d < 1) throw ArgumentError("dimension must be positive");
  check_probability(p, "erasure probability");
  std::vector<ComplexMatrix> kraus;
  if (p < 1.0) {
    ComplexMatrix k = ComplexMatrix::Zero(d + 1, d);
    k.topRows(d).setIdentity();
    kraus.push_back(std::sqrt(1.0 - p) * k);
  }
  if (p > 0.0)
    for (int i = 0; i < d; ++i) kraus.push_back(std::sqrt(p) * ket_bra(d + 1, d, d, i));
  return QuantumChannel(d, d + 1, std::move(kraus));
}

QuantumChannel depolarizing(int d, double p) {
  if (d < 1) throw ArgumentError("dimension must be positive");
  check_probability(p, "depolarizing probability");
  // Weyl operators X^a Z^b form a unitary 1-design.
  ComplexMatrix shift = ComplexMatrix::Zero(d, d);
  ComplexMatrix clock = ComplexMatrix::Zero(d, d);
  for (int j = 0; j < d; ++j) {
    shift((j + 1) % d, j) = 1.0;
    clock(j, j) = std::polar(1.0, 2.0 * M_PI * j / d);
  }
  const double d2 = static_cast<double>(d) * d;
  std::vector<ComplexMatrix> kraus;
  kraus.push_back(std::sqrt(1.0 - p + p / d2) * ComplexMatrix::Identity(d, d));
  if (p > 0.0) {
    ComplexMatrix xa = ComplexMatrix::Identity(d, d);
    for (int a = 0; a < d; ++a) {
      ComplexMatrix w = xa;
      for (int b = 0; b < d; ++b) {
        if (a != 0 || b != 0) kraus.push_back(std::sqrt(p / d2) * w);
        w = w * clock;
      }
      xa = shift * xa;
    }
  }
  return QuantumChannel(d, d, std::move(kraus));
}

QuantumChannel dephasing(double p) {
  check_probability(p, "dephasing probability");
  ComplexMatrix z = ComplexMatrix::Identity(2, 2);
  z(1, 1) = -1.0;
  std::vector<ComplexMatrix> kraus{std::sqrt(1.0 - p) * ComplexMatrix::Identity(2, 2)};
  if (p > 0.0) kraus.push_back(std::sqrt(p) * z);
  return QuantumChannel(2, 2, std::move(kraus));
}

QuantumChannel sink_channel(int n) {
  if (n < 1) throw ArgumentError("data dimension must be positive");
  std::vector<ComplexMatrix> kraus;
  for (int i = 0; i < n; ++i) kraus.push_back(ket_bra(n + 1, n, 0, i));
  return QuantumChannel(n, n + 1, std::move(kraus));
}

QuantumChannel embedded_identity(int n) {
  if (n < 1) throw ArgumentError("data dimension must be positive");
  ComplexMatrix k = ComplexMatrix::Zero(n + 1, n);
  k.bottomRows(n).setIdentity();
  return QuantumChannel(n, n + 1, {k});
}

QuantumChannel half_sink_channel(int n) {
  return mix({sink_channel(n), embedded_identity(n)}, {0.5, 0.5});
}

namespace {
double inverse_log(int n) {
  if (n < 2) throw ArgumentError("truncation level n must be at least 2");
  return 1.0 / std::log2(static_cast<double>(n));
}
}  // namespace

QuantumChannel truncated_classical_example(int n) {
  const double w = inverse_log(n);
  return mix({sink_channel(n), embedded_identity(n)}, {1.0 - w, w});
}

QuantumChannel truncated_quantum_example(int n) {
  const double w = inverse_log(n);
  return mix({half_sink_channel(n), embedded_identity(n)}, {1.0 - w, w});
}

QuantumChannel random_channel(int d_in, int d_out, int kraus_rank, Rng& rng) {
  if (kraus_rank < 1 || static_cast<long>(d_out) * kraus_rank < d_in)
    throw ArgumentError("Kraus rank too small for an isometric dilation");
  const int big = d_out * kraus_rank;
  const ComplexMatrix u = haar_unitary(big, rng);
  std::vector<ComplexMatrix> kraus;
  for (int e = 0; e < kraus_rank; ++e) {
    ComplexMatrix k(d_out, d_in);
    for (int b = 0; b < d_out; ++b) k.row(b) = u.row(static_cast<long>(b) * kraus_rank + e).head(d_in);
    kraus.push_back(std::move(k));
  }
  return QuantumChannel(d_in, d_out, std::move(kraus));
}

}  // namespace capcont
