#include "capcont/capopt.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "capcont/errors.hpp"
#include "capcont/parallel.hpp"
#include "capcont/random.hpp"

namespace capcont {

namespace {

// Eigenvalues below this are treated as this when taking logarithms, so
// the entropy gradient stays finite on rank-deficient outputs.
constexpr double kLogFloor = 1e-10;

struct Spectral {
  double entropy;
  ComplexMatrix neglog;  // -log2 of the floored spectrum
};

Spectral entropy_and_neglog(const ComplexMatrix& w) {
  const Eigensystem es = eigh(hermitian_part(w));
  RealVector nl(es.values.size());
  for (Eigen::Index i = 0; i < es.values.size(); ++i) nl(i) = -std::log2(std::max(es.values(i), kLogFloor));
  return {spectrum_entropy(es.values), es.vectors * nl.asDiagonal() * es.vectors.adjoint()};
}

/// Sum_k K^dagger y K
ComplexMatrix adjoint_apply(const QuantumChannel& ch, const ComplexMatrix& y) {
  ComplexMatrix out = ComplexMatrix::Zero(ch.d_in(), ch.d_in());
  for (const auto& k : ch.kraus()) out.noalias() += k.adjoint() * y * k;
  return out;
}

ComplexMatrix apply_pure(const QuantumChannel& ch, const ComplexVector& v) {
  ComplexMatrix out = ComplexMatrix::Zero(ch.d_out(), ch.d_out());
  for (const auto& k : ch.kraus()) {
    const ComplexVector w = k * v;
    out.noalias() += w * w.adjoint();
  }
  return out;
}

// ---------------------------------------------------------------------------
// Gradient ascent with Armijo backtracking. The objective is invariant
// under `retract`, which maps parameters back to a canonical scale.

using Objective = std::function<double(const ComplexVector&, ComplexVector*)>;
using Retraction = std::function<void(ComplexVector&)>;

struct Ascent {
  ComplexVector x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

Ascent ascend(const Objective& f, ComplexVector x, const Retraction& retract, const OptimizerOptions& opts) {
  constexpr double kArmijo = 1e-4;
  constexpr double kMinStep = 1e-16;
  constexpr double kMaxStep = 1e6;
  retract(x);
  ComplexVector g;
  double fx = f(x, &g);
  double step = 1.0;
  Ascent out;
  for (; out.iterations < opts.max_iters; ++out.iterations) {
    const double gn2 = g.squaredNorm();
    if (std::sqrt(gn2) < opts.grad_tol) {
      out.converged = true;
      break;
    }
    bool accepted = false;
    step = std::min(2.0 * step, kMaxStep);
    while (step > kMinStep) {
      ComplexVector trial = x + step * g;
      retract(trial);
      ComplexVector gt;
      const double ft = f(trial, &gt);
      if (ft >= fx + kArmijo * step * gn2) {
        x = std::move(trial);
        g = std::move(gt);
        fx = ft;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
  }
  if (!out.converged && out.iterations < opts.max_iters) out.converged = g.norm() < opts.grad_tol;
  out.x = std::move(x);
  out.value = fx;
  return out;
}

void check_options(const OptimizerOptions& opts) {
  if (opts.restarts < 1) throw ArgumentError("at least one restart required");
  if (opts.max_iters < 0) throw ArgumentError("iteration cap must be nonnegative");
  if (!(opts.grad_tol > 0.0)) throw ArgumentError("gradient tolerance must be positive");
}

/// Runs every restart, then picks the largest value (lowest index on ties).
template <typename Init>
std::vector<Ascent> run_restarts(const Objective& f, const Retraction& retract, const OptimizerOptions& opts, Init&& init) {
  std::vector<Ascent> results(static_cast<std::size_t>(opts.restarts));
  parallel_for(results.size(), [&](std::size_t r) {
    Rng rng = Rng::stream(opts.seed, r);
    results[r] = ascend(f, init(rng), retract, opts);
  });
  return results;
}

std::size_t best_index(const std::vector<Ascent>& results) {
  std::size_t best = 0;
  for (std::size_t r = 1; r < results.size(); ++r)
    if (results[r].value > results[best].value) best = r;
  return best;
}

void fill_restarts(OptimizationReport& report, const std::vector<Ascent>& results, std::size_t best) {
  report.restarts = static_cast<int>(results.size());
  report.best_restart = static_cast<int>(best);
  for (const auto& r : results) {
    report.iterations.push_back(r.iterations);
    report.restart_values.push_back(r.value);
  }
  report.converged = results[best].converged;
}

// ---------------------------------------------------------------------------
// Coherent information. Parameters: X (d_in x d_in, column-major), with
// rho_A' = X X^dagger / ||X||^2 and psi(a, i) = X(i, a) / ||X||.

double coherent_objective(const QuantumChannel& ch, const QuantumChannel& comp, const ComplexVector& params, ComplexVector* grad) {
  const int d = ch.d_in();
  const Eigen::Map<const ComplexMatrix> x(params.data(), d, d);
  const double t = x.squaredNorm();
  const ComplexMatrix rho = x * x.adjoint() / t;
  const Spectral b = entropy_and_neglog(apply_to_operator(ch, rho));
  const Spectral e = entropy_and_neglog(apply_to_operator(comp, rho));
  if (grad) {
    ComplexMatrix g = adjoint_apply(ch, b.neglog) - adjoint_apply(comp, e.neglog);
    g = hermitian_part(g);
    const double mean = (g * rho).trace().real();
    const ComplexMatrix gx = 2.0 * (g - mean * ComplexMatrix::Identity(d, d)) * x / t;
    *grad = Eigen::Map<const ComplexVector>(gx.data(), gx.size());
  }
  return b.entropy - e.entropy;
}

PureState state_from_params(const ComplexVector& params, int d) {
  const Eigen::Map<const ComplexMatrix> x(params.data(), d, d);
  ComplexVector psi(static_cast<long>(d) * d);
  for (int a = 0; a < d; ++a)
    for (int i = 0; i < d; ++i) psi(static_cast<long>(a) * d + i) = x(i, a);
  return PureState::normalized(psi, Dims{d, d});
}

// ---------------------------------------------------------------------------
// Ensembles. Parameters: m logits (real parts), then m unnormalized vectors.

struct Term {
  const QuantumChannel* ch;
  double sign;
};

double ensemble_objective(std::span<const Term> terms, int m, int d, const ComplexVector& params, ComplexVector* grad) {
  RealVector logits(m);
  for (int x = 0; x < m; ++x) logits(x) = params(x).real();
  const RealVector expo = (logits.array() - logits.maxCoeff()).exp();
  const RealVector p = expo / expo.sum();

  std::vector<ComplexVector> v(m);
  for (int x = 0; x < m; ++x) v[x] = params.segment(m + static_cast<long>(x) * d, d).normalized();

  double value = 0.0;
  RealVector dp = RealVector::Zero(m);
  std::vector<ComplexMatrix> gphi(m, ComplexMatrix::Zero(d, d));
  for (const Term& term : terms) {
    const int dout = term.ch->d_out();
    std::vector<ComplexMatrix> out(m);
    std::vector<Spectral> spec(m);
    ComplexMatrix avg = ComplexMatrix::Zero(dout, dout);
    double cond = 0.0;
    for (int x = 0; x < m; ++x) {
      out[x] = apply_pure(*term.ch, v[x]);
      avg += p(x) * out[x];
    }
    const Spectral total = entropy_and_neglog(avg);
    for (int x = 0; x < m; ++x) {
      spec[x] = entropy_and_neglog(out[x]);
      cond += p(x) * spec[x].entropy;
    }
    value += term.sign * (total.entropy - cond);
    if (!grad) continue;
    for (int x = 0; x < m; ++x) {
      dp(x) += term.sign * ((out[x] * total.neglog).trace().real() - spec[x].entropy);
      gphi[x] += term.sign * p(x) * adjoint_apply(*term.ch, total.neglog - spec[x].neglog);
    }
  }
  if (grad) {
    grad->setZero(params.size());
    const double mean = p.dot(dp);
    for (int x = 0; x < m; ++x) (*grad)(x) = p(x) * (dp(x) - mean);
    for (int x = 0; x < m; ++x) {
      const ComplexVector raw = params.segment(m + static_cast<long>(x) * d, d);
      const double norm2 = raw.squaredNorm();
      const ComplexMatrix g = hermitian_part(gphi[x]);
      const double expect = v[x].dot(g * v[x]).real();
      grad->segment(m + static_cast<long>(x) * d, d) = 2.0 * (g * raw - expect * raw) / norm2;
    }
  }
  return value;
}

void retract_ensemble(ComplexVector& params, int m, int d) {
  double top = params(0).real();
  for (int x = 1; x < m; ++x) top = std::max(top, params(x).real());
  for (int x = 0; x < m; ++x) params(x) = params(x).real() - top;
  for (int x = 0; x < m; ++x) {
    auto seg = params.segment(m + static_cast<long>(x) * d, d);
    seg /= seg.norm();
  }
}

Ensemble ensemble_from_params(const ComplexVector& params, int m, int d) {
  RealVector logits(m);
  for (int x = 0; x < m; ++x) logits(x) = params(x).real();
  const RealVector expo = (logits.array() - logits.maxCoeff()).exp();
  const RealVector p = expo / expo.sum();
  std::vector<EnsembleItem> items;
  items.reserve(m);
  for (int x = 0; x < m; ++x) {
    const ComplexVector v = params.segment(m + static_cast<long>(x) * d, d).normalized();
    items.push_back({p(x), DensityMatrix::assume_valid(v * v.adjoint(), Dims{d})});
  }
  return Ensemble(std::move(items));
}

OptimizationReport maximize_ensemble(const QuantumChannel& ch, int m, const OptimizerOptions& opts, bool is_private) {
  check_options(opts);
  if (m < 2) throw ArgumentError("ensemble size must be at least 2");
  const int d = ch.d_in();
  const IsometricExtension iso = stinespring(ch);
  const QuantumChannel comp = complementary(iso);
  std::vector<Term> terms{{&ch, 1.0}};
  if (is_private) terms.push_back({&comp, -1.0});

  const Objective f = [&](const ComplexVector& params, ComplexVector* g) { return ensemble_objective(terms, m, d, params, g); };
  const Retraction retract = [m, d](ComplexVector& params) { retract_ensemble(params, m, d); };
  const auto results = run_restarts(f, retract, opts, [m, d](Rng& rng) {
    ComplexVector params(m + static_cast<long>(m) * d);
    for (int x = 0; x < m; ++x) params(x) = 0.1 * rng.normal();
    for (int x = 0; x < m; ++x) params.segment(m + static_cast<long>(x) * d, d) = haar_vector(d, rng);
    return params;
  });

  const std::size_t best = best_index(results);
  OptimizationReport report;
  report.quantity = is_private ? "private" : "holevo";
  fill_restarts(report, results, best);
  Ensemble ens = ensemble_from_params(results[best].x, m, d);
  report.best_value = is_private ? private_information(ch, ens, iso) : holevo_information(ch, ens);
  report.best_ensemble = std::move(ens);
  return report;
}

void check_copies(const QuantumChannel& ch, int n, bool squared_input) {
  if (n < 1) throw ArgumentError("copy count must be at least 1");
  long din = 1, dout = 1;
  for (int i = 0; i < n; ++i) {
    din *= ch.d_in();
    dout *= ch.d_out();
    if ((squared_input ? din * din : din) > kMaxDimension || dout > kMaxDimension)
      throw DimensionError("n-copy channel exceeds the dimension budget");
  }
}

NCopyReport finish_n_copy(int n, OptimizationReport report, double single) {
  NCopyReport out;
  out.n = n;
  out.per_copy = report.best_value / n;
  out.single_letter = single;
  out.superadditivity_consistent = out.per_copy >= single - tol::kOpt;
  out.report = std::move(report);
  return out;
}

}  // namespace

OptimizationReport max_coherent_information(const QuantumChannel& ch, const OptimizerOptions& opts) {
  check_options(opts);
  const int d = ch.d_in();
  if (static_cast<long>(d) * d > kMaxDimension) throw DimensionError("d_in^2 exceeds the dimension budget");
  const QuantumChannel comp = complementary(ch);
  const Objective f = [&](const ComplexVector& params, ComplexVector* g) { return coherent_objective(ch, comp, params, g); };
  const Retraction retract = [](ComplexVector& params) { params.normalize(); };
  const auto results = run_restarts(f, retract, opts, [d](Rng& rng) {
    ComplexVector params(static_cast<long>(d) * d);
    for (Eigen::Index i = 0; i < params.size(); ++i) params(i) = rng.complex_normal();
    return params;
  });

  const std::size_t best = best_index(results);
  OptimizationReport report;
  report.quantity = "coherent";
  fill_restarts(report, results, best);
  PureState psi = state_from_params(results[best].x, d);
  report.best_value = coherent_information(ch, psi);
  report.best_state = std::move(psi);
  return report;
}

OptimizationReport max_holevo(const QuantumChannel& ch, int ensemble_size, const OptimizerOptions& opts) {
  return maximize_ensemble(ch, ensemble_size, opts, false);
}

OptimizationReport max_private(const QuantumChannel& ch, int ensemble_size, const OptimizerOptions& opts) {
  return maximize_ensemble(ch, ensemble_size, opts, true);
}

NCopyReport n_copy_coherent_information(const QuantumChannel& ch, int n, const OptimizerOptions& opts) {
  check_copies(ch, n, true);
  OptimizationReport single = max_coherent_information(ch, opts);
  if (n == 1) return finish_n_copy(1, single, single.best_value);
  return finish_n_copy(n, max_coherent_information(tensor_power(ch, n), opts), single.best_value);
}

NCopyReport n_copy_holevo(const QuantumChannel& ch, int n, int ensemble_size, const OptimizerOptions& opts) {
  check_copies(ch, n, false);
  OptimizationReport single = max_holevo(ch, ensemble_size, opts);
  if (n == 1) return finish_n_copy(1, single, single.best_value);
  return finish_n_copy(n, max_holevo(tensor_power(ch, n), ensemble_size, opts), single.best_value);
}

NCopyReport n_copy_private(const QuantumChannel& ch, int n, int ensemble_size, const OptimizerOptions& opts) {
  check_copies(ch, n, false);
  OptimizationReport single = max_private(ch, ensemble_size, opts);
  if (n == 1) return finish_n_copy(1, single, single.best_value);
  return finish_n_copy(n, max_private(tensor_power(ch, n), ensemble_size, opts), single.best_value);
}

}  // namespace capcont
