#include "capcont/continuity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "capcont/errors.hpp"
#include "capcont/parallel.hpp"
#include "capcont/random.hpp"

namespace capcont {

namespace {

void check_eps(double eps) {
  if (!(eps >= 0.0 && eps <= 1.0)) throw ArgumentError("eps must lie in [0, 1]");
}

void check_dim(int d) {
  if (d < 2) throw ArgumentError("dimension must be at least 2");
}

long int_pow(long base, int exp) {
  long r = 1;
  for (int i = 0; i < exp; ++i) {
    r *= base;
    if (r > kMaxDimension) throw DimensionError("tensor power exceeds the dimension budget");
  }
  return r;
}

/// Certified distance, clamped to the range of the diamond distance of channels.
std::pair<SdpResult, double> certified_distance(const QuantumChannel& a, const QuantumChannel& b, const SdpOptions& sdp) {
  if (a.d_in() != b.d_in() || a.d_out() != b.d_out()) throw DimensionError("channels must share dimensions");
  SdpResult res = diamond_norm(HermitianPreservingMap::difference(a, b), sdp);
  return {res, std::clamp(res.value, 0.0, 2.0)};
}

}  // namespace

double fannes_bound(double eps, int d) {
  check_eps(eps);
  check_dim(d);
  return eps * std::log2(d) + binary_entropy(eps);
}

double af_bound(double eps, int d_a) {
  check_eps(eps);
  check_dim(d_a);
  return 4.0 * eps * std::log2(d_a) + 2.0 * binary_entropy(eps);
}

double output_entropy_bound(int n, double eps, int d_b) {
  if (n < 1) throw ArgumentError("copy count must be at least 1");
  return n * af_bound(eps, d_b);
}

CapacityBounds capacity_bounds(double eps, int d_b) {
  const double base = 2.0 * af_bound(eps, d_b);
  return {base, base, 2.0 * base};
}

BoundReport make_report(std::string quantity, double measured, double bound, double eps, int n, int d_b) {
  BoundReport r;
  r.quantity = std::move(quantity);
  r.measured = measured;
  r.bound = bound;
  r.epsilon = eps;
  r.n = n;
  r.d_b = d_b;
  r.margin = bound - measured;
  return r;
}

int count_violations(std::span<const BoundReport> reports, double slack) {
  return static_cast<int>(std::count_if(reports.begin(), reports.end(), [slack](const BoundReport& r) { return r.violated(slack); }));
}

// ---------------------------------------------------------------------------

HybridSequence hybrid_sequence(const QuantumChannel& n_ch, const QuantumChannel& m_ch, const PureState& phi, int n) {
  if (n < 1) throw ArgumentError("copy count must be at least 1");
  if (n_ch.d_in() != m_ch.d_in() || n_ch.d_out() != m_ch.d_out()) throw DimensionError("channels must share dimensions");
  const long in_block = int_pow(n_ch.d_in(), n);
  if (phi.dim() % in_block != 0) throw DimensionError("input state does not contain n channel inputs");
  const int d_a = static_cast<int>(phi.dim() / in_block);
  if (static_cast<long>(d_a) * int_pow(n_ch.d_out(), n) > kMaxDimension) throw DimensionError("hybrid states exceed the dimension budget");

  Dims dims{d_a};
  dims.insert(dims.end(), n, n_ch.d_in());
  const DensityMatrix input = phi.density().with_dims(dims);
  std::vector<int> factors(n);
  std::iota(factors.begin(), factors.end(), 1);

  HybridSequence seq;
  for (int k = 0; k <= n; ++k) {
    std::vector<const QuantumChannel*> chans(n);
    for (int j = 0; j < n; ++j) chans[j] = j < k ? &m_ch : &n_ch;
    seq.states.push_back(apply_local(input, factors, chans));
  }
  for (int k = 1; k <= n; ++k) {
    Bipartition split{{k}, {}};
    for (int f = 0; f <= n; ++f)
      if (f != k) split.b.push_back(f);
    const double before = conditional_entropy(seq.states[k - 1], split);
    const double after = conditional_entropy(seq.states[k], split);
    seq.step_differences.push_back(std::abs(before - after));
    seq.step_distances.push_back(trace_distance(seq.states[k - 1], seq.states[k]));
  }
  return seq;
}

// ---------------------------------------------------------------------------

VerificationRun verify_output_entropy(const QuantumChannel& n_ch, const QuantumChannel& m_ch, const HarnessOptions& opts) {
  if (opts.trials < 1) throw ArgumentError("at least one trial required");
  VerificationRun run;
  std::tie(run.distance, run.epsilon) = certified_distance(n_ch, m_ch, opts.sdp);
  const double eps = run.epsilon;
  if (eps > 1.0) throw DomainError("diamond distance exceeds 1; the entropy bounds are undefined there");
  const int n = opts.n;
  const int d_b = n_ch.d_out();
  const double total_bound = output_entropy_bound(n, eps, d_b);
  const double step_bound = af_bound(eps, d_b);
  const int d_a = static_cast<int>(int_pow(n_ch.d_in(), n));
  Dims dims{d_a};
  dims.insert(dims.end(), n, n_ch.d_in());

  std::vector<std::vector<BoundReport>> per_trial(static_cast<std::size_t>(opts.trials));
  parallel_for(per_trial.size(), [&](std::size_t t) {
    Rng rng = Rng::stream(opts.seed, t);
    const PureState phi = haar_pure_state(dims, rng);
    const HybridSequence seq = hybrid_sequence(n_ch, m_ch, phi, n);
    auto& out = per_trial[t];
    const double total = std::abs(von_neumann_entropy(seq.states.front()) - von_neumann_entropy(seq.states.back()));
    out.push_back(make_report("output_entropy", total, total_bound, eps, n, d_b));
    double step_sum = 0.0;
    for (int k = 0; k < n; ++k) {
      out.push_back(make_report("hybrid_step", seq.step_differences[k], step_bound, eps, n, d_b));
      out.push_back(make_report("hybrid_distance", seq.step_distances[k], eps + tol::kTrace, eps, n, d_b));
      step_sum += seq.step_differences[k];
    }
    out.push_back(make_report("telescoping", total, step_sum, eps, n, d_b));
    for (auto& r : out) {
      r.seed = opts.seed;
      r.trial = static_cast<int>(t);
    }
  });
  for (auto& v : per_trial) run.reports.insert(run.reports.end(), v.begin(), v.end());
  return run;
}

namespace {

Ensemble random_pure_ensemble(int d, int size, Rng& rng) {
  std::vector<double> w(size);
  for (auto& x : w) x = -std::log(1.0 - rng.uniform());  // flat Dirichlet weights
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  std::vector<EnsembleItem> items;
  for (int x = 0; x < size; ++x) {
    const ComplexVector v = haar_vector(d, rng);
    items.push_back({w[x] / total, DensityMatrix::assume_valid(v * v.adjoint(), Dims{d})});
  }
  return Ensemble(std::move(items));
}

}  // namespace

VerificationRun verify_capacity_continuity(const QuantumChannel& n_ch, const QuantumChannel& m_ch, const CapacityCheckOptions& opts) {
  const HarnessOptions& h = opts.harness;
  if (h.trials < 1) throw ArgumentError("at least one trial required");
  if (opts.ensemble_size < 1) throw ArgumentError("ensemble size must be positive");
  VerificationRun run;
  std::tie(run.distance, run.epsilon) = certified_distance(n_ch, m_ch, h.sdp);
  const double eps = run.epsilon;
  if (eps > 1.0) throw DomainError("diamond distance exceeds 1; the entropy bounds are undefined there");
  const int n = h.n;
  const int d_b = n_ch.d_out();
  const double base = output_entropy_bound(n, eps, d_b);
  const int d_in_n = static_cast<int>(int_pow(n_ch.d_in(), n));
  const QuantumChannel nn = tensor_power(n_ch, n);
  const QuantumChannel mn = tensor_power(m_ch, n);
  const IsometricExtension iso_n = stinespring(nn);
  const IsometricExtension iso_m = stinespring(mn);

  std::vector<std::vector<BoundReport>> per_trial(static_cast<std::size_t>(h.trials));
  parallel_for(per_trial.size(), [&](std::size_t t) {
    Rng rng = Rng::stream(h.seed, t);
    const PureState phi = haar_pure_state(Dims{d_in_n, d_in_n}, rng);
    const Ensemble ens = random_pure_ensemble(d_in_n, opts.ensemble_size, rng);
    auto& out = per_trial[t];
    out.push_back(make_report("holevo_fixed", std::abs(holevo_information(nn, ens) - holevo_information(mn, ens)), 2.0 * base, eps, n, d_b));
    out.push_back(make_report("coherent_fixed", std::abs(coherent_information(nn, phi) - coherent_information(mn, phi)), 2.0 * base, eps, n, d_b));
    out.push_back(make_report("private_fixed",
                              std::abs(private_information(nn, ens, iso_n) - private_information(mn, ens, iso_m)), 4.0 * base, eps, n, d_b));
    for (auto& r : out) {
      r.seed = h.seed;
      r.trial = static_cast<int>(t);
    }
  });
  for (auto& v : per_trial) run.reports.insert(run.reports.end(), v.begin(), v.end());

  if (opts.optimized) {
    const CapacityBounds cb = capacity_bounds(eps, d_b);
    const int m = std::max(2, opts.ensemble_size);
    const auto gap = [](const OptimizationReport& a, const OptimizationReport& b) { return std::abs(a.best_value - b.best_value); };
    std::vector<BoundReport> extra{
        make_report("holevo_optimized", gap(max_holevo(n_ch, m, opts.optimizer), max_holevo(m_ch, m, opts.optimizer)), cb.classical, eps, 1, d_b),
        make_report("coherent_optimized", gap(max_coherent_information(n_ch, opts.optimizer), max_coherent_information(m_ch, opts.optimizer)),
                    cb.quantum, eps, 1, d_b),
        make_report("private_optimized", gap(max_private(n_ch, m, opts.optimizer), max_private(m_ch, m, opts.optimizer)), cb.priv, eps, 1, d_b),
    };
    for (auto& r : extra) {
      r.asserted = false;
      r.seed = opts.optimizer.seed;
      run.reports.push_back(std::move(r));
    }
  }
  return run;
}

// ---------------------------------------------------------------------------

ChannelPair sample_channel_pair(int d_in, int d_out, std::uint64_t seed, std::uint64_t index, double max_q, double max_eps,
                                const SdpOptions& sdp) {
  constexpr int kMaxRedraws = 100;
  if (!(max_q > 0.0 && max_q <= 1.0)) throw ArgumentError("max_q must lie in (0, 1]");
  Rng rng = Rng::stream(seed, index);
  for (int attempt = 0; attempt <= kMaxRedraws; ++attempt) {
    QuantumChannel n_ch = random_channel(d_in, d_out, rng.uniform_int(1, d_in * d_out), rng);
    const QuantumChannel r_ch = random_channel(d_in, d_out, rng.uniform_int(1, d_in * d_out), rng);
    const double q = max_q * (1.0 - rng.uniform());
    QuantumChannel m_ch = mix({n_ch, r_ch}, {1.0 - q, q});
    SdpResult dist = diamond_norm(HermitianPreservingMap::difference(n_ch, m_ch), sdp);
    if (dist.value <= max_eps) return ChannelPair{std::move(n_ch), std::move(m_ch), q, std::move(dist), attempt};
  }
  throw NumericError("could not sample a channel pair within the distance limit");
}

// ---------------------------------------------------------------------------

namespace {

struct StatePair {
  DensityMatrix rho;
  DensityMatrix sigma;
  double eps;
};

StatePair mixed_pair(const Dims& dims, Rng& rng) {
  const int d = static_cast<int>(dims_product(dims));
  const DensityMatrix rho = random_density(dims, rng.uniform_int(1, d), rng);
  const DensityMatrix tau = random_density(dims, rng.uniform_int(1, d), rng);
  const double dist = trace_norm(rho.matrix() - tau.matrix());
  const double target = 0.5 * (1.0 - rng.uniform());
  const double s = dist > 0.0 ? std::min(1.0, target / dist) : 0.0;
  ComplexMatrix sigma = (1.0 - s) * rho.matrix() + s * tau.matrix();
  const double eps = trace_norm(rho.matrix() - sigma);
  return {rho, DensityMatrix::assume_valid(std::move(sigma), dims), eps};
}

template <typename Measure, typename Bound>
SuiteSummary run_suite(SuiteSummary summary, const Dims& dims, std::uint64_t seed, Measure&& measure, Bound&& bound) {
  if (summary.trials < 1) throw ArgumentError("at least one trial required");
  std::vector<double> margins(static_cast<std::size_t>(summary.trials));
  std::vector<double> epsilons(margins.size());
  parallel_for(margins.size(), [&](std::size_t t) {
    Rng rng = Rng::stream(seed, t);
    const StatePair pair = mixed_pair(dims, rng);
    margins[t] = bound(pair.eps) - std::abs(measure(pair.rho) - measure(pair.sigma));
    epsilons[t] = pair.eps;
  });
  summary.worst_margin = *std::min_element(margins.begin(), margins.end());
  summary.max_epsilon = *std::max_element(epsilons.begin(), epsilons.end());
  summary.violations = static_cast<int>(std::count_if(margins.begin(), margins.end(), [](double m) { return m < -tol::kEnt; }));
  return summary;
}

}  // namespace

SuiteSummary fannes_suite(int d, int trials, std::uint64_t seed) {
  check_dim(d);
  return run_suite(
      SuiteSummary{"fannes", d, 1, trials}, Dims{d}, seed, [](const DensityMatrix& r) { return von_neumann_entropy(r); },
      [d](double eps) { return fannes_bound(eps, d); });
}

SuiteSummary af_suite(int d_a, int d_b, int trials, std::uint64_t seed) {
  check_dim(d_a);
  if (d_b < 1) throw ArgumentError("dimension must be positive");
  return run_suite(
      SuiteSummary{"alicki_fannes", d_a, d_b, trials}, Dims{d_a, d_b}, seed,
      [](const DensityMatrix& r) { return conditional_entropy(r, Bipartition::first_second()); },
      [d_a](double eps) { return af_bound(eps, d_a); });
}

// ---------------------------------------------------------------------------

RegularizedGap regularized_gap(std::span<const double> f_n, std::span<const double> g_n, double c) {
  if (f_n.empty() || f_n.size() != g_n.size()) throw ArgumentError("sequences must be nonempty and of equal length");
  if (!(c >= 0.0)) throw ArgumentError("per-copy constant must be nonnegative");
  RegularizedGap out;
  out.bound = c;
  for (std::size_t i = 0; i < f_n.size(); ++i) {
    const double n = static_cast<double>(i + 1);
    const double gap = std::abs(f_n[i] - g_n[i]);
    if (gap > n * c + n * tol::kEnt) out.premise_holds = false;
    out.per_copy_gaps.push_back(gap / n);
  }
  out.limit_estimate = out.per_copy_gaps.back();
  return out;
}

// ---------------------------------------------------------------------------

std::vector<DiscontinuityRow> discontinuity_demo(std::span<const int> n_values, const SdpOptions& sdp) {
  std::vector<DiscontinuityRow> rows;
  for (int n : n_values) {
    if (n < 2) throw ArgumentError("truncation level must be at least 2");
    DiscontinuityRow row;
    row.n = n;
    row.two_over_log_n = 2.0 / std::log2(n);
    const int d_b = n + 1;

    const QuantumChannel classical = truncated_classical_example(n);
    const auto [cres, ceps] = certified_distance(sink_channel(n), classical, sdp);
    row.diamond_eps = ceps;
    std::vector<EnsembleItem> items;
    for (int k = 0; k < n; ++k) items.push_back({1.0 / n, DensityMatrix::basis_state(n, k)});
    row.classical_lb = holevo_information(classical, Ensemble(std::move(items)));
    if (ceps <= 1.0) row.corollary_bound = capacity_bounds(ceps, d_b).classical;

    const QuantumChannel quantum = truncated_quantum_example(n);
    const auto [qres, qeps] = certified_distance(half_sink_channel(n), quantum, sdp);
    row.quantum_eps = qeps;
    row.quantum_lb = coherent_information(quantum, PureState::maximally_entangled(n));
    if (qeps <= 1.0) row.quantum_bound = capacity_bounds(qeps, d_b).quantum;

    row.consistent = (!row.corollary_bound || row.classical_lb <= *row.corollary_bound + tol::kEnt) &&
                     (!row.quantum_bound || row.quantum_lb <= *row.quantum_bound + tol::kEnt);
    row.status = cres.status != SdpStatus::kOptimal ? cres.status : qres.status;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace capcont
