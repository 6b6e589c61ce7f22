#include "capcont/entropic.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "capcont/errors.hpp"

namespace capcont {

Ensemble::Ensemble(std::vector<EnsembleItem> items) : items_(std::move(items)) {
  if (items_.empty()) throw ArgumentError("ensemble is empty");
  const int d = items_.front().state.dim();
  double total = 0.0;
  for (const auto& item : items_) {
    if (!(item.prob >= 0.0) || !std::isfinite(item.prob)) throw ArgumentError("ensemble probabilities must be nonnegative");
    if (item.state.dim() != d) throw DimensionError("ensemble states must share a dimension");
    total += item.prob;
  }
  if (std::abs(total - 1.0) > tol::kTrace) throw ArgumentError("ensemble probabilities must sum to 1");
}

DensityMatrix Ensemble::average() const {
  ComplexMatrix avg = ComplexMatrix::Zero(dim(), dim());
  for (const auto& item : items_) avg += item.prob * item.state.matrix();
  return DensityMatrix::assume_valid(std::move(avg), items_.front().state.dims());
}

// ---------------------------------------------------------------------------

double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ArgumentError("binary entropy argument must lie in [0,1]");
  const double probs[] = {p, 1.0 - p};
  return shannon_entropy(probs);
}

double shannon_entropy(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs)
    if (p > 0.0) h -= p * std::log2(p);
  return h;
}

double spectrum_entropy(const RealVector& eigenvalues) {
  double h = 0.0;
  for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
    const double l = std::clamp(eigenvalues(i), 0.0, 1.0);
    if (l > 0.0) h -= l * std::log2(l);
  }
  return h;
}

double von_neumann_entropy(const ComplexMatrix& rho) { return spectrum_entropy(eigvalsh(rho)); }

double von_neumann_entropy(const DensityMatrix& rho) { return von_neumann_entropy(rho.matrix()); }

namespace {

void check_split(const DensityMatrix& rho, const Bipartition& split) {
  if (split.a.empty() || split.b.empty()) throw ArgumentError("bipartition groups must be nonempty");
  std::set<int> seen;
  for (const auto* group : {&split.a, &split.b})
    for (int f : *group) {
      if (f < 0 || f >= rho.factor_count()) throw ArgumentError("bipartition factor index out of range");
      if (!seen.insert(f).second) throw ArgumentError("bipartition groups overlap");
    }
}

double marginal_entropy(const DensityMatrix& rho, std::vector<int> factors) {
  if (static_cast<int>(factors.size()) == rho.factor_count()) return von_neumann_entropy(rho);
  return von_neumann_entropy(partial_trace(rho, factors));
}

std::vector<int> joined(const Bipartition& split) {
  std::vector<int> ab = split.a;
  ab.insert(ab.end(), split.b.begin(), split.b.end());
  return ab;
}

}  // namespace

double conditional_entropy(const DensityMatrix& rho, const Bipartition& split) {
  check_split(rho, split);
  return marginal_entropy(rho, joined(split)) - marginal_entropy(rho, split.b);
}

double mutual_information(const DensityMatrix& rho, const Bipartition& split) {
  check_split(rho, split);
  return marginal_entropy(rho, split.a) + marginal_entropy(rho, split.b) - marginal_entropy(rho, joined(split));
}

double coherent_information(const QuantumChannel& ch, const DensityMatrix& rho_aa) {
  if (rho_aa.factor_count() < 2) throw ArgumentError("coherent information needs a reference factor");
  const int last = rho_aa.factor_count() - 1;
  if (rho_aa.dims()[last] != ch.d_in()) throw DimensionError("channel input factor dimension mismatch");
  const DensityMatrix omega = apply_extended(ch, rho_aa, {last});
  const int b[] = {last};
  return von_neumann_entropy(partial_trace(omega, b)) - von_neumann_entropy(omega);
}

double coherent_information(const QuantumChannel& ch, const PureState& psi_aa) {
  return coherent_information(ch, psi_aa.density());
}

namespace {
double ensemble_output_information(const QuantumChannel& ch, const Ensemble& ens) {
  if (ens.dim() != ch.d_in()) throw DimensionError("ensemble dimension does not match channel input");
  ComplexMatrix avg = ComplexMatrix::Zero(ch.d_out(), ch.d_out());
  double conditional = 0.0;
  for (const auto& item : ens.items()) {
    if (item.prob == 0.0) continue;
    const ComplexMatrix out = apply_to_operator(ch, item.state.matrix());
    avg += item.prob * out;
    conditional += item.prob * von_neumann_entropy(out);
  }
  return von_neumann_entropy(avg) - conditional;
}
}  // namespace

double holevo_information(const QuantumChannel& ch, const Ensemble& ens) { return ensemble_output_information(ch, ens); }

double private_information(const QuantumChannel& ch, const Ensemble& ens) {
  return private_information(ch, ens, stinespring(ch));
}

double private_information(const QuantumChannel& ch, const Ensemble& ens, const IsometricExtension& dilation) {
  if (dilation.d_in != ch.d_in() || dilation.d_out != ch.d_out()) throw DimensionError("dilation does not match channel");
  return ensemble_output_information(ch, ens) - ensemble_output_information(complementary(dilation), ens);
}

DensityMatrix classical_quantum_state(std::span<const double> probs, std::span<const DensityMatrix> states) {
  if (probs.empty() || probs.size() != states.size()) throw ArgumentError("one probability per state required");
  const int d = states.front().dim();
  const int nx = static_cast<int>(probs.size());
  ComplexMatrix omega = ComplexMatrix::Zero(static_cast<long>(nx) * d, static_cast<long>(nx) * d);
  for (int x = 0; x < nx; ++x) {
    if (states[x].dim() != d) throw DimensionError("states must share a dimension");
    omega.block(static_cast<long>(x) * d, static_cast<long>(x) * d, d, d) = probs[x] * states[x].matrix();
  }
  return DensityMatrix::assume_valid(std::move(omega), Dims{nx, d});
}

}  // namespace capcont
