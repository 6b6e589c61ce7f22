#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "capcont/channels.hpp"
#include "capcont/entropic.hpp"

namespace capcont {

/// Optimizer shortfall allowed when comparing maximized quantities.
namespace tol {
inline constexpr double kOpt = 1e-3;
}

struct OptimizerOptions {
  int restarts = 16;
  int max_iters = 2000;
  double grad_tol = 1e-8;
  std::uint64_t seed = 0;
};

/// Best value found over independent restarts. Every value is attained by
/// the returned argmax, so it is a lower bound on the true maximum.
struct OptimizationReport {
  std::string quantity;
  double best_value = 0.0;
  std::optional<PureState> best_state;      // coherent information
  std::optional<Ensemble> best_ensemble;    // Holevo / private information
  int restarts = 0;
  int best_restart = 0;
  std::vector<int> iterations;              // per restart
  std::vector<double> restart_values;       // per restart
  bool converged = false;                   // the best restart met grad_tol
};

/// max over pure psi on A (x) A', dim A = d_in, of S(B) - S(AB).
OptimizationReport max_coherent_information(const QuantumChannel& ch, const OptimizerOptions& opts = {});

/// max over pure-state ensembles of the given size of I(X;B).
OptimizationReport max_holevo(const QuantumChannel& ch, int ensemble_size, const OptimizerOptions& opts = {});

/// max over pure-state ensembles of the given size of I(X;B) - I(X;E).
OptimizationReport max_private(const QuantumChannel& ch, int ensemble_size, const OptimizerOptions& opts = {});

/// Maximizer applied to ch^{(x) n}, with the value normalized per copy.
struct NCopyReport {
  int n = 1;
  OptimizationReport report;   // on the n-fold channel, unnormalized
  double per_copy = 0.0;
  double single_letter = 0.0;  // same maximizer at n = 1
  /// per_copy >= single_letter - tol::kOpt; reported, never enforced.
  bool superadditivity_consistent = true;
};

NCopyReport n_copy_coherent_information(const QuantumChannel& ch, int n, const OptimizerOptions& opts = {});
NCopyReport n_copy_holevo(const QuantumChannel& ch, int n, int ensemble_size, const OptimizerOptions& opts = {});
NCopyReport n_copy_private(const QuantumChannel& ch, int n, int ensemble_size, const OptimizerOptions& opts = {});

}  // namespace capcont
