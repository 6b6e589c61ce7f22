#include "capcont/assisted.hpp"

#include <algorithm>
#include <cmath>

#include "capcont/errors.hpp"

namespace capcont {

namespace {

bool in_unit(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

MixingGeometry::MixingGeometry(double p1, double p2, double big_delta, double delta, double log_d)
    : p1_(p1), p2_(p2), big_delta_(big_delta), delta_(delta), log_d_(log_d) {
  if (!in_unit(p1)) throw ArgumentError("p1 must lie in [0, 1]");
  if (!(p2 >= 0.0 && p2 <= 0.5)) throw ArgumentError("p2 must lie in [0, 1/2]");
  if (!(big_delta > 0.0) || !std::isfinite(big_delta)) throw ArgumentError("Delta must be positive");
  if (!(delta > 0.0 && delta <= big_delta)) throw ArgumentError("delta must lie in (0, Delta]");
  if (!(log_d > 0.0) || !std::isfinite(log_d)) throw ArgumentError("log d must be positive");
}

double simulation_upper_bound(double q2_n, double p1, double log_d) {
  if (!(log_d > 0.0)) throw ArgumentError("log d must be positive");
  if (!in_unit(p1)) throw ArgumentError("p1 must lie in [0, 1]");
  if (!(q2_n > 0.0)) throw DomainError("capacity of N must be positive");
  return p1 * log_d + (1.0 - p1) * q2_n;
}

double mutual_gap_bound(double q2_n, double q2_m, double p1, double p2, double log_d) {
  if (!(log_d > 0.0)) throw ArgumentError("log d must be positive");
  if (!in_unit(p1) || !in_unit(p2)) throw ArgumentError("mixing coefficients must lie in [0, 1]");
  if (!(q2_n >= 0.0 && q2_n <= log_d) || !(q2_m >= 0.0 && q2_m <= log_d)) throw ArgumentError("capacities must lie in [0, log d]");
  return std::min(p1 * (log_d - q2_n), p2 * (log_d - q2_m));
}

RescaledMixing colinear_rescale(const MixingGeometry& geom) {
  const double r = geom.delta() / geom.big_delta();
  const double p2 = geom.p2();
  return {geom.p1() * r, p2 * r / (r * p2 + (1.0 - p2))};
}

double continuity_delta(double eps, double big_delta, double log_d) {
  if (!(eps > 0.0) || !(big_delta > 0.0) || !(log_d > 0.0)) throw ArgumentError("eps, Delta and log d must be positive");
  return big_delta * eps / (2.0 * log_d);
}

double erasure_q2(double p) {
  if (!in_unit(p)) throw ArgumentError("erasure probability must lie in [0, 1]");
  return 1.0 - p;
}

CapacityInterval erasure_qb_bounds(double p) {
  const double upper = erasure_q2(p);
  return {std::max(1.0 - 2.0 * p, 0.0), upper};
}

}  // namespace capcont
