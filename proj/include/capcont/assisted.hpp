#pragma once

namespace capcont {

/// Mixing coefficients of two nearby channels against far-away channels on
/// the boundary of the channel set:
///   M = p1 M1 + (1 - p1) N,   N = p2 M2 + (1 - p2) M.
/// Delta is the radius of a ball around N inside the channel set; delta is
/// the distance of the nearby channel. log_d = log min(d_in, d_out).
class MixingGeometry {
 public:
  /// Requires p1 in [0, 1], p2 in [0, 1/2], Delta > 0, delta in (0, Delta], log_d > 0.
  MixingGeometry(double p1, double p2, double big_delta, double delta, double log_d);

  double p1() const noexcept { return p1_; }
  double p2() const noexcept { return p2_; }
  double big_delta() const noexcept { return big_delta_; }
  double delta() const noexcept { return delta_; }
  double log_d() const noexcept { return log_d_; }

 private:
  double p1_, p2_, big_delta_, delta_, log_d_;
};

/// p1 log d + (1 - p1) q2_n: capacity of M when N (q2_n > 0) is used for
/// the fraction 1 - p1 and teleportation simulates the rest.
double simulation_upper_bound(double q2_n, double p1, double log_d);

/// min(p1 (log d - q2_n), p2 (log d - q2_m)).
double mutual_gap_bound(double q2_n, double q2_m, double p1, double p2, double log_d);

struct RescaledMixing {
  double q1;
  double q2;
};

/// Mixing coefficients after moving the far channels toward N along the
/// same line so that their distance shrinks by delta / Delta:
///   q1 = p1 r,   q2 = p2 r / (r p2 + 1 - p2),   r = delta / Delta.
/// For p2 <= 1/2, q2 <= 2 p2 r.
RescaledMixing colinear_rescale(const MixingGeometry& geom);

/// Delta eps / (2 log d): the radius under which the gap is at most eps.
double continuity_delta(double eps, double big_delta, double log_d);

/// Two-way assisted quantum capacity of the qubit erasure channel: 1 - p.
double erasure_q2(double p);

struct CapacityInterval {
  double lower;
  double upper;
};

/// Back-assisted quantum capacity of the qubit erasure channel lies in
/// [max(1 - 2p, 0), 1 - p].
CapacityInterval erasure_qb_bounds(double p);

}  // namespace capcont
