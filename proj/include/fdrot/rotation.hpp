#pragma once

#include <vector>

#include "fdrot/map.hpp"
#include "fdrot/schedule.hpp"

namespace fdrot {

struct RotationSample {
  double t = 0.0;
  double log_t = 0.0;
  double unwrapped_arg = 0.0;
  double bound_value = 0.0;  //!< sqrt(alpha_below) t^{-1/p} log^{1/2}(1/t)
  double ratio = 0.0;        //!< |unwrapped_arg| / bound_value
};

/*!
 * Continuous-argument record along the ray angle theta, radius decreasing
 * from t_start to t_end.  `samples` is ordered by strictly decreasing t.
 * When t_start lies in the outermost identity region the lift is
 * absolute; otherwise it is relative to the branch chosen at t_start.
 */
struct RotationProfile {
  double theta = 0.0;
  double p = 0.0;
  double alpha_below = 0.0;
  std::vector<RotationSample> samples;
  double total_lift = 0.0;  //!< unwrapped_arg(t_end) - unwrapped_arg(t_start)
};

/*!
 * Tracks arg f(t e^{i theta}) by continuity: marches t downward, halving
 * the log-radius step until each observed wrapped increment is below
 * max_increment (clamped to pi/2), then accumulates the lift.  This is a
 * measurement route independent of the closed-form offset: it sees only
 * principal-value angles of complex evaluations.
 *
 * Throws std::runtime_error naming the offending radius if the step
 * underflows or the step budget is exhausted.  p > 0 fills bound_value
 * and ratio on samples with t < 1 (alpha_below is the Hoelder-below
 * exponent entering the bound).
 */
RotationProfile continuous_arg(const PiecewiseRadialMap& map, double theta,
                               double t_start, double t_end,
                               double max_increment = 1.5,
                               double p = 0.0, double alpha_below = 0.0,
                               const std::vector<double>& record_radii = {},
                               int grid_samples = 257);

/*!
 * Winding count along [z0/|z0| ... z0] relative to the point at radius 1:
 * floor(|lift difference| / 2 pi) - 1, clamped at 0.  Tracker-based.
 * Requires 0 < |z0| < 1.
 */
long long winding_count(const PiecewiseRadialMap& map, Complex z0);

/// Same count from the closed-form offset at log radius u; exact floor
/// arithmetic while |a| < 2^53, the asymptotic |a|/2pi beyond.
double winding_count_analytic(const PiecewiseRadialMap& map, double u);

/// log of the winding count (for regimes where the count itself
/// overflows); -inf when the count is 0.
double winding_count_log(const PiecewiseRadialMap& map, double u);

/// Helper shared by the above: count from a given |lift difference|.
double winding_from_arg_difference(double abs_arg_diff);

/*!
 * |arg f(t e^{i theta})| / (sqrt(alpha_below) t^{-1/p} log^{1/2}(1/t))
 * at log radius u = log t < 0, computed in log space.
 */
double theorem1_ratio(const PiecewiseRadialMap& map, double p,
                      double alpha_below, double u);

struct SharpnessRow {
  int n = 0;             //!< 1-based annulus index
  double log_r = 0.0;
  double log_lhs = 0.0;  //!< log sum_{j<=n} alpha_j = log |a(r_n)|
  double log_rhs = 0.0;  //!< log of the bound shape at r_n
  double log_excess = 0.0;
  bool pass = false;
};

/*!
 * Sharpness of the rotation bound at the annulus radii: the accumulated
 * twist |a(r_n)| must reach the bound shape
 *   stretch mode:        r_n^{-1/p} log^{1/2}(1/r_n) h(r_n)
 *   rotation-only mode:  r_n^{-1/p} h(r_n)
 * with equality at n = 1 by construction.
 */
std::vector<SharpnessRow> sharpness_check(const PiecewiseRadialMap& map,
                                          const SchedulePlan& plan);

}  // namespace fdrot
