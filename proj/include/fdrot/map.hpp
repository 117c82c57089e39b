#pragma once

#include <utility>
#include <vector>

#include "fdrot/geometry.hpp"
#include "fdrot/schedule.hpp"

namespace fdrot {

/*!
 * One radial region of a composed map, together with the closed-form
 * action accumulated from all blocks above it.  On the region
 * exp(log_t_lo) <= |z| <= exp(log_t_hi) the map sends t e^{i theta} to
 *
 *     s(t) e^{i (theta + a(t))},
 *     log s(t) = log_lambda + log_R_ref + q * (log t - log_R_ref),
 *     a(t)     = mu + alpha * (log t - log_R_ref).
 *
 * Gaps and the outer/inner tails have q = 1, alpha = 0 and act as the
 * similarity with scale lambda and rotation mu.  mu and alpha live in
 * sign+log form: in stretch mode the linear rotation offsets exceed
 * double range after ten or so blocks.
 */
struct RegionAction {
  double log_t_lo = kNegInf;
  double log_t_hi = kPosInf;
  double log_lambda = 0.0;
  LogSigned mu;
  double q = 1.0;
  LogSigned alpha;
  double log_R_ref = 0.0;

  bool is_annulus() const { return q != 1.0 || !alpha.is_zero(); }

  double s_log(double u) const {
    return log_lambda + log_R_ref + q * (u - log_R_ref);
  }

  LogSigned arg_offset(double u) const {
    return mu + alpha.scaled(u - log_R_ref);
  }
};

/// Raised by derivative queries landing exactly on a region boundary.
class BoundaryError : public std::domain_error {
 public:
  explicit BoundaryError(double log_t)
      : std::domain_error("derivative query at a region boundary"),
        log_t_(log_t) {}
  double log_t() const { return log_t_; }

 private:
  double log_t_;
};

/*!
 * Finite composition of spiral-stretch blocks as a region table.
 * Immutable after construction; evaluation is pure.
 *
 * Region list is ordered by increasing modulus and partitions (0, inf).
 * Value queries at a shared boundary use the annulus-side formula (the
 * two sides agree there by continuity); derivative queries at an exact
 * boundary throw BoundaryError.
 */
class PiecewiseRadialMap {
 public:
  /// The identity map (single region, no blocks).
  static PiecewiseRadialMap identity();

  /// Builds the region table from a plan via the scale/rotation
  /// recurrences lambda_n = lambda_{n-1} e^{-(q_n-1)}, mu_n = mu_{n-1} - alpha_n.
  static PiecewiseRadialMap from_regions(std::vector<RegionAction> regions,
                                         int n_blocks);

  const std::vector<RegionAction>& regions() const { return regions_; }
  int n_blocks() const { return n_blocks_; }

  /// Region containing log radius u (annulus side at exact boundaries).
  const RegionAction& region_at(double u) const;

  /// log s(t) for u = log t.
  double s_log(double u) const { return region_at(u).s_log(u); }

  /// Unwrapped argument offset a(t) for u = log t, in sign+log form.
  LogSigned arg_offset(double u) const { return region_at(u).arg_offset(u); }

  /// s(t) on the linear scale (may underflow to 0 for deep t).
  double radial_profile(double t) const;

  /// a(t) as a double; throws std::domain_error when not representable.
  double arg_profile(double t) const;

  /// Inverse radial profile: log t such that s(t) = exp(log_s).
  double inverse_s_log(double log_s) const;

  Complex eval(Complex z) const;

  /// Exact evaluation in log-polar coordinates; theta0 is the unwrapped
  /// input argument, returned angle is theta0 + a(t) in sign+log form.
  std::pair<double, LogSigned> eval_logpolar(double u, double theta0) const;

  Complex inverse_eval(Complex w) const;

  /// Wirtinger derivatives (d, dbar) at z.  Throws BoundaryError on a
  /// region edge and std::domain_error when the local rotation data
  /// exceeds double range.
  std::pair<Complex, Complex> wirtinger(Complex z) const;

  /// Jacobian determinant at z, computed in the algebraically cancelled
  /// form lambda^2 q (t/R)^{2(q-1)} (equal to |d|^2 - |dbar|^2).
  double jacobian(Complex z) const;

  /// Distortion K(z) = (|d| + |dbar|)^2 / J.  Constant per region.
  double distortion(Complex z) const;

  /// log K for the region containing u; exact for any parameter size.
  double distortion_log_at(double u) const;

  /// log |d| + log-space companion of wirtinger: (log|d|, log|dbar|).
  std::pair<double, double> wirtinger_log_norms(double u) const;

  std::string to_json_string() const;
  static PiecewiseRadialMap from_json_string(const std::string& text);

 private:
  PiecewiseRadialMap() = default;
  const RegionAction& region_for_derivative(double u) const;

  std::vector<RegionAction> regions_;
  int n_blocks_ = 0;
};

/*!
 * The inverse homeomorphism as its own region table: the image bands of
 * the regions, with q' = 1/q, alpha' = -alpha/q, lambda' = 1/lambda,
 * mu' = -mu and the reference radius moved to the image of R_ref.
 */
PiecewiseRadialMap inverted(const PiecewiseRadialMap& map);

/// Region table for the truncated composition described by a plan.
PiecewiseRadialMap compose_schedule(const SchedulePlan& plan);

/// Same composition with every rotation rate zeroed (the stretch-only
/// radial factor; useful for the radial-profile bounds).
PiecewiseRadialMap compose_schedule_stretch_only(const SchedulePlan& plan);

}  // namespace fdrot
