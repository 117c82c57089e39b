#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fdrot/map.hpp"
#include "fdrot/schedule.hpp"

namespace fdrot {

/// Which envelope of the increment quotients a fit tracks.
enum class HolderSide { Above, Below };

/// Knobs for the pair sampler used by the exponent fits.
struct SamplerSpec {
  std::uint64_t seed = 1;
  int pairs_per_scale = 64;   //!< random pairs added per scale bucket
  double max_distance = 0.1;  //!< largest pair separation considered
};

/// One point of the log-log regression: the extremal pair of a scale bucket.
struct ScalePoint {
  double log_d = 0.0;  //!< log of the pair separation |x - y|
  double log_q = 0.0;  //!< log of the image separation |f(x) - f(y)|
};

/*!
 * Least-squares power law |f(x) - f(y)| ~ C |x - y|^exponent fitted to
 * the per-scale extremal increments: at each scale the largest (Above)
 * or smallest (Below) image distance over a deterministic family of
 * worst-case pairs plus seeded random pairs.
 */
struct ExponentFit {
  HolderSide side = HolderSide::Above;
  double exponent = 0.0;
  double log_constant = 0.0;  //!< regression intercept
  double d_min = 0.0;         //!< smallest pair separation used
  double d_max = 0.0;         //!< largest pair separation used
  double residual = 0.0;      //!< rms residual of the regression
  std::vector<ScalePoint> points;
  std::vector<std::string> warnings;
};

/// count log-spaced values from lo to hi inclusive.
std::vector<double> log_spaced_scales(double lo, double hi, int count);

/*!
 * Fit the increment power law of a map over the given scale buckets.
 * Scales must be positive, at most spec.max_distance, and span at least
 * two decades.  Pairs whose evaluation leaves double range are skipped;
 * a scale bucket with no usable pair is dropped with a warning.
 */
ExponentFit fit_exponent(const PiecewiseRadialMap& map, const SamplerSpec& spec,
                         HolderSide side, const std::vector<double>& scales);

/*!
 * Modulus-of-continuity report for the radial stretch factor g of a
 * plan (the composition with every rotation rate zeroed): square-root
 * upper envelope, cubic lower envelope, and the derivative floor
 * s'(t) >= c t^2.
 */
struct GBoundsReport {
  ExponentFit above;
  ExponentFit below;
  double sqrt_bound_constant = 0.0;  //!< max |dg| / sqrt(d) over above points
  double cubic_constant = 0.0;       //!< min |dg| / d^3 over below points
  double deriv_constant = 0.0;       //!< min s'(t) / t^2 over a log grid
  bool above_exponent_ok = false;    //!< above fit <= 0.55
  bool sqrt_bound_holds = false;
  bool below_exponent_ok = false;    //!< below fit <= 3.1
  bool cubic_positive = false;
  bool deriv_positive = false;
  bool pass = false;
};

/// Requires a stretch-rotation plan; throws std::invalid_argument otherwise.
GBoundsReport check_g_bounds(const SchedulePlan& plan,
                             const SamplerSpec& spec = SamplerSpec{});

/*!
 * Inverse-regularity report: the below fit of the map against the above
 * fit of its inverse.  The reciprocal product multiplies the forward
 * below slope by the swapped regression slope on the same points, so it
 * equals the squared correlation of the point cloud and sits near 1
 * exactly when one power law explains both directions.
 */
struct InverseHolderReport {
  ExponentFit forward_below;
  ExponentFit inverse_above;         //!< independent fit of the inverted map
  double reciprocal_product = 0.0;
  double below_threshold = 0.0;      //!< 3p/(p-1) + 0.5
  double max_round_trip_error = 0.0; //!< worst |f(f^-1(w)) - w| / |w|
  bool reciprocal_ok = false;        //!< product within 5% of 1
  bool below_within_threshold = false;
  bool round_trip_ok = false;        //!< round trip error <= 1e-10
  bool pass = false;
};

InverseHolderReport check_inverse_holder(const PiecewiseRadialMap& map,
                                         const SchedulePlan& plan,
                                         const SamplerSpec& spec = SamplerSpec{});

}  // namespace fdrot
