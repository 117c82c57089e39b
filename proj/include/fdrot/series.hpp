#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fdrot/map.hpp"
#include "fdrot/schedule.hpp"

namespace fdrot {

/*!
 * One positive series attached to a plan, with terms and partial sums in
 * log space and a tail-convergence certificate.
 */
struct SeriesEntry {
  std::string name;
  std::vector<double> log_terms;
  std::vector<double> log_partial_sums;  //!< monotone in N
  SummabilityVerdict verdict;
};

struct ConvergenceReport {
  std::vector<SeriesEntry> series;
  bool all_convergent = false;

  const SeriesEntry& find(const std::string& name) const;
};

/*!
 * The convergence witnesses of the construction:
 *   df_l1_rotation  sum alpha_n r_n^2            (rotation-only mode)
 *   k_lp_rotation   sum |A_n| (4 alpha_n^2)^p    (rotation-only mode)
 *   df_l1_general   sum |A_n| alpha_n
 *   k_lp_general    sum |A_n| alpha_n^{2p} / q_n^p
 *   k_lp_exact      sum |A_n| K_n^p
 * The first two control the differential/distortion for pure rotations,
 * the general pair covers the stretch-rotation composition, and the
 * exact series is the one the L^p integrals actually use.
 */
ConvergenceReport series_report(const SchedulePlan& plan);

/// L^p norm in log space; `value` is exp(log_value), possibly inf/0.
struct LpNorm {
  double log_value = kNegInf;
  double value = 0.0;
};

/*!
 * (integral of K^p over B(0, e^{log_ball_radius}))^{1/p}, analytic:
 * K is K_n on A_n and 1 elsewhere.  Requires log_ball_radius >= 0 so the
 * ball contains every annulus.  Empty plan gives (pi e^{2 L})^{1/p}.
 */
LpNorm distortion_lp_norm(const SchedulePlan& plan,
                          double log_ball_radius = 0.0);

/*!
 * Stratified Monte-Carlo cross-check of the same integral over B(0,1).
 * Strata are the map's radial regions; allocation is proportional by
 * area (largest remainder) with every stratum topped up to 100 samples.
 * Substream RNG per stratum: bit-identical results for a fixed seed.
 */
struct McEstimate {
  double log_integral = kNegInf;
  double integral = 0.0;
  double log_se = kNegInf;
  double se = 0.0;
  double norm = 0.0;      //!< integral^{1/p}
  double log_norm = kNegInf;
  double norm_se = 0.0;   //!< delta-method standard error of the norm
  std::uint64_t total_samples = 0;
};

McEstimate distortion_lp_norm_mc(const PiecewiseRadialMap& map, double p,
                                 std::uint64_t sample_count,
                                 std::uint64_t seed);

}  // namespace fdrot
