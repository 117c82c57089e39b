#include "fdrot/series.hpp"

#include <algorithm>
#include <cmath>

#include "fdrot/rng.hpp"

namespace fdrot {

const SeriesEntry& ConvergenceReport::find(const std::string& name) const {
  for (const SeriesEntry& s : series)
    if (s.name == name) return s;
  throw std::out_of_range("no series named " + name);
}

namespace {

SeriesEntry make_entry(std::string name, std::vector<double> log_terms) {
  SeriesEntry e;
  e.name = std::move(name);
  e.log_terms = std::move(log_terms);
  LogSumAccumulator acc;
  for (double t : e.log_terms) {
    acc.add_log(t);
    e.log_partial_sums.push_back(acc.log_total());
  }
  e.verdict = certify_summability(e.log_terms);
  return e;
}

}  // namespace

ConvergenceReport series_report(const SchedulePlan& plan) {
  const int n_b = plan.n_blocks;
  const double p = plan.p;
  ConvergenceReport rep;

  std::vector<double> t_df_rot, t_k_rot, t_df_gen, t_k_gen, t_k_exact;
  for (int i = 0; i < n_b; ++i) {
    const double la = plan.log_alpha[i];
    const double larea = plan.log_annulus_area(i);
    if (plan.mode == ScheduleMode::RotationOnly) {
      t_df_rot.push_back(la + 2.0 * plan.log_r[i]);
      t_k_rot.push_back(larea + p * (std::log(4.0) + 2.0 * la));
    }
    t_df_gen.push_back(larea + la);
    t_k_gen.push_back(larea + 2.0 * p * la - p * std::log(plan.q[i]));
    t_k_exact.push_back(larea + p * plan.log_distortion(i));
  }

  if (plan.mode == ScheduleMode::RotationOnly) {
    rep.series.push_back(make_entry("df_l1_rotation", std::move(t_df_rot)));
    rep.series.push_back(make_entry("k_lp_rotation", std::move(t_k_rot)));
  }
  rep.series.push_back(make_entry("df_l1_general", std::move(t_df_gen)));
  rep.series.push_back(make_entry("k_lp_general", std::move(t_k_gen)));
  rep.series.push_back(make_entry("k_lp_exact", std::move(t_k_exact)));

  rep.all_convergent =
      std::all_of(rep.series.begin(), rep.series.end(),
                  [](const SeriesEntry& s) { return s.verdict.convergent; });
  return rep;
}

LpNorm distortion_lp_norm(const SchedulePlan& plan, double log_ball_radius) {
  if (!(log_ball_radius >= 0.0))
    throw std::invalid_argument(
        "distortion_lp_norm: ball must contain the unit disc");
  const double log_ball_area = std::log(M_PI) + 2.0 * log_ball_radius;

  LogSumAccumulator annuli_area, annuli_kp;
  for (int i = 0; i < plan.n_blocks; ++i) {
    annuli_area.add_log(plan.log_annulus_area(i));
    annuli_kp.add_log(plan.log_annulus_area(i) +
                      plan.p * plan.log_distortion(i));
  }
  // K = 1 off the annuli.
  const double log_rest = log_sub(log_ball_area, annuli_area.log_total());
  const double log_integral = log_add(log_rest, annuli_kp.log_total());
  LpNorm out;
  out.log_value = log_integral / plan.p;
  out.value = std::exp(out.log_value);
  return out;
}

McEstimate distortion_lp_norm_mc(const PiecewiseRadialMap& map, double p,
                                 std::uint64_t sample_count,
                                 std::uint64_t seed) {
  if (!(p > 1.0)) throw std::invalid_argument("need p > 1");
  if (sample_count == 0) throw std::invalid_argument("need samples > 0");

  struct Stratum {
    double u_lo, u_hi;   // log radii, clipped to the unit disc
    double log_area;
    std::uint64_t n = 0;
  };
  std::vector<Stratum> strata;
  for (const RegionAction& r : map.regions()) {
    if (r.log_t_lo >= 0.0) break;
    Stratum s;
    s.u_lo = r.log_t_lo;
    s.u_hi = std::min(r.log_t_hi, 0.0);
    s.log_area = std::log(M_PI) + 2.0 * s.u_hi;
    if (s.u_lo != kNegInf)
      s.log_area += std::log1p(-std::exp(2.0 * (s.u_lo - s.u_hi)));
    strata.push_back(s);
  }

  // Proportional allocation by area with largest-remainder rounding,
  // then every stratum is topped up to 100 samples.
  const double log_total_area = std::log(M_PI);
  std::uint64_t assigned = 0;
  std::vector<std::pair<double, std::size_t>> remainders;
  for (std::size_t k = 0; k < strata.size(); ++k) {
    const double want = static_cast<double>(sample_count) *
                        std::exp(strata[k].log_area - log_total_area);
    strata[k].n = static_cast<std::uint64_t>(want);
    assigned += strata[k].n;
    remainders.push_back({want - static_cast<double>(strata[k].n), k});
  }
  std::sort(remainders.begin(), remainders.end(),
            [](const auto& a, const auto& b) {
              if (a.first != b.first) return a.first > b.first;
              return a.second < b.second;
            });
  for (std::size_t i = 0; assigned < sample_count && i < remainders.size();
       ++i, ++assigned)
    strata[remainders[i].second].n += 1;
  for (Stratum& s : strata) s.n = std::max<std::uint64_t>(s.n, 100);

  McEstimate est;
  LogSumAccumulator integral, variance;
  for (std::size_t k = 0; k < strata.size(); ++k) {
    const Stratum& s = strata[k];
    Xoshiro256 rng = Xoshiro256::substream(seed, k);
    // t^2 uniform on [t_lo^2, t_hi^2]:
    //   u = u_hi + log(X + (1-X) e^{2(u_lo - u_hi)}) / 2,  X in (0, 1].
    const double inner = (s.u_lo == kNegInf)
                             ? 0.0
                             : std::exp(2.0 * (s.u_lo - s.u_hi));
    LogSumAccumulator m1, m2;
    for (std::uint64_t i = 0; i < s.n; ++i) {
      const double x = rng.uniform01_open_low();
      const double u = s.u_hi + 0.5 * std::log(x + (1.0 - x) * inner);
      rng.uniform01();  // angle draw; the distortion is radial
      const double log_kp = p * map.distortion_log_at(u);
      m1.add_log(log_kp);
      m2.add_log(2.0 * log_kp);
    }
    const double log_n = std::log(static_cast<double>(s.n));
    const double log_mean = m1.log_total() - log_n;
    integral.add_log(s.log_area + log_mean);
    const double log_m2 = m2.log_total() - log_n;
    if (log_m2 > 2.0 * log_mean) {
      const double log_var = log_sub(log_m2, 2.0 * log_mean);
      variance.add_log(2.0 * s.log_area + log_var - log_n);
    }
    est.total_samples += s.n;
  }

  est.log_integral = integral.log_total();
  est.integral = std::exp(est.log_integral);
  est.log_se = 0.5 * variance.log_total();
  est.se = std::exp(est.log_se);
  est.log_norm = est.log_integral / p;
  est.norm = std::exp(est.log_norm);
  // delta method: se(I^{1/p}) = (1/p) I^{1/p - 1} se(I)
  est.norm_se = std::exp(est.log_se - std::log(p) +
                         (1.0 / p - 1.0) * est.log_integral);
  return est;
}

}  // namespace fdrot
