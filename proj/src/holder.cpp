#include "fdrot/holder.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "fdrot/log_space.hpp"
#include "fdrot/rng.hpp"

namespace fdrot {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

std::vector<double> finite_region_edges(const PiecewiseRadialMap& map) {
  std::set<double> edges;
  for (const RegionAction& r : map.regions()) {
    if (std::isfinite(r.log_t_lo)) edges.insert(r.log_t_lo);
    if (std::isfinite(r.log_t_hi)) edges.insert(r.log_t_hi);
  }
  return {edges.begin(), edges.end()};
}

using PairList = std::vector<std::pair<Complex, Complex>>;

// Worst-case candidates at separation ~d: radial pairs straddling or
// hugging each region edge, tangential pairs on the edge circles, and a
// pair through the origin.
void add_deterministic_pairs(const std::vector<double>& edges, double d,
                             PairList& out) {
  const double h = 0.75 * d;
  for (double ue : edges) {
    const double t = std::exp(ue);
    if (!(t > 0.0) || !std::isfinite(t)) continue;
    if (t > h) {
      out.emplace_back(Complex(t + h, 0.0), Complex(t - h, 0.0));
    }
    out.emplace_back(Complex(t + 1.75 * d, 0.0), Complex(t + 0.25 * d, 0.0));
    if (t > 1.75 * d) {
      out.emplace_back(Complex(t - 0.25 * d, 0.0), Complex(t - 1.75 * d, 0.0));
    }
    for (double tb : {t, t + 2.0 * d}) {
      if (h >= tb) continue;
      const double phi = 2.0 * std::asin(h / tb);
      out.emplace_back(Complex(tb, 0.0),
                       Complex(tb * std::cos(phi), tb * std::sin(phi)));
    }
  }
  out.emplace_back(Complex(1.5 * d, 0.0), Complex(0.0, 0.0));
}

void add_random_pairs(const PiecewiseRadialMap& map, double d,
                      const SamplerSpec& spec, std::uint64_t scale_index,
                      PairList& out) {
  Xoshiro256 rng = Xoshiro256::substream(spec.seed, scale_index);
  const auto& regions = map.regions();
  const double lo_u = std::log(2.0 * d);
  const double hi_u = std::log(0.5);
  if (!(lo_u < hi_u)) return;
  for (int k = 0; k < spec.pairs_per_scale; ++k) {
    const RegionAction& r = regions[static_cast<std::size_t>(k) % regions.size()];
    double a = std::max(lo_u, r.log_t_lo);
    double b = std::min(hi_u, r.log_t_hi);
    if (!(a < b)) {
      a = lo_u;
      b = hi_u;
    }
    const double u = rng.uniform(a, b);
    const double theta = rng.uniform(0.0, kTwoPi);
    const double psi = rng.uniform(0.0, kTwoPi);
    const double dd = rng.uniform(d, 2.0 * d);
    const Complex x = std::polar(std::exp(u), theta);
    out.emplace_back(x, x + std::polar(dd, psi));
  }
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms = 0.0;
};

LineFit least_squares(const std::vector<ScalePoint>& pts) {
  const double n = static_cast<double>(pts.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const ScalePoint& p : pts) {
    sx += p.log_d;
    sy += p.log_q;
    sxx += p.log_d * p.log_d;
    sxy += p.log_d * p.log_q;
  }
  const double det = n * sxx - sx * sx;
  if (!(std::abs(det) > 0.0)) {
    throw std::runtime_error("exponent fit is degenerate: scales coincide");
  }
  LineFit fit;
  fit.slope = (n * sxy - sx * sy) / det;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss = 0.0;
  for (const ScalePoint& p : pts) {
    const double e = p.log_q - (fit.intercept + fit.slope * p.log_d);
    ss += e * e;
  }
  fit.rms = std::sqrt(ss / n);
  return fit;
}

double log_radial_derivative(const RegionAction& r, double u) {
  return r.log_lambda + std::log(r.q) + (r.q - 1.0) * (u - r.log_R_ref);
}

}  // namespace

std::vector<double> log_spaced_scales(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) {
    throw std::invalid_argument("log_spaced_scales: need 0 < lo < hi, count >= 2");
  }
  std::vector<double> scales(static_cast<std::size_t>(count));
  const double llo = std::log(lo);
  const double lhi = std::log(hi);
  for (int i = 0; i < count; ++i) {
    scales[static_cast<std::size_t>(i)] =
        std::exp(llo + (lhi - llo) * static_cast<double>(i) / (count - 1));
  }
  return scales;
}

ExponentFit fit_exponent(const PiecewiseRadialMap& map, const SamplerSpec& spec,
                         HolderSide side, const std::vector<double>& scales) {
  if (scales.empty()) {
    throw std::invalid_argument("fit_exponent: no scales given");
  }
  const auto [mn_it, mx_it] = std::minmax_element(scales.begin(), scales.end());
  if (!(*mn_it > 0.0) || *mx_it > spec.max_distance) {
    throw std::invalid_argument(
        "fit_exponent: scales must lie in (0, max_distance]");
  }
  if (*mx_it / *mn_it < 100.0 * (1.0 - 1e-9)) {
    throw std::invalid_argument(
        "fit_exponent: scales must span at least two decades");
  }
  const std::vector<double> edges = finite_region_edges(map);

  ExponentFit fit;
  fit.side = side;
  for (std::size_t si = 0; si < scales.size(); ++si) {
    const double d = scales[si];
    PairList pairs;
    add_deterministic_pairs(edges, d, pairs);
    add_random_pairs(map, d, spec, si, pairs);

    bool found = false;
    double best_lq = 0.0;
    double best_ld = 0.0;
    for (const auto& [x, y] : pairs) {
      const double dist = std::abs(x - y);
      if (!(dist > 0.0) || !std::isfinite(dist)) continue;
      Complex fx, fy;
      try {
        fx = map.eval(x);
        fy = map.eval(y);
      } catch (const std::domain_error&) {
        continue;  // image under/overflows double range at this point
      }
      const double q = std::abs(fx - fy);
      if (!(q > 0.0) || !std::isfinite(q)) continue;
      const double lq = std::log(q);
      const double ld = std::log(dist);
      const bool better =
          side == HolderSide::Above ? lq > best_lq : lq < best_lq;
      if (!found || better) {
        found = true;
        best_lq = lq;
        best_ld = ld;
      }
    }
    if (!found) {
      std::ostringstream oss;
      oss << "scale " << d << " produced no usable pair";
      fit.warnings.push_back(oss.str());
      continue;
    }
    fit.points.push_back(ScalePoint{best_ld, best_lq});
  }
  if (fit.points.size() < 2) {
    throw std::runtime_error("fit_exponent: fewer than two usable scales");
  }
  const LineFit line = least_squares(fit.points);
  fit.exponent = line.slope;
  fit.log_constant = line.intercept;
  fit.residual = line.rms;
  double ld_min = fit.points.front().log_d;
  double ld_max = ld_min;
  for (const ScalePoint& p : fit.points) {
    ld_min = std::min(ld_min, p.log_d);
    ld_max = std::max(ld_max, p.log_d);
  }
  fit.d_min = std::exp(ld_min);
  fit.d_max = std::exp(ld_max);
  return fit;
}

GBoundsReport check_g_bounds(const SchedulePlan& plan, const SamplerSpec& spec) {
  if (plan.mode != ScheduleMode::StretchRotation) {
    throw std::invalid_argument(
        "check_g_bounds: requires a stretch-rotation plan");
  }
  const PiecewiseRadialMap g = compose_schedule_stretch_only(plan);
  const std::vector<double> scales =
      log_spaced_scales(1e-6, 0.5 * spec.max_distance, 12);

  GBoundsReport rep;
  rep.above = fit_exponent(g, spec, HolderSide::Above, scales);
  rep.below = fit_exponent(g, spec, HolderSide::Below, scales);

  double max_sqrt = kNegInf;
  for (const ScalePoint& p : rep.above.points) {
    max_sqrt = std::max(max_sqrt, p.log_q - 0.5 * p.log_d);
  }
  double min_cubic = kPosInf;
  for (const ScalePoint& p : rep.below.points) {
    min_cubic = std::min(min_cubic, p.log_q - 3.0 * p.log_d);
  }
  rep.sqrt_bound_constant = std::exp(max_sqrt);
  rep.cubic_constant = std::exp(min_cubic);

  // Derivative floor over three decades, plus one-sided values at the
  // region edges that fall inside the window.
  const double u_lo = std::log(1e-3);
  double min_log = kPosInf;
  for (int i = 0; i <= 300; ++i) {
    const double u = u_lo * (1.0 - static_cast<double>(i) / 300.0);
    min_log = std::min(min_log,
                       log_radial_derivative(g.region_at(u), u) - 2.0 * u);
  }
  for (const RegionAction& r : g.regions()) {
    for (double ue : {r.log_t_lo, r.log_t_hi}) {
      if (!std::isfinite(ue) || ue < u_lo || ue > 0.0) continue;
      min_log = std::min(min_log, log_radial_derivative(r, ue) - 2.0 * ue);
    }
  }
  rep.deriv_constant = std::exp(min_log);

  rep.above_exponent_ok = rep.above.exponent <= 0.55;
  rep.sqrt_bound_holds =
      std::isfinite(max_sqrt) && rep.sqrt_bound_constant > 0.0;
  rep.below_exponent_ok = rep.below.exponent <= 3.1;
  rep.cubic_positive = std::isfinite(min_cubic) && rep.cubic_constant > 0.0;
  rep.deriv_positive = std::isfinite(min_log) && rep.deriv_constant > 0.0;
  rep.pass = rep.above_exponent_ok && rep.sqrt_bound_holds &&
             rep.below_exponent_ok && rep.cubic_positive && rep.deriv_positive;
  return rep;
}

InverseHolderReport check_inverse_holder(const PiecewiseRadialMap& map,
                                         const SchedulePlan& plan,
                                         const SamplerSpec& spec) {
  const std::vector<double> scales =
      log_spaced_scales(1e-5, 0.5 * spec.max_distance, 10);

  InverseHolderReport rep;
  rep.forward_below = fit_exponent(map, spec, HolderSide::Below, scales);

  // Swapped regression (log d on log q) over the same extremal points.
  {
    const auto& pts = rep.forward_below.points;
    const double n = static_cast<double>(pts.size());
    double sx = 0.0, sy = 0.0, syy = 0.0, sxy = 0.0;
    for (const ScalePoint& p : pts) {
      sx += p.log_d;
      sy += p.log_q;
      syy += p.log_q * p.log_q;
      sxy += p.log_d * p.log_q;
    }
    const double det = n * syy - sy * sy;
    if (!(std::abs(det) > 0.0)) {
      throw std::runtime_error("inverse fit is degenerate: images coincide");
    }
    const double swapped_slope = (n * sxy - sx * sy) / det;
    rep.reciprocal_product = rep.forward_below.exponent * swapped_slope;
  }

  rep.inverse_above =
      fit_exponent(inverted(map), spec, HolderSide::Above, scales);

  rep.below_threshold = 3.0 * plan.p / (plan.p - 1.0) + 0.5;

  double worst = 0.0;
  for (int i = 0; i <= 40; ++i) {
    const double u = -12.0 + 12.0 * static_cast<double>(i) / 40.0;
    const double frac =
        static_cast<double>(i) * 0.6180339887498949 -
        std::floor(static_cast<double>(i) * 0.6180339887498949);
    const Complex x = std::polar(std::exp(u), kTwoPi * frac);
    const Complex w = map.eval(x);
    if (!(std::abs(w) > 0.0)) continue;
    const Complex back = map.eval(map.inverse_eval(w));
    worst = std::max(worst, std::abs(back - w) / std::abs(w));
  }
  rep.max_round_trip_error = worst;

  rep.reciprocal_ok = std::abs(rep.reciprocal_product - 1.0) <= 0.05;
  rep.below_within_threshold =
      rep.forward_below.exponent <= rep.below_threshold;
  rep.round_trip_ok = rep.max_round_trip_error <= 1e-10;
  rep.pass =
      rep.reciprocal_ok && rep.below_within_threshold && rep.round_trip_ok;
  return rep;
}

}  // namespace fdrot
