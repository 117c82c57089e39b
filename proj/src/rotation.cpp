#include "fdrot/rotation.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "fdrot/log_space.hpp"

namespace fdrot {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr long long kStepBudget = 200'000'000;

double wrapped_arg_at(const PiecewiseRadialMap& map, double u, double theta) {
  const Complex z = std::polar(std::exp(u), theta);
  return std::arg(map.eval(z));
}

// Principal-value difference of two wrapped angles, in [-pi, pi].
double wrap_to_pi(double x) { return std::remainder(x, kTwoPi); }

void fill_bound(RotationSample& s, double lift_from_start, double p,
                double alpha_below) {
  if (p <= 0.0 || alpha_below <= 0.0 || s.log_t >= 0.0) return;
  const double ell = -s.log_t;
  const double log_bound =
      0.5 * std::log(alpha_below) + ell / p + 0.5 * std::log(ell);
  s.bound_value = std::exp(log_bound);
  if (s.bound_value > 0.0) s.ratio = std::abs(lift_from_start) / s.bound_value;
}

}  // namespace

RotationProfile continuous_arg(const PiecewiseRadialMap& map, double theta,
                               double t_start, double t_end,
                               double max_increment, double p,
                               double alpha_below,
                               const std::vector<double>& record_radii,
                               int grid_samples) {
  if (!(t_end > 0.0) || !(t_start > t_end) || !std::isfinite(t_start)) {
    throw std::invalid_argument("continuous_arg: need 0 < t_end < t_start");
  }
  if (grid_samples < 2) {
    throw std::invalid_argument("continuous_arg: grid_samples < 2");
  }
  max_increment = std::clamp(max_increment, 1e-3, 1.5);

  const double u_start = std::log(t_start);
  const double u_end = std::log(t_end);

  std::set<double, std::greater<double>> waypoints;
  for (int i = 0; i < grid_samples; ++i) {
    waypoints.insert(u_start + (u_end - u_start) * i / (grid_samples - 1));
  }
  waypoints.insert(u_end);
  for (double r : record_radii) {
    if (!(r > 0.0)) continue;
    const double u = std::log(r);
    if (u <= u_start && u >= u_end) waypoints.insert(u);
  }
  // Region edges as waypoints: between consecutive waypoints the twist
  // rate |alpha| is then constant, so a uniform step count keeps every
  // angular increment below max_increment and per-step wrapping is exact.
  for (const RegionAction& r : map.regions()) {
    if (std::isfinite(r.log_t_lo) && r.log_t_lo < u_start &&
        r.log_t_lo > u_end) {
      waypoints.insert(r.log_t_lo);
    }
  }

  RotationProfile profile;
  profile.theta = theta;
  profile.p = p;
  profile.alpha_below = alpha_below;

  double u_cur = u_start;
  double w_prev = wrapped_arg_at(map, u_start, theta);
  double lift = w_prev;
  long long budget = kStepBudget;

  auto record = [&](double u) {
    RotationSample s;
    s.log_t = u;
    s.t = std::exp(u);
    s.unwrapped_arg = lift;
    const double from_start =
        profile.samples.empty()
            ? 0.0
            : lift - profile.samples.front().unwrapped_arg;
    fill_bound(s, from_start, p, alpha_below);
    profile.samples.push_back(s);
  };

  record(u_start);
  for (double target : waypoints) {
    if (target >= u_cur) continue;
    const double seg = u_cur - target;
    // the open interval (target, u_cur) lies inside one region
    const double rate =
        std::exp(map.region_at(0.5 * (u_cur + target)).alpha.log_abs);
    double steps_needed = std::ceil(seg * rate / max_increment);
    if (!(steps_needed >= 1.0)) steps_needed = 1.0;
    if (steps_needed > static_cast<double>(budget)) {
      std::ostringstream os;
      os << "continuous_arg: step budget exhausted near t = "
         << std::exp(u_cur);
      throw std::runtime_error(os.str());
    }
    const long long n_steps = static_cast<long long>(steps_needed);
    budget -= n_steps;
    const double u_base = u_cur;
    for (long long i = 1; i <= n_steps; ++i) {
      const double u_next =
          i == n_steps ? target
                       : u_base - seg * static_cast<double>(i) /
                                      static_cast<double>(n_steps);
      const double w_next = wrapped_arg_at(map, u_next, theta);
      lift += wrap_to_pi(w_next - w_prev);
      w_prev = w_next;
      u_cur = u_next;
    }
    record(u_cur);
  }

  profile.total_lift =
      profile.samples.back().unwrapped_arg - profile.samples.front().unwrapped_arg;
  return profile;
}

double winding_from_arg_difference(double abs_arg_diff) {
  const double w = std::floor(abs_arg_diff / kTwoPi) - 1.0;
  return w < 0.0 ? 0.0 : w;
}

long long winding_count(const PiecewiseRadialMap& map, Complex z0) {
  const double t0 = std::abs(z0);
  if (!(t0 > 0.0) || !(t0 < 1.0)) {
    throw std::invalid_argument("winding_count: need 0 < |z0| < 1");
  }
  const RotationProfile profile =
      continuous_arg(map, std::arg(z0), 1.0, t0, 1.5, 0.0, 0.0, {}, 2);
  return static_cast<long long>(
      winding_from_arg_difference(std::abs(profile.total_lift)));
}

double winding_count_analytic(const PiecewiseRadialMap& map, double u) {
  const LogSigned a = map.arg_offset(u);
  if (a.is_zero()) return 0.0;
  // Below 2^53 the floor arithmetic is exact in double precision.
  if (a.log_abs < 36.0) {
    return winding_from_arg_difference(std::exp(a.log_abs));
  }
  return std::exp(a.log_abs - std::log(kTwoPi));
}

double winding_count_log(const PiecewiseRadialMap& map, double u) {
  const LogSigned a = map.arg_offset(u);
  if (a.is_zero()) return kNegInf;
  if (a.log_abs < 36.0) {
    const double n = winding_from_arg_difference(std::exp(a.log_abs));
    return n > 0.0 ? std::log(n) : kNegInf;
  }
  // floor and the -1 shift are below double resolution out here
  return a.log_abs - std::log(kTwoPi);
}

double theorem1_ratio(const PiecewiseRadialMap& map, double p,
                      double alpha_below, double u) {
  if (!(p > 1.0) || !(alpha_below > 0.0)) {
    throw std::invalid_argument("theorem1_ratio: need p > 1, alpha_below > 0");
  }
  if (!(u < 0.0)) {
    throw std::invalid_argument("theorem1_ratio: need log radius u < 0");
  }
  const double ell = -u;
  const LogSigned a = map.arg_offset(u);
  if (a.is_zero()) return 0.0;
  const double log_den =
      0.5 * std::log(alpha_below) + ell / p + 0.5 * std::log(ell);
  return std::exp(a.log_abs - log_den);
}

std::vector<SharpnessRow> sharpness_check(const PiecewiseRadialMap& map,
                                          const SchedulePlan& plan) {
  std::vector<SharpnessRow> rows;
  rows.reserve(static_cast<std::size_t>(plan.n_blocks));
  const bool stretch = plan.mode == ScheduleMode::StretchRotation;
  for (int n = 1; n <= plan.n_blocks; ++n) {
    SharpnessRow row;
    row.n = n;
    row.log_r = plan.log_r[static_cast<std::size_t>(n - 1)];
    const double ell = -row.log_r;
    row.log_lhs = map.arg_offset(row.log_r).log_abs;
    row.log_rhs = ell / plan.p + plan.gauge.log_h(row.log_r);
    if (stretch) row.log_rhs += 0.5 * std::log(ell);
    row.log_excess = row.log_lhs - row.log_rhs;
    row.pass = row.log_excess >= -1e-9;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace fdrot
