#include "fdrot/map.hpp"

#include <algorithm>
#include <cmath>

#include "fdrot/io.hpp"

namespace fdrot {

namespace {

bool near_boundary(double u, double edge) {
  if (!std::isfinite(edge)) return false;
  return std::fabs(u - edge) <= 1.0e-12 * std::max(1.0, std::fabs(edge));
}

double require_log_radius(Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw std::domain_error("non-finite input point");
  if (z == Complex(0.0, 0.0))
    throw std::domain_error("derivative query at the origin");
  return std::log(std::abs(z));
}

double signed_value_or_throw(const LogSigned& v, const char* what) {
  if (!v.representable())
    throw std::domain_error(std::string(what) +
                            " exceeds double range; use the log-space API");
  return v.value();
}

}  // namespace

PiecewiseRadialMap PiecewiseRadialMap::identity() {
  PiecewiseRadialMap m;
  m.regions_.push_back(RegionAction{});
  m.n_blocks_ = 0;
  return m;
}

PiecewiseRadialMap PiecewiseRadialMap::from_regions(
    std::vector<RegionAction> regions, int n_blocks) {
  if (regions.empty())
    throw std::invalid_argument("region table must be non-empty");
  if (regions.front().log_t_lo != kNegInf || regions.back().log_t_hi != kPosInf)
    throw std::invalid_argument("region table must cover (0, inf)");
  for (std::size_t k = 0; k < regions.size(); ++k) {
    const RegionAction& r = regions[k];
    if (!(r.q > 0.0))
      throw std::invalid_argument("region stretch exponent must be positive");
    if (!(r.log_t_lo < r.log_t_hi))
      throw std::invalid_argument("region interval is empty");
    if (k > 0) {
      const RegionAction& prev = regions[k - 1];
      if (prev.log_t_hi != r.log_t_lo)
        throw std::invalid_argument("region table has a gap or overlap");
      const double edge = r.log_t_lo;
      const double below = prev.s_log(edge);
      const double above = r.s_log(edge);
      if (std::fabs(below - above) >
          1.0e-9 * std::max({1.0, std::fabs(below), std::fabs(above)}))
        throw std::invalid_argument("radial profile discontinuous at a boundary");
      const LogSigned da = prev.arg_offset(edge) - r.arg_offset(edge);
      const double ref = std::max(prev.arg_offset(edge).log_abs, 0.0);
      if (!da.is_zero() && da.log_abs > ref + std::log(1.0e-9))
        throw std::invalid_argument("argument offset discontinuous at a boundary");
    }
  }
  PiecewiseRadialMap m;
  m.regions_ = std::move(regions);
  m.n_blocks_ = n_blocks;
  return m;
}

const RegionAction& PiecewiseRadialMap::region_at(double u) const {
  if (std::isnan(u)) throw std::domain_error("NaN radius");
  // Last region whose lower edge is <= u.
  std::size_t lo = 0, hi = regions_.size();
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (regions_[mid].log_t_lo <= u)
      lo = mid;
    else
      hi = mid;
  }
  // At a shared edge prefer the annulus side; the values agree there by
  // continuity, this just pins the convention.
  if (u == regions_[lo].log_t_lo && lo > 0 && !regions_[lo].is_annulus() &&
      regions_[lo - 1].is_annulus())
    return regions_[lo - 1];
  return regions_[lo];
}

const RegionAction& PiecewiseRadialMap::region_for_derivative(double u) const {
  const RegionAction& r = region_at(u);
  if (near_boundary(u, r.log_t_lo) || near_boundary(u, r.log_t_hi))
    throw BoundaryError(u);
  return r;
}

double PiecewiseRadialMap::radial_profile(double t) const {
  if (!(t > 0.0) || !std::isfinite(t))
    throw std::domain_error("radial_profile: need finite t > 0");
  return std::exp(s_log(std::log(t)));
}

double PiecewiseRadialMap::arg_profile(double t) const {
  if (!(t > 0.0) || !std::isfinite(t))
    throw std::domain_error("arg_profile: need finite t > 0");
  return signed_value_or_throw(arg_offset(std::log(t)), "rotation offset");
}

double PiecewiseRadialMap::inverse_s_log(double log_s) const {
  // s is strictly increasing and continuous, so the image intervals of the
  // regions tile (0, inf) in the same order.
  std::size_t lo = 0, hi = regions_.size();
  while (hi - lo > 1) {
    const std::size_t mid = (lo + hi) / 2;
    if (regions_[mid].s_log(regions_[mid].log_t_lo) <= log_s)
      lo = mid;
    else
      hi = mid;
  }
  const RegionAction& r = regions_[lo];
  return r.log_R_ref + (log_s - r.log_lambda - r.log_R_ref) / r.q;
}

Complex PiecewiseRadialMap::eval(Complex z) const {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw std::domain_error("eval: non-finite input");
  if (z == Complex(0.0, 0.0)) return z;
  const double u = std::log(std::abs(z));
  const RegionAction& r = region_at(u);
  const double a = signed_value_or_throw(r.arg_offset(u), "rotation offset");
  const double angle = std::arg(z) + a;
  const double m = std::exp(r.s_log(u));
  return {m * std::cos(angle), m * std::sin(angle)};
}

std::pair<double, LogSigned> PiecewiseRadialMap::eval_logpolar(
    double u, double theta0) const {
  const RegionAction& r = region_at(u);
  return {r.s_log(u), LogSigned::from_value(theta0) + r.arg_offset(u)};
}

Complex PiecewiseRadialMap::inverse_eval(Complex w) const {
  if (!std::isfinite(w.real()) || !std::isfinite(w.imag()))
    throw std::domain_error("inverse_eval: non-finite input");
  if (w == Complex(0.0, 0.0)) return w;
  const double u = inverse_s_log(std::log(std::abs(w)));
  const double a = signed_value_or_throw(arg_offset(u), "rotation offset");
  const double angle = std::arg(w) - a;
  const double m = std::exp(u);
  return {m * std::cos(angle), m * std::sin(angle)};
}

std::pair<Complex, Complex> PiecewiseRadialMap::wirtinger(Complex z) const {
  const double u = require_log_radius(z);
  const RegionAction& r = region_for_derivative(u);
  const double alpha = signed_value_or_throw(r.alpha, "rotation rate");
  const double mu = signed_value_or_throw(r.mu, "rotation offset");
  const double d = u - r.log_R_ref;
  // F(z) = lambda e^{i mu} R^{1-q} z |z|^{q-1} e^{i alpha log(|z|/R)} gives
  //   dF    = (q+1+i alpha)/2 * lambda (t/R)^{q-1} e^{i (mu + alpha d)}
  //   dbarF = (q-1+i alpha)/2 * lambda (t/R)^{q-1} e^{i (mu + alpha d)} e^{2 i theta}
  const double mag = std::exp(r.log_lambda + (r.q - 1.0) * d);
  const double phase = mu + alpha * d;
  const Complex common = mag * Complex(std::cos(phase), std::sin(phase));
  const double theta = std::arg(z);
  const Complex dir2(std::cos(2.0 * theta), std::sin(2.0 * theta));
  const Complex df = 0.5 * common * Complex(r.q + 1.0, alpha);
  const Complex dbarf = 0.5 * common * Complex(r.q - 1.0, alpha) * dir2;
  return {df, dbarf};
}

double PiecewiseRadialMap::jacobian(Complex z) const {
  const double u = require_log_radius(z);
  const RegionAction& r = region_for_derivative(u);
  // |d|^2 - |dbar|^2 collapses to lambda^2 q (t/R)^{2(q-1)}; this form
  // avoids the catastrophic cancellation of the two squared norms.
  return r.q *
         std::exp(2.0 * (r.log_lambda + (r.q - 1.0) * (u - r.log_R_ref)));
}

double PiecewiseRadialMap::distortion(Complex z) const {
  const double u = require_log_radius(z);
  region_for_derivative(u);  // boundary rejection
  return std::exp(distortion_log_at(u));
}

double PiecewiseRadialMap::distortion_log_at(double u) const {
  const RegionAction& r = region_at(u);
  const double log_a = log_hypot(std::log(r.q + 1.0), r.alpha.log_abs);
  const double log_b = log_hypot(
      r.q == 1.0 ? kNegInf : std::log(std::fabs(r.q - 1.0)), r.alpha.log_abs);
  return 2.0 * log_add(log_a, log_b) - std::log(4.0 * r.q);
}

std::pair<double, double> PiecewiseRadialMap::wirtinger_log_norms(
    double u) const {
  const RegionAction& r = region_for_derivative(u);
  const double base = r.log_lambda + (r.q - 1.0) * (u - r.log_R_ref);
  const double log_d =
      base + log_hypot(std::log(r.q + 1.0), r.alpha.log_abs) - std::log(2.0);
  const double log_db =
      base +
      log_hypot(r.q == 1.0 ? kNegInf : std::log(std::fabs(r.q - 1.0)),
                r.alpha.log_abs) -
      std::log(2.0);
  return {log_d, log_db};
}

namespace {

PiecewiseRadialMap compose_impl(const SchedulePlan& plan, bool keep_rotation) {
  const int n_b = plan.n_blocks;
  if (n_b == 0) return PiecewiseRadialMap::identity();

  std::vector<RegionAction> regions;
  regions.reserve(2 * n_b + 1);

  // Innermost tail: the similarity left after all N blocks.
  {
    RegionAction tail;
    tail.log_t_lo = kNegInf;
    tail.log_t_hi = plan.log_r[n_b - 1];
    tail.log_lambda = plan.log_lambda_after(n_b);
    tail.mu = keep_rotation ? plan.mu_after(n_b) : LogSigned::zero();
    tail.log_R_ref = plan.log_r[n_b - 1];
    regions.push_back(tail);
  }

  for (int i = n_b - 1; i >= 0; --i) {
    RegionAction ann;
    ann.log_t_lo = plan.log_r[i];
    ann.log_t_hi = plan.log_R(i);
    ann.log_lambda = plan.log_lambda_after(i);
    ann.mu = keep_rotation ? plan.mu_after(i) : LogSigned::zero();
    ann.q = plan.q[i];
    ann.alpha = keep_rotation ? LogSigned::from_log(plan.log_alpha[i], 1)
                              : LogSigned::zero();
    ann.log_R_ref = plan.log_R(i);
    regions.push_back(ann);

    RegionAction gap;
    gap.log_t_lo = plan.log_R(i);
    gap.log_t_hi = (i > 0) ? plan.log_r[i - 1] : kPosInf;
    gap.log_lambda = plan.log_lambda_after(i);
    gap.mu = keep_rotation ? plan.mu_after(i) : LogSigned::zero();
    gap.log_R_ref = (i > 0) ? plan.log_r[i - 1] : 0.0;
    regions.push_back(gap);
  }

  return PiecewiseRadialMap::from_regions(std::move(regions), n_b);
}

}  // namespace

PiecewiseRadialMap compose_schedule(const SchedulePlan& plan) {
  return compose_impl(plan, true);
}

PiecewiseRadialMap compose_schedule_stretch_only(const SchedulePlan& plan) {
  return compose_impl(plan, false);
}

PiecewiseRadialMap inverted(const PiecewiseRadialMap& map) {
  const auto& fwd = map.regions();
  // Shared interior edges are mapped once so adjacent inverse regions get
  // bitwise-identical endpoints.
  std::vector<double> edges;
  edges.reserve(fwd.size() > 0 ? fwd.size() - 1 : 0);
  for (std::size_t k = 1; k < fwd.size(); ++k) {
    edges.push_back(fwd[k].s_log(fwd[k].log_t_lo));
  }
  std::vector<RegionAction> inv;
  inv.reserve(fwd.size());
  for (std::size_t k = 0; k < fwd.size(); ++k) {
    const RegionAction& r = fwd[k];
    RegionAction s;
    s.log_t_lo = (k == 0) ? kNegInf : edges[k - 1];
    s.log_t_hi = (k + 1 < fwd.size()) ? edges[k] : kPosInf;
    s.q = 1.0 / r.q;
    s.log_R_ref = r.log_lambda + r.log_R_ref;
    s.log_lambda = -r.log_lambda;
    s.mu = r.mu.negate();
    s.alpha = r.alpha.scaled(-1.0 / r.q);
    inv.push_back(s);
  }
  return PiecewiseRadialMap::from_regions(std::move(inv), map.n_blocks());
}

std::string PiecewiseRadialMap::to_json_string() const {
  ordered_json j;
  j["n_blocks"] = n_blocks_;
  ordered_json rs = ordered_json::array();
  for (const RegionAction& r : regions_) {
    ordered_json e;
    e["log_t_lo"] = finite_or_null(r.log_t_lo);
    e["log_t_hi"] = finite_or_null(r.log_t_hi);
    e["log_lambda"] = r.log_lambda;
    e["mu"] = {{"sign", r.mu.sign},
               {"log_abs", finite_or_null(r.mu.log_abs)},
               {"value", finite_or_null(r.mu.value())}};
    e["q"] = r.q;
    e["alpha"] = {{"sign", r.alpha.sign},
                  {"log_abs", finite_or_null(r.alpha.log_abs)},
                  {"value", finite_or_null(r.alpha.value())}};
    e["log_R_ref"] = r.log_R_ref;
    rs.push_back(std::move(e));
  }
  j["regions"] = std::move(rs);
  return j.dump(2) + "\n";
}

PiecewiseRadialMap PiecewiseRadialMap::from_json_string(
    const std::string& text) {
  const ordered_json j = ordered_json::parse(text);
  std::vector<RegionAction> regions;
  for (const auto& e : j.at("regions")) {
    RegionAction r;
    r.log_t_lo = e.at("log_t_lo").is_null() ? kNegInf
                                            : e.at("log_t_lo").get<double>();
    r.log_t_hi = e.at("log_t_hi").is_null() ? kPosInf
                                            : e.at("log_t_hi").get<double>();
    r.log_lambda = e.at("log_lambda").get<double>();
    const auto& mu = e.at("mu");
    r.mu = LogSigned::from_log(mu.at("log_abs").is_null()
                                   ? kNegInf
                                   : mu.at("log_abs").get<double>(),
                               mu.at("sign").get<int>());
    r.q = e.at("q").get<double>();
    const auto& al = e.at("alpha");
    r.alpha = LogSigned::from_log(al.at("log_abs").is_null()
                                      ? kNegInf
                                      : al.at("log_abs").get<double>(),
                                  al.at("sign").get<int>());
    r.log_R_ref = e.at("log_R_ref").get<double>();
    regions.push_back(r);
  }
  return from_regions(std::move(regions), j.at("n_blocks").get<int>());
}

}  // namespace fdrot
