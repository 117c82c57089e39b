#include "fdrot/modulus.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>
#include <stdexcept>

#include "fdrot/log_space.hpp"
#include "fdrot/rng.hpp"
#include "fdrot/rotation.hpp"

namespace fdrot {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLog2 = 0.69314718055994530942;

//! log K of a region from its parameters: ((|q+1+ia|+|q-1+ia|)^2 / 4q).
double region_log_distortion(const RegionAction& r) {
  const double la = r.alpha.log_abs;
  const double hi = log_hypot(std::log(r.q + 1.0), la);
  const double lo =
      log_hypot(r.q == 1.0 ? kNegInf : std::log(std::abs(r.q - 1.0)), la);
  return 2.0 * log_add(hi, lo) - std::log(4.0 * r.q);
}

//! log of the area of the band {e^{u_lo} < |z| < e^{u_hi}}.
double log_band_area(double u_lo, double u_hi) {
  if (!(u_hi > u_lo)) return kNegInf;
  return std::log(kPi) + 2.0 * u_hi + std::log1p(-std::exp(2.0 * (u_lo - u_hi)));
}

/*
 * Unit antiderivative of the polar arc length of an off-center ball:
 *   fhat(x) = (1/a^2) * int_0^{a x} 2 t arccos(t/a) dt
 * (independent of a).  fhat(1) = pi/4 recovers the ball area.
 */
double fhat(double x) {
  if (x >= 1.0) return 0.25 * kPi;
  if (x < 1e-3) return x * x * (0.5 * kPi - x * (2.0 / 3.0) - x * x * x / 15.0);
  return x * x * std::acos(x) + 0.5 * std::asin(x) -
         0.5 * x * std::sqrt(1.0 - x * x);
}

constexpr double kSeriesCut = -6.907755278982137;  // log(1e-3)

}  // namespace

// log( fhat(e^{d2}) - fhat(e^{d1}) ) for d1 <= d2 <= 0; -inf if empty.
double log_fhat_diff(double d1, double d2) {
  if (!(d2 > d1)) return kNegInf;
  if (d2 <= kSeriesCut) {
    const double x2 = std::exp(d2);
    const double e2 = -std::expm1(2.0 * (d1 - d2));
    const double e3 = -std::expm1(3.0 * (d1 - d2));
    const double e5 = -std::expm1(5.0 * (d1 - d2));
    const double bracket =
        0.5 * kPi * e2 - (2.0 / 3.0) * x2 * e3 - (x2 * x2 * x2 / 15.0) * e5;
    return 2.0 * d2 + std::log(bracket);
  }
  const double x2 = std::min(1.0, std::exp(d2));
  const double x1 = d1 == kNegInf ? 0.0 : std::exp(d1);
  if (d2 - d1 < 1e-8) {  // sliver: first-order in the log width
    const double xm = 0.5 * (x1 + x2);
    return std::log(2.0 * xm * xm * std::acos(std::min(1.0, xm)) * (d2 - d1));
  }
  return std::log(fhat(x2) - fhat(x1));
}

namespace {

/*
 * G(x) = 16 fhat(x) - 4 fhat(2x): the net weight a band at relative
 * radius x <= 1/2 contributes to shell j (ball-j arc minus the ball-(j-1)
 * arc it also lies in, both scaled by rho0^2 area factors).  The leading
 * (pi/2) x^2 terms cancel exactly; the series starts at x^3.
 */
double gfun(double x) { return 16.0 * fhat(x) - 4.0 * fhat(std::min(1.0, 2.0 * x)); }

// log( G(e^{d2}) - G(e^{d1}) ) for d1 <= d2 <= -log 2; -inf if empty.
double log_g_diff(double d1, double d2) {
  if (!(d2 > d1)) return kNegInf;
  if (d2 <= kSeriesCut) {
    const double x2 = std::exp(d2);
    const double e3 = -std::expm1(3.0 * (d1 - d2));
    const double e5 = -std::expm1(5.0 * (d1 - d2));
    const double e7 = -std::expm1(7.0 * (d1 - d2));
    const double x2sq = x2 * x2;
    const double bracket = (32.0 / 3.0) * e3 + (112.0 / 15.0) * x2sq * e5 +
                           (372.0 / 35.0) * x2sq * x2sq * e7;
    return 3.0 * d2 + std::log(bracket);
  }
  const double x2 = std::exp(d2);
  const double x1 = d1 == kNegInf ? 0.0 : std::exp(d1);
  if (d2 - d1 < 1e-8) {  // G'(x) x = 32 x^2 (arccos x - arccos 2x)
    const double xm = 0.5 * (x1 + x2);
    const double dacos =
        std::acos(std::min(1.0, xm)) - std::acos(std::min(1.0, 2.0 * xm));
    return std::log(32.0 * xm * xm * dacos * (d2 - d1));
  }
  return std::log(gfun(x2) - gfun(x1));
}

// --- adaptive Simpson quadrature --------------------------------------

double simpson_recurse(const std::function<double(double)>& f, double a,
                       double b, double fa, double fm, double fb, double whole,
                       double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol) {
    return left + right + (left + right - whole) / 15.0;
  }
  return simpson_recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_recurse(f, a, b, fa, fm, fb, whole, tol, 40);
}

// Area of B(1,1) as int_0^2 2t arccos(t/2) dt, with a sqrt substitution
// near the endpoint where arccos has infinite slope.  Expected: pi.
double unit_ball_area_quad() {
  auto head = [](double x) { return 2.0 * x * std::acos(0.5 * x); };
  auto tail = [](double u) {
    const double x = 2.0 - u * u;
    return 2.0 * x * std::acos(std::min(1.0, 0.5 * x)) * 2.0 * u;
  };
  return integrate(head, 0.0, 1.5, 1e-13) +
         integrate(tail, 0.0, std::sqrt(0.5), 1e-13);
}

// Area of B(1/2,1/2) as int_0^1 2t arccos(t) dt.  Expected: pi/4.
double unit_inner_area_quad() {
  auto head = [](double x) { return 2.0 * x * std::acos(x); };
  auto tail = [](double u) {
    const double x = 1.0 - u * u;
    return 2.0 * x * std::acos(std::min(1.0, x)) * 2.0 * u;
  };
  return integrate(head, 0.0, 0.75, 1e-13) +
         integrate(tail, 0.0, 0.5, 1e-13);
}

}  // namespace

double BallChain::log_radius(int j) const {
  if (j < 0 || j > n_) throw std::out_of_range("BallChain::log_radius");
  return log_z0_ + j * kLog2;
}

double BallChain::radius(int j) const { return std::exp(log_radius(j)); }

BallChain build_ball_chain_log(double log_z0) {
  if (!(log_z0 < 0.0) || !std::isfinite(log_z0)) {
    throw std::domain_error("ball chain: need 0 < z0 < 1");
  }
  const double tol = 1e-9;
  int n = std::max(1, static_cast<int>(std::ceil(-log_z0 / kLog2 - tol)));
  while (n * kLog2 + log_z0 < -tol) ++n;
  while (n > 1 && (n - 1) * kLog2 + log_z0 >= -tol) --n;
  return BallChain(log_z0, n);
}

BallChain build_ball_chain(double z0) {
  if (!(z0 > 0.0) || !(z0 < 1.0)) {
    throw std::domain_error("ball chain: need 0 < z0 < 1");
  }
  return build_ball_chain_log(std::log(z0));
}

double rho0_eval(const BallChain& chain, Complex z) {
  for (int j = 0; j <= chain.n(); ++j) {
    const double r = chain.radius(j);
    if (!(r > 0.0) || !std::isfinite(r)) continue;
    if (std::norm(z - Complex(r, 0.0)) < r * r) return 2.0 / r;
  }
  return 0.0;
}

double rho0_line_integral(const BallChain& chain,
                          const std::vector<Complex>& vertices) {
  if (vertices.size() < 2) {
    throw std::invalid_argument("rho0_line_integral: need >= 2 vertices");
  }
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < vertices.size(); ++i) {
    const Complex a = vertices[i];
    const Complex d = vertices[i + 1] - a;
    const double len2 = std::norm(d);
    if (len2 == 0.0) continue;
    const double len = std::sqrt(len2);

    std::vector<double> ts = {0.0, 1.0};
    for (int j = 0; j <= chain.n(); ++j) {
      const double r = chain.radius(j);
      if (!(r > 0.0) || !std::isfinite(r)) continue;
      const Complex v = a - Complex(r, 0.0);
      const double bq = 2.0 * (v.real() * d.real() + v.imag() * d.imag());
      const double cq = std::norm(v) - r * r;
      const double disc = bq * bq - 4.0 * len2 * cq;
      if (disc <= 0.0) continue;
      const double sq = std::sqrt(disc);
      for (double t : {(-bq - sq) / (2.0 * len2), (-bq + sq) / (2.0 * len2)}) {
        if (t > 0.0 && t < 1.0) ts.push_back(t);
      }
    }
    std::sort(ts.begin(), ts.end());
    for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
      const double dt = ts[k + 1] - ts[k];
      if (dt <= 0.0) continue;
      const double mid = ts[k] + 0.5 * dt;
      total += rho0_eval(chain, a + mid * d) * len * dt;
    }
  }
  return total;
}

double rho0_power_integral_full(const BallChain& chain, double s) {
  if (!(s > 0.0)) throw std::invalid_argument("rho0 power: need s > 0");
  LogSumAccumulator acc;
  for (int j = 0; j <= chain.n(); ++j) {
    const double lr = chain.log_radius(j);
    acc.add_log(std::log(kPi) + s * kLog2 + (2.0 - s) * lr);
  }
  return acc.log_total();
}

double rho0_power_integral_exact(const BallChain& chain, double s) {
  if (!(s > 0.0)) throw std::invalid_argument("rho0 power: need s > 0");
  LogSumAccumulator acc;
  for (int j = 0; j <= chain.n(); ++j) {
    const double lr = chain.log_radius(j);
    const double shell = j == 0 ? 0.0 : std::log(0.75);
    acc.add_log(std::log(kPi) + shell + s * kLog2 + (2.0 - s) * lr);
  }
  return acc.log_total();
}

double rho0_power_integral_quad(const BallChain& chain, double s) {
  if (!(s > 0.0)) throw std::invalid_argument("rho0 power: need s > 0");
  const double outer = unit_ball_area_quad();
  const double inner = unit_inner_area_quad();
  LogSumAccumulator acc;
  for (int j = 0; j <= chain.n(); ++j) {
    const double lr = chain.log_radius(j);
    const double area = j == 0 ? outer : outer - inner;
    acc.add_log(std::log(area) + s * kLog2 + (2.0 - s) * lr);
  }
  return acc.log_total();
}

double distortion_p_integral_log(const PiecewiseRadialMap& map, double p,
                                 double log_ball_radius) {
  if (!(p > 0.0)) throw std::invalid_argument("distortion integral: p > 0");
  LogSumAccumulator acc;
  for (const RegionAction& r : map.regions()) {
    const double hi = std::min(r.log_t_hi, log_ball_radius);
    const double area = log_band_area(r.log_t_lo, hi);
    if (area == kNegInf) continue;
    acc.add_log(p * region_log_distortion(r) + area);
  }
  return acc.log_total();
}

double weighted_integral_exact(const PiecewiseRadialMap& map,
                               const BallChain& chain) {
  const auto& regions = map.regions();
  std::vector<double> log_k(regions.size());
  for (std::size_t i = 0; i < regions.size(); ++i) {
    log_k[i] = region_log_distortion(regions[i]);
  }

  LogSumAccumulator total;
  const double log16 = std::log(16.0);
  for (int j = 0; j <= chain.n(); ++j) {
    const double la = kLog2 + chain.log_radius(j);          // log(2 r_j)
    const double la_prev = j == 0 ? kNegInf : la - kLog2;   // log(2 r_{j-1})
    for (std::size_t i = 0; i < regions.size(); ++i) {
      const double lo = regions[i].log_t_lo;
      const double hi = std::min(regions[i].log_t_hi, la);
      if (!(hi > lo)) continue;
      if (j == 0) {
        total.add_log(log_k[i] + log16 + log_fhat_diff(lo - la, hi - la));
        continue;
      }
      const double inner_hi = std::min(hi, la_prev);
      if (inner_hi > lo) {
        total.add_log(log_k[i] + log_g_diff(lo - la, inner_hi - la));
      }
      const double outer_lo = std::max(lo, la_prev);
      if (hi > outer_lo) {
        total.add_log(log_k[i] + log16 + log_fhat_diff(outer_lo - la, hi - la));
      }
    }
  }
  return total.log_total();
}

McIntegral weighted_integral_mc(const PiecewiseRadialMap& map,
                                const BallChain& chain, long long samples,
                                std::uint64_t seed) {
  if (samples <= 0) {
    throw std::invalid_argument("weighted_integral_mc: samples <= 0");
  }
  const int m = chain.size();
  // |shell_j| (2/r_j)^2 is exactly 4 pi for j = 0 and 3 pi for j >= 1.
  std::vector<double> weight(static_cast<std::size_t>(m), 3.0);
  weight[0] = 4.0;
  const double wsum = 3.0 * (m - 1) + 4.0;

  std::vector<long long> alloc(static_cast<std::size_t>(m));
  std::vector<std::pair<double, int>> frac;
  long long assigned = 0;
  for (int j = 0; j < m; ++j) {
    const double share = samples * weight[static_cast<std::size_t>(j)] / wsum;
    alloc[static_cast<std::size_t>(j)] = static_cast<long long>(share);
    assigned += alloc[static_cast<std::size_t>(j)];
    frac.emplace_back(share - std::floor(share), j);
  }
  std::sort(frac.begin(), frac.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first > b.first;
    return a.second < b.second;
  });
  for (long long rest = samples - assigned; rest > 0; --rest) {
    ++alloc[static_cast<std::size_t>(
        frac[static_cast<std::size_t>(rest - 1) % frac.size()].second)];
  }
  for (auto& a : alloc) a = std::max<long long>(a, 100);

  McIntegral out;
  LogSumAccumulator total;
  LogSumAccumulator var_total;
  for (int j = 0; j < m; ++j) {
    Xoshiro256 rng = Xoshiro256::substream(seed, static_cast<std::uint64_t>(j));
    const long long nj = alloc[static_cast<std::size_t>(j)];
    LogSumAccumulator s1, s2;
    for (long long k = 0; k < nj; ++k) {
      double log_kval = 0.0;
      for (int attempt = 0;; ++attempt) {
        if (attempt > 10000) {
          throw std::runtime_error("weighted_integral_mc: rejection stuck");
        }
        const double rad = std::sqrt(rng.uniform01());
        const double phi = 2.0 * kPi * rng.uniform01();
        const double re = 1.0 + rad * std::cos(phi);
        const double im = rad * std::sin(phi);
        const double r2 = re * re + im * im;
        if (r2 <= 0.0) continue;
        if (j > 0) {  // outside the inner half-scale ball
          const double dre = re - 0.5;
          if (dre * dre + im * im < 0.25) continue;
        }
        const double u = 0.5 * std::log(r2) + chain.log_radius(j);
        try {
          log_kval = map.distortion_log_at(u);
        } catch (const BoundaryError&) {
          continue;  // measure-zero edge hit; redraw
        }
        break;
      }
      s1.add_log(log_kval);
      s2.add_log(2.0 * log_kval);
    }
    const double log_nj = std::log(static_cast<double>(nj));
    const double m1 = s1.log_total() - log_nj;
    const double m2 = s2.log_total() - log_nj;
    const double log_c = std::log(weight[static_cast<std::size_t>(j)] * kPi);
    total.add_log(log_c + m1);
    if (m2 > 2.0 * m1) {
      const double log_var = log_sub(m2, 2.0 * m1);
      var_total.add_log(2.0 * log_c + log_var - log_nj);
    }
    out.samples += nj;
  }
  out.log_value = total.log_total();
  out.log_se = 0.5 * var_total.log_total();
  return out;
}

WeightedModulusReport weighted_modulus_upper(const SchedulePlan& plan,
                                             const BallChain& chain, double p,
                                             long long mc_samples,
                                             std::uint64_t seed) {
  if (!(p > 1.0)) throw std::invalid_argument("weighted modulus: need p > 1");
  const PiecewiseRadialMap map = compose_schedule(plan);
  const double s = 2.0 * p / (p - 1.0);

  WeightedModulusReport rep;
  rep.p = p;
  rep.log_k_norm =
      distortion_p_integral_log(map, p, std::log(4.0)) / p;
  rep.log_rho_full = rho0_power_integral_full(chain, s);
  rep.log_rho_exact = rho0_power_integral_exact(chain, s);
  rep.log_upper = rep.log_k_norm + (p - 1.0) / p * rep.log_rho_full;
  rep.log_direct_exact = weighted_integral_exact(map, chain);
  if (mc_samples > 0) {
    const McIntegral mc = weighted_integral_mc(map, chain, mc_samples, seed);
    rep.log_direct_mc = mc.log_value;
    rep.log_direct_mc_se = mc.log_se;
    rep.mc_samples = mc.samples;
  }
  return rep;
}

double modulus_lower_from_winding(double nz0, double c_f, double r_f) {
  if (!(nz0 >= 0.0)) throw std::domain_error("winding lower: nz0 < 0");
  if (!(r_f > 0.0) || !(r_f <= c_f)) {
    throw std::domain_error("winding lower: need 0 < r_f <= c_f");
  }
  if (nz0 == 0.0) return 0.0;
  if (r_f == c_f) {
    throw std::domain_error("winding lower: c_f = r_f is degenerate");
  }
  return 2.0 * kPi * nz0 * nz0 / std::log(c_f / r_f);
}

double modulus_lower_from_winding_log(double log_n, double log_c_f,
                                      double log_r_f) {
  if (log_n == kNegInf) return kNegInf;
  const double ratio = log_c_f - log_r_f;
  if (!(ratio > 0.0)) {
    throw std::domain_error("winding lower: c_f = r_f is degenerate");
  }
  return std::log(2.0 * kPi) + 2.0 * log_n - std::log(ratio);
}

BoundChainReport verify_bound_chain(const PiecewiseRadialMap& map,
                                    const SchedulePlan& plan, double log_z0,
                                    double alpha_below) {
  if (!(log_z0 < 0.0)) {
    throw std::invalid_argument("bound chain: need z0 in (0,1)");
  }
  if (!(alpha_below > 0.0)) {
    throw std::invalid_argument("bound chain: need alpha_below > 0");
  }
  const double p = plan.p;
  const BallChain chain = build_ball_chain_log(log_z0);

  BoundChainReport rep;
  rep.log_z0 = log_z0;
  rep.p = p;
  rep.alpha_below = alpha_below;

  const double log_k_norm = distortion_p_integral_log(map, p, std::log(4.0)) / p;
  const double log_rho_full =
      rho0_power_integral_full(chain, 2.0 * p / (p - 1.0));
  rep.log_upper = log_k_norm + (p - 1.0) / p * log_rho_full;

  rep.log_n = winding_count_log(map, log_z0);
  rep.n_winding = winding_count_analytic(map, log_z0);
  rep.log_c_f = map.s_log(0.0);
  rep.log_r_f_exact = map.s_log(log_z0);
  rep.log_r_f_holder = alpha_below * log_z0;

  const double ratio_exact = rep.log_c_f - rep.log_r_f_exact;
  const double ratio_holder = rep.log_c_f - rep.log_r_f_holder;
  std::ostringstream diag;
  bool degenerate = false;
  if (rep.log_n != kNegInf) {
    if (ratio_exact > 0.0 && ratio_holder > 0.0) {
      rep.log_lower = modulus_lower_from_winding_log(rep.log_n, rep.log_c_f,
                                                     rep.log_r_f_exact);
      rep.log_lower_holder = modulus_lower_from_winding_log(
          rep.log_n, rep.log_c_f, rep.log_r_f_holder);
    } else {
      degenerate = true;
      diag << "degenerate c_f/r_f ratio with nonzero winding; ";
    }
  }
  rep.log_implied_winding_bound =
      ratio_holder > 0.0
          ? 0.5 * (rep.log_upper + std::log(ratio_holder) -
                   std::log(2.0 * kPi))
          : kNegInf;

  const double tol = 1e-9;
  rep.chain_holds = !degenerate && rep.log_lower <= rep.log_upper + tol &&
                    rep.log_lower_holder <= rep.log_upper + tol;
  rep.winding_within = !degenerate && ratio_holder > 0.0 &&
                       rep.log_n <= rep.log_implied_winding_bound + tol;
  rep.r_f_consistent = rep.log_r_f_holder <= rep.log_r_f_exact + tol;
  if (!rep.chain_holds) {
    diag << "lower bound exceeds upper: log_lower=" << rep.log_lower
         << " log_lower_holder=" << rep.log_lower_holder
         << " log_upper=" << rep.log_upper << "; ";
  }
  if (!rep.winding_within) {
    diag << "winding count above implied bound: log_n=" << rep.log_n
         << " log_bound=" << rep.log_implied_winding_bound << "; ";
  }
  if (!rep.r_f_consistent) {
    diag << "power-law floor exceeds exact |f(z0)|: log_r_f_holder="
         << rep.log_r_f_holder << " log_r_f_exact=" << rep.log_r_f_exact
         << "; ";
  }
  rep.pass = rep.chain_holds && rep.winding_within && rep.r_f_consistent;
  rep.diagnostic = diag.str();
  return rep;
}

}  // namespace fdrot
