// Exponent fits, stretch-factor modulus bounds, and inverse regularity.

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "fdrot/holder.hpp"
#include "fdrot/map.hpp"
#include "fdrot/rng.hpp"
#include "fdrot/schedule.hpp"

using namespace fdrot;

namespace {

SchedulePlan make_plan(double p, int n, ScheduleMode mode) {
  return generate_schedule(p, n, GaugeSpec{}, mode);
}

}  // namespace

TEST_CASE("log-spaced scales are inclusive, monotone, and validated") {
  const auto scales = log_spaced_scales(1e-4, 1e-1, 7);
  REQUIRE(scales.size() == 7);
  CHECK(scales.front() == doctest::Approx(1e-4).epsilon(1e-12));
  CHECK(scales.back() == doctest::Approx(1e-1).epsilon(1e-12));
  for (std::size_t i = 1; i < scales.size(); ++i) {
    CHECK(scales[i] > scales[i - 1]);
    // log-uniform: constant ratio between consecutive scales
    const double ratio = scales[i] / scales[i - 1];
    CHECK(ratio == doctest::Approx(scales[1] / scales[0]).epsilon(1e-9));
  }
  CHECK_THROWS_AS(log_spaced_scales(0.0, 1.0, 5), std::invalid_argument);
  CHECK_THROWS_AS(log_spaced_scales(1e-2, 1e-3, 5), std::invalid_argument);
  CHECK_THROWS_AS(log_spaced_scales(1e-3, 1e-2, 1), std::invalid_argument);
}

TEST_CASE("identity map fits exponent one on both sides") {
  const PiecewiseRadialMap id = PiecewiseRadialMap::identity();
  SamplerSpec spec;
  spec.seed = 3;
  const auto scales = log_spaced_scales(1e-4, 0.05, 8);
  for (HolderSide side : {HolderSide::Above, HolderSide::Below}) {
    const ExponentFit fit = fit_exponent(id, spec, side, scales);
    CHECK(fit.side == side);
    // |x - y| maps to itself exactly, so the log-log points are collinear
    // with slope 1 and the regression is exact up to rounding.
    CHECK(fit.exponent == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(fit.log_constant) < 1e-9);
    CHECK(fit.residual < 1e-9);
    CHECK(fit.points.size() == scales.size());
    CHECK(fit.warnings.empty());
    CHECK(fit.d_min > 0.0);
    CHECK(fit.d_min < fit.d_max);
    CHECK(fit.d_max <= 2.0 * scales.back() * (1.0 + 1e-12));
  }
}

TEST_CASE("rotation-only fits: twisted above, controlled below") {
  const SchedulePlan plan = make_plan(2.0, 10, ScheduleMode::RotationOnly);
  const PiecewiseRadialMap map = compose_schedule(plan);
  SamplerSpec spec;
  spec.seed = 11;
  const auto scales = log_spaced_scales(1e-5, 0.05, 10);

  const ExponentFit above = fit_exponent(map, spec, HolderSide::Above, scales);
  // The twist makes chords saturate near t with alpha(t) d / t ~ 1, which
  // drags the above envelope below Lipschitz but keeps it >= 1 - 1/p - 0.05.
  CHECK(above.exponent >= 0.45);
  CHECK(above.exponent <= 1.02);
  REQUIRE(above.points.size() >= 2);

  const ExponentFit below = fit_exponent(map, spec, HolderSide::Below, scales);
  CHECK(below.exponent <= 3.0 * plan.p / (plan.p - 1.0) + 0.5);
  CHECK(below.exponent >= 0.5);
  CHECK(std::isfinite(below.residual));
}

TEST_CASE("stretch-factor bounds report matches its design") {
  const SchedulePlan plan = make_plan(2.0, 12, ScheduleMode::StretchRotation);
  const GBoundsReport rep = check_g_bounds(plan);

  REQUIRE(rep.above.points.size() >= 2);
  REQUIRE(rep.below.points.size() >= 2);

  // Realized above-quotients of the truncated stretch factor are Lipschitz
  // (the per-annulus slopes lambda_{n-1} q_n stay bounded), so the fit sits
  // near 1 and the 0.55 gate reports the slack honestly as a failure.
  CHECK(rep.above.exponent > 0.9);
  CHECK_FALSE(rep.above_exponent_ok);
  CHECK(rep.sqrt_bound_holds);
  CHECK(rep.sqrt_bound_constant > 0.0);

  CHECK(rep.below.exponent >= 2.0);
  CHECK(rep.below_exponent_ok);
  CHECK(rep.cubic_positive);
  CHECK(rep.cubic_constant > 1.0);

  // The derivative floor window reaches t = 1 where s'(t)/t^2 = 1 exactly;
  // every deeper point sits strictly above it.
  CHECK(rep.deriv_positive);
  CHECK(rep.deriv_constant == doctest::Approx(1.0).epsilon(1e-9));

  CHECK_FALSE(rep.pass);

  const SchedulePlan rot = make_plan(2.0, 4, ScheduleMode::RotationOnly);
  CHECK_THROWS_AS(check_g_bounds(rot), std::invalid_argument);
}

TEST_CASE("gap scales dominate the square of their top radius") {
  // On the gap below annulus k the stretch factor is s(t) = lambda_k t, so
  // s'(t)/t^2 >= lambda_k / r_k^2; the schedule guarantees that quotient
  // stays >= e, which is what makes the cubic lower bound possible.
  for (double p : {1.5, 2.0, 4.0}) {
    const SchedulePlan plan = make_plan(p, 12, ScheduleMode::StretchRotation);
    for (int k = 1; k <= plan.n_blocks; ++k) {
      CHECK(plan.log_lambda_after(k) - 2.0 * plan.log_r[k - 1] >=
            1.0 - 1e-12);
    }
  }
}

TEST_CASE("radial log-derivative jumps by exactly log q at inner edges") {
  const SchedulePlan plan = make_plan(2.0, 8, ScheduleMode::StretchRotation);
  const PiecewiseRadialMap g = compose_schedule_stretch_only(plan);
  const auto& regions = g.regions();
  REQUIRE(regions.size() >= 3);
  for (std::size_t k = 1; k < regions.size(); ++k) {
    const RegionAction& r = regions[k];
    if (!r.is_annulus()) continue;
    const RegionAction& lower = regions[k - 1];
    // one-sided log s' at the shared inner edge, annulus side:
    const double annulus_side =
        r.log_lambda + std::log(r.q) + (r.q - 1.0) * (r.log_t_lo - r.log_R_ref);
    // gap side has q = 1, so its log-derivative is just its log-scale:
    const double gap_side = lower.log_lambda;
    CHECK(annulus_side - gap_side == doctest::Approx(std::log(r.q)).epsilon(1e-12));
  }
}

TEST_CASE("tangential increments of the stretch factor never expand") {
  const SchedulePlan plan = make_plan(2.0, 12, ScheduleMode::StretchRotation);
  const PiecewiseRadialMap g = compose_schedule_stretch_only(plan);

  // radially: s(t) <= t throughout (every block contracts)
  for (int i = 0; i <= 400; ++i) {
    const double u = -14.0 + 14.0 * static_cast<double>(i) / 400.0 - 1e-3;
    CHECK(g.s_log(u) <= u + 1e-12);
  }

  // as complex increments: same-modulus pairs have |g(x)-g(w)| =
  // (s(t)/t)|x-w| <= |x-w|
  Xoshiro256 rng(2024);
  for (int i = 0; i < 200; ++i) {
    const double u = rng.uniform(-6.0, std::log(0.5));
    const double t = std::exp(u);
    const double th1 = rng.uniform(0.0, 6.283185307179586);
    const double th2 = rng.uniform(0.0, 6.283185307179586);
    const Complex x = std::polar(t, th1);
    const Complex w = std::polar(t, th2);
    if (std::abs(x - w) == 0.0) continue;
    CHECK(std::abs(g.eval(x) - g.eval(w)) <=
          std::abs(x - w) * (1.0 + 1e-10));
  }
}

TEST_CASE("inverse regularity report on a rotation-only plan") {
  const SchedulePlan plan = make_plan(2.0, 8, ScheduleMode::RotationOnly);
  const PiecewiseRadialMap map = compose_schedule(plan);
  SamplerSpec spec;
  spec.seed = 5;
  const InverseHolderReport rep = check_inverse_holder(map, plan, spec);

  CHECK(rep.below_threshold == doctest::Approx(6.5).epsilon(1e-12));
  CHECK(rep.below_within_threshold);
  CHECK(rep.max_round_trip_error <= 1e-10);
  CHECK(rep.round_trip_ok);
  // the inverse of a pure twist is the opposite twist: same above envelope
  CHECK(rep.inverse_above.exponent >= 0.45);
  CHECK(rep.inverse_above.exponent <= 1.02);
  CHECK(rep.reciprocal_ok);
  CHECK(rep.pass);
}

TEST_CASE("inverted map undoes the forward map") {
  const SchedulePlan plan = make_plan(2.0, 4, ScheduleMode::StretchRotation);
  const PiecewiseRadialMap map = compose_schedule(plan);
  const PiecewiseRadialMap inv = inverted(map);

  CHECK(inv.n_blocks() == map.n_blocks());
  CHECK(inv.regions().size() == map.regions().size());

  int i = 0;
  for (double u : {-0.2, -1.0, -2.5, -4.0, -6.0}) {
    const double theta = 6.283185307179586 * 0.6180339887498949 * ++i;
    const Complex z = std::polar(std::exp(u), theta);
    const Complex w = map.eval(z);
    REQUIRE(std::abs(w) > 0.0);
    CHECK(std::abs(inv.eval(w) - z) <= 1e-12 * std::abs(z));
    CHECK(std::abs(inv.s_log(map.s_log(u)) - u) <= 1e-12 * std::max(1.0, std::abs(u)));
    // the dedicated inverse evaluator and the inverted table agree
    CHECK(std::abs(map.inverse_eval(w) - inv.eval(w)) <= 1e-12 * std::abs(z));
  }

  // annulus exponents invert region by region
  const auto& fwd_regions = map.regions();
  const auto& inv_regions = inv.regions();
  for (std::size_t k = 0; k < fwd_regions.size(); ++k) {
    CHECK(inv_regions[k].q == doctest::Approx(1.0 / fwd_regions[k].q).epsilon(1e-15));
  }

  const PiecewiseRadialMap idinv = inverted(PiecewiseRadialMap::identity());
  CHECK(idinv.s_log(0.3) == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(idinv.regions().size() == 1);
}

TEST_CASE("exponent fit rejects degenerate scale ranges") {
  const PiecewiseRadialMap id = PiecewiseRadialMap::identity();
  SamplerSpec spec;
  CHECK_THROWS_AS(fit_exponent(id, spec, HolderSide::Above, {}),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      fit_exponent(id, spec, HolderSide::Above, {1e-3, 5e-3}),
      std::invalid_argument);  // spans less than two decades
  CHECK_THROWS_AS(
      fit_exponent(id, spec, HolderSide::Above, {1e-4, 2e-1}),
      std::invalid_argument);  // exceeds max_distance
}

TEST_CASE("fits are deterministic for a fixed seed") {
  const SchedulePlan plan = make_plan(2.0, 6, ScheduleMode::RotationOnly);
  const PiecewiseRadialMap map = compose_schedule(plan);
  SamplerSpec spec;
  spec.seed = 42;
  const auto scales = log_spaced_scales(1e-4, 0.05, 8);
  const ExponentFit a = fit_exponent(map, spec, HolderSide::Above, scales);
  const ExponentFit b = fit_exponent(map, spec, HolderSide::Above, scales);
  CHECK(a.exponent == b.exponent);
  CHECK(a.log_constant == b.log_constant);
  REQUIRE(a.points.size() == b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    CHECK(a.points[i].log_d == b.points[i].log_d);
    CHECK(a.points[i].log_q == b.points[i].log_q);
  }
}
