#include <doctest.h>

#include <cmath>

#include "fdrot/series.hpp"

using namespace fdrot;

namespace {
constexpr double kPi = 3.14159265358979323846;
}

TEST_CASE("empty plan has norm pi^{1/p}") {
  for (const double p : {1.5, 2.0, 4.0}) {
    SchedulePlan plan;
    plan.p = p;
    const LpNorm norm = distortion_lp_norm(plan);
    CHECK(norm.log_value == doctest::Approx(std::log(kPi) / p).epsilon(1e-15));
    CHECK(norm.value == doctest::Approx(std::pow(kPi, 1.0 / p)).epsilon(1e-14));
  }
}

TEST_CASE("enlarging the ball scales the conformal part") {
  SchedulePlan plan;
  plan.p = 2.0;
  const LpNorm norm = distortion_lp_norm(plan, std::log(4.0));
  CHECK(norm.log_value ==
        doctest::Approx(0.5 * std::log(16.0 * kPi)).epsilon(1e-14));
}

TEST_CASE("norm grows with the block count") {
  const GaugeSpec gauge;
  double prev = -1.0;
  for (int n : {0, 2, 4, 8}) {
    const SchedulePlan plan =
        generate_schedule(2.0, n, gauge, ScheduleMode::StretchRotation);
    const double v = distortion_lp_norm(plan).log_value;
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("series report names every witness for its mode") {
  for (const double p : {1.5, 2.0, 4.0}) {
    for (const ScheduleMode mode :
         {ScheduleMode::RotationOnly, ScheduleMode::StretchRotation}) {
      const SchedulePlan plan = generate_schedule(p, 12, GaugeSpec{}, mode);
      const ConvergenceReport rep = series_report(plan);
      // the rotation-specific witnesses exist only for rotation-only plans
      std::vector<const char*> names = {"df_l1_general", "k_lp_general",
                                        "k_lp_exact"};
      if (mode == ScheduleMode::RotationOnly) {
        names.insert(names.begin(), {"df_l1_rotation", "k_lp_rotation"});
      }
      CHECK(rep.series.size() == names.size());
      CHECK(rep.all_convergent);
      for (const char* name : names) {
        const SeriesEntry& e = rep.find(name);
        CHECK(e.log_terms.size() == 12);
        CHECK(e.verdict.convergent);
        // partial sums are monotone increasing
        for (std::size_t i = 1; i < e.log_partial_sums.size(); ++i) {
          CHECK(e.log_partial_sums[i] >= e.log_partial_sums[i - 1]);
        }
      }
      CHECK_THROWS_AS(rep.find("nonexistent"), std::out_of_range);
    }
  }
}

TEST_CASE("exact series matches the analytic integral") {
  // integral over B(0,1) of K^p = pi + sum |A_n| (K_n^p - 1)
  const SchedulePlan plan =
      generate_schedule(2.0, 8, GaugeSpec{}, ScheduleMode::StretchRotation);
  const ConvergenceReport rep = series_report(plan);
  const SeriesEntry& exact = rep.find("k_lp_exact");
  LogSigned total = LogSigned::from_value(kPi);
  for (int n = 0; n < plan.n_blocks; ++n) {
    total = total + LogSigned::from_log(exact.log_terms[n], 1);
    total = total - LogSigned::from_log(plan.log_annulus_area(n), 1);
  }
  const LpNorm norm = distortion_lp_norm(plan);
  CHECK(norm.log_value ==
        doctest::Approx(total.log_abs / plan.p).epsilon(1e-12));
}

TEST_CASE("monte carlo agrees with the analytic norm") {
  const SchedulePlan plan =
      generate_schedule(2.0, 6, GaugeSpec{}, ScheduleMode::StretchRotation);
  const PiecewiseRadialMap map = compose_schedule(plan);
  const LpNorm analytic = distortion_lp_norm(plan);
  const McEstimate mc = distortion_lp_norm_mc(map, plan.p, 200000, 4242);
  const double analytic_integral = std::exp(plan.p * analytic.log_value);
  CHECK(std::abs(mc.integral - analytic_integral) <=
        3.0 * mc.se + 1e-9 * analytic_integral);
  CHECK(mc.total_samples >= 200000);
  CHECK(mc.norm == doctest::Approx(std::exp(mc.log_norm)));
}

TEST_CASE("monte carlo on the identity has zero variance") {
  const PiecewiseRadialMap id = PiecewiseRadialMap::identity();
  const McEstimate mc = distortion_lp_norm_mc(id, 2.0, 5000, 1);
  CHECK(mc.integral == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(mc.se <= 1e-12);
}

TEST_CASE("monte carlo is deterministic per seed") {
  const SchedulePlan plan =
      generate_schedule(2.0, 4, GaugeSpec{}, ScheduleMode::RotationOnly);
  const PiecewiseRadialMap map = compose_schedule(plan);
  const McEstimate a = distortion_lp_norm_mc(map, 2.0, 20000, 9);
  const McEstimate b = distortion_lp_norm_mc(map, 2.0, 20000, 9);
  const McEstimate c = distortion_lp_norm_mc(map, 2.0, 20000, 10);
  CHECK(a.log_integral == b.log_integral);
  CHECK(a.log_se == b.log_se);
  // the distortion is constant on every stratum, so the stratified mean
  // is exact and another seed lands on the same value
  CHECK(c.log_integral == doctest::Approx(a.log_integral).epsilon(1e-14));
}
