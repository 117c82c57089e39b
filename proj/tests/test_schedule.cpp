#include <doctest.h>

#include <cmath>
#include <vector>

#include "fdrot/schedule.hpp"

using namespace fdrot;

namespace {
SchedulePlan stretch_plan(double p = 2.0, int n = 12) {
  return generate_schedule(p, n, GaugeSpec{}, ScheduleMode::StretchRotation);
}
SchedulePlan rotation_plan(double p = 2.0, int n = 12) {
  return generate_schedule(p, n, GaugeSpec{}, ScheduleMode::RotationOnly);
}
}  // namespace

TEST_CASE("gauge families evaluate log h") {
  GaugeSpec lp;  // log-power, parameter 1/2
  CHECK(lp.log_h(-4.0) == doctest::Approx(-0.5 * std::log(4.0)).epsilon(1e-15));
  CHECK(lp.log_h(-0.5) == 0.0);  // capped at h = 1
  GaugeSpec pw;
  pw.family = GaugeSpec::Family::Power;
  pw.parameter = 0.25;
  CHECK(pw.log_h(-8.0) == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK(GaugeSpec::family_from_name("log-power") == GaugeSpec::Family::LogPower);
  CHECK(GaugeSpec::family_from_name("power") == GaugeSpec::Family::Power);
  CHECK_THROWS_AS(GaugeSpec::family_from_name("nope"), std::invalid_argument);
  CHECK_THROWS_AS(mode_from_name("nope"), std::invalid_argument);
}

TEST_CASE("generated stretch schedule satisfies its constraints") {
  const SchedulePlan plan = stretch_plan();
  REQUIRE(plan.n_blocks == 12);
  const auto checks = check_feasibility(plan);
  CHECK(!checks.empty());
  for (const auto& c : checks) {
    INFO(c.name, " slack_log=", c.slack_log);
    CHECK(c.pass);
    CHECK(c.slack_log >= 0.0);
  }
  for (int n = 0; n < plan.n_blocks; ++n) {
    CHECK(plan.log_R(n) == plan.log_r[n] + 1.0);
    CHECK(plan.log_alpha[n] >= 0.0);  // alpha_n >= 1
    CHECK(plan.q[n] == doctest::Approx(-plan.log_r[n]).epsilon(1e-15));
    if (n > 0) {
      // r_n < r_{n-1} / (2e)
      CHECK(plan.log_r[n] < plan.log_r[n - 1] - 1.0 - std::log(2.0));
    }
  }
}

TEST_CASE("rotation-only schedule keeps q = 1 and modest radii") {
  const SchedulePlan plan = rotation_plan();
  for (int n = 0; n < plan.n_blocks; ++n) {
    CHECK(plan.q[n] == 1.0);
  }
  // with q = 1 the log-radii grow linearly, not dyadically
  CHECK(plan.log_r.back() > -80.0);
  const auto checks = check_feasibility(plan);
  for (const auto& c : checks) CHECK(c.pass);
}

TEST_CASE("first rotation rate sits exactly on the bound shape") {
  for (const double p : {1.5, 2.0, 4.0}) {
    const SchedulePlan sp = stretch_plan(p, 6);
    const double ell = -sp.log_r[0];
    const double expect =
        sp.gauge.log_h(sp.log_r[0]) + ell / p + 0.5 * std::log(ell);
    CHECK(sp.log_alpha[0] == doctest::Approx(expect).epsilon(1e-14));

    const SchedulePlan rp = rotation_plan(p, 6);
    const double ell_r = -rp.log_r[0];
    CHECK(rp.log_alpha[0] ==
          doctest::Approx(rp.gauge.log_h(rp.log_r[0]) + ell_r / p)
              .epsilon(1e-14));
  }
}

TEST_CASE("accumulated similarity and twist match direct sums") {
  const SchedulePlan plan = stretch_plan(2.0, 8);
  double sum_q = 0.0;
  double sum_alpha = 0.0;
  for (int n = 1; n <= 4; ++n) {
    sum_q += plan.q[n - 1] - 1.0;
    sum_alpha += std::exp(plan.log_alpha[n - 1]);
    CHECK(plan.log_lambda_after(n) == doctest::Approx(-sum_q).epsilon(1e-13));
    // "before" counts array indices: the first n blocks are indices < n
    CHECK(plan.sum_q_minus_one_before(n) ==
          doctest::Approx(sum_q).epsilon(1e-13));
    const LogSigned mu = plan.mu_after(n);
    CHECK(mu.sign == -1);
    CHECK(mu.value() == doctest::Approx(-sum_alpha).epsilon(1e-12));
  }
  CHECK(plan.log_lambda_after(0) == 0.0);
  CHECK(plan.mu_after(0).is_zero());
}

TEST_CASE("annulus area and distortion constants") {
  const SchedulePlan plan = stretch_plan(2.0, 6);
  const double pi = 3.14159265358979323846;
  for (int n = 0; n < plan.n_blocks; ++n) {
    const double expect =
        std::log(pi * (std::exp(2.0) - 1.0)) + 2.0 * plan.log_r[n];
    CHECK(plan.log_annulus_area(n) == doctest::Approx(expect).epsilon(1e-13));
    const double q = plan.q[n];
    const double a = std::exp(plan.log_alpha[n]);
    const double k =
        std::pow(std::hypot(q + 1.0, a) + std::hypot(q - 1.0, a), 2.0) /
        (4.0 * q);
    // linear cross-check only valid while alpha is representable
    if (plan.log_alpha[n] < 300.0) {
      CHECK(plan.log_distortion(n) ==
            doctest::Approx(std::log(k)).epsilon(1e-12));
    }
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(generate_schedule(1.0, 4, GaugeSpec{},
                                    ScheduleMode::RotationOnly),
                  std::invalid_argument);
  CHECK_THROWS_AS(generate_schedule(2.0, -1, GaugeSpec{},
                                    ScheduleMode::RotationOnly),
                  std::invalid_argument);
  GaugeSpec bad;
  bad.parameter = 0.0;
  CHECK_THROWS_AS(generate_schedule(2.0, 4, bad, ScheduleMode::RotationOnly),
                  std::invalid_argument);
}

TEST_CASE("power gauge decaying faster than r^{1/p} is infeasible") {
  GaugeSpec pw;
  pw.family = GaugeSpec::Family::Power;
  pw.parameter = 0.6;  // alpha_n = r^{0.6} r^{-1/2} < 1 for every radius
  CHECK_THROWS_AS(generate_schedule(2.0, 3, pw, ScheduleMode::RotationOnly),
                  ConstraintError);
  try {
    generate_schedule(2.0, 3, pw, ScheduleMode::RotationOnly);
  } catch (const ConstraintError& e) {
    CHECK(!e.constraint().empty());
  }
  // a slower power gauge is fine
  pw.parameter = 0.25;
  const SchedulePlan ok =
      generate_schedule(2.0, 3, pw, ScheduleMode::RotationOnly);
  CHECK(ok.n_blocks == 3);
}

TEST_CASE("prefix shares the parent's leading blocks") {
  const SchedulePlan plan = stretch_plan(2.0, 10);
  const SchedulePlan pre = plan.prefix(4);
  REQUIRE(pre.n_blocks == 4);
  for (int n = 0; n < 4; ++n) {
    CHECK(pre.log_r[n] == plan.log_r[n]);
    CHECK(pre.log_alpha[n] == plan.log_alpha[n]);
    CHECK(pre.q[n] == plan.q[n]);
  }
  CHECK_THROWS_AS(plan.prefix(11), std::invalid_argument);
}

TEST_CASE("plan JSON round trip is canonical") {
  const SchedulePlan plan = stretch_plan(4.0, 7);
  const std::string text = plan.to_json_string();
  const SchedulePlan back = SchedulePlan::from_json_string(text);
  CHECK(back.to_json_string() == text);
  CHECK(back.p == plan.p);
  CHECK(back.n_blocks == plan.n_blocks);
  for (int n = 0; n < plan.n_blocks; ++n) {
    CHECK(back.log_r[n] == plan.log_r[n]);
    CHECK(back.log_alpha[n] == plan.log_alpha[n]);
    CHECK(back.q[n] == plan.q[n]);
  }
}

TEST_CASE("feasibility flags a corrupted plan") {
  SchedulePlan plan = stretch_plan(2.0, 6);
  plan.log_r[1] = plan.log_r[0] - 0.1;  // spacing broken
  bool any_fail = false;
  for (const auto& c : check_feasibility(plan)) any_fail |= !c.pass;
  CHECK(any_fail);
}

TEST_CASE("summability certificates") {
  std::vector<double> geometric, harmonic, square;
  for (int n = 1; n <= 40; ++n) {
    geometric.push_back(-0.7 * n);
    harmonic.push_back(-std::log(static_cast<double>(n)));
    square.push_back(-2.0 * std::log(static_cast<double>(n)));
  }
  const auto g = certify_summability(geometric);
  CHECK(g.convergent);
  CHECK(g.tail_ratio == doctest::Approx(std::exp(-0.7)).epsilon(1e-12));
  const auto h = certify_summability(harmonic);
  CHECK(!h.convergent);
  const auto s = certify_summability(square);
  CHECK(s.convergent);
  CHECK(s.method == "raabe");
}
