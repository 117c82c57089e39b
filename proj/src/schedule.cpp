#include "fdrot/schedule.hpp"

#include <algorithm>
#include <cmath>

#include "fdrot/io.hpp"

namespace fdrot {

namespace {

constexpr double kLog2 = 0.6931471805599453;
/// Fixed log-space margin added to every binding lower bound so the
/// strict schedule inequalities hold with slack.
constexpr double kGreedyMargin = 0.5;
constexpr double kScanStep = 0.25;
constexpr double kScanCap = 1.0e7;

}  // namespace

double GaugeSpec::log_h(double log_r) const {
  switch (family) {
    case Family::LogPower: {
      const double ell = -log_r;
      if (ell <= 1.0) return 0.0;  // min(1, ell^{-s}) caps at 1
      return -parameter * std::log(ell);
    }
    case Family::Power:
      return parameter * log_r;
  }
  throw std::logic_error("GaugeSpec: unknown family");
}

const char* GaugeSpec::family_name(Family f) {
  return f == Family::LogPower ? "log-power" : "power";
}

GaugeSpec::Family GaugeSpec::family_from_name(const std::string& name) {
  if (name == "log-power") return Family::LogPower;
  if (name == "power") return Family::Power;
  throw std::invalid_argument("unknown gauge family: " + name);
}

const char* mode_name(ScheduleMode m) {
  return m == ScheduleMode::RotationOnly ? "rotation-only" : "stretch-rotation";
}

ScheduleMode mode_from_name(const std::string& name) {
  if (name == "rotation-only") return ScheduleMode::RotationOnly;
  if (name == "stretch-rotation") return ScheduleMode::StretchRotation;
  throw std::invalid_argument("unknown schedule mode: " + name);
}

double SchedulePlan::log_lambda_after(int n) const {
  double s = 0.0;
  for (int j = 0; j < n; ++j) s += q[j] - 1.0;
  return -s;
}

LogSigned SchedulePlan::mu_after(int n) const {
  LogSigned mu;
  for (int j = 0; j < n; ++j)
    mu = mu + LogSigned::from_log(log_alpha[j], -1);
  return mu;
}

double SchedulePlan::sum_q_minus_one_before(int n) const {
  return -log_lambda_after(n);
}

double SchedulePlan::log_annulus_area(int n) const {
  // |A_n| = pi (R_n^2 - r_n^2) = pi (e^2 - 1) r_n^2
  static const double log_pi_e2m1 = std::log(M_PI * (M_E * M_E - 1.0));
  return log_pi_e2m1 + 2.0 * log_r[n];
}

double SchedulePlan::log_distortion(int n) const {
  const double qq = q[n];
  const double la = log_alpha[n];
  const double log_a = log_hypot(std::log(qq + 1.0), la);
  const double log_b =
      log_hypot(qq == 1.0 ? kNegInf : std::log(std::fabs(qq - 1.0)), la);
  return 2.0 * log_add(log_a, log_b) - std::log(4.0 * qq);
}

SchedulePlan SchedulePlan::prefix(int n) const {
  if (n < 0 || n > n_blocks)
    throw std::invalid_argument("SchedulePlan::prefix: bad length");
  SchedulePlan out = *this;
  out.n_blocks = n;
  out.log_r.resize(n);
  out.log_alpha.resize(n);
  out.q.resize(n);
  return out;
}

namespace {

/// log alpha_n as a function of ell = log(1/r_n).
double log_alpha_of(double ell, double p, const GaugeSpec& gauge,
                    ScheduleMode mode) {
  double v = gauge.log_h(-ell) + ell / p;
  if (mode == ScheduleMode::StretchRotation) v += 0.5 * std::log(ell);
  return v;
}

struct CandidateCheck {
  bool ok;
  const char* failed;
};

CandidateCheck candidate_ok(double ell, double p, const GaugeSpec& gauge,
                            ScheduleMode mode) {
  const double la = log_alpha_of(ell, p, gauge, mode);
  if (!(la >= 0.0)) return {false, "alpha_at_least_one"};
  if (mode == ScheduleMode::StretchRotation) {
    // q_n^{p/(2p-1)} < alpha_n with q_n = ell
    if (!((p / (2.0 * p - 1.0)) * std::log(ell) < la))
      return {false, "q_alpha_power"};
  }
  return {true, nullptr};
}

}  // namespace

SchedulePlan generate_schedule(double p, int n_blocks, const GaugeSpec& gauge,
                               ScheduleMode mode) {
  if (!(p > 1.0)) throw std::invalid_argument("generate_schedule: need p > 1");
  if (n_blocks < 0)
    throw std::invalid_argument("generate_schedule: negative block count");
  if (!(gauge.parameter > 0.0))
    throw std::invalid_argument("generate_schedule: gauge parameter must be > 0");

  SchedulePlan plan;
  plan.p = p;
  plan.n_blocks = n_blocks;
  plan.mode = mode;
  plan.gauge = gauge;

  double sum_q_minus_one = 0.0;
  for (int n = 1; n <= n_blocks; ++n) {
    // Closed-form lower bounds on ell_n = log(1/r_n).
    double base = (n == 1) ? 1.0
                           : -plan.log_r[n - 2] + 1.0 + kLog2;  // r_n < r_{n-1}/(2e)
    if (gauge.family == GaugeSpec::Family::LogPower) {
      base = std::max(base, std::pow(static_cast<double>(n),
                                     1.0 / (2.0 * gauge.parameter)));
      base = std::max(base, 1.0);  // keeps h(r_n) = ell^{-s} strictly below 1
    } else {
      base = std::max(base, std::log(static_cast<double>(n)) /
                                (2.0 * gauge.parameter));
    }
    if (mode == ScheduleMode::StretchRotation)
      base = std::max(base, sum_q_minus_one);

    // Scan for the transcendental constraints; they hold for all larger
    // ell once e^{ell/p} dominates, so the first passing grid value wins.
    double cand = base;
    CandidateCheck chk = candidate_ok(cand + kGreedyMargin, p, gauge, mode);
    while (!chk.ok) {
      cand += kScanStep;
      if (cand > kScanCap)
        throw ConstraintError(chk.failed,
                              "not satisfiable for p=" + std::to_string(p) +
                                  " with the requested gauge");
      chk = candidate_ok(cand + kGreedyMargin, p, gauge, mode);
    }

    const double ell = cand + kGreedyMargin;
    plan.log_r.push_back(-ell);
    const double qn = (mode == ScheduleMode::StretchRotation) ? ell : 1.0;
    plan.q.push_back(qn);
    plan.log_alpha.push_back(log_alpha_of(ell, p, gauge, mode));
    sum_q_minus_one += qn - 1.0;
  }
  return plan;
}

SummabilityVerdict certify_summability(const std::vector<double>& log_terms) {
  SummabilityVerdict v;
  const std::size_t m = log_terms.size();
  if (m < 2) {
    v.convergent = true;
    v.method = "trivial";
    return v;
  }
  v.tail_ratio = std::exp(log_terms[m - 1] - log_terms[m - 2]);
  if (v.tail_ratio < 0.95) {
    v.convergent = true;
    v.method = "ratio";
    return v;
  }
  if (v.tail_ratio >= 1.0) {
    v.convergent = false;
    v.method = "ratio";
    return v;
  }
  // Ratio close to 1: power-law tail a_n ~ n^{-rho}.  Raabe's estimate
  // n (a_n / a_{n+1} - 1) -> rho decides where the plain ratio test cannot.
  const double n = static_cast<double>(m - 1);
  v.raabe = n * (std::exp(log_terms[m - 2] - log_terms[m - 1]) - 1.0);
  v.method = "raabe";
  v.convergent = v.raabe > 1.05;
  return v;
}

std::vector<ConstraintCheck> check_feasibility(const SchedulePlan& plan) {
  std::vector<ConstraintCheck> out;
  const int n_b = plan.n_blocks;
  const bool stretch = plan.mode == ScheduleMode::StretchRotation;
  auto add = [&out](const std::string& name, double slack) {
    out.push_back({name, slack > 0.0, slack});
  };

  if (n_b == 0) {
    add("r1_below_1_over_e", kPosInf);
    return out;
  }

  auto ell = [&plan](int i) { return -plan.log_r[i]; };

  add("r1_below_1_over_e", ell(0) - 1.0);

  double step_slack = kPosInf;
  for (int i = 1; i < n_b; ++i)
    step_slack = std::min(step_slack, ell(i) - ell(i - 1) - 1.0 - kLog2);
  if (n_b > 1) add("radius_step", step_slack);

  double decay_slack = kPosInf;
  for (int i = 0; i < n_b; ++i) {
    const double bound = -0.5 * std::log(static_cast<double>(i + 1));
    decay_slack = std::min(decay_slack, bound - plan.gauge.log_h(plan.log_r[i]));
  }
  add("gauge_decay", decay_slack);

  double alpha_slack = kPosInf;
  for (int i = 0; i < n_b; ++i)
    alpha_slack = std::min(alpha_slack, plan.log_alpha[i]);
  add("alpha_at_least_one", alpha_slack);

  double formula_dev = 0.0;
  for (int i = 0; i < n_b; ++i) {
    const double expect = plan.gauge.log_h(plan.log_r[i]) + ell(i) / plan.p +
                          (stretch ? 0.5 * std::log(ell(i)) : 0.0);
    formula_dev = std::max(formula_dev, std::fabs(plan.log_alpha[i] - expect));
  }
  add("alpha_formula", 1.0e-9 - formula_dev);

  double q_dev = 0.0;
  for (int i = 0; i < n_b; ++i) {
    const double expect = stretch ? ell(i) : 1.0;
    q_dev = std::max(q_dev, std::fabs(plan.q[i] - expect) /
                                std::max(1.0, expect));
  }
  add(stretch ? "q_formula" : "q_is_one", 1.0e-9 - q_dev);

  if (stretch) {
    double extra_slack = kPosInf;
    double sum = 0.0;
    for (int i = 0; i < n_b; ++i) {
      extra_slack = std::min(extra_slack, ell(i) - sum);
      sum += plan.q[i] - 1.0;
    }
    add("radius_extra_decay", extra_slack);

    double power_slack = kPosInf;
    for (int i = 0; i < n_b; ++i)
      power_slack = std::min(
          power_slack, plan.log_alpha[i] - (plan.p / (2.0 * plan.p - 1.0)) *
                                               std::log(plan.q[i]));
    add("q_alpha_power", power_slack);
  }

  {
    std::vector<double> log_terms;
    log_terms.reserve(n_b);
    for (int i = 0; i < n_b; ++i)
      log_terms.push_back(2.0 * plan.p * plan.gauge.log_h(plan.log_r[i]));
    const SummabilityVerdict v = certify_summability(log_terms);
    double slack;
    if (v.method == "trivial")
      slack = kPosInf;
    else if (v.method == "ratio")
      slack = 1.0 - v.tail_ratio;
    else
      slack = v.raabe - 1.0;
    out.push_back({"gauge_summability", v.convergent, slack});
  }

  return out;
}

std::string SchedulePlan::to_json_string() const {
  ordered_json j;
  j["p"] = p;
  j["n_blocks"] = n_blocks;
  j["mode"] = mode_name(mode);
  j["gauge"] = {{"family", GaugeSpec::family_name(gauge.family)},
                {"parameter", gauge.parameter}};
  auto log_list = [](const std::vector<double>& v) {
    ordered_json a = ordered_json::array();
    for (double x : v) a.push_back(log_value_json(x));
    return a;
  };
  j["r"] = log_list(log_r);
  std::vector<double> log_R_list(log_r);
  for (double& x : log_R_list) x += 1.0;
  j["R"] = log_list(log_R_list);
  j["alpha"] = log_list(log_alpha);
  // q is a bounded exponent; plain storage round-trips it exactly
  j["q"] = q;
  return j.dump(2) + "\n";
}

SchedulePlan SchedulePlan::from_json_string(const std::string& text) {
  const ordered_json j = ordered_json::parse(text);
  SchedulePlan plan;
  plan.p = j.at("p").get<double>();
  plan.n_blocks = j.at("n_blocks").get<int>();
  plan.mode = mode_from_name(j.at("mode").get<std::string>());
  plan.gauge.family =
      GaugeSpec::family_from_name(j.at("gauge").at("family").get<std::string>());
  plan.gauge.parameter = j.at("gauge").at("parameter").get<double>();
  auto read_logs = [&j](const char* key) {
    std::vector<double> v;
    for (const auto& e : j.at(key)) v.push_back(log_value_from_json(e));
    return v;
  };
  plan.log_r = read_logs("r");
  plan.log_alpha = read_logs("alpha");
  for (const auto& e : j.at("q")) {
    // plain numbers are authoritative; log-form objects are tolerated
    plan.q.push_back(e.is_object() ? std::exp(log_value_from_json(e))
                                   : e.get<double>());
  }
  if (static_cast<int>(plan.log_r.size()) != plan.n_blocks ||
      static_cast<int>(plan.log_alpha.size()) != plan.n_blocks ||
      static_cast<int>(plan.q.size()) != plan.n_blocks)
    throw std::invalid_argument("plan JSON: list lengths disagree with n_blocks");
  return plan;
}

}  // namespace fdrot
