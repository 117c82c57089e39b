#pragma once

#include <string>
#include <vector>

#include "fdrot/log_space.hpp"

namespace fdrot {

/// Raised when a requested plan cannot satisfy the schedule constraints;
/// carries the name of the constraint that could not be met.
class ConstraintError : public std::runtime_error {
 public:
  ConstraintError(std::string constraint, const std::string& detail)
      : std::runtime_error(constraint + ": " + detail),
        constraint_(std::move(constraint)) {}
  const std::string& constraint() const { return constraint_; }

 private:
  std::string constraint_;
};

/*!
 * Decay gauge h used to modulate the per-annulus rotation rates.
 * Two families:
 *   log-power:  h(r) = min(1, (log(1/r))^{-parameter})
 *   power:      h(r) = r^{parameter}
 * Both are decreasing near 0 with h(r) -> 0.
 */
struct GaugeSpec {
  enum class Family { LogPower, Power };

  Family family = Family::LogPower;
  double parameter = 0.5;

  /// log h(r) given log r (r < 1).
  double log_h(double log_r) const;

  static const char* family_name(Family f);
  static Family family_from_name(const std::string& name);
};

enum class ScheduleMode { RotationOnly, StretchRotation };

const char* mode_name(ScheduleMode m);
ScheduleMode mode_from_name(const std::string& name);

/*!
 * Parameters of one truncated composition: N nested annuli
 * A_n = B(0, R_n) \ B(0, r_n) with R_n = e * r_n exactly, rotation rates
 * alpha_n and stretch exponents q_n (q_n = 1 in rotation-only mode,
 * q_n = log(1/r_n) in stretch-rotation mode).
 *
 * Radii and alphas are held in log space: the greedy schedule makes
 * log(1/r_n) roughly double per step in stretch mode, so the linear
 * values underflow/overflow double long before the log values do.
 */
struct SchedulePlan {
  double p = 2.0;                 //!< integrability exponent, > 1
  int n_blocks = 0;               //!< N
  ScheduleMode mode = ScheduleMode::RotationOnly;
  GaugeSpec gauge;

  std::vector<double> log_r;      //!< log r_n, strictly decreasing
  std::vector<double> log_alpha;  //!< log alpha_n (alpha_n >= 1)
  std::vector<double> q;          //!< q_n >= 1

  /// log R_n; the outer radius is e * r_n, exact in log space.
  double log_R(int n) const { return log_r[n] + 1.0; }

  /// log of the accumulated similarity scale after n blocks:
  /// lambda_n = prod_{j<=n} e^{-(q_j - 1)}.  lambda_0 = 1.
  double log_lambda_after(int n) const;

  /// Accumulated rotation offset after n blocks: mu_n = -sum_{j<=n} alpha_j.
  LogSigned mu_after(int n) const;

  /// sum_{j<n} (q_j - 1), the exponent in the extra radius constraint.
  double sum_q_minus_one_before(int n) const;

  /// log |A_n| = log(pi (e^2 - 1)) + 2 log r_n.
  double log_annulus_area(int n) const;

  /// log of the per-annulus distortion constant
  /// K_n = (|q_n + 1 + i alpha_n| + |q_n - 1 + i alpha_n|)^2 / (4 q_n).
  double log_distortion(int n) const;

  /// Plan truncated to its first n blocks (greedy prefixes are shared).
  SchedulePlan prefix(int n) const;

  std::string to_json_string() const;
  static SchedulePlan from_json_string(const std::string& text);
};

/*!
 * Greedy schedule construction: for each n the radius r_n is the largest
 * value (smallest log(1/r_n)) meeting every constraint, minus a fixed
 * log-space margin of 1/2 so all strict inequalities hold with slack.
 *
 * Constraints: r_1 < 1/e; r_{n+1} < r_n / (2e); h(r_n) < n^{-1/2};
 * alpha_n >= 1; and in stretch mode additionally
 * r_n < exp(-(q_1 + ... + q_{n-1} - (n-1))) and q_n^{p/(2p-1)} < alpha_n.
 *
 * Throws ConstraintError when some constraint can never be met (e.g. a
 * power gauge with parameter >= 1/p keeps alpha_n below 1 forever).
 */
SchedulePlan generate_schedule(double p, int n_blocks, const GaugeSpec& gauge,
                               ScheduleMode mode);

struct ConstraintCheck {
  std::string name;
  bool pass = false;
  /// Smallest margin by which the constraint holds, in log space;
  /// negative when violated.
  double slack_log = 0.0;
};

/// Re-derives every schedule constraint on an existing plan.
std::vector<ConstraintCheck> check_feasibility(const SchedulePlan& plan);

/*!
 * Convergence certificate for a positive series given the logs of its
 * terms.  Geometric verdict when the last term ratio is clearly below 1;
 * near 1 a Raabe-type estimate n (a_n / a_{n+1} - 1) decides (a plain
 * ratio test cannot flag slowly diverging power-law tails).
 */
struct SummabilityVerdict {
  bool convergent = false;
  double tail_ratio = 0.0;   //!< exp(log a_N - log a_{N-1})
  double raabe = 0.0;        //!< last Raabe estimate (0 when unused)
  std::string method;        //!< "ratio", "raabe", or "inconclusive"
};

SummabilityVerdict certify_summability(const std::vector<double>& log_terms);

}  // namespace fdrot
