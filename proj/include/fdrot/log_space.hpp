#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace fdrot {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline constexpr double kPosInf = std::numeric_limits<double>::infinity();

/// log(e^a + e^b), safe for -inf operands.
inline double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double hi = std::max(a, b);
  const double lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

/// log(e^a - e^b) for a >= b; returns -inf when a == b.
inline double log_sub(double a, double b) {
  if (b == kNegInf) return a;
  if (a < b) throw std::domain_error("log_sub: negative difference");
  if (a == b) return kNegInf;
  // log(e^a (1 - e^{b-a}))
  return a + std::log1p(-std::exp(b - a));
}

/// log(e^x + e^y) where x, y are logs of the two legs: log hypot(e^x, e^y).
inline double log_hypot(double x, double y) {
  if (x == kNegInf) return y;
  if (y == kNegInf) return x;
  const double hi = std::max(x, y);
  const double lo = std::min(x, y);
  return hi + 0.5 * std::log1p(std::exp(2.0 * (lo - hi)));
}

inline double log_sum_exp(std::span<const double> logs) {
  double m = kNegInf;
  for (double v : logs) m = std::max(m, v);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double v : logs) s += std::exp(v - m);
  return m + std::log(s);
}

/// Signed magnitude in log space: value = sign * exp(log_abs).
/// sign is -1, 0, +1; a zero has sign 0 and log_abs = -inf.
/// Used for rotation offsets, whose linear values can exceed double range.
struct LogSigned {
  double log_abs = kNegInf;
  int sign = 0;

  static LogSigned zero() { return {}; }

  static LogSigned from_value(double v) {
    if (v == 0.0) return {};
    return {std::log(std::fabs(v)), v > 0.0 ? 1 : -1};
  }

  static LogSigned from_log(double log_abs_, int sign_) {
    if (sign_ == 0 || log_abs_ == kNegInf) return {};
    return {log_abs_, sign_ > 0 ? 1 : -1};
  }

  bool is_zero() const { return sign == 0; }

  /// Linear value; +/-inf when exp overflows.
  double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }

  bool representable() const {
    return sign == 0 || log_abs < 709.0;  // exp stays finite below ~709.78
  }

  LogSigned negate() const { return {log_abs, -sign}; }

  /// Multiply by a plain real scalar.
  LogSigned scaled(double c) const {
    if (sign == 0 || c == 0.0) return {};
    int s = sign * (c > 0.0 ? 1 : -1);
    return {log_abs + std::log(std::fabs(c)), s};
  }

  LogSigned operator+(const LogSigned& o) const {
    if (sign == 0) return o;
    if (o.sign == 0) return *this;
    if (sign == o.sign) return {log_add(log_abs, o.log_abs), sign};
    if (log_abs == o.log_abs) return {};
    if (log_abs > o.log_abs) return {log_sub(log_abs, o.log_abs), sign};
    return {log_sub(o.log_abs, log_abs), o.sign};
  }

  LogSigned operator-(const LogSigned& o) const { return *this + o.negate(); }
};

/// Running log-space sum of positive terms.
class LogSumAccumulator {
 public:
  void add_log(double log_term) { total_ = log_add(total_, log_term); }
  double log_total() const { return total_; }

 private:
  double total_ = kNegInf;
};

}  // namespace fdrot
