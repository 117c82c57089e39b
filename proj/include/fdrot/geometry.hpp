#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>

#include "fdrot/log_space.hpp"

namespace fdrot {

using Complex = std::complex<double>;

/*!
 * Point in log-polar coordinates: the plane point exp(u) * e^{i theta}.
 * Radii in this project shrink like exp(-2^n), far below the smallest
 * positive double, so every radial quantity is carried as its logarithm
 * and angles as unwrapped (lifted) values that are never reduced mod 2 pi.
 */
struct LogPolar {
  double u;      //!< log of the modulus
  double theta;  //!< unwrapped argument

  static LogPolar from_complex(Complex z) {
    return {std::log(std::abs(z)), std::arg(z)};
  }

  Complex to_complex() const {
    const double m = std::exp(u);
    return {m * std::cos(theta), m * std::sin(theta)};
  }
};

/*!
 * Closed annulus r <= |z| <= R about the origin, radii held in log space.
 */
class Annulus {
 public:
  Annulus(double log_r, double log_R) : log_r_(log_r), log_R_(log_R) {
    if (!(log_r < log_R))
      throw std::invalid_argument("Annulus: inner radius must be < outer");
  }

  static Annulus from_radii(double r, double R) {
    if (!(r > 0.0) || !(R > 0.0))
      throw std::invalid_argument("Annulus: radii must be positive");
    return Annulus(std::log(r), std::log(R));
  }

  double log_r() const { return log_r_; }
  double log_R() const { return log_R_; }
  double r() const { return std::exp(log_r_); }
  double R() const { return std::exp(log_R_); }
  /// log(R/r), the conformal width.
  double log_ratio() const { return log_R_ - log_r_; }

 private:
  double log_r_;
  double log_R_;
};

/*!
 * Elementary logarithmic-spiral building block supported on an annulus.
 *
 * The map is the identity outside B(0, R); inside the annulus it twists
 * by alpha * log(|z|/R) while stretching the modulus with exponent q,
 *
 *     z  |->  z * |z/R|^{q-1} * exp(i alpha log(|z|/R)),   r <= |z| <= R,
 *
 * and below the annulus it acts as the rigid similarity obtained by
 * freezing the annulus formula at |z| = r.  q = 1 gives a pure rotation
 * block that leaves every modulus fixed.
 */
struct SpiralStretchBlock {
  Annulus annulus;
  double alpha = 0.0;
  double q = 1.0;
};

/// Block action in log-polar coordinates (exact for any parameter size).
inline LogPolar block_eval_logpolar(const SpiralStretchBlock& b, LogPolar z) {
  const double logR = b.annulus.log_R();
  const double logr = b.annulus.log_r();
  if (z.u > logR) return z;
  const double d = std::max(z.u, logr) - logR;  // log(|z|/R), clamped below
  return {z.u + (b.q - 1.0) * d, z.theta + b.alpha * d};
}

/// Block action on a complex point; fixes the origin.
inline Complex block_eval(const SpiralStretchBlock& b, Complex z) {
  if (z == Complex(0.0, 0.0)) return z;
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
    throw std::domain_error("block_eval: non-finite input");
  const LogPolar w = block_eval_logpolar(b, LogPolar::from_complex(z));
  return w.to_complex();
}

}  // namespace fdrot
