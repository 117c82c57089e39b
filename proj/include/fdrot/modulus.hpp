#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fdrot/map.hpp"
#include "fdrot/schedule.hpp"

namespace fdrot {

/*!
 * Dyadic chain of balls B_j = B(2^j z0, 2^j z0), j = 0..n, connecting the
 * base point z0 on the positive real axis to unit scale.  Each ball is
 * internally tangent to the next at the origin, so the chain is nested:
 * B_0 c B_1 c ... c B_n.  n is the smallest integer with 2^n z0 >= 1.
 *
 * The chain supports estimates for the family of curves joining the
 * segment E = [z0, 1] to the ray F = (-inf, 0].  Radii are stored in log
 * form so the chain stays usable for base points far below the linear
 * floating-point range.
 */
class BallChain {
 public:
  BallChain(double log_z0, int n) : log_z0_(log_z0), n_(n) {}

  double log_z0() const { return log_z0_; }
  int n() const { return n_; }
  int size() const { return n_ + 1; }
  //! log radius (= log center) of B_j.
  double log_radius(int j) const;
  //! Linear radius of B_j; may underflow to 0 for deep chains.
  double radius(int j) const;

 private:
  double log_z0_;
  int n_;
};

//! Chain for base point z0 in (0,1); throws std::domain_error otherwise.
BallChain build_ball_chain(double z0);
//! Same from log z0 < 0 (usable when z0 underflows a double).
BallChain build_ball_chain_log(double log_z0);

/*!
 * The chain density: 2/r(B_j) on B_j \ B_{j-1} (j = 0: all of B_0), 0
 * outside the union.  Because the balls are nested this is "2 over the
 * radius of the smallest ball containing z".  Linear-space evaluation,
 * intended for chains whose radii are representable.
 */
double rho0_eval(const BallChain& chain, Complex z);

/*!
 * Exact line integral of rho0 along the polyline through `vertices`:
 * each segment is split at its circle crossings, where rho0 is piecewise
 * constant.  Admissibility check: every curve joining E to F must pick
 * up integral >= 1.
 */
double rho0_line_integral(const BallChain& chain,
                          const std::vector<Complex>& vertices);

/*!
 * log of sum_j |B_j| (2/r_j)^s — the full-ball overcount of the rho0
 * power integral used by the Hoelder split.  Equals
 * pi 2^s z0^{2-s} sum_j 2^{j(2-s)} in closed form.
 */
double rho0_power_integral_full(const BallChain& chain, double s);

/*!
 * log of the exact integral of rho0^s: sum over the shells
 * B_j \ B_{j-1} of their true areas times (2/r_j)^s.
 */
double rho0_power_integral_exact(const BallChain& chain, double s);

/*!
 * Same integral by numerical quadrature of the shells' arc length in
 * polar coordinates (oracle for the area formula).
 */
double rho0_power_integral_quad(const BallChain& chain, double s);

/*!
 * log of the increment of the unit-scale angular weight primitive
 * F(x) = int_0^x 2y*arccos(y) dy between the radii e^{d1} and e^{d2}
 * (d1 <= d2, both log offsets relative to the ball scale).  Returns
 * -inf when the interval is empty; uses a series near zero.
 */
double log_fhat_diff(double d1, double d2);

/*!
 * log of the integral of K(z,f)^p over the ball B(0, e^{log_ball_radius})
 * computed region by region from the map's piecewise-constant distortion.
 */
double distortion_p_integral_log(const PiecewiseRadialMap& map, double p,
                                 double log_ball_radius);

/*!
 * log of the exact weighted integral  int K(z,f) rho0(z)^2 dA(z),
 * evaluated shell by shell through the closed-form antiderivative of the
 * polar arc length 2t*arccos(t/a) of an off-center ball.
 */
double weighted_integral_exact(const PiecewiseRadialMap& map,
                               const BallChain& chain);

struct McIntegral {
  double log_value = kNegInf;
  double log_se = kNegInf;
  long long samples = 0;
};

/*!
 * Stratified Monte-Carlo estimate of the same weighted integral (strata =
 * chain shells, sampled at unit scale so deep chains stay representable).
 * Deterministic for a fixed seed.
 */
McIntegral weighted_integral_mc(const PiecewiseRadialMap& map,
                                const BallChain& chain, long long samples,
                                std::uint64_t seed);

/*!
 * Upper estimate for the weighted modulus of the E-to-F family, all
 * parts in log form:
 *   log_upper        Hoelder split ||K||_{L^p(B(0,4))} * (full-ball
 *                    rho0 integral)^{(p-1)/p}
 *   log_direct_*     the direct integral int K rho0^2 (exact and MC),
 *                    which the split must dominate.
 */
struct WeightedModulusReport {
  double p = 0.0;
  double log_k_norm = 0.0;
  double log_rho_full = 0.0;
  double log_rho_exact = 0.0;
  double log_upper = 0.0;
  double log_direct_exact = 0.0;
  double log_direct_mc = kNegInf;
  double log_direct_mc_se = kNegInf;
  long long mc_samples = 0;
};

WeightedModulusReport weighted_modulus_upper(const SchedulePlan& plan,
                                             const BallChain& chain, double p,
                                             long long mc_samples = 0,
                                             std::uint64_t seed = 0);

/*!
 * Winding lower estimate 2 pi n^2 / log(c_f / r_f) for the image-family
 * modulus (0 when the winding count n is 0).  Throws std::domain_error
 * on c_f = r_f with n > 0, or invalid inputs.
 */
double modulus_lower_from_winding(double nz0, double c_f, double r_f);

//! log-space variant; log_n = log of the winding count (-inf for 0).
double modulus_lower_from_winding_log(double log_n, double log_c_f,
                                      double log_r_f);

/*!
 * One bound-chain instance at base point z0:
 *   lower (winding, exact r_f)  <=  upper (Hoelder split)
 * plus the weaker lower bound using the power-law floor
 * r_f >= z0^{alpha_below}, and the winding-count ceiling implied by the
 * chain.  All quantities in log form; `n_winding` additionally carries
 * the linear count when it is representable.
 */
struct BoundChainReport {
  double log_z0 = 0.0;
  double p = 0.0;
  double alpha_below = 0.0;
  double log_n = kNegInf;   //!< log winding count
  double n_winding = 0.0;   //!< linear count (inf if unrepresentable)
  double log_upper = 0.0;
  double log_lower = kNegInf;         //!< with exact r_f
  double log_lower_holder = kNegInf;  //!< with r_f = z0^{alpha_below}
  double log_c_f = 0.0;
  double log_r_f_exact = 0.0;
  double log_r_f_holder = 0.0;
  double log_implied_winding_bound = 0.0;
  bool chain_holds = false;     //!< both lower bounds <= upper
  bool winding_within = false;  //!< n <= implied winding bound
  bool r_f_consistent = false;  //!< r_f_holder <= r_f_exact
  bool pass = false;
  std::string diagnostic;  //!< empty when pass
};

BoundChainReport verify_bound_chain(const PiecewiseRadialMap& map,
                                    const SchedulePlan& plan, double log_z0,
                                    double alpha_below);

}  // namespace fdrot
