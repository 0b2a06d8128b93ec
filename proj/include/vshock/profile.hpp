#ifndef VSHOCK_PROFILE_HPP_
#define VSHOCK_PROFILE_HPP_

#include <string>
#include <vector>

#include "vshock/hugoniot.hpp"

namespace vshock {

// Sampled viscous traveling wave (V, U, Theta) on a uniform xi-grid spanning
// [-L, L], normalized so that the pressure at xi = 0 equals (p_- + p_+)/2.
// V increases strictly, U and Theta decrease strictly, and
// U[i] = u_+ - s3 (V[i] - v_+) pointwise.
struct Profile {
  std::vector<double> xi;
  std::vector<double> V;
  std::vector<double> U;
  std::vector<double> Theta;
  ShockWave shock;
  double eps;    // viscosity in the traveling-wave equations, > 0
  double kappa;  // heat conductivity in the traveling-wave equations, > 0
};

// Right-hand side of the reduced 2-D traveling-wave system, obtained from the
// first integrals of the wave equations:
//   dV/dxi     = -(V/(eps*s3)) * [s3^2 (V - v_-) + (P - p_-)]
//   dTheta/dxi = (s3*V/kappa) * [-(R/(gamma-1)) (Theta - theta_+)
//                                - p_+ (V - v_+) + (s3^2/2) (V - v_+)^2]
struct ProfileDeriv {
  double dV;
  double dTheta;
};
ProfileDeriv profile_rhs(double V, double Theta, const ShockWave& shock,
                         double eps, double kappa, const GasParams& g);

// Jacobian of profile_rhs with respect to (V, Theta).
struct ProfileJacobian {
  double dV_dV, dV_dTheta;
  double dTheta_dV, dTheta_dTheta;
};
ProfileJacobian profile_rhs_jacobian(double V, double Theta, const ShockWave& shock,
                                     double eps, double kappa, const GasParams& g);

// Solves the connection problem between the two end states: integrates from
// the left fixed point along its unstable eigendirection (offset 1e-6*delta)
// with adaptive 4th/5th-order stepping at relative tolerance 1e-10, shifts
// samples so that the pressure at xi = 0 is (p_- + p_+)/2, and resamples onto
// the uniform grid of N points spanning [-L, L] by cubic interpolation.
// Throws NoUnstableDirection when the left-state Jacobian has no positive
// eigenvalue and EndpointMiss when the grid ends miss the end states by more
// than endpoint_tol.
Profile solve_profile(const ShockWave& shock, double eps, double kappa,
                      double L, int N, const GasParams& g,
                      double endpoint_tol = 1e-6);

// Default half-width for a target endpoint error comfortably below 1e-6
// while the far-tail sample increments stay above double-precision rounding.
double default_half_width(double delta, double eps, double kappa);

// Structure report for a solved profile: monotonicity, fitted exponential
// tail rates (least squares on log|V - v_-+| over the outer 25% of each
// side), the scaled derivative bound max|V_xi|*eps/delta^2, and the two
// speed gaps |s3^2 - gamma p_-+/v_-+|/delta.
struct ProfileReport {
  bool v_increasing;
  bool u_decreasing;
  bool theta_decreasing;
  double left_decay_rate;
  double right_decay_rate;
  double left_endpoint_err;   // max over (V, U, Theta) at xi = -L
  double right_endpoint_err;  // max over (V, U, Theta) at xi = +L
  double max_dV_scaled;       // max|V_xi| * eps / delta^2
  double gap_minus;           // |s3^2 - gamma p_-/v_-| / delta
  double gap_plus;            // |s3^2 - gamma p_+/v_+| / delta
};
ProfileReport verify_profile(const Profile& p, const GasParams& g);

// Max over interior samples (those with |P - p_-| and |P - p_+| both above
// delta*exclusion) of
//   |(V-v_-)/(P-p_-) - (V-v_+)/(P-p_+)
//    - ((gamma+1)/(2 gamma p_+)) * (R eps gamma/(kappa (gamma-1)^2 + R eps gamma)) * (v_+ - v_-)|
// The chord-slope gap of the (P, V) relation is constant to O(delta^2).
double chord_identity_residual(const Profile& p, const GasParams& g,
                               double exclusion = 0.05);

// Fast evaluator for a solved profile. Values by cubic Hermite interpolation
// on the sample grid (analytic endpoint slopes); derivatives from the
// analytic right-hand side at the interpolated point, so the first-integral
// relations hold exactly at every query. Outside the grid the end states are
// returned with zero derivatives.
struct ProfilePoint {
  double V, U, Theta;
  double P;        // R*Theta/V
  double dV;       // dV/dxi
  double dU;       // -s3*dV
  double dTheta;   // dTheta/dxi
  double ddTheta;  // d2Theta/dxi2
  double dP;       // dP/dxi
};

class ProfileSampler {
 public:
  ProfileSampler(const Profile& p, const GasParams& g);

  ProfilePoint operator()(double xi) const;

  const Profile& profile() const { return *profile_; }
  double xi_min() const { return xi0_; }
  double xi_max() const { return xi0_ + dxi_ * static_cast<double>(n_ - 1); }

  // Intrinsic transition width (v_+ - v_-)/max|V_xi|.
  double shock_width() const { return width_; }

 private:
  const Profile* profile_;
  GasParams gas_;
  std::vector<double> dV_;      // analytic dV/dxi at the samples
  std::vector<double> dTheta_;  // analytic dTheta/dxi at the samples
  double xi0_, dxi_;
  int n_;
  double width_;
};

// CSV export/import: columns xi,V,U,Theta, preceded by "# key=value" header
// comments carrying the shock end states, speed, strength, eps and kappa.
void write_profile_csv(const std::string& path, const Profile& p, const GasParams& g);
Profile read_profile_csv(const std::string& path, GasParams* g_out = nullptr);

}  // namespace vshock

#endif  // VSHOCK_PROFILE_HPP_
