#ifndef VSHOCK_ENTROPY_HPP_
#define VSHOCK_ENTROPY_HPP_

#include <vector>

#include "vshock/field.hpp"
#include "vshock/profile.hpp"

namespace vshock {

// Phi(z) = z - ln z - 1. Nonnegative, zero only at z = 1, Phi''(1) = 1.
// Throws std::domain_error for z <= 0.
double phi_kernel(double z);

// Relative entropy density against the reference state (V, U, Theta):
//   R*Theta*Phi(v/V) + (u-U)^2/2 + (R*Theta/(gamma-1))*Phi(theta/Theta).
// Nonnegative; zero iff s == ref.
double relative_entropy_density(const State& s, const State& ref, const GasParams& g);

// Weight samples on the profile grid: a = 1 + (p_- - P)/sqrt(delta) with
// derivative a_xi = -P_xi/sqrt(delta). Satisfies 1 <= a <= 1 + sqrt(delta)
// and a_xi > 0 at interior samples.
struct Weight {
  std::vector<double> a;
  std::vector<double> a_xi;
  double delta;
};
Weight make_weight(const Profile& p, const GasParams& g);

// Weight value at a single xi, via profile interpolation.
double weight_at(const Profile& p, double xi, double delta, const GasParams& g);

// Profile-adapted coordinate z = (p_- - P)/delta in [0, 1] together with the
// sup over z in [0.05, 0.95] of
//   |eps*(dz/dxi)/(z(1-z)) - delta*alpha_+*v_+*R*gamma/(nu*(gamma-1)^2 + R*gamma)|
// where nu = kappa/eps of the profile and alpha_+ = ((gamma+1)/(2 gamma))*s3/p_+.
// The rate of the logistic ODE obeyed by z is constant to O(delta^2).
struct ZReport {
  std::vector<double> z;
  double logistic_residual;
};
ZReport z_coordinate(const Profile& p, const GasParams& g);

double alpha_plus(const ShockWave& shock, const GasParams& g);

// The shift-ODE constant
//   M = ((gamma+1)^2/(2 alpha_+ v_+^2)) * (2 nu (gamma-1)^2 + R gamma)/(nu (gamma-1)^2 + R gamma).
double shift_constant(const ShockWave& shock, const GasParams& g);

// Right-hand side of the shift ODE:
//   Xdot = -(M/delta) * Int a^{-X} (-P' V'_y/(s3 V') + U'_y + p_+ Theta'_y/(s3 Theta'))
//                         (u - U') dy
// where primed quantities are the profile evaluated at y - s3 tau - X and the
// integral is trapezoid quadrature over the field grid. Profile derivatives
// are analytic. Throws GridMismatch when the field arrays disagree in size.
double shift_rate(const Field& field, const ProfileSampler& prof, double X,
                  double delta, const GasParams& g);

// One output-time row of the weighted relative-entropy balance.
struct Ledger {
  double tau = 0.0;
  double weighted_entropy = 0.0;   // Int a^{-X} E dy
  double G1 = 0.0;                 // Int a_y^{-X} (s3 p_+/(2 v_+)) (phi + psi/s3)^2 dy
  double G2 = 0.0;                 // Int a_y^{-X} (R/(gamma-1))(s3/(2 theta_+)) (zeta - ((gamma-1)/R) p_+ psi/s3)^2 dy
  double Gs = 0.0;                 // Int |U_y^{-X}| psi^2 dy
  double D1 = 0.0;                 // Int a^{-X} (Theta^{-X}/(v theta)) psi_y^2 dy
  double D2 = 0.0;                 // nu Int a^{-X} (Theta^{-X}/(v theta^2)) zeta_y^2 dy
  double Xdot = 0.0;
  double shift_quadratic = 0.0;    // (delta/M) Xdot^2
  double identity_residual = 0.0;  // |LHS - RHS| of the integrated balance
  double perturb_l2 = 0.0;         // ||(phi, psi, zeta)||_2
  double psi_linf = 0.0;           // ||psi||_inf
};

// Individual terms of the Xdot-coupling group, exposed for debugging only.
struct ShiftCoupling {
  double Y1 = 0.0;
  double Y2 = 0.0;
  double Y3 = 0.0;
};

// Assembles the ledger at the middle snapshot from three consecutive
// snapshots at spacing dtau. The perturbation (phi, psi, zeta) is the field
// minus the shifted profile; its derivatives use centered differences on the
// field grid while the profile derivatives are analytic. identity_residual is
// the defect of the exact integrated balance: the time derivative of the
// weighted entropy (centered difference) plus the flux, shift-coupling and
// kernel source groups, against the boundary fluxes minus diffusion plus the
// exact quadratic source integrals. Throws GridMismatch when the snapshots
// disagree on the grid and NonPositiveState when any v, theta, V, Theta <= 0.
Ledger term_ledger(const Field& field_prev, const Field& field,
                   const Field& field_next, const ProfileSampler& prof,
                   double X, double Xdot, double dtau, double delta,
                   const GasParams& g, ShiftCoupling* coupling = nullptr);

// Both sides of the sharp weighted Poincare inequality on [0, 1]:
//   lhs = Int |f - Int f|^2 dz,  rhs = (1/2) Int z(1-z) |f'|^2 dz.
// f holds N >= 3 samples on the uniform grid including both ends. fprime may
// hold either N-1 per-cell constants (piecewise-linear f) or N nodal samples
// (f' varies linearly inside each cell). Both sides are integrated exactly
// for those input models, so lhs <= rhs holds to rounding.
struct PoincarePair {
  double lhs;
  double rhs;
};
PoincarePair poincare_gap(const std::vector<double>& f,
                          const std::vector<double>& fprime);

}  // namespace vshock

#endif  // VSHOCK_ENTROPY_HPP_
