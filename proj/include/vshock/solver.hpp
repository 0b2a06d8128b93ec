#ifndef VSHOCK_SOLVER_HPP_
#define VSHOCK_SOLVER_HPP_

#include <array>
#include <vector>

#include "vshock/entropy.hpp"
#include "vshock/field.hpp"
#include "vshock/profile.hpp"

namespace vshock {

enum class InitialData { riemann, profile, profile_bump };

// Run description for one simulation in the scaled variables. Fully
// deterministic: no seeds, no wall-clock input.
struct SolverConfig {
  GasParams gas{};
  ShockWave shock{};
  double margin_left = 0.0;   // grid extent left of y = 0 (0 -> max(50, 40/delta))
  double margin_right = 0.0;  // extent right of y = s3*tau_end (0 -> same default)
  double dy = 0.05;
  double cfl_advective = 0.45;
  double cfl_diffusive = 0.4;
  double dtau = 0.0;          // 0 -> largest step allowed by the CFL bounds
  double tau_end = 1.0;
  int output_stride = 100;    // steps between diagnostic rows
  double h_exclusion = 5.0;   // half-width of the excluded window around the shock
  InitialData initial_data = InitialData::riemann;
  double bump_amplitude = 0.01;
  double bump_width = 5.0;
  double bump_center = -10.0;
  double profile_dxi = 0.25;        // reference-wave sample spacing
  double profile_half_width = 0.0;  // 0 -> default_half_width
};

void validate(const SolverConfig& c);

// Grid implied by the config: [-margin_left, s3*tau_end + margin_right] with
// spacing as close to config.dy as an integer node count allows.
Grid solver_grid(const SolverConfig& c);

// Step data: nodes with y < 0 get the left state, y > 0 the right state, a
// node at exactly y = 0 the arithmetic average; tau = 0, X = 0.
Field init_field(const Grid& grid, const ShockWave& shock);

// Conservative tendencies for (v, u, E) with E = R*theta/(gamma-1) + u^2/2,
// from second-order central interface fluxes
//   F_v = u,  F_u = -p + u_y/v,  F_E = -p u + nu theta_y/v + u u_y/v.
// Boundary tendencies are forced to zero (Dirichlet far field). flux_left and
// flux_right hold the first and last interface fluxes, so that
// sum_i interior tendency_i * dy = flux_right - flux_left exactly.
struct Tendency {
  std::vector<double> dv;
  std::vector<double> du;
  std::vector<double> dE;
  std::array<double, 3> flux_left;
  std::array<double, 3> flux_right;
};
Tendency rhs_eval(const Field& field, const GasParams& g);

// One Heun step of (v, u, E) and X together; the shift rate is evaluated at
// both stages. theta is recovered as (gamma-1)(E - u^2/2)/R. Throws
// CflViolation when dtau exceeds the advective or diffusive bound at the
// current state and NonPositiveState when positivity fails after the step.
struct StepStats {
  double xdot1 = 0.0, xdot2 = 0.0;
  std::array<double, 3> flux_diff1{};  // stage-1 (flux_right - flux_left)
  std::array<double, 3> flux_diff2{};
};
Field step(const Field& field, const ProfileSampler& prof, double dtau,
           double delta, const GasParams& g, StepStats* stats = nullptr);

// Componentwise max distance from the inviscid shock (left state for
// y < s3*tau, right state beyond) over nodes with |y - s3*tau| >= h_scaled.
// Throws EmptyRegion when no node qualifies.
double linf_error_away(const Field& field, const ShockWave& shock, double tau,
                       double h_scaled);

// Full run: repeated steps with diagnostics every output_stride steps.
// Deterministic for a given config. Throws DomainOutrun if the shock
// footprint comes within 1.5 intrinsic widths of the right boundary.
struct RunResult {
  std::vector<Ledger> ledgers;
  std::vector<double> away_errors;  // aligned with ledgers
  Field final_field;
  double dtau = 0.0;
  std::array<double, 3> conservation_residual{};  // relative, net of boundary flux
};
RunResult run(const SolverConfig& config);
RunResult run(const SolverConfig& config, const ProfileSampler& prof);

}  // namespace vshock

#endif  // VSHOCK_SOLVER_HPP_
