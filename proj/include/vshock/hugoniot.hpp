#ifndef VSHOCK_HUGONIOT_HPP_
#define VSHOCK_HUGONIOT_HPP_

#include <array>

#include "vshock/gas.hpp"

namespace vshock {

// An admissible 3-shock: end states, speed and strength. After construction
// by solve_left_state the jump residual is below 1e-10 in max norm, the Lax
// inequalities hold, and delta = |p(left) - p(right)|.
struct ShockWave {
  State left;
  State right;
  double s3;     // shock speed, > 0
  double delta;  // pressure jump |p_- - p_+|, >= 0
};

// Positive root of s3^2 = -(p_+ - p_-)/(v_+ - v_-). Throws NonCompressive
// when the radicand is not positive.
double shock_speed(const State& left, const State& right, const GasParams& g);

// The three jump-condition residuals
//   r1 = -s3 (v_+ - v_-) - (u_+ - u_-)
//   r2 = -s3 (u_+ - u_-) + (p_+ - p_-)
//   r3 = -s3 [e_+ + u_+^2/2 - e_- - u_-^2/2] + (p_+ u_+ - p_- u_-)
std::array<double, 3> rh_residual(const State& left, const State& right,
                                  double s3, const GasParams& g);

// Entropy admissibility: lambda3(right) < s3 < lambda3(left), strictly.
bool check_lax(const ShockWave& shock, const GasParams& g);

// Shock strength |p(left) - p(right)|.
double wave_strength(const State& left, const State& right, const GasParams& g);

// Given the right state and a left specific volume v_minus <= v(right),
// solves the jump conditions for (theta_-, s3) by damped Newton iteration
// (u_- is eliminated through u_- = u_+ + s3 (v_+ - v_-)) and assembles the
// shock. Initial guess theta_- = theta_+, s3 = lambda3(right); step halving
// on residual increase; iteration cap 50. Throws InvalidOrdering when
// v_minus > v(right), NewtonDiverged when the residual fails to reach 1e-10.
ShockWave solve_left_state(const State& right, double v_minus, const GasParams& g);

// Convenience wrapper: bisects v_minus so that the assembled shock strength
// hits target_delta within tol.
ShockWave solve_left_state_for_strength(const State& right, double target_delta,
                                        const GasParams& g, double tol = 1e-8);

}  // namespace vshock

#endif  // VSHOCK_HUGONIOT_HPP_
