#ifndef VSHOCK_GAS_HPP_
#define VSHOCK_GAS_HPP_

#include <array>
#include <cmath>

#include "vshock/errors.hpp"

namespace vshock {

// Thermodynamic closure of the polytropic gas, p = R*theta/v and
// e = R*theta/(gamma-1). All quantities are dimensionless program units.
struct GasParams {
  double gamma;  // adiabatic exponent, > 1
  double R;      // gas constant, > 0
  double nu;     // scaled heat conductivity, > 0
};

// Fluid state at a point: specific volume, velocity, absolute temperature.
struct State {
  double v;
  double u;
  double theta;
};

inline void validate(const GasParams& g) {
  if (!(g.gamma > 1.0)) throw ValidationError("gas.gamma: must be > 1");
  if (!(g.R > 0.0)) throw ValidationError("gas.R: must be > 0");
  if (!(g.nu > 0.0)) throw ValidationError("gas.nu: must be > 0");
}

inline void validate(const State& s) {
  if (!(s.v > 0.0)) throw NonPositiveState("state.v: must be > 0");
  if (!(s.theta > 0.0)) throw NonPositiveState("state.theta: must be > 0");
}

inline double pressure(const State& s, const GasParams& g) {
  return g.R * s.theta / s.v;
}

inline double internal_energy(double theta, const GasParams& g) {
  return g.R * theta / (g.gamma - 1.0);
}

// Characteristic speeds (lambda1, lambda2, lambda3) = (-c, 0, c) with
// c = sqrt(gamma*R*theta)/v. lambda1 = -lambda3 exactly by construction.
inline std::array<double, 3> eigenvalues(const State& s, const GasParams& g) {
  const double c = std::sqrt(g.gamma * g.R * s.theta) / s.v;
  return {-c, 0.0, c};
}

}  // namespace vshock

#endif  // VSHOCK_GAS_HPP_
