// Jump conditions for the 3-family shock of the 1-D compressible system in
// Lagrangian coordinates. A discontinuity (left | right) moving at speed s
// satisfies
//   -s [v] = [u],   -s [u] = -[p],   -s [e + u^2/2] = -[p u]
// with [f] = f_right - f_left. Eliminating u reduces the system to a scalar
// relation between the end temperatures (the Hugoniot adiabat), which is
// linear in theta_left for the polytropic closure.

#include "vshock/hugoniot.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "vshock/errors.hpp"

namespace vshock {

namespace {

// Residuals of the reduced 2x2 system in x = (theta_-, s3), with u_-
// eliminated through the mass condition:
//   f1 = s3^2 (v_+ - v_-) + (p_+ - p_-)
//   f2 = e_+ - e_- + (p_+ + p_-)(v_+ - v_-)/2
struct Reduced {
  double f1, f2;
};

Reduced reduced_residual(double theta_minus, double s3, const State& right,
                         double v_minus, const GasParams& g) {
  const double p_plus = pressure(right, g);
  const double p_minus = g.R * theta_minus / v_minus;
  const double dv = right.v - v_minus;
  Reduced r;
  r.f1 = s3 * s3 * dv + (p_plus - p_minus);
  r.f2 = internal_energy(right.theta, g) - internal_energy(theta_minus, g) +
         0.5 * (p_plus + p_minus) * dv;
  return r;
}

double max_abs(const Reduced& r) {
  return std::max(std::fabs(r.f1), std::fabs(r.f2));
}

}  // namespace

double shock_speed(const State& left, const State& right, const GasParams& g) {
  const double dv = right.v - left.v;
  const double dp = pressure(right, g) - pressure(left, g);
  if (dv == 0.0 || !(-dp / dv > 0.0)) {
    throw NonCompressive(
        "shock_speed: (p_- - p_+)/(v_+ - v_-) is not positive");
  }
  return std::sqrt(-dp / dv);
}

std::array<double, 3> rh_residual(const State& left, const State& right,
                                  double s3, const GasParams& g) {
  const double p_l = pressure(left, g);
  const double p_r = pressure(right, g);
  const double E_l = internal_energy(left.theta, g) + 0.5 * left.u * left.u;
  const double E_r = internal_energy(right.theta, g) + 0.5 * right.u * right.u;
  return {-s3 * (right.v - left.v) - (right.u - left.u),
          -s3 * (right.u - left.u) + (p_r - p_l),
          -s3 * (E_r - E_l) + (p_r * right.u - p_l * left.u)};
}

bool check_lax(const ShockWave& shock, const GasParams& g) {
  const double lam_l = eigenvalues(shock.left, g)[2];
  const double lam_r = eigenvalues(shock.right, g)[2];
  return lam_r < shock.s3 && shock.s3 < lam_l;
}

double wave_strength(const State& left, const State& right, const GasParams& g) {
  return std::fabs(pressure(left, g) - pressure(right, g));
}

ShockWave solve_left_state(const State& right, double v_minus,
                           const GasParams& g) {
  validate(g);
  validate(right);
  if (!(v_minus > 0.0)) {
    throw NonPositiveState("v_minus: must be > 0");
  }
  if (v_minus > right.v) {
    throw InvalidOrdering("v_minus: exceeds v(right); the 3-shock compresses "
                          "from the right state");
  }
  if (v_minus == right.v) {
    return ShockWave{right, right, eigenvalues(right, g)[2], 0.0};
  }
  // The adiabat leaves the positive-temperature branch at the maximal
  // compression v_- = (gamma-1)/(gamma+1) v_+.
  const double v_lim = (g.gamma - 1.0) / (g.gamma + 1.0) * right.v;
  if (v_minus <= v_lim) {
    throw NonCompressive(
        "v_minus: at or below the maximal-compression volume "
        "(gamma-1)/(gamma+1)*v(right); no positive-temperature left state");
  }

  // Initial guess from the explicit adiabat solution; the iteration then
  // only polishes rounding and guards against regressions in the algebra.
  const double dv0 = right.v - v_minus;
  const double cg = 1.0 / (g.gamma - 1.0);
  double theta_minus = right.theta * (cg + dv0 / (2.0 * right.v)) /
                       (cg - dv0 / (2.0 * v_minus));
  if (!(theta_minus > 0.0)) theta_minus = right.theta;
  double s3 = std::sqrt(std::max(
      (g.R * theta_minus / v_minus - pressure(right, g)) / dv0,
      g.gamma * g.R * right.theta / (right.v * right.v)));
  Reduced res = reduced_residual(theta_minus, s3, right, v_minus, g);
  const double tol = 1e-13 * std::max({1.0, pressure(right, g),
                                       s3 * s3 * right.v});
  const int cap = 50;
  int it = 0;
  for (; it < cap && max_abs(res) > tol; ++it) {
    const double dv = right.v - v_minus;
    const double j11 = -g.R / v_minus;          // d f1 / d theta_-
    const double j12 = 2.0 * s3 * dv;           // d f1 / d s3
    const double j21 = -g.R / (g.gamma - 1.0) +
                       0.5 * (g.R / v_minus) * dv;  // d f2 / d theta_-
    const double det = -j12 * j21;
    if (det == 0.0) {
      throw NewtonDiverged("solve_left_state: singular Jacobian");
    }
    // J dx = -f with J = [[j11, j12], [j21, 0]].
    double d_theta = -res.f2 / j21;
    double d_s3 = (-res.f1 - j11 * d_theta) / j12;

    double step = 1.0;
    Reduced trial{};
    for (int halving = 0; halving < 40; ++halving) {
      const double t_try = theta_minus + step * d_theta;
      const double s_try = s3 + step * d_s3;
      if (t_try > 0.0 && s_try > 0.0) {
        trial = reduced_residual(t_try, s_try, right, v_minus, g);
        if (max_abs(trial) < max_abs(res)) {
          theta_minus = t_try;
          s3 = s_try;
          res = trial;
          break;
        }
      }
      step *= 0.5;
      if (halving == 39) {
        throw NewtonDiverged(
            "solve_left_state: no descent after 40 step halvings");
      }
    }
  }
  if (max_abs(res) > 1e-10) {
    throw NewtonDiverged("solve_left_state: residual " +
                         std::to_string(max_abs(res)) +
                         " after " + std::to_string(it) + " iterations");
  }

  ShockWave w;
  w.right = right;
  w.left = State{v_minus, right.u + s3 * (right.v - v_minus), theta_minus};
  w.s3 = s3;
  w.delta = wave_strength(w.left, w.right, g);
  return w;
}

ShockWave solve_left_state_for_strength(const State& right, double target_delta,
                                        const GasParams& g, double tol) {
  validate(g);
  validate(right);
  if (!(target_delta > 0.0)) {
    throw ValidationError("target_delta: must be > 0");
  }
  if (!(tol > 0.0)) {
    throw ValidationError("tol: must be > 0");
  }
  // Strength decreases monotonically in v_minus, from +inf at the maximal
  // compression to 0 at v_minus = v(right). Bisect on the gap parameter
  // t in (0, 1] with v_minus = v_lim + t (v_+ - v_lim).
  const double v_lim = (g.gamma - 1.0) / (g.gamma + 1.0) * right.v;
  double t_lo = 1e-12;
  double t_hi = 1.0;
  ShockWave best{};
  double best_err = std::numeric_limits<double>::infinity();
  for (int it = 0; it < 200; ++it) {
    const double t = 0.5 * (t_lo + t_hi);
    const double v_minus = v_lim + t * (right.v - v_lim);
    const ShockWave w = solve_left_state(right, v_minus, g);
    const double err = std::fabs(w.delta - target_delta);
    if (err < best_err) {
      best = w;
      best_err = err;
    }
    if (err <= tol || t_hi - t_lo < 1e-16) break;
    if (w.delta > target_delta) {
      t_lo = t;  // too strong: open the gap
    } else {
      t_hi = t;
    }
  }
  if (best_err > tol) {
    throw NewtonDiverged("solve_left_state_for_strength: bisection stalled at "
                         "|delta - target| = " + std::to_string(best_err));
  }
  return best;
}

}  // namespace vshock
