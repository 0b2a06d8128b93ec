// Weighted relative-entropy machinery around the shifted traveling wave:
// the weight built from the wave pressure, the shift ODE right-hand side,
// and the term-by-term balance of the weighted entropy. The balance
// assembled by term_ledger is an algebraic consequence of the governing
// equations, so on discrete snapshots its defect measures nothing but the
// discretization error of the fields.

#include "vshock/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "vshock/errors.hpp"

namespace vshock {

double phi_kernel(double z) {
  if (!(z > 0.0)) {
    throw std::domain_error("phi_kernel: argument must be > 0");
  }
  return z - std::log(z) - 1.0;
}

double relative_entropy_density(const State& s, const State& ref,
                                const GasParams& g) {
  const double psi = s.u - ref.u;
  return g.R * ref.theta * phi_kernel(s.v / ref.v) + 0.5 * psi * psi +
         g.R * ref.theta / (g.gamma - 1.0) * phi_kernel(s.theta / ref.theta);
}

Weight make_weight(const Profile& p, const GasParams& g) {
  const double delta = p.shock.delta;
  if (!(delta > 0.0)) throw ValidationError("shock.delta: must be > 0");
  const double p_minus = pressure(p.shock.left, g);
  const double sq = std::sqrt(delta);
  Weight w;
  w.delta = delta;
  w.a.resize(p.xi.size());
  w.a_xi.resize(p.xi.size());
  for (std::size_t i = 0; i < p.xi.size(); ++i) {
    const double P = g.R * p.Theta[i] / p.V[i];
    const ProfileDeriv d =
        profile_rhs(p.V[i], p.Theta[i], p.shock, p.eps, p.kappa, g);
    const double dP = (g.R * d.dTheta - P * d.dV) / p.V[i];
    w.a[i] = 1.0 + (p_minus - P) / sq;
    w.a_xi[i] = -dP / sq;
  }
  return w;
}

double weight_at(const Profile& p, double xi, double delta, const GasParams& g) {
  if (!(delta > 0.0)) throw ValidationError("delta: must be > 0");
  const ProfileSampler sample(p, g);
  const double p_minus = pressure(p.shock.left, g);
  return 1.0 + (p_minus - sample(xi).P) / std::sqrt(delta);
}

double alpha_plus(const ShockWave& shock, const GasParams& g) {
  const double p_plus = pressure(shock.right, g);
  return (g.gamma + 1.0) / (2.0 * g.gamma) * shock.s3 / p_plus;
}

double shift_constant(const ShockWave& shock, const GasParams& g) {
  const double gm1 = g.gamma - 1.0;
  const double ap = alpha_plus(shock, g);
  const double v_plus = shock.right.v;
  return (g.gamma + 1.0) * (g.gamma + 1.0) / (2.0 * ap * v_plus * v_plus) *
         (2.0 * g.nu * gm1 * gm1 + g.R * g.gamma) /
         (g.nu * gm1 * gm1 + g.R * g.gamma);
}

ZReport z_coordinate(const Profile& p, const GasParams& g) {
  const double delta = p.shock.delta;
  if (!(delta > 0.0)) throw ValidationError("shock.delta: must be > 0");
  const double p_minus = pressure(p.shock.left, g);
  const double nu_wave = p.kappa / p.eps;
  const double gm1 = g.gamma - 1.0;
  const double rate = delta * alpha_plus(p.shock, g) * p.shock.right.v *
                      g.R * g.gamma / (nu_wave * gm1 * gm1 + g.R * g.gamma);
  ZReport rep;
  rep.z.resize(p.xi.size());
  double worst = -1.0;
  for (std::size_t i = 0; i < p.xi.size(); ++i) {
    const double P = g.R * p.Theta[i] / p.V[i];
    const double z = (p_minus - P) / delta;
    rep.z[i] = z;
    if (z < 0.05 || z > 0.95) continue;
    const ProfileDeriv d =
        profile_rhs(p.V[i], p.Theta[i], p.shock, p.eps, p.kappa, g);
    const double dP = (g.R * d.dTheta - P * d.dV) / p.V[i];
    const double dz = -dP / delta;
    worst = std::max(worst, std::fabs(p.eps * dz / (z * (1.0 - z)) - rate));
  }
  if (worst < 0.0) {
    throw EmptyRegion("z_coordinate: no samples with z in [0.05, 0.95]");
  }
  rep.logistic_residual = worst;
  return rep;
}

namespace {

void check_field(const Field& f, const char* which) {
  const std::size_t n = static_cast<std::size_t>(f.grid.N);
  if (f.v.size() != n || f.u.size() != n || f.theta.size() != n) {
    throw GridMismatch(std::string("field arrays of ") + which +
                       " disagree with the grid size");
  }
}

// Centered interior difference, one-sided second-order at the ends.
double diff1(const std::vector<double>& w, int i, int n, double dy) {
  if (i == 0) return (-3.0 * w[0] + 4.0 * w[1] - w[2]) / (2.0 * dy);
  if (i == n - 1)
    return (3.0 * w[n - 1] - 4.0 * w[n - 2] + w[n - 3]) / (2.0 * dy);
  return (w[i + 1] - w[i - 1]) / (2.0 * dy);
}

}  // namespace

double shift_rate(const Field& field, const ProfileSampler& prof, double X,
                  double delta, const GasParams& g) {
  check_field(field, "field");
  if (!(delta > 0.0)) throw ValidationError("delta: must be > 0");
  const ShockWave& shock = prof.profile().shock;
  const double s3 = shock.s3;
  const double p_minus = pressure(shock.left, g);
  const double p_plus = pressure(shock.right, g);
  const double sq = std::sqrt(delta);
  const double M = shift_constant(shock, g);
  const int n = field.grid.N;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    const double y = grid_y(field.grid, i);
    const ProfilePoint q = prof(y - s3 * field.tau - X);
    const double a = 1.0 + (p_minus - q.P) / sq;
    const double kernel = -q.P * q.dV / (s3 * q.V) + q.dU +
                          p_plus * q.dTheta / (s3 * q.Theta);
    const double wgt = (i == 0 || i == n - 1) ? 0.5 : 1.0;
    acc += wgt * a * kernel * (field.u[i] - q.U);
  }
  acc *= field.grid.dy;
  return -(M / delta) * acc;
}

Ledger term_ledger(const Field& field_prev, const Field& field,
                   const Field& field_next, const ProfileSampler& prof,
                   double X, double Xdot, double dtau, double delta,
                   const GasParams& g, ShiftCoupling* coupling) {
  check_field(field_prev, "field_prev");
  check_field(field, "field");
  check_field(field_next, "field_next");
  if (!same_grid(field_prev.grid, field.grid) ||
      !same_grid(field_next.grid, field.grid)) {
    throw GridMismatch("term_ledger: snapshots disagree on the grid");
  }
  if (!(dtau > 0.0)) throw ValidationError("dtau: must be > 0");
  if (!(delta > 0.0)) throw ValidationError("delta: must be > 0");

  const ShockWave& shock = prof.profile().shock;
  const double s3 = shock.s3;
  const double gm1 = g.gamma - 1.0;
  const double nu = g.nu;
  const double p_minus = pressure(shock.left, g);
  const double p_plus = pressure(shock.right, g);
  const double v_plus = shock.right.v;
  const double theta_plus = shock.right.theta;
  const double sq = std::sqrt(delta);
  const int n = field.grid.N;
  const double dy = field.grid.dy;

  // Weighted entropy of one snapshot against the profile shifted by its own X.
  auto weighted_entropy = [&](const Field& f) {
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const double y = grid_y(f.grid, i);
      const ProfilePoint q = prof(y - s3 * f.tau - f.X);
      if (!(f.v[i] > 0.0 && f.theta[i] > 0.0)) {
        throw NonPositiveState("term_ledger: snapshot has v or theta <= 0");
      }
      const double a = 1.0 + (p_minus - q.P) / sq;
      const double E = relative_entropy_density(
          State{f.v[i], f.u[i], f.theta[i]}, State{q.V, q.U, q.Theta}, g);
      acc += ((i == 0 || i == n - 1) ? 0.5 : 1.0) * a * E;
    }
    return acc * dy;
  };

  // Middle-snapshot pointwise data.
  std::vector<ProfilePoint> q(n);
  std::vector<double> phi(n), psi(n), zeta(n);
  for (int i = 0; i < n; ++i) {
    const double y = grid_y(field.grid, i);
    q[i] = prof(y - s3 * field.tau - X);
    if (!(field.v[i] > 0.0 && field.theta[i] > 0.0)) {
      throw NonPositiveState("term_ledger: field has v or theta <= 0");
    }
    phi[i] = field.v[i] - q[i].V;
    psi[i] = field.u[i] - q[i].U;
    zeta[i] = field.theta[i] - q[i].Theta;
  }

  Ledger row;
  row.tau = field.tau;
  row.Xdot = Xdot;

  double W_mid = 0.0;
  double T2 = 0.0, I4 = 0.0, I5 = 0.0, I6 = 0.0, I7 = 0.0, I8 = 0.0;
  double B4 = 0.0, B5 = 0.0, B6 = 0.0, B7 = 0.0;
  double Y1 = 0.0, Y2 = 0.0;
  double l2 = 0.0;

  for (int i = 0; i < n; ++i) {
    const double v = field.v[i];
    const double th = field.theta[i];
    const double a = 1.0 + (p_minus - q[i].P) / sq;
    const double a_y = -q[i].dP / sq;
    const double p = g.R * th / v;
    const double E = relative_entropy_density(
        State{v, field.u[i], th}, State{q[i].V, q[i].U, q[i].Theta}, g);
    const double psi_y = diff1(psi, i, n, dy);
    const double zeta_y = diff1(zeta, i, n, dy);
    const double w = ((i == 0 || i == n - 1) ? 0.5 : 1.0) * dy;

    const double lin1 = phi[i] + psi[i] / s3;
    const double lin2 = zeta[i] - gm1 / g.R * p_plus * psi[i] / s3;
    const double phi_v = phi_kernel(v / q[i].V);          // Phi(v/V)
    const double phi_tf = phi_kernel(th / q[i].Theta);    // Phi(theta/Theta)
    const double phi_ft = phi_kernel(q[i].Theta / th);    // Phi(Theta/theta)

    W_mid += w * a * E;
    row.G1 += w * a_y * s3 * p_plus / (2.0 * v_plus) * lin1 * lin1;
    row.G2 += w * a_y * g.R / gm1 * s3 / (2.0 * theta_plus) * lin2 * lin2;
    row.Gs += w * std::fabs(q[i].dU) * psi[i] * psi[i];
    row.D1 += w * a * q[i].Theta / (v * th) * psi_y * psi_y;
    row.D2 += w * nu * a * q[i].Theta / (v * th * th) * zeta_y * zeta_y;

    T2 += w * a_y * (s3 * E - (p - q[i].P) * psi[i]);
    I4 += w * a_y * E;
    I5 += w * a * (q[i].P / v * phi[i] * q[i].dV + psi[i] * q[i].dU +
                   zeta[i] / th * g.R * q[i].dTheta / gm1);
    I6 += w * a * (q[i].P * phi[i] * phi[i] * q[i].dV / (q[i].V * v) -
                   phi_v * g.R * q[i].dTheta +
                   phi_ft * g.R * q[i].dTheta / gm1);
    I7 += w * a * q[i].dU * q[i].P *
          (phi_kernel(q[i].V * th / (q[i].Theta * v)) + g.gamma * phi_v);
    const double Ty =
        (q[i].ddTheta * q[i].V - q[i].dTheta * q[i].dV) / (q[i].V * q[i].V);
    I8 += w * a * (nu * Ty + q[i].dU * q[i].dU / q[i].V) *
          (gm1 * phi_v - phi_ft);

    B4 += w * a *
          (q[i].dU * phi[i] * psi_y / (q[i].V * v) +
           2.0 * q[i].dU * zeta[i] * psi_y / (v * th) +
           nu * q[i].dTheta * zeta[i] * zeta_y / (v * th * th) +
           nu * q[i].Theta / q[i].V * q[i].dTheta * phi[i] * zeta_y /
               (v * th * th));
    B5 += w * a *
          (q[i].dU * q[i].dU / q[i].V * phi[i] * zeta[i] / (v * th) +
           nu * q[i].dTheta * q[i].dTheta / q[i].V * phi[i] * zeta[i] /
               (v * th * th));
    B6 += w * a_y * (psi[i] * psi_y / v + nu * zeta[i] * zeta_y / (v * th));
    B7 += w * a_y *
          (q[i].dU / q[i].V * phi[i] * psi[i] / v +
           nu * q[i].dTheta / q[i].V * phi[i] * zeta[i] / (v * th));

    Y1 += w * a *
          (q[i].P / q[i].V * lin1 * q[i].dV +
           g.R / gm1 * lin2 * q[i].dTheta / q[i].Theta);
    Y2 += -w * a * q[i].dTheta * (g.R * phi_v + g.R / gm1 * phi_tf);

    l2 += w * (phi[i] * phi[i] + psi[i] * psi[i] + zeta[i] * zeta[i]);
    row.psi_linf = std::max(row.psi_linf, std::fabs(psi[i]));
  }

  row.weighted_entropy = W_mid;
  row.perturb_l2 = std::sqrt(l2);
  const double M = shift_constant(shock, g);
  row.shift_quadratic = delta / M * Xdot * Xdot;

  const double T1 =
      (weighted_entropy(field_next) - weighted_entropy(field_prev)) /
      (2.0 * dtau);

  // Boundary evaluations for the two flux terms.
  auto boundary = [&](int i, double* jump_lhs, double* jump_rhs) {
    const double a = 1.0 + (p_minus - q[i].P) / sq;
    const double v = field.v[i];
    const double th = field.theta[i];
    const double p = g.R * th / v;
    const double u_y = diff1(field.u, i, n, dy);
    const double theta_y = diff1(field.theta, i, n, dy);
    *jump_lhs = a * (p - q[i].P) * psi[i];
    *jump_rhs = a * ((u_y / v - q[i].dU / q[i].V) * psi[i] +
                     nu * (theta_y / v - q[i].dTheta / q[i].V) * zeta[i] / th);
  };
  double lhsL, rhsL, lhsR, rhsR;
  boundary(0, &lhsL, &rhsL);
  boundary(n - 1, &lhsR, &rhsR);

  const double lhs = T1 + T2 + (lhsR - lhsL) + Xdot * I4 - Xdot * I5 -
                     Xdot * I6 + I7 - I8;
  const double rhs =
      (rhsR - rhsL) - row.D1 - row.D2 + B4 - B5 - B6 + B7;
  row.identity_residual = std::fabs(lhs - rhs);

  if (coupling) {
    coupling->Y1 = Y1;
    coupling->Y2 = Y2;
    coupling->Y3 = -I4;
  }
  return row;
}

PoincarePair poincare_gap(const std::vector<double>& f,
                          const std::vector<double>& fprime) {
  const std::size_t n = f.size();
  if (n < 3) throw GridMismatch("poincare_gap: f needs at least 3 samples");
  const bool nodal = fprime.size() == n;
  if (!nodal && fprime.size() != n - 1) {
    throw GridMismatch("poincare_gap: fprime must hold N-1 cell values or N "
                       "nodal values");
  }
  const double dz = 1.0 / static_cast<double>(n - 1);

  // Mean and second moment of the piecewise-linear interpolant, exactly.
  double mean = 0.0, second = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    mean += 0.5 * dz * (f[k] + f[k + 1]);
    second += dz / 3.0 * (f[k] * f[k] + f[k] * f[k + 1] + f[k + 1] * f[k + 1]);
  }
  PoincarePair pair;
  pair.lhs = second - mean * mean;

  // Weighted derivative energy. z(1-z)|f'|^2 is a polynomial of degree <= 4
  // on each cell; three-point Gauss quadrature integrates it exactly.
  static const double gx[3] = {-0.7745966692414834, 0.0, 0.7745966692414834};
  static const double gw[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  double rhs = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double z0 = dz * static_cast<double>(k);
    for (int m = 0; m < 3; ++m) {
      const double t = 0.5 * (gx[m] + 1.0);
      const double z = z0 + t * dz;
      const double fp = nodal ? (1.0 - t) * fprime[k] + t * fprime[k + 1]
                              : fprime[k];
      rhs += 0.5 * dz * gw[m] * z * (1.0 - z) * fp * fp;
    }
  }
  pair.rhs = 0.5 * rhs;
  return pair;
}

}  // namespace vshock
