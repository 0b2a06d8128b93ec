// Relative entropy, weight, shift machinery, the integrated balance at an
// exact traveling wave, and the weighted Poincare inequality.
//
// Frozen constants for the standard shock (gamma = 5/3, R = 1, right state
// (1, 0, 1), delta = 5/26, nu = 1), derived by hand:
//   alpha_+ = ((gamma+1)/(2 gamma)) s3/p_+        = (4/5) * 5/sqrt(13)
//   M       = (8 sqrt(13)/9) * (23/19)            = 184 sqrt(13)/171
//   logistic rate = delta alpha_+ v_+ R gamma/(nu (gamma-1)^2 + R gamma)
//                 = delta * alpha_+ * 15/19

#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "vshock/entropy.hpp"
#include "vshock/errors.hpp"
#include "vshock/field.hpp"
#include "vshock/profile.hpp"

using namespace vshock;

namespace {

const GasParams kGas{5.0 / 3.0, 1.0, 1.0};

const Profile& reference_profile() {
  static const Profile p = [] {
    const ShockWave w = solve_left_state(State{1.0, 0.0, 1.0}, 0.9, kGas);
    const double L = default_half_width(w.delta, 1.0, 1.0);
    const int N = static_cast<int>(std::lround(2.0 * L / 0.25)) + 1;
    return solve_profile(w, 1.0, 1.0, L, N, kGas);
  }();
  return p;
}

}  // namespace

TEST_CASE("entropy kernel is a parabola near one and guards its domain") {
  CHECK(phi_kernel(1.0) == 0.0);
  CHECK(phi_kernel(2.0) == doctest::Approx(1.0 - std::log(2.0)).epsilon(1e-15));
  for (double h : {1e-3, -1e-3, 5e-4}) {
    // Phi(1+h) = h^2/2 - h^3/3 + O(h^4)
    CHECK(phi_kernel(1.0 + h) ==
          doctest::Approx(h * h / 2.0 - h * h * h / 3.0).epsilon(1e-8));
  }
  CHECK(phi_kernel(0.3) > 0.0);
  CHECK(phi_kernel(3.7) > 0.0);
  CHECK_THROWS_AS(phi_kernel(0.0), std::domain_error);
  CHECK_THROWS_AS(phi_kernel(-1.0), std::domain_error);
}

TEST_CASE("relative entropy is locally the quadratic form of its hessian") {
  const State ref{0.9, 0.1, 1.05};
  CHECK(relative_entropy_density(ref, ref, kGas) == 0.0);

  // Finite-difference hessian at the reference point; the exact diagonal is
  // (R Theta/V^2, 1, R/((gamma-1) Theta)) with vanishing cross terms.
  const double h = 1e-4;
  auto E = [&](double dv, double du, double dth) {
    return relative_entropy_density(
        State{ref.v + dv, ref.u + du, ref.theta + dth}, ref, kGas);
  };
  const double hvv = (E(h, 0, 0) - 2.0 * E(0, 0, 0) + E(-h, 0, 0)) / (h * h);
  const double huu = (E(0, h, 0) - 2.0 * E(0, 0, 0) + E(0, -h, 0)) / (h * h);
  const double htt = (E(0, 0, h) - 2.0 * E(0, 0, 0) + E(0, 0, -h)) / (h * h);
  const double hvt = (E(h, 0, h) - E(h, 0, -h) - E(-h, 0, h) + E(-h, 0, -h)) /
                     (4.0 * h * h);
  CHECK(hvv == doctest::Approx(kGas.R * ref.theta / (ref.v * ref.v))
                   .epsilon(1e-5));
  CHECK(huu == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(htt == doctest::Approx(kGas.R / ((kGas.gamma - 1.0) * ref.theta))
                   .epsilon(1e-5));
  CHECK(std::fabs(hvt) < 1e-7);

  CHECK(relative_entropy_density(State{1.1, -0.2, 0.8}, ref, kGas) > 0.0);
}

TEST_CASE("weight stays in its band and increases across the wave") {
  const Profile& p = reference_profile();
  const Weight w = make_weight(p, kGas);
  const double sq = std::sqrt(p.shock.delta);
  REQUIRE(w.a.size() == p.xi.size());
  CHECK(w.delta == doctest::Approx(p.shock.delta).epsilon(1e-14));
  for (std::size_t i = 0; i < w.a.size(); ++i) {
    CHECK(w.a[i] >= 1.0 - 1e-12);
    CHECK(w.a[i] <= 1.0 + sq + 1e-12);
    CHECK(w.a_xi[i] > 0.0);
  }
  CHECK(w.a.front() == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(w.a.back() == doctest::Approx(1.0 + sq).epsilon(1e-6));
  CHECK(weight_at(p, 0.0, p.shock.delta, kGas) ==
        doctest::Approx(1.0 + 0.5 * sq).epsilon(1e-6));
}

TEST_CASE("profile coordinate obeys a logistic equation at leading order") {
  const Profile& p = reference_profile();
  const ZReport rep = z_coordinate(p, kGas);
  REQUIRE(rep.z.size() == p.xi.size());
  CHECK(rep.z.front() < 1e-6);
  CHECK(rep.z.back() > 1.0 - 1e-6);
  for (std::size_t i = 1; i < rep.z.size(); ++i) {
    CHECK(rep.z[i] >= rep.z[i - 1] - 1e-12);
  }
  const double rate = p.shock.delta * alpha_plus(p.shock, kGas) * 15.0 / 19.0;
  CHECK(rate == doctest::Approx(0.16843123367162832).epsilon(1e-12));
  CHECK(rep.logistic_residual > 0.0);
  CHECK(rep.logistic_residual < 0.2 * rate);
}

TEST_CASE("shift constants match their closed forms") {
  const Profile& p = reference_profile();
  CHECK(alpha_plus(p.shock, kGas) ==
        doctest::Approx(0.8 * 5.0 / std::sqrt(13.0)).epsilon(1e-14));
  CHECK(shift_constant(p.shock, kGas) ==
        doctest::Approx(184.0 * std::sqrt(13.0) / 171.0).epsilon(1e-14));
}

namespace {

// Exact traveling-wave snapshot on a field grid: the profile evaluated at
// y - s3 tau - X.
Field traveling_snapshot(const ProfileSampler& sampler, const Grid& grid,
                         double tau, double X) {
  const ShockWave& w = sampler.profile().shock;
  Field f;
  f.grid = grid;
  f.tau = tau;
  f.X = X;
  f.v.resize(grid.N);
  f.u.resize(grid.N);
  f.theta.resize(grid.N);
  for (int i = 0; i < grid.N; ++i) {
    const ProfilePoint q = sampler(grid_y(grid, i) - w.s3 * tau - X);
    f.v[i] = q.V;
    f.u[i] = q.U;
    f.theta[i] = q.Theta;
  }
  return f;
}

}  // namespace

TEST_CASE("ledger vanishes identically on an exact traveling wave") {
  const Profile& p = reference_profile();
  const ProfileSampler sampler(p, kGas);
  const ShockWave& w = p.shock;
  const Grid grid = make_grid(-40.0, 42.0, 821);
  const double dtau = 1e-3, tau = 0.25, X = 0.15;

  const Field prev = traveling_snapshot(sampler, grid, tau - dtau, X);
  const Field mid = traveling_snapshot(sampler, grid, tau, X);
  const Field next = traveling_snapshot(sampler, grid, tau + dtau, X);

  CHECK(shift_rate(mid, sampler, X, w.delta, kGas) == 0.0);

  ShiftCoupling coupling;
  const Ledger row = term_ledger(prev, mid, next, sampler, X, 0.0, dtau,
                                 w.delta, kGas, &coupling);
  CHECK(row.tau == tau);
  CHECK(row.weighted_entropy == 0.0);
  CHECK(row.G1 == 0.0);
  CHECK(row.G2 == 0.0);
  CHECK(row.Gs == 0.0);
  CHECK(row.D1 == 0.0);
  CHECK(row.D2 == 0.0);
  CHECK(row.Xdot == 0.0);
  CHECK(row.shift_quadratic == 0.0);
  CHECK(row.identity_residual == 0.0);
  CHECK(row.perturb_l2 == 0.0);
  CHECK(row.psi_linf == 0.0);
  CHECK(coupling.Y1 == 0.0);
  CHECK(coupling.Y2 == 0.0);
  CHECK(coupling.Y3 == 0.0);
}

TEST_CASE("perturbed snapshots yield positive quadratic terms") {
  const Profile& p = reference_profile();
  const ProfileSampler sampler(p, kGas);
  const ShockWave& w = p.shock;
  const Grid grid = make_grid(-40.0, 42.0, 821);
  const double dtau = 1e-3, tau = 0.25, X = 0.0;

  Field prev = traveling_snapshot(sampler, grid, tau - dtau, X);
  Field mid = traveling_snapshot(sampler, grid, tau, X);
  Field next = traveling_snapshot(sampler, grid, tau + dtau, X);
  for (Field* f : {&prev, &mid, &next}) {
    for (int i = 0; i < grid.N; ++i) {
      const double y = grid_y(grid, i);
      f->u[i] += 0.01 * std::exp(-(y + 5.0) * (y + 5.0) / 16.0);
      f->theta[i] += 0.004 * std::exp(-(y - 3.0) * (y - 3.0) / 9.0);
    }
  }
  const double xdot = shift_rate(mid, sampler, X, w.delta, kGas);
  CHECK(xdot != 0.0);
  const Ledger row =
      term_ledger(prev, mid, next, sampler, X, xdot, dtau, w.delta, kGas);
  CHECK(row.weighted_entropy > 0.0);
  CHECK(row.G1 > 0.0);
  CHECK(row.G2 > 0.0);
  CHECK(row.Gs > 0.0);
  CHECK(row.D1 > 0.0);
  CHECK(row.D2 > 0.0);
  CHECK(row.shift_quadratic ==
        doctest::Approx(w.delta / shift_constant(w, kGas) * xdot * xdot)
            .epsilon(1e-12));
  CHECK(row.psi_linf == doctest::Approx(0.01).epsilon(0.01));
  CHECK(row.perturb_l2 > 0.0);
  // Frozen bumps do not solve the equations, so the balance defect must be
  // clearly nonzero here; it collapses only on true solutions (see the
  // refinement checks) or exact waves (previous case).
  CHECK(row.identity_residual > 1e-8);
  CHECK(row.identity_residual < 1.0);
}

TEST_CASE("ledger rejects mismatched snapshots") {
  const Profile& p = reference_profile();
  const ProfileSampler sampler(p, kGas);
  const Grid grid = make_grid(-20.0, 22.0, 421);
  const Grid other = make_grid(-20.0, 22.0, 431);
  const Field a = traveling_snapshot(sampler, grid, 0.1, 0.0);
  const Field b = traveling_snapshot(sampler, other, 0.1, 0.0);
  CHECK_THROWS_AS(
      term_ledger(a, b, a, sampler, 0.0, 0.0, 1e-3, p.shock.delta, kGas),
      GridMismatch);
}

TEST_CASE("weighted poincare inequality is sharp") {
  const int N = 1024;
  const double dz = 1.0 / static_cast<double>(N - 1);

  // Affine data saturates the inequality: both sides equal a^2/12.
  for (double a : {1.0, -1.7}) {
    for (double b : {0.0, 0.3}) {
      std::vector<double> f(N), fp(N, a);
      for (int i = 0; i < N; ++i) f[i] = a * i * dz + b;
      const PoincarePair pair = poincare_gap(f, fp);
      CHECK(pair.lhs == doctest::Approx(a * a / 12.0).epsilon(1e-12));
      CHECK(std::fabs(pair.lhs - pair.rhs) < 1e-12);
    }
  }

  // f = z^2 with nodal derivative 2z: rhs is exactly 1/10 (the integrand is
  // a quartic, handled exactly); lhs approaches 4/45 as the sampling of the
  // parabola refines.
  {
    std::vector<double> f(N), fp(N);
    for (int i = 0; i < N; ++i) {
      const double z = i * dz;
      f[i] = z * z;
      fp[i] = 2.0 * z;
    }
    const PoincarePair pair = poincare_gap(f, fp);
    CHECK(pair.rhs == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(pair.lhs == doctest::Approx(4.0 / 45.0).epsilon(1e-4));
    CHECK(pair.lhs < pair.rhs);
  }

  // Random piecewise-linear data never violates the inequality.
  std::mt19937 rng(777u);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 61);
    std::vector<double> f(n), fp(n - 1);
    for (double& x : f) x = dist(rng);
    const double d = 1.0 / static_cast<double>(n - 1);
    for (int k = 0; k + 1 < n; ++k) fp[k] = (f[k + 1] - f[k]) / d;
    const PoincarePair pair = poincare_gap(f, fp);
    CHECK(pair.lhs <= pair.rhs + 1e-12);
  }

  std::vector<double> tiny{0.0, 1.0};
  CHECK_THROWS_AS(poincare_gap(tiny, tiny), GridMismatch);
  std::vector<double> f5{0.0, 1.0, 0.5, 0.25, 0.75};
  std::vector<double> bad(3, 1.0);
  CHECK_THROWS_AS(poincare_gap(f5, bad), GridMismatch);
}
