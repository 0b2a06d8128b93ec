// Finite-volume scheme: grid construction, conservative fluxes, stepping,
// error measurement and full deterministic runs.

#include <doctest.h>

#include <cmath>
#include <vector>

#include "vshock/errors.hpp"
#include "vshock/solver.hpp"

using namespace vshock;

namespace {

const GasParams kGas{5.0 / 3.0, 1.0, 1.0};

ShockWave reference_shock() {
  return solve_left_state(State{1.0, 0.0, 1.0}, 0.9, kGas);
}

const ProfileSampler& reference_sampler() {
  static const Profile p = [] {
    const ShockWave w = reference_shock();
    const double L = default_half_width(w.delta, 1.0, 1.0);
    const int N = static_cast<int>(std::lround(2.0 * L / 0.25)) + 1;
    return solve_profile(w, 1.0, 1.0, L, N, kGas);
  }();
  static const ProfileSampler s(p, kGas);
  return s;
}

SolverConfig base_config() {
  SolverConfig c;
  c.gas = kGas;
  c.shock = reference_shock();
  return c;
}

}  // namespace

TEST_CASE("grid defaults give the strength-scaled margins") {
  SolverConfig c = base_config();
  const Grid g = solver_grid(c);
  // 40/delta = 208 at delta = 5/26, which beats the floor of 50.
  CHECK(g.yL == doctest::Approx(-208.0).epsilon(1e-12));
  CHECK(g.yR ==
        doctest::Approx(c.shock.s3 * c.tau_end + 208.0).epsilon(1e-12));
  CHECK(g.dy == doctest::Approx(c.dy).epsilon(1e-3));

  c.margin_left = 30.0;
  c.margin_right = 20.0;
  const Grid h = solver_grid(c);
  CHECK(h.yL == doctest::Approx(-30.0).epsilon(1e-12));
  CHECK(h.yR == doctest::Approx(c.shock.s3 + 20.0).epsilon(1e-12));
}

TEST_CASE("initial data splits at the origin") {
  const ShockWave w = reference_shock();
  const Grid grid = make_grid(-10.0, 10.0, 201);  // node 100 sits at y = 0
  const Field f = init_field(grid, w);
  CHECK(f.tau == 0.0);
  CHECK(f.X == 0.0);
  CHECK(f.v[99] == w.left.v);
  CHECK(f.u[99] == w.left.u);
  CHECK(f.theta[99] == w.left.theta);
  CHECK(f.v[101] == w.right.v);
  CHECK(f.v[100] == doctest::Approx(0.5 * (w.left.v + w.right.v))
                        .epsilon(1e-15));
}

TEST_CASE("interior tendencies telescope to the boundary fluxes") {
  const ProfileSampler& sampler = reference_sampler();
  const Grid grid = make_grid(-35.0, 37.0, 721);
  Field f;
  f.grid = grid;
  f.v.resize(grid.N);
  f.u.resize(grid.N);
  f.theta.resize(grid.N);
  for (int i = 0; i < grid.N; ++i) {
    const ProfilePoint q = sampler(grid_y(grid, i));
    // A lopsided non-solution state exercises every flux term.
    f.v[i] = q.V;
    f.u[i] = q.U + 0.02 * std::sin(0.3 * grid_y(grid, i));
    f.theta[i] = q.Theta + 0.01 * std::cos(0.5 * grid_y(grid, i));
  }
  const Tendency t = rhs_eval(f, kGas);
  CHECK(t.dv.front() == 0.0);
  CHECK(t.dv.back() == 0.0);
  CHECK(t.du.front() == 0.0);
  CHECK(t.dE.back() == 0.0);
  double sums[3] = {0.0, 0.0, 0.0};
  for (int i = 1; i + 1 < grid.N; ++i) {
    sums[0] += t.dv[i];
    sums[1] += t.du[i];
    sums[2] += t.dE[i];
  }
  for (int k = 0; k < 3; ++k) {
    CHECK(sums[k] * grid.dy ==
          doctest::Approx(t.flux_right[k] - t.flux_left[k]).epsilon(1e-10));
  }
}

TEST_CASE("tendencies on the exact wave match its translation") {
  const ProfileSampler& sampler = reference_sampler();
  const ShockWave& w = sampler.profile().shock;
  const Grid grid = make_grid(-40.0, 42.0, 1641);  // dy = 0.05
  Field f;
  f.grid = grid;
  f.v.resize(grid.N);
  f.u.resize(grid.N);
  f.theta.resize(grid.N);
  for (int i = 0; i < grid.N; ++i) {
    const ProfilePoint q = sampler(grid_y(grid, i));
    f.v[i] = q.V;
    f.u[i] = q.U;
    f.theta[i] = q.Theta;
  }
  const Tendency t = rhs_eval(f, kGas);
  double worst = 0.0;
  for (int i = 1; i + 1 < grid.N; ++i) {
    const ProfilePoint q = sampler(grid_y(grid, i));
    const double dE_exact =
        -w.s3 * (kGas.R / (kGas.gamma - 1.0) * q.dTheta + q.U * q.dU);
    worst = std::max(worst, std::fabs(t.dv[i] - (-w.s3 * q.dV)));
    worst = std::max(worst, std::fabs(t.du[i] - (-w.s3 * q.dU)));
    worst = std::max(worst, std::fabs(t.dE[i] - dE_exact));
  }
  // Second-order interface averages: defect O(dy^2) on smooth data.
  CHECK(worst < 1e-5);
}

TEST_CASE("step enforces its time-step bounds") {
  const ProfileSampler& sampler = reference_sampler();
  const ShockWave& w = sampler.profile().shock;
  const Grid grid = make_grid(-20.0, 22.0, 421);
  const Field f = init_field(grid, w);
  CHECK_THROWS_AS(step(f, sampler, 0.5, w.delta, kGas), CflViolation);
  CHECK_THROWS_AS(step(f, sampler, -1e-3, w.delta, kGas), ValidationError);
  CHECK_THROWS_AS(step(f, sampler, 0.0, w.delta, kGas), ValidationError);

  StepStats stats;
  const Field g = step(f, sampler, 1e-3, w.delta, kGas, &stats);
  CHECK(g.tau == doctest::Approx(1e-3).epsilon(1e-15));
  for (int i = 0; i < grid.N; ++i) {
    CHECK(g.v[i] > 0.0);
    CHECK(g.theta[i] > 0.0);
  }
}

TEST_CASE("away-from-shock error ignores the excluded window") {
  const ShockWave w = reference_shock();
  const Grid grid = make_grid(-10.0, 10.0, 201);
  Field f = init_field(grid, w);
  const double tau = 1.0;  // shock reference position s3*tau = 1.3868
  // Rebuild the exact step at s3*tau so the away error starts at zero.
  for (int i = 0; i < grid.N; ++i) {
    const bool left = grid_y(grid, i) < w.s3 * tau;
    f.v[i] = left ? w.left.v : w.right.v;
    f.u[i] = left ? w.left.u : w.right.u;
    f.theta[i] = left ? w.left.theta : w.right.theta;
  }
  CHECK(linf_error_away(f, w, tau, 2.0) == 0.0);

  const auto node_at = [&](double y) {
    return static_cast<int>(std::lround((y - grid.yL) / grid.dy));
  };
  f.u[node_at(w.s3 * tau + 0.5)] += 0.1;  // inside the window: invisible
  CHECK(linf_error_away(f, w, tau, 2.0) == 0.0);
  f.u[node_at(w.s3 * tau + 3.0)] += 0.07;  // outside: dominates
  CHECK(linf_error_away(f, w, tau, 2.0) == doctest::Approx(0.07).epsilon(1e-12));
  CHECK_THROWS_AS(linf_error_away(f, w, tau, 1e4), EmptyRegion);
}

TEST_CASE("run conserves the conserved quantities and repeats bitwise") {
  SolverConfig c = base_config();
  c.margin_left = 50.0;
  c.margin_right = 50.0;
  c.dy = 0.1;
  c.tau_end = 0.5;
  c.output_stride = 50;
  const RunResult a = run(c);
  const RunResult b = run(c);

  for (double r : a.conservation_residual) CHECK(r < 1e-10);
  CHECK(a.dtau > 0.0);
  CHECK(a.final_field.tau == doctest::Approx(0.5).epsilon(1e-12));
  REQUIRE(!a.ledgers.empty());
  CHECK(a.ledgers.size() == a.away_errors.size());

  REQUIRE(a.ledgers.size() == b.ledgers.size());
  for (std::size_t k = 0; k < a.ledgers.size(); ++k) {
    CHECK(a.ledgers[k].weighted_entropy == b.ledgers[k].weighted_entropy);
    CHECK(a.ledgers[k].identity_residual == b.ledgers[k].identity_residual);
    CHECK(a.ledgers[k].Xdot == b.ledgers[k].Xdot);
    CHECK(a.away_errors[k] == b.away_errors[k]);
  }
  for (int i = 0; i < a.final_field.grid.N; ++i) {
    CHECK(a.final_field.v[i] == b.final_field.v[i]);
    CHECK(a.final_field.u[i] == b.final_field.u[i]);
    CHECK(a.final_field.theta[i] == b.final_field.theta[i]);
  }
  CHECK(a.final_field.X == b.final_field.X);
}

TEST_CASE("exact wave data barely moves over a unit of time") {
  const ProfileSampler& sampler = reference_sampler();
  SolverConfig c = base_config();
  c.margin_left = 60.0;
  c.margin_right = 60.0;
  c.dy = 0.1;
  c.tau_end = 1.0;
  c.initial_data = InitialData::profile;
  const RunResult r = run(c, sampler);
  const Field& f = r.final_field;
  const ShockWave& w = sampler.profile().shock;
  double dev = 0.0;
  for (int i = 0; i < f.grid.N; ++i) {
    const ProfilePoint q = sampler(grid_y(f.grid, i) - w.s3 * f.tau - f.X);
    dev = std::max({dev, std::fabs(f.v[i] - q.V), std::fabs(f.u[i] - q.U),
                    std::fabs(f.theta[i] - q.Theta)});
  }
  CHECK(dev < 2e-3);
  CHECK(std::fabs(f.X) < 1e-3);
}

TEST_CASE("run rejects inconsistent configurations") {
  SolverConfig c = base_config();
  c.dtau = 0.3;  // does not divide tau_end = 1
  CHECK_THROWS_AS(run(c, reference_sampler()), ValidationError);

  SolverConfig d = base_config();
  d.dy = -0.1;
  CHECK_THROWS_AS(validate(d), ValidationError);
  SolverConfig e = base_config();
  e.margin_left = -1.0;
  CHECK_THROWS_AS(validate(e), ValidationError);
  SolverConfig h = base_config();
  h.cfl_advective = 1.5;
  CHECK_THROWS_AS(validate(h), ValidationError);
  SolverConfig k = base_config();
  k.shock.s3 = -1.0;
  CHECK_THROWS_AS(validate(k), ValidationError);
  SolverConfig m = base_config();
  m.shock.left.theta *= 1.01;  // jump conditions no longer hold
  CHECK_THROWS_AS(validate(m), ValidationError);
}

TEST_CASE("a cramped right margin trips the outrun guard") {
  const ProfileSampler& sampler = reference_sampler();
  SolverConfig c = base_config();
  c.margin_left = 50.0;
  c.margin_right = 1.0;
  c.dy = 0.1;
  c.tau_end = 1.0;
  c.initial_data = InitialData::profile;
  CHECK_THROWS_AS(run(c, sampler), DomainOutrun);
}
