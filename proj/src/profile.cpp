// Viscous traveling wave connecting the two end states of an admissible
// 3-shock. In the wave variable xi the momentum and energy equations
// integrate once, leaving a planar autonomous system for (V, Theta) whose
// fixed points are the end states: a saddle on the left, a stable node on the
// right. The connection is computed by shooting from the saddle along its
// unstable eigendirection; the free translation is pinned by placing the
// pressure midpoint (p_- + p_+)/2 at xi = 0.

#include "vshock/profile.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "vshock/csv.hpp"
#include "vshock/errors.hpp"

namespace vshock {

ProfileDeriv profile_rhs(double V, double Theta, const ShockWave& shock,
                         double eps, double kappa, const GasParams& g) {
  const double p_minus = pressure(shock.left, g);
  const double p_plus = pressure(shock.right, g);
  const double s3 = shock.s3;
  const double P = g.R * Theta / V;
  ProfileDeriv d;
  d.dV = -(V / (eps * s3)) *
         (s3 * s3 * (V - shock.left.v) + (P - p_minus));
  d.dTheta = (s3 * V / kappa) *
             (-(g.R / (g.gamma - 1.0)) * (Theta - shock.right.theta) -
              p_plus * (V - shock.right.v) +
              0.5 * s3 * s3 * (V - shock.right.v) * (V - shock.right.v));
  return d;
}

ProfileJacobian profile_rhs_jacobian(double V, double Theta,
                                     const ShockWave& shock, double eps,
                                     double kappa, const GasParams& g) {
  const double p_minus = pressure(shock.left, g);
  const double p_plus = pressure(shock.right, g);
  const double s3 = shock.s3;
  const double P = g.R * Theta / V;
  const double A = s3 * s3 * (V - shock.left.v) + (P - p_minus);
  const double B = -(g.R / (g.gamma - 1.0)) * (Theta - shock.right.theta) -
                   p_plus * (V - shock.right.v) +
                   0.5 * s3 * s3 * (V - shock.right.v) * (V - shock.right.v);
  ProfileJacobian j;
  j.dV_dV = -(A + V * s3 * s3 - P) / (eps * s3);
  j.dV_dTheta = -g.R / (eps * s3);
  j.dTheta_dV = (s3 / kappa) * B +
                (s3 * V / kappa) * (-p_plus + s3 * s3 * (V - shock.right.v));
  j.dTheta_dTheta = -(s3 * V / kappa) * g.R / (g.gamma - 1.0);
  return j;
}

namespace {

struct Saddle {
  double mu;   // positive eigenvalue at the left state
  double wV;   // unit eigenvector, oriented so wV > 0
  double wTh;
};

Saddle left_saddle(const ShockWave& shock, double eps, double kappa,
                   const GasParams& g) {
  const ProfileJacobian j = profile_rhs_jacobian(
      shock.left.v, shock.left.theta, shock, eps, kappa, g);
  const double tr = j.dV_dV + j.dTheta_dTheta;
  const double det = j.dV_dV * j.dTheta_dTheta - j.dV_dTheta * j.dTheta_dV;
  const double disc = tr * tr - 4.0 * det;
  if (!(disc >= 0.0)) {
    throw NoUnstableDirection("left-state eigenvalues are complex");
  }
  const double mu = 0.5 * (tr + std::sqrt(disc));
  if (!(mu > 0.0)) {
    throw NoUnstableDirection("left state has no positive eigenvalue");
  }
  // Row 1 of (J - mu I) annihilates (dV_dTheta, mu - dV_dV).
  double wV = j.dV_dTheta;
  double wTh = mu - j.dV_dV;
  const double norm = std::hypot(wV, wTh);
  if (!(norm > 0.0)) {
    throw NoUnstableDirection("degenerate unstable eigenvector");
  }
  wV /= norm;
  wTh /= norm;
  if (wV < 0.0) {
    wV = -wV;
    wTh = -wTh;
  }
  if (!(wV > 0.0)) {
    throw NoUnstableDirection("unstable direction does not move V");
  }
  return Saddle{mu, wV, wTh};
}

// Cubic Hermite value on [x0, x1] from endpoint values and slopes.
double hermite(double x, double x0, double x1, double f0, double f1,
               double d0, double d1) {
  const double h = x1 - x0;
  const double t = (x - x0) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  return (2.0 * t3 - 3.0 * t2 + 1.0) * f0 + (t3 - 2.0 * t2 + t) * h * d0 +
         (-2.0 * t3 + 3.0 * t2) * f1 + (t3 - t2) * h * d1;
}

struct Orbit {
  std::vector<double> t;    // raw integration coordinate, t[0] = 0
  std::vector<double> V;
  std::vector<double> Th;
  std::vector<double> dV;   // analytic slopes at the samples
  std::vector<double> dTh;
};

// Hermite evaluation of the recorded orbit at raw coordinate tq.
void orbit_eval(const Orbit& o, double tq, double* V, double* Th) {
  auto it = std::upper_bound(o.t.begin(), o.t.end(), tq);
  std::size_t k = static_cast<std::size_t>(it - o.t.begin());
  if (k == 0) k = 1;
  if (k > o.t.size() - 1) k = o.t.size() - 1;
  const std::size_t a = k - 1;
  *V = hermite(tq, o.t[a], o.t[k], o.V[a], o.V[k], o.dV[a], o.dV[k]);
  *Th = hermite(tq, o.t[a], o.t[k], o.Th[a], o.Th[k], o.dTh[a], o.dTh[k]);
}

}  // namespace

double default_half_width(double delta, double eps, double kappa) {
  if (!(delta > 0.0)) throw ValidationError("delta: must be > 0");
  if (!(eps > 0.0)) throw ValidationError("eps: must be > 0");
  if (!(kappa > 0.0)) throw ValidationError("kappa: must be > 0");
  return 30.0 * std::max(eps, kappa) / delta;
}

Profile solve_profile(const ShockWave& shock, double eps, double kappa,
                      double L, int N, const GasParams& g,
                      double endpoint_tol) {
  validate(g);
  validate(shock.left);
  validate(shock.right);
  if (!(eps > 0.0)) throw ValidationError("eps: must be > 0");
  if (!(kappa > 0.0)) throw ValidationError("kappa: must be > 0");
  if (!(L > 0.0)) throw ValidationError("L: must be > 0");
  if (N < 8) throw ValidationError("N: must be >= 8");
  if (!(shock.delta > 0.0)) {
    throw ValidationError("shock.delta: must be > 0 for a traveling wave");
  }

  const double p_minus = pressure(shock.left, g);
  const double p_plus = pressure(shock.right, g);
  const double p_mid = 0.5 * (p_minus + p_plus);
  const Saddle sad = left_saddle(shock, eps, kappa, g);
  const double eta = 1e-6 * shock.delta;

  using state_t = std::array<double, 2>;
  auto sys = [&](const state_t& x, state_t& dxdt, double) {
    const ProfileDeriv d = profile_rhs(x[0], x[1], shock, eps, kappa, g);
    dxdt[0] = d.dV;
    dxdt[1] = d.dTheta;
  };

  const double dxi = 2.0 * L / static_cast<double>(N - 1);
  const double dt_max = dxi;

  Orbit orbit;
  auto record = [&](double t, const state_t& x) {
    const ProfileDeriv d = profile_rhs(x[0], x[1], shock, eps, kappa, g);
    orbit.t.push_back(t);
    orbit.V.push_back(x[0]);
    orbit.Th.push_back(x[1]);
    orbit.dV.push_back(d.dV);
    orbit.dTh.push_back(d.dTheta);
  };

  state_t x{shock.left.v + eta * sad.wV, shock.left.theta + eta * sad.wTh};
  double t = 0.0;
  double dt = 1e-2 * dt_max;
  record(t, x);

  namespace ode = boost::numeric::odeint;
  auto stepper = ode::make_controlled<ode::runge_kutta_dopri5<state_t>>(
      1e-12, 1e-10);

  bool found_mid = false;
  double t_mid_est = 0.0;
  const long step_cap = 20000000L;
  for (long steps = 0;; ++steps) {
    if (steps >= step_cap) {
      throw EndpointMiss("traveling-wave integration exceeded the step cap");
    }
    if (!(dt > 1e-14)) {
      throw EndpointMiss("traveling-wave step size collapsed; the orbit left "
                         "the connecting branch");
    }
    const double t_prev = t;
    const double P_prev = g.R * x[1] / x[0];
    if (stepper.try_step(sys, x, t, dt) != ode::success) continue;
    record(t, x);
    dt = std::min(dt, dt_max);
    const double P = g.R * x[1] / x[0];
    if (!found_mid && P <= p_mid) {
      found_mid = true;
      // Linear estimate of the crossing, refined after the loop.
      const double w = (P_prev - p_mid) / (P_prev - P);
      t_mid_est = t_prev + w * (t - t_prev);
    }
    if (found_mid && t >= t_mid_est + L + 5.0 * dxi + 1.0) break;
  }

  // Refine the midpoint crossing on its bracketing cell by bisection.
  std::size_t kc = 1;
  while (kc < orbit.t.size() &&
         g.R * orbit.Th[kc] / orbit.V[kc] > p_mid) {
    ++kc;
  }
  double lo = orbit.t[kc - 1], hi = orbit.t[kc];
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    double Vq, Thq;
    orbit_eval(orbit, mid, &Vq, &Thq);
    if (g.R * Thq / Vq > p_mid) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double t_mid = 0.5 * (lo + hi);

  Profile prof;
  prof.shock = shock;
  prof.eps = eps;
  prof.kappa = kappa;
  prof.xi.resize(N);
  prof.V.resize(N);
  prof.U.resize(N);
  prof.Theta.resize(N);
  for (int i = 0; i < N; ++i) {
    const double xi = -L + dxi * static_cast<double>(i);
    double traw = xi + t_mid;
    double V, Th;
    if (traw <= 0.0) {
      // Left of the shooting start the orbit is within eta of the saddle;
      // use the linearized flow along the unstable direction.
      const double amp = eta * std::exp(sad.mu * traw);
      V = shock.left.v + amp * sad.wV;
      Th = shock.left.theta + amp * sad.wTh;
    } else {
      traw = std::min(traw, orbit.t.back());
      orbit_eval(orbit, traw, &V, &Th);
    }
    prof.xi[i] = xi;
    prof.V[i] = V;
    prof.Theta[i] = Th;
    prof.U[i] = shock.right.u - shock.s3 * (V - shock.right.v);
  }

  const double left_err =
      std::max({std::fabs(prof.V.front() - shock.left.v),
                std::fabs(prof.U.front() - shock.left.u),
                std::fabs(prof.Theta.front() - shock.left.theta)});
  const double right_err =
      std::max({std::fabs(prof.V.back() - shock.right.v),
                std::fabs(prof.U.back() - shock.right.u),
                std::fabs(prof.Theta.back() - shock.right.theta)});
  if (left_err > endpoint_tol || right_err > endpoint_tol) {
    throw EndpointMiss("profile grid ends miss the shock states: left " +
                       std::to_string(left_err) + ", right " +
                       std::to_string(right_err) + " at half-width " +
                       std::to_string(L));
  }
  return prof;
}

ProfileReport verify_profile(const Profile& p, const GasParams& g) {
  const std::size_t n = p.xi.size();
  if (n < 8 || p.V.size() != n || p.U.size() != n || p.Theta.size() != n) {
    throw GridMismatch("verify_profile: inconsistent sample arrays");
  }
  ProfileReport rep{};
  rep.v_increasing = true;
  rep.u_decreasing = true;
  rep.theta_decreasing = true;
  for (std::size_t i = 1; i < n; ++i) {
    if (!(p.V[i] > p.V[i - 1])) rep.v_increasing = false;
    if (!(p.U[i] < p.U[i - 1])) rep.u_decreasing = false;
    if (!(p.Theta[i] < p.Theta[i - 1])) rep.theta_decreasing = false;
  }

  rep.left_endpoint_err =
      std::max({std::fabs(p.V.front() - p.shock.left.v),
                std::fabs(p.U.front() - p.shock.left.u),
                std::fabs(p.Theta.front() - p.shock.left.theta)});
  rep.right_endpoint_err =
      std::max({std::fabs(p.V.back() - p.shock.right.v),
                std::fabs(p.U.back() - p.shock.right.u),
                std::fabs(p.Theta.back() - p.shock.right.theta)});

  const double L_left = -p.xi.front();
  const double L_right = p.xi.back();
  const double floor_l = 1e-13 * std::max(1.0, std::fabs(p.shock.left.v));
  const double floor_r = 1e-13 * std::max(1.0, std::fabs(p.shock.right.v));
  std::vector<double> xl, yl, xr, yr;
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = p.xi[i];
    if (xi <= -0.75 * L_left) {
      const double dev = std::fabs(p.V[i] - p.shock.left.v);
      if (dev > floor_l) {
        xl.push_back(xi);
        yl.push_back(std::log(dev));
      }
    }
    if (xi >= 0.75 * L_right) {
      const double dev = std::fabs(p.V[i] - p.shock.right.v);
      if (dev > floor_r) {
        xr.push_back(xi);
        yr.push_back(std::log(dev));
      }
    }
  }
  if (xl.size() < 2 || xr.size() < 2) {
    throw EmptyRegion("verify_profile: tail-fit window has fewer than 2 "
                      "samples above the rounding floor");
  }
  rep.left_decay_rate = ls_slope(xl, yl);
  rep.right_decay_rate = -ls_slope(xr, yr);

  double max_dv = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const ProfileDeriv d =
        profile_rhs(p.V[i], p.Theta[i], p.shock, p.eps, p.kappa, g);
    max_dv = std::max(max_dv, std::fabs(d.dV));
  }
  rep.max_dV_scaled = max_dv * p.eps / (p.shock.delta * p.shock.delta);

  const double pm = pressure(p.shock.left, g);
  const double pp = pressure(p.shock.right, g);
  rep.gap_minus =
      std::fabs(p.shock.s3 * p.shock.s3 - g.gamma * pm / p.shock.left.v) /
      p.shock.delta;
  rep.gap_plus =
      std::fabs(p.shock.s3 * p.shock.s3 - g.gamma * pp / p.shock.right.v) /
      p.shock.delta;
  return rep;
}

double chord_identity_residual(const Profile& p, const GasParams& g,
                               double exclusion) {
  if (!(exclusion > 0.0 && exclusion < 0.5)) {
    throw ValidationError("exclusion: must lie in (0, 0.5)");
  }
  const double pm = pressure(p.shock.left, g);
  const double pp = pressure(p.shock.right, g);
  const double delta = p.shock.delta;
  const double coef =
      (g.gamma + 1.0) / (2.0 * g.gamma * pp) *
      (g.R * p.eps * g.gamma /
       (p.kappa * (g.gamma - 1.0) * (g.gamma - 1.0) + g.R * p.eps * g.gamma)) *
      (p.shock.right.v - p.shock.left.v);
  double worst = -1.0;
  for (std::size_t i = 0; i < p.xi.size(); ++i) {
    const double P = g.R * p.Theta[i] / p.V[i];
    if (std::fabs(P - pm) <= exclusion * delta) continue;
    if (std::fabs(P - pp) <= exclusion * delta) continue;
    const double lhs = (p.V[i] - p.shock.left.v) / (P - pm) -
                       (p.V[i] - p.shock.right.v) / (P - pp) - coef;
    worst = std::max(worst, std::fabs(lhs));
  }
  if (worst < 0.0) {
    throw EmptyRegion("chord_identity_residual: no interior samples outside "
                      "the exclusion bands");
  }
  return worst;
}

ProfileSampler::ProfileSampler(const Profile& p, const GasParams& g)
    : profile_(&p), gas_(g) {
  const std::size_t n = p.xi.size();
  if (n < 2 || p.V.size() != n || p.U.size() != n || p.Theta.size() != n) {
    throw GridMismatch("ProfileSampler: inconsistent sample arrays");
  }
  n_ = static_cast<int>(n);
  xi0_ = p.xi.front();
  dxi_ = (p.xi.back() - p.xi.front()) / static_cast<double>(n_ - 1);
  dV_.resize(n);
  dTheta_.resize(n);
  double max_dv = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const ProfileDeriv d =
        profile_rhs(p.V[i], p.Theta[i], p.shock, p.eps, p.kappa, g);
    dV_[i] = d.dV;
    dTheta_[i] = d.dTheta;
    max_dv = std::max(max_dv, std::fabs(d.dV));
  }
  if (!(max_dv > 0.0)) {
    throw GridMismatch("ProfileSampler: profile is flat");
  }
  width_ = (p.shock.right.v - p.shock.left.v) / max_dv;
}

ProfilePoint ProfileSampler::operator()(double xi) const {
  const Profile& p = *profile_;
  ProfilePoint q{};
  if (xi <= xi0_ || xi >= xi_max()) {
    const State& s = (xi <= xi0_) ? p.shock.left : p.shock.right;
    q.V = s.v;
    q.U = s.u;
    q.Theta = s.theta;
    q.P = pressure(s, gas_);
    return q;
  }
  double cell = std::floor((xi - xi0_) / dxi_);
  int k = static_cast<int>(cell);
  if (k < 0) k = 0;
  if (k > n_ - 2) k = n_ - 2;
  const double xa = xi0_ + dxi_ * static_cast<double>(k);
  const double xb = xa + dxi_;
  q.V = hermite(xi, xa, xb, p.V[k], p.V[k + 1], dV_[k], dV_[k + 1]);
  q.Theta =
      hermite(xi, xa, xb, p.Theta[k], p.Theta[k + 1], dTheta_[k], dTheta_[k + 1]);
  q.U = p.shock.right.u - p.shock.s3 * (q.V - p.shock.right.v);
  q.P = gas_.R * q.Theta / q.V;
  const ProfileDeriv d =
      profile_rhs(q.V, q.Theta, p.shock, p.eps, p.kappa, gas_);
  q.dV = d.dV;
  q.dTheta = d.dTheta;
  q.dU = -p.shock.s3 * d.dV;
  q.dP = (gas_.R * d.dTheta - q.P * d.dV) / q.V;
  const ProfileJacobian j =
      profile_rhs_jacobian(q.V, q.Theta, p.shock, p.eps, p.kappa, gas_);
  q.ddTheta = j.dTheta_dV * d.dV + j.dTheta_dTheta * d.dTheta;
  return q;
}

void write_profile_csv(const std::string& path, const Profile& p,
                       const GasParams& g) {
  std::ofstream out(path);
  if (!out) throw ParseError("write_profile_csv: cannot open " + path);
  auto kv = [&](const char* key, double val) {
    out << "# " << key << "=" << format_double(val) << "\n";
  };
  kv("v_left", p.shock.left.v);
  kv("u_left", p.shock.left.u);
  kv("theta_left", p.shock.left.theta);
  kv("v_right", p.shock.right.v);
  kv("u_right", p.shock.right.u);
  kv("theta_right", p.shock.right.theta);
  kv("s3", p.shock.s3);
  kv("delta", p.shock.delta);
  kv("eps", p.eps);
  kv("kappa", p.kappa);
  kv("gamma", g.gamma);
  kv("R", g.R);
  kv("nu", g.nu);
  out << "xi,V,U,Theta\n";
  for (std::size_t i = 0; i < p.xi.size(); ++i) {
    out << format_double(p.xi[i]) << "," << format_double(p.V[i]) << ","
        << format_double(p.U[i]) << "," << format_double(p.Theta[i]) << "\n";
  }
  if (!out) throw ParseError("write_profile_csv: write failed on " + path);
}

Profile read_profile_csv(const std::string& path, GasParams* g_out) {
  std::ifstream in(path);
  if (!in) throw ParseError("read_profile_csv: cannot open " + path);
  std::map<std::string, double> meta;
  Profile p;
  std::string line;
  int lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::size_t eq = line.find('=');
      if (eq == std::string::npos) {
        throw ParseError(path + ":" + std::to_string(lineno) +
                         ": malformed key=value comment");
      }
      std::string key = line.substr(1, eq - 1);
      key.erase(0, key.find_first_not_of(' '));
      key.erase(key.find_last_not_of(' ') + 1);
      meta[key] = std::strtod(line.c_str() + eq + 1, nullptr);
      continue;
    }
    if (!header_seen) {
      if (line != "xi,V,U,Theta") {
        throw ParseError(path + ":" + std::to_string(lineno) +
                         ": expected header xi,V,U,Theta");
      }
      header_seen = true;
      continue;
    }
    double vals[4];
    const char* s = line.c_str();
    char* end = nullptr;
    for (int k = 0; k < 4; ++k) {
      vals[k] = std::strtod(s, &end);
      if (end == s || (k < 3 && *end != ',')) {
        throw ParseError(path + ":" + std::to_string(lineno) +
                         ": expected 4 comma-separated numbers");
      }
      s = end + 1;
    }
    p.xi.push_back(vals[0]);
    p.V.push_back(vals[1]);
    p.U.push_back(vals[2]);
    p.Theta.push_back(vals[3]);
  }
  const char* required[] = {"v_left", "u_left",  "theta_left", "v_right",
                            "u_right", "theta_right", "s3", "delta",
                            "eps", "kappa", "gamma", "R", "nu"};
  for (const char* key : required) {
    if (!meta.count(key)) {
      throw ParseError(path + ": missing header key " + key);
    }
  }
  if (p.xi.size() < 2) {
    throw ParseError(path + ": fewer than 2 sample rows");
  }
  p.shock.left = State{meta["v_left"], meta["u_left"], meta["theta_left"]};
  p.shock.right = State{meta["v_right"], meta["u_right"], meta["theta_right"]};
  p.shock.s3 = meta["s3"];
  p.shock.delta = meta["delta"];
  p.eps = meta["eps"];
  p.kappa = meta["kappa"];
  if (g_out) {
    g_out->gamma = meta["gamma"];
    g_out->R = meta["R"];
    g_out->nu = meta["nu"];
  }
  return p;
}

}  // namespace vshock
