// Command-line front end. Subcommands map one-to-one onto the library
// entry points: profile construction, a single simulation, the three
// parameter studies and the shipped verification suite.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>

#include <CLI11.hpp>

#include "vshock/csv.hpp"
#include "vshock/errors.hpp"
#include "vshock/harness.hpp"

namespace {

struct ProfileOptions {
  double v_right = 1.0;
  double u_right = 0.0;
  double theta_right = 1.0;
  double gamma = 5.0 / 3.0;
  double R = 1.0;
  double delta = 0.2;
  double eps = 1.0;
  double kappa = 1.0;
  double half_width = 0.0;  // 0 -> automatic
  double dxi = 0.25;
  std::string out;
};

int run_profile(const ProfileOptions& opt) {
  const vshock::GasParams g{opt.gamma, opt.R, opt.kappa / opt.eps};
  vshock::validate(g);
  const vshock::State right{opt.v_right, opt.u_right, opt.theta_right};
  const vshock::ShockWave w =
      vshock::solve_left_state_for_strength(right, opt.delta, g);
  const double L =
      opt.half_width > 0.0
          ? opt.half_width
          : vshock::default_half_width(w.delta, opt.eps, opt.kappa);
  const int N = static_cast<int>(std::lround(2.0 * L / opt.dxi)) + 1;
  const vshock::Profile prof =
      vshock::solve_profile(w, opt.eps, opt.kappa, L, N, g);
  const vshock::ProfileReport rep = vshock::verify_profile(prof, g);

  std::printf("shock: s3=%s delta=%s\n", vshock::format_double(w.s3).c_str(),
              vshock::format_double(w.delta).c_str());
  std::printf("left state: v=%s u=%s theta=%s\n",
              vshock::format_double(w.left.v).c_str(),
              vshock::format_double(w.left.u).c_str(),
              vshock::format_double(w.left.theta).c_str());
  std::printf("monotone: V %s, U %s, Theta %s\n",
              rep.v_increasing ? "increasing" : "NOT monotone",
              rep.u_decreasing ? "decreasing" : "NOT monotone",
              rep.theta_decreasing ? "decreasing" : "NOT monotone");
  std::printf("endpoint miss: left=%s right=%s\n",
              vshock::format_double(rep.left_endpoint_err).c_str(),
              vshock::format_double(rep.right_endpoint_err).c_str());
  std::printf("tail decay rates: left=%s right=%s (per unit xi)\n",
              vshock::format_double(rep.left_decay_rate).c_str(),
              vshock::format_double(rep.right_decay_rate).c_str());
  std::printf("max |dV/dxi| * eps / delta^2 = %s\n",
              vshock::format_double(rep.max_dV_scaled).c_str());
  std::printf("chord residual: %s\n",
              vshock::format_double(
                  vshock::chord_identity_residual(prof, g))
                  .c_str());
  std::printf("logistic residual: %s\n",
              vshock::format_double(
                  vshock::z_coordinate(prof, g).logistic_residual)
                  .c_str());
  if (!opt.out.empty()) {
    vshock::write_profile_csv(opt.out, prof, g);
    std::printf("wrote %s\n", opt.out.c_str());
  }
  return 0;
}

int run_simulate(const std::string& config_path, const std::string& out_dir) {
  vshock::StudyConfig c = vshock::load_config(config_path);
  const std::string dir = out_dir.empty() ? c.out_dir : out_dir;
  const vshock::RunResult r = vshock::run(c.base);
  std::filesystem::create_directories(dir);
  const std::string tag =
      vshock::hash_hex(vshock::config_hash(c)).substr(0, 12);
  vshock::write_ledger_csv(dir + "/simulate_" + tag + "_ledger.csv",
                           r.ledgers, &r.away_errors);
  vshock::write_snapshot_csv(dir + "/simulate_" + tag + "_final.csv",
                             r.final_field,
                             vshock::hash_hex(vshock::config_hash(c)));
  std::printf("steps of size %s to tau=%s\n",
              vshock::format_double(r.dtau).c_str(),
              vshock::format_double(r.final_field.tau).c_str());
  std::printf("final shift X=%s\n",
              vshock::format_double(r.final_field.X).c_str());
  double cons = 0.0;
  for (double x : r.conservation_residual) cons = std::max(cons, x);
  std::printf("conservation residual: %s\n",
              vshock::format_double(cons).c_str());
  std::printf("wrote %zu ledger rows to %s\n", r.ledgers.size(), dir.c_str());
  return 0;
}

int run_study(const std::string& config_path, const std::string& out_dir,
              int jobs, vshock::SweepAxis axis) {
  vshock::StudyConfig c = vshock::load_config(config_path);
  if (!out_dir.empty()) c.out_dir = out_dir;
  if (jobs > 0) c.jobs = jobs;
  c.axis = axis;
  vshock::StudyReport rep;
  switch (axis) {
    case vshock::SweepAxis::epsilon:
      rep = vshock::sweep_epsilon(c);
      break;
    case vshock::SweepAxis::delta:
      rep = vshock::sweep_delta(c);
      break;
    case vshock::SweepAxis::resolution:
      rep = vshock::refinement_study(c);
      break;
  }
  vshock::emit_report(rep, c.out_dir);
  for (const vshock::CriterionOutcome& o : rep.criteria) {
    std::printf("[%s] %s value=%s %s\n", o.pass ? "PASS" : "FAIL",
                o.name.c_str(), vshock::format_double(o.value).c_str(),
                o.detail.c_str());
  }
  std::printf("report written to %s (config %s)\n", c.out_dir.c_str(),
              vshock::hash_hex(rep.config_hash).c_str());
  return rep.all_pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Viscous shock profiles and vanishing-viscosity diagnostics "
               "for 1-D compressible flow"};
  app.require_subcommand(1);

  ProfileOptions popt;
  CLI::App* prof = app.add_subcommand(
      "profile", "Solve one traveling-wave profile and report its structure");
  prof->add_option("--v-right", popt.v_right, "Right specific volume");
  prof->add_option("--u-right", popt.u_right, "Right velocity");
  prof->add_option("--theta-right", popt.theta_right, "Right temperature");
  prof->add_option("--gamma", popt.gamma, "Adiabatic exponent");
  prof->add_option("--R", popt.R, "Gas constant");
  prof->add_option("--delta", popt.delta, "Shock strength |p_l - p_r|");
  prof->add_option("--eps", popt.eps, "Viscosity");
  prof->add_option("--kappa", popt.kappa, "Heat conductivity");
  prof->add_option("--half-width", popt.half_width,
                   "Grid half width (0 = automatic)");
  prof->add_option("--dxi", popt.dxi, "Grid spacing");
  prof->add_option("--out", popt.out, "CSV output path");

  std::string config_path;
  std::string out_dir;
  int jobs = 0;

  CLI::App* sim = app.add_subcommand(
      "simulate", "Run one simulation from a config file");
  sim->add_option("--config", config_path, "TOML or JSON study config")
      ->required();
  sim->add_option("--out", out_dir, "Output directory override");

  CLI::App* sweep_eps = app.add_subcommand(
      "sweep-eps", "Viscosity sweep: away-from-shock convergence");
  CLI::App* sweep_del = app.add_subcommand(
      "sweep-delta", "Strength sweep: profile structure across delta");
  CLI::App* refine = app.add_subcommand(
      "refine", "Joint grid refinement of the balance residual");
  for (CLI::App* cmd : {sweep_eps, sweep_del, refine}) {
    cmd->add_option("--config", config_path, "TOML or JSON study config")
        ->required();
    cmd->add_option("--out", out_dir, "Output directory override");
    cmd->add_option("--jobs", jobs, "Worker threads (0 = from config)");
  }

  std::string scratch = "acceptance_out";
  int vjobs = 1;
  CLI::App* verify = app.add_subcommand(
      "verify", "Run the full verification suite (ten checks)");
  verify->add_option("--scratch", scratch, "Scratch directory for outputs");
  verify->add_option("--jobs", vjobs, "Worker threads");

  CLI11_PARSE(app, argc, argv);

  try {
    if (prof->parsed()) return run_profile(popt);
    if (sim->parsed()) return run_simulate(config_path, out_dir);
    if (sweep_eps->parsed()) {
      return run_study(config_path, out_dir, jobs,
                       vshock::SweepAxis::epsilon);
    }
    if (sweep_del->parsed()) {
      return run_study(config_path, out_dir, jobs, vshock::SweepAxis::delta);
    }
    if (refine->parsed()) {
      return run_study(config_path, out_dir, jobs,
                       vshock::SweepAxis::resolution);
    }
    if (verify->parsed()) {
      const auto outcomes = vshock::acceptance_suite(scratch, vjobs, false);
      int passed = 0;
      for (const auto& o : outcomes) passed += o.pass ? 1 : 0;
      std::printf("%d/%zu checks passed\n", passed, outcomes.size());
      return passed == static_cast<int>(outcomes.size()) ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
