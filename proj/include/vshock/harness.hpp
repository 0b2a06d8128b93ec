#ifndef VSHOCK_HARNESS_HPP_
#define VSHOCK_HARNESS_HPP_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "vshock/solver.hpp"

namespace vshock {

enum class SweepAxis { epsilon, delta, resolution };

// Pass/fail tolerance bands, defaulted to the shipped acceptance values.
struct CriteriaBands {
  double slope_lo = 1.6;
  double slope_hi = 2.4;            // chord / logistic residual slopes vs delta
  double decay_slope_tol = 0.25;    // tail decay-rate slope 1 +- tol
  double refine_ratio_lo = 2.8;
  double refine_ratio_hi = 5.2;     // identity-residual ratio per halving
  double away_final_factor = 0.5;   // last away error <= factor * first
  double shift_ratio_headroom = 1.25;  // |Xdot| <= headroom*C_fit*||psi||_inf
};

// A study: one solver base description plus a sweep axis. base.shock is the
// solved jump for target_delta; the target is kept so that serialization
// round-trips bit for bit.
struct StudyConfig {
  SolverConfig base{};
  double target_delta = 0.2;
  SweepAxis axis = SweepAxis::epsilon;
  std::vector<double> values;  // eps values / delta values / dy values
  double T = 1.0;              // physical horizon for epsilon studies
  double h = 0.5;              // physical exclusion window for epsilon studies
  std::string out_dir = "out";
  int jobs = 1;
  CriteriaBands bands{};
};

// One evaluated pass/fail criterion.
struct CriterionOutcome {
  std::string name;
  bool pass = false;
  double value = 0.0;
  std::string detail;
};

// Study output: a summary table (fixed column schema per study kind),
// evaluated criteria, and the per-run ledger series for CSV emission.
struct StudyReport {
  std::string study;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<CriterionOutcome> criteria;
  std::vector<std::pair<std::string, std::vector<Ledger>>> ledgers;
  std::uint64_t config_hash = 0;
  bool all_pass() const;
};

// Reads a TOML (.toml) or JSON (.json) study description, fills defaults and
// validates. Unknown keys are rejected. Throws ParseError / ValidationError
// with the offending field path in the message.
StudyConfig load_config(const std::string& path);

// Canonical JSON form of the config; load_config on a file holding this
// string reproduces an equal config. The config hash is FNV-1a over it.
std::string serialize_config(const StudyConfig& c);
std::uint64_t config_hash(const StudyConfig& c);
void validate(const StudyConfig& c);

// For each eps value: runs the scaled simulation with Riemann data to
// tau = T/eps, records the sup over output times tau >= h/eps of the
// away-from-shock error with window h/eps, the physical shift |eps X(T/eps)|
// and the max |Xdot|/||psi||_inf ratio. Criteria: away error strictly
// decreasing with final <= factor*first, |eps X| decreasing, and the shift
// ratio bound fitted on the first (coarsest) run holding on the others.
StudyReport sweep_epsilon(const StudyConfig& config);

// For each delta value: solves the profile (eps = kappa = 1) and records the
// chord identity residual, the logistic-rate residual and the fitted tail
// decay rate; criteria are the log-log slopes across delta.
StudyReport sweep_delta(const StudyConfig& config);

// Joint (dy, dtau) halving across the resolution values: records the
// identity residual per level; criteria are the per-halving ratios.
StudyReport refinement_study(const StudyConfig& config);

// Writes summary.csv, one ledger CSV per run and a machine-readable pass/fail
// JSON into dir; file names embed the config hash. Byte-identical across
// repeated invocations.
void emit_report(const StudyReport& report, const std::string& dir);

// The shipped verification suite (the ten acceptance checks). scratch_dir
// receives the simulation outputs needed by the determinism check. Each
// outcome prints as one line: "[PASS] name value detail".
std::vector<CriterionOutcome> acceptance_suite(const std::string& scratch_dir,
                                               int jobs = 1, bool quiet = false);

}  // namespace vshock

#endif  // VSHOCK_HARNESS_HPP_
