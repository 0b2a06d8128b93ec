// Study driver: configuration files, the three parameter studies, report
// emission and the shipped verification suite.

#include "vshock/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "vshock/csv.hpp"
#include "vshock/errors.hpp"

namespace vshock {

namespace {

// ---------------------------------------------------------------------------
// Configuration reading. Both file formats land in the same section/key map,
// which the fill step consumes; keys left over afterwards are unknown.

struct ConfigValue {
  enum class Kind { number, text, array } kind = Kind::number;
  double number = 0.0;
  std::string text;
  std::vector<double> array;
};

using Section = std::map<std::string, ConfigValue>;
using Tree = std::map<std::string, Section>;

const char* kSections[] = {"gas", "shock", "solver", "study", "bands"};

bool known_section(const std::string& s) {
  for (const char* k : kSections) {
    if (s == k) return true;
  }
  return false;
}

std::string trim(const std::string& s) {
  const std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& text, const std::string& where) {
  const std::string t = trim(text);
  char* end = nullptr;
  const double x = std::strtod(t.c_str(), &end);
  if (end == t.c_str() || *end != '\0') {
    throw ParseError(where + ": expected a number, got '" + t + "'");
  }
  return x;
}

Tree parse_toml(const std::string& body, const std::string& path) {
  Tree tree;
  std::string section;
  std::istringstream in(body);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string where = path + ":" + std::to_string(lineno);
    // Strip a comment that starts outside quotes.
    bool quoted = false;
    std::string line;
    for (char c : raw) {
      if (c == '"') quoted = !quoted;
      if (c == '#' && !quoted) break;
      line.push_back(c);
    }
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(where + ": unclosed section");
      section = trim(line.substr(1, line.size() - 2));
      if (!known_section(section)) {
        throw ParseError(where + ": unknown section [" + section + "]");
      }
      tree[section];
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ParseError(where + ": expected key = value");
    }
    if (section.empty()) {
      throw ParseError(where + ": key outside any [section]");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError(where + ": empty key");
    if (tree[section].count(key)) {
      throw ParseError(where + ": duplicate key " + section + "." + key);
    }
    ConfigValue cv;
    if (!val.empty() && val.front() == '"') {
      if (val.size() < 2 || val.back() != '"') {
        throw ParseError(where + ": unterminated string");
      }
      cv.kind = ConfigValue::Kind::text;
      cv.text = val.substr(1, val.size() - 2);
    } else if (!val.empty() && val.front() == '[') {
      if (val.back() != ']') throw ParseError(where + ": unclosed array");
      cv.kind = ConfigValue::Kind::array;
      std::string inner = trim(val.substr(1, val.size() - 2));
      if (!inner.empty()) {
        std::istringstream items(inner);
        std::string item;
        while (std::getline(items, item, ',')) {
          cv.array.push_back(parse_number(item, where));
        }
      }
    } else {
      cv.kind = ConfigValue::Kind::number;
      cv.number = parse_number(val, where);
    }
    tree[section][key] = std::move(cv);
  }
  return tree;
}

Tree parse_json_tree(const std::string& body, const std::string& path) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(body);
  } catch (const std::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  if (!doc.is_object()) throw ParseError(path + ": top level must be an object");
  Tree tree;
  for (const auto& [sec, obj] : doc.items()) {
    if (!known_section(sec)) {
      throw ParseError(path + ": unknown section " + sec);
    }
    if (!obj.is_object()) {
      throw ParseError(path + ": section " + sec + " must be an object");
    }
    for (const auto& [key, val] : obj.items()) {
      const std::string where = path + ": " + sec + "." + key;
      ConfigValue cv;
      if (val.is_number()) {
        cv.kind = ConfigValue::Kind::number;
        cv.number = val.get<double>();
      } else if (val.is_string()) {
        cv.kind = ConfigValue::Kind::text;
        cv.text = val.get<std::string>();
      } else if (val.is_array()) {
        cv.kind = ConfigValue::Kind::array;
        for (const auto& item : val) {
          if (!item.is_number()) {
            throw ParseError(where + ": array entries must be numbers");
          }
          cv.array.push_back(item.get<double>());
        }
      } else {
        throw ParseError(where + ": unsupported value type");
      }
      tree[sec][key] = std::move(cv);
    }
  }
  return tree;
}

// Typed, destructive access into one section.
struct SectionReader {
  Section* section;
  std::string name;

  double num(const char* key, double fallback) {
    if (!section) return fallback;
    auto it = section->find(key);
    if (it == section->end()) return fallback;
    if (it->second.kind != ConfigValue::Kind::number) {
      throw ParseError(name + "." + key + ": expected a number");
    }
    const double x = it->second.number;
    section->erase(it);
    return x;
  }
  std::string text(const char* key, const std::string& fallback) {
    if (!section) return fallback;
    auto it = section->find(key);
    if (it == section->end()) return fallback;
    if (it->second.kind != ConfigValue::Kind::text) {
      throw ParseError(name + "." + key + ": expected a string");
    }
    std::string s = it->second.text;
    section->erase(it);
    return s;
  }
  std::vector<double> array(const char* key, std::vector<double> fallback) {
    if (!section) return fallback;
    auto it = section->find(key);
    if (it == section->end()) return fallback;
    if (it->second.kind != ConfigValue::Kind::array) {
      throw ParseError(name + "." + key + ": expected an array");
    }
    std::vector<double> a = it->second.array;
    section->erase(it);
    return a;
  }
};

StudyConfig fill_config(Tree tree) {
  StudyConfig c;
  auto reader = [&](const char* name) {
    auto it = tree.find(name);
    return SectionReader{it == tree.end() ? nullptr : &it->second, name};
  };

  SectionReader gas = reader("gas");
  c.base.gas.gamma = gas.num("gamma", 5.0 / 3.0);
  c.base.gas.R = gas.num("R", 1.0);
  c.base.gas.nu = gas.num("nu", 1.0);

  SectionReader shock = reader("shock");
  const double v_right = shock.num("v_right", 1.0);
  const double u_right = shock.num("u_right", 0.0);
  const double theta_right = shock.num("theta_right", 1.0);
  c.target_delta = shock.num("delta", 0.2);

  SectionReader solver = reader("solver");
  c.base.margin_left = solver.num("margin_left", 0.0);
  c.base.margin_right = solver.num("margin_right", 0.0);
  c.base.dy = solver.num("dy", 0.05);
  c.base.cfl_advective = solver.num("cfl_advective", 0.45);
  c.base.cfl_diffusive = solver.num("cfl_diffusive", 0.4);
  c.base.dtau = solver.num("dtau", 0.0);
  c.base.tau_end = solver.num("tau_end", 1.0);
  c.base.output_stride =
      static_cast<int>(std::lround(solver.num("output_stride", 100.0)));
  c.base.h_exclusion = solver.num("h_exclusion", 5.0);
  const std::string init = solver.text("initial_data", "riemann");
  if (init == "riemann") {
    c.base.initial_data = InitialData::riemann;
  } else if (init == "profile") {
    c.base.initial_data = InitialData::profile;
  } else if (init == "profile_bump") {
    c.base.initial_data = InitialData::profile_bump;
  } else {
    throw ValidationError("solver.initial_data: must be riemann, profile or "
                          "profile_bump");
  }
  c.base.bump_amplitude = solver.num("bump_amplitude", 0.01);
  c.base.bump_width = solver.num("bump_width", 5.0);
  c.base.bump_center = solver.num("bump_center", -10.0);
  c.base.profile_dxi = solver.num("profile_dxi", 0.25);
  c.base.profile_half_width = solver.num("profile_half_width", 0.0);

  SectionReader study = reader("study");
  const std::string axis = study.text("axis", "epsilon");
  if (axis == "epsilon") {
    c.axis = SweepAxis::epsilon;
  } else if (axis == "delta") {
    c.axis = SweepAxis::delta;
  } else if (axis == "resolution") {
    c.axis = SweepAxis::resolution;
  } else {
    throw ValidationError("study.axis: must be epsilon, delta or resolution");
  }
  c.values = study.array("values", {0.1, 0.05, 0.025});
  c.T = study.num("T", 1.0);
  c.h = study.num("h", 0.5);
  c.out_dir = study.text("out_dir", "out");
  c.jobs = static_cast<int>(std::lround(study.num("jobs", 1.0)));

  SectionReader bands = reader("bands");
  c.bands.slope_lo = bands.num("slope_lo", 1.6);
  c.bands.slope_hi = bands.num("slope_hi", 2.4);
  c.bands.decay_slope_tol = bands.num("decay_slope_tol", 0.25);
  c.bands.refine_ratio_lo = bands.num("refine_ratio_lo", 2.8);
  c.bands.refine_ratio_hi = bands.num("refine_ratio_hi", 5.2);
  c.bands.away_final_factor = bands.num("away_final_factor", 0.5);
  c.bands.shift_ratio_headroom = bands.num("shift_ratio_headroom", 1.25);

  for (auto& [sec, keys] : tree) {
    if (!keys.empty()) {
      throw ParseError(sec + "." + keys.begin()->first + ": unknown key");
    }
  }

  validate(c.base.gas);
  validate(State{v_right, u_right, theta_right});
  if (!(c.target_delta > 0.0 && c.target_delta <= 0.5)) {
    throw ValidationError("shock.delta: must lie in (0, 0.5]");
  }
  c.base.shock = solve_left_state_for_strength(
      State{v_right, u_right, theta_right}, c.target_delta, c.base.gas);
  validate(c);
  return c;
}

// Fan the index range [0, count) over up to `jobs` worker threads. Results
// must be written into per-index slots by the body.
template <typename F>
void parallel_for(int jobs, int count, F&& body) {
  jobs = std::max(1, std::min(jobs, count));
  if (jobs <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(jobs));
  for (int t = 0; t < jobs; ++t) {
    pool.emplace_back([&]() {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
        try {
          body(i);
        } catch (...) {
          errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

CriterionOutcome make_outcome(std::string name, bool pass, double value,
                              std::string detail) {
  CriterionOutcome o;
  o.name = std::move(name);
  o.pass = pass;
  o.value = value;
  o.detail = std::move(detail);
  return o;
}

}  // namespace

bool StudyReport::all_pass() const {
  if (criteria.empty()) return false;
  for (const auto& c : criteria) {
    if (!c.pass) return false;
  }
  return true;
}

void validate(const StudyConfig& c) {
  validate(c.base);
  if (c.values.empty()) throw ValidationError("study.values: must be non-empty");
  for (double v : c.values) {
    if (!(v > 0.0)) throw ValidationError("study.values: must be positive");
  }
  for (std::size_t i = 1; i < c.values.size(); ++i) {
    if (!(c.values[i] < c.values[i - 1])) {
      throw ValidationError("study.values: must decrease strictly");
    }
  }
  if (c.axis == SweepAxis::delta) {
    for (double v : c.values) {
      if (v > 0.5) {
        throw ValidationError("study.values: shock strengths must be <= 0.5");
      }
    }
  }
  if (c.axis == SweepAxis::resolution) {
    for (std::size_t i = 1; i < c.values.size(); ++i) {
      if (std::fabs(c.values[i - 1] / c.values[i] - 2.0) > 1e-9) {
        throw ValidationError("study.values: resolution levels must halve");
      }
    }
    if (!(c.base.dtau > 0.0)) {
      throw ValidationError("solver.dtau: resolution studies need an explicit "
                            "time step");
    }
  }
  if (!(c.T > 0.0)) throw ValidationError("study.T: must be > 0");
  if (c.h < 0.0) throw ValidationError("study.h: must be >= 0");
  if (c.out_dir.empty()) throw ValidationError("study.out_dir: must be set");
  if (c.jobs < 1 || c.jobs > 256) {
    throw ValidationError("study.jobs: must lie in [1, 256]");
  }
  const CriteriaBands& b = c.bands;
  if (!(b.slope_lo < b.slope_hi)) {
    throw ValidationError("bands.slope_lo: must be below slope_hi");
  }
  if (!(b.decay_slope_tol > 0.0)) {
    throw ValidationError("bands.decay_slope_tol: must be > 0");
  }
  if (!(b.refine_ratio_lo < b.refine_ratio_hi)) {
    throw ValidationError("bands.refine_ratio_lo: must be below refine_ratio_hi");
  }
  if (!(b.away_final_factor > 0.0)) {
    throw ValidationError("bands.away_final_factor: must be > 0");
  }
  if (!(b.shift_ratio_headroom >= 1.0)) {
    throw ValidationError("bands.shift_ratio_headroom: must be >= 1");
  }
}

StudyConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("load_config: cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string body = buf.str();
  if (path.size() > 5 && path.compare(path.size() - 5, 5, ".toml") == 0) {
    return fill_config(parse_toml(body, path));
  }
  if (path.size() > 5 && path.compare(path.size() - 5, 5, ".json") == 0) {
    return fill_config(parse_json_tree(body, path));
  }
  throw ParseError("load_config: " + path +
                   " must end in .toml or .json");
}

std::string serialize_config(const StudyConfig& c) {
  std::ostringstream out;
  auto num = [&](const char* key, double v, bool comma = true) {
    out << "\"" << key << "\":" << format_double(v) << (comma ? "," : "");
  };
  out << "{\"gas\":{";
  num("gamma", c.base.gas.gamma);
  num("R", c.base.gas.R);
  num("nu", c.base.gas.nu, false);
  out << "},\"shock\":{";
  num("v_right", c.base.shock.right.v);
  num("u_right", c.base.shock.right.u);
  num("theta_right", c.base.shock.right.theta);
  num("delta", c.target_delta, false);
  out << "},\"solver\":{";
  num("margin_left", c.base.margin_left);
  num("margin_right", c.base.margin_right);
  num("dy", c.base.dy);
  num("cfl_advective", c.base.cfl_advective);
  num("cfl_diffusive", c.base.cfl_diffusive);
  num("dtau", c.base.dtau);
  num("tau_end", c.base.tau_end);
  out << "\"output_stride\":" << c.base.output_stride << ",";
  num("h_exclusion", c.base.h_exclusion);
  const char* init = c.base.initial_data == InitialData::riemann ? "riemann"
                     : c.base.initial_data == InitialData::profile
                         ? "profile"
                         : "profile_bump";
  out << "\"initial_data\":\"" << init << "\",";
  num("bump_amplitude", c.base.bump_amplitude);
  num("bump_width", c.base.bump_width);
  num("bump_center", c.base.bump_center);
  num("profile_dxi", c.base.profile_dxi);
  num("profile_half_width", c.base.profile_half_width, false);
  out << "},\"study\":{";
  const char* axis = c.axis == SweepAxis::epsilon ? "epsilon"
                     : c.axis == SweepAxis::delta ? "delta"
                                                  : "resolution";
  out << "\"axis\":\"" << axis << "\",\"values\":[";
  for (std::size_t i = 0; i < c.values.size(); ++i) {
    out << (i ? "," : "") << format_double(c.values[i]);
  }
  out << "],";
  num("T", c.T);
  num("h", c.h);
  out << "\"out_dir\":\"" << json_escape(c.out_dir) << "\",";
  out << "\"jobs\":" << c.jobs;
  out << "},\"bands\":{";
  num("slope_lo", c.bands.slope_lo);
  num("slope_hi", c.bands.slope_hi);
  num("decay_slope_tol", c.bands.decay_slope_tol);
  num("refine_ratio_lo", c.bands.refine_ratio_lo);
  num("refine_ratio_hi", c.bands.refine_ratio_hi);
  num("away_final_factor", c.bands.away_final_factor);
  num("shift_ratio_headroom", c.bands.shift_ratio_headroom, false);
  out << "}}";
  return out.str();
}

std::uint64_t config_hash(const StudyConfig& c) {
  return fnv1a64(serialize_config(c));
}

StudyReport sweep_epsilon(const StudyConfig& config) {
  validate(config);
  if (config.axis != SweepAxis::epsilon) {
    throw ValidationError("study.axis: sweep_epsilon needs axis = epsilon");
  }
  const int n = static_cast<int>(config.values.size());
  const double delta = config.base.shock.delta;
  const double L = config.base.profile_half_width > 0.0
                       ? config.base.profile_half_width
                       : default_half_width(delta, 1.0, config.base.gas.nu);
  const int Np = static_cast<int>(
                     std::lround(2.0 * L / config.base.profile_dxi)) + 1;
  const Profile prof = solve_profile(config.base.shock, 1.0,
                                     config.base.gas.nu, L, Np,
                                     config.base.gas);
  const ProfileSampler sampler(prof, config.base.gas);

  std::vector<RunResult> results(static_cast<std::size_t>(n));
  parallel_for(config.jobs, n, [&](int i) {
    SolverConfig sc = config.base;
    const double eps = config.values[static_cast<std::size_t>(i)];
    sc.tau_end = config.T / eps;
    sc.h_exclusion = config.h / eps;
    results[static_cast<std::size_t>(i)] = run(sc, sampler);
  });

  StudyReport rep;
  rep.study = "sweep_epsilon";
  rep.config_hash = config_hash(config);
  rep.columns = {"eps", "away_sup", "eps_X_end", "xdot_ratio_max", "dtau"};

  std::vector<double> away(n), epsX(n), ratio(n);
  for (int i = 0; i < n; ++i) {
    const double eps = config.values[static_cast<std::size_t>(i)];
    const RunResult& r = results[static_cast<std::size_t>(i)];
    double sup = -1.0;
    for (std::size_t k = 0; k < r.ledgers.size(); ++k) {
      if (r.ledgers[k].tau >= config.h / eps) {
        sup = std::max(sup, r.away_errors[k]);
      }
    }
    if (sup < 0.0) {
      throw EmptyRegion("sweep_epsilon: no diagnostic rows past tau = h/eps");
    }
    double rmax = 0.0;
    for (const Ledger& row : r.ledgers) {
      if (row.psi_linf > 1e-14) {
        rmax = std::max(rmax, std::fabs(row.Xdot) / row.psi_linf);
      }
    }
    away[static_cast<std::size_t>(i)] = sup;
    epsX[static_cast<std::size_t>(i)] = eps * std::fabs(r.final_field.X);
    ratio[static_cast<std::size_t>(i)] = rmax;
    rep.rows.push_back({eps, sup, epsX[static_cast<std::size_t>(i)], rmax,
                        r.dtau});
    rep.ledgers.emplace_back("eps_" + format_double(eps),
                             r.ledgers);
  }

  auto list = [&](const std::vector<double>& v) {
    std::string s;
    for (int i = 0; i < n; ++i) {
      s += (i ? ", " : "") + format_double(v[static_cast<std::size_t>(i)]);
    }
    return s;
  };

  double worst_adj = 0.0;
  bool decreasing = true;
  for (int i = 1; i < n; ++i) {
    const double q = away[static_cast<std::size_t>(i)] /
                     away[static_cast<std::size_t>(i - 1)];
    worst_adj = std::max(worst_adj, q);
    decreasing = decreasing && q < 1.0;
  }
  rep.criteria.push_back(make_outcome(
      "away_decreasing", decreasing, worst_adj, "sups: " + list(away)));

  const double final_ratio = away[static_cast<std::size_t>(n - 1)] / away[0];
  rep.criteria.push_back(make_outcome(
      "away_final_factor", final_ratio <= config.bands.away_final_factor,
      final_ratio, "last/first of " + list(away)));

  double worst_sh = 0.0;
  bool sh_dec = true;
  for (int i = 1; i < n; ++i) {
    const double q = epsX[static_cast<std::size_t>(i)] /
                     std::max(epsX[static_cast<std::size_t>(i - 1)], 1e-300);
    worst_sh = std::max(worst_sh, q);
    sh_dec = sh_dec && q < 1.0;
  }
  rep.criteria.push_back(make_outcome(
      "shift_vanishing", sh_dec, worst_sh, "eps*|X(T/eps)|: " + list(epsX)));

  const double C_fit = ratio[0];
  double worst_ratio = 0.0;
  for (int i = 0; i < n; ++i) {
    worst_ratio = std::max(worst_ratio, ratio[static_cast<std::size_t>(i)]);
  }
  const bool bound_ok =
      C_fit > 0.0 &&
      worst_ratio <= config.bands.shift_ratio_headroom * C_fit;
  rep.criteria.push_back(make_outcome(
      "xdot_psi_bound", bound_ok, C_fit > 0.0 ? worst_ratio / C_fit : -1.0,
      "|Xdot|/||psi||: " + list(ratio) + "; bound " +
          format_double(config.bands.shift_ratio_headroom) + " x " +
          format_double(C_fit)));
  return rep;
}

StudyReport sweep_delta(const StudyConfig& config) {
  validate(config);
  if (config.axis != SweepAxis::delta) {
    throw ValidationError("study.axis: sweep_delta needs axis = delta");
  }
  const int n = static_cast<int>(config.values.size());
  const GasParams& g = config.base.gas;

  struct Row {
    ProfileReport rep;
    double chord;
    double logistic;
  };
  std::vector<Row> rows(static_cast<std::size_t>(n));
  parallel_for(config.jobs, n, [&](int i) {
    const double d = config.values[static_cast<std::size_t>(i)];
    const ShockWave w =
        solve_left_state_for_strength(config.base.shock.right, d, g);
    const double L = default_half_width(w.delta, 1.0, g.nu);
    const int Np = static_cast<int>(
                       std::lround(2.0 * L / config.base.profile_dxi)) + 1;
    const Profile prof = solve_profile(w, 1.0, g.nu, L, Np, g);
    Row& row = rows[static_cast<std::size_t>(i)];
    row.rep = verify_profile(prof, g);
    row.chord = chord_identity_residual(prof, g);
    row.logistic = z_coordinate(prof, g).logistic_residual;
  });

  StudyReport rep;
  rep.study = "sweep_delta";
  rep.config_hash = config_hash(config);
  rep.columns = {"delta", "chord_residual", "logistic_residual", "rate_left",
                 "rate_right", "endpoint_err", "monotone", "dV_scaled_max"};

  std::vector<double> ld(n), lcord(n), llog(n), lrl(n), lrr(n);
  bool monotone_all = true;
  double worst_endpoint = 0.0;
  for (int i = 0; i < n; ++i) {
    const double d = config.values[static_cast<std::size_t>(i)];
    const Row& row = rows[static_cast<std::size_t>(i)];
    const bool mono = row.rep.v_increasing && row.rep.u_decreasing &&
                      row.rep.theta_decreasing;
    monotone_all = monotone_all && mono;
    const double ep = std::max(row.rep.left_endpoint_err,
                               row.rep.right_endpoint_err);
    worst_endpoint = std::max(worst_endpoint, ep);
    rep.rows.push_back({d, row.chord, row.logistic, row.rep.left_decay_rate,
                        row.rep.right_decay_rate, ep, mono ? 1.0 : 0.0,
                        row.rep.max_dV_scaled});
    ld[static_cast<std::size_t>(i)] = std::log(d);
    lcord[static_cast<std::size_t>(i)] = std::log(row.chord);
    llog[static_cast<std::size_t>(i)] = std::log(row.logistic);
    lrl[static_cast<std::size_t>(i)] = std::log(row.rep.left_decay_rate);
    lrr[static_cast<std::size_t>(i)] = std::log(row.rep.right_decay_rate);
  }

  rep.criteria.push_back(make_outcome("monotone", monotone_all,
                                      monotone_all ? 1.0 : 0.0,
                                      "V up, U down, Theta down at all deltas"));
  rep.criteria.push_back(make_outcome("endpoints", worst_endpoint <= 1e-6,
                                      worst_endpoint,
                                      "worst grid-end miss"));
  const double s_left = ls_slope(ld, lrl);
  const double s_right = ls_slope(ld, lrr);
  rep.criteria.push_back(make_outcome(
      "decay_slope_left",
      std::fabs(s_left - 1.0) <= config.bands.decay_slope_tol, s_left,
      "log-rate vs log-delta"));
  rep.criteria.push_back(make_outcome(
      "decay_slope_right",
      std::fabs(s_right - 1.0) <= config.bands.decay_slope_tol, s_right,
      "log-rate vs log-delta"));

  double worst_K = 0.0;
  for (int i = 1; i < n; ++i) {
    const std::size_t a = static_cast<std::size_t>(i - 1);
    const std::size_t b = static_cast<std::size_t>(i);
    const double Kl = (rows[b].rep.left_decay_rate / config.values[b]) /
                      (rows[a].rep.left_decay_rate / config.values[a]);
    const double Kr = (rows[b].rep.right_decay_rate / config.values[b]) /
                      (rows[a].rep.right_decay_rate / config.values[a]);
    worst_K = std::max({worst_K, std::fabs(Kl - 1.0), std::fabs(Kr - 1.0)});
  }
  rep.criteria.push_back(make_outcome("rate_coefficient_stable",
                                      worst_K <= 0.30, worst_K,
                                      "adjacent rate/delta drift"));

  const double chord_slope = ls_slope(ld, lcord);
  rep.criteria.push_back(make_outcome(
      "chord_residual_slope",
      chord_slope >= config.bands.slope_lo &&
          chord_slope <= config.bands.slope_hi,
      chord_slope, "log-residual vs log-delta"));
  const double log_slope = ls_slope(ld, llog);
  rep.criteria.push_back(make_outcome(
      "logistic_residual_slope",
      log_slope >= config.bands.slope_lo && log_slope <= config.bands.slope_hi,
      log_slope, "log-residual vs log-delta"));
  return rep;
}

StudyReport refinement_study(const StudyConfig& config) {
  validate(config);
  if (config.axis != SweepAxis::resolution) {
    throw ValidationError("study.axis: refinement_study needs axis = "
                          "resolution");
  }
  const int n = static_cast<int>(config.values.size());
  const GasParams& g = config.base.gas;
  const double delta = config.base.shock.delta;
  const double L = config.base.profile_half_width > 0.0
                       ? config.base.profile_half_width
                       : default_half_width(delta, 1.0, g.nu);
  const int Np = static_cast<int>(
                     std::lround(2.0 * L / config.base.profile_dxi)) + 1;
  const Profile prof =
      solve_profile(config.base.shock, 1.0, g.nu, L, Np, g);
  const ProfileSampler sampler(prof, g);

  std::vector<RunResult> results(static_cast<std::size_t>(n));
  parallel_for(config.jobs, n, [&](int i) {
    SolverConfig sc = config.base;
    sc.dy = config.values[static_cast<std::size_t>(i)];
    sc.dtau = config.base.dtau *
              (config.values[static_cast<std::size_t>(i)] / config.values[0]);
    const double stride = (sc.tau_end / 5.0) / sc.dtau;
    sc.output_stride = static_cast<int>(std::lround(stride));
    if (std::fabs(stride - std::lround(stride)) > 1e-9) {
      throw ValidationError("solver.dtau: diagnostic checkpoints must land "
                            "on whole steps at every level");
    }
    results[static_cast<std::size_t>(i)] = run(sc, sampler);
  });

  StudyReport rep;
  rep.study = "refinement";
  rep.config_hash = config_hash(config);
  rep.columns = {"dy", "dtau", "identity_residual_max", "ratio"};

  std::vector<double> metric(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const RunResult& r = results[static_cast<std::size_t>(i)];
    if (r.ledgers.empty()) {
      throw EmptyRegion("refinement_study: no diagnostic rows");
    }
    double m = 0.0;
    for (const Ledger& row : r.ledgers) {
      m = std::max(m, row.identity_residual);
    }
    metric[static_cast<std::size_t>(i)] = m;
    const double ratio =
        i > 0 ? metric[static_cast<std::size_t>(i - 1)] / m : 0.0;
    rep.rows.push_back({config.values[static_cast<std::size_t>(i)], r.dtau, m,
                        ratio});
    rep.ledgers.emplace_back(
        "dy_" + format_double(config.values[static_cast<std::size_t>(i)]),
        r.ledgers);
  }
  for (int i = 1; i < n; ++i) {
    const double ratio = metric[static_cast<std::size_t>(i - 1)] /
                         metric[static_cast<std::size_t>(i)];
    rep.criteria.push_back(make_outcome(
        "refine_ratio_" + std::to_string(i),
        ratio >= config.bands.refine_ratio_lo &&
            ratio <= config.bands.refine_ratio_hi,
        ratio,
        format_double(config.values[static_cast<std::size_t>(i - 1)]) +
            " -> " +
            format_double(config.values[static_cast<std::size_t>(i)])));
  }
  return rep;
}

void emit_report(const StudyReport& report, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::string tag = hash_hex(report.config_hash).substr(0, 12);
  const std::string stem = dir + "/" + report.study + "_" + tag;

  {
    std::ofstream out(stem + "_summary.csv");
    if (!out) throw ParseError("emit_report: cannot open " + stem +
                               "_summary.csv");
    for (std::size_t i = 0; i < report.columns.size(); ++i) {
      out << (i ? "," : "") << report.columns[i];
    }
    out << "\n";
    for (const auto& row : report.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) {
        out << (i ? "," : "") << format_double(row[i]);
      }
      out << "\n";
    }
  }
  for (const auto& [name, rows] : report.ledgers) {
    write_ledger_csv(stem + "_" + name + ".csv", rows);
  }
  {
    std::ofstream out(stem + "_criteria.json");
    if (!out) throw ParseError("emit_report: cannot open " + stem +
                               "_criteria.json");
    out << "{\"study\":\"" << json_escape(report.study) << "\",";
    out << "\"config_hash\":\"" << hash_hex(report.config_hash) << "\",";
    out << "\"all_pass\":" << (report.all_pass() ? "true" : "false") << ",";
    out << "\"criteria\":[";
    for (std::size_t i = 0; i < report.criteria.size(); ++i) {
      const CriterionOutcome& c = report.criteria[i];
      out << (i ? "," : "") << "{\"name\":\"" << json_escape(c.name)
          << "\",\"pass\":" << (c.pass ? "true" : "false")
          << ",\"value\":" << format_double(c.value) << ",\"detail\":\""
          << json_escape(c.detail) << "\"}";
    }
    out << "]}\n";
  }
}

// ---------------------------------------------------------------------------
// The shipped verification suite.

namespace {

GasParams reference_gas() { return GasParams{5.0 / 3.0, 1.0, 1.0}; }
State reference_right() { return State{1.0, 0.0, 1.0}; }

void print_outcome(const CriterionOutcome& c, bool quiet) {
  if (quiet) return;
  std::printf("[%s] %s value=%s %s\n", c.pass ? "PASS" : "FAIL",
              c.name.c_str(), format_double(c.value).c_str(),
              c.detail.c_str());
  std::fflush(stdout);
}

CriterionOutcome guarded(const std::string& name,
                         CriterionOutcome (*body)(int, const std::string&),
                         int jobs, const std::string& scratch) {
  try {
    return body(jobs, scratch);
  } catch (const std::exception& e) {
    return make_outcome(name, false, -1.0,
                        std::string("aborted: ") + e.what());
  }
}

CriterionOutcome check_jump_conditions(int, const std::string&) {
  const double gammas[] = {1.4, 5.0 / 3.0, 2.0};
  const double ratios[] = {0.80, 0.85, 0.90, 0.95, 0.99};
  const State rights[] = {{1.0, 0.0, 1.0},  {0.7, -0.3, 0.8},
                          {1.3, 0.4, 1.2},  {0.9, 0.2, 1.1},
                          {1.1, -0.2, 0.9}, {1.2, 0.1, 1.3},
                          {0.8, 0.3, 0.7}};
  double worst = 0.0;
  bool lax_ok = true;
  int count = 0;
  for (double gamma : gammas) {
    const GasParams g{gamma, 1.0, 1.0};
    for (const State& right : rights) {
      for (double r : ratios) {
        const ShockWave w = solve_left_state(right, r * right.v, g);
        const auto res = rh_residual(w.left, w.right, w.s3, g);
        worst = std::max({worst, std::fabs(res[0]), std::fabs(res[1]),
                          std::fabs(res[2])});
        lax_ok = lax_ok && check_lax(w, g) && right.u < w.left.u;
        ++count;
      }
    }
  }
  return make_outcome("jump_conditions", worst < 1e-10 && lax_ok && count >= 100,
                      worst,
                      std::to_string(count) +
                          " constructions; admissibility consistent");
}

CriterionOutcome check_wave_structure(int, const std::string&) {
  const GasParams g = reference_gas();
  const std::vector<double> deltas = {0.4, 0.2, 0.1};
  std::vector<double> ld, lrl, lrr, Kl, Kr;
  bool mono = true;
  double worst_end = 0.0;
  for (double d : deltas) {
    const ShockWave w = solve_left_state_for_strength(reference_right(), d, g);
    const double L = default_half_width(w.delta, 1.0, g.nu);
    const int Np = static_cast<int>(std::lround(2.0 * L / 0.25)) + 1;
    const Profile prof = solve_profile(w, 1.0, g.nu, L, Np, g);
    const ProfileReport rep = verify_profile(prof, g);
    mono = mono && rep.v_increasing && rep.u_decreasing && rep.theta_decreasing;
    worst_end = std::max({worst_end, rep.left_endpoint_err,
                          rep.right_endpoint_err});
    ld.push_back(std::log(d));
    lrl.push_back(std::log(rep.left_decay_rate));
    lrr.push_back(std::log(rep.right_decay_rate));
    Kl.push_back(rep.left_decay_rate / d);
    Kr.push_back(rep.right_decay_rate / d);
  }
  const double sl = ls_slope(ld, lrl);
  const double sr = ls_slope(ld, lrr);
  double worst_K = 0.0;
  for (std::size_t i = 1; i < Kl.size(); ++i) {
    worst_K = std::max({worst_K, std::fabs(Kl[i] / Kl[i - 1] - 1.0),
                        std::fabs(Kr[i] / Kr[i - 1] - 1.0)});
  }
  const bool pass = mono && worst_end <= 1e-6 && std::fabs(sl - 1.0) <= 0.25 &&
                    std::fabs(sr - 1.0) <= 0.25 && worst_K <= 0.30;
  return make_outcome(
      "wave_structure", pass, std::max(std::fabs(sl - 1.0),
                                       std::fabs(sr - 1.0)),
      "monotone " + std::string(mono ? "yes" : "NO") + ", endpoint " +
          format_double(worst_end) + ", rate slopes " + format_double(sl) +
          "/" + format_double(sr) + ", coefficient drift " +
          format_double(worst_K));
}

struct ChordLogistic {
  double chord_slope;
  double logistic_slope;
};

ChordLogistic chord_logistic_slopes() {
  const GasParams g = reference_gas();
  const std::vector<double> deltas = {0.2, 0.1, 0.05, 0.025};
  std::vector<double> ld, lc, ll;
  for (double d : deltas) {
    const ShockWave w = solve_left_state_for_strength(reference_right(), d, g);
    const double L = default_half_width(w.delta, 1.0, g.nu);
    const int Np = static_cast<int>(std::lround(2.0 * L / 0.25)) + 1;
    const Profile prof = solve_profile(w, 1.0, g.nu, L, Np, g);
    ld.push_back(std::log(d));
    lc.push_back(std::log(chord_identity_residual(prof, g)));
    ll.push_back(std::log(z_coordinate(prof, g).logistic_residual));
  }
  return ChordLogistic{ls_slope(ld, lc), ls_slope(ld, ll)};
}

CriterionOutcome check_chord(int, const std::string&) {
  const double s = chord_logistic_slopes().chord_slope;
  return make_outcome("chord_constancy", s >= 1.6 && s <= 2.4, s,
                      "second-order residual slope over delta");
}

CriterionOutcome check_logistic(int, const std::string&) {
  const double s = chord_logistic_slopes().logistic_slope;
  return make_outcome("logistic_rate", s >= 1.6 && s <= 2.4, s,
                      "second-order residual slope over delta");
}

CriterionOutcome check_poincare(int, const std::string&) {
  const int N = 1024;
  std::mt19937 rng(12345u);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  double worst = -1e300;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> f(N);
    for (double& x : f) x = dist(rng);
    std::vector<double> fp(N - 1);
    const double dz = 1.0 / static_cast<double>(N - 1);
    for (int k = 0; k + 1 < N; ++k) fp[k] = (f[k + 1] - f[k]) / dz;
    const PoincarePair pair = poincare_gap(f, fp);
    worst = std::max(worst, pair.lhs - pair.rhs);
  }
  // Equality for affine data.
  double eq = 0.0;
  for (double a : {1.0, -1.7}) {
    for (double b : {0.0, 0.3}) {
      std::vector<double> f(N), fp(N, a);
      for (int i = 0; i < N; ++i) {
        f[i] = a * static_cast<double>(i) / static_cast<double>(N - 1) + b;
      }
      const PoincarePair pair = poincare_gap(f, fp);
      eq = std::max(eq, std::fabs(pair.lhs - pair.rhs));
    }
  }
  const double margin = 10.0 / (static_cast<double>(N) * N);
  const bool pass = worst <= margin && eq <= 1e-10;
  return make_outcome("weighted_poincare", pass, worst,
                      "max lhs-rhs over 1000 draws; affine gap " +
                          format_double(eq));
}

CriterionOutcome check_balance_refinement(int jobs, const std::string&) {
  const GasParams g = reference_gas();
  const ShockWave w = solve_left_state_for_strength(reference_right(), 0.2, g);
  const double L = default_half_width(w.delta, 1.0, g.nu);
  const int Np = static_cast<int>(std::lround(2.0 * L / 0.25)) + 1;
  const Profile prof = solve_profile(w, 1.0, g.nu, L, Np, g);
  const ProfileSampler sampler(prof, g);

  // Exact traveling-wave snapshots: every balance entry must vanish.
  const double dtau = 7.8125e-4;
  const double X = 0.3;
  Grid grid = make_grid(-60.0, w.s3 + 60.0,
                        static_cast<int>(std::lround((w.s3 + 120.0) / 0.05)) +
                            1);
  auto snap = [&](double tau) {
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
  };
  const Field f0 = snap(0.5 - dtau), f1 = snap(0.5), f2 = snap(0.5 + dtau);
  const Ledger zero_row =
      term_ledger(f0, f1, f2, sampler, X, 0.0, dtau, w.delta, g);
  const double zero_resid = zero_row.identity_residual;

  StudyConfig rc;
  rc.base.gas = g;
  rc.base.shock = w;
  rc.target_delta = 0.2;
  rc.base.margin_left = 60.0;
  rc.base.margin_right = 60.0;
  rc.base.dtau = 0.2 / 256.0;
  rc.base.tau_end = 1.0;
  rc.base.initial_data = InitialData::profile_bump;
  rc.axis = SweepAxis::resolution;
  rc.values = {0.2, 0.1, 0.05};
  rc.jobs = jobs;
  const StudyReport rep = refinement_study(rc);
  bool ratios_ok = true;
  double min_ratio = 1e300;
  std::string ratios;
  for (const CriterionOutcome& c : rep.criteria) {
    ratios_ok = ratios_ok && c.pass;
    min_ratio = std::min(min_ratio, c.value);
    ratios += (ratios.empty() ? "" : ", ") + format_double(c.value);
  }
  const bool pass = zero_resid <= 1e-10 && ratios_ok;
  return make_outcome("balance_refinement", pass, min_ratio,
                      "zero-state residual " + format_double(zero_resid) +
                          "; halving ratios " + ratios);
}

CriterionOutcome check_traveling_wave(int, const std::string&) {
  const GasParams g = reference_gas();
  const ShockWave w = solve_left_state_for_strength(reference_right(), 0.2, g);
  const double L = default_half_width(w.delta, 1.0, g.nu);
  const int Np = static_cast<int>(std::lround(2.0 * L / 0.25)) + 1;
  const Profile prof = solve_profile(w, 1.0, g.nu, L, Np, g);
  const ProfileSampler sampler(prof, g);

  SolverConfig sc;
  sc.gas = g;
  sc.shock = w;
  sc.tau_end = 5.0;
  sc.initial_data = InitialData::profile;
  const RunResult r = run(sc, sampler);

  double dev = 0.0;
  const Field& f = r.final_field;
  for (int i = 0; i < f.grid.N; ++i) {
    const ProfilePoint q =
        sampler(grid_y(f.grid, i) - w.s3 * f.tau - f.X);
    dev = std::max({dev, std::fabs(f.v[i] - q.V), std::fabs(f.u[i] - q.U),
                    std::fabs(f.theta[i] - q.Theta)});
  }
  const bool pass = dev < 1e-3 && std::fabs(f.X) < 1e-3;
  return make_outcome("traveling_wave_hold", pass, dev,
                      "deviation after tau=5; |X| = " +
                          format_double(std::fabs(f.X)));
}

StudyReport epsilon_report(int jobs) {
  StudyConfig ec;
  ec.base.gas = reference_gas();
  ec.base.shock =
      solve_left_state_for_strength(reference_right(), 0.2, ec.base.gas);
  ec.target_delta = 0.2;
  ec.axis = SweepAxis::epsilon;
  ec.values = {0.1, 0.05, 0.025};
  ec.T = 1.0;
  ec.h = 0.5;
  ec.jobs = jobs;
  return sweep_epsilon(ec);
}

const CriterionOutcome* find_criterion(const StudyReport& rep,
                                       const std::string& name) {
  for (const CriterionOutcome& c : rep.criteria) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

}  // namespace

std::vector<CriterionOutcome> acceptance_suite(const std::string& scratch_dir,
                                               int jobs, bool quiet) {
  std::filesystem::create_directories(scratch_dir);
  std::vector<CriterionOutcome> out;
  auto push = [&](CriterionOutcome c) {
    print_outcome(c, quiet);
    out.push_back(std::move(c));
  };

  push(guarded("jump_conditions", check_jump_conditions, jobs, scratch_dir));
  push(guarded("wave_structure", check_wave_structure, jobs, scratch_dir));
  push(guarded("chord_constancy", check_chord, jobs, scratch_dir));
  push(guarded("logistic_rate", check_logistic, jobs, scratch_dir));
  push(guarded("weighted_poincare", check_poincare, jobs, scratch_dir));
  push(guarded("balance_refinement", check_balance_refinement, jobs,
               scratch_dir));
  push(guarded("traveling_wave_hold", check_traveling_wave, jobs,
               scratch_dir));

  // The epsilon study feeds two criteria; run it once.
  try {
    const StudyReport rep = epsilon_report(jobs);
    const CriterionOutcome* dec = find_criterion(rep, "away_decreasing");
    const CriterionOutcome* fin = find_criterion(rep, "away_final_factor");
    const CriterionOutcome* shx = find_criterion(rep, "shift_vanishing");
    const CriterionOutcome* bnd = find_criterion(rep, "xdot_psi_bound");
    const bool c8 = dec && fin && shx && dec->pass && fin->pass && shx->pass;
    push(make_outcome("vanishing_viscosity", c8, fin ? fin->value : -1.0,
                      (dec ? dec->detail : std::string()) + "; " +
                          (shx ? shx->detail : std::string())));
    push(make_outcome("shift_rate_bound", bnd && bnd->pass,
                      bnd ? bnd->value : -1.0,
                      bnd ? bnd->detail : "missing"));
  } catch (const std::exception& e) {
    push(make_outcome("vanishing_viscosity", false, -1.0,
                      std::string("aborted: ") + e.what()));
    push(make_outcome("shift_rate_bound", false, -1.0,
                      std::string("aborted: ") + e.what()));
  }

  // Determinism and conservation on a short run, executed twice.
  try {
    SolverConfig dc;
    dc.gas = reference_gas();
    dc.shock = solve_left_state_for_strength(reference_right(), 0.2, dc.gas);
    dc.margin_left = 50.0;
    dc.margin_right = 50.0;
    dc.dy = 0.1;
    dc.tau_end = 0.5;
    dc.output_stride = 50;
    auto emit_pair = [&](const std::string& tag) {
      const RunResult r = run(dc);
      write_ledger_csv(scratch_dir + "/" + tag + "_ledger.csv", r.ledgers,
                       &r.away_errors);
      write_snapshot_csv(scratch_dir + "/" + tag + "_final.csv",
                         r.final_field, "repeatability-check");
      double cons = 0.0;
      for (double c : r.conservation_residual) cons = std::max(cons, c);
      return cons;
    };
    const double cons1 = emit_pair("run_a");
    const double cons2 = emit_pair("run_b");
    auto slurp = [&](const std::string& p) {
      std::ifstream in(scratch_dir + "/" + p, std::ios::binary);
      std::stringstream ss;
      ss << in.rdbuf();
      return ss.str();
    };
    const bool identical =
        !slurp("run_a_ledger.csv").empty() &&
        slurp("run_a_ledger.csv") == slurp("run_b_ledger.csv") &&
        slurp("run_a_final.csv") == slurp("run_b_final.csv");
    const double cons = std::max(cons1, cons2);
    push(make_outcome("determinism_conservation",
                      identical && cons < 1e-10, cons,
                      std::string("outputs ") +
                          (identical ? "byte-identical" : "DIFFER") +
                          "; conservation residual"));
  } catch (const std::exception& e) {
    push(make_outcome("determinism_conservation", false, -1.0,
                      std::string("aborted: ") + e.what()));
  }

  return out;
}

}  // namespace vshock
