#include "gnb/experiments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

#include <json.hpp>

#include "gnb/kernel.hpp"
#include "gnb/spectral.hpp"

namespace gnb {

namespace fs = std::filesystem;

// ---------------------------------------------------------------------------
// Initial data

Field make_initial(const Grid& grid, const InitialCondition& ic) {
  if (ic.kind == InitialKind::constant_plus_modes) {
    if (ic.amplitudes.size() != ic.freqs.size()) {
      throw ConfigError("u0.amplitudes and u0.freqs must have the same length");
    }
    if (!ic.phases.empty() && ic.phases.size() != ic.freqs.size()) {
      throw ConfigError("u0.phases must be empty or match u0.freqs");
    }
    for (const auto& k : ic.freqs) {
      if (grid.dim() == 1 && k[1] != 0) throw ConfigError("two-component frequency on a 1-d grid");
    }
    return Field::from_function(grid, [&](const Point& x) {
      double v = ic.base;
      for (std::size_t i = 0; i < ic.freqs.size(); ++i) {
        const double phase = ic.phases.empty() ? 0.0 : ic.phases[i];
        v += ic.amplitudes[i] * std::cos(ic.freqs[i][0] * x[0] + ic.freqs[i][1] * x[1] + phase);
      }
      return v;
    });
  }

  if (!(ic.max > ic.min)) throw ConfigError("random_positive needs u0.min < u0.max");
  if (!(ic.smoothness >= 1.0)) throw ConfigError("u0.smoothness must be >= 1");
  std::mt19937_64 rng(ic.seed);
  Field noise(grid);
  // 53 high bits to [0, 1), identical on every platform.
  for (double& v : noise.values()) v = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  const double cutoff = grid.n() / ic.smoothness;
  const double cutoff2 = cutoff * cutoff;
  SpectralField spec = forward(noise);
  for (std::size_t p = 0; p < spec.coeffs.size(); ++p) {
    if (static_cast<double>(grid.wavenumber_norm2(p)) > cutoff2) spec.coeffs[p] = 0.0;
  }
  Field smooth = inverse(spec);
  const double lo = smooth.min();
  const double hi = smooth.max();
  if (!(hi > lo)) return Field(grid, 0.5 * (ic.min + ic.max));
  for (double& v : smooth.values()) v = ic.min + (v - lo) / (hi - lo) * (ic.max - ic.min);
  return smooth;
}

// ---------------------------------------------------------------------------
// Configuration

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty()) throw ConfigError("'" + key + "': not a number: '" + v + "'");
  return x;
}

int to_int(const std::string& key, const std::string& v) {
  const double x = to_double(key, v);
  if (x != std::floor(x) || std::abs(x) > 1e9) {
    throw ConfigError("'" + key + "': not an integer: '" + v + "'");
  }
  return static_cast<int>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("'" + key + "': not a boolean: '" + v + "'");
}

std::vector<double> to_doubles(const std::string& key, const std::string& v) {
  std::vector<double> out;
  for (const auto& item : split(v, ',')) out.push_back(to_double(key, item));
  return out;
}

Wavevector to_wavevector(const std::string& key, const std::string& v) {
  const auto parts = split(v, ':');
  if (parts.empty() || parts.size() > 2) throw ConfigError("'" + key + "': bad frequency '" + v + "'");
  Wavevector k{to_int(key, parts[0]), 0};
  if (parts.size() == 2) k[1] = to_int(key, parts[1]);
  return k;
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <class T, class Fmt>
std::string join(const std::vector<T>& xs, Fmt fmt) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ",";
    out += fmt(xs[i]);
  }
  return out;
}

// F and F2 are assembled once the whole file is read, so kind and param may
// come in either order.
struct PendingF {
  std::optional<std::string> kind;
  std::optional<double> param;
};

struct PendingNonlinearities {
  PendingF F;
  PendingF F2;
};

std::optional<Nonlinearity> resolve(const PendingF& p, const std::optional<Nonlinearity>& current,
                                    const char* name) {
  if (!p.kind && !p.param) return current;
  if (!p.kind && !current) {
    throw ConfigError(std::string(name) + ".param given without " + name + ".kind");
  }
  const std::string kind = p.kind ? *p.kind : current->kind_name();
  double param = 0.0;
  if (p.param) param = *p.param;
  else if (current && current->kind_name() == kind) param = current->param();
  try {
    return make_nonlinearity(kind, param);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string(name) + ": " + e.what());
  }
}

void apply_entry(Scenario& sc, PendingNonlinearities& pending, const std::string& key,
                 const std::string& v) {
  if (key == "name") sc.name = v;
  else if (key == "d") sc.dim = to_int(key, v);
  else if (key == "n") sc.n = to_int(key, v);
  else if (key == "s") sc.solver.s = to_double(key, v);
  else if (key == "delta") sc.solver.delta = to_double(key, v);
  else if (key == "F.kind") {
    parse_nonlinearity_kind(v);
    pending.F.kind = v;
  } else if (key == "F.param") pending.F.param = to_double(key, v);
  else if (key == "F2.kind") {
    parse_nonlinearity_kind(v);
    pending.F2.kind = v;
  } else if (key == "F2.param") pending.F2.param = to_double(key, v);
  else if (key == "u0.kind") {
    if (v == "constant_plus_modes") sc.u0.kind = InitialKind::constant_plus_modes;
    else if (v == "random_positive") sc.u0.kind = InitialKind::random_positive;
    else throw ConfigError("unknown u0.kind '" + v + "'");
  } else if (key == "u0.base") sc.u0.base = to_double(key, v);
  else if (key == "u0.amplitudes") sc.u0.amplitudes = to_doubles(key, v);
  else if (key == "u0.freqs") {
    sc.u0.freqs.clear();
    for (const auto& item : split(v, ',')) sc.u0.freqs.push_back(to_wavevector(key, item));
  } else if (key == "u0.phases") sc.u0.phases = to_doubles(key, v);
  else if (key == "u0.seed") sc.u0.seed = static_cast<std::uint64_t>(to_int(key, v));
  else if (key == "u0.min") sc.u0.min = to_double(key, v);
  else if (key == "u0.max") sc.u0.max = to_double(key, v);
  else if (key == "u0.smoothness") sc.u0.smoothness = to_double(key, v);
  else if (key == "rhs_mode") {
    if (v == "spectral") sc.solver.rhs_mode = RhsMode::spectral;
    else if (v == "quadrature") sc.solver.rhs_mode = RhsMode::quadrature;
    else throw ConfigError("unknown rhs_mode '" + v + "'");
  } else if (key == "stepper") {
    if (v == "rk4_fixed") sc.solver.stepper = Stepper::rk4_fixed;
    else if (v == "rk4_adaptive") sc.solver.stepper = Stepper::rk4_adaptive;
    else throw ConfigError("unknown stepper '" + v + "'");
  } else if (key == "dt") sc.solver.dt = to_double(key, v);
  else if (key == "t_end") sc.solver.t_end = to_double(key, v);
  else if (key == "cfl_safety") sc.solver.cfl_safety = to_double(key, v);
  else if (key == "dealias") {
    if (v == "none") sc.solver.dealias = Dealias::none;
    else if (v == "two_thirds") sc.solver.dealias = Dealias::two_thirds;
    else if (v == "auto") sc.solver.dealias = Dealias::automatic;
    else throw ConfigError("unknown dealias '" + v + "'");
  } else if (key == "diag_every") sc.solver.diag_every = to_int(key, v);
  else if (key == "J") sc.solver.kernel_truncation = to_int(key, v);
  else if (key == "snapshot_count") sc.solver.snapshot_count = to_int(key, v);
  else if (key == "track_lp3") sc.solver.track_lp3 = to_bool(key, v);
  else if (key == "nq") sc.nq = to_int(key, v);
  else if (key == "t_star") sc.t_star = to_double(key, v);
  else if (key == "deltas") sc.deltas = to_doubles(key, v);
  else if (key == "lambda") sc.lambda = to_int(key, v);
  else if (key == "perturb.amplitude") sc.perturb_amplitude = to_double(key, v);
  else if (key == "perturb.freq") sc.perturb_freq = to_wavevector(key, v);
  else if (key == "crossval.n") {
    sc.crossval_n.clear();
    for (const auto& item : split(v, ',')) sc.crossval_n.push_back(to_int(key, item));
  } else throw ConfigError("unknown key '" + key + "'");
}

}  // namespace

Scenario parse_scenario(std::istream& in, Scenario sc) {
  std::string line;
  int lineno = 0;
  PendingNonlinearities pending;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      apply_entry(sc, pending, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    } catch (const std::exception& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": '" + key + "': " + e.what());
    }
  }
  sc.F = *resolve(pending.F, sc.F, "F");
  sc.F2 = resolve(pending.F2, sc.F2, "F2");
  make_grid(sc.dim, sc.n);
  sc.solver.validate();
  return sc;
}

Scenario load_scenario(const fs::path& path, Scenario base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  return parse_scenario(in, std::move(base));
}

std::map<std::string, std::string> describe(const Scenario& sc) {
  std::map<std::string, std::string> m;
  m["name"] = sc.name;
  m["d"] = std::to_string(sc.dim);
  m["n"] = std::to_string(sc.n);
  m["s"] = format_double(sc.solver.s);
  m["delta"] = format_double(sc.solver.delta);
  m["F"] = sc.F.describe();
  if (sc.u0.kind == InitialKind::constant_plus_modes) {
    m["u0.kind"] = "constant_plus_modes";
    m["u0.base"] = format_double(sc.u0.base);
    m["u0.amplitudes"] = join(sc.u0.amplitudes, format_double);
    m["u0.freqs"] = join(sc.u0.freqs, [](const Wavevector& k) {
      return std::to_string(k[0]) + ":" + std::to_string(k[1]);
    });
    m["u0.phases"] = join(sc.u0.phases, format_double);
  } else {
    m["u0.kind"] = "random_positive";
    m["u0.seed"] = std::to_string(sc.u0.seed);
    m["u0.min"] = format_double(sc.u0.min);
    m["u0.max"] = format_double(sc.u0.max);
    m["u0.smoothness"] = format_double(sc.u0.smoothness);
  }
  m["rhs_mode"] = to_string(sc.solver.rhs_mode);
  m["stepper"] = to_string(sc.solver.stepper);
  m["dt"] = format_double(sc.solver.dt);
  m["t_end"] = format_double(sc.solver.t_end);
  m["cfl_safety"] = format_double(sc.solver.cfl_safety);
  m["dealias"] = to_string(sc.solver.dealias);
  m["diag_every"] = std::to_string(sc.solver.diag_every);
  m["J"] = std::to_string(sc.solver.kernel_truncation);
  return m;
}

// ---------------------------------------------------------------------------
// Built-in scenarios

Scenario standard_scenario() {
  Scenario sc;
  sc.name = "standard";
  sc.dim = 1;
  sc.n = 128;
  sc.F = make_nonlinearity(NonlinearityKind::power_int, 2.0);
  sc.u0.base = 2.0;
  sc.u0.amplitudes = {0.5};
  sc.u0.freqs = {{1, 0}};
  sc.solver.s = 0.5;
  sc.solver.t_end = 5.0;
  sc.solver.dt = 0.05;
  return sc;
}

Scenario decay_2d_scenario() {
  Scenario sc;
  sc.name = "decay-2d";
  sc.dim = 2;
  sc.n = 64;
  sc.F = make_nonlinearity(NonlinearityKind::identity);
  sc.u0.base = 2.0;
  sc.u0.amplitudes = {0.3, 0.2};
  sc.u0.freqs = {{1, 0}, {0, 1}};
  sc.solver.s = 0.7;
  sc.solver.t_end = 12.0;
  sc.solver.dt = 0.05;
  sc.solver.track_lp3 = false;
  return sc;
}

Scenario blowup_scenario() {
  Scenario sc;
  sc.name = "blowup";
  sc.dim = 1;
  sc.n = 128;
  sc.F = make_nonlinearity(NonlinearityKind::identity);
  sc.u0.kind = InitialKind::random_positive;
  sc.u0.seed = 7;
  sc.u0.min = 2.0;
  sc.u0.max = 2.8;
  sc.u0.smoothness = 8.0;
  sc.solver.s = 1.0;
  sc.solver.dt = 0.01;
  sc.solver.track_lp3 = false;
  sc.t_star = 0.4;
  return sc;
}

Scenario delta_cauchy_scenario() {
  Scenario sc = standard_scenario();
  sc.name = "delta-cauchy";
  sc.solver.t_end = 1.0;
  sc.solver.track_lp3 = false;
  sc.deltas = {0.2, 0.1, 0.05, 0.025};
  return sc;
}

Scenario crossval_scenario() {
  Scenario sc = standard_scenario();
  sc.name = "crossval";
  sc.solver.t_end = 1.0;
  sc.solver.track_lp3 = false;
  sc.crossval_n = {64, 128, 256};
  return sc;
}

Scenario stability_scenario() {
  Scenario sc = standard_scenario();
  sc.name = "stability";
  sc.solver.t_end = 2.0;
  sc.solver.track_lp3 = false;
  sc.perturb_amplitude = 0.02;
  sc.perturb_freq = {3, 0};
  return sc;
}

Scenario scaling_scenario() {
  Scenario sc;
  sc.name = "scaling";
  sc.dim = 1;
  sc.n = 64;
  sc.F = make_nonlinearity(NonlinearityKind::power_int, 2.0);
  sc.u0.base = 2.0;
  sc.u0.amplitudes = {0.3, 0.1};
  sc.u0.freqs = {{1, 0}, {2, 0}};
  sc.u0.phases = {0.0, 0.5};
  sc.solver.s = 0.5;
  sc.solver.t_end = 0.5;
  sc.solver.dt = 0.01;
  sc.solver.track_lp3 = false;
  sc.lambda = 2;
  return sc;
}

Scenario reversal_scenario() {
  Scenario sc;
  sc.name = "time-reversal";
  sc.dim = 1;
  sc.n = 32;
  sc.F = make_nonlinearity(NonlinearityKind::identity);
  sc.u0.base = 2.0;
  sc.u0.amplitudes = {0.3, 0.1};
  sc.u0.freqs = {{1, 0}, {2, 0}};
  sc.solver.s = 0.5;
  sc.solver.t_end = 0.2;
  sc.solver.dt = 0.005;
  sc.solver.track_lp3 = false;
  return sc;
}

// ---------------------------------------------------------------------------
// Reports

const Assertion& RunReport::check(const std::string& name, double measured,
                                  const std::string& relation, double tol) {
  bool pass = false;
  if (relation == "<=") pass = measured <= tol;
  else if (relation == "<") pass = measured < tol;
  else if (relation == ">=") pass = measured >= tol;
  else if (relation == ">") pass = measured > tol;
  else throw std::invalid_argument("unknown relation '" + relation + "'");
  assertions.push_back({name, measured, tol, relation, pass});
  return assertions.back();
}

void RunReport::merge(const RunReport& other, const std::string& prefix) {
  for (auto a : other.assertions) {
    a.name = prefix + "." + a.name;
    assertions.push_back(std::move(a));
  }
  for (const auto& [k, v] : other.measured) measured[prefix + "." + k] = v;
  for (const auto& note : other.notes) notes.push_back(prefix + ": " + note);
  for (const auto& a : other.artifacts) artifacts.push_back(a);
}

bool RunReport::passed() const noexcept {
  return std::all_of(assertions.begin(), assertions.end(), [](const auto& a) { return a.pass; });
}

std::string RunReport::to_json() const {
  nlohmann::json j;
  j["scenario"] = scenario;
  j["echo"] = echo;
  j["assertions"] = nlohmann::json::array();
  for (const auto& a : assertions) {
    j["assertions"].push_back({{"name", a.name},
                               {"measured", a.measured},
                               {"tol", a.tol},
                               {"relation", a.relation},
                               {"pass", a.pass}});
  }
  j["measured"] = measured;
  j["notes"] = notes;
  j["artifacts"] = artifacts;
  j["pass"] = passed();
  return j.dump(2);
}

void RunReport::print(std::ostream& os) const {
  os << "scenario " << scenario << '\n';
  for (const auto& a : assertions) {
    os << (a.pass ? "  PASS " : "  FAIL ") << a.name << ": " << std::setprecision(6) << a.measured
       << ' ' << a.relation << ' ' << a.tol << '\n';
  }
  for (const auto& [k, v] : measured) os << "  " << k << " = " << std::setprecision(10) << v << '\n';
  for (const auto& note : notes) os << "  note: " << note << '\n';
}

// ---------------------------------------------------------------------------
// Decay

DecayOutcome run_decay_full(const Scenario& sc) {
  const Field u0 = sc.initial();
  if (!u0.is_admissible()) throw HypothesisViolation("run_decay needs a strictly positive u0");
  RunReport rep;
  rep.scenario = sc.name;
  rep.echo = describe(sc);

  Trajectory traj = evolve(u0, sc.solver, sc.F);
  const auto& rec = traj.records;
  rep.check("no_blowup", traj.blew_up() ? 1.0 : 0.0, "<=", 0.0);
  rep.measured["steps"] = static_cast<double>(traj.steps);
  rep.measured["t_final"] = traj.stop_time;

  const DiagnosticsRecord& r0 = rec.front();
  const DiagnosticsRecord& rT = rec.back();
  double drift = 0.0, umax_rise = 0.0, umin_drop = 0.0, mom_drop = 0.0;
  double flux_min = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < rec.size(); ++k) {
    drift = std::max(drift, std::abs(rec[k].energy - r0.energy) / r0.energy);
    flux_min = std::min(flux_min, rec[k].flux);
    if (k == 0) continue;
    umax_rise = std::max(umax_rise, rec[k].umax - rec[k - 1].umax);
    umin_drop = std::max(umin_drop, rec[k - 1].umin - rec[k].umin);
    mom_drop = std::max(mom_drop, rec[k - 1].momentum - rec[k].momentum);
  }
  rep.check("energy_drift", drift, "<=", 1e-8);
  rep.check("umax_nonincreasing", umax_rise, "<=", 1e-10);
  rep.check("umin_nondecreasing", umin_drop, "<=", 1e-10);
  rep.check("momentum_nondecreasing", mom_drop, "<=", 1e-10);
  rep.check("flux_nonnegative", flux_min, ">=", 0.0);

  const auto t = column(rec, "t");
  const double momentum_gap =
      std::abs((rT.momentum - r0.momentum) - integrate_series(t, column(rec, "flux")));
  rep.check("momentum_identity", momentum_gap, "<", 1e-6 * std::abs(r0.momentum));

  if (sc.solver.track_lp3) {
    const double closure = std::abs(rT.l3_cubed + rT.lp3_cumulative - r0.l3_cubed) / r0.l3_cubed;
    rep.check("lp3_closure", closure, "<", 1e-4);
  }

  const Hs2Budget budget = hs2_budget_check(traj, u0, sc.F);
  rep.check("hs2_budget", budget.lhs_kernel_form, "<=", budget.bound);
  rep.measured["hs2_lhs"] = budget.lhs;

  const double eta = eta_lower_bound(u0.min(), u0.max(), sc.F, sc.dim, sc.solver.s);
  rep.measured["eta"] = eta;
  rep.measured["lambda"] = ellipticity_lambda(u0.min(), u0.max(), sc.F, sc.dim, sc.solver.s);
  rep.check("amplitude_envelope", envelope_excess(rec, eta), "<=", 1e-6);

  if (r0.amplitude > 0.0) {
    const auto A = column(rec, "amplitude");
    const auto [lo, hi] = default_decay_window(t, A);
    const DecayFit fit = fit_decay_rate(t, A, lo, hi);
    rep.measured["amplitude_rate"] = fit.rate;
    rep.measured["amplitude_r2"] = fit.r2;
    rep.measured["amplitude_window_lo"] = lo;
    rep.measured["amplitude_window_hi"] = hi;
    rep.check("amplitude_rate_vs_eta", fit.rate, ">=", eta);
  } else {
    rep.notes.push_back("constant initial data: amplitude checks are vacuous");
  }

  const double terminal = terminal_deviation(traj.final_state(), u0);
  const double ratio = r0.amplitude > 0.0 ? rT.amplitude / r0.amplitude : 0.0;
  rep.measured["terminal_amplitude_ratio"] = ratio;
  rep.measured["terminal_deviation"] = terminal;
  rep.check("terminal_amplitude_ratio", ratio, "<", 1e-6);
  rep.check("terminal_constant", terminal, "<", 1e-5 * l2_norm(u0));

  if (r0.grad_inf > 0.0) {
    const auto G = column(rec, "grad_inf");
    const double onset = detect_decay_onset(t, G);
    const double end = default_decay_window(t, G).second;
    rep.measured["gradient_onset"] = onset;
    rep.measured["gradient_window_hi"] = end;
    const DecayFit fit = fit_decay_rate(t, G, onset, end);
    rep.measured["gradient_rate"] = fit.rate;
    rep.check("gradient_rate_positive", fit.rate, ">", 0.0);
    rep.check("gradient_fit_r2", fit.r2, ">", 0.99);
  }
  rep.measured["bkm_accum"] = rT.bkm_accum;
  return {std::move(traj), std::move(rep)};
}

RunReport run_decay(const Scenario& sc) { return run_decay_full(sc).report; }

// ---------------------------------------------------------------------------
// Blow-up by time reversal

RunReport run_blowup(const Scenario& sc, double t_star) {
  if (!sc.F.is_odd()) {
    throw HypothesisViolation("the reversal experiment needs an odd F, got " + sc.F.describe());
  }
  if (!(t_star >= 0.0)) throw std::invalid_argument("t_star must be >= 0");
  RunReport rep;
  rep.scenario = sc.name;
  rep.echo = describe(sc);
  rep.measured["t_star"] = t_star;
  const Field u0 = sc.initial();
  const Nonlinearity Fr = odd_reflection(sc.F);

  if (t_star == 0.0) {
    const Field reversed = -1.0 * u0;
    const Field back = -1.0 * reversed;
    rep.check("re_reversal_error", linf_norm(back - u0), "<=", 1e-10);
    return rep;
  }

  SolverConfig cfg = sc.solver;
  cfg.t_end = t_star;
  cfg.track_lp3 = false;
  const Trajectory fwd = evolve(u0, cfg, sc.F);
  rep.check("forward_completed", fwd.blew_up() ? 1.0 : 0.0, "<=", 0.0);
  const Field v0 = -1.0 * fwd.final_state();
  rep.measured["exact_reversal_growth"] =
      linf_norm(gradient_magnitude(u0)) / linf_norm(gradient_magnitude(v0));

  const Trajectory rev = evolve(v0, cfg, Fr);
  double peak = 0.0;
  for (const auto& r : rev.records) peak = std::max(peak, r.grad_inf);
  const double growth = peak / rev.records.front().grad_inf;
  rep.measured["gradient_growth"] = growth;
  rep.measured["bkm_accum"] = rev.records.back().bkm_accum;
  rep.measured["reverse_stop_time"] = rev.stop_time;
  rep.measured["non_finite_flag"] = rev.blew_up() ? 1.0 : 0.0;

  const bool by_gradient = growth >= 10.0;
  const bool by_flag = rev.blew_up();
  Assertion a{"blowup_witness", growth, 10.0, ">=", by_gradient || by_flag};
  rep.assertions.push_back(a);
  if (by_flag) {
    rep.notes.push_back("non-finite flag (" + to_string(rev.stop_reason) + ") at t = " +
                        format_double(rev.stop_time));
  }
  if (by_gradient) rep.notes.push_back("gradient grew by " + format_double(growth));
  if (!rev.blew_up()) {
    const double err = linf_norm(rev.final_state() + u0);
    rep.measured["reversal_error"] = err;
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Stability

Scenario perturbed(const Scenario& sc) {
  Scenario out = sc;
  out.name = sc.name + "-perturbed";
  if (sc.perturb_amplitude != 0.0) {
    if (sc.u0.kind != InitialKind::constant_plus_modes) {
      throw ConfigError("perturb.amplitude needs constant_plus_modes initial data");
    }
    out.u0.amplitudes.push_back(sc.perturb_amplitude);
    out.u0.freqs.push_back(sc.perturb_freq);
    if (!out.u0.phases.empty()) out.u0.phases.push_back(0.0);
  }
  if (sc.F2) out.F = *sc.F2;
  return out;
}

namespace {

double shared_step(const std::vector<std::pair<Field, Nonlinearity>>& runs, const SolverConfig& cfg) {
  double dt = cfg.dt;
  if (cfg.stepper == Stepper::rk4_adaptive) {
    for (const auto& [u, F] : runs) {
      const double bound = FourierMultiplier::fractional(u.grid(), cfg.s).max_symbol();
      dt = std::min(dt, cfl_time_step(u, F, bound, cfg.cfl_safety));
    }
  }
  return dt;
}

}  // namespace

RunReport run_stability(const Scenario& sc1, const Scenario& sc2) {
  if (sc1.dim != sc2.dim || sc1.n != sc2.n) throw std::invalid_argument("run_stability: grids differ");
  RunReport rep;
  rep.scenario = sc1.name + " vs " + sc2.name;
  rep.echo = describe(sc1);
  const Field u1 = sc1.initial();
  const Field u2 = sc2.initial();

  SolverConfig cfg = sc1.solver;
  cfg.dt = shared_step({{u1, sc1.F}, {u2, sc2.F}}, cfg);
  cfg.stepper = Stepper::rk4_fixed;
  cfg.snapshot_every_record = true;
  cfg.track_lp3 = false;
  const Trajectory a = evolve(u1, cfg, sc1.F);
  const Trajectory b = evolve(u2, cfg, sc2.F);
  rep.check("no_blowup", (a.blew_up() || b.blew_up()) ? 1.0 : 0.0, "<=", 0.0);

  const StabilityReport st = stability_check(a, b, sc1.F, sc2.F);
  std::size_t violations = 0;
  double worst = 0.0;
  for (const auto& p : st.stamps) {
    if (!p.holds()) ++violations;
    if (p.bound_linf > 0.0) worst = std::max(worst, p.gap_linf / p.bound_linf);
  }
  rep.check("linf_bound_violations", static_cast<double>(violations), "<=", 0.0);
  rep.measured["stamps"] = static_cast<double>(st.stamps.size());
  rep.measured["worst_gap_over_bound"] = worst;
  rep.measured["fprime_gap"] = st.fprime_gap;
  rep.measured["c0_fit"] = st.c0_fit;
  rep.measured["gap_l2_initial"] = st.stamps.front().gap_l2;
  rep.measured["gap_l2_final"] = st.stamps.back().gap_l2;
  rep.measured["dt"] = cfg.dt;
  return rep;
}

// ---------------------------------------------------------------------------
// delta-Cauchy

RunReport run_delta_cauchy(const Scenario& sc, const std::vector<double>& deltas) {
  if (deltas.size() < 3) throw std::invalid_argument("run_delta_cauchy needs at least three deltas");
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    if (!(deltas[i] > 0.0 && deltas[i] <= 1.0)) throw std::invalid_argument("deltas must lie in (0, 1]");
    if (i && !(deltas[i] < deltas[i - 1])) throw std::invalid_argument("deltas must be descending");
  }
  RunReport rep;
  rep.scenario = sc.name;
  rep.echo = describe(sc);
  const Field u0 = sc.initial();

  SolverConfig cfg = sc.solver;
  cfg.track_lp3 = false;
  std::vector<double> t;
  std::vector<std::vector<double>> curves;
  bool blew = false;
  for (std::size_t i = 0; i + 1 < deltas.size(); ++i) {
    const DeltaPair pair = evolve_delta_pair(u0, cfg, sc.F, deltas[i], deltas[i + 1]);
    blew = blew || pair.first.blew_up() || pair.second.blew_up();
    const double scale = deltas[i] - deltas[i + 1];
    std::vector<double> g;
    for (double gap : pair.gap) g.push_back(gap / scale);
    if (curves.empty()) t = pair.t;
    if (pair.t != t) throw std::logic_error("delta pairs produced different stamps");
    curves.push_back(std::move(g));
  }
  rep.check("no_blowup", blew ? 1.0 : 0.0, "<=", 0.0);

  double collapse = 0.0;
  for (std::size_t i = 0; i < curves.size(); ++i) {
    for (std::size_t j = i + 1; j < curves.size(); ++j) {
      double sup_diff = 0.0, sup_ref = 0.0;
      for (std::size_t k = 0; k < t.size(); ++k) {
        sup_diff = std::max(sup_diff, std::abs(curves[i][k] - curves[j][k]));
        sup_ref = std::max({sup_ref, curves[i][k], curves[j][k]});
      }
      if (sup_ref > 0.0) collapse = std::max(collapse, sup_diff / sup_ref);
    }
  }
  rep.check("collapse_sup_distance", collapse, "<=", 0.1);

  // Smallest C with g(t) <= C (e^{Ct} - 1) on every curve.
  auto holds = [&](double C) {
    for (const auto& g : curves) {
      for (std::size_t k = 0; k < t.size(); ++k) {
        if (t[k] > 0.0 && g[k] > C * std::expm1(C * t[k])) return false;
      }
    }
    return true;
  };
  double lo = 0.0, hi = 1.0;
  while (!holds(hi) && hi < 1e6) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (holds(mid) ? hi : lo) = mid;
  }
  rep.measured["c_fit"] = hi;
  double peak = 0.0;
  for (const auto& g : curves) peak = std::max(peak, *std::max_element(g.begin(), g.end()));
  rep.measured["peak_gap_over_delta"] = peak;
  return rep;
}

// ---------------------------------------------------------------------------
// Cross-validation

namespace {

double relative_linf(const Field& approx, const Field& exact) {
  const double scale = linf_norm(exact);
  const double diff = linf_norm(approx - exact);
  return scale > 0.0 ? diff / scale : diff;
}

}  // namespace

RunReport run_crossval(const Scenario& sc) {
  const double s = sc.solver.s;
  if (!(s < 1.0)) throw std::invalid_argument("run_crossval needs s < 1");
  RunReport rep;
  rep.scenario = sc.name;
  rep.echo = describe(sc);
  const int J = sc.solver.kernel_truncation;

  std::vector<double> errs;
  for (int n : sc.crossval_n) {
    Scenario at = sc;
    at.n = n;
    const Field u = at.initial();
    const KernelTable K = periodic_kernel(u.grid(), s, J);
    const double e = relative_linf(rhs_quadrature(u, s, sc.F, K), rhs_spectral(u, s, sc.F));
    errs.push_back(e);
    rep.measured["error_n" + std::to_string(n)] = e;
  }
  std::size_t non_decreasing = 0;
  for (std::size_t i = 1; i < errs.size(); ++i) {
    if (!(errs[i] < errs[i - 1])) ++non_decreasing;
  }
  rep.check("refinement_monotone_violations", static_cast<double>(non_decreasing), "<=", 0.0);

  const Field u0 = sc.initial();
  const KernelTable K = periodic_kernel(u0.grid(), s, J);
  const double e0 = relative_linf(rhs_quadrature(u0, s, sc.F, K), rhs_spectral(u0, s, sc.F));
  rep.check("relative_linf_error_u0", e0, "<", 0.05);
  rep.measured["error_constant"] = e0 * std::pow(static_cast<double>(sc.n), 1.0 - s);

  SolverConfig cfg = sc.solver;
  cfg.track_lp3 = false;
  const Trajectory traj = evolve(u0, cfg, sc.F);
  for (double frac : {0.1, 0.5}) {
    const double target = frac * traj.stop_time;
    const auto it = std::min_element(traj.snapshots.begin(), traj.snapshots.end(),
                                     [&](const Snapshot& a, const Snapshot& b) {
                                       return std::abs(a.t - target) < std::abs(b.t - target);
                                     });
    const double e = relative_linf(rhs_quadrature(it->u, s, sc.F, K), rhs_spectral(it->u, s, sc.F));
    rep.check("relative_linf_error_t" + format_double(it->t).substr(0, 6), e, "<", 0.05);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Symmetries

double step_halving_error(const Field& u0, SolverConfig cfg, const Nonlinearity& F) {
  cfg.stepper = Stepper::rk4_fixed;
  cfg.track_lp3 = false;
  const Trajectory coarse = evolve(u0, cfg, F);
  cfg.dt *= 0.5;
  const Trajectory fine = evolve(u0, cfg, F);
  if (coarse.blew_up() || fine.blew_up()) return std::numeric_limits<double>::infinity();
  return linf_norm(coarse.final_state() - fine.final_state());
}

namespace {

// Steps of T / N with N = ceil(T / dt_max).
double even_step(double t_end, double dt_max) {
  return t_end / std::ceil(t_end / dt_max - 1e-9);
}

// Roundoff floor for the solver tolerance.
double solver_tolerance(double halving, const Field& u0) {
  return std::max(halving, 1e-13 * linf_norm(u0));
}

}  // namespace

RunReport run_scaling(const Scenario& sc) {
  const int lambda = sc.lambda;
  if (lambda < 1) throw std::invalid_argument("lambda must be a positive integer");
  RunReport rep;
  rep.scenario = sc.name;
  rep.echo = describe(sc);
  const double s = sc.solver.s;
  const Grid grid = sc.grid();
  const Field u0 = sc.initial();
  const int n = grid.n();

  // index of lambda x_j on the same grid
  auto dilated = [&](std::size_t flat) {
    if (grid.dim() == 1) return static_cast<std::size_t>((lambda * flat) % n);
    const std::size_t i0 = flat / n, i1 = flat % n;
    return ((lambda * i0) % n) * n + (lambda * i1) % n;
  };
  Field v0(grid);
  for (std::size_t j = 0; j < v0.size(); ++j) v0[j] = u0[dilated(j)];

  SolverConfig cv = sc.solver;
  cv.stepper = Stepper::rk4_fixed;
  cv.track_lp3 = false;
  const double bound = FourierMultiplier::fractional(grid, s).max_symbol();
  cv.dt = even_step(cv.t_end, std::min(sc.solver.dt, cfl_time_step(v0, sc.F, bound, cv.cfl_safety)));
  SolverConfig cu = cv;
  const double factor = std::pow(static_cast<double>(lambda), s);
  cu.dt = cv.dt * factor;
  cu.t_end = cv.t_end * factor;

  const Trajectory tv = evolve(v0, cv, sc.F);
  const Trajectory tu = evolve(u0, cu, sc.F);
  rep.check("no_blowup", (tv.blew_up() || tu.blew_up()) ? 1.0 : 0.0, "<=", 0.0);
  const Field& v = tv.final_state();
  const Field& u = tu.final_state();
  double err = 0.0;
  for (std::size_t j = 0; j < v.size(); ++j) err = std::max(err, std::abs(v[j] - u[dilated(j)]));

  const double tol = solver_tolerance(step_halving_error(u0, cu, sc.F), u0);
  rep.measured["solver_tolerance"] = tol;
  rep.measured["dt_v"] = cv.dt;
  rep.check("scaling_identity", err, "<=", 10.0 * tol);
  return rep;
}

RunReport run_time_reversal(const Scenario& sc) {
  if (!sc.F.is_odd()) throw HypothesisViolation("time reversal needs an odd F, got " + sc.F.describe());
  RunReport rep;
  rep.scenario = sc.name;
  rep.echo = describe(sc);
  const Field u0 = sc.initial();
  SolverConfig cfg = sc.solver;
  cfg.stepper = Stepper::rk4_fixed;
  cfg.track_lp3 = false;
  const double bound = FourierMultiplier::fractional(u0.grid(), cfg.s).max_symbol();
  cfg.dt = even_step(cfg.t_end, std::min(cfg.dt, cfl_time_step(u0, sc.F, bound, cfg.cfl_safety)));

  const Nonlinearity Fr = odd_reflection(sc.F);
  auto round_trip = [&](const SolverConfig& c, bool& blew) {
    const Trajectory fwd = evolve(u0, c, sc.F);
    const Trajectory rev = evolve(-1.0 * fwd.final_state(), c, Fr);
    blew = blew || fwd.blew_up() || rev.blew_up();
    return -1.0 * rev.final_state();
  };
  bool blew = false;
  const Field back = round_trip(cfg, blew);
  SolverConfig half = cfg;
  half.dt *= 0.5;
  const Field back_half = round_trip(half, blew);
  rep.check("no_blowup", blew ? 1.0 : 0.0, "<=", 0.0);
  const double err = linf_norm(back - u0);
  // The backward leg amplifies the forward leg's error, so the tolerance
  // comes from halving the step of the whole round trip.
  const double round_trip_halving = linf_norm(back - back_half);
  const double forward_halving = step_halving_error(u0, cfg, sc.F);
  const double tol = solver_tolerance(std::max(forward_halving, round_trip_halving), u0);
  rep.measured["forward_halving_error"] = forward_halving;
  rep.measured["round_trip_halving_error"] = round_trip_halving;
  rep.measured["solver_tolerance"] = tol;
  rep.measured["dt"] = cfg.dt;
  rep.check("reversal_identity", err, "<=", 10.0 * tol);
  return rep;
}

// ---------------------------------------------------------------------------
// Invariants

namespace {

Field random_field(const Grid& grid, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Field f(grid);
  for (double& v : f.values()) v = dist(rng);
  return f;
}

}  // namespace

RunReport run_invariants(std::uint64_t seed) {
  RunReport rep;
  rep.scenario = "invariants";
  std::mt19937_64 rng(seed);
  const Grid g1 = make_grid(1, 64);
  const Grid g2 = make_grid(2, 16);

  // grid
  {
    std::size_t bad = 0;
    for (const Grid& g : {g1, g2}) {
      const auto ks = g.wavenumbers();
      std::vector<Wavevector> sorted(ks.begin(), ks.end());
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) ++bad;
      if (ks.size() != g.size() || g.sample_points().size() != g.size()) ++bad;
    }
    rep.check("grid.enumeration_defects", static_cast<double>(bad), "<=", 0.0);
  }

  // spectral
  {
    double roundtrip = 0.0, adjoint = 0.0, besov_excess = -1.0;
    for (const Grid& g : {g1, g2}) {
      for (int trial = 0; trial < 10; ++trial) {
        const Field f = random_field(g, rng, -1.0, 1.0);
        const Field h = random_field(g, rng, -1.0, 1.0);
        roundtrip = std::max(roundtrip, linf_norm(inverse(forward(f)) - f) / linf_norm(f));
        for (double s : {0.3, 0.5, 1.0}) {
          const Field Lh = frac_laplacian(h, s);
          adjoint = std::max(adjoint, std::abs(inner(f, Lh) - inner(frac_laplacian(f, s), h)) /
                                          (l2_norm(f) * l2_norm(Lh)));
          const Field Ldh = frac_laplacian_delta(h, s, 0.1);
          adjoint = std::max(adjoint, std::abs(inner(f, Ldh) - inner(frac_laplacian_delta(f, s, 0.1), h)) /
                                          (l2_norm(f) * l2_norm(Ldh)));
        }
        InitialCondition ic;
        ic.kind = InitialKind::random_positive;
        ic.seed = rng();
        ic.min = -1.0;
        ic.max = 1.0;
        const Field smooth = make_initial(g, ic);
        besov_excess = std::max(besov_excess, besov_seminorm(smooth, 0.0, BesovSum::infinity) -
                                                  2.0 * linf_norm(smooth));
      }
    }
    rep.check("spectral.roundtrip", roundtrip, "<", 1e-12);
    rep.check("spectral.self_adjoint", adjoint, "<=", 1e-12);
    rep.check("spectral.besov_r0_bound_excess", besov_excess, "<=", 0.0);

    double dominance = -std::numeric_limits<double>::infinity();
    double diff_excess = -std::numeric_limits<double>::infinity();
    for (double s : {0.3, 0.5, 1.0}) {
      const auto full = FourierMultiplier::fractional(g1, s).symbol();
      double kmax2s = 0.0;
      for (double m : full) kmax2s = std::max(kmax2s, m * m);
      for (double delta : {1e-3, 1e-2, 1e-1, 1.0}) {
        const auto reg = FourierMultiplier::regularized(g1, s, delta).symbol();
        for (std::size_t p = 0; p < full.size(); ++p) dominance = std::max(dominance, reg[p] - full[p]);
        for (double eps : {0.5 * delta, 0.25 * delta}) {
          const auto other = FourierMultiplier::regularized(g1, s, eps).symbol();
          double worst = 0.0;
          for (std::size_t p = 0; p < full.size(); ++p) worst = std::max(worst, std::abs(reg[p] - other[p]));
          diff_excess = std::max(diff_excess, worst - 0.5 * std::abs(delta - eps) * kmax2s);
        }
      }
    }
    rep.check("spectral.multiplier_domination_excess", dominance, "<=", 0.0);
    rep.check("spectral.delta_difference_excess", diff_excess, "<=", 0.0);
  }

  // kernel
  {
    std::size_t bad = 0;
    for (const Grid& g : {g1, g2}) {
      const KernelTable K = periodic_kernel(g, 0.5, 4);
      for (std::size_t p = 0; p < g.size(); ++p) {
        if (p == KernelTable::singular_index) continue;
        if (!(K.values[p] > 0.0) || K.values[p] != K.values[g.negated(p)]) ++bad;
      }
    }
    rep.check("kernel.symmetry_positivity_defects", static_cast<double>(bad), "<=", 0.0);

    std::uniform_real_distribution<double> pick(1.0, 2.5);
    std::size_t asym = 0, outside = 0;
    for (const char* kind : {"identity", "power_int", "exp_minus_one"}) {
      const Nonlinearity F = make_nonlinearity(kind, std::string(kind) == "power_int" ? 2.0 : 0.0);
      for (int dim : {1, 2}) {
        const double c = cds(dim, 0.5);
        const double L = ellipticity_lambda(1.0, 2.5, F, dim, 0.5);
        for (int k = 0; k < 1000; ++k) {
          const double a = pick(rng), b = pick(rng);
          const double m = active_kernel_m(a, b, F, c, kDefaultLambdaNodes);
          if (m != active_kernel_m(b, a, F, c, kDefaultLambdaNodes)) ++asym;
          if (m < 1.0 / L || m > L) ++outside;
        }
      }
    }
    rep.check("kernel.m_asymmetry", static_cast<double>(asym), "<=", 0.0);
    rep.check("kernel.ellipticity_sandwich_violations", static_cast<double>(outside), "<=", 0.0);
  }

  // nonlinearity
  {
    double fd = 0.0, f0 = 0.0;
    std::size_t widened = 0;
    const std::vector<Nonlinearity> kinds = {
        make_nonlinearity(NonlinearityKind::power_int, 2.0), make_nonlinearity(NonlinearityKind::power_int, 3.0),
        make_nonlinearity(NonlinearityKind::power_real, 1.5), make_nonlinearity(NonlinearityKind::exp_minus_one),
        make_nonlinearity(NonlinearityKind::u_minus_sin), make_nonlinearity(NonlinearityKind::identity)};
    for (const auto& F : kinds) {
      f0 = std::max(f0, std::abs(F.value(0.0)));
      for (double u = 0.1; u <= 5.0; u += 0.1) {
        const double h = 1e-3;
        const double d1 = (F.value(u + h) - F.value(u - h)) / (2 * h);
        const double d2 = (F.d1(u + h) - F.d1(u - h)) / (2 * h);
        const double scale = 1.0 + std::abs(F.d2(u)) + std::abs(F.d1(u));
        fd = std::max({fd, std::abs(d1 - F.d1(u)) / scale, std::abs(d2 - F.d2(u)) / scale});
      }
      if (F.kind() == NonlinearityKind::u_minus_sin) continue;
      const auto outer = fprime_bounds(F, 0.5, 3.0);
      const auto inner_b = fprime_bounds(F, 1.0, 2.0);
      if (inner_b.min < outer.min || inner_b.max > outer.max) ++widened;
    }
    rep.check("nonlinearity.F_at_zero", f0, "<=", 0.0);
    rep.check("nonlinearity.finite_difference_defect", fd, "<", 1e-4);
    rep.check("nonlinearity.bounds_widened", static_cast<double>(widened), "<=", 0.0);
  }

  // dynamics
  {
    const Nonlinearity F = make_nonlinearity(NonlinearityKind::power_int, 2.0);
    double ortho = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
      const Grid& g = trial % 2 ? g2 : g1;
      const Field u = trial % 4 < 2 ? random_field(g, rng, 0.5, 2.0) : random_field(g, rng, -1.0, 1.0);
      for (const Field& r : {rhs_spectral(u, 0.5, F), rhs_delta(u, 0.5, 0.1, F),
                             rhs_spectral(u, 0.5, F, Dealias::two_thirds)}) {
        ortho = std::max(ortho, std::abs(inner(u, r)) / (l2_norm(u) * l2_norm(r)));
      }
    }
    rep.check("dynamics.energy_orthogonality", ortho, "<=", 1e-12);

    const KernelTable K = periodic_kernel(g1, 0.5, 4);
    std::size_t sign_bad = 0;
    double flux_min = std::numeric_limits<double>::infinity();
    double chain = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const Field u = random_field(g1, rng, 0.5, 2.0);
      const std::size_t imax = u.argmax(), imin = u.argmin();
      double flux = 0.0;
      for (std::size_t j = 0; j < u.size(); ++j) {
        if (j != imax && (F.value(u[j]) - F.value(u[imax])) * u[j] * K.at(imax, j) > 0.0) ++sign_bad;
        if (j != imin && (F.value(u[j]) - F.value(u[imin])) * u[j] * K.at(imin, j) < 0.0) ++sign_bad;
        for (std::size_t i = 0; i < j; ++i) {
          flux += (F.value(u[i]) - F.value(u[j])) * (u[i] - u[j]) * K.at(i, j);
        }
      }
      flux_min = std::min(flux_min, flux);
      const Field q = rhs_quadrature(u, 0.5, F, K);
      const Field w = rhs_w(u, 0.5, F, K, kDefaultLambdaNodes);
      chain = std::max(chain, linf_norm(2.0 * hadamard(u, q) - w) / linf_norm(w));
    }
    rep.check("dynamics.quadrature_sign_law_defects", static_cast<double>(sign_bad), "<=", 0.0);
    rep.check("dynamics.momentum_flux_min", flux_min, ">=", 0.0);
    rep.check("dynamics.chain_rule_defect", chain, "<=", 1e-10);

    const Field c(g1, 1.7);
    rep.check("dynamics.constant_steady_state", linf_norm(rhs_spectral(c, 0.5, F, Dealias::two_thirds)),
              "<=", 1e-14);
    const Field u = random_field(g1, rng, 0.5, 2.0);
    const auto [p, v] = fluctuation_split(u);
    rep.check("dynamics.fluctuation_mean", std::abs(v.mean()), "<", 1e-14 * std::abs(p));
  }

  // diagnostics and determinism
  {
    std::vector<double> t, y;
    for (int k = 0; k < 50; ++k) {
      t.push_back(0.02 * k);
      y.push_back(std::exp(-3.0 * t.back()));
    }
    const DecayFit fit = fit_decay_rate(t, y, 0.0, 1.0);
    rep.check("diagnostics.synthetic_rate_error", std::abs(fit.rate - 3.0), "<=", 1e-6);

    Scenario sc = standard_scenario();
    sc.n = 32;
    sc.solver.t_end = 0.2;
    const Field u0 = sc.initial();
    const Trajectory a = evolve(u0, sc.solver, sc.F);
    const Trajectory b = evolve(u0, sc.solver, sc.F);
    std::ostringstream ca, cb;
    write_diagnostics_csv(ca, a.records);
    write_diagnostics_csv(cb, b.records);
    rep.check("experiments.determinism_mismatch", ca.str() == cb.str() ? 0.0 : 1.0, "<=", 0.0);

    std::stringstream bin;
    write_snapshot(bin, u0, 0.5, 0.25);
    const SnapshotFile back = read_snapshot(bin);
    rep.check("experiments.snapshot_roundtrip", linf_norm(back.u - u0), "<=", 0.0);
  }
  return rep;
}

RunReport run_verify(const std::string& suite) {
  if (suite != "invariants" && suite != "all") {
    throw std::invalid_argument("unknown suite '" + suite + "' (expected invariants or all)");
  }
  RunReport rep;
  rep.scenario = "verify-" + suite;
  rep.merge(run_invariants(), "invariants");
  if (suite == "invariants") return rep;

  rep.merge(run_decay(standard_scenario()), "decay");
  rep.merge(run_decay(decay_2d_scenario()), "decay2d");
  const Scenario bl = blowup_scenario();
  rep.merge(run_blowup(bl, bl.t_star), "blowup");
  rep.merge(run_blowup(bl, 0.0), "blowup0");
  const Scenario st = stability_scenario();
  Scenario data_only = st;
  data_only.F2.reset();
  rep.merge(run_stability(data_only, perturbed(data_only)), "stability_data");
  Scenario f_only = st;
  f_only.perturb_amplitude = 0.0;
  f_only.F2 = make_nonlinearity(NonlinearityKind::power_real, 2.001);
  rep.merge(run_stability(f_only, perturbed(f_only)), "stability_F");
  const Scenario dc = delta_cauchy_scenario();
  rep.merge(run_delta_cauchy(dc, dc.deltas), "delta_cauchy");
  rep.merge(run_crossval(crossval_scenario()), "crossval");
  rep.merge(run_scaling(scaling_scenario()), "scaling");
  rep.merge(run_time_reversal(reversal_scenario()), "reversal");
  return rep;
}

// ---------------------------------------------------------------------------
// I/O

namespace {

template <class T>
void put(std::ostream& os, T v) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  os.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  unsigned char bytes[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(bytes), sizeof(T))) {
    throw std::runtime_error("snapshot: truncated file");
  }
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T v;
  std::memcpy(&v, bytes, sizeof(T));
  return v;
}

}  // namespace

void write_snapshot(std::ostream& os, const Field& u, double s, double t) {
  os.write("GNBF", 4);
  put<std::uint32_t>(os, 1);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(u.grid().dim()));
  put<std::uint32_t>(os, static_cast<std::uint32_t>(u.grid().n()));
  put<double>(os, s);
  put<double>(os, t);
  for (double v : u.values()) put<double>(os, v);
}

SnapshotFile read_snapshot(std::istream& is) {
  char magic[4];
  if (!is.read(magic, 4) || std::memcmp(magic, "GNBF", 4) != 0) {
    throw std::runtime_error("snapshot: bad magic");
  }
  if (get<std::uint32_t>(is) != 1) throw std::runtime_error("snapshot: unsupported version");
  const int d = static_cast<int>(get<std::uint32_t>(is));
  const int n = static_cast<int>(get<std::uint32_t>(is));
  const double s = get<double>(is);
  const double t = get<double>(is);
  Field u(make_grid(d, n));
  for (double& v : u.values()) v = get<double>(is);
  return {std::move(u), s, t};
}

void emit_plot(std::istream& csv, const std::string& column_name, std::ostream& out) {
  std::string line;
  if (!std::getline(csv, line)) throw std::runtime_error("emit_plot: empty CSV");
  const auto header = split(line, ',');
  const auto find = [&](const std::string& name) {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw std::invalid_argument("emit_plot: no column '" + name + "'");
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t ti = find("t");
  const std::size_t ci = find(column_name);
  out << "# t " << column_name << '\n';
  while (std::getline(csv, line)) {
    if (trim(line).empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != header.size()) throw std::runtime_error("emit_plot: ragged row");
    out << cells[ti] << ' ' << cells[ci] << '\n';
  }
}

fs::path write_report(const RunReport& report, const fs::path& dir) {
  fs::create_directories(dir);
  const fs::path path = dir / "report.json";
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << report.to_json() << '\n';
  return path;
}

RunReport simulate(const Scenario& sc, const fs::path& out_dir) {
  RunReport rep;
  rep.scenario = sc.name;
  rep.echo = describe(sc);
  const Field u0 = sc.initial();
  const Trajectory traj = evolve(u0, sc.solver, sc.F);

  fs::create_directories(out_dir / "snapshots");
  const fs::path csv = out_dir / "diagnostics.csv";
  {
    std::ofstream os(csv);
    if (!os) throw std::runtime_error("cannot write " + csv.string());
    write_diagnostics_csv(os, traj.records);
  }
  rep.artifacts.push_back(csv.string());
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "snap_%04zu.gnbf", i);
    const fs::path p = out_dir / "snapshots" / name;
    std::ofstream os(p, std::ios::binary);
    write_snapshot(os, traj.snapshots[i].u, sc.solver.s, traj.snapshots[i].t);
    rep.artifacts.push_back(p.string());
  }

  rep.measured["steps"] = static_cast<double>(traj.steps);
  rep.measured["t_final"] = traj.stop_time;
  rep.notes.push_back("stop reason: " + to_string(traj.stop_reason));
  if (u0.is_admissible()) rep.check("no_blowup", traj.blew_up() ? 1.0 : 0.0, "<=", 0.0);
  rep.artifacts.push_back((out_dir / "report.json").string());
  write_report(rep, out_dir);
  return rep;
}

}  // namespace gnb
