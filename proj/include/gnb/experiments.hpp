#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "gnb/diagnostics.hpp"
#include "gnb/dynamics.hpp"
#include "gnb/field.hpp"
#include "gnb/grid.hpp"
#include "gnb/nonlinearity.hpp"

namespace gnb {

/// Malformed or unknown configuration entries.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class InitialKind { constant_plus_modes, random_positive };

/// base + sum_i amplitudes[i] cos(freqs[i] . x + phases[i]), or low-pass
/// filtered uniform noise (|k| <= n / smoothness) mapped affinely onto [min, max].
struct InitialCondition {
  InitialKind kind = InitialKind::constant_plus_modes;
  double base = 2.0;
  std::vector<double> amplitudes;
  std::vector<Wavevector> freqs;
  std::vector<double> phases;
  std::uint64_t seed = 0;
  double min = 1.0;
  double max = 2.0;
  double smoothness = 8.0;
};

Field make_initial(const Grid& grid, const InitialCondition& ic);

struct Scenario {
  std::string name = "scenario";
  int dim = 1;
  int n = 128;
  Nonlinearity F = make_nonlinearity(NonlinearityKind::power_int, 2.0);
  InitialCondition u0;
  SolverConfig solver;
  int nq = kDefaultLambdaNodes;
  // Experiment parameters.
  double t_star = 0.4;                       ///< blow-up: forward horizon
  std::vector<double> deltas{0.2, 0.1, 0.05, 0.025};
  int lambda = 2;                            ///< scaling factor
  double perturb_amplitude = 0.0;            ///< stability: extra mode on u0
  Wavevector perturb_freq{3, 0};
  std::optional<Nonlinearity> F2;            ///< stability: second nonlinearity
  std::vector<int> crossval_n{64, 128, 256};

  Grid grid() const { return make_grid(dim, n); }
  Field initial() const { return make_initial(grid(), u0); }
};

/// Flat "key = value" text, '#' starts a comment. Unknown keys throw ConfigError.
Scenario parse_scenario(std::istream& in, Scenario base = {});
Scenario load_scenario(const std::filesystem::path& path, Scenario base = {});
std::map<std::string, std::string> describe(const Scenario& sc);

// Built-in scenarios.
Scenario standard_scenario();    ///< d=1, n=128, s=0.5, F=u^2, u0=2+0.5cos x, t_end=5
Scenario decay_2d_scenario();    ///< d=2, n=64, s=0.7, F=u, u0=2+0.3cos x1+0.2cos x2
Scenario blowup_scenario();      ///< F=u, s=1, rough positive data
Scenario delta_cauchy_scenario();
Scenario crossval_scenario();
Scenario stability_scenario();
Scenario scaling_scenario();
Scenario reversal_scenario();

struct Assertion {
  std::string name;
  double measured;
  double tol;
  std::string relation;  ///< how measured compares with tol: "<=", ">=", "<", ">"
  bool pass;
};

struct RunReport {
  std::string scenario;
  std::map<std::string, std::string> echo;
  std::vector<Assertion> assertions;
  std::map<std::string, double> measured;
  std::vector<std::string> notes;
  std::vector<std::string> artifacts;

  /// Records an assertion evaluated from (measured relation tol).
  const Assertion& check(const std::string& name, double measured, const std::string& relation,
                         double tol);
  void merge(const RunReport& other, const std::string& prefix);
  bool passed() const noexcept;
  std::string to_json() const;
  void print(std::ostream& os) const;
};

struct DecayOutcome {
  Trajectory trajectory;
  RunReport report;
};

/// Envelope, fitted rates, terminal state and the conservation laws along one
/// positive trajectory.
DecayOutcome run_decay_full(const Scenario& sc);
RunReport run_decay(const Scenario& sc);

/// Forward run to t_star, then the odd-reflected flow from -u(t_star).
RunReport run_blowup(const Scenario& sc, double t_star);

/// Both runs share a fixed step; the L^inf stability bound is asserted at
/// every stamp.
RunReport run_stability(const Scenario& sc1, const Scenario& sc2);
/// sc with its perturbation parameters applied (u0 mode and/or F2).
Scenario perturbed(const Scenario& sc);

RunReport run_delta_cauchy(const Scenario& sc, const std::vector<double>& deltas);

RunReport run_crossval(const Scenario& sc);

/// Solver tolerance: ||u_dt(T) - u_{dt/2}(T)||_inf for the fixed-step run.
double step_halving_error(const Field& u0, SolverConfig cfg, const Nonlinearity& F);

/// u0(lambda x) evolved for t against the lambda-dilation of u0 evolved for lambda^s t.
RunReport run_scaling(const Scenario& sc);

/// Forward for t_end, then the odd-reflected flow from -u(t_end) back to -u0.
RunReport run_time_reversal(const Scenario& sc);

/// Property checks across modules on seeded random data.
RunReport run_invariants(std::uint64_t seed = 12345);

/// "invariants" or "all".
RunReport run_verify(const std::string& suite);

/// Evolves the scenario and writes diagnostics.csv, snapshots and report.json.
RunReport simulate(const Scenario& sc, const std::filesystem::path& out_dir);

// I/O.
void write_snapshot(std::ostream& os, const Field& u, double s, double t);
struct SnapshotFile {
  Field u;
  double s;
  double t;
};
SnapshotFile read_snapshot(std::istream& is);

/// Two whitespace-separated columns "t value" from a diagnostics CSV.
void emit_plot(std::istream& csv, const std::string& column, std::ostream& out);

/// Writes report.json into dir and returns its path.
std::filesystem::path write_report(const RunReport& report, const std::filesystem::path& dir);

}  // namespace gnb
