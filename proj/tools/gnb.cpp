#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "gnb/experiments.hpp"

namespace fs = std::filesystem;
using namespace gnb;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

Scenario scenario_or(const std::string& config, Scenario fallback) {
  if (config.empty()) return fallback;
  if (!fs::exists(config)) throw ConfigError("config file not found: " + config);
  return load_scenario(config, std::move(fallback));
}

int finish(const RunReport& report, const fs::path& out) {
  const fs::path path = write_report(report, out);
  report.print(std::cout);
  std::cout << (report.passed() ? "PASS" : "FAIL") << "  (report: " << path.string() << ")\n";
  return report.passed() ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator and property checks for non-local Burgers equations on the torus"};
  app.require_subcommand(1);

  std::string config, out, suite = "invariants", csv, col;
  std::optional<double> t_star;

  auto* simulate_cmd = app.add_subcommand("simulate", "evolve a configured scenario and write its data");
  simulate_cmd->add_option("--config", config, "scenario file")->required();
  simulate_cmd->add_option("--out", out, "output directory")->required();

  auto* decay = app.add_subcommand("decay", "amplitude and gradient decay with conservation checks");
  auto* blowup = app.add_subcommand("blowup", "gradient blow-up by time reversal");
  blowup->add_option("--t-star", t_star, "forward horizon before the reversal");
  auto* stability = app.add_subcommand("stability", "stability under perturbed data or F");
  auto* delta = app.add_subcommand("delta-cauchy", "collapse of regularized-flow gaps");
  auto* crossval = app.add_subcommand("crossval", "spectral against quadrature right-hand side");
  for (auto* cmd : {decay, blowup, stability, delta, crossval}) {
    cmd->add_option("--config", config, "scenario file (built-in default otherwise)");
    cmd->add_option("--out", out, "report directory");
  }

  auto* verify = app.add_subcommand("verify", "run property suites");
  verify->add_option("--suite", suite, "invariants or all")
      ->check(CLI::IsMember({"invariants", "all"}));
  verify->add_option("--out", out, "report directory");

  auto* plot = app.add_subcommand("emit-plot", "two-column data from a diagnostics CSV");
  plot->add_option("--csv", csv, "diagnostics CSV")->required();
  plot->add_option("--col", col, "column name")->required();
  plot->add_option("--out", out, "output file (stdout otherwise)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  auto out_dir = [&](const std::string& name) { return out.empty() ? fs::path("gnb-out") / name : fs::path(out); };

  try {
    if (*simulate_cmd) {
      if (!fs::exists(config)) throw ConfigError("config file not found: " + config);
      const Scenario sc = load_scenario(config);
      const RunReport r = simulate(sc, out);
      r.print(std::cout);
      std::cout << (r.passed() ? "PASS" : "FAIL") << "  (output: " << out << ")\n";
      return r.passed() ? 0 : kExitFail;
    }
    if (*decay) return finish(run_decay(scenario_or(config, standard_scenario())), out_dir("decay"));
    if (*blowup) {
      const Scenario sc = scenario_or(config, blowup_scenario());
      return finish(run_blowup(sc, t_star.value_or(sc.t_star)), out_dir("blowup"));
    }
    if (*stability) {
      if (!config.empty()) {
        Scenario sc = scenario_or(config, stability_scenario());
        Scenario base = sc;
        base.F2.reset();
        base.perturb_amplitude = 0.0;
        return finish(run_stability(base, perturbed(sc)), out_dir("stability"));
      }
      const Scenario sc = stability_scenario();
      RunReport rep;
      rep.scenario = "stability";
      rep.merge(run_stability(sc, perturbed(sc)), "data");
      Scenario f_only = sc;
      f_only.perturb_amplitude = 0.0;
      f_only.F2 = make_nonlinearity(NonlinearityKind::power_real, 2.001);
      rep.merge(run_stability(f_only, perturbed(f_only)), "F");
      return finish(rep, out_dir("stability"));
    }
    if (*delta) {
      const Scenario sc = scenario_or(config, delta_cauchy_scenario());
      return finish(run_delta_cauchy(sc, sc.deltas), out_dir("delta-cauchy"));
    }
    if (*crossval) return finish(run_crossval(scenario_or(config, crossval_scenario())), out_dir("crossval"));
    if (*verify) return finish(run_verify(suite), out_dir("verify-" + suite));
    if (*plot) {
      std::ifstream in(csv);
      if (!in) throw ConfigError("CSV file not found: " + csv);
      if (out.empty()) {
        emit_plot(in, col, std::cout);
      } else {
        std::ofstream os(out);
        emit_plot(in, col, os);
      }
      return 0;
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }
  return kExitUsage;
}
