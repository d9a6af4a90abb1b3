// Runs every acceptance criterion at its stated tolerance and prints one
// PASS/FAIL line per criterion. Exit status is nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "gnb/diagnostics.hpp"
#include "gnb/dynamics.hpp"
#include "gnb/experiments.hpp"
#include "gnb/kernel.hpp"
#include "gnb/spectral.hpp"

using namespace gnb;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> lines;

  void expect(const std::string& what, double measured, const std::string& rel, double tol) {
    bool ok = false;
    if (rel == "<") ok = measured < tol;
    else if (rel == "<=") ok = measured <= tol;
    else if (rel == ">") ok = measured > tol;
    else if (rel == ">=") ok = measured >= tol;
    pass = pass && ok;
    char buf[256];
    std::snprintf(buf, sizeof buf, "%s %s: %.6g %s %.6g", ok ? "ok  " : "FAIL", what.c_str(),
                  measured, rel.c_str(), tol);
    lines.emplace_back(buf);
  }

  void absorb(const RunReport& r, const std::string& prefix) {
    for (const auto& a : r.assertions) expect(prefix + a.name, a.measured, a.relation, a.tol);
  }

  void note(const std::string& s) { lines.push_back("     " + s); }
};

struct Criterion {
  int id;
  std::string name;
  double budget_s;
  std::function<Outcome()> run;
};

const Nonlinearity kId = make_nonlinearity(NonlinearityKind::identity);
const Nonlinearity kSq = make_nonlinearity(NonlinearityKind::power_int, 2.0);
const Nonlinearity kCube = make_nonlinearity(NonlinearityKind::power_int, 3.0);
const Nonlinearity kExp = make_nonlinearity(NonlinearityKind::exp_minus_one);

Field random_field(const Grid& g, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  Field f(g);
  for (double& v : f.values()) v = dist(rng);
  return f;
}



const Assertion& assertion(const RunReport& r, const std::string& name) {
  for (const auto& a : r.assertions) {
    if (a.name == name) return a;
  }
  throw std::logic_error("no assertion " + name);
}

// Lazily evaluated decay runs shared by several criteria.
std::optional<DecayOutcome> g_standard;
std::optional<DecayOutcome> g_2d;

const DecayOutcome& standard_run() {
  if (!g_standard) g_standard = run_decay_full(standard_scenario());
  return *g_standard;
}

const DecayOutcome& run_2d() {
  if (!g_2d) g_2d = run_decay_full(decay_2d_scenario());
  return *g_2d;
}

void copy(Outcome& out, const RunReport& r, const std::string& name, const std::string& prefix) {
  const Assertion& a = assertion(r, name);
  out.expect(prefix + a.name, a.measured, a.relation, a.tol);
}

Outcome spectral_exactness() {
  Outcome out;
  double worst = 0.0;
  for (int d : {1, 2}) {
    const Grid g = make_grid(d, 32);
    for (int k : {1, 2, 4, 8}) {
      const int k2 = d == 2 ? k : 0;
      const Field f = Field::from_function(g, [&](const Point& x) { return std::cos(k * x[0] + k2 * x[1]); });
      for (double s : {0.3, 0.5, 1.0}) {
        const double sym = std::pow(std::sqrt(double(k * k + k2 * k2)), s);
        const Field Lf = frac_laplacian(f, s);
        worst = std::max(worst, linf_norm(Lf - sym * f) / (sym * linf_norm(f)));
      }
    }
  }
  out.expect("max relative error", worst, "<", 1e-12);
  return out;
}

Outcome regularized_operator() {
  Outcome out;
  double excess = -1.0;
  for (int d : {1, 2}) {
    const Grid g = make_grid(d, d == 1 ? 256 : 64);
    for (double s : {0.3, 0.5, 1.0}) {
      const auto full = FourierMultiplier::fractional(g, s);
      for (double delta : {1e-3, 1e-2, 1e-1, 1.0}) {
        const auto reg = FourierMultiplier::regularized(g, s, delta);
        for (std::size_t p = 0; p < g.size(); ++p) {
          excess = std::max(excess, reg.symbol()[p] - full.symbol()[p]);
        }
      }
    }
  }
  out.expect("max(m_delta - |k|^s)", excess, "<=", 0.0);

  const Grid g = make_grid(1, 128);
  const Field u = Field::from_function(g, [](const Point& x) {
    return 2.0 + 0.5 * std::cos(x[0]) + 0.2 * std::sin(3.0 * x[0]);
  });
  const Field exact = rhs_spectral(u, 0.5, kSq);
  std::vector<double> lx, ly;
  for (double delta : {0.02, 0.01, 0.005, 0.0025}) {
    lx.push_back(std::log(delta));
    ly.push_back(std::log(l2_norm(rhs_delta(u, 0.5, delta, kSq) - exact)));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) mx += lx[i] / lx.size(), my += ly[i] / ly.size();
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  const double slope = sxy / sxx;
  out.expect("|slope - 1|", std::abs(slope - 1.0), "<=", 0.1);
  return out;
}

Outcome conservation() {
  Outcome out;
  std::mt19937_64 rng(101);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int d = trial % 2 ? 2 : 1;
    const Grid g = make_grid(d, d == 1 ? 128 : 32);
    const bool positive = trial % 4 < 2;
    const Field u = random_field(g, rng, positive ? 0.2 : -2.0, 2.0);
    const Field a = rhs_spectral(u, 0.5, kSq);
    const Field b = rhs_delta(u, 0.5, 0.1, kSq);
    worst = std::max(worst, std::abs(inner(u, a)) / (l2_norm(u) * l2_norm(a)));
    worst = std::max(worst, std::abs(inner(u, b)) / (l2_norm(u) * l2_norm(b)));
  }
  out.expect("max |<u, rhs>| / (|u| |rhs|) over 100 fields", worst, "<", 1e-12);
  copy(out, standard_run().report, "energy_drift", "standard ");
  return out;
}

Outcome max_min_principle() {
  Outcome out;
  const RunReport& r = standard_run().report;
  copy(out, r, "umax_nonincreasing", "standard ");
  copy(out, r, "umin_nondecreasing", "standard ");
  const Grid g = make_grid(1, 128);
  const KernelTable K = periodic_kernel(g, 0.5);
  std::mt19937_64 rng(102);
  int violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const Field u = random_field(g, rng, 0.2, 3.0);
    const Nonlinearity& F = trial % 3 == 0 ? kId : trial % 3 == 1 ? kSq : kExp;
    // Every term (F(u_j) - F(u_i)) u_j K is <= 0 at the max and >= 0 at the min.
    for (std::size_t i : {u.argmax(), u.argmin()}) {
      const double sign = i == u.argmax() ? -1.0 : 1.0;
      for (std::size_t j = 0; j < g.size(); ++j) {
        if (j == i) continue;
        const double term = (F.value(u[j]) - F.value(u[i])) * u[j] * K.at(i, j);
        if (sign * term < 0.0) ++violations;
      }
    }
    const Field r2 = rhs_quadrature(u, 0.5, F, K);
    if (r2[u.argmax()] > 0.0 || r2[u.argmin()] < 0.0) ++violations;
  }
  out.expect("sign-law violations over 100 fields", violations, "<=", 0.0);
  return out;
}

Outcome momentum() {
  Outcome out;
  const RunReport& r = standard_run().report;
  copy(out, r, "flux_nonnegative", "standard ");
  copy(out, r, "momentum_identity", "standard ");
  return out;
}

Outcome lp3_and_hs2() {
  Outcome out;
  const RunReport& r = standard_run().report;
  copy(out, r, "lp3_closure", "standard ");
  copy(out, r, "hs2_budget", "standard ");
  return out;
}

Outcome amplitude_decay() {
  Outcome out;
  for (const auto* run : {&standard_run(), &run_2d()}) {
    const RunReport& r = run->report;
    const std::string p = r.scenario + " ";
    copy(out, r, "amplitude_envelope", p);
    copy(out, r, "amplitude_rate_vs_eta", p);
    out.note(p + "eta = " + std::to_string(r.measured.at("eta")));
  }
  return out;
}

Outcome gradient_decay() {
  Outcome out;
  const RunReport& r = standard_run().report;
  copy(out, r, "gradient_rate_positive", "standard ");
  copy(out, r, "gradient_fit_r2", "standard ");
  out.note("onset t = " + std::to_string(r.measured.at("gradient_onset")));
  return out;
}

Outcome terminal_state() {
  Outcome out;
  for (const auto* run : {&standard_run(), &run_2d()}) {
    const RunReport& r = run->report;
    copy(out, r, "terminal_amplitude_ratio", r.scenario + " ");
    copy(out, r, "terminal_constant", r.scenario + " ");
  }
  return out;
}

Outcome ellipticity() {
  Outcome out;
  std::mt19937_64 rng(103);
  const double lo = 0.5, hi = 3.0;
  std::uniform_real_distribution<double> dist(lo, hi);
  for (const auto& F : {kId, kSq, kExp}) {
    const double lam = ellipticity_lambda(lo, hi, F, 1, 0.5);
    int bad = 0;
    for (int k = 0; k < 1000; ++k) {
      const double m = active_kernel_m(dist(rng), dist(rng), F, 1, 0.5);
      if (m < 1.0 / lam || m > lam) ++bad;
    }
    out.expect(F.describe() + " sandwich violations", bad, "<=", 0.0);
  }
  return out;
}

Outcome crossval() {
  Outcome out;
  const RunReport r = run_crossval(crossval_scenario());
  out.absorb(r, "");
  for (int n : {64, 128, 256}) {
    out.note("error n=" + std::to_string(n) + ": " +
             std::to_string(r.measured.at("error_n" + std::to_string(n))));
  }
  return out;
}

Outcome delta_cauchy() {
  Outcome out;
  const Scenario sc = delta_cauchy_scenario();
  out.absorb(run_delta_cauchy(sc, sc.deltas), "");
  return out;
}

Outcome stability() {
  Outcome out;
  const Scenario sc = stability_scenario();
  out.absorb(run_stability(sc, perturbed(sc)), "data ");
  Scenario f_only = sc;
  f_only.perturb_amplitude = 0.0;
  f_only.F2 = make_nonlinearity(NonlinearityKind::power_real, 2.001);
  out.absorb(run_stability(f_only, perturbed(f_only)), "F ");
  return out;
}

Outcome blowup() {
  Outcome out;
  const Scenario sc = blowup_scenario();
  const RunReport r = run_blowup(sc, sc.t_star);
  out.absorb(r, "");
  out.note("gradient growth = " + std::to_string(r.measured.at("gradient_growth")));
  out.absorb(run_blowup(sc, 0.0), "t_star=0 ");
  return out;
}

Outcome symmetries() {
  Outcome out;
  out.absorb(run_scaling(scaling_scenario()), "scaling ");
  for (const auto& F : {kId, kCube}) {
    Scenario sc = reversal_scenario();
    sc.F = F;
    out.absorb(run_time_reversal(sc), "reversal F=" + F.describe() + " ");
  }
  return out;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "spectral operator exactness", 1, spectral_exactness},
      {2, "regularized operator domination and delta limit", 5, regularized_operator},
      {3, "discrete energy conservation", 30, conservation},
      {4, "max/min principle", 30, max_min_principle},
      {5, "momentum monotonicity and identity", 30, momentum},
      {6, "L3 functional and H^{s/2} budget", 120, lp3_and_hs2},
      {7, "amplitude decay envelope", 120, amplitude_decay},
      {8, "gradient decay", 60, gradient_decay},
      {9, "terminal constant state", 120, terminal_state},
      {10, "ellipticity sandwich", 5, ellipticity},
      {11, "spectral vs quadrature cross-validation", 60, crossval},
      {12, "delta-Cauchy collapse", 120, delta_cauchy},
      {13, "stability bound", 120, stability},
      {14, "blow-up witness by time reversal", 120, blowup},
      {15, "scaling and time-reversal symmetries", 120, symmetries},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.lines.push_back(std::string("FAIL exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failed;
    std::printf("%s criterion %2d: %s (%.2f s, budget %.0f s)\n", o.pass ? "PASS" : "FAIL", c.id,
                c.name.c_str(), secs, c.budget_s);
    for (const auto& l : o.lines) std::printf("       %s\n", l.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
