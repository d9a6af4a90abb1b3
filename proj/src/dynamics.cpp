#include "gnb/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include "gnb/parallel.hpp"

namespace gnb {

std::string to_string(RhsMode m) { return m == RhsMode::spectral ? "spectral" : "quadrature"; }

std::string to_string(Stepper s) {
  return s == Stepper::rk4_fixed ? "rk4_fixed" : "rk4_adaptive";
}

std::string to_string(Dealias d) {
  switch (d) {
    case Dealias::none: return "none";
    case Dealias::two_thirds: return "two_thirds";
    case Dealias::automatic: return "auto";
  }
  return "unknown";
}

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::completed: return "completed";
    case StopReason::non_finite: return "non_finite";
    case StopReason::step_underflow: return "step_underflow";
  }
  return "unknown";
}

Dealias resolve_dealias(Dealias d, const Nonlinearity& F) {
  if (d != Dealias::automatic) return d;
  switch (F.kind()) {
    case NonlinearityKind::identity:
    case NonlinearityKind::power_int:
    case NonlinearityKind::power_real: return Dealias::two_thirds;
    default: return Dealias::none;
  }
}

void SolverConfig::validate() const {
  std::ostringstream err;
  if (!(s > 0.0 && s <= 1.0)) err << "s must lie in (0, 1]; ";
  if (!(delta >= 0.0)) err << "delta must be >= 0; ";
  if (!(dt > 0.0)) err << "dt must be positive; ";
  if (!(t_end > 0.0)) err << "t_end must be positive; ";
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) err << "cfl_safety must lie in (0, 1]; ";
  if (diag_every < 1) err << "diag_every must be >= 1; ";
  if (snapshot_count < 2) err << "snapshot_count must be >= 2; ";
  if (rhs_mode == RhsMode::quadrature && s >= 1.0) {
    err << "quadrature mode needs s < 1 (s = 1 needs Hadamard's finite part); ";
  }
  if (rhs_mode == RhsMode::quadrature && delta > 0.0) {
    err << "the regularized operator is spectral only; ";
  }
  if (!err.str().empty()) throw std::invalid_argument("invalid solver config: " + err.str());
}

CommutatorRhs::CommutatorRhs(const Grid& grid, double s, double delta, Nonlinearity F,
                             Dealias dealias)
    : F_(F),
      symbol_(delta > 0.0 ? FourierMultiplier::regularized(grid, s, delta)
                          : FourierMultiplier::fractional(grid, s)) {
  if (resolve_dealias(dealias, F) == Dealias::two_thirds) {
    truncation_ = FourierMultiplier::two_thirds(grid);
  }
}

Field CommutatorRhs::operator()(const Field& u) const {
  Field g = map(u, [this](double v) { return F_.value(v); });
  if (truncation_) g = truncation_->apply(g);
  Field out = hadamard(g, symbol_.apply(u));
  out -= symbol_.apply(hadamard(u, g));
  return out;
}

QuadratureRhs::QuadratureRhs(KernelTable kernel, Nonlinearity F)
    : kernel_(std::move(kernel)), F_(F) {}

Field QuadratureRhs::operator()(const Field& u) const {
  require_same_grid(u.grid(), kernel_.grid, "rhs_quadrature");
  const std::size_t N = u.size();
  std::vector<double> fu(N);
  for (std::size_t i = 0; i < N; ++i) fu[i] = F_.value(u[i]);
  Field out(u.grid());
  const double cell = u.grid().cell_volume();
  parallel_for(N, [&](std::size_t i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
      if (j == i) continue;
      acc += (fu[j] - fu[i]) * u[j] * kernel_.at(i, j);
    }
    out[i] = cell * acc;
  });
  return out;
}

Field rhs_spectral(const Field& u, double s, const Nonlinearity& F, Dealias dealias) {
  return CommutatorRhs(u.grid(), s, 0.0, F, dealias)(u);
}

Field rhs_quadrature(const Field& u, double s, const Nonlinearity& F, const KernelTable& K) {
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("rhs_quadrature needs s in (0, 1)");
  require_same_grid(u.grid(), K.grid, "rhs_quadrature");
  if (K.s != s) throw std::invalid_argument("rhs_quadrature: kernel built for another s");
  return QuadratureRhs(K, F)(u);
}

Field rhs_delta(const Field& u, double s, double delta, const Nonlinearity& F, Dealias dealias) {
  if (!(delta > 0.0)) throw std::invalid_argument("rhs_delta needs delta > 0");
  return CommutatorRhs(u.grid(), s, delta, F, dealias)(u);
}

Field rhs_w(const Field& u, double s, const Nonlinearity& F, const KernelTable& K, int nq) {
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("rhs_w needs s in (0, 1)");
  require_same_grid(u.grid(), K.grid, "rhs_w");
  if (K.s != s) throw std::invalid_argument("rhs_w: kernel built for another s");
  if (!u.is_admissible()) throw std::invalid_argument("rhs_w needs a strictly positive state");
  const std::size_t N = u.size();
  Field out(u.grid());
  const double cell = u.grid().cell_volume();
  const double c = K.c_ds;
  parallel_for(N, [&](std::size_t i) {
    const double wi = u[i] * u[i];
    double acc = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
      if (j == i) continue;
      const double m = active_kernel_m(u[i], u[j], F, c, nq);
      acc += (u[j] * u[j] - wi) * m * (K.at(i, j) / c);
    }
    out[i] = cell * acc;
  });
  return out;
}

Fluctuation fluctuation_split(const Field& u) {
  const double p = u.mean();
  Field v = u;
  for (double& x : v.values()) x -= p;
  return {p, std::move(v)};
}

MomentumCheck momentum_derivative_check(const Field& u, double s, const Nonlinearity& F) {
  const double cell = u.grid().cell_volume();
  const auto L = FourierMultiplier::fractional(u.grid(), s);
  MomentumCheck out{};

  const Field r = CommutatorRhs(u.grid(), s, 0.0, F, Dealias::none)(u);
  for (double x : r.values()) out.lhs += x;
  out.lhs *= cell;

  const Field Lu = L.apply(u);
  for (std::size_t i = 0; i < u.size(); ++i) out.rhs += F.value(u[i]) * Lu[i];
  out.rhs *= cell;

  const auto [p, v] = fluctuation_split(u);
  const Field Lv = L.apply(v);
  const double Fp = F.value(p);
  for (std::size_t i = 0; i < u.size(); ++i) out.rhs_fluctuation += (F.value(v[i] + p) - Fp) * Lv[i];
  out.rhs_fluctuation *= cell;
  return out;
}

namespace {

void require_finite(const Field& f, const char* stage) {
  if (!f.all_finite()) throw NonFiniteState(std::string("non-finite values in RK4 ") + stage);
}

}  // namespace

Field step_rk4(const Field& u, double dt, const RhsFunction& rhs) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_rk4 needs dt > 0");
  const Field k1 = rhs(u);
  require_finite(k1, "stage 1");
  Field tmp = u;
  tmp.axpy(0.5 * dt, k1);
  const Field k2 = rhs(tmp);
  require_finite(k2, "stage 2");
  tmp = u;
  tmp.axpy(0.5 * dt, k2);
  const Field k3 = rhs(tmp);
  require_finite(k3, "stage 3");
  tmp = u;
  tmp.axpy(dt, k3);
  const Field k4 = rhs(tmp);
  require_finite(k4, "stage 4");

  Field out = u;
  const double w = dt / 6.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] += w * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }
  require_finite(out, "update");
  return out;
}

double cfl_time_step(const Field& u, const Nonlinearity& F, double symbol_max, double safety) {
  double fmax = 0.0;
  double slope = 0.0;
  for (double v : u.values()) {
    const double f = F.value(v);
    fmax = std::max(fmax, std::abs(f));
    slope = std::max(slope, std::abs(f + v * F.d1(v)));
  }
  const double rate = symbol_max * (fmax + slope);
  if (!(rate > 0.0)) return std::numeric_limits<double>::infinity();
  return safety / rate;
}

Trajectory evolve(const Field& u0, const SolverConfig& cfg, const Nonlinearity& F) {
  cfg.validate();
  const Grid& grid = u0.grid();

  RhsFunction rhs;
  double symbol_max = 0.0;
  if (cfg.rhs_mode == RhsMode::quadrature) {
    auto q = std::make_shared<QuadratureRhs>(periodic_kernel(grid, cfg.s, cfg.kernel_truncation), F);
    rhs = [q](const Field& u) { return (*q)(u); };
    symbol_max = FourierMultiplier::fractional(grid, cfg.s).max_symbol();
  } else {
    auto c = std::make_shared<CommutatorRhs>(grid, cfg.s, cfg.delta, F, cfg.dealias);
    rhs = [c](const Field& u) { return (*c)(u); };
    symbol_max = c->symbol_max();
  }

  const Recorder recorder(grid, cfg.s, F, cfg.track_lp3, cfg.kernel_truncation);

  Trajectory traj{cfg, F, {}, {}, StopReason::completed, 0.0, 0};
  traj.snapshots.push_back({0.0, u0});
  traj.records.push_back(recorder.record(u0, 0.0));

  std::vector<double> snapshot_times;
  if (!cfg.snapshot_every_record) {
    for (int i = 0; i < cfg.snapshot_count; ++i) {
      snapshot_times.push_back(cfg.t_end *
                               std::pow(10.0, -3.0 + 3.0 * i / (cfg.snapshot_count - 1)));
    }
  }
  std::size_t next_snapshot = 0;

  const double time_eps = 1e-12 * std::max(1.0, cfg.t_end);
  Field u = u0;
  double t = 0.0;
  while (cfg.t_end - t > time_eps) {
    double t_next = 0.0;
    if (cfg.stepper == Stepper::rk4_fixed) {
      t_next = static_cast<double>(traj.steps + 1) * cfg.dt;
    } else {
      const double dt = std::min(cfg.dt, cfl_time_step(u, F, symbol_max, cfg.cfl_safety));
      if (dt < 1e-12) {
        traj.stop_reason = StopReason::step_underflow;
        break;
      }
      t_next = t + dt;
    }
    if (t_next > cfg.t_end - time_eps) t_next = cfg.t_end;

    try {
      u = step_rk4(u, t_next - t, rhs);
    } catch (const NonFiniteState&) {
      traj.stop_reason = StopReason::non_finite;
      break;
    }
    t = t_next;
    ++traj.steps;

    const bool last = t >= cfg.t_end;
    if (traj.steps % static_cast<std::size_t>(cfg.diag_every) == 0 || last) {
      traj.records.push_back(recorder.record(u, t, &traj.records.back()));
      if (cfg.snapshot_every_record) traj.snapshots.push_back({t, u});
    }
    if (!cfg.snapshot_every_record && next_snapshot < snapshot_times.size() &&
        t >= snapshot_times[next_snapshot]) {
      traj.snapshots.push_back({t, u});
      while (next_snapshot < snapshot_times.size() && t >= snapshot_times[next_snapshot]) {
        ++next_snapshot;
      }
    }
  }

  traj.stop_time = t;
  if (traj.snapshots.back().t != t) traj.snapshots.push_back({t, u});
  if (traj.records.back().t != t) traj.records.push_back(recorder.record(u, t, &traj.records.back()));
  return traj;
}

DeltaPair evolve_delta_pair(const Field& u0, SolverConfig cfg, const Nonlinearity& F,
                            double delta, double epsilon) {
  for (double d : {delta, epsilon}) {
    if (!(d > 0.0 && d <= 1.0)) throw std::invalid_argument("delta pair needs values in (0, 1]");
  }
  if (cfg.stepper == Stepper::rk4_adaptive) {
    // |k|^s dominates every regularized symbol, and max|u| only decreases.
    const double bound = FourierMultiplier::fractional(u0.grid(), cfg.s).max_symbol();
    cfg.dt = std::min(cfg.dt, cfl_time_step(u0, F, bound, cfg.cfl_safety));
    cfg.stepper = Stepper::rk4_fixed;
  }
  cfg.rhs_mode = RhsMode::spectral;
  cfg.snapshot_every_record = true;

  cfg.delta = delta;
  Trajectory first = evolve(u0, cfg, F);
  cfg.delta = epsilon;
  DeltaPair pair{std::move(first), evolve(u0, cfg, F), {}, {}};

  const std::size_t count = std::min(pair.first.snapshots.size(), pair.second.snapshots.size());
  for (std::size_t i = 0; i < count; ++i) {
    const auto& a = pair.first.snapshots[i];
    const auto& b = pair.second.snapshots[i];
    if (a.t != b.t) throw std::logic_error("delta pair stamps diverged");
    pair.t.push_back(a.t);
    pair.gap.push_back(l2_norm(a.u - b.u));
  }
  return pair;
}

}  // namespace gnb
