#include "gnb/record.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "gnb/parallel.hpp"

namespace gnb {

double column_value(const DiagnosticsRecord& r, std::string_view column) {
  if (column == "t") return r.t;
  if (column == "energy") return r.energy;
  if (column == "momentum") return r.momentum;
  if (column == "umin") return r.umin;
  if (column == "umax") return r.umax;
  if (column == "amplitude") return r.amplitude;
  if (column == "grad_inf") return r.grad_inf;
  if (column == "besov_1_inf_inf") return r.besov_1_inf_inf;
  if (column == "hs2_sq") return r.hs2_sq;
  if (column == "flux") return r.flux;
  if (column == "lp3_cumulative") return r.lp3_cumulative;
  if (column == "bkm_accum") return r.bkm_accum;
  throw std::invalid_argument("unknown diagnostics column '" + std::string(column) + "'");
}

double lp_functional_increment(const Field& u, double p, const Nonlinearity& F,
                               const KernelTable& K) {
  if (!(p > 2.0)) throw std::invalid_argument("lp_functional_increment needs p > 2");
  require_same_grid(u.grid(), K.grid, "lp_functional_increment");
  const std::size_t N = u.size();
  std::vector<double> weight(N), fu(N);
  for (std::size_t i = 0; i < N; ++i) {
    weight[i] = std::pow(std::abs(u[i]), p - 2.0);
    fu[i] = F.value(u[i]);
  }
  std::vector<double> rows(N, 0.0);
  parallel_for(N, [&](std::size_t i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < N; ++j) {
      if (j == i) continue;
      acc += (weight[i] - weight[j]) * (fu[i] - fu[j]) * u[j] * K.at(i, j);
    }
    rows[i] = acc * u[i];
  });
  double total = 0.0;
  for (double r : rows) total += r;
  const double cell = u.grid().cell_volume();
  return 0.5 * p * cell * cell * total;
}

Recorder::Recorder(const Grid& grid, double s, Nonlinearity F, bool track_lp3,
                   int kernel_truncation)
    : grid_(grid),
      s_(s),
      F_(F),
      track_lp3_(track_lp3),
      fractional_(FourierMultiplier::fractional(grid, s)) {
  if (track_lp3_ && s < 1.0) kernel_ = periodic_kernel(grid, s, kernel_truncation);
}

double Recorder::lp3_rate(const Field& u, const Field& frac_u) const {
  if (kernel_) return lp_functional_increment(u, 3.0, F_, *kernel_);
  // -d/dt int |u|^3 = -3 int |u| u [F(u), |grad|^s] u
  Field fu = map(u, [this](double v) { return F_.value(v); });
  const Field frac_ufu = fractional_.apply(hadamard(u, fu));
  double acc = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    acc += std::abs(u[i]) * u[i] * (fu[i] * frac_u[i] - frac_ufu[i]);
  }
  return -3.0 * acc * grid_.cell_volume();
}

DiagnosticsRecord Recorder::record(const Field& u, double t, const DiagnosticsRecord* prev) const {
  require_same_grid(grid_, u.grid(), "Recorder::record");
  DiagnosticsRecord r;
  r.t = t;
  r.energy = l2_norm(u);
  r.momentum = integral(u);
  r.umin = u.min();
  r.umax = u.max();
  r.amplitude = r.umax - r.umin;
  r.grad_inf = linf_norm(gradient_magnitude(u));
  r.besov_1_inf_inf = besov_seminorm(u, 1.0, BesovSum::infinity);
  const double hs = sobolev_seminorm(u, 0.5 * s_);
  r.hs2_sq = hs * hs;
  const Field frac_u = fractional_.apply(u);
  double flux = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) flux += F_.value(u[i]) * frac_u[i];
  r.flux = flux * grid_.cell_volume();
  r.l3_cubed = lp_norm_pow(u, 3.0);
  r.lp3_rate = track_lp3_ ? lp3_rate(u, frac_u) : 0.0;
  if (prev != nullptr) {
    const double dt = t - prev->t;
    r.lp3_cumulative = prev->lp3_cumulative + 0.5 * dt * (prev->lp3_rate + r.lp3_rate);
    r.bkm_accum = prev->bkm_accum + 0.5 * dt * (prev->grad_inf + r.grad_inf);
  }
  return r;
}

DiagnosticsRecord record(const Field& u, double t, double s, const Nonlinearity& F,
                         const DiagnosticsRecord* prev) {
  return Recorder(u.grid(), s, F).record(u, t, prev);
}

}  // namespace gnb
