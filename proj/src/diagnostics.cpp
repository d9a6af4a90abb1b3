#include "gnb/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>

#include "gnb/kernel.hpp"
#include "gnb/spectral.hpp"

namespace gnb {

namespace {

void require_series(const std::vector<double>& t, const std::vector<double>& y, const char* who) {
  if (t.size() != y.size()) throw std::invalid_argument(std::string(who) + ": length mismatch");
}

}  // namespace

double trapezoid(const std::vector<double>& t, const std::vector<double>& y) {
  require_series(t, y, "trapezoid");
  double acc = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) acc += 0.5 * (t[i] - t[i - 1]) * (y[i] + y[i - 1]);
  return acc;
}

double integrate_series(const std::vector<double>& t, const std::vector<double>& y) {
  require_series(t, y, "integrate_series");
  const std::size_t n = t.size();
  if (n < 2) return 0.0;
  if (n == 2) return 0.5 * (t[1] - t[0]) * (y[0] + y[1]);
  // Exact for quadratics on [t0, t0 + h0 + h1].
  auto pair = [&](std::size_t i) {
    const double h0 = t[i + 1] - t[i];
    const double h1 = t[i + 2] - t[i + 1];
    const double H = h0 + h1;
    return H / 6.0 *
           ((2.0 - h1 / h0) * y[i] + H * H / (h0 * h1) * y[i + 1] + (2.0 - h0 / h1) * y[i + 2]);
  };
  double acc = 0.0;
  std::size_t i = 0;
  for (; i + 2 < n; i += 2) acc += pair(i);
  if (i + 1 < n) {
    // Last interval from the quadratic through (-h0, a), (0, b), (h1, c).
    const double h0 = t[n - 2] - t[n - 3];
    const double h1 = t[n - 1] - t[n - 2];
    const double a = y[n - 3], b = y[n - 2], c = y[n - 1];
    const double slope = (c - b) / h1;
    const double curvature = (slope - (b - a) / h0) / (h0 + h1);
    acc += b * h1 + 0.5 * slope * h1 * h1 - curvature * h1 * h1 * h1 / 6.0;
  }
  return acc;
}

std::vector<double> column(const std::vector<DiagnosticsRecord>& records, std::string_view name) {
  std::vector<double> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(column_value(r, name));
  return out;
}

void write_diagnostics_csv(std::ostream& os, const std::vector<DiagnosticsRecord>& records) {
  for (std::size_t c = 0; c < kDiagnosticsColumns.size(); ++c) {
    if (c) os << ',';
    os << kDiagnosticsColumns[c];
  }
  os << '\n';
  char buf[32];
  for (const auto& r : records) {
    for (std::size_t c = 0; c < kDiagnosticsColumns.size(); ++c) {
      if (c) os << ',';
      std::snprintf(buf, sizeof buf, "%.17g", column_value(r, kDiagnosticsColumns[c]));
      os << buf;
    }
    os << '\n';
  }
}

Hs2Budget hs2_budget_check(const Trajectory& traj, const Field& u0, const Nonlinearity& F) {
  if (!u0.is_admissible()) throw HypothesisViolation("hs2_budget_check needs a positive u0");
  const double s = traj.config.s;
  const int dim = u0.grid().dim();
  const double c = cds(dim, s);
  const double umin = u0.min();
  const FPrimeBounds b = fprime_bounds(F, umin, u0.max());
  Hs2Budget out{};
  out.lhs = trapezoid(column(traj.records, "t"), column(traj.records, "hs2_sq"));
  out.lhs_kernel_form = 2.0 / c * out.lhs;
  out.m_min = c * umin * umin * b.min;
  out.bound = 2.0 / 3.0 * lp_norm_pow(u0, 3.0) / out.m_min;
  return out;
}

double eta_lower_bound(double umin0, double umax0, const Nonlinearity& F, int dim, double s) {
  if (!(umin0 > 0.0) || !(umax0 >= umin0)) {
    throw std::invalid_argument("eta_lower_bound needs 0 < umin0 <= umax0");
  }
  const FPrimeBounds b = fprime_bounds(F, umin0, umax0);
  const double c = cds(dim, s);
  double I = 0.0;
  if (dim == 1) {
    I = 2.0 * c * std::pow(1.0 + 4.0 * kPi, -s) / s;
  } else {
    // int_{rho}^inf r (r + a)^{-2-s} dr with t = r + a, T = rho + a.
    const double a = 2.0 * std::sqrt(2.0) * kPi;
    const double T = 1.0 + 2.0 * a;
    I = kTwoPi * c * (std::pow(T, -s) / s - a * std::pow(T, -1.0 - s) / (1.0 + s));
  }
  return umin0 * b.min * I;
}

DecayFit fit_decay_rate(const std::vector<double>& t, const std::vector<double>& value,
                        double t_lo, double t_hi) {
  require_series(t, value, "fit_decay_rate");
  std::vector<double> x, y;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_lo || t[i] > t_hi) continue;
    if (!(value[i] > 0.0)) {
      throw std::domain_error("fit_decay_rate: non-positive value in window; shrink the window");
    }
    x.push_back(t[i]);
    y.push_back(std::log(value[i]));
  }
  if (x.size() < 8) throw std::invalid_argument("fit_decay_rate needs at least 8 samples");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("fit_decay_rate: window has a single time");
  const double slope = sxy / sxx;
  double r2 = 1.0;
  if (syy > 0.0) r2 = sxy * sxy / (sxx * syy);
  return {-slope, r2, x.size()};
}

std::pair<double, double> default_decay_window(const std::vector<double>& t,
                                               const std::vector<double>& value) {
  require_series(t, value, "default_decay_window");
  if (t.empty()) throw std::invalid_argument("default_decay_window: empty series");
  const double v0 = value.front();
  std::size_t lo = 0;
  while (lo < t.size() && value[lo] > 0.5 * v0) ++lo;
  if (lo == t.size()) return {t.back(), t.back()};
  std::size_t hi = lo;
  while (hi + 1 < t.size() && !(value[hi + 1] < 1e-8 * v0)) ++hi;
  return {t[lo], t[hi]};
}

double detect_decay_onset(const std::vector<double>& t, const std::vector<double>& value,
                          double floor_ratio) {
  require_series(t, value, "detect_decay_onset");
  if (t.empty()) throw std::invalid_argument("detect_decay_onset: empty series");
  const double peak = *std::max_element(value.begin(), value.end());
  std::size_t end = 0;
  while (end + 1 < t.size() && !(value[end + 1] < floor_ratio * peak)) ++end;
  std::size_t onset = end;
  while (onset > 0 && value[onset] < value[onset - 1]) --onset;
  return t[onset];
}

double envelope_excess(const std::vector<DiagnosticsRecord>& records, double eta) {
  if (records.empty()) return 0.0;
  const double A0 = records.front().amplitude;
  double worst = -std::numeric_limits<double>::infinity();
  for (const auto& r : records) {
    const double env = A0 * std::exp(-eta * r.t);
    if (env == 0.0) {
      worst = std::max(worst, r.amplitude == 0.0 ? -1.0 : std::numeric_limits<double>::infinity());
      continue;
    }
    worst = std::max(worst, r.amplitude / env - 1.0);
  }
  return worst;
}

double terminal_deviation(const Field& u, const Field& u0) {
  const double target = l2_norm(u0) / std::sqrt(u0.grid().volume());
  double worst = 0.0;
  for (double v : u.values()) worst = std::max(worst, std::abs(v - target));
  return worst;
}

bool StabilityReport::all_hold() const noexcept {
  return std::all_of(stamps.begin(), stamps.end(), [](const auto& s) { return s.holds(); });
}

StabilityReport stability_check(const Trajectory& a, const Trajectory& b, const Nonlinearity& F1,
                                const Nonlinearity& F2) {
  if (a.snapshots.size() != b.snapshots.size()) {
    throw std::invalid_argument("stability_check: snapshot counts differ");
  }
  const Grid& grid = a.initial_state().grid();
  require_same_grid(grid, b.initial_state().grid(), "stability_check");
  const double dim = grid.dim();
  const double energy_term = std::abs(l2_norm(a.initial_state()) - l2_norm(b.initial_state())) /
                             std::sqrt(grid.volume());

  StabilityReport out{};
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t i = 0; i < a.snapshots.size(); ++i) {
    const auto& sa = a.snapshots[i];
    const auto& sb = b.snapshots[i];
    if (sa.t != sb.t) throw std::invalid_argument("stability_check: time stamps differ");
    const Field diff = sa.u - sb.u;
    StabilityStamp st{};
    st.t = sa.t;
    st.gap_l2 = l2_norm(diff);
    st.gap_linf = linf_norm(diff);
    st.bound_linf = 2.0 * std::sqrt(dim) * kPi *
                        (linf_norm(gradient_magnitude(sa.u)) + linf_norm(gradient_magnitude(sb.u))) +
                    energy_term;
    out.stamps.push_back(st);
    lo = std::min({lo, sa.u.min(), sb.u.min()});
    hi = std::max({hi, sa.u.max(), sb.u.max()});
  }

  constexpr int samples = 1024;
  for (int k = 0; k <= samples; ++k) {
    const double v = lo + (hi - lo) * k / samples;
    out.fprime_gap = std::max(out.fprime_gap, std::abs(F1.d1(v) - F2.d1(v)));
  }

  const double base = out.stamps.front().gap_l2 + out.fprime_gap;
  out.c0_fit = 0.0;
  for (const auto& st : out.stamps) {
    if (st.t <= 0.0 || st.gap_l2 <= base) continue;
    if (base <= 0.0) {
      out.c0_fit = std::numeric_limits<double>::infinity();
      break;
    }
    out.c0_fit = std::max(out.c0_fit, std::log(st.gap_l2 / base) / st.t);
  }
  return out;
}

}  // namespace gnb
