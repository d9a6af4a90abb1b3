#pragma once

#include <cstddef>
#include <ostream>
#include <utility>
#include <vector>

#include "gnb/dynamics.hpp"
#include "gnb/field.hpp"
#include "gnb/nonlinearity.hpp"
#include "gnb/record.hpp"

namespace gnb {

/// Trapezoid rule over (t, y) samples.
double trapezoid(const std::vector<double>& t, const std::vector<double>& y);

/// Composite Simpson rule on a non-uniform grid; an odd final interval is
/// closed with the quadratic through the last three samples.
double integrate_series(const std::vector<double>& t, const std::vector<double>& y);

/// Column of a record series as a vector.
std::vector<double> column(const std::vector<DiagnosticsRecord>& records, std::string_view name);

void write_diagnostics_csv(std::ostream& os, const std::vector<DiagnosticsRecord>& records);

struct Hs2Budget {
  double lhs;              ///< int ||u||^2_{H^{s/2}} dt, trapezoid over records
  double lhs_kernel_form;  ///< int int int (u(x) - u(y))^2 |x - y|^{-d-s}, i.e. (2/c) lhs
  double bound;            ///< (2/3) ||u0||_3^3 / M_min
  double m_min;            ///< c_{d,s} umin0^2 min F'
  bool pass() const noexcept { return lhs_kernel_form <= bound; }
};

/// Positive trajectories only; throws HypothesisViolation otherwise.
Hs2Budget hs2_budget_check(const Trajectory& traj, const Field& u0, const Nonlinearity& F);

/// umin0 * min F' * int_{|y| >= 1 + 2 sqrt(d) pi} c_{d,s} (|y| + 2 sqrt(d) pi)^{-d-s} dy,
/// in closed form.
double eta_lower_bound(double umin0, double umax0, const Nonlinearity& F, int dim, double s);

struct DecayFit {
  double rate;  ///< minus the slope of log(value) against t
  double r2;
  std::size_t samples;
};

/// Least squares on log(value) over samples with t_lo <= t <= t_hi. Needs at
/// least 8 samples, all positive. A constant series gives rate 0 and r2 = 1.
DecayFit fit_decay_rate(const std::vector<double>& t, const std::vector<double>& value,
                        double t_lo, double t_hi);

/// From the first time value <= value(0)/2 to the last time before
/// value < 1e-8 value(0) (or the end of the series).
std::pair<double, double> default_decay_window(const std::vector<double>& t,
                                               const std::vector<double>& value);

/// Start of the final monotone decrease of the series before it falls
/// below `floor_ratio` times its peak: the time from which every later
/// sample in the window is smaller than its predecessor.
double detect_decay_onset(const std::vector<double>& t, const std::vector<double>& value,
                          double floor_ratio = 1e-8);

/// max_t A(t) / (A(0) e^{-eta t}) - 1 over the records; <= 0 means the
/// envelope holds.
double envelope_excess(const std::vector<DiagnosticsRecord>& records, double eta);

/// ||u - ||u0||_{L^2} / sqrt(|T^d|)||_{L^inf}.
double terminal_deviation(const Field& u, const Field& u0);

struct StabilityStamp {
  double t;
  double gap_l2;
  double gap_linf;
  double bound_linf;  ///< 2 sqrt(d) pi (|grad u1| + |grad u2|) + | ||u1_0|| - ||u2_0|| | / sqrt|T^d|
  bool holds() const noexcept { return gap_linf <= bound_linf; }
};

struct StabilityReport {
  std::vector<StabilityStamp> stamps;
  double fprime_gap;  ///< sampled sup |F1' - F2'| over the union state range
  double c0_fit;      ///< smallest C0 with gap_l2 <= (gap_l2(0) + fprime_gap) e^{C0 t}
  bool all_hold() const noexcept;
};

/// Compares snapshot series stamp by stamp; throws on mismatched grids or stamps.
StabilityReport stability_check(const Trajectory& a, const Trajectory& b, const Nonlinearity& F1,
                                const Nonlinearity& F2);

}  // namespace gnb
