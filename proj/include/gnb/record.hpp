#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "gnb/field.hpp"
#include "gnb/kernel.hpp"
#include "gnb/nonlinearity.hpp"
#include "gnb/spectral.hpp"

namespace gnb {

/// One time slice of every tracked functional.
struct DiagnosticsRecord {
  double t = 0.0;
  double energy = 0.0;      ///< ||u||_{L^2}
  double momentum = 0.0;    ///< int u
  double umin = 0.0;
  double umax = 0.0;
  double amplitude = 0.0;   ///< umax - umin
  double grad_inf = 0.0;    ///< ||grad u||_{L^inf}
  double besov_1_inf_inf = 0.0;
  double hs2_sq = 0.0;      ///< ||u||^2 in the homogeneous H^{s/2} seminorm
  double flux = 0.0;        ///< int F(u) |grad|^s u
  double lp3_cumulative = 0.0;  ///< int_0^t of the p = 3 dissipation rate
  double bkm_accum = 0.0;   ///< int_0^t ||grad u||_{L^inf}
  // Not part of the CSV schema.
  double lp3_rate = 0.0;    ///< instantaneous p = 3 dissipation rate
  double l3_cubed = 0.0;    ///< ||u||_{L^3}^3
};

/// CSV column names, in order.
inline constexpr std::array<std::string_view, 12> kDiagnosticsColumns = {
    "t",         "energy",          "momentum", "umin",  "umax",           "amplitude",
    "grad_inf",  "besov_1_inf_inf", "hs2_sq",   "flux",  "lp3_cumulative", "bkm_accum"};

/// Value of the named CSV column.
double column_value(const DiagnosticsRecord& r, std::string_view column);

/// Dissipation rate of the conserved L^p functional,
///   (p/2) h^{2d} sum_{i != j} (|u_i|^{p-2} - |u_j|^{p-2}) (F(u_i) - F(u_j))
///         u_i u_j K(x_i - x_j),
/// so that ||u(t)||_p^p + int_0^t rate is constant in time. p > 2.
double lp_functional_increment(const Field& u, double p, const Nonlinearity& F,
                               const KernelTable& K);

/// Computes DiagnosticsRecords on one grid. Cumulative fields advance from
/// the previous record by the trapezoid rule.
///
/// For s < 1 the p = 3 rate uses the lattice double sum (O(N^2)); at s = 1
/// no kernel exists and the rate is evaluated spectrally as -3 int |u| u du/dt.
class Recorder {
 public:
  Recorder(const Grid& grid, double s, Nonlinearity F, bool track_lp3 = true,
           int kernel_truncation = kDefaultTruncation);

  DiagnosticsRecord record(const Field& u, double t,
                           const DiagnosticsRecord* prev = nullptr) const;

  const std::optional<KernelTable>& kernel() const noexcept { return kernel_; }

 private:
  double lp3_rate(const Field& u, const Field& frac_u) const;

  Grid grid_;
  double s_;
  Nonlinearity F_;
  bool track_lp3_;
  FourierMultiplier fractional_;
  std::optional<KernelTable> kernel_;
};

/// Convenience form building a Recorder for a single call.
DiagnosticsRecord record(const Field& u, double t, double s, const Nonlinearity& F,
                         const DiagnosticsRecord* prev = nullptr);

}  // namespace gnb
