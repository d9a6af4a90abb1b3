#pragma once

#include <cstddef>
#include <iosfwd>
#include <vector>

#include "gnb/grid.hpp"
#include "gnb/nonlinearity.hpp"

namespace gnb {

/// Normalization c_{d,s} = 2^s Gamma((d+s)/2) / (pi^{d/2} |Gamma(-s/2)|) for
/// which p.v. int (f(x) - f(y)) c_{d,s} |x-y|^{-d-s} dy has symbol |xi|^s.
/// Accepts s in (0, 1]; at s = 1 the value is the Poisson-kernel constant
/// (1/pi for d = 1). The real-space operators reject s = 1 separately.
double cds(int dim, double s);

/// Periodized kernel K_per(z) = sum_j c |z + 2 pi j|^{-d-s} tabulated on the
/// grid's displacement lattice (flat index from Grid::displacement_index).
///
/// The sum runs over |j|_inf <= truncation. The dropped shells are close to
/// constant over the torus, and that constant shifts every nonzero symbol
/// value, so `values` adds an integral estimate of the dropped shells
/// (`tail_correction`). `partial_sums` keeps the raw truncated sums.
/// Entry 0 (z = 0) is singular and set to 0 in all three arrays.
struct KernelTable {
  Grid grid;
  double s;
  double c_ds;
  int truncation;
  std::vector<double> partial_sums;
  std::vector<double> tail_correction;
  std::vector<double> values;
  /// Upper bound on the dropped sum_{|j|_inf > J} c |z + 2 pi j|^{-d-s},
  /// uniform over z in (-pi, pi]^d.
  double tail_bound;

  static constexpr std::size_t singular_index = 0;

  double operator[](std::size_t displacement) const noexcept { return values[displacement]; }
  double at(std::size_t i, std::size_t j) const noexcept {
    return values[grid.displacement_index(i, j)];
  }
};

/// Default lattice truncation radius.
inline constexpr int kDefaultTruncation = 20;

/// s in (0, 1), J >= 1. s = 1 is rejected: the real-space integrand would need
/// Hadamard's finite part, which only the spectral evaluator covers.
KernelTable periodic_kernel(const Grid& grid, double s, int truncation = kDefaultTruncation);

/// CSV rows "z_index, displacement, value"; displacement is the signed
/// offset in d == 1 and |z| in d == 2.
void write_kernel_csv(std::ostream& os, const KernelTable& table);

/// c_{1,1} / (delta^2 + y^2), the s = 1 regularized kernel in d = 1, whose
/// transform is exp(-delta |xi|) / delta.
double poisson_kernel_1d(double y, double delta);

/// Default number of midpoint nodes for the lambda-integral.
inline constexpr int kDefaultLambdaNodes = 16;

/// c_ds * (2ab/(a+b)) * mean_q F'((1 - l_q) a + l_q b) with midpoint nodes
/// l_q = (q + 1/2)/nq. Symmetric in (a, b) to the last bit. a, b > 0.
double active_kernel_m(double a, double b, const Nonlinearity& F, double c_ds,
                       int nq = kDefaultLambdaNodes);
/// Same with c_ds = cds(dim, s).
double active_kernel_m(double a, double b, const Nonlinearity& F, int dim, double s,
                       int nq = kDefaultLambdaNodes);

/// Ellipticity constant
///   Lambda = max{ c umax max F', 1 / (c umin min F') },  c = c_{d,s},
/// with F' sampled on [umin, umax]. Every active_kernel_m(a, b) with a, b in
/// [umin, umax] then lies in [1/Lambda, Lambda]. Throws HypothesisViolation
/// when min F' <= 0.
double ellipticity_lambda(double umin0, double umax0, const Nonlinearity& F, int dim, double s);

}  // namespace gnb
