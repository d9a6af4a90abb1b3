#include "gnb/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "gnb/parallel.hpp"

namespace gnb {

double cds(int dim, double s) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("cds: dimension must be 1 or 2");
  if (!(s > 0.0 && s <= 1.0)) throw std::invalid_argument("cds: s must lie in (0, 1]");
  const double d = dim;
  return std::exp2(s) * std::tgamma(0.5 * (d + s)) /
         (std::pow(kPi, 0.5 * d) * std::abs(std::tgamma(-0.5 * s)));
}

namespace {

// int_0^{pi/4} cos^s(theta) d theta, composite Simpson.
double wedge_integral(double s) {
  constexpr int intervals = 512;
  const double h = 0.25 * kPi / intervals;
  double acc = 1.0 + std::pow(std::cos(0.25 * kPi), s);
  for (int i = 1; i < intervals; ++i) acc += (i % 2 ? 4.0 : 2.0) * std::pow(std::cos(i * h), s);
  return acc * h / 3.0;
}

// Integral estimate of sum_{|j|_inf > J} |z + 2 pi j|^{-d-s}: each lattice
// point stands for its cell of side 2 pi, so the dropped shells cover the
// complement of the square of half-side L = 2 pi (J + 1/2).
double dropped_shells_estimate(int dim, double s, int J, const Point& z) {
  const double L = kTwoPi * (J + 0.5);
  if (dim == 1) {
    return (std::pow(L + z[0], -s) + std::pow(L - z[0], -s)) / (kTwoPi * s);
  }
  // Leading order in |z|/L; the next term is O((|z|/L)^2) relative.
  return 8.0 / s * std::pow(L, -s) * wedge_integral(s) / (kTwoPi * kTwoPi);
}

// Bound for sum_{|j|_inf > J} |z + 2 pi j|^{-d-s} over z in (-pi, pi]^d:
// |z + 2 pi j| >= 2 pi m - a with m = |j|_inf, a = pi sqrt(d); the shell
// m has 2 (d = 1) or 8m (d = 2) points and the summand decreases in m.
double dropped_shells_bound(int dim, double s, int J) {
  const double a = kPi * std::sqrt(static_cast<double>(dim));
  const double t0 = kTwoPi * J - a;
  if (dim == 1) return std::pow(t0, -s) / (kPi * s);
  return 2.0 / (kPi * kPi) * (std::pow(t0, -s) / s + a * std::pow(t0, -1.0 - s) / (1.0 + s));
}

}  // namespace

KernelTable periodic_kernel(const Grid& grid, double s, int truncation) {
  if (s == 1.0) {
    throw std::invalid_argument(
        "periodic_kernel: s = 1 needs Hadamard's finite part instead of a principal value; "
        "use the spectral evaluator");
  }
  if (!(s > 0.0 && s < 1.0)) throw std::invalid_argument("periodic_kernel: s must lie in (0, 1)");
  if (truncation < 1) throw std::invalid_argument("periodic_kernel: truncation must be >= 1");

  const int dim = grid.dim();
  const double c = cds(dim, s);
  const double exponent = -0.5 * (dim + s);
  const int J = truncation;

  KernelTable table{grid,
                    s,
                    c,
                    truncation,
                    std::vector<double>(grid.size(), 0.0),
                    std::vector<double>(grid.size(), 0.0),
                    std::vector<double>(grid.size(), 0.0),
                    c * dropped_shells_bound(dim, s, J)};

  parallel_for(grid.size(), [&](std::size_t p) {
    if (p == KernelTable::singular_index) return;
    // The lattice sum is even in each component; folding to |z_i| makes
    // entries that differ by a reflection bitwise equal.
    Point z = grid.displacement(p);
    z[0] = std::abs(z[0]);
    z[1] = std::abs(z[1]);
    double acc = 0.0;
    if (dim == 1) {
      acc = std::pow(z[0] * z[0], exponent);
      for (int j = 1; j <= J; ++j) {
        const double a = z[0] + kTwoPi * j;
        const double b = z[0] - kTwoPi * j;
        acc += std::pow(a * a, exponent) + std::pow(b * b, exponent);
      }
    } else {
      auto term = [&](int j0, int j1) {
        const double r0 = z[0] + kTwoPi * j0;
        const double r1 = z[1] + kTwoPi * j1;
        return std::pow(r0 * r0 + r1 * r1, exponent);
      };
      acc = term(0, 0);
      for (int j0 = 0; j0 <= J; ++j0) {
        for (int j1 = (j0 == 0 ? 1 : -J); j1 <= J; ++j1) acc += term(j0, j1) + term(-j0, -j1);
      }
    }
    table.partial_sums[p] = c * acc;
    table.tail_correction[p] = c * dropped_shells_estimate(dim, s, J, z);
    table.values[p] = table.partial_sums[p] + table.tail_correction[p];
  });
  return table;
}

void write_kernel_csv(std::ostream& os, const KernelTable& table) {
  os << "z_index,displacement,value\n";
  const auto old = os.precision(17);
  for (std::size_t p = 0; p < table.values.size(); ++p) {
    const Point z = table.grid.displacement(p);
    const double disp = table.grid.dim() == 1 ? z[0] : std::hypot(z[0], z[1]);
    os << p << ',' << disp << ',' << table.values[p] << '\n';
  }
  os.precision(old);
}

double poisson_kernel_1d(double y, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("poisson_kernel_1d: delta must be positive");
  return cds(1, 1.0) / (delta * delta + y * y);
}

double active_kernel_m(double a, double b, const Nonlinearity& F, double c_ds, int nq) {
  if (!(a > 0.0) || !(b > 0.0)) {
    std::ostringstream os;
    os << "active_kernel_m needs positive values, got (" << a << ", " << b << ")";
    throw std::invalid_argument(os.str());
  }
  if (nq < 2) throw std::invalid_argument("active_kernel_m needs nq >= 2");
  // Ordered arguments make the result bitwise symmetric.
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  double acc = 0.0;
  for (int q = 0; q < nq; ++q) {
    const double lambda = (q + 0.5) / nq;
    acc += F.d1((1.0 - lambda) * lo + lambda * hi);
  }
  const double harmonic = 2.0 * lo * hi / (lo + hi);
  return c_ds * harmonic * (acc / nq);
}

double active_kernel_m(double a, double b, const Nonlinearity& F, int dim, double s, int nq) {
  return active_kernel_m(a, b, F, cds(dim, s), nq);
}

double ellipticity_lambda(double umin0, double umax0, const Nonlinearity& F, int dim, double s) {
  if (!(umin0 > 0.0) || !(umax0 >= umin0)) {
    throw std::invalid_argument("ellipticity_lambda needs 0 < umin0 <= umax0");
  }
  const FPrimeBounds b = fprime_bounds(F, umin0, umax0);
  const double c = cds(dim, s);
  return std::max(c * umax0 * b.max, 1.0 / (c * umin0 * b.min));
}

}  // namespace gnb
