#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "gnb/grid.hpp"

namespace gnb {

/// Real samples of a function on a Grid, row-major.
///
/// Finiteness is not enforced on construction: the integrators detect
/// non-finite states themselves (see all_finite()).
class Field {
 public:
  explicit Field(Grid grid, double fill = 0.0);
  Field(Grid grid, std::vector<double> values);

  static Field from_function(const Grid& grid, const std::function<double(const Point&)>& f);

  const Grid& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }
  double operator[](std::size_t i) const noexcept { return values_[i]; }
  double& operator[](std::size_t i) noexcept { return values_[i]; }

  double min() const;
  double max() const;
  double mean() const;
  std::size_t argmax() const;
  std::size_t argmin() const;
  bool all_finite() const noexcept;
  /// Finite and strictly positive.
  bool is_admissible() const noexcept;

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double a) noexcept;
  /// this += a * x
  Field& axpy(double a, const Field& x);

 private:
  Grid grid_;
  std::vector<double> values_;
};

Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);
Field operator*(double a, Field f);
Field hadamard(const Field& a, const Field& b);
/// Pointwise map.
Field map(const Field& f, const std::function<double(double)>& op);

/// <f, g> = h^d sum f g.
double inner(const Field& f, const Field& g);
/// h^d sum f.
double integral(const Field& f);
double l2_norm(const Field& f);
double linf_norm(const Field& f);
/// h^d sum |f|^p.
double lp_norm_pow(const Field& f, double p);

/// Fourier-series coefficients of a real field in the Grid's flat layout.
struct SpectralField {
  Grid grid;
  std::vector<std::complex<double>> coeffs;

  SpectralField(Grid g, std::vector<std::complex<double>> c);
  explicit SpectralField(Grid g);
};

void require_same_grid(const Grid& a, const Grid& b, const char* context);

}  // namespace gnb
