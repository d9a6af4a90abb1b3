#pragma once

#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "gnb/field.hpp"

namespace gnb {

/// Raised by inverse() when the coefficients are not Hermitian symmetric,
/// i.e. do not describe real data.
class CorruptSpectrum : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Relative tolerance for the Hermitian symmetry check in inverse().
inline constexpr double kHermitianTolerance = 1e-12;

/// coeffs(k) = n^{-d} sum_j f(x_j) exp(-i k.x_j).
SpectralField forward(const Field& f);

/// Real field with the given Fourier-series coefficients. Throws
/// CorruptSpectrum when max|c(-k) - conj c(k)| exceeds kHermitianTolerance
/// times max|c|.
Field inverse(const SpectralField& F);

/// max_k |c(-k) - conj c(k)| / max(max_k |c(k)|, tiny).
double hermitian_defect(const SpectralField& F);

/// coeffs'(k) = m(k) coeffs(k). The multiplier must be even, m(-k) == m(k),
/// and finite on every grid wavevector; std::invalid_argument otherwise.
SpectralField apply_multiplier(const SpectralField& F,
                               const std::function<double(const Wavevector&)>& m);

/// A real even Fourier multiplier tabulated once on a grid.
class FourierMultiplier {
 public:
  /// `symbol` is indexed by flat coefficient index; validated for evenness.
  FourierMultiplier(Grid grid, std::vector<double> symbol);

  /// |k|^s with value 0 at k = 0.
  static FourierMultiplier fractional(const Grid& grid, double s);
  /// (1 - exp(-delta |k|^s)) / delta.
  static FourierMultiplier regularized(const Grid& grid, double s, double delta);
  /// Indicator of |k_axis| <= n/3 on every axis (2/3-rule truncation).
  static FourierMultiplier two_thirds(const Grid& grid);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const double> symbol() const noexcept { return symbol_; }
  double max_symbol() const noexcept { return max_symbol_; }

  Field apply(const Field& f) const;
  SpectralField apply(const SpectralField& F) const;

 private:
  Grid grid_;
  std::vector<double> symbol_;
  double max_symbol_ = 0.0;
};

/// |grad|^s f for s in (0, 1].
Field frac_laplacian(const Field& f, double s);

/// The regularized operator with symbol (1 - exp(-delta |k|^s)) / delta,
/// s in (0, 1], delta > 0.
Field frac_laplacian_delta(const Field& f, double s, double delta);

/// d f / d x_axis (axis 0-based) with the Nyquist coefficient removed.
Field derivative(const Field& f, int axis);

/// Pointwise Euclidean norm of the spectral gradient.
Field gradient_magnitude(const Field& f);

enum class BesovSum { one, infinity };

/// Dyadic shell index of a nonzero wavevector: j = 0 for |k| <= 1, otherwise
/// the j with 2^{j-1} < |k| <= 2^j.
int dyadic_shell(long norm2);

/// Number of shells needed to cover every nonzero wavevector of the grid:
/// log2(n/2) + 1 for d == 1; one more in d == 2 for the corners.
int shell_count(const Grid& grid);

/// Shell projection Delta_j f (sharp annulus).
Field shell_projection(const Field& f, int j);

/// l^q over j of 2^{jr} max|Delta_j f|, the discrete L^inf-based Besov
/// seminorm with sharp dyadic shells.
double besov_seminorm(const Field& f, double r, BesovSum q);

/// sqrt((2pi)^d sum_{k != 0} |k|^{2 sigma} |coeffs(k)|^2).
double sobolev_seminorm(const Field& f, double sigma);

}  // namespace gnb
