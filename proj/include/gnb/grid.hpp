#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace gnb {

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTwoPi = 2.0 * kPi;

/// A point of [0, 2pi)^d. The second coordinate is 0 when d == 1.
using Point = std::array<double, 2>;
/// An integer wavevector. The second component is 0 when d == 1.
using Wavevector = std::array<int, 2>;

/// Uniform periodic lattice on the torus [0, 2pi)^d with d in {1, 2}.
///
/// Samples are stored row-major: flat index i0 for d == 1 and i0 * n + i1 for
/// d == 2, with x = (i0 h, i1 h). Spectral coefficients share the same flat
/// layout; along each axis index i carries wavenumber i for i < n/2 and i - n
/// otherwise, so the Nyquist wavenumber -n/2 appears exactly once per axis.
///
/// The spacing h = 2pi/n is always derived from n and never stored.
class Grid {
 public:
  /// Throws std::invalid_argument unless d is 1 or 2 and n is a power of two
  /// in [8, 4096].
  Grid(int dim, int n);

  int dim() const noexcept { return dim_; }
  int n() const noexcept { return n_; }
  double spacing() const noexcept { return kTwoPi / n_; }
  /// |T^d| = (2pi)^d.
  double volume() const noexcept { return dim_ == 1 ? kTwoPi : kTwoPi * kTwoPi; }
  /// h^d, the weight of one sample in the discrete inner product.
  double cell_volume() const noexcept {
    const double h = spacing();
    return dim_ == 1 ? h : h * h;
  }
  std::size_t size() const noexcept {
    return dim_ == 1 ? static_cast<std::size_t>(n_)
                     : static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_);
  }

  std::vector<Point> sample_points() const;
  std::vector<Wavevector> wavenumbers() const;

  /// Wavenumber carried by FFT index `index` along one axis.
  int wavenumber(int index) const noexcept { return index < n_ / 2 ? index : index - n_; }

  Point point(std::size_t flat) const noexcept;
  Wavevector wavevector(std::size_t flat) const noexcept;
  /// k . k for the wavevector stored at `flat`.
  long wavenumber_norm2(std::size_t flat) const noexcept;

  /// Flat index of the mode -k (Nyquist maps to itself).
  std::size_t negated(std::size_t flat) const noexcept;

  /// Flat index of the displacement x_i - x_j on the lattice of differences.
  std::size_t displacement_index(std::size_t i, std::size_t j) const noexcept;
  /// Representative of displacement `flat` in (-pi, pi]^d.
  Point displacement(std::size_t flat) const noexcept;

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  int dim_;
  int n_;
};

/// Validating factory; see Grid::Grid.
Grid make_grid(int dim, int n);

}  // namespace gnb
