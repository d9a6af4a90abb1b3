#include "gnb/grid.hpp"

#include <stdexcept>
#include <string>

namespace gnb {

namespace {

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

Grid::Grid(int dim, int n) : dim_(dim), n_(n) {
  if (dim != 1 && dim != 2) {
    throw std::invalid_argument("grid dimension must be 1 or 2, got " + std::to_string(dim));
  }
  if (!is_power_of_two(n)) {
    throw std::invalid_argument("grid size must be a power of two (FFT layout), got " +
                                std::to_string(n));
  }
  if (n < 8 || n > 4096) {
    throw std::invalid_argument("grid size must lie in [8, 4096], got " + std::to_string(n));
  }
}

Grid make_grid(int dim, int n) { return Grid(dim, n); }

Point Grid::point(std::size_t flat) const noexcept {
  const double h = spacing();
  if (dim_ == 1) return {static_cast<double>(flat) * h, 0.0};
  const auto nn = static_cast<std::size_t>(n_);
  return {static_cast<double>(flat / nn) * h, static_cast<double>(flat % nn) * h};
}

Wavevector Grid::wavevector(std::size_t flat) const noexcept {
  if (dim_ == 1) return {wavenumber(static_cast<int>(flat)), 0};
  const auto nn = static_cast<std::size_t>(n_);
  return {wavenumber(static_cast<int>(flat / nn)), wavenumber(static_cast<int>(flat % nn))};
}

long Grid::wavenumber_norm2(std::size_t flat) const noexcept {
  const auto k = wavevector(flat);
  return static_cast<long>(k[0]) * k[0] + static_cast<long>(k[1]) * k[1];
}

std::size_t Grid::negated(std::size_t flat) const noexcept {
  const auto nn = static_cast<std::size_t>(n_);
  auto neg = [nn](std::size_t i) { return (nn - i) % nn; };
  if (dim_ == 1) return neg(flat);
  return neg(flat / nn) * nn + neg(flat % nn);
}

std::size_t Grid::displacement_index(std::size_t i, std::size_t j) const noexcept {
  const auto nn = static_cast<std::size_t>(n_);
  auto diff = [nn](std::size_t a, std::size_t b) { return (a + nn - b) % nn; };
  if (dim_ == 1) return diff(i, j);
  return diff(i / nn, j / nn) * nn + diff(i % nn, j % nn);
}

Point Grid::displacement(std::size_t flat) const noexcept {
  const double h = spacing();
  const auto nn = static_cast<std::size_t>(n_);
  auto centred = [this, h](std::size_t q) {
    const int qi = static_cast<int>(q);
    return (qi <= n_ / 2 ? qi : qi - n_) * h;
  };
  if (dim_ == 1) return {centred(flat), 0.0};
  return {centred(flat / nn), centred(flat % nn)};
}

std::vector<Point> Grid::sample_points() const {
  std::vector<Point> pts(size());
  for (std::size_t i = 0; i < pts.size(); ++i) pts[i] = point(i);
  return pts;
}

std::vector<Wavevector> Grid::wavenumbers() const {
  std::vector<Wavevector> ks(size());
  for (std::size_t i = 0; i < ks.size(); ++i) ks[i] = wavevector(i);
  return ks;
}

}  // namespace gnb
