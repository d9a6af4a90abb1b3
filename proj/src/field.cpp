#include "gnb/field.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gnb {

void require_same_grid(const Grid& a, const Grid& b, const char* context) {
  if (!(a == b)) {
    throw std::invalid_argument(std::string(context) + ": grid mismatch");
  }
}

Field::Field(Grid grid, double fill) : grid_(grid), values_(grid.size(), fill) {}

Field::Field(Grid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw std::invalid_argument("field length " + std::to_string(values_.size()) +
                                " does not match grid size " + std::to_string(grid_.size()));
  }
}

Field Field::from_function(const Grid& grid, const std::function<double(const Point&)>& f) {
  Field out(grid);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(grid.point(i));
  return out;
}

double Field::min() const { return *std::min_element(values_.begin(), values_.end()); }
double Field::max() const { return *std::max_element(values_.begin(), values_.end()); }

double Field::mean() const {
  double acc = 0.0;
  for (double v : values_) acc += v;
  return acc / static_cast<double>(values_.size());
}

std::size_t Field::argmax() const {
  return static_cast<std::size_t>(std::max_element(values_.begin(), values_.end()) -
                                  values_.begin());
}

std::size_t Field::argmin() const {
  return static_cast<std::size_t>(std::min_element(values_.begin(), values_.end()) -
                                  values_.begin());
}

bool Field::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

bool Field::is_admissible() const noexcept {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v) && v > 0.0; });
}

Field& Field::operator+=(const Field& other) {
  require_same_grid(grid_, other.grid_, "Field::operator+=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  require_same_grid(grid_, other.grid_, "Field::operator-=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

Field& Field::operator*=(double a) noexcept {
  for (double& v : values_) v *= a;
  return *this;
}

Field& Field::axpy(double a, const Field& x) {
  require_same_grid(grid_, x.grid_, "Field::axpy");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += a * x.values_[i];
  return *this;
}

Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }
Field operator*(double a, Field f) { return f *= a; }

Field hadamard(const Field& a, const Field& b) {
  require_same_grid(a.grid(), b.grid(), "hadamard");
  Field out(a.grid());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

Field map(const Field& f, const std::function<double(double)>& op) {
  Field out(f.grid());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = op(f[i]);
  return out;
}

double inner(const Field& f, const Field& g) {
  require_same_grid(f.grid(), g.grid(), "inner");
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += f[i] * g[i];
  return acc * f.grid().cell_volume();
}

double integral(const Field& f) {
  double acc = 0.0;
  for (double v : f.values()) acc += v;
  return acc * f.grid().cell_volume();
}

double l2_norm(const Field& f) { return std::sqrt(inner(f, f)); }

double linf_norm(const Field& f) {
  double m = 0.0;
  for (double v : f.values()) m = std::max(m, std::abs(v));
  return m;
}

double lp_norm_pow(const Field& f, double p) {
  double acc = 0.0;
  for (double v : f.values()) acc += std::pow(std::abs(v), p);
  return acc * f.grid().cell_volume();
}

SpectralField::SpectralField(Grid g, std::vector<std::complex<double>> c)
    : grid(g), coeffs(std::move(c)) {
  if (coeffs.size() != grid.size()) {
    throw std::invalid_argument("spectral field length does not match grid size");
  }
}

SpectralField::SpectralField(Grid g) : grid(g), coeffs(g.size()) {}

}  // namespace gnb
