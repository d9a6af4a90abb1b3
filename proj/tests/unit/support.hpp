#pragma once

#include <cmath>
#include <random>

#include "gnb/field.hpp"
#include "gnb/grid.hpp"

namespace test {

inline gnb::Field random_field(const gnb::Grid& g, std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  gnb::Field f(g);
  for (double& v : f.values()) v = dist(rng);
  return f;
}

inline gnb::Field cos_field(const gnb::Grid& g, double base, double amp, int k0, int k1 = 0) {
  return gnb::Field::from_function(
      g, [=](const gnb::Point& x) { return base + amp * std::cos(k0 * x[0] + k1 * x[1]); });
}

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace test
