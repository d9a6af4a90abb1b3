#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace gnb {

/// Raised when F' fails to be positive on an interval where the theory
/// requires it.
class HypothesisViolation : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

enum class NonlinearityKind { power_int, power_real, exp_minus_one, u_minus_sin, identity };

/// The function F of the commutator [F(u), |grad|^s] u together with F' and
/// F''. Every kind satisfies F(0) = 0; exp is stored as e^u - 1.
///
/// A reflected nonlinearity evaluates -F(-u) (see odd_reflection()).
class Nonlinearity {
 public:
  /// power_int needs an integer param >= 1, power_real needs param > 0; the
  /// other kinds ignore param. Throws std::invalid_argument otherwise.
  Nonlinearity(NonlinearityKind kind, double param = 0.0);

  NonlinearityKind kind() const noexcept { return kind_; }
  double param() const noexcept { return param_; }
  bool reflected() const noexcept { return reflected_; }
  /// True when -F(-u) == F(u) identically.
  bool is_odd() const noexcept;
  /// Config spelling of the kind, e.g. "power_int".
  std::string kind_name() const;
  /// Human-readable formula, e.g. "u^2".
  std::string describe() const;

  double value(double u) const;
  double d1(double u) const;
  double d2(double u) const;

  Nonlinearity reflect() const;

  friend bool operator==(const Nonlinearity&, const Nonlinearity&) = default;

 private:
  double raw_value(double u) const;
  double raw_d1(double u) const;
  double raw_d2(double u) const;

  NonlinearityKind kind_;
  double param_;
  bool reflected_ = false;
};

Nonlinearity make_nonlinearity(NonlinearityKind kind, double param = 0.0);
/// kind in {power_int, power_real, exp_minus_one, u_minus_sin, identity}.
Nonlinearity make_nonlinearity(std::string_view kind, double param = 0.0);
NonlinearityKind parse_nonlinearity_kind(std::string_view kind);

struct FPrimeBounds {
  double min;
  double max;
};

/// Extremes of F' over `samples` uniformly spaced points of [lo, hi]
/// including both ends. Throws HypothesisViolation when min F' <= 0.
FPrimeBounds fprime_bounds(const Nonlinearity& F, double lo, double hi, int samples = 1024);

/// F~(u) = -F(-u). Odd kinds are returned unchanged.
Nonlinearity odd_reflection(const Nonlinearity& F);

}  // namespace gnb
