#include "gnb/nonlinearity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace gnb {

namespace {

bool is_integer(double x) { return std::isfinite(x) && std::floor(x) == x; }

void require_positive_argument(double u, const char* what) {
  if (!(u > 0.0)) {
    std::ostringstream os;
    os << "u^alpha " << what << " needs u > 0, got " << u;
    throw std::domain_error(os.str());
  }
}

}  // namespace

Nonlinearity::Nonlinearity(NonlinearityKind kind, double param) : kind_(kind), param_(param) {
  switch (kind_) {
    case NonlinearityKind::power_int:
      if (!is_integer(param_) || param_ < 1.0) {
        throw std::invalid_argument(
            "power_int needs an integer exponent >= 1 (F' == 0 gives a trivial evolution)");
      }
      break;
    case NonlinearityKind::power_real:
      if (!(param_ > 0.0) || !std::isfinite(param_)) {
        throw std::invalid_argument("power_real needs an exponent alpha > 0");
      }
      break;
    default:
      param_ = 0.0;
      break;
  }
}

bool Nonlinearity::is_odd() const noexcept {
  switch (kind_) {
    case NonlinearityKind::identity:
    case NonlinearityKind::u_minus_sin:
      return true;
    case NonlinearityKind::power_int:
      return static_cast<long>(param_) % 2 == 1;
    default:
      return false;
  }
}

std::string Nonlinearity::kind_name() const {
  switch (kind_) {
    case NonlinearityKind::power_int: return "power_int";
    case NonlinearityKind::power_real: return "power_real";
    case NonlinearityKind::exp_minus_one: return "exp_minus_one";
    case NonlinearityKind::u_minus_sin: return "u_minus_sin";
    case NonlinearityKind::identity: return "identity";
  }
  return "unknown";
}

std::string Nonlinearity::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case NonlinearityKind::power_int:
    case NonlinearityKind::power_real: os << "u^" << param_; break;
    case NonlinearityKind::exp_minus_one: os << "exp(u)-1"; break;
    case NonlinearityKind::u_minus_sin: os << "u-sin(u)"; break;
    case NonlinearityKind::identity: os << "u"; break;
  }
  return reflected_ ? "-F(-u) with F=" + os.str() : os.str();
}

double Nonlinearity::raw_value(double u) const {
  switch (kind_) {
    case NonlinearityKind::power_int: return std::pow(u, param_);
    case NonlinearityKind::power_real:
      if (u == 0.0) return 0.0;
      require_positive_argument(u, "F");
      return std::pow(u, param_);
    case NonlinearityKind::exp_minus_one: return std::expm1(u);
    case NonlinearityKind::u_minus_sin: return u - std::sin(u);
    case NonlinearityKind::identity: return u;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double Nonlinearity::raw_d1(double u) const {
  switch (kind_) {
    case NonlinearityKind::power_int: return param_ * std::pow(u, param_ - 1.0);
    case NonlinearityKind::power_real:
      require_positive_argument(u, "F'");
      return param_ * std::pow(u, param_ - 1.0);
    case NonlinearityKind::exp_minus_one: return std::exp(u);
    case NonlinearityKind::u_minus_sin: return 1.0 - std::cos(u);
    case NonlinearityKind::identity: return 1.0;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

double Nonlinearity::raw_d2(double u) const {
  switch (kind_) {
    case NonlinearityKind::power_int:
      return param_ == 1.0 ? 0.0 : param_ * (param_ - 1.0) * std::pow(u, param_ - 2.0);
    case NonlinearityKind::power_real:
      require_positive_argument(u, "F''");
      return param_ * (param_ - 1.0) * std::pow(u, param_ - 2.0);
    case NonlinearityKind::exp_minus_one: return std::exp(u);
    case NonlinearityKind::u_minus_sin: return std::sin(u);
    case NonlinearityKind::identity: return 0.0;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

// With G(u) = -F(-u): G' = F'(-u), G'' = -F''(-u).
double Nonlinearity::value(double u) const { return reflected_ ? -raw_value(-u) : raw_value(u); }
double Nonlinearity::d1(double u) const { return reflected_ ? raw_d1(-u) : raw_d1(u); }
double Nonlinearity::d2(double u) const { return reflected_ ? -raw_d2(-u) : raw_d2(u); }

Nonlinearity Nonlinearity::reflect() const {
  if (is_odd()) return *this;
  Nonlinearity out = *this;
  out.reflected_ = !reflected_;
  return out;
}

Nonlinearity make_nonlinearity(NonlinearityKind kind, double param) { return {kind, param}; }

NonlinearityKind parse_nonlinearity_kind(std::string_view kind) {
  if (kind == "power_int") return NonlinearityKind::power_int;
  if (kind == "power_real") return NonlinearityKind::power_real;
  if (kind == "exp_minus_one") return NonlinearityKind::exp_minus_one;
  if (kind == "u_minus_sin") return NonlinearityKind::u_minus_sin;
  if (kind == "identity") return NonlinearityKind::identity;
  throw std::invalid_argument("unknown nonlinearity kind '" + std::string(kind) + "'");
}

Nonlinearity make_nonlinearity(std::string_view kind, double param) {
  return {parse_nonlinearity_kind(kind), param};
}

FPrimeBounds fprime_bounds(const Nonlinearity& F, double lo, double hi, int samples) {
  if (!(lo > 0.0) || !(hi >= lo)) {
    throw std::invalid_argument("fprime_bounds needs 0 < lo <= hi");
  }
  if (samples < 64) throw std::invalid_argument("fprime_bounds needs at least 64 samples");
  FPrimeBounds b{std::numeric_limits<double>::infinity(),
                 -std::numeric_limits<double>::infinity()};
  for (int i = 0; i < samples; ++i) {
    const double u = i == samples - 1 ? hi : lo + (hi - lo) * i / (samples - 1);
    const double v = F.d1(u);
    b.min = std::min(b.min, v);
    b.max = std::max(b.max, v);
  }
  if (!(b.min > 0.0)) {
    std::ostringstream os;
    os << "F' = " << F.describe() << "' has min " << b.min << " <= 0 on [" << lo << ", " << hi
       << "]";
    throw HypothesisViolation(os.str());
  }
  return b;
}

Nonlinearity odd_reflection(const Nonlinearity& F) { return F.reflect(); }

}  // namespace gnb
