#include <doctest.h>

#include <cmath>
#include <vector>

#include "gnb/grid.hpp"
#include "gnb/nonlinearity.hpp"

using namespace gnb;

namespace {

std::vector<Nonlinearity> all_kinds() {
  return {make_nonlinearity(NonlinearityKind::identity),
          make_nonlinearity(NonlinearityKind::power_int, 2.0),
          make_nonlinearity(NonlinearityKind::power_int, 3.0),
          make_nonlinearity(NonlinearityKind::power_real, 1.5),
          make_nonlinearity(NonlinearityKind::exp_minus_one),
          make_nonlinearity(NonlinearityKind::u_minus_sin)};
}

}  // namespace

TEST_CASE("nonlinearity values") {
  const auto sq = make_nonlinearity("power_int", 2.0);
  CHECK(sq.value(3.0) == 9.0);
  CHECK(sq.d1(3.0) == 6.0);
  CHECK(sq.d2(3.0) == 2.0);
  const auto ex = make_nonlinearity("exp_minus_one");
  CHECK(ex.value(1.0) == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-15));
  CHECK(ex.value(1e-20) == 1e-20);
  const auto ums = make_nonlinearity("u_minus_sin");
  CHECK(ums.value(kPi) == doctest::Approx(kPi));
  CHECK(ums.d1(kPi) == doctest::Approx(2.0));
  const auto pr = make_nonlinearity("power_real", 0.5);
  CHECK(pr.value(4.0) == doctest::Approx(2.0));
  CHECK(pr.d1(4.0) == doctest::Approx(0.25));
  CHECK(make_nonlinearity("identity").d1(-7.0) == 1.0);
}

TEST_CASE("every kind vanishes at zero") {
  for (const auto& F : all_kinds()) {
    CHECK(F.value(0.0) == 0.0);
    CHECK(F.reflect().value(0.0) == 0.0);
  }
}

TEST_CASE("derivatives agree with central differences") {
  const double h = 1e-5;
  for (const auto& F : all_kinds()) {
    for (const auto& G : {F, F.reflect()}) {
      const double u0 = G.reflected() && G.kind() == NonlinearityKind::power_real ? -0.7 : 0.7;
      for (double u : {u0, 2.0 * u0, 3.1 * u0}) {
        const double fd1 = (G.value(u + h) - G.value(u - h)) / (2 * h);
        const double fd2 = (G.d1(u + h) - G.d1(u - h)) / (2 * h);
        CHECK(G.d1(u) == doctest::Approx(fd1).epsilon(1e-7));
        CHECK(G.d2(u) == doctest::Approx(fd2).epsilon(1e-7));
      }
    }
  }
}

TEST_CASE("odd reflection") {
  const auto sq = make_nonlinearity(NonlinearityKind::power_int, 2.0);
  const auto r = odd_reflection(sq);
  CHECK(r.reflected());
  CHECK(!sq.is_odd());
  for (double u : {-2.0, -0.3, 0.5, 1.7}) CHECK(r.value(u) == -sq.value(-u));
  CHECK(odd_reflection(r) == r.reflect());
  CHECK(r.reflect().value(1.3) == doctest::Approx(sq.value(1.3)));
  for (const auto& F : {make_nonlinearity(NonlinearityKind::identity),
                        make_nonlinearity(NonlinearityKind::power_int, 3.0),
                        make_nonlinearity(NonlinearityKind::u_minus_sin)}) {
    CHECK(F.is_odd());
    CHECK(odd_reflection(F) == F);
  }
  const auto ex = make_nonlinearity(NonlinearityKind::exp_minus_one);
  CHECK(odd_reflection(ex).value(1.0) == doctest::Approx(1.0 - std::exp(-1.0)));
  CHECK(odd_reflection(ex).describe().find("exp") != std::string::npos);
}

TEST_CASE("F' bounds on an interval") {
  const auto sq = make_nonlinearity(NonlinearityKind::power_int, 2.0);
  const FPrimeBounds b = fprime_bounds(sq, 1.0, 2.0);
  CHECK(b.min == 2.0);
  CHECK(b.max == 4.0);
  const FPrimeBounds e = fprime_bounds(make_nonlinearity(NonlinearityKind::exp_minus_one), 0.5, 1.5);
  CHECK(e.min == doctest::Approx(std::exp(0.5)));
  CHECK(e.max == doctest::Approx(std::exp(1.5)));
  const FPrimeBounds u = fprime_bounds(make_nonlinearity(NonlinearityKind::u_minus_sin), 1.0, 4.0);
  CHECK(u.max == doctest::Approx(1.0 - std::cos(kPi)).epsilon(1e-5));
  CHECK_THROWS_AS(fprime_bounds(odd_reflection(sq), 1.0, 2.0), HypothesisViolation);
  CHECK_THROWS_AS(fprime_bounds(sq, 0.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(fprime_bounds(sq, 2.0, 1.0), std::invalid_argument);
}

TEST_CASE("invalid nonlinearities") {
  CHECK_THROWS_AS(make_nonlinearity(NonlinearityKind::power_int, 1.5), std::invalid_argument);
  CHECK_THROWS_AS(make_nonlinearity(NonlinearityKind::power_int, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_nonlinearity(NonlinearityKind::power_real, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_nonlinearity("cubic"), std::invalid_argument);
  const auto pr = make_nonlinearity(NonlinearityKind::power_real, 1.5);
  CHECK_THROWS_AS(pr.d1(0.0), std::domain_error);
  CHECK_THROWS_AS(pr.value(-1.0), std::domain_error);
}

TEST_CASE("kind names round trip") {
  for (const auto& F : all_kinds()) {
    CHECK(parse_nonlinearity_kind(F.kind_name()) == F.kind());
  }
  CHECK(make_nonlinearity("power_int", 2.0).describe() == "u^2");
}
