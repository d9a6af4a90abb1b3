#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "gnb/dynamics.hpp"
#include "gnb/kernel.hpp"
#include "gnb/spectral.hpp"
#include "support.hpp"

using namespace gnb;

namespace {

const Nonlinearity kId = make_nonlinearity(NonlinearityKind::identity);
const Nonlinearity kSq = make_nonlinearity(NonlinearityKind::power_int, 2.0);
const Nonlinearity kExp = make_nonlinearity(NonlinearityKind::exp_minus_one);

Field smooth_positive(const Grid& g) {
  return Field::from_function(g, [](const Point& x) {
    return 2.0 + 0.4 * std::cos(x[0]) + 0.2 * std::sin(2.0 * x[0] + 0.3) + 0.1 * std::cos(x[1]);
  });
}

}  // namespace

TEST_CASE("constants are steady states") {
  for (int d : {1, 2}) {
    const Field u(make_grid(d, 16), 1.7);
    for (const auto& F : {kId, kSq, kExp}) {
      CHECK(linf_norm(rhs_spectral(u, 0.5, F)) < 1e-12);
      CHECK(linf_norm(rhs_spectral(u, 0.5, F, Dealias::two_thirds)) < 1e-12);
      CHECK(linf_norm(rhs_delta(u, 0.5, 0.1, F)) < 1e-12);
    }
    const KernelTable K = periodic_kernel(u.grid(), 0.5, 4);
    CHECK(linf_norm(rhs_quadrature(u, 0.5, kSq, K)) == 0.0);
  }
}

TEST_CASE("the right side is orthogonal to u") {
  std::mt19937_64 rng(11);
  for (int d : {1, 2}) {
    const Grid g = make_grid(d, d == 1 ? 64 : 16);
    for (int trial = 0; trial < 5; ++trial) {
      const Field u = test::random_field(g, rng, 0.5, 2.0);
      for (Dealias dl : {Dealias::none, Dealias::two_thirds}) {
        const Field r = rhs_spectral(u, 0.6, kSq, dl);
        CHECK(std::abs(inner(u, r)) < 1e-10 * l2_norm(u) * l2_norm(r));
      }
      const KernelTable K = periodic_kernel(g, 0.6, 3);
      const Field q = rhs_quadrature(u, 0.6, kSq, K);
      CHECK(std::abs(inner(u, q)) < 1e-10 * l2_norm(u) * l2_norm(q));
    }
  }
}

TEST_CASE("s = 1 with F = u on cos x gives sin^2 x") {
  const Grid g = make_grid(1, 32);
  const Field u = test::cos_field(g, 0.0, 1.0, 1);
  const Field r = rhs_spectral(u, 1.0, kId);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double sx = std::sin(g.point(i)[0]);
    CHECK(r[i] == doctest::Approx(sx * sx).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("quadrature form decreases maxima and increases minima") {
  std::mt19937_64 rng(12);
  for (int d : {1, 2}) {
    const Grid g = make_grid(d, d == 1 ? 64 : 16);
    const KernelTable K = periodic_kernel(g, 0.4, 4);
    for (int trial = 0; trial < 10; ++trial) {
      const Field u = test::random_field(g, rng, 0.2, 3.0);
      for (const auto& F : {kId, kSq, kExp}) {
        const Field r = rhs_quadrature(u, 0.4, F, K);
        CHECK(r[u.argmax()] <= 0.0);
        CHECK(r[u.argmin()] >= 0.0);
      }
    }
  }
}

TEST_CASE("quadrature and spectral evaluators agree on smooth data") {
  for (int d : {1, 2}) {
    const Grid g = make_grid(d, d == 1 ? 128 : 32);
    const Field u = smooth_positive(g);
    const KernelTable K = periodic_kernel(g, 0.5);
    const Field q = rhs_quadrature(u, 0.5, kSq, K);
    const Field p = rhs_spectral(u, 0.5, kSq);
    CHECK(l2_norm(q - p) / l2_norm(p) < 0.05);
  }
}

TEST_CASE("regularized right side converges at first order in delta") {
  const Grid g = make_grid(1, 64);
  const Field u = smooth_positive(g);
  const Field exact = rhs_spectral(u, 0.5, kSq);
  const double e1 = l2_norm(rhs_delta(u, 0.5, 0.02, kSq) - exact);
  const double e2 = l2_norm(rhs_delta(u, 0.5, 0.01, kSq) - exact);
  CHECK(std::log2(e1 / e2) == doctest::Approx(1.0).epsilon(0.1));
  CHECK_THROWS_AS(rhs_delta(u, 0.5, 0.0, kSq), std::invalid_argument);
}

TEST_CASE("energy-density right side is the chain rule of the quadrature form") {
  const Grid g = make_grid(1, 64);
  std::mt19937_64 rng(13);
  const Field u = test::random_field(g, rng, 0.5, 2.5);
  const KernelTable K = periodic_kernel(g, 0.5, 4);
  for (const auto& F : {kId, kSq}) {
    // F' is affine, so the midpoint lambda-rule is exact.
    const Field w = rhs_w(u, 0.5, F, K);
    const Field chain = 2.0 * hadamard(u, rhs_quadrature(u, 0.5, F, K));
    CHECK(linf_norm(w - chain) < 1e-12 * linf_norm(chain));
  }
  const Field chain = 2.0 * hadamard(u, rhs_quadrature(u, 0.5, kExp, K));
  CHECK(linf_norm(rhs_w(u, 0.5, kExp, K, 64) - chain) < 1e-3 * linf_norm(chain));
  const Field w = rhs_w(u, 0.5, kExp, K);
  CHECK(w[u.argmax()] <= 0.0);
  CHECK(w[u.argmin()] >= 0.0);
}

TEST_CASE("fluctuation split") {
  const Grid g = make_grid(2, 16);
  const Field u = smooth_positive(g);
  const Fluctuation f = fluctuation_split(u);
  CHECK(f.mean == doctest::Approx(2.0));
  CHECK(std::abs(integral(f.fluctuation)) < 1e-12);
  const Field back = f.fluctuation + Field(g, f.mean);
  CHECK(linf_norm(back - u) < 1e-14);
}

TEST_CASE("momentum derivative identities") {
  const Grid g = make_grid(1, 32);
  const MomentumCheck m = momentum_derivative_check(test::cos_field(g, 2.0, 1.0, 1), 1.0, kId);
  CHECK(m.lhs == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(m.rhs == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(m.rhs_fluctuation == doctest::Approx(kPi).epsilon(1e-12));
  const MomentumCheck e = momentum_derivative_check(smooth_positive(g), 0.3, kExp);
  CHECK(e.lhs == doctest::Approx(e.rhs).epsilon(1e-10));
  CHECK(e.rhs == doctest::Approx(e.rhs_fluctuation).epsilon(1e-10));
  CHECK(e.rhs > 0.0);
}

TEST_CASE("RK4 step is the quartic Taylor polynomial on a linear problem") {
  const Grid g = make_grid(1, 8);
  const Field u(g, 3.0);
  const double dt = 0.1;
  const Field v = step_rk4(u, dt, [](const Field& x) { return -1.0 * x; });
  const double factor = 1.0 - dt + dt * dt / 2 - dt * dt * dt / 6 + dt * dt * dt * dt / 24;
  CHECK(v[0] == doctest::Approx(3.0 * factor).epsilon(1e-15));
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(step_rk4(u, dt, [&](const Field& x) { return Field(x.grid(), nan); }),
                  NonFiniteState);
}

TEST_CASE("fixed-step RK4 converges at fourth order") {
  const Grid g = make_grid(1, 32);
  const Field u0 = test::cos_field(g, 2.0, 0.5, 1);
  SolverConfig cfg;
  cfg.stepper = Stepper::rk4_fixed;
  cfg.t_end = 0.2;
  cfg.track_lp3 = false;
  std::vector<Field> finals;
  for (double dt : {0.01, 0.005, 0.0025}) {
    cfg.dt = dt;
    finals.push_back(evolve(u0, cfg, kSq).final_state());
  }
  const double ratio = linf_norm(finals[0] - finals[1]) / linf_norm(finals[1] - finals[2]);
  CHECK(ratio == doctest::Approx(16.0).epsilon(0.2));
}

TEST_CASE("CFL step") {
  const Grid g = make_grid(1, 8);
  const Field u(g, 2.0);
  // max|F| = 4, max|F + u F'| = 12
  CHECK(cfl_time_step(u, kSq, 2.0, 0.5) == doctest::Approx(0.5 / 32.0));
  CHECK(std::isinf(cfl_time_step(Field(g, 0.0), kSq, 2.0, 0.5)));
}

TEST_CASE("evolution keeps constants and narrows the range") {
  const Grid g = make_grid(1, 32);
  SolverConfig cfg;
  cfg.t_end = 1.0;
  cfg.track_lp3 = false;
  const Trajectory c = evolve(Field(g, 1.5), cfg, kSq);
  CHECK(c.stop_reason == StopReason::completed);
  CHECK(linf_norm(c.final_state() - Field(g, 1.5)) < 1e-12);

  const Trajectory tr = evolve(smooth_positive(g), cfg, kSq);
  CHECK(!tr.blew_up());
  CHECK(tr.records.back().t == cfg.t_end);
  CHECK(tr.snapshots.front().t == 0.0);
  CHECK(tr.snapshots.back().t == cfg.t_end);
  for (std::size_t i = 1; i < tr.records.size(); ++i) {
    CHECK(tr.records[i].umax <= tr.records[i - 1].umax + 1e-10);
    CHECK(tr.records[i].umin >= tr.records[i - 1].umin - 1e-10);
  }
  CHECK(tr.records.back().amplitude < tr.records.front().amplitude);
}

TEST_CASE("an unstable fixed step is reported as a blow-up") {
  const Grid g = make_grid(1, 64);
  SolverConfig cfg;
  cfg.stepper = Stepper::rk4_fixed;
  cfg.dt = 1.0;
  cfg.t_end = 500.0;
  cfg.track_lp3 = false;
  const Trajectory tr = evolve(smooth_positive(g), cfg, kSq);
  CHECK(tr.blew_up());
  CHECK(tr.stop_reason == StopReason::non_finite);
  CHECK(tr.stop_time < cfg.t_end);
  CHECK(tr.final_state().all_finite());
}

TEST_CASE("delta pairs") {
  const Grid g = make_grid(1, 32);
  SolverConfig cfg;
  cfg.t_end = 0.5;
  cfg.track_lp3 = false;
  const Field u0 = smooth_positive(g);
  const DeltaPair same = evolve_delta_pair(u0, cfg, kSq, 0.1, 0.1);
  for (double gap : same.gap) CHECK(gap == 0.0);
  const DeltaPair pair = evolve_delta_pair(u0, cfg, kSq, 0.2, 0.1);
  CHECK(pair.gap.front() == 0.0);
  CHECK(pair.gap.back() > 0.0);
  CHECK(pair.t.size() == pair.gap.size());
  CHECK(pair.t.back() == doctest::Approx(cfg.t_end));
  CHECK_THROWS_AS(evolve_delta_pair(u0, cfg, kSq, 0.0, 0.1), std::invalid_argument);
}

TEST_CASE("solver configuration validation") {
  SolverConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.s = 1.0;
  cfg.rhs_mode = RhsMode::quadrature;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.dt = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.cfl_safety = 2.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  CHECK(resolve_dealias(Dealias::automatic, kSq) == Dealias::two_thirds);
  CHECK(resolve_dealias(Dealias::automatic, kExp) == Dealias::none);
  CHECK(resolve_dealias(Dealias::none, kSq) == Dealias::none);
}
