#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "gnb/spectral.hpp"
#include "support.hpp"

using namespace gnb;

namespace {

std::size_t index_of(const Grid& g, Wavevector k) {
  for (std::size_t p = 0; p < g.size(); ++p) {
    if (g.wavevector(p) == k) return p;
  }
  throw std::logic_error("wavevector not on grid");
}

}  // namespace

TEST_CASE("forward transform of constants and cosines") {
  const Grid g = make_grid(1, 64);
  const SpectralField c = forward(Field(g, 3.5));
  CHECK(c.coeffs[0].real() == doctest::Approx(3.5).epsilon(1e-15));
  for (std::size_t p = 1; p < g.size(); ++p) CHECK(std::abs(c.coeffs[p]) < 1e-15);

  const SpectralField f = forward(test::cos_field(g, 0.0, 1.0, 1));
  CHECK(std::abs(f.coeffs[index_of(g, {1, 0})] - 0.5) < 1e-15);
  CHECK(std::abs(f.coeffs[index_of(g, {-1, 0})] - 0.5) < 1e-15);
  double rest = 0.0;
  for (std::size_t p = 0; p < g.size(); ++p) {
    const int k = g.wavevector(p)[0];
    if (k != 1 && k != -1) rest = std::max(rest, std::abs(f.coeffs[p]));
  }
  CHECK(rest < 1e-15);
}

TEST_CASE("round trips are exact to 1e-12 on random data") {
  std::mt19937_64 rng(1);
  for (int d : {1, 2}) {
    const Grid g = make_grid(d, d == 1 ? 256 : 32);
    for (int trial = 0; trial < 5; ++trial) {
      const Field f = test::random_field(g, rng, -3.0, 3.0);
      CHECK(linf_norm(inverse(forward(f)) - f) / linf_norm(f) < 1e-12);
      const SpectralField F = forward(f);
      const SpectralField back = forward(inverse(F));
      double err = 0.0;
      for (std::size_t p = 0; p < g.size(); ++p) err = std::max(err, std::abs(back.coeffs[p] - F.coeffs[p]));
      CHECK(err < 1e-12 * linf_norm(f));
    }
  }
}

TEST_CASE("inverse builds real fields and rejects non-Hermitian spectra") {
  const Grid g = make_grid(1, 32);
  SpectralField c(g);
  c.coeffs[0] = 3.0;
  CHECK(linf_norm(inverse(c) - Field(g, 3.0)) < 1e-15);

  SpectralField two(g);
  two.coeffs[index_of(g, {2, 0})] = 0.5;
  two.coeffs[index_of(g, {-2, 0})] = 0.5;
  CHECK(linf_norm(inverse(two) - test::cos_field(g, 0.0, 1.0, 2)) < 1e-14);

  SpectralField bad(g);
  bad.coeffs[index_of(g, {1, 0})] = 1.0;
  CHECK(hermitian_defect(bad) > 0.5);
  CHECK_THROWS_AS(inverse(bad), CorruptSpectrum);
}

TEST_CASE("apply_multiplier scales coefficients") {
  const Grid g = make_grid(1, 32);
  const Field f = test::cos_field(g, 1.0, 1.0, 3);
  const SpectralField F = forward(f);
  CHECK(linf_norm(inverse(apply_multiplier(F, [](const Wavevector&) { return 1.0; })) - f) < 1e-14);
  CHECK(linf_norm(inverse(apply_multiplier(F, [](const Wavevector&) { return 0.0; }))) == 0.0);
  const Field lap = inverse(apply_multiplier(F, [](const Wavevector& k) { return double(k[0] * k[0]); }));
  CHECK(linf_norm(lap - test::cos_field(g, 0.0, 9.0, 3)) < 1e-12);
  CHECK_THROWS_AS(apply_multiplier(F, [](const Wavevector& k) { return double(k[0]); }),
                  std::invalid_argument);
}

TEST_CASE("fractional Laplacian has the |k|^s eigenvalues") {
  const Grid g = make_grid(1, 64);
  CHECK(linf_norm(frac_laplacian(Field(g, 5.0), 0.5)) == 0.0);
  const Field c2 = test::cos_field(g, 0.0, 1.0, 2);
  CHECK(linf_norm(frac_laplacian(c2, 0.5) - 1.414213562373095 * c2) < 1e-13);

  const Grid g2 = make_grid(2, 32);
  const Field diag = test::cos_field(g2, 0.0, 1.0, 1, 1);
  CHECK(linf_norm(frac_laplacian(diag, 1.0) - std::sqrt(2.0) * diag) < 1e-13);

  for (int d : {1, 2}) {
    const Grid gd = make_grid(d, 32);
    for (int k : {1, 2, 4, 8}) {
      for (double s : {0.3, 0.5, 1.0}) {
        const Field f = test::cos_field(gd, 0.0, 1.0, k);
        const double lam = std::pow(static_cast<double>(k), s);
        CHECK(linf_norm(frac_laplacian(f, s) - lam * f) / lam < 1e-12);
      }
    }
  }
  CHECK_THROWS_AS(frac_laplacian(c2, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(frac_laplacian(c2, 1.5), std::invalid_argument);
}

TEST_CASE("both operators are self-adjoint in the discrete inner product") {
  std::mt19937_64 rng(2);
  for (int d : {1, 2}) {
    const Grid g = make_grid(d, d == 1 ? 64 : 16);
    for (int trial = 0; trial < 10; ++trial) {
      const Field f = test::random_field(g, rng, -1.0, 1.0);
      const Field h = test::random_field(g, rng, -1.0, 1.0);
      const double s = 0.2 + 0.08 * trial;
      const Field Lh = frac_laplacian(h, s);
      CHECK(std::abs(inner(f, Lh) - inner(frac_laplacian(f, s), h)) < 1e-12 * l2_norm(f) * l2_norm(Lh));
      const Field Dh = frac_laplacian_delta(h, s, 0.3);
      CHECK(std::abs(inner(f, Dh) - inner(frac_laplacian_delta(f, s, 0.3), h)) <
            1e-12 * l2_norm(f) * l2_norm(Dh));
    }
  }
}

TEST_CASE("regularized operator: closed form, domination and the delta limit") {
  const Grid g = make_grid(1, 64);
  const Field c1 = test::cos_field(g, 0.0, 1.0, 1);
  CHECK(linf_norm(frac_laplacian_delta(c1, 1.0, 1.0) - 0.632120558828558 * c1) < 1e-14);
  CHECK(linf_norm(frac_laplacian_delta(Field(g, 2.0), 0.5, 0.1)) == 0.0);
  CHECK_THROWS_AS(frac_laplacian_delta(c1, 0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(frac_laplacian_delta(c1, 0.5, -1.0), std::invalid_argument);

  for (int d : {1, 2}) {
    const Grid gd = make_grid(d, 32);
    for (double s : {0.3, 0.7, 1.0}) {
      const auto full = FourierMultiplier::fractional(gd, s).symbol();
      double k2s = 0.0;
      for (double m : full) k2s = std::max(k2s, m * m);
      for (double delta : {1e-3, 1e-2, 0.1, 0.5, 1.0}) {
        const auto reg = FourierMultiplier::regularized(gd, s, delta).symbol();
        for (std::size_t p = 0; p < full.size(); ++p) CHECK(reg[p] <= full[p]);
        const auto half = FourierMultiplier::regularized(gd, s, 0.5 * delta).symbol();
        double diff = 0.0;
        for (std::size_t p = 0; p < full.size(); ++p) diff = std::max(diff, std::abs(reg[p] - half[p]));
        CHECK(diff <= 0.5 * (0.5 * delta) * k2s);
      }
    }
  }

  // log ||L_delta f - L f|| against log delta has slope 1.
  const Field f = Field::from_function(g, [](const Point& x) { return std::exp(std::sin(x[0])); });
  std::vector<double> ld, le;
  for (double delta : {1e-1, 1e-2, 1e-3}) {
    ld.push_back(std::log(delta));
    le.push_back(std::log(l2_norm(frac_laplacian_delta(f, 0.5, delta) - frac_laplacian(f, 0.5))));
  }
  const double slope = ((le[2] - le[0]) / (ld[2] - ld[0]));
  CHECK(slope == doctest::Approx(1.0).epsilon(0.1));
}

TEST_CASE("derivative is exact below Nyquist and drops the Nyquist mode") {
  const Grid g = make_grid(1, 32);
  const Field s3 = Field::from_function(g, [](const Point& x) { return std::sin(3 * x[0]); });
  CHECK(linf_norm(derivative(s3, 0) - test::cos_field(g, 0.0, 3.0, 3)) < 1e-13);
  CHECK(linf_norm(derivative(Field(g, 4.0), 0)) < 1e-15);
  CHECK(linf_norm(derivative(test::cos_field(g, 0.0, 1.0, 16), 0)) < 1e-13);
  CHECK_THROWS_AS(derivative(s3, 1), std::invalid_argument);

  const Grid g2 = make_grid(2, 16);
  const Field cx = test::cos_field(g2, 0.0, 1.0, 1, 0);
  CHECK(linf_norm(derivative(cx, 1)) < 1e-14);
  CHECK_THROWS_AS(derivative(cx, 2), std::invalid_argument);
  // |grad cos(x1 + x2)| = sqrt(2) |sin(x1 + x2)|
  const Field diag = test::cos_field(g2, 0.0, 1.0, 1, 1);
  CHECK(linf_norm(gradient_magnitude(diag)) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("Besov seminorm on single and separated shells") {
  const Grid g = make_grid(1, 64);
  CHECK(dyadic_shell(1) == 0);
  CHECK(dyadic_shell(4) == 1);
  CHECK(dyadic_shell(9) == 2);
  CHECK(dyadic_shell(16) == 2);
  CHECK(dyadic_shell(25) == 3);
  const Field c2 = test::cos_field(g, 0.0, 1.0, 2);
  for (double r : {0.0, 0.5, 1.0}) {
    CHECK(besov_seminorm(c2, r, BesovSum::one) == doctest::Approx(std::pow(2.0, r)));
    CHECK(besov_seminorm(c2, r, BesovSum::infinity) == doctest::Approx(std::pow(2.0, r)));
  }
  CHECK(besov_seminorm(Field(g, 7.0), 1.0, BesovSum::one) == 0.0);
  const Field two = c2 + test::cos_field(g, 0.0, 1.0, 8);
  CHECK(besov_seminorm(two, 1.0, BesovSum::one) == doctest::Approx(10.0));
  CHECK(besov_seminorm(two, 1.0, BesovSum::infinity) == doctest::Approx(8.0));
}

TEST_CASE("shell projections partition the non-constant part") {
  std::mt19937_64 rng(3);
  for (int d : {1, 2}) {
    const Grid g = make_grid(d, 32);
    const Field f = test::random_field(g, rng, -1.0, 1.0);
    Field sum(g, f.mean());
    for (int j = 0; j < shell_count(g); ++j) sum += shell_projection(f, j);
    CHECK(linf_norm(sum - f) < 1e-12);
  }
}

TEST_CASE("Sobolev seminorm matches the Parseval oracle") {
  const Grid g = make_grid(1, 64);
  CHECK(sobolev_seminorm(test::cos_field(g, 0.0, 1.0, 1), 0.5) == doctest::Approx(std::sqrt(kPi)));
  CHECK(sobolev_seminorm(Field(g, 3.0), 0.7) == 0.0);
  std::mt19937_64 rng(4);
  const Field f = test::random_field(g, rng, 0.0, 1.0);
  CHECK(sobolev_seminorm(2.0 * f, 0.25) == doctest::Approx(2.0 * sobolev_seminorm(f, 0.25)));
  Field v = f;
  for (double& x : v.values()) x -= f.mean();
  CHECK(sobolev_seminorm(f, 0.0) == doctest::Approx(l2_norm(v)).epsilon(1e-12));
  // (2 pi)^2 * 4 * (1/4)^2 * |k|^{2 sigma} for cos(x1 + 2 x2), sigma = 1
  const Grid g2 = make_grid(2, 16);
  const double expect = std::sqrt(kTwoPi * kTwoPi * 2 * 0.25 * 5.0);
  CHECK(sobolev_seminorm(test::cos_field(g2, 0.0, 1.0, 1, 2), 1.0) == doctest::Approx(expect));
}
