#include "gnb/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <string>
#include <tuple>
#include <utility>

namespace gnb {

namespace {

// FFTW planning is not thread safe, execution with the new-array interface is.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan get(const Grid& g, int sign) {
    const std::lock_guard<std::mutex> lock(mutex_);
    const auto key = std::make_tuple(g.dim(), g.n(), sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    auto* in = fftw_alloc_complex(g.size());
    auto* out = fftw_alloc_complex(g.size());
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan p = g.dim() == 1 ? fftw_plan_dft_1d(g.n(), in, out, sign, flags)
                               : fftw_plan_dft_2d(g.n(), g.n(), in, out, sign, flags);
    fftw_free(in);
    fftw_free(out);
    plans_.emplace(key, p);
    return p;
  }

  PlanCache(const PlanCache&) = delete;
  PlanCache& operator=(const PlanCache&) = delete;

 private:
  PlanCache() = default;
  ~PlanCache() {
    for (auto& [key, p] : plans_) fftw_destroy_plan(p);
  }

  std::mutex mutex_;
  std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

void execute(const Grid& g, int sign, std::vector<std::complex<double>>& in,
             std::vector<std::complex<double>>& out) {
  fftw_plan p = PlanCache::instance().get(g, sign);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

Field inverse_unchecked(const SpectralField& F) {
  auto in = F.coeffs;
  std::vector<std::complex<double>> out(in.size());
  execute(F.grid, FFTW_BACKWARD, in, out);
  Field f(F.grid);
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = out[i].real();
  return f;
}

void require_order(double s) {
  if (!(s > 0.0 && s <= 1.0)) {
    throw std::invalid_argument("fractional order s must lie in (0, 1], got " +
                                std::to_string(s));
  }
}

}  // namespace

SpectralField forward(const Field& f) {
  const Grid& g = f.grid();
  std::vector<std::complex<double>> in(g.size());
  for (std::size_t i = 0; i < in.size(); ++i) in[i] = f[i];
  SpectralField F(g);
  execute(g, FFTW_FORWARD, in, F.coeffs);
  const double scale = 1.0 / static_cast<double>(g.size());
  for (auto& c : F.coeffs) c *= scale;
  return F;
}

double hermitian_defect(const SpectralField& F) {
  double defect = 0.0;
  double peak = 0.0;
  for (std::size_t i = 0; i < F.coeffs.size(); ++i) {
    const auto mirror = std::conj(F.coeffs[F.grid.negated(i)]);
    defect = std::max(defect, std::abs(F.coeffs[i] - mirror));
    peak = std::max(peak, std::abs(F.coeffs[i]));
  }
  return defect / std::max(peak, std::numeric_limits<double>::min());
}

Field inverse(const SpectralField& F) {
  const double defect = hermitian_defect(F);
  if (defect > kHermitianTolerance) {
    throw CorruptSpectrum("coefficients are not Hermitian symmetric (relative defect " +
                          std::to_string(defect) + ")");
  }
  return inverse_unchecked(F);
}

SpectralField apply_multiplier(const SpectralField& F,
                               const std::function<double(const Wavevector&)>& m) {
  const Grid& g = F.grid;
  std::vector<double> symbol(g.size());
  for (std::size_t i = 0; i < symbol.size(); ++i) symbol[i] = m(g.wavevector(i));
  return FourierMultiplier(g, std::move(symbol)).apply(F);
}

FourierMultiplier::FourierMultiplier(Grid grid, std::vector<double> symbol)
    : grid_(grid), symbol_(std::move(symbol)) {
  if (symbol_.size() != grid_.size()) {
    throw std::invalid_argument("multiplier table length does not match grid size");
  }
  for (std::size_t i = 0; i < symbol_.size(); ++i) {
    const double v = symbol_[i];
    if (!std::isfinite(v)) throw std::invalid_argument("multiplier is not finite");
    const double mirror = symbol_[grid_.negated(i)];
    if (std::abs(v - mirror) > 1e-14 * std::max(std::abs(v), std::abs(mirror))) {
      throw std::invalid_argument("multiplier is not even: m(-k) != m(k) breaks realness");
    }
    max_symbol_ = std::max(max_symbol_, std::abs(v));
  }
}

FourierMultiplier FourierMultiplier::fractional(const Grid& grid, double s) {
  require_order(s);
  std::vector<double> symbol(grid.size());
  for (std::size_t i = 0; i < symbol.size(); ++i) {
    const auto k2 = static_cast<double>(grid.wavenumber_norm2(i));
    symbol[i] = k2 == 0.0 ? 0.0 : std::pow(k2, 0.5 * s);
  }
  return {grid, std::move(symbol)};
}

FourierMultiplier FourierMultiplier::regularized(const Grid& grid, double s, double delta) {
  require_order(s);
  if (!(delta > 0.0)) {
    throw std::invalid_argument("regularization delta must be positive (use the s-order "
                                "operator for the limit)");
  }
  std::vector<double> symbol(grid.size());
  for (std::size_t i = 0; i < symbol.size(); ++i) {
    const auto k2 = static_cast<double>(grid.wavenumber_norm2(i));
    symbol[i] = k2 == 0.0 ? 0.0 : -std::expm1(-delta * std::pow(k2, 0.5 * s)) / delta;
  }
  return {grid, std::move(symbol)};
}

FourierMultiplier FourierMultiplier::two_thirds(const Grid& grid) {
  std::vector<double> symbol(grid.size());
  const int cut = grid.n() / 3;
  for (std::size_t i = 0; i < symbol.size(); ++i) {
    const auto k = grid.wavevector(i);
    symbol[i] = (std::abs(k[0]) <= cut && std::abs(k[1]) <= cut) ? 1.0 : 0.0;
  }
  return {grid, std::move(symbol)};
}

SpectralField FourierMultiplier::apply(const SpectralField& F) const {
  require_same_grid(grid_, F.grid, "FourierMultiplier::apply");
  SpectralField out = F;
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] *= symbol_[i];
  return out;
}

Field FourierMultiplier::apply(const Field& f) const {
  return inverse_unchecked(apply(forward(f)));
}

Field frac_laplacian(const Field& f, double s) {
  return FourierMultiplier::fractional(f.grid(), s).apply(f);
}

Field frac_laplacian_delta(const Field& f, double s, double delta) {
  return FourierMultiplier::regularized(f.grid(), s, delta).apply(f);
}

Field derivative(const Field& f, int axis) {
  const Grid& g = f.grid();
  if (axis < 0 || axis >= g.dim()) {
    throw std::invalid_argument("derivative axis " + std::to_string(axis) +
                                " outside grid dimension " + std::to_string(g.dim()));
  }
  SpectralField F = forward(f);
  const int nyquist = -g.n() / 2;
  for (std::size_t i = 0; i < F.coeffs.size(); ++i) {
    const int k = g.wavevector(i)[static_cast<std::size_t>(axis)];
    F.coeffs[i] = k == nyquist ? 0.0 : F.coeffs[i] * std::complex<double>(0.0, k);
  }
  return inverse_unchecked(F);
}

Field gradient_magnitude(const Field& f) {
  Field mag = map(derivative(f, 0), [](double v) { return v * v; });
  if (f.grid().dim() == 2) mag += map(derivative(f, 1), [](double v) { return v * v; });
  for (double& v : mag.values()) v = std::sqrt(v);
  return mag;
}

int dyadic_shell(long norm2) {
  int j = 0;
  long bound = 1;  // 4^j
  while (bound < norm2) {
    bound *= 4;
    ++j;
  }
  return j;
}

int shell_count(const Grid& grid) {
  long max_norm2 = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    max_norm2 = std::max(max_norm2, grid.wavenumber_norm2(i));
  }
  return dyadic_shell(max_norm2) + 1;
}

namespace {

std::vector<double> shell_maxima(const Field& f) {
  const Grid& g = f.grid();
  const SpectralField F = forward(f);
  const int shells = shell_count(g);
  std::vector<double> maxima(static_cast<std::size_t>(shells), 0.0);
  for (int j = 0; j < shells; ++j) {
    SpectralField part(g);
    bool any = false;
    for (std::size_t i = 0; i < F.coeffs.size(); ++i) {
      const long k2 = g.wavenumber_norm2(i);
      if (k2 != 0 && dyadic_shell(k2) == j) {
        part.coeffs[i] = F.coeffs[i];
        any = true;
      }
    }
    if (any) maxima[static_cast<std::size_t>(j)] = linf_norm(inverse_unchecked(part));
  }
  return maxima;
}

}  // namespace

Field shell_projection(const Field& f, int j) {
  const Grid& g = f.grid();
  SpectralField F = forward(f);
  for (std::size_t i = 0; i < F.coeffs.size(); ++i) {
    const long k2 = g.wavenumber_norm2(i);
    if (k2 == 0 || dyadic_shell(k2) != j) F.coeffs[i] = 0.0;
  }
  return inverse_unchecked(F);
}

double besov_seminorm(const Field& f, double r, BesovSum q) {
  const auto maxima = shell_maxima(f);
  double acc = 0.0;
  for (std::size_t j = 0; j < maxima.size(); ++j) {
    const double term = std::exp2(r * static_cast<double>(j)) * maxima[j];
    acc = q == BesovSum::one ? acc + term : std::max(acc, term);
  }
  return acc;
}

double sobolev_seminorm(const Field& f, double sigma) {
  if (sigma < 0.0) throw std::invalid_argument("sobolev order must be nonnegative");
  const Grid& g = f.grid();
  const SpectralField F = forward(f);
  double acc = 0.0;
  for (std::size_t i = 0; i < F.coeffs.size(); ++i) {
    const auto k2 = static_cast<double>(g.wavenumber_norm2(i));
    if (k2 == 0.0) continue;
    acc += std::pow(k2, sigma) * std::norm(F.coeffs[i]);
  }
  return std::sqrt(g.volume() * acc);
}

}  // namespace gnb
