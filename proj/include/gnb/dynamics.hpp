#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gnb/field.hpp"
#include "gnb/kernel.hpp"
#include "gnb/nonlinearity.hpp"
#include "gnb/record.hpp"
#include "gnb/spectral.hpp"

namespace gnb {

enum class RhsMode { spectral, quadrature };
enum class Stepper { rk4_fixed, rk4_adaptive };
/// `automatic` truncates for the power kinds (identity, power_int,
/// power_real) and not for the transcendental ones.
enum class Dealias { none, two_thirds, automatic };
enum class StopReason { completed, non_finite, step_underflow };

std::string to_string(RhsMode m);
std::string to_string(Stepper s);
std::string to_string(Dealias d);
std::string to_string(StopReason r);

/// Resolves Dealias::automatic for a given F.
Dealias resolve_dealias(Dealias d, const Nonlinearity& F);

struct SolverConfig {
  double s = 0.5;
  double delta = 0.0;  ///< 0: unregularized operator
  RhsMode rhs_mode = RhsMode::spectral;
  Stepper stepper = Stepper::rk4_adaptive;
  double dt = 1e-2;    ///< fixed step, or the step cap of the adaptive stepper
  double t_end = 1.0;
  double cfl_safety = 0.5;
  Dealias dealias = Dealias::automatic;
  int diag_every = 1;
  int kernel_truncation = kDefaultTruncation;
  int snapshot_count = 40;           ///< log-spaced snapshot instants
  bool snapshot_every_record = false;
  bool track_lp3 = true;

  /// Throws std::invalid_argument on inconsistent settings.
  void validate() const;
};

/// A stage evaluation produced NaN or infinity.
class NonFiniteState : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using RhsFunction = std::function<Field(const Field&)>;

/// [F(u), L] u = G L u - L(u G) with G = F(u), L the symbol table. Under
/// two-thirds dealiasing G is truncated before both products, which keeps
/// the commutator form: constants stay exact steady states and <u, rhs> = 0.
class CommutatorRhs {
 public:
  /// delta == 0 selects |k|^s, delta > 0 the regularized symbol.
  CommutatorRhs(const Grid& grid, double s, double delta, Nonlinearity F, Dealias dealias);

  Field operator()(const Field& u) const;
  double symbol_max() const noexcept { return symbol_.max_symbol(); }

 private:
  Nonlinearity F_;
  FourierMultiplier symbol_;
  std::optional<FourierMultiplier> truncation_;
};

/// h^d sum_{j != i} (F(u_j) - F(u_i)) u_j K(x_i - x_j), O(N^2).
class QuadratureRhs {
 public:
  QuadratureRhs(KernelTable kernel, Nonlinearity F);

  Field operator()(const Field& u) const;
  const KernelTable& kernel() const noexcept { return kernel_; }

 private:
  KernelTable kernel_;
  Nonlinearity F_;
};

Field rhs_spectral(const Field& u, double s, const Nonlinearity& F,
                   Dealias dealias = Dealias::none);
/// s < 1; K must be built on u's grid with the same s.
Field rhs_quadrature(const Field& u, double s, const Nonlinearity& F, const KernelTable& K);
Field rhs_delta(const Field& u, double s, double delta, const Nonlinearity& F,
                Dealias dealias = Dealias::none);

/// Right side of the energy-density equation for w = u^2:
///   h^d sum_{j != i} (u_j^2 - u_i^2) m(u_i, u_j) K(x_i - x_j) / c_{d,s},
/// with m = active_kernel_m carrying the c_{d,s} factor. u > 0.
Field rhs_w(const Field& u, double s, const Nonlinearity& F, const KernelTable& K,
            int nq = kDefaultLambdaNodes);

struct Fluctuation {
  double mean;
  Field fluctuation;
};

/// u = p + v with p the spatial mean.
Fluctuation fluctuation_split(const Field& u);

struct MomentumCheck {
  double lhs;              ///< h^d sum rhs_spectral(u)
  double rhs;              ///< h^d sum F(u) |grad|^s u
  double rhs_fluctuation;  ///< h^d sum (F(v + p) - F(p)) |grad|^s v
};

MomentumCheck momentum_derivative_check(const Field& u, double s, const Nonlinearity& F);

/// Classical four-stage Runge-Kutta step. Throws NonFiniteState when a stage
/// or the result is not finite.
Field step_rk4(const Field& u, double dt, const RhsFunction& rhs);

/// cfl_safety / (symbol_max * (max|F(u)| + max|F(u) + u F'(u)|)).
double cfl_time_step(const Field& u, const Nonlinearity& F, double symbol_max, double safety);

struct Snapshot {
  double t;
  Field u;
};

struct Trajectory {
  SolverConfig config;
  Nonlinearity F;
  std::vector<Snapshot> snapshots;  ///< starts with (0, u0), ends with the last state
  std::vector<DiagnosticsRecord> records;
  StopReason stop_reason = StopReason::completed;
  double stop_time = 0.0;  ///< time of the last finite state
  std::size_t steps = 0;

  bool blew_up() const noexcept { return stop_reason != StopReason::completed; }
  const Field& initial_state() const { return snapshots.front().u; }
  const Field& final_state() const { return snapshots.back().u; }
};

/// Integrates u0 to cfg.t_end, or until a state stops being finite (recorded
/// as the blow-up witness) or the adaptive step drops below 1e-12.
Trajectory evolve(const Field& u0, const SolverConfig& cfg, const Nonlinearity& F);

struct DeltaPair {
  Trajectory first;   ///< regularization delta
  Trajectory second;  ///< regularization epsilon
  std::vector<double> t;
  std::vector<double> gap;  ///< ||u_delta(t) - u_epsilon(t)||_{L^2}
};

/// Runs both regularized flows with a shared fixed step (the CFL step of u0
/// when cfg asks for the adaptive stepper) so their stamps coincide.
DeltaPair evolve_delta_pair(const Field& u0, SolverConfig cfg, const Nonlinearity& F,
                            double delta, double epsilon);

}  // namespace gnb
