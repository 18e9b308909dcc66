#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lagro/model.hpp"

namespace lagro {

// The dual problems below work on the instance with finite y_c upper bounds folded
// into constraint rows (fold_yc_bounds), so every row-indexed certificate has
// one entry per folded row.

/// Dual block k of the Lagrangian bound at the maximising scenario.
struct BoundBlock {
  /// Empty when the block LP is unbounded (y_d^(k) imposes no bound on eta).
  Vec mu, beta;
  ExtValue value;
};

struct LagrangianBound {
  /// +inf when some scenario leaves every block unbounded.
  ExtValue value = ExtValue::neg_inf();
  Vec xi;
  std::size_t xi_index = 0;
  std::vector<BoundBlock> blocks;
};

/// max over xi in Xi, eta, mu^(k) >= 0, beta^(k) >= 0 of eta s.t. for every k
///   eta <= tau c(xi)'x + tau d_d(xi)'y_d^(k) + e'(lambda xi - beta^(k))
///          + (h0 - T x - W_d y_d^(k))'mu^(k),
///   W_c'mu^(k) <= tau d_c(xi),  (1 - tau) mu^(k) <= e,
///   2 lambda xi - H'mu^(k) - beta^(k) <= lambda e.
/// Solved per scenario and per block; ties go to the first scenario.
LagrangianBound solve_lagrangian_bound(const GeneralInstance& inst, const Vec& x, const std::vector<Vec>& D, int tau,
                               const Scalar& lambda);

struct InnerOutcome {
  /// Set when Q(x, xi) = +inf for the returned xi (and lambda = lambda0).
  bool infeasible = false;
  Vec xi;
  Scalar lambda;
  ExtValue lb, ub;
  std::vector<Vec> D;
  std::size_t iterations = 0;
  /// Every multiplier value the optimality phase computed the Lagrangian bound with.
  std::vector<Scalar> lambda_trajectory;
};

/// Upper-bounding loop for fixed x: a feasibility phase on the slack problem
/// followed by an optimality phase that halves and doubles the multiplier until
/// the Lagrangian minimiser satisfies z = xi. `D` seeds the set of discrete
/// second-stage decisions (empty in the textbook version). Throws InputError
/// when lambda0 <= 0 and LimitExceeded beyond `max_iterations`.
InnerOutcome ccg_inner(const GeneralInstance& inst, const Vec& x, const Scalar& lambda0, const Scalar& eps = 0,
                       std::vector<Vec> D = {}, std::size_t max_iterations = 10000);

struct IndicatorWorstCase {
  ExtValue value = ExtValue::neg_inf();
  Vec xi;
  std::size_t xi_index = 0;
  Vec mu, rho, nu;
};

/// max over xi in Xi of the LP max c(xi)'x + (h0 - T x)'psi s.t. W'psi <= d(xi)
/// with psi = mu - sum_j rho_j e_{I1_j} - sum_j nu_j e_{I0_j}, mu, rho, nu >= 0,
/// rho_j = 0 when xi_j = 0 and nu_j = 0 when xi_j = 1. Requires nd2 = 0.
IndicatorWorstCase solve_indicator_worst_case(const IndicatorInstance& inst, const Vec& x);

/// max{|rho|, |nu|} (largest absolute entries).
Scalar indicator_multiplier(const Vec& rho, const Vec& nu);

struct RestrictedWorstCase {
  ExtValue value = ExtValue::neg_inf();
  Vec xi;
  std::size_t xi_index = 0;
  /// One block per element of D: a feasible point whose block value is at
  /// least `value` (the optimum when the block is bounded).
  std::vector<Vec> mu, rho;
};

/// max over xi, eta, mu^(k) >= 0, rho^(k) of eta s.t. for every k
///   eta <= c(xi)'x + d_d(xi)'y_d^(k) + e'rho^(k) + (h0 - T x - W_d y_d^(k))'mu^(k),
///   W_c'mu^(k) <= d_c(xi),
///   rho_j^(k) <= (H'mu^(k))_j when xi_j = 1 and rho_j^(k) <= 0 when xi_j = 0.
/// rho is free in sign; its value equals sup_xi min_{y_d in D} Q(x, xi; y_d).
RestrictedWorstCase solve_restricted_worst_case(const GeneralInstance& inst, const Vec& x, const std::vector<Vec>& D);

/// max over k of max{|rho^(k)|, |H'mu^(k)|}.
Scalar restricted_multiplier(const std::vector<Vec>& mu, const std::vector<Vec>& rho, const Mat& H);

/// min over x in X of max over xi in R of Q(x, xi) (P) or Q_I (P_I).
/// Empty R gives -inf at the first x. Ties go to the first x.
struct MasterResult {
  ExtValue value;
  Vec x;
  std::size_t x_index = 0;
};
MasterResult ccg_master(const GeneralInstance& inst, const std::vector<Vec>& R);
MasterResult ccg_master(const IndicatorInstance& inst, const std::vector<Vec>& R);

/// Benders cut for P_I with a continuous second stage. An optimality cut reads
/// theta >= c(xi)'x + (h0 - T x)'psi; a feasibility cut reads (h0 - T x)'psi <= 0.
/// psi is indexed by the folded rows.
struct BendersCut {
  Vec xi;
  Vec x_generated;
  bool feasibility = false;
  Vec psi;
  Scalar lambda;
};

struct BendersState {
  std::vector<BendersCut> cuts;
  /// Scenarios that produced feasibility (F) and optimality (O) cuts.
  std::vector<Vec> F, O;
  /// First-stage points proven robust-infeasible by verification.
  std::vector<Vec> excluded;
};

/// min over x in X of theta subject to the stored cuts; -inf when no
/// optimality cut applies, +inf when feasibility cuts exclude every x.
MasterResult benders_master(const IndicatorInstance& inst, const BendersState& state);

enum class Method { Ccg, Benders };

struct TraceEvent {
  /// "master", "inner", "verify", "restart" or "done".
  std::string kind;
  std::size_t iteration = 0;
  std::size_t restarts = 0;
  Scalar lambda;
  ExtValue lb, ub;
  std::size_t d_size = 0, r_size = 0, cuts = 0;
};
using TraceSink = std::function<void(const TraceEvent&)>;

struct EngineOptions {
  Method method = Method::Ccg;
  Scalar eps = 0;
  /// Defaults to max{1, u(x) - l(x)} at the first master candidate.
  std::optional<Scalar> lambda0;
  std::size_t max_inner = 10000;
  std::size_t max_outer = 1000;
  std::size_t max_restarts = 10;
  TraceSink trace;
};

struct Report {
  /// +inf when every x in X is robust-infeasible.
  ExtValue value;
  Vec x;
  std::size_t x_index = 0;
  /// Scenario making X[0] infeasible when value = +inf.
  Vec witness;
  /// Outer iterations and summed inner iterations over all runs.
  std::size_t iterations = 0, inner_iterations = 0;
  std::size_t n_restarts = 0;
  double seconds = 0;
  Scalar lambda;
  /// Ex-post verification confirmed UB >= Z at the returned x.
  bool verified = false;
};

/// Outer CCG (P or P_I) or Benders (P_I only) with ex-post verification and
/// restarts. Throws InputError on unsupported combinations (Benders for P,
/// discrete second stage for P_I) and LimitExceeded beyond the caps.
Report solve_with_restarts(const GeneralInstance& inst, const EngineOptions& options = {});
Report solve_with_restarts(const IndicatorInstance& inst, const EngineOptions& options = {});
Report solve_with_restarts(const Instance& inst, const EngineOptions& options = {});

}  // namespace lagro
