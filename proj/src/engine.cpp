#include "lagro/engine.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <utility>

#include "lagro/error.hpp"
#include "lagro/multiplier.hpp"
#include "lagro/rational.hpp"

namespace lagro {

namespace {

using Terms = std::vector<std::pair<std::size_t, Scalar>>;

void require_nonempty(const std::vector<Vec>& D, const char* who) {
  if (D.empty()) throw InputError(std::string(who) + ": D must not be empty");
}

Vec yd_part(const ProblemData& data, const Vec& y) {
  return Vec(y.begin() + static_cast<std::ptrdiff_t>(data.nc2), y.end());
}

bool contains(const std::vector<Vec>& set, const Vec& v) { return std::find(set.begin(), set.end(), v) != set.end(); }

std::size_t index_of(const std::vector<Vec>& set, const Vec& v) {
  const auto it = std::find(set.begin(), set.end(), v);
  if (it == set.end()) throw InputError("scenario is not an element of Xi");
  return static_cast<std::size_t>(it - set.begin());
}

// Value of a maximisation LP.
ExtValue max_value(const SolveOutcome& out, const Scalar& constant) {
  switch (out.status) {
    case SolveStatus::Optimal:
      return Scalar(out.objective + constant);
    case SolveStatus::Unbounded:
      return ExtValue::pos_inf();
    case SolveStatus::Infeasible:
      break;
  }
  return ExtValue::neg_inf();
}

// h0 - T x - W_d y_d.
Vec reduced_rhs(const ProblemData& g, const Vec& x, const Vec& yd) {
  Vec r = subtract(g.h0, multiply(g.T, x));
  if (g.nd2 > 0) r = subtract(r, multiply(g.Wd, yd));
  return r;
}

Scalar sum(const Vec& v) {
  Scalar s = 0;
  for (const auto& e : v) s += e;
  return s;
}

struct BlockLp {
  LinearProgram lp;
  Scalar constant;
};

// Variables (mu, beta); objective excludes the constant.
BlockLp lagrangian_bound_block(const GeneralInstance& g, const Vec& x, const Vec& xi, const Vec& yd, int tau,
                       const Scalar& lambda) {
  LpBuilder b(ObjectiveSense::Maximize);
  const Vec r = reduced_rhs(g, x, yd);
  for (std::size_t i = 0; i < g.m; ++i) b.add_variable(r[i], Scalar(0), tau == 0 ? Bound(Scalar(1)) : Bound());
  for (std::size_t j = 0; j < g.np; ++j) b.add_variable(Scalar(-1), Scalar(0), Bound());
  const Vec dc = g.dc(xi);
  for (std::size_t c = 0; c < g.nc2; ++c) {
    Terms t;
    for (std::size_t i = 0; i < g.m; ++i)
      if (g.Wc(i, c) != 0) t.emplace_back(i, g.Wc(i, c));
    b.add_row(t, RowSense::LessEqual, tau * dc[c]);
  }
  for (std::size_t j = 0; j < g.np; ++j) {
    Terms t;
    for (std::size_t i = 0; i < g.m; ++i)
      if (g.H(i, j) != 0) t.emplace_back(i, -g.H(i, j));
    t.emplace_back(g.m + j, Scalar(-1));
    b.add_row(t, RowSense::LessEqual, lambda * (1 - 2 * xi[j]));
  }
  Scalar constant = lambda * sum(xi);
  if (tau == 1) {
    constant += dot(g.c(xi), x);
    if (g.nd2 > 0) constant += dot(g.dd(xi), yd);
  }
  return {b.build(), constant};
}

// Variables (mu, rho) with rho free; `cap` bounds the block value from above.
BlockLp restricted_block(const GeneralInstance& g, const Vec& x, const Vec& xi, const Vec& yd,
                        const std::optional<Scalar>& cap = std::nullopt) {
  LpBuilder b(ObjectiveSense::Maximize);
  const Vec r = reduced_rhs(g, x, yd);
  for (std::size_t i = 0; i < g.m; ++i) b.add_variable(r[i], Scalar(0), Bound());
  for (std::size_t j = 0; j < g.np; ++j) b.add_variable(Scalar(1), Bound(), xi[j] == 0 ? Bound(Scalar(0)) : Bound());
  const Vec dc = g.dc(xi);
  for (std::size_t c = 0; c < g.nc2; ++c) {
    Terms t;
    for (std::size_t i = 0; i < g.m; ++i)
      if (g.Wc(i, c) != 0) t.emplace_back(i, g.Wc(i, c));
    b.add_row(t, RowSense::LessEqual, dc[c]);
  }
  for (std::size_t j = 0; j < g.np; ++j) {
    if (xi[j] == 0) continue;
    Terms t;
    for (std::size_t i = 0; i < g.m; ++i)
      if (g.H(i, j) != 0) t.emplace_back(i, -g.H(i, j));
    t.emplace_back(g.m + j, Scalar(1));
    b.add_row(t, RowSense::LessEqual, Scalar(0));
  }
  Scalar constant = dot(g.c(xi), x);
  if (g.nd2 > 0) constant += dot(g.dd(xi), yd);
  if (cap) {
    Terms t;
    for (std::size_t i = 0; i < g.m; ++i)
      if (r[i] != 0) t.emplace_back(i, r[i]);
    for (std::size_t j = 0; j < g.np; ++j) t.emplace_back(g.m + j, Scalar(1));
    b.add_row(t, RowSense::LessEqual, *cap - constant);
  }
  return {b.build(), constant};
}

Vec head(const Vec& v, std::size_t from, std::size_t n) {
  return Vec(v.begin() + static_cast<std::ptrdiff_t>(from), v.begin() + static_cast<std::ptrdiff_t>(from + n));
}

// w_i(xi): number of indicator sets switched on by xi that contain row i.
Vec row_weights(const IndicatorInstance& g, const Vec& xi) {
  Vec w(g.m, Scalar(0));
  for (std::size_t j = 0; j < g.np; ++j) {
    for (std::size_t i : xi[j] == 1 ? g.I1[j] : g.I0[j]) w[i] += 1;
  }
  return w;
}

void require_continuous(const IndicatorInstance& inst, const char* who) {
  if (inst.nd2 != 0) {
    throw InputError(std::string(who) + ": the indicator-constrained engine needs a continuous second stage (nd2 = 0)");
  }
}

// max c(xi)'x + (h0 - T x)'psi s.t. W'psi <= d(xi), psi >= -lambda w(xi):
// the LP dual of L_I(x, xi, lambda) for a continuous second stage.
struct PsiSolve {
  ExtValue value;
  Vec psi;
  bool ray = false;
};

PsiSolve solve_psi(const IndicatorInstance& g, const Vec& x, const Vec& xi, const Scalar& lambda) {
  LpBuilder b(ObjectiveSense::Maximize);
  const Vec r = subtract(g.h0, multiply(g.T, x));
  const Vec w = row_weights(g, xi);
  for (std::size_t i = 0; i < g.m; ++i) b.add_variable(r[i], Scalar(-lambda * w[i]), Bound());
  const Vec dc = g.dc(xi);
  for (std::size_t c = 0; c < g.nc2; ++c) {
    Terms t;
    for (std::size_t i = 0; i < g.m; ++i)
      if (g.Wc(i, c) != 0) t.emplace_back(i, g.Wc(i, c));
    b.add_row(t, RowSense::LessEqual, dc[c]);
  }
  const SolveOutcome out = solve_lp(b.build());
  PsiSolve s;
  s.value = max_value(out, dot(g.c(xi), x));
  if (out.status == SolveStatus::Optimal) s.psi = out.primal;
  if (out.status == SolveStatus::Unbounded) {
    s.psi = *out.ray;
    s.ray = true;
  }
  return s;
}

bool gap_closed(const ExtValue& ub, const ExtValue& lb, const Scalar& eps) {
  if (ub.is_neg_inf() || lb.is_pos_inf()) return true;
  if (ub.is_pos_inf() || lb.is_neg_inf()) return false;
  return ub.value() - lb.value() <= eps;
}

template <class Inst>
Scalar default_lambda0(const Inst& inst) {
  try {
    const UpperLower ul = compute_u_l(inst, inst.X.front());
    return std::max(Scalar(1), Scalar(ul.u - ul.l));
  } catch (const InfeasibleError&) {
  } catch (const ConditionViolation&) {
  }
  return 1;
}

// min over X of max over the scenarios in R, memoised across iterations.
template <class Inst, class Eval>
class CachedMaster {
 public:
  CachedMaster(const Inst& inst, Eval eval) : inst_(inst), eval_(std::move(eval)) {}

  MasterResult solve(const std::vector<std::size_t>& R) {
    MasterResult best{ExtValue::pos_inf(), {}, 0};
    bool found = false;
    for (std::size_t k = 0; k < inst_.X.size(); ++k) {
      ExtValue worst = ExtValue::neg_inf();
      for (std::size_t s : R) {
        worst = std::max(worst, value(k, s));
        if (worst.is_pos_inf()) break;
      }
      if (worst.is_pos_inf()) continue;
      if (!found || worst < best.value) best = {worst, inst_.X[k], k};
      found = true;
    }
    return best;
  }

  const ExtValue& value(std::size_t k, std::size_t s) {
    auto it = cache_.find({k, s});
    if (it == cache_.end()) it = cache_.emplace(std::make_pair(k, s), eval_(inst_, inst_.X[k], inst_.Xi[s])).first;
    return it->second;
  }

 private:
  const Inst& inst_;
  Eval eval_;
  std::map<std::pair<std::size_t, std::size_t>, ExtValue> cache_;
};

class Clock {
 public:
  [[nodiscard]] double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

struct Run {
  Run(const EngineOptions& o, Scalar l) : opt(o), lambda(std::move(l)) {}

  const EngineOptions& opt;
  Report rep;
  Scalar lambda;
  ExtValue ub = ExtValue::pos_inf();
  Clock clock;

  void emit(const char* kind, const ExtValue& lb, std::size_t d_size, std::size_t r_size, std::size_t cuts = 0) const {
    if (!opt.trace) return;
    TraceEvent e;
    e.kind = kind;
    e.iteration = rep.iterations;
    e.restarts = rep.n_restarts;
    e.lambda = lambda;
    e.lb = lb;
    e.ub = ub;
    e.d_size = d_size;
    e.r_size = r_size;
    e.cuts = cuts;
    opt.trace(e);
  }

  void next_outer() {
    if (++rep.iterations > opt.max_outer) {
      throw LimitExceeded("outer iteration cap " + std::to_string(opt.max_outer) + " exceeded (lambda = " +
                          to_string(lambda) + ", UB = " + ub.str() + ", restarts = " +
                          std::to_string(rep.n_restarts) + ")");
    }
  }

  void next_restart() {
    if (++rep.n_restarts > opt.max_restarts) {
      throw LimitExceeded("restart cap " + std::to_string(opt.max_restarts) + " exceeded (lambda = " +
                          to_string(lambda) + ", UB = " + ub.str() + ")");
    }
  }

  Report finish(const ExtValue& lb, std::size_t d_size, std::size_t r_size, std::size_t cuts = 0) {
    rep.value = ub;
    rep.lambda = lambda;
    rep.seconds = clock.seconds();
    emit("done", lb, d_size, r_size, cuts);
    return rep;
  }
};

template <class Inst>
Scalar initial_lambda(const EngineOptions& opt, const Inst& inst) {
  const Scalar l = opt.lambda0 ? *opt.lambda0 : default_lambda0(inst);
  if (l <= 0) throw InputError("lambda0 must be positive, got " + to_string(l));
  return l;
}

struct Verification {
  ExtValue z;
  Vec xi;
  Scalar lambda_bar;
};

// Restricted worst case at x with D enlarged until its value is attained by Q(x, xi).
Verification verify_general(const GeneralInstance& inst, const Mat& folded_H, const Vec& x, std::vector<Vec>& D) {
  for (;;) {
    const RestrictedWorstCase r = solve_restricted_worst_case(inst, x, D);
    const RecourseSolution q = solve_Q(inst, x, r.xi);
    if (q.value < r.value) {
      Vec yd = yd_part(inst, q.y);
      if (contains(D, yd)) throw std::logic_error("verification: restricted value above Q with y_d already in D");
      D.push_back(std::move(yd));
      continue;
    }
    Verification v{r.value, r.xi, Scalar(0)};
    if (r.value.is_finite()) v.lambda_bar = restricted_multiplier(r.mu, r.rho, folded_H);
    return v;
  }
}

}  // namespace

LagrangianBound solve_lagrangian_bound(const GeneralInstance& inst, const Vec& x, const std::vector<Vec>& D, int tau,
                               const Scalar& lambda) {
  require_nonempty(D, "solve_lagrangian_bound");
  if (tau != 0 && tau != 1) throw InputError("solve_lagrangian_bound: tau must be 0 or 1");
  if (lambda < 0) throw DomainError("solve_lagrangian_bound: lambda must be >= 0");
  const GeneralInstance g = fold_yc_bounds(inst);
  LagrangianBound best;
  for (std::size_t s = 0; s < g.Xi.size(); ++s) {
    const Vec& xi = g.Xi[s];
    ExtValue value = ExtValue::pos_inf();
    std::vector<BoundBlock> blocks;
    for (const Vec& yd : D) {
      const BlockLp blp = lagrangian_bound_block(g, x, xi, yd, tau, lambda);
      const SolveOutcome out = solve_lp(blp.lp);
      BoundBlock blk;
      blk.value = max_value(out, blp.constant);
      if (out.status == SolveStatus::Optimal) {
        blk.mu = head(out.primal, 0, g.m);
        blk.beta = head(out.primal, g.m, g.np);
      }
      value = std::min(value, blk.value);
      blocks.push_back(std::move(blk));
    }
    if (s == 0 || value > best.value) {
      best.value = value;
      best.xi = xi;
      best.xi_index = s;
      best.blocks = std::move(blocks);
    }
  }
  return best;
}

InnerOutcome ccg_inner(const GeneralInstance& inst, const Vec& x, const Scalar& lambda0, const Scalar& eps,
                       std::vector<Vec> D, std::size_t max_iterations) {
  if (lambda0 <= 0) throw InputError("ccg_inner: lambda0 must be positive, got " + to_string(lambda0));
  InnerOutcome out;
  out.xi = inst.Xi.front();
  out.lambda = lambda0;
  out.lb = ExtValue::neg_inf();
  out.ub = ExtValue::pos_inf();
  out.D = std::move(D);
  auto tick = [&] {
    if (++out.iterations > max_iterations) {
      throw LimitExceeded("inner iteration cap " + std::to_string(max_iterations) + " exceeded (lambda = " +
                          to_string(out.lambda) + ", LB = " + out.lb.str() + ", UB = " + out.ub.str() +
                          ", |D| = " + std::to_string(out.D.size()) + ")");
    }
  };
  auto add_yd = [&](const Vec& y) {
    Vec yd = yd_part(inst, y);
    if (!contains(out.D, yd)) out.D.push_back(std::move(yd));
  };

  do {
    tick();
    if (!out.D.empty()) {
      const LagrangianBound r = solve_lagrangian_bound(inst, x, out.D, 0, Scalar(1));
      out.ub = r.value;
      out.xi = r.xi;
    }
    const RecourseSolution s = solve_slack(inst, x, out.xi);
    add_yd(s.y);
    out.lb = s.value;
  } while (!(out.lb > ExtValue(0)) && out.ub != ExtValue(0));
  if (out.lb > ExtValue(0)) {
    out.infeasible = true;
    return out;
  }

  out.lb = ExtValue::neg_inf();
  Scalar lambda = lambda0;
  do {
    lambda /= 2;
    RecourseSolution l;
    Vec xi;
    do {
      tick();
      lambda *= 2;
      out.lambda = lambda;
      out.lambda_trajectory.push_back(lambda);
      const LagrangianBound r = solve_lagrangian_bound(inst, x, out.D, 1, lambda);
      out.ub = r.value;
      xi = r.xi;
      l = solve_L(inst, x, xi, lambda);
      if (!l.value.is_finite()) {
        throw ConditionViolation("ccg_inner: Lagrangian value " + l.value.str() + " at a robust-feasible x");
      }
      add_yd(l.y);
    } while (penalty_phi(l.z, xi) != 0);
    Scalar attained = dot(inst.c(xi), x) + dot(inst.dc(xi), head(l.y, 0, inst.nc2));
    if (inst.nd2 > 0) attained += dot(inst.dd(xi), yd_part(inst, l.y));
    if (out.lb < ExtValue(attained)) {
      out.lb = attained;
      out.xi = xi;
    }
  } while (!gap_closed(out.ub, out.lb, eps));
  return out;
}

IndicatorWorstCase solve_indicator_worst_case(const IndicatorInstance& inst, const Vec& x) {
  require_continuous(inst, "solve_indicator_worst_case");
  const IndicatorInstance g = fold_yc_bounds(inst);
  const std::size_t m = g.m, np = g.np;
  const Vec r = subtract(g.h0, multiply(g.T, x));
  IndicatorWorstCase best;
  for (std::size_t s = 0; s < g.Xi.size(); ++s) {
    const Vec& xi = g.Xi[s];
    // psi = P (mu, rho, nu)
    Mat P(m, m + 2 * np);
    for (std::size_t i = 0; i < m; ++i) P(i, i) = 1;
    for (std::size_t j = 0; j < np; ++j) {
      for (std::size_t i : g.I1[j]) P(i, m + j) -= 1;
      for (std::size_t i : g.I0[j]) P(i, m + np + j) -= 1;
    }
    const Vec cost = multiply_transposed(P, r);
    LpBuilder b(ObjectiveSense::Maximize);
    for (std::size_t i = 0; i < m; ++i) b.add_variable(cost[i], Scalar(0), Bound());
    for (std::size_t j = 0; j < np; ++j)
      b.add_variable(cost[m + j], Scalar(0), xi[j] == 0 ? Bound(Scalar(0)) : Bound());
    for (std::size_t j = 0; j < np; ++j)
      b.add_variable(cost[m + np + j], Scalar(0), xi[j] == 1 ? Bound(Scalar(0)) : Bound());
    const Vec dc = g.dc(xi);
    for (std::size_t c = 0; c < g.nc2; ++c) {
      Vec coeff(m + 2 * np, Scalar(0));
      for (std::size_t i = 0; i < m; ++i) {
        if (g.Wc(i, c) == 0) continue;
        for (std::size_t v = 0; v < m + 2 * np; ++v) coeff[v] += g.Wc(i, c) * P(i, v);
      }
      Terms t;
      for (std::size_t v = 0; v < coeff.size(); ++v)
        if (coeff[v] != 0) t.emplace_back(v, coeff[v]);
      b.add_row(t, RowSense::LessEqual, dc[c]);
    }
    const SolveOutcome out = solve_lp(b.build());
    const ExtValue value = max_value(out, dot(g.c(xi), x));
    if (s == 0 || value > best.value) {
      best.value = value;
      best.xi = xi;
      best.xi_index = s;
      if (out.status == SolveStatus::Optimal) {
        best.mu = head(out.primal, 0, m);
        best.rho = head(out.primal, m, np);
        best.nu = head(out.primal, m + np, np);
      } else {
        best.mu.clear();
        best.rho.clear();
        best.nu.clear();
      }
    }
  }
  return best;
}

Scalar indicator_multiplier(const Vec& rho, const Vec& nu) { return std::max(max_abs_norm(rho), max_abs_norm(nu)); }

RestrictedWorstCase solve_restricted_worst_case(const GeneralInstance& inst, const Vec& x, const std::vector<Vec>& D) {
  require_nonempty(D, "solve_restricted_worst_case");
  const GeneralInstance g = fold_yc_bounds(inst);
  RestrictedWorstCase best;
  std::vector<SolveOutcome> best_blocks;
  for (std::size_t s = 0; s < g.Xi.size(); ++s) {
    const Vec& xi = g.Xi[s];
    ExtValue value = ExtValue::pos_inf();
    std::vector<SolveOutcome> blocks;
    for (const Vec& yd : D) {
      const BlockLp blp = restricted_block(g, x, xi, yd);
      blocks.push_back(solve_lp(blp.lp));
      value = std::min(value, max_value(blocks.back(), blp.constant));
    }
    if (s == 0 || value > best.value) {
      best.value = value;
      best.xi = xi;
      best.xi_index = s;
      best_blocks = std::move(blocks);
    }
  }
  if (!best.value.is_finite()) return best;
  for (std::size_t k = 0; k < D.size(); ++k) {
    SolveOutcome out = best_blocks[k];
    if (out.status == SolveStatus::Unbounded) {
      out = solve_lp(restricted_block(g, x, best.xi, D[k], best.value.value()).lp);
    }
    best.mu.push_back(head(out.primal, 0, g.m));
    best.rho.push_back(head(out.primal, g.m, g.np));
  }
  return best;
}

Scalar restricted_multiplier(const std::vector<Vec>& mu, const std::vector<Vec>& rho, const Mat& H) {
  if (mu.size() != rho.size()) throw InputError("restricted_multiplier: mu and rho block counts differ");
  Scalar best = 0;
  for (std::size_t k = 0; k < mu.size(); ++k) {
    best = std::max(best, max_abs_norm(rho[k]));
    best = std::max(best, max_abs_norm(multiply_transposed(H, mu[k])));
  }
  return best;
}

MasterResult ccg_master(const GeneralInstance& inst, const std::vector<Vec>& R) {
  std::vector<std::size_t> idx;
  for (const Vec& xi : R) idx.push_back(index_of(inst.Xi, xi));
  CachedMaster master(inst, [](const GeneralInstance& g, const Vec& x, const Vec& xi) { return eval_Q(g, x, xi); });
  return master.solve(idx);
}

MasterResult ccg_master(const IndicatorInstance& inst, const std::vector<Vec>& R) {
  std::vector<std::size_t> idx;
  for (const Vec& xi : R) idx.push_back(index_of(inst.Xi, xi));
  CachedMaster master(inst, [](const IndicatorInstance& g, const Vec& x, const Vec& xi) { return eval_QI(g, x, xi); });
  return master.solve(idx);
}

MasterResult benders_master(const IndicatorInstance& original, const BendersState& state) {
  const IndicatorInstance inst = fold_yc_bounds(original);
  MasterResult best{ExtValue::pos_inf(), {}, 0};
  bool found = false;
  for (std::size_t k = 0; k < inst.X.size(); ++k) {
    const Vec& x = inst.X[k];
    const Vec r = subtract(inst.h0, multiply(inst.T, x));
    bool excluded = contains(state.excluded, x);
    ExtValue theta = ExtValue::neg_inf();
    for (const BendersCut& cut : state.cuts) {
      if (excluded) break;
      if (cut.feasibility) {
        excluded = dot(r, cut.psi) > 0;
      } else {
        theta = std::max(theta, ExtValue(Scalar(dot(inst.c(cut.xi), x) + dot(r, cut.psi))));
      }
    }
    if (excluded) continue;
    if (!found || theta < best.value) best = {theta, x, k};
    found = true;
  }
  return best;
}

Report solve_with_restarts(const GeneralInstance& inst, const EngineOptions& options) {
  inst.validate();
  if (options.method == Method::Benders) {
    throw InputError("Benders decomposition is only available for indicator-constrained instances");
  }
  Run run(options, initial_lambda(options, inst));
  const Mat folded_H = fold_yc_bounds(inst).H;
  CachedMaster master(inst, [](const GeneralInstance& g, const Vec& x, const Vec& xi) { return eval_Q(g, x, xi); });
  std::vector<std::size_t> R;
  std::vector<Vec> D;
  std::size_t inner_budget = options.max_inner;
  for (;;) {
    run.next_outer();
    const MasterResult m = master.solve(R);
    run.emit("master", m.value, D.size(), R.size());
    if (m.value.is_pos_inf()) {
      run.rep.verified = true;
      run.ub = ExtValue::pos_inf();
      run.rep.x.clear();
      for (std::size_t s : R) {
        if (master.value(0, s).is_pos_inf()) {
          run.rep.witness = inst.Xi[s];
          break;
        }
      }
      return run.finish(m.value, D.size(), R.size());
    }

    InnerOutcome in = ccg_inner(inst, m.x, run.lambda, options.eps, std::move(D), inner_budget);
    inner_budget -= in.iterations;
    run.rep.inner_iterations += in.iterations;
    D = std::move(in.D);
    const std::size_t s = index_of(inst.Xi, in.xi);
    if (std::find(R.begin(), R.end(), s) == R.end()) R.push_back(s);
    if (!in.infeasible) {
      run.lambda = in.lambda;
      if (in.ub < run.ub) {
        run.ub = in.ub;
        run.rep.x = m.x;
        run.rep.x_index = m.x_index;
      }
    }
    run.emit("inner", m.value, D.size(), R.size());
    if (!gap_closed(run.ub, m.value, options.eps)) continue;

    const Verification v = verify_general(inst, folded_H, run.rep.x, D);
    run.emit("verify", v.z, D.size(), R.size());
    if (run.ub < v.z) {
      run.next_restart();
      if (v.z.is_pos_inf()) {
        const std::size_t w = index_of(inst.Xi, v.xi);
        if (std::find(R.begin(), R.end(), w) == R.end()) R.push_back(w);
        run.rep.x.clear();
      } else if (v.lambda_bar > 0) {
        run.lambda = v.lambda_bar;
      }
      run.ub = v.z;
      run.emit("restart", m.value, D.size(), R.size());
      continue;
    }
    run.rep.verified = true;
    return run.finish(m.value, D.size(), R.size());
  }
}

Report solve_with_restarts(const IndicatorInstance& original, const EngineOptions& options) {
  original.validate();
  require_continuous(original, "solve_with_restarts");
  const IndicatorInstance inst = fold_yc_bounds(original);
  Run run(options, initial_lambda(options, original));
  std::vector<std::size_t> R;
  BendersState cuts;
  CachedMaster master(inst, [](const IndicatorInstance& g, const Vec& x, const Vec& xi) { return eval_QI(g, x, xi); });
  const bool benders = options.method == Method::Benders;

  auto regenerate_cuts = [&] {
    for (BendersCut& cut : cuts.cuts) {
      if (cut.feasibility) continue;
      const PsiSolve p = solve_psi(inst, cut.x_generated, cut.xi, run.lambda);
      cut.psi = p.psi;
      cut.feasibility = p.ray;
      cut.lambda = run.lambda;
    }
  };

  for (;;) {
    run.next_outer();
    const MasterResult m = benders ? benders_master(inst, cuts) : master.solve(R);
    run.emit("master", m.value, 0, R.size(), cuts.cuts.size());
    if (m.value.is_pos_inf()) {
      run.rep.verified = true;
      run.ub = ExtValue::pos_inf();
      run.rep.x.clear();
      for (const Vec& xi : inst.Xi) {
        if (eval_QI(inst, inst.X.front(), xi).is_pos_inf()) {
          run.rep.witness = xi;
          break;
        }
      }
      return run.finish(m.value, 0, R.size(), cuts.cuts.size());
    }

    if (++run.rep.inner_iterations > options.max_inner) {
      throw LimitExceeded("inner iteration cap " + std::to_string(options.max_inner) + " exceeded");
    }
    ExtValue ub_x = ExtValue::neg_inf();
    std::size_t worst = 0;
    PsiSolve worst_psi;
    for (std::size_t s = 0; s < inst.Xi.size(); ++s) {
      PsiSolve p = benders ? solve_psi(inst, m.x, inst.Xi[s], run.lambda) : PsiSolve{eval_LI(inst, m.x, inst.Xi[s], run.lambda), {}, false};
      if (s == 0 || p.value > ub_x) {
        ub_x = p.value;
        worst = s;
        worst_psi = std::move(p);
      }
    }
    if (benders) {
      cuts.cuts.push_back({inst.Xi[worst], m.x, worst_psi.ray, worst_psi.psi, run.lambda});
      auto& bucket = worst_psi.ray ? cuts.F : cuts.O;
      if (!contains(bucket, inst.Xi[worst])) bucket.push_back(inst.Xi[worst]);
    } else if (std::find(R.begin(), R.end(), worst) == R.end()) {
      R.push_back(worst);
    }
    if (ub_x < run.ub) {
      run.ub = ub_x;
      run.rep.x = m.x;
      run.rep.x_index = m.x_index;
    }
    run.emit("inner", m.value, 0, R.size(), cuts.cuts.size());
    if (!gap_closed(run.ub, m.value, options.eps)) continue;

    const IndicatorWorstCase v = solve_indicator_worst_case(inst, run.rep.x);
    run.emit("verify", v.value, 0, R.size(), cuts.cuts.size());
    if (run.ub < v.value) {
      run.next_restart();
      if (v.value.is_pos_inf()) {
        if (benders) {
          cuts.excluded.push_back(run.rep.x);
        } else {
          const std::size_t w = v.xi_index;
          if (std::find(R.begin(), R.end(), w) == R.end()) R.push_back(w);
        }
        run.rep.x.clear();
      } else {
        const Scalar bar = indicator_multiplier(v.rho, v.nu);
        if (bar > 0) run.lambda = bar;
        if (benders) regenerate_cuts();
      }
      run.ub = v.value;
      run.emit("restart", m.value, 0, R.size(), cuts.cuts.size());
      continue;
    }
    run.rep.verified = true;
    return run.finish(m.value, 0, R.size(), cuts.cuts.size());
  }
}

Report solve_with_restarts(const Instance& inst, const EngineOptions& options) {
  return std::visit([&](const auto& i) { return solve_with_restarts(i, options); }, inst);
}

}  // namespace lagro
