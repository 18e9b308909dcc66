#include "lagro/multiplier.hpp"

#include <algorithm>
#include <sstream>

#include "lagro/error.hpp"
#include "lagro/kernel.hpp"
#include "lagro/lp.hpp"
#include "lagro/oracle.hpp"

namespace lagro {

namespace {

std::string entry_name(const char* name, std::size_t i, std::size_t j, const Scalar& v) {
  std::ostringstream os;
  os << name << "[" << i << "][" << j << "] = " << to_string(v);
  return os.str();
}

std::string entry_name(const char* name, std::size_t i, const Scalar& v) {
  std::ostringstream os;
  os << name << "[" << i << "] = " << to_string(v);
  return os.str();
}

// Returns a description of the first non-integral entry, or "" when integral.
std::string first_fraction(const char* name, const Mat& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!is_integer(m(i, j))) return entry_name(name, i, j, m(i, j));
  return {};
}

std::string first_fraction(const char* name, const Vec& v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!is_integer(v[i])) return entry_name(name, i, v[i]);
  return {};
}

std::string first_nonzero(const char* name, const Vec& v) {
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) return entry_name(name, i, v[i]);
  return {};
}

ConditionResult integral_points(const std::vector<Vec>& X) {
  ConditionResult r{"X is integral", true, {}};
  for (std::size_t k = 0; k < X.size(); ++k) {
    const std::string w = first_fraction("x", X[k]);
    if (!w.empty()) {
      r.passed = false;
      r.witness = "point " + std::to_string(k) + ": " + w;
      break;
    }
  }
  return r;
}

ConditionResult integral_data(const char* name, const std::vector<std::pair<const char*, const Mat*>>& mats,
                              const std::vector<std::pair<const char*, const Vec*>>& vecs) {
  ConditionResult r{name, true, {}};
  for (const auto& [n, m] : mats) {
    r.witness = first_fraction(n, *m);
    if (!r.witness.empty()) break;
  }
  if (r.witness.empty()) {
    for (const auto& [n, v] : vecs) {
      r.witness = first_fraction(n, *v);
      if (!r.witness.empty()) break;
    }
  }
  r.passed = r.witness.empty();
  return r;
}

Vec finite_yc_upper(const ProblemData& d) {
  Vec out;
  for (const auto& u : d.yc_upper)
    if (u) out.push_back(*u);
  return out;
}

ConditionResult unimodular(const char* name, const Mat& m) {
  ConditionResult r{name, true, {}};
  for (std::size_t i = 0; i < m.rows() && r.passed; ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const Scalar& v = m(i, j);
      if (v != 0 && v != 1 && v != -1) {
        r.passed = false;
        r.witness = entry_name("entry", i, j, v) + " is outside {-1, 0, 1}";
        break;
      }
    }
  }
  if (r.passed && !is_totally_unimodular(m)) {
    r.passed = false;
    r.witness = "a square submatrix has determinant outside {-1, 0, 1}";
  }
  return r;
}

ConditionReport finish(std::vector<ConditionResult> conditions) {
  ConditionReport rep;
  rep.conditions = std::move(conditions);
  rep.overall = std::all_of(rep.conditions.begin(), rep.conditions.end(), [](const auto& c) { return c.passed; });
  return rep;
}

template <class Worst>
UpperLower upper_lower(const ProblemData& d, const Vec& x, Worst&& worst) {
  const ExtValue u = worst().value;
  if (!u.is_finite()) throw InfeasibleError("compute_u_l: worst-case second-stage value at x is " + u.str());
  std::optional<Scalar> l;
  for (const Vec& xi : d.Xi) {
    Scalar v = dot(d.c(xi), x);
    const Vec dc = d.dc(xi);
    for (std::size_t j = 0; j < d.nc2; ++j) {
      if (dc[j] >= 0) continue;
      if (!d.yc_upper[j]) throw ConditionViolation("compute_u_l: no finite lower bound, y_c[" + std::to_string(j) +
                                                   "] is unbounded with negative cost");
      v += dc[j] * *d.yc_upper[j];
    }
    const Vec dd = d.dd(xi);
    for (std::size_t j = 0; j < d.nd2; ++j) v += std::min(dd[j] * d.yd_lower[j], dd[j] * d.yd_upper[j]);
    if (!l || v < *l) l = v;
  }
  return {u.value(), *l};
}

// Range of y_c over {y_c in [0, yc_upper] : Wc y_c >= rhs}; empty when infeasible.
struct YcRange {
  bool feasible = false;
  std::vector<Bound> lo, hi;
};

YcRange yc_range(const ProblemData& d, const Vec& rhs) {
  YcRange out;
  auto build = [&](std::size_t j, ObjectiveSense sense) {
    LpBuilder b(sense);
    for (std::size_t k = 0; k < d.nc2; ++k) b.add_variable(k == j ? Scalar(1) : Scalar(0), Scalar(0), d.yc_upper[k]);
    for (std::size_t i = 0; i < d.m; ++i) {
      std::vector<std::pair<std::size_t, Scalar>> terms;
      for (std::size_t k = 0; k < d.nc2; ++k)
        if (d.Wc(i, k) != 0) terms.emplace_back(k, d.Wc(i, k));
      b.add_row(terms, RowSense::GreaterEqual, rhs[i]);
    }
    return solve_lp(b.build());
  };
  if (d.nc2 == 0) {
    out.feasible = std::all_of(rhs.begin(), rhs.end(), [](const Scalar& s) { return s <= 0; });
    return out;
  }
  for (std::size_t j = 0; j < d.nc2; ++j) {
    const SolveOutcome mn = build(j, ObjectiveSense::Minimize);
    if (mn.status == SolveStatus::Infeasible) return out;
    out.feasible = true;
    out.lo.emplace_back(mn.objective);
    const SolveOutcome mx = build(j, ObjectiveSense::Maximize);
    out.hi.push_back(mx.status == SolveStatus::Unbounded ? Bound() : Bound(mx.objective));
  }
  return out;
}

ConditionResult y_inside_box(const GeneralInstance& g) {
  ConditionResult r{"second-stage feasible y lies in [y^l, y^u]", true, {}};
  const BoxBounds& b = *g.bounds;
  check_enumerable(g, g.X.size());
  const auto yds = enumerate_yd(g);
  for (const Vec& x : g.X) {
    const Vec tx = multiply(g.T, x);
    for (const Vec& xi : g.Xi) {
      const Vec hx = add(g.h0, multiply(g.H, xi));
      for (const Vec& yd : yds) {
        const Vec rhs = subtract(subtract(hx, tx), multiply(g.Wd, yd));
        const YcRange range = yc_range(g, rhs);
        if (!range.feasible) continue;
        for (std::size_t j = 0; j < g.nd2; ++j) {
          if (yd[j] < b.y_lower[g.nc2 + j] || yd[j] > b.y_upper[g.nc2 + j]) {
            r.passed = false;
            r.witness = "feasible " + entry_name("y_d", j, yd[j]) + " is outside its box";
            return r;
          }
        }
        for (std::size_t j = 0; j < g.nc2; ++j) {
          if (!range.hi[j] || *range.hi[j] > b.y_upper[j] || *range.lo[j] < b.y_lower[j]) {
            r.passed = false;
            r.witness = "feasible y_c[" + std::to_string(j) + "] leaves its box";
            return r;
          }
        }
      }
    }
  }
  return r;
}

ExtValue interval_upper_bound(const GeneralInstance& g) {
  const BoxBounds& b = *g.bounds;
  ExtValue best = ExtValue::pos_inf();
  for (const Vec& x : g.X) {
    if (worst_case_Q(g, x).value.is_pos_inf()) continue;
    std::optional<Scalar> worst;
    for (const Vec& xi : g.Xi) {
      Scalar v = dot(g.c(xi), x);
      Vec d = g.dc(xi);
      const Vec dd = g.dd(xi);
      d.insert(d.end(), dd.begin(), dd.end());
      for (std::size_t j = 0; j < d.size(); ++j) v += std::max(d[j] * b.y_lower[j], d[j] * b.y_upper[j]);
      if (!worst || v > *worst) worst = v;
    }
    best = std::min(best, ExtValue(*worst));
  }
  return best;
}

}  // namespace

ConditionReport check_conditions_general(const GeneralInstance& inst) {
  inst.validate();
  const Vec u = finite_yc_upper(inst);
  return finish({
      integral_points(inst.X),
      integral_data("T, W, h0, H and y_c bounds are integral",
                    {{"T", &inst.T}, {"Wc", &inst.Wc}, {"Wd", &inst.Wd}, {"H", &inst.H}},
                    {{"h0", &inst.h0}, {"yc_upper", &u}}),
      unimodular("[Wc -H] is totally unimodular", inst.Wc.joined(inst.H.negated())),
  });
}

ConditionReport check_conditions_indicator(const IndicatorInstance& inst) {
  inst.validate();
  const Vec u = finite_yc_upper(inst);
  return finish({
      integral_points(inst.X),
      integral_data("T, W, h0 and y_c bounds are integral", {{"T", &inst.T}, {"Wc", &inst.Wc}, {"Wd", &inst.Wd}},
                    {{"h0", &inst.h0}, {"yc_upper", &u}}),
      unimodular("Wc is totally unimodular", inst.Wc),
  });
}

UpperLower compute_u_l(const GeneralInstance& inst, const Vec& x) {
  return upper_lower(inst, x, [&] { return worst_case_Q(inst, x); });
}

UpperLower compute_u_l(const IndicatorInstance& inst, const Vec& x) {
  return upper_lower(inst, x, [&] { return worst_case_QI(inst, x); });
}

Scalar closed_form_multiplier(const Scalar& u, const Scalar& l) {
  if (u < l) throw InputError("closed_form_multiplier: u = " + to_string(u) + " is below l = " + to_string(l));
  return u - l;
}

GeneralInstance lift_homogeneous(const GeneralInstance& inst) {
  const GeneralInstance f = fold_yc_bounds(inst);
  GeneralInstance g = f;
  g.np = f.np + 1;
  Mat c0(f.n1, 1), dc0(f.nc2, 1), dd0(f.nd2, 1), h0(f.m, 1);
  for (std::size_t i = 0; i < f.n1; ++i) c0(i, 0) = f.c0[i];
  for (std::size_t i = 0; i < f.nc2; ++i) dc0(i, 0) = f.d0[i];
  for (std::size_t i = 0; i < f.nd2; ++i) dd0(i, 0) = f.d0[f.nc2 + i];
  for (std::size_t i = 0; i < f.m; ++i) h0(i, 0) = f.h0[i];
  g.C = f.C.joined(c0);
  g.Dc = f.Dc.joined(dc0);
  g.Dd = f.Dd.joined(dd0);
  g.H = f.H.joined(h0);
  g.c0.assign(f.n1, Scalar(0));
  g.d0.assign(f.n2(), Scalar(0));
  g.h0.assign(f.m, Scalar(0));
  g.xi_budget.reset();
  for (Vec& xi : g.Xi) xi.emplace_back(1);
  g.validate();
  return g;
}

ConditionReport check_bound_conditions(const GeneralInstance& inst) {
  inst.validate();
  ConditionResult box{"X is integral and inside [x^l, x^u]", true, {}};
  ConditionResult ybox{"second-stage feasible y lies in [y^l, y^u]", true, {}};
  if (!inst.bounds) {
    box = {box.name, false, "no bounds record"};
    ybox = {ybox.name, false, "no bounds record"};
  } else {
    const BoxBounds& b = *inst.bounds;
    box = integral_points(inst.X);
    box.name = "X is integral and inside [x^l, x^u]";
    for (std::size_t k = 0; k < inst.X.size() && box.passed; ++k) {
      for (std::size_t j = 0; j < inst.n1; ++j) {
        if (inst.X[k][j] < b.x_lower[j] || inst.X[k][j] > b.x_upper[j]) {
          box.passed = false;
          box.witness = "point " + std::to_string(k) + ": " + entry_name("x", j, inst.X[k][j]) + " is outside its box";
          break;
        }
      }
    }
    ybox = y_inside_box(inst);
  }
  ConditionResult homog{"c0, d0 and h0 vanish and y_c has no finite upper bound", true, {}};
  for (const std::string& w : {first_nonzero("c0", inst.c0), first_nonzero("d0", inst.d0),
                               first_nonzero("h0", inst.h0)}) {
    if (!w.empty() && homog.passed) {
      homog.passed = false;
      homog.witness = w;
    }
  }
  if (homog.passed) {
    for (std::size_t j = 0; j < inst.nc2; ++j) {
      if (inst.yc_upper[j]) {
        homog.passed = false;
        homog.witness = "yc_upper[" + std::to_string(j) + "] is finite";
        break;
      }
    }
  }
  ConditionResult ints = integral_data("C, D, T, W and H are integral",
                                       {{"C", &inst.C},
                                        {"Dc", &inst.Dc},
                                        {"Dd", &inst.Dd},
                                        {"T", &inst.T},
                                        {"Wc", &inst.Wc},
                                        {"Wd", &inst.Wd},
                                        {"H", &inst.H}},
                                       {});
  ConditionResult feas{"some x in X has a finite worst case", true, {}};
  if (solve_two_stage_bruteforce(inst).value.is_pos_inf()) {
    feas.passed = false;
    feas.witness = "every x in X is robust-infeasible";
  }
  return finish({box, ybox, homog, ints, feas});
}

BoundInputs polynomial_lambda_bound(const GeneralInstance& inst, UpperBoundSource source, bool lift) {
  inst.validate();
  BoundInputs out;
  out.source = source;
  GeneralInstance g = inst;
  ConditionReport rep = check_bound_conditions(g);
  const bool homogeneous_failed = !rep.conditions[2].passed;
  if (lift && homogeneous_failed) {
    g = lift_homogeneous(inst);
    out.lifted = true;
    rep = check_bound_conditions(g);
  }
  if (!rep.overall) {
    std::string msg = "polynomial_lambda_bound: conditions violated:";
    for (const auto& c : rep.conditions)
      if (!c.passed) msg += " [" + c.name + ": " + c.witness + "]";
    throw ConditionViolation(msg);
  }
  const ExtValue U =
      source == UpperBoundSource::BruteForce ? solve_two_stage_bruteforce(g).value : interval_upper_bound(g);
  out.U = U.value();

  const BoxBounds& b = *g.bounds;
  const Vec yd_lo(b.y_lower.begin() + static_cast<std::ptrdiff_t>(g.nc2), b.y_lower.end());
  const Vec yd_hi(b.y_upper.begin() + static_cast<std::ptrdiff_t>(g.nc2), b.y_upper.end());
  out.theta1 = std::max({max_abs_norm(b.x_lower), max_abs_norm(b.x_upper), max_abs_norm(yd_lo), max_abs_norm(yd_hi),
                         Scalar(1)});
  out.theta2 = std::max(Scalar(abs(out.U) + induced_inf_norm(g.C) + induced_inf_norm(g.Dd)), induced_inf_norm(g.Dc));
  out.theta3 = std::max({Scalar(induced_inf_norm(g.Wd) + induced_inf_norm(g.T)), max_abs_norm(g.Wc),
                         max_abs_norm(g.H), Scalar(1)});
  const auto n = static_cast<unsigned>(g.nc2 + g.np);
  const Scalar base1 = std::max({max_abs_norm(g.Wc), max_abs_norm(g.H), Scalar(1)});
  out.case1_bound = n == 0 ? Scalar(0) : Scalar(Scalar(factorial(n)) * induced_inf_norm(g.Dc) * power(base1, n - 1));
  out.case2_bound = Scalar(factorial(n + 2)) * power(out.theta1, n + 2) * out.theta2 * power(out.theta3, n + 1);
  out.lambda_bar = std::max({out.case1_bound, out.case2_bound, Scalar(0)});
  return out;
}

}  // namespace lagro
