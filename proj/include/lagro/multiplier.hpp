#pragma once

#include <string>
#include <vector>

#include "lagro/model.hpp"

namespace lagro {

struct ConditionResult {
  std::string name;
  bool passed = true;
  /// Empty when passed; otherwise the first offending item.
  std::string witness;
};

struct ConditionReport {
  std::vector<ConditionResult> conditions;
  bool overall = true;
};

/// Integrality and unimodularity conditions under which u(x) - l(x) is an
/// optimal multiplier:
///   1. every point of X is integral,
///   2. T, W, h0, H and the finite y_c upper bounds are integral,
///   3. [Wc -H] is totally unimodular.
ConditionReport check_conditions_general(const GeneralInstance& inst);
/// Same list for P_I with condition 3 on Wc alone (H plays no role).
ConditionReport check_conditions_indicator(const IndicatorInstance& inst);

struct UpperLower {
  Scalar u, l;
};

/// u = worst-case second-stage value at x (exact, by enumeration);
/// l = min over Xi and y in Y of c(xi)'x + d(xi)'y with the constraints dropped.
/// Throws InfeasibleError when u = +inf and ConditionViolation when Y is
/// unbounded in a direction of negative cost (no finite l).
UpperLower compute_u_l(const GeneralInstance& inst, const Vec& x);
UpperLower compute_u_l(const IndicatorInstance& inst, const Vec& x);

/// u - l; throws InputError when u < l.
Scalar closed_form_multiplier(const Scalar& u, const Scalar& l);

/// Appends a constant component xi_0 = 1 (as the last coordinate) to every
/// scenario and moves c0, d0, h0 and finite y_c upper bounds into the new
/// columns of C, D and H. The result has homogeneous data and the same
/// second-stage values.
GeneralInstance lift_homogeneous(const GeneralInstance& inst);

enum class UpperBoundSource {
  /// Exact two-stage optimum by enumeration.
  BruteForce,
  /// Cheapest robust-feasible x of the largest objective over the y box.
  Interval,
};

struct BoundInputs {
  UpperBoundSource source = UpperBoundSource::BruteForce;
  bool lifted = false;
  Scalar U, theta1, theta2, theta3;
  Scalar case1_bound, case2_bound;
  Scalar lambda_bar;
};

/// Evaluates the conditions of the polynomial multiplier bound: X integral and
/// inside the x box, all second-stage feasible y inside the y box, homogeneous
/// data, integral C, D, T, W, H, and a robust-feasible x.
ConditionReport check_bound_conditions(const GeneralInstance& inst);

/// Closed-form multiplier bound for the general problem:
///   theta1 = max{|x^l|, |x^u|, |y_d^l|, |y_d^u|, 1}
///   theta2 = max{|U| + ||C||_inf + ||Dd||_inf, ||Dc||_inf}
///   theta3 = max{||Wd||_inf + ||T||_inf, |Wc|, |H|, 1}
///   case1  = (nc2+np)! ||Dc||_inf max{|Wc|, |H|, 1}^(nc2+np-1)
///   case2  = (nc2+np+2)! theta1^(nc2+np+2) theta2 theta3^(nc2+np+1)
///   lambda_bar = max{case1, case2, 0}
/// with |.| the largest absolute entry and y_c upper bounds folded into rows.
/// With `lift` set, non-homogeneous data is lifted first. Throws
/// ConditionViolation listing every failed condition.
BoundInputs polynomial_lambda_bound(const GeneralInstance& inst, UpperBoundSource source = UpperBoundSource::BruteForce,
                                    bool lift = false);

}  // namespace lagro
