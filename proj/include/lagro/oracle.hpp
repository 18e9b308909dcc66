#pragma once

#include <cstddef>

#include "lagro/model.hpp"

namespace lagro {

/// Maximiser over Xi, first in enumeration order among ties.
struct WorstCase {
  ExtValue value = ExtValue::neg_inf();
  Vec xi;
  std::size_t index = 0;
};

/// Minimiser over X, first in enumeration order among ties.
struct TwoStageValue {
  ExtValue value;
  Vec x;
  std::size_t index = 0;
};

struct Interval {
  Scalar lo, hi;
};

/// Throws LimitExceeded when |x_count| * |Xi| * |Y_d| exceeds 2^16.
void check_enumerable(const ProblemData& data, std::size_t x_count);

WorstCase worst_case_Q(const GeneralInstance& inst, const Vec& x);
WorstCase worst_case_L(const GeneralInstance& inst, const Vec& x, const Scalar& lambda);
WorstCase worst_case_QI(const IndicatorInstance& inst, const Vec& x);
WorstCase worst_case_LI(const IndicatorInstance& inst, const Vec& x, const Scalar& lambda);

/// Bisection on the nondecreasing map lambda -> worst-case Lagrangian value.
/// Returns [lo, hi] with hi - lo <= 2^-20 * lambda_hi where the worst-case
/// Lagrangian at hi equals the worst-case second-stage value exactly, and
/// [0, 0] when lambda = 0 already attains it. Throws InfeasibleError when the
/// worst case at x is not finite and ConditionViolation when lambda_hi is too
/// small.
Interval min_optimal_multiplier(const GeneralInstance& inst, const Vec& x, const Scalar& lambda_hi);
Interval min_optimal_multiplier(const IndicatorInstance& inst, const Vec& x, const Scalar& lambda_hi);

/// L(x, xi, lambda_hi) = Q(x, xi), or Q = +inf and L exceeds `large_target`.
bool check_strong_duality(const GeneralInstance& inst, const Vec& x, const Vec& xi, const Scalar& lambda_hi,
                          const Scalar& large_target = Scalar(1000000));

/// inf over X of the worst-case second-stage value.
TwoStageValue solve_two_stage_bruteforce(const GeneralInstance& inst);
TwoStageValue solve_two_stage_bruteforce(const IndicatorInstance& inst);

/// inf over X of the worst-case Lagrangian at a fixed multiplier.
TwoStageValue solve_two_stage_lagrangian(const GeneralInstance& inst, const Scalar& lambda);
TwoStageValue solve_two_stage_lagrangian(const IndicatorInstance& inst, const Scalar& lambda);

}  // namespace lagro
