#include "lagro/oracle.hpp"

#include "lagro/error.hpp"

namespace lagro {

namespace {

template <class Eval>
WorstCase maximise_over_xi(const ProblemData& data, Eval&& eval) {
  check_enumerable(data, 1);
  WorstCase best;
  for (std::size_t k = 0; k < data.Xi.size(); ++k) {
    ExtValue v = eval(data.Xi[k]);
    if (k == 0 || v > best.value) {
      best.value = std::move(v);
      best.xi = data.Xi[k];
      best.index = k;
    }
  }
  return best;
}

template <class WorstFn>
TwoStageValue minimise_over_x(const ProblemData& data, WorstFn&& worst) {
  check_enumerable(data, data.X.size());
  TwoStageValue best;
  for (std::size_t k = 0; k < data.X.size(); ++k) {
    ExtValue v = worst(data.X[k]).value;
    if (k == 0 || v < best.value) {
      best.value = std::move(v);
      best.x = data.X[k];
      best.index = k;
    }
  }
  return best;
}

template <class Inst, class WorstQ, class WorstL>
Interval bisect_multiplier(const Inst& inst, const Vec& x, const Scalar& lambda_hi, WorstQ&& worst_q,
                           WorstL&& worst_l) {
  if (lambda_hi < 0) throw DomainError("min_optimal_multiplier: lambda_hi must be >= 0");
  const ExtValue target = worst_q(inst, x).value;
  if (!target.is_finite()) {
    throw InfeasibleError("min_optimal_multiplier: worst-case value at x is " + target.str());
  }
  if (worst_l(inst, x, Scalar(0)).value == target) return {Scalar(0), Scalar(0)};
  if (worst_l(inst, x, lambda_hi).value != target) {
    throw ConditionViolation("min_optimal_multiplier: worst-case Lagrangian at lambda_hi = " + to_string(lambda_hi) +
                             " is below the worst-case value " + target.str());
  }
  Scalar lo = 0, hi = lambda_hi;
  const Scalar width = lambda_hi / Scalar(Integer(1) << 20);
  while (hi - lo > width) {
    Scalar mid = (lo + hi) / 2;
    if (worst_l(inst, x, mid).value == target) {
      hi = std::move(mid);
    } else {
      lo = std::move(mid);
    }
  }
  return {lo, hi};
}

}  // namespace

void check_enumerable(const ProblemData& data, std::size_t x_count) {
  const std::size_t yd = data.yd_count();
  const std::size_t xi = data.Xi.size();
  if (yd > kEnumerationCap || xi > kEnumerationCap || x_count > kEnumerationCap ||
      x_count * xi > kEnumerationCap || x_count * xi * yd > kEnumerationCap) {
    throw LimitExceeded("enumeration refused: more than 2^16 (x, xi, y_d) combinations");
  }
}

WorstCase worst_case_Q(const GeneralInstance& inst, const Vec& x) {
  return maximise_over_xi(inst, [&](const Vec& xi) { return eval_Q(inst, x, xi); });
}

WorstCase worst_case_L(const GeneralInstance& inst, const Vec& x, const Scalar& lambda) {
  if (lambda < 0) throw DomainError("worst_case_L: lambda must be >= 0");
  return maximise_over_xi(inst, [&](const Vec& xi) { return eval_L(inst, x, xi, lambda); });
}

WorstCase worst_case_QI(const IndicatorInstance& inst, const Vec& x) {
  return maximise_over_xi(inst, [&](const Vec& xi) { return eval_QI(inst, x, xi); });
}

WorstCase worst_case_LI(const IndicatorInstance& inst, const Vec& x, const Scalar& lambda) {
  if (lambda < 0) throw DomainError("worst_case_LI: lambda must be >= 0");
  return maximise_over_xi(inst, [&](const Vec& xi) { return eval_LI(inst, x, xi, lambda); });
}

Interval min_optimal_multiplier(const GeneralInstance& inst, const Vec& x, const Scalar& lambda_hi) {
  return bisect_multiplier(
      inst, x, lambda_hi, [](const GeneralInstance& i, const Vec& v) { return worst_case_Q(i, v); },
      [](const GeneralInstance& i, const Vec& v, const Scalar& l) { return worst_case_L(i, v, l); });
}

Interval min_optimal_multiplier(const IndicatorInstance& inst, const Vec& x, const Scalar& lambda_hi) {
  return bisect_multiplier(
      inst, x, lambda_hi, [](const IndicatorInstance& i, const Vec& v) { return worst_case_QI(i, v); },
      [](const IndicatorInstance& i, const Vec& v, const Scalar& l) { return worst_case_LI(i, v, l); });
}

bool check_strong_duality(const GeneralInstance& inst, const Vec& x, const Vec& xi, const Scalar& lambda_hi,
                          const Scalar& large_target) {
  const ExtValue q = eval_Q(inst, x, xi);
  const ExtValue l = eval_L(inst, x, xi, lambda_hi);
  if (q.is_pos_inf()) return l.is_pos_inf() || (l.is_finite() && l.value() > large_target);
  return l == q;
}

TwoStageValue solve_two_stage_bruteforce(const GeneralInstance& inst) {
  return minimise_over_x(inst, [&](const Vec& x) { return worst_case_Q(inst, x); });
}

TwoStageValue solve_two_stage_bruteforce(const IndicatorInstance& inst) {
  return minimise_over_x(inst, [&](const Vec& x) { return worst_case_QI(inst, x); });
}

TwoStageValue solve_two_stage_lagrangian(const GeneralInstance& inst, const Scalar& lambda) {
  return minimise_over_x(inst, [&](const Vec& x) { return worst_case_L(inst, x, lambda); });
}

TwoStageValue solve_two_stage_lagrangian(const IndicatorInstance& inst, const Scalar& lambda) {
  return minimise_over_x(inst, [&](const Vec& x) { return worst_case_LI(inst, x, lambda); });
}

}  // namespace lagro
