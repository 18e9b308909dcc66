#include <doctest.h>

#include "lagro/error.hpp"
#include "lagro/instances.hpp"
#include "lagro/multiplier.hpp"
#include "lagro/oracle.hpp"

using namespace lagro;

namespace {

// Homogeneous two-row instance with data in {-1, 0, 1}, X = {0, 1},
// y in [0, 1]^2 and optimal value 1.
GeneralInstance small_homogeneous() {
  GeneralInstance g;
  g.n1 = 1;
  g.nc2 = 1;
  g.nd2 = 1;
  g.np = 1;
  g.m = 2;
  g.c0 = {0};
  g.C = Mat{{1}};
  g.d0 = {0, 0};
  g.Dc = Mat{{1}};
  g.Dd = Mat{{1}};
  g.T = Mat{{0}, {1}};
  g.Wc = Mat{{-1}, {0}};
  g.Wd = Mat{{0}, {1}};
  g.h0 = {0, 0};
  g.H = Mat{{-1}, {1}};
  g.X = {{0}, {1}};
  g.Xi = {{0}, {1}};
  g.yc_upper = {Bound()};
  g.yd_lower = {0};
  g.yd_upper = {1};
  g.bounds = BoxBounds{{0}, {1}, {0, 0}, {1, 1}};
  g.validate();
  return g;
}

GeneralInstance interdiction_with_bounds(std::size_t n, std::uint64_t seed) {
  GeneralInstance g = gen_interdiction(n, seed);
  g.bounds = BoxBounds{{0}, {1}, Vec(n, Scalar(0)), Vec(n, Scalar(1))};
  return g;
}

bool is_binary(const Vec& v) {
  for (const auto& s : v)
    if (s != 0 && s != 1) return false;
  return true;
}

}  // namespace

TEST_CASE("check_conditions_general: counterexample fails integrality only") {
  const ConditionReport r = check_conditions_general(gen_counterexample());
  REQUIRE(r.conditions.size() == 3);
  CHECK(r.conditions[0].passed);
  CHECK_FALSE(r.conditions[1].passed);
  CHECK(r.conditions[1].witness == "h0[0] = -3/2");
  CHECK(r.conditions[2].passed);
  CHECK_FALSE(r.overall);
}

TEST_CASE("check_conditions_general: interdiction passes, a 2 in Wc fails") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) CHECK(check_conditions_general(gen_interdiction(3, seed)).overall);
  GeneralInstance g = gen_random_general(RandomDims{}, 4);
  g.Wc(0, 0) = 2;
  const ConditionReport r = check_conditions_general(g);
  CHECK_FALSE(r.conditions[2].passed);
  CHECK_FALSE(r.overall);
  GeneralInstance frac = gen_interdiction(2, 1);
  frac.X.push_back({Scalar(1, 2)});
  CHECK_FALSE(check_conditions_general(frac).conditions[0].passed);
}

TEST_CASE("check_conditions_indicator") {
  CHECK(check_conditions_indicator(gen_network_design_small(4, 1)).overall);
  IndicatorInstance g = gen_network_design_small(3, 1);
  g.h0[0] = Scalar(1, 3);
  const ConditionReport r = check_conditions_indicator(g);
  CHECK_FALSE(r.conditions[1].passed);
  CHECK(r.conditions[2].passed);
  RandomDims d;
  d.nc2 = 0;
  d.nd2 = 2;
  const IndicatorInstance pure = gen_random_indicator(d, 5);
  CHECK(check_conditions_indicator(pure).conditions[2].passed);
  // The restart instance has Wc = [1/100].
  CHECK_FALSE(check_conditions_indicator(gen_restart_instance()).overall);
}

TEST_CASE("compute_u_l and the closed-form multiplier") {
  const UpperLower ul = compute_u_l(gen_counterexample(), {0});
  CHECK(ul.u == 0);
  CHECK(ul.l == -1);
  CHECK(closed_form_multiplier(ul.u, ul.l) == 1);
  CHECK(closed_form_multiplier(5, 5) == 0);
  CHECK_THROWS_AS(closed_form_multiplier(1, 2), InputError);

  GeneralInstance zero = gen_interdiction(2, 3);
  zero.c0 = {0};
  zero.C = Mat(1, 2);
  zero.d0 = {0, 0};
  zero.Dd = Mat(2, 2);
  const UpperLower z = compute_u_l(zero, {1});
  CHECK(z.u == 0);
  CHECK(z.l == 0);
  CHECK_THROWS_AS(compute_u_l(gen_interdiction(2, 3), {0}), InfeasibleError);

  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const GeneralInstance g = gen_random_general(RandomDims{}, seed);
    for (const Vec& x : g.X) {
      if (worst_case_Q(g, x).value.is_pos_inf()) continue;
      const UpperLower r = compute_u_l(g, x);
      CHECK(r.u >= r.l);
    }
  }
}

TEST_CASE("u - l is an optimal multiplier on interdiction instances") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const GeneralInstance g = gen_interdiction(1 + seed % 4, seed);
    for (const Vec& x : g.X) {
      const ExtValue wq = worst_case_Q(g, x).value;
      if (!wq.is_finite()) continue;
      const UpperLower ul = compute_u_l(g, x);
      const Scalar lambda = closed_form_multiplier(ul.u, ul.l);
      CHECK(worst_case_L(g, x, lambda).value == wq);
      for (const Vec& xi : g.Xi) CHECK(is_binary(solve_L(g, x, xi, lambda).z));
    }
  }
}

TEST_CASE("u - l is not optimal on the counterexample") {
  const GeneralInstance g = gen_counterexample();
  const UpperLower ul = compute_u_l(g, {0});
  CHECK(worst_case_L(g, {0}, closed_form_multiplier(ul.u, ul.l)).value == ExtValue(Scalar(-1, 2)));
  CHECK(worst_case_Q(g, {0}).value == ExtValue(0));
}

TEST_CASE("polynomial_lambda_bound: small homogeneous instance") {
  const GeneralInstance g = small_homogeneous();
  CHECK(solve_two_stage_bruteforce(g).value == ExtValue(1));
  CHECK(check_bound_conditions(g).overall);
  const BoundInputs b = polynomial_lambda_bound(g);
  CHECK(b.U == 1);
  CHECK(b.theta1 == 1);
  CHECK(b.theta2 == 3);  // max{1 + 1 + 1, 1}
  CHECK(b.theta3 == 2);  // max{1 + 1, 1, 1, 1}
  CHECK(b.case1_bound == 2);             // 2! * 1 * 1^1
  CHECK(b.case2_bound == 24 * 3 * 8);    // 4! * 1^4 * 3 * 2^3
  CHECK(b.lambda_bar == 576);
  for (const Vec& x : g.X) CHECK(min_optimal_multiplier(g, x, b.lambda_bar).hi <= b.lambda_bar);
  CHECK(solve_two_stage_lagrangian(g, b.lambda_bar).value == solve_two_stage_bruteforce(g).value);
}

TEST_CASE("polynomial_lambda_bound: case 1 vanishes without continuous costs") {
  GeneralInstance g;
  g.n1 = 1;
  g.nc2 = 0;
  g.nd2 = 1;
  g.np = 1;
  g.m = 1;
  g.c0 = {0};
  g.C = Mat{{0}};
  g.d0 = {0};
  g.Dc = Mat(0, 1);
  g.Dd = Mat{{1}};
  g.T = Mat{{0}};
  g.Wc = Mat(1, 0);
  g.Wd = Mat{{1}};
  g.h0 = {0};
  g.H = Mat{{1}};
  g.X = {{0}};
  g.Xi = {{0}, {1}};
  g.yd_lower = {0};
  g.yd_upper = {1};
  g.bounds = BoxBounds{{0}, {0}, {0}, {1}};
  const BoundInputs b = polynomial_lambda_bound(g);
  CHECK(b.case1_bound == 0);
  CHECK(b.lambda_bar == b.case2_bound);
  // y >= xi at cost xi * y: the worst case is xi = 1, y = 1.
  CHECK(b.U == 1);
}

TEST_CASE("polynomial_lambda_bound: generated homogeneous instances") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    RandomDims d;
    d.np = 2;
    d.m = 2;
    d.magnitude = 1;
    const GeneralInstance g = gen_homogeneous(d, seed);
    REQUIRE(check_bound_conditions(g).overall);
    const BoundInputs b = polynomial_lambda_bound(g);
    const BoundInputs wide = polynomial_lambda_bound(g, UpperBoundSource::Interval);
    CHECK(wide.U >= b.U);
    const ExtValue opt = solve_two_stage_bruteforce(g).value;
    CHECK(solve_two_stage_lagrangian(g, b.lambda_bar).value == opt);
    CHECK(solve_two_stage_lagrangian(g, wide.lambda_bar).value == opt);
    for (const Vec& x : g.X) {
      if (!worst_case_Q(g, x).value.is_finite()) continue;
      CHECK(min_optimal_multiplier(g, x, b.lambda_bar).hi <= b.lambda_bar);
    }
  }
}

TEST_CASE("polynomial_lambda_bound: violated conditions are reported") {
  CHECK_THROWS_AS(polynomial_lambda_bound(gen_counterexample()), ConditionViolation);
  const GeneralInstance g = interdiction_with_bounds(2, 4);
  const ConditionReport r = check_bound_conditions(g);
  CHECK_FALSE(r.conditions[2].passed);
  CHECK_THROWS_AS(polynomial_lambda_bound(g), ConditionViolation);
  GeneralInstance tight = small_homogeneous();
  tight.bounds->y_upper = {0, 1};
  CHECK_FALSE(check_bound_conditions(tight).conditions[1].passed);
}

TEST_CASE("lift_homogeneous keeps second-stage values") {
  const GeneralInstance g = interdiction_with_bounds(2, 4);
  const GeneralInstance lifted = lift_homogeneous(g);
  CHECK(lifted.np == g.np + 1);
  for (std::size_t k = 0; k < g.Xi.size(); ++k) {
    Vec xi = g.Xi[k];
    xi.emplace_back(1);
    CHECK(lifted.Xi[k] == xi);
    for (const Vec& x : g.X) CHECK(eval_Q(lifted, x, xi) == eval_Q(g, x, g.Xi[k]));
  }
  const BoundInputs b = polynomial_lambda_bound(g, UpperBoundSource::BruteForce, true);
  CHECK(b.lifted);
  CHECK(solve_two_stage_lagrangian(lifted, b.lambda_bar).value == solve_two_stage_bruteforce(g).value);
}
