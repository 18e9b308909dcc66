#include <doctest.h>

#include <algorithm>

#include "lagro/engine.hpp"
#include "lagro/error.hpp"
#include "lagro/instances.hpp"
#include "lagro/multiplier.hpp"
#include "lagro/oracle.hpp"

using namespace lagro;

namespace {

Scalar q(const char* s) { return parse_scalar(s); }

std::vector<Vec> sorted(std::vector<Vec> v) {
  std::sort(v.begin(), v.end());
  return v;
}

// Row-by-row check of block k of the Lagrangian bound at (tau, lambda, xi, eta) on the
// folded instance.
bool bound_block_holds(const GeneralInstance& folded, const Vec& x, const Vec& xi, const Vec& yd, int tau,
                          const Scalar& lambda, const Scalar& eta, const Vec& mu, const Vec& beta) {
  for (const auto& v : mu)
    if (v < 0 || (tau == 0 && v > 1)) return false;
  for (const auto& v : beta)
    if (v < 0) return false;
  Scalar rhs = 0;
  if (tau == 1) {
    rhs += dot(folded.c(xi), x);
    if (folded.nd2 > 0) rhs += dot(folded.dd(xi), yd);
  }
  for (std::size_t j = 0; j < folded.np; ++j) rhs += lambda * xi[j] - beta[j];
  Vec r = subtract(folded.h0, multiply(folded.T, x));
  if (folded.nd2 > 0) r = subtract(r, multiply(folded.Wd, yd));
  rhs += dot(r, mu);
  if (eta > rhs) return false;
  const Vec wmu = multiply_transposed(folded.Wc, mu);
  const Vec dc = folded.dc(xi);
  for (std::size_t c = 0; c < folded.nc2; ++c)
    if (wmu[c] > tau * dc[c]) return false;
  const Vec hmu = multiply_transposed(folded.H, mu);
  for (std::size_t j = 0; j < folded.np; ++j)
    if (2 * lambda * xi[j] - hmu[j] - beta[j] > lambda) return false;
  return true;
}

GeneralInstance rho_sign_instance() {
  // min y s.t. y >= 2 - xi, Xi = {1}: Q = 1.
  GeneralInstance g;
  g.n1 = 1;
  g.nc2 = 1;
  g.nd2 = 0;
  g.np = 1;
  g.m = 1;
  g.c0 = {0};
  g.C = Mat{{0}};
  g.d0 = {1};
  g.Dc = Mat{{0}};
  g.Dd = Mat(0, 1);
  g.T = Mat{{0}};
  g.Wc = Mat{{1}};
  g.Wd = Mat(1, 0);
  g.h0 = {2};
  g.H = Mat{{-1}};
  g.X = {{0}};
  g.Xi = {{1}};
  g.yc_upper = {Bound()};
  g.validate();
  return g;
}

IndicatorInstance continuous_indicator(std::uint64_t seed) {
  RandomDims d;
  d.nc2 = 2;
  d.nd2 = 0;
  d.m = 3;
  return gen_random_indicator(d, seed);
}

}  // namespace

TEST_CASE("Lagrangian bound on the counterexample") {
  const GeneralInstance g = gen_counterexample();
  const std::vector<Vec> D = {{0}, {1}};
  const LagrangianBound r1 = solve_lagrangian_bound(g, {0}, D, 1, Scalar(1));
  CHECK(r1.value == ExtValue(q("-1/2")));
  CHECK(r1.xi == Vec{1});
  const LagrangianBound r2 = solve_lagrangian_bound(g, {0}, D, 1, Scalar(2));
  CHECK(r2.value == ExtValue(0));
  CHECK(solve_lagrangian_bound(g, {0}, D, 0, Scalar(1)).value == ExtValue(0));
  CHECK_THROWS_AS(solve_lagrangian_bound(g, {0}, {}, 1, Scalar(1)), InputError);
}

TEST_CASE("Lagrangian bound with the full Y_d equals the worst-case Lagrangian and is monotone in D") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const GeneralInstance g = gen_random_general(RandomDims{}, seed);
    const GeneralInstance folded = fold_yc_bounds(g);
    const std::vector<Vec> all = enumerate_yd(g);
    for (const Vec& x : g.X) {
      for (const Scalar lambda : {Scalar(1), Scalar(3), q("7/2")}) {
        const LagrangianBound full = solve_lagrangian_bound(g, x, all, 1, lambda);
        const WorstCase wl = worst_case_L(g, x, lambda);
        CHECK(full.value == wl.value);
        std::vector<Vec> D;
        ExtValue previous = ExtValue::pos_inf();
        for (const Vec& yd : all) {
          D.push_back(yd);
          const LagrangianBound r = solve_lagrangian_bound(g, x, D, 1, lambda);
          CHECK(r.value <= previous);
          CHECK(r.value >= wl.value);
          previous = r.value;
          if (!r.value.is_finite()) continue;
          for (std::size_t k = 0; k < D.size(); ++k) {
            const BoundBlock& b = r.blocks[k];
            if (b.mu.empty()) continue;
            CHECK(bound_block_holds(folded, x, r.xi, D[k], 1, lambda, r.value.value(), b.mu, b.beta));
          }
        }
      }
      // tau = 0 with the full Y_d: worst-case slack value.
      ExtValue slack = ExtValue::neg_inf();
      for (const Vec& xi : g.Xi) slack = std::max(slack, solve_slack(g, x, xi).value);
      CHECK(solve_lagrangian_bound(g, x, all, 0, Scalar(1)).value == slack);
    }
  }
}

TEST_CASE("ccg_inner on the counterexample") {
  const InnerOutcome out = ccg_inner(gen_counterexample(), {0}, Scalar(1));
  CHECK_FALSE(out.infeasible);
  CHECK(out.lb == ExtValue(0));
  CHECK(out.ub == ExtValue(0));
  CHECK((out.lambda == 2 || out.lambda == 4));
  CHECK(sorted(out.D) == std::vector<Vec>{{0}, {1}});
  CHECK_THROWS_AS(ccg_inner(gen_counterexample(), {0}, Scalar(0)), InputError);
  CHECK_THROWS_AS(ccg_inner(gen_counterexample(), {0}, Scalar(1), 0, {}, 1), LimitExceeded);
}

TEST_CASE("ccg_inner bounds the worst case and doubles the multiplier") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const GeneralInstance g = gen_random_general(RandomDims{}, seed);
    for (const Vec& x : g.X) {
      const Scalar lambda0 = Scalar(1 + static_cast<int>(seed % 3)) / 2;
      const InnerOutcome out = ccg_inner(g, x, lambda0);
      const WorstCase wq = worst_case_Q(g, x);
      if (wq.value.is_pos_inf()) {
        CHECK(out.infeasible);
        CHECK(eval_Q(g, x, out.xi).is_pos_inf());
        CHECK(out.lambda == lambda0);
        continue;
      }
      REQUIRE_FALSE(out.infeasible);
      CHECK(out.lb == eval_Q(g, x, out.xi));
      CHECK(out.lb <= wq.value);
      CHECK(out.ub <= out.lb);
      const ExtValue wl = worst_case_L(g, x, out.lambda).value;
      CHECK(out.ub >= wl);
      if (wl == wq.value) CHECK(out.ub == wq.value);
      CHECK(solve_restricted_worst_case(g, x, out.D).value >= wq.value);
      for (const Scalar& l : out.lambda_trajectory) {
        Scalar ratio = l / lambda0;
        while (ratio > 1 && ratio.get_den() == 1 && ratio.get_num() % 2 == 0) ratio /= 2;
        CHECK(ratio == 1);
      }
    }
  }
}

TEST_CASE("restricted worst case needs a sign-free rho") {
  const GeneralInstance g = rho_sign_instance();
  CHECK(worst_case_Q(g, {0}).value == ExtValue(1));
  const RestrictedWorstCase r = solve_restricted_worst_case(g, {0}, {Vec{}});
  CHECK(r.value == ExtValue(1));
  REQUIRE(r.rho.size() == 1);
  CHECK(r.rho[0][0] < 0);
}

TEST_CASE("extractor formulas and the counterexample") {
  CHECK(indicator_multiplier({0, 0}, {0, 0}) == 0);
  CHECK(indicator_multiplier({3, 0}, {0, 1}) == 3);
  CHECK(restricted_multiplier({{0, 0}}, {{0}}, Mat{{1}, {1}}) == 0);
  const GeneralInstance g = gen_counterexample();
  const std::vector<Vec> D = {{0}, {1}};
  const RestrictedWorstCase r = solve_restricted_worst_case(g, {0}, D);
  CHECK(r.value == ExtValue(0));
  const Scalar bar = restricted_multiplier(r.mu, r.rho, g.H);
  CHECK(bar >= 2);
  CHECK(solve_lagrangian_bound(g, {0}, D, 1, bar).value == ExtValue(0));
  CHECK(worst_case_L(g, {0}, bar).value == ExtValue(0));
  // A single scenario and a single y_d: the restricted second-stage value.
  GeneralInstance one = gen_random_general(RandomDims{}, 3);
  one.Xi = {one.Xi.back()};
  one.xi_budget.reset();
  const Vec yd = enumerate_yd(one).back();
  for (const Vec& x : one.X)
    CHECK(solve_restricted_worst_case(one, x, {yd}).value == eval_Q_restricted(one, x, one.Xi[0], yd));
}

TEST_CASE("restricted worst case and the extracted multiplier") {
  for (std::uint64_t seed = 1; seed <= 12; ++seed) {
    const GeneralInstance g = gen_random_general(RandomDims{}, seed);
    const GeneralInstance folded = fold_yc_bounds(g);
    const std::vector<Vec> all = enumerate_yd(g);
    for (const Vec& x : g.X) {
      const WorstCase wq = worst_case_Q(g, x);
      if (!wq.value.is_finite()) continue;
      const RestrictedWorstCase full = solve_restricted_worst_case(g, x, all);
      CHECK(full.value == wq.value);
      const Scalar bar = restricted_multiplier(full.mu, full.rho, folded.H);
      CHECK(worst_case_L(g, x, bar).value == wq.value);
      // Partial D: the Lagrangian bound at the extracted multiplier matches the restricted worst case,
      // and beta = bar xi - rho with the same mu is a feasible certificate.
      for (std::size_t keep = 1; keep <= all.size(); ++keep) {
        const std::vector<Vec> D(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep));
        const RestrictedWorstCase r = solve_restricted_worst_case(g, x, D);
        if (!r.value.is_finite()) continue;
        const Scalar lb = restricted_multiplier(r.mu, r.rho, folded.H);
        CHECK(solve_lagrangian_bound(g, x, D, 1, lb).value == r.value);
        for (std::size_t k = 0; k < D.size(); ++k) {
          Vec beta(g.np);
          for (std::size_t j = 0; j < g.np; ++j) beta[j] = lb * r.xi[j] - r.rho[k][j];
          CHECK(bound_block_holds(folded, x, r.xi, D[k], 1, lb, r.value.value(), r.mu[k], beta));
        }
      }
    }
  }
}

TEST_CASE("indicator worst case and the extracted multiplier") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const IndicatorInstance g = continuous_indicator(seed);
    for (const Vec& x : g.X) {
      const WorstCase wq = worst_case_QI(g, x);
      const IndicatorWorstCase r = solve_indicator_worst_case(g, x);
      CHECK(r.value == wq.value);
      if (!r.value.is_finite()) continue;
      const Scalar bar = indicator_multiplier(r.rho, r.nu);
      CHECK(worst_case_LI(g, x, bar).value == wq.value);
    }
  }
  const IndicatorWorstCase r = solve_indicator_worst_case(gen_restart_instance(), {0});
  CHECK(r.value == ExtValue(q("-1/4")));
  CHECK(indicator_multiplier(r.rho, r.nu) == 25);
  RandomDims d;
  CHECK_THROWS_AS(solve_indicator_worst_case(gen_random_indicator(d, 1), {0}), InputError);
}

TEST_CASE("scaled counterexample: u - l leaves a gap of gamma / 2") {
  for (const Scalar gamma : {Scalar(1), Scalar(10), Scalar(100)}) {
    const GeneralInstance g = gen_counterexample(gamma);
    const UpperLower ul = compute_u_l(g, {0});
    const Scalar lambda = closed_form_multiplier(ul.u, ul.l);
    CHECK(lambda == gamma);
    CHECK(worst_case_Q(g, {0}).value.value() - worst_case_L(g, {0}, lambda).value.value() == gamma / 2);
    const Report rep = solve_with_restarts(g);
    CHECK(rep.value == ExtValue(0));
  }
}

TEST_CASE("masters") {
  const GeneralInstance g = gen_interdiction(3, 2);
  const MasterResult empty = ccg_master(g, {});
  CHECK(empty.value.is_neg_inf());
  CHECK(empty.x_index == 0);
  const MasterResult ce = ccg_master(gen_counterexample(), {{1}});
  CHECK(ce.value == ExtValue(0));
  CHECK(ce.x == Vec{0});
  const MasterResult all = ccg_master(g, g.Xi);
  CHECK(all.value == solve_two_stage_bruteforce(g).value);
  const IndicatorInstance h = continuous_indicator(3);
  CHECK(ccg_master(h, h.Xi).value == solve_two_stage_bruteforce(h).value);
  const MasterResult none = benders_master(h, BendersState{});
  CHECK(none.value.is_neg_inf());
  BendersState excluded;
  excluded.excluded = h.X;
  CHECK(benders_master(h, excluded).value.is_pos_inf());
}

TEST_CASE("solve_with_restarts: counterexample and restart instance") {
  const Report ce = solve_with_restarts(gen_counterexample());
  CHECK(ce.value == ExtValue(0));
  CHECK(ce.n_restarts == 0);
  CHECK((ce.lambda == 2 || ce.lambda == 4));
  CHECK(ce.verified);

  for (const Method method : {Method::Ccg, Method::Benders}) {
    EngineOptions opt;
    opt.method = method;
    std::vector<TraceEvent> events;
    opt.trace = [&](const TraceEvent& e) { events.push_back(e); };
    const Report r = solve_with_restarts(gen_restart_instance(), opt);
    CHECK(r.value == ExtValue(q("-1/4")));
    CHECK(r.n_restarts == 1);
    CHECK(r.lambda == 25);
    CHECK(r.verified);
    CHECK(std::count_if(events.begin(), events.end(), [](const TraceEvent& e) { return e.kind == "restart"; }) == 1);
    CHECK(events.back().kind == "done");
    CHECK(events.front().lambda == q("9/4"));
  }
}

TEST_CASE("solve_with_restarts matches brute force on general instances") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    RandomDims d;
    d.np = 2 + seed % 2;
    const GeneralInstance g = gen_random_general(d, seed);
    const ExtValue opt = solve_two_stage_bruteforce(g).value;
    EngineOptions o;
    bool lb_valid = true;
    o.trace = [&](const TraceEvent& e) {
      if (e.kind == "master" && e.lb > opt) lb_valid = false;
    };
    const Report r = solve_with_restarts(g, o);
    CHECK(r.value == opt);
    CHECK(lb_valid);
    CHECK(r.verified);
    if (opt.is_finite()) CHECK(worst_case_Q(g, r.x).value == opt);
  }
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const GeneralInstance g = gen_interdiction(2 + seed % 3, seed);
    CHECK(solve_with_restarts(g).value == solve_two_stage_bruteforce(g).value);
  }
}

TEST_CASE("solve_with_restarts matches brute force on indicator instances") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const IndicatorInstance g = continuous_indicator(seed);
    const ExtValue opt = solve_two_stage_bruteforce(g).value;
    for (const Method method : {Method::Ccg, Method::Benders}) {
      EngineOptions o;
      o.method = method;
      const Report r = solve_with_restarts(g, o);
      CHECK(r.value == opt);
      if (opt.is_finite()) CHECK(worst_case_QI(g, r.x).value == opt);
    }
  }
  const IndicatorInstance net = gen_network_design_small(3, 1);
  EngineOptions o;
  o.method = Method::Benders;
  CHECK(solve_with_restarts(net, o).value == solve_two_stage_bruteforce(net).value);
}

TEST_CASE("solve_with_restarts: errors, caps and infeasibility") {
  EngineOptions benders;
  benders.method = Method::Benders;
  CHECK_THROWS_AS(solve_with_restarts(gen_counterexample(), benders), InputError);
  EngineOptions bad;
  bad.lambda0 = Scalar(0);
  CHECK_THROWS_AS(solve_with_restarts(gen_counterexample(), bad), InputError);
  CHECK_THROWS_AS(solve_with_restarts(gen_random_indicator(RandomDims{}, 1)), InputError);
  EngineOptions tight;
  tight.max_outer = 1;
  CHECK_THROWS_AS(solve_with_restarts(gen_counterexample(), tight), LimitExceeded);
  EngineOptions no_restart;
  no_restart.max_restarts = 0;
  CHECK_THROWS_AS(solve_with_restarts(gen_restart_instance(), no_restart), LimitExceeded);

  GeneralInstance g = gen_interdiction(2, 1);
  g.X = {{0}};  // without the cover the follower is blocked when every y is interdicted
  g.Xi = {{0, 0}, {1, 1}};
  g.xi_budget.reset();
  const Report r = solve_with_restarts(g);
  CHECK(r.value.is_pos_inf());
  CHECK(eval_Q(g, {0}, r.witness).is_pos_inf());
}

TEST_CASE("epsilon tolerance bounds the reported value") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const GeneralInstance g = gen_random_general(RandomDims{}, seed);
    const ExtValue opt = solve_two_stage_bruteforce(g).value;
    if (!opt.is_finite()) continue;
    EngineOptions o;
    o.eps = Scalar(1, 2);
    const Report r = solve_with_restarts(g, o);
    CHECK(r.value >= opt);
    CHECK(r.value.value() - opt.value() <= o.eps);
  }
}
