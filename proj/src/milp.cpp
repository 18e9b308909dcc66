#include <vector>

#include "lagro/error.hpp"
#include "lagro/lp.hpp"

namespace lagro {

namespace {

struct Node {
  std::vector<Bound> lower, upper;
};

}  // namespace

SolveOutcome solve_milp(const LinearProgram& lp) {
  lp.validate();
  if (!lp.has_integers()) return solve_lp(lp);

  const std::size_t n = lp.num_vars();
  const bool maximize = lp.sense == ObjectiveSense::Maximize;

  LinearProgram relax = lp;
  relax.integer.clear();
  if (relax.lower.empty()) relax.lower.assign(n, Bound(Scalar(0)));
  if (relax.upper.empty()) relax.upper.assign(n, Bound());

  SolveOutcome best;
  bool have_incumbent = false;
  Scalar incumbent;  // minimisation form

  std::vector<Node> stack{{relax.lower, relax.upper}};
  std::size_t pivots = 0, nodes = 0;
  while (!stack.empty()) {
    Node node = std::move(stack.back());
    stack.pop_back();
    ++nodes;
    relax.lower = node.lower;
    relax.upper = node.upper;
    SolveOutcome sol = solve_lp(relax);
    pivots += sol.pivots;
    if (sol.status == SolveStatus::Infeasible) continue;

    const bool unbounded = sol.status == SolveStatus::Unbounded;
    if (!unbounded && have_incumbent) {
      const Scalar value = maximize ? Scalar(-sol.objective) : sol.objective;
      if (value >= incumbent) continue;
    }

    std::size_t branch = n;
    for (std::size_t j = 0; j < n; ++j) {
      if (lp.integer[j] && !is_integer(sol.primal[j])) {
        branch = j;
        break;
      }
    }

    if (branch == n) {
      if (unbounded) {
        // Integer variables are boxed, so the ray only moves continuous ones
        // and the integral point certifies an unbounded mixed-integer program.
        sol.duals.reset();
        sol.reduced_costs.reset();
        sol.pivots = pivots;
        sol.nodes = nodes;
        return sol;
      }
      have_incumbent = true;
      incumbent = maximize ? Scalar(-sol.objective) : sol.objective;
      best = std::move(sol);
      continue;
    }

    const Scalar& v = sol.primal[branch];
    Node up = node;
    up.lower[branch] = Scalar(ceil(v));
    Node down = std::move(node);
    down.upper[branch] = Scalar(floor(v));
    stack.push_back(std::move(up));
    stack.push_back(std::move(down));
  }

  best.duals.reset();
  best.reduced_costs.reset();
  best.ray.reset();
  best.pivots = pivots;
  best.nodes = nodes;
  if (!have_incumbent) best.status = SolveStatus::Infeasible;
  return best;
}

}  // namespace lagro
