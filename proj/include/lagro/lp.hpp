#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "lagro/matrix.hpp"

namespace lagro {

enum class ObjectiveSense { Minimize, Maximize };
enum class RowSense { LessEqual, Equal, GreaterEqual };

/// A variable bound; std::nullopt stands for -inf (lower) or +inf (upper).
using Bound = std::optional<Scalar>;

/// Dense linear (or mixed-integer linear) program
///   opt  objective' x   s.t.  matrix x (row_senses) rhs,  lower <= x <= upper,
/// with x_j integer wherever integer[j] is set.
struct LinearProgram {
  ObjectiveSense sense = ObjectiveSense::Minimize;
  Vec objective;
  Mat matrix;
  std::vector<RowSense> row_senses;
  Vec rhs;
  std::vector<Bound> lower;
  std::vector<Bound> upper;
  /// Empty means "no integer variables".
  std::vector<bool> integer;

  [[nodiscard]] std::size_t num_vars() const { return objective.size(); }
  [[nodiscard]] std::size_t num_rows() const { return rhs.size(); }
  [[nodiscard]] bool has_integers() const;
  /// Throws InputError on any dimension mismatch or on an integer variable
  /// with an infinite bound.
  void validate() const;
};

/// Incremental construction of a LinearProgram with sparse rows.
class LpBuilder {
 public:
  explicit LpBuilder(ObjectiveSense sense = ObjectiveSense::Minimize) : sense_(sense) {}

  /// Returns the index of the new variable.
  std::size_t add_variable(Scalar cost, Bound lower, Bound upper, bool integer = false);
  void add_row(const std::vector<std::pair<std::size_t, Scalar>>& terms, RowSense sense,
               Scalar rhs);
  [[nodiscard]] std::size_t num_vars() const { return costs_.size(); }
  [[nodiscard]] LinearProgram build() const;

 private:
  ObjectiveSense sense_;
  Vec costs_;
  std::vector<Bound> lower_, upper_;
  std::vector<bool> integer_;
  std::vector<std::vector<std::pair<std::size_t, Scalar>>> rows_;
  std::vector<RowSense> senses_;
  Vec rhs_;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded };

/// Result of solve_lp / solve_milp.
///
/// Dual prices follow the sensitivity convention: duals[i] is the rate of
/// change of the optimal value with respect to rhs[i]. Reduced costs are
/// objective - matrix' duals. Both are present only for pure LPs solved to
/// optimality. For an unbounded LP, `primal` is the last basic feasible point
/// and `ray` an improving direction of unbounded length.
struct SolveOutcome {
  SolveStatus status = SolveStatus::Infeasible;
  Scalar objective = 0;
  Vec primal;
  std::optional<Vec> duals;
  std::optional<Vec> reduced_costs;
  std::optional<Vec> ray;
  std::size_t pivots = 0;
  std::size_t nodes = 0;
};

/// Exact two-phase dense tableau simplex with Bland's rule.
/// Requires lp to have no integrality flags (InputError otherwise).
SolveOutcome solve_lp(const LinearProgram& lp);

/// Depth-first branch and bound over integer-flagged variables, branching on
/// the lowest-index fractional variable (down branch first).
SolveOutcome solve_milp(const LinearProgram& lp);

/// Objective of the dual solution carried by an Optimal LP outcome:
/// rhs' duals plus the bound terms selected by the reduced-cost signs.
Scalar dual_objective(const LinearProgram& lp, const SolveOutcome& outcome);

}  // namespace lagro
