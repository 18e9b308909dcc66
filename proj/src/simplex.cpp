#include <algorithm>
#include <string>

#include "lagro/error.hpp"
#include "lagro/lp.hpp"

namespace lagro {

bool LinearProgram::has_integers() const {
  return std::find(integer.begin(), integer.end(), true) != integer.end();
}

void LinearProgram::validate() const {
  const std::size_t n = num_vars();
  if (matrix.rows() != rhs.size()) throw InputError("LP: matrix rows != rhs length");
  if (matrix.rows() > 0 && matrix.cols() != n) throw InputError("LP: matrix cols != objective length");
  if (row_senses.size() != rhs.size()) throw InputError("LP: row sense count != rhs length");
  if (!lower.empty() && lower.size() != n) throw InputError("LP: lower bound count mismatch");
  if (!upper.empty() && upper.size() != n) throw InputError("LP: upper bound count mismatch");
  if (!integer.empty() && integer.size() != n) throw InputError("LP: integrality flag count mismatch");
  for (std::size_t j = 0; j < integer.size(); ++j) {
    if (!integer[j]) continue;
    const bool lo = lower.empty() || lower[j].has_value();
    const bool hi = !upper.empty() && upper[j].has_value();
    if (!lo || !hi) {
      throw InputError("LP: integer variable " + std::to_string(j) + " needs finite bounds");
    }
  }
}

std::size_t LpBuilder::add_variable(Scalar cost, Bound lower, Bound upper, bool integer) {
  costs_.push_back(std::move(cost));
  lower_.push_back(std::move(lower));
  upper_.push_back(std::move(upper));
  integer_.push_back(integer);
  return costs_.size() - 1;
}

void LpBuilder::add_row(const std::vector<std::pair<std::size_t, Scalar>>& terms, RowSense sense,
                        Scalar rhs) {
  rows_.push_back(terms);
  senses_.push_back(sense);
  rhs_.push_back(std::move(rhs));
}

LinearProgram LpBuilder::build() const {
  LinearProgram lp;
  lp.sense = sense_;
  lp.objective = costs_;
  lp.matrix = Mat(rows_.size(), costs_.size());
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    for (const auto& [col, coef] : rows_[r]) {
      if (col >= costs_.size()) throw InputError("LpBuilder: column index out of range");
      lp.matrix(r, col) += coef;
    }
  }
  lp.row_senses = senses_;
  lp.rhs = rhs_;
  lp.lower = lower_;
  lp.upper = upper_;
  lp.integer = integer_;
  return lp;
}

namespace {

enum class MapKind { Shift, Negate, Split };

// How an original variable is expressed through non-negative tableau columns.
struct ColumnMap {
  MapKind kind = MapKind::Shift;
  std::size_t col = 0;
  std::size_t col2 = 0;
  Scalar offset;
};

class Tableau {
 public:
  Tableau(std::size_t rows, std::size_t cols)
      : m_(rows), n_(cols), data_(rows * (cols + 1)), cost_(cols + 1), basis_(rows) {}

  Scalar& at(std::size_t i, std::size_t j) { return data_[i * (n_ + 1) + j]; }
  const Scalar& at(std::size_t i, std::size_t j) const { return data_[i * (n_ + 1) + j]; }
  Scalar& rhs(std::size_t i) { return at(i, n_); }
  Vec& cost() { return cost_; }
  std::vector<std::size_t>& basis() { return basis_; }
  [[nodiscard]] std::size_t rows() const { return m_; }
  [[nodiscard]] std::size_t cols() const { return n_; }

  void pivot(std::size_t r, std::size_t q) {
    const Scalar piv = at(r, q);
    std::vector<std::size_t> nz;
    for (std::size_t j = 0; j <= n_; ++j) {
      if (at(r, j) != 0) {
        at(r, j) /= piv;
        nz.push_back(j);
      }
    }
    Scalar f;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r || at(i, q) == 0) continue;
      f = at(i, q);
      for (std::size_t j : nz) at(i, j) -= f * at(r, j);
    }
    if (cost_[q] != 0) {
      f = cost_[q];
      for (std::size_t j : nz) cost_[j] -= f * at(r, j);
    }
    basis_[r] = q;
  }

  /// Recomputes the reduced-cost row for column costs `c` (length n).
  void price(const Vec& c) {
    for (std::size_t j = 0; j <= n_; ++j) cost_[j] = j < n_ ? c[j] : Scalar(0);
    for (std::size_t i = 0; i < m_; ++i) {
      const Scalar& cb = c[basis_[i]];
      if (cb == 0) continue;
      for (std::size_t j = 0; j <= n_; ++j) {
        if (at(i, j) != 0) cost_[j] -= cb * at(i, j);
      }
    }
  }

 private:
  std::size_t m_, n_;
  std::vector<Scalar> data_;
  Vec cost_;
  std::vector<std::size_t> basis_;
};

enum class PhaseResult { Optimal, Unbounded };

// Bland's rule over columns [0, limit). Returns the unbounded entering column
// through `entering` when the phase ends unbounded.
PhaseResult run_phase(Tableau& t, std::size_t limit, std::size_t& pivots, std::size_t& entering) {
  for (;;) {
    std::size_t q = limit;
    for (std::size_t j = 0; j < limit; ++j) {
      if (t.cost()[j] < 0) {
        q = j;
        break;
      }
    }
    if (q == limit) return PhaseResult::Optimal;

    std::size_t leave = t.rows();
    Scalar best_ratio;
    for (std::size_t i = 0; i < t.rows(); ++i) {
      if (t.at(i, q) <= 0) continue;
      Scalar ratio = t.rhs(i) / t.at(i, q);
      if (leave == t.rows() || ratio < best_ratio ||
          (ratio == best_ratio && t.basis()[i] < t.basis()[leave])) {
        leave = i;
        best_ratio = std::move(ratio);
      }
    }
    if (leave == t.rows()) {
      entering = q;
      return PhaseResult::Unbounded;
    }
    t.pivot(leave, q);
    ++pivots;
  }
}

}  // namespace

SolveOutcome solve_lp(const LinearProgram& lp) {
  lp.validate();
  if (lp.has_integers()) throw InputError("solve_lp: integrality flags set; use solve_milp");

  const std::size_t n = lp.num_vars();
  const std::size_t m0 = lp.num_rows();
  const bool maximize = lp.sense == ObjectiveSense::Maximize;
  auto lower_of = [&](std::size_t j) -> Bound { return lp.lower.empty() ? Bound(Scalar(0)) : lp.lower[j]; };
  auto upper_of = [&](std::size_t j) -> Bound { return lp.upper.empty() ? Bound() : lp.upper[j]; };

  SolveOutcome out;

  // Column substitution for each original variable.
  std::vector<ColumnMap> maps(n);
  std::vector<std::pair<std::size_t, Scalar>> bound_rows;  // x'_col <= width
  std::size_t ns = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const Bound lo = lower_of(j);
    const Bound hi = upper_of(j);
    if (lo) {
      maps[j] = {MapKind::Shift, ns++, 0, *lo};
      if (hi) {
        if (*hi < *lo) return out;  // empty box
        bound_rows.emplace_back(maps[j].col, *hi - *lo);
      }
    } else if (hi) {
      maps[j] = {MapKind::Negate, ns++, 0, *hi};
    } else {
      maps[j] = {MapKind::Split, ns, ns + 1, Scalar(0)};
      ns += 2;
    }
  }

  const std::size_t m = m0 + bound_rows.size();
  std::vector<Vec> coef(m, Vec(ns));
  Vec b(m);
  std::vector<RowSense> senses(m, RowSense::LessEqual);
  for (std::size_t i = 0; i < m0; ++i) {
    b[i] = lp.rhs[i];
    senses[i] = lp.row_senses[i];
    for (std::size_t j = 0; j < n; ++j) {
      const Scalar& a = lp.matrix(i, j);
      if (a == 0) continue;
      const ColumnMap& cm = maps[j];
      switch (cm.kind) {
        case MapKind::Shift:
          coef[i][cm.col] += a;
          b[i] -= a * cm.offset;
          break;
        case MapKind::Negate:
          coef[i][cm.col] -= a;
          b[i] -= a * cm.offset;
          break;
        case MapKind::Split:
          coef[i][cm.col] += a;
          coef[i][cm.col2] -= a;
          break;
      }
    }
  }
  for (std::size_t k = 0; k < bound_rows.size(); ++k) {
    coef[m0 + k][bound_rows[k].first] = 1;
    b[m0 + k] = bound_rows[k].second;
  }

  std::size_t n_slack = 0;
  for (auto s : senses) n_slack += s != RowSense::Equal ? 1 : 0;
  const std::size_t art0 = ns + n_slack;
  const std::size_t ncols = art0 + m;

  Tableau t(m, ncols);
  std::vector<int> row_sign(m, 1);
  {
    std::size_t slack = ns;
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t c = 0; c < ns; ++c) t.at(i, c) = coef[i][c];
      if (senses[i] == RowSense::LessEqual) t.at(i, slack++) = 1;
      if (senses[i] == RowSense::GreaterEqual) t.at(i, slack++) = -1;
      t.rhs(i) = b[i];
      if (b[i] < 0) {
        row_sign[i] = -1;
        for (std::size_t c = 0; c <= ncols; ++c) {
          if (t.at(i, c) != 0) t.at(i, c) = -t.at(i, c);
        }
      }
      t.at(i, art0 + i) = 1;
      t.basis()[i] = art0 + i;
    }
  }

  // Phase 1: minimise the sum of artificials.
  Vec phase1_cost(ncols);
  for (std::size_t i = 0; i < m; ++i) phase1_cost[art0 + i] = 1;
  t.price(phase1_cost);
  std::size_t entering = 0;
  run_phase(t, art0, out.pivots, entering);
  if (t.cost()[ncols] != 0) return out;  // infeasible

  // Drive zero-level artificials out of the basis where possible; rows where
  // that fails are redundant and keep their artificial basic at zero.
  for (std::size_t i = 0; i < m; ++i) {
    if (t.basis()[i] < art0) continue;
    for (std::size_t j = 0; j < art0; ++j) {
      if (t.at(i, j) != 0) {
        t.pivot(i, j);
        ++out.pivots;
        break;
      }
    }
  }

  // Phase 2 in minimisation form.
  Vec cost(ncols);
  for (std::size_t j = 0; j < n; ++j) {
    const Scalar c = maximize ? Scalar(-lp.objective[j]) : lp.objective[j];
    const ColumnMap& cm = maps[j];
    switch (cm.kind) {
      case MapKind::Shift: cost[cm.col] = c; break;
      case MapKind::Negate: cost[cm.col] = -c; break;
      case MapKind::Split:
        cost[cm.col] = c;
        cost[cm.col2] = -c;
        break;
    }
  }
  t.price(cost);
  const PhaseResult phase2 = run_phase(t, art0, out.pivots, entering);

  Vec column_value(ncols);
  for (std::size_t i = 0; i < m; ++i) column_value[t.basis()[i]] = t.rhs(i);
  auto to_original = [&](const Vec& cols, bool direction) {
    Vec x(n);
    for (std::size_t j = 0; j < n; ++j) {
      const ColumnMap& cm = maps[j];
      switch (cm.kind) {
        case MapKind::Shift: x[j] = (direction ? Scalar(0) : cm.offset) + cols[cm.col]; break;
        case MapKind::Negate: x[j] = (direction ? Scalar(0) : cm.offset) - cols[cm.col]; break;
        case MapKind::Split: x[j] = cols[cm.col] - cols[cm.col2]; break;
      }
    }
    return x;
  };
  out.primal = to_original(column_value, false);

  if (phase2 == PhaseResult::Unbounded) {
    Vec dir(ncols);
    dir[entering] = 1;
    for (std::size_t i = 0; i < m; ++i) dir[t.basis()[i]] = -t.at(i, entering);
    out.status = SolveStatus::Unbounded;
    out.ray = to_original(dir, true);
    out.objective = dot(lp.objective, out.primal);
    return out;
  }

  out.status = SolveStatus::Optimal;
  out.objective = dot(lp.objective, out.primal);
  Vec duals(m0);
  for (std::size_t i = 0; i < m0; ++i) {
    Scalar y = -t.cost()[art0 + i];
    if (row_sign[i] < 0) y = -y;
    duals[i] = maximize ? Scalar(-y) : y;
  }
  Vec reduced(n);
  for (std::size_t j = 0; j < n; ++j) {
    reduced[j] = lp.objective[j];
    for (std::size_t i = 0; i < m0; ++i) {
      if (lp.matrix(i, j) != 0 && duals[i] != 0) reduced[j] -= lp.matrix(i, j) * duals[i];
    }
  }
  out.duals = std::move(duals);
  out.reduced_costs = std::move(reduced);
  return out;
}

Scalar dual_objective(const LinearProgram& lp, const SolveOutcome& outcome) {
  if (outcome.status != SolveStatus::Optimal || !outcome.duals || !outcome.reduced_costs) {
    throw InputError("dual_objective: outcome carries no dual solution");
  }
  const bool maximize = lp.sense == ObjectiveSense::Maximize;
  Scalar value = dot(lp.rhs, *outcome.duals);
  for (std::size_t j = 0; j < lp.num_vars(); ++j) {
    const Scalar& d = (*outcome.reduced_costs)[j];
    if (d == 0) continue;
    const bool at_lower = maximize ? d < 0 : d > 0;
    const Bound bound = at_lower ? (lp.lower.empty() ? Bound(Scalar(0)) : lp.lower[j])
                                 : (lp.upper.empty() ? Bound() : lp.upper[j]);
    if (!bound) throw InputError("dual_objective: reduced cost points at an infinite bound");
    value += d * *bound;
  }
  return value;
}

}  // namespace lagro
