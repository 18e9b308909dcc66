#include "lagro/model.hpp"

#include <algorithm>
#include <string>

#include "lagro/error.hpp"

namespace lagro {

const Scalar& ExtValue::value() const {
  if (kind_ != Kind::Finite) throw DomainError("value() of an infinite ExtValue");
  return value_;
}

std::string ExtValue::str() const {
  switch (kind_) {
    case Kind::NegInf: return "-inf";
    case Kind::PosInf: return "+inf";
    case Kind::Finite: break;
  }
  return to_string(value_);
}

bool operator==(const ExtValue& a, const ExtValue& b) {
  if (a.kind_ != b.kind_) return false;
  return a.kind_ != ExtValue::Kind::Finite || a.value_ == b.value_;
}

std::strong_ordering operator<=>(const ExtValue& a, const ExtValue& b) {
  if (a.kind_ != b.kind_) return a.kind_ <=> b.kind_;
  if (a.kind_ != ExtValue::Kind::Finite) return std::strong_ordering::equal;
  const int c = cmp(a.value_, b.value_);
  return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

namespace {

void check_mat(const Mat& m, std::size_t rows, std::size_t cols, const char* name) {
  if (m.rows() != rows || m.cols() != cols) {
    throw InputError(std::string(name) + ": expected " + std::to_string(rows) + "x" + std::to_string(cols) +
                     ", got " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

void check_vec(const Vec& v, std::size_t n, const char* name) {
  if (v.size() != n) {
    throw InputError(std::string(name) + ": expected length " + std::to_string(n) + ", got " +
                     std::to_string(v.size()));
  }
}

bool is_binary(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](const Scalar& s) { return s == 0 || s == 1; });
}

void check_index_sets(const std::vector<std::vector<std::size_t>>& sets, std::size_t np, std::size_t m,
                      const char* name) {
  if (sets.size() != np) {
    throw InputError(std::string(name) + ": expected " + std::to_string(np) + " index lists, got " +
                     std::to_string(sets.size()));
  }
  for (std::size_t j = 0; j < sets.size(); ++j) {
    for (std::size_t i : sets[j]) {
      if (i >= m) {
        throw InputError(std::string(name) + "[" + std::to_string(j) + "]: row index " + std::to_string(i) +
                         " out of range (m = " + std::to_string(m) + ")");
      }
    }
  }
}

Mat zero_rows(std::size_t rows, std::size_t cols) { return Mat(rows, cols); }

// Stacks the rows -y_cj >= -u_j for every finite yc_upper entry.
template <class Inst>
Inst fold_common(const Inst& inst, Mat* h) {
  std::vector<std::size_t> cols;
  for (std::size_t j = 0; j < inst.nc2; ++j)
    if (inst.yc_upper[j]) cols.push_back(j);
  Inst out = inst;
  if (cols.empty()) return out;
  const std::size_t k = cols.size();
  Mat wc(k, inst.nc2);
  Vec h0(k);
  for (std::size_t r = 0; r < k; ++r) {
    wc(r, cols[r]) = -1;
    h0[r] = -*inst.yc_upper[cols[r]];
  }
  out.m = inst.m + k;
  out.T = inst.T.stacked(zero_rows(k, inst.n1));
  out.Wc = inst.Wc.stacked(wc);
  out.Wd = inst.Wd.stacked(zero_rows(k, inst.nd2));
  out.h0.insert(out.h0.end(), h0.begin(), h0.end());
  if (h != nullptr) *h = h->stacked(zero_rows(k, inst.np));
  std::fill(out.yc_upper.begin(), out.yc_upper.end(), Bound());
  return out;
}

enum class Mode { Q, L, Slack, WeightedRows };

struct RecourseRequest {
  Mode mode = Mode::Q;
  const Mat* H = nullptr;  // general family only
  Scalar lambda;
  const Vec* fixed_yd = nullptr;
  std::vector<RowSense> senses;  // empty: all >=
  Vec row_weights;               // WeightedRows: objective adds w'g(x,y)
};

RecourseSolution solve_recourse(const ProblemData& d, const Vec& x, const Vec& xi, const RecourseRequest& req) {
  check_vec(x, d.n1, "x");
  check_vec(xi, d.np, "xi");
  if (req.fixed_yd != nullptr) check_vec(*req.fixed_yd, d.nd2, "y_d");

  const bool with_z = req.mode == Mode::L || req.mode == Mode::Slack;
  const bool with_sigma = req.mode == Mode::Slack;
  const Vec dc = d.dc(xi), dd = d.dd(xi);
  Vec ycost(d.n2());
  Scalar constant = 0;
  if (req.mode != Mode::Slack) {
    std::copy(dc.begin(), dc.end(), ycost.begin());
    std::copy(dd.begin(), dd.end(), ycost.begin() + static_cast<std::ptrdiff_t>(d.nc2));
    constant += dot(d.c(xi), x);
  }
  const Vec tx = multiply(d.T, x);
  if (req.mode == Mode::WeightedRows) {
    const Vec wtw = multiply_transposed(d.W(), req.row_weights);
    for (std::size_t j = 0; j < d.n2(); ++j) ycost[j] += wtw[j];
    constant += dot(req.row_weights, subtract(tx, d.h0));
  }

  LpBuilder b;
  for (std::size_t j = 0; j < d.nc2; ++j) b.add_variable(ycost[j], Scalar(0), d.yc_upper[j]);
  bool integer = false;
  for (std::size_t j = 0; j < d.nd2; ++j) {
    if (req.fixed_yd != nullptr) {
      const Scalar& v = (*req.fixed_yd)[j];
      b.add_variable(ycost[d.nc2 + j], v, v);
    } else {
      b.add_variable(ycost[d.nc2 + j], d.yd_lower[j], d.yd_upper[j], true);
      integer = true;
    }
  }
  const std::size_t z0 = b.num_vars();
  if (with_z) {
    const Scalar weight = req.mode == Mode::L ? req.lambda : Scalar(1);
    for (std::size_t j = 0; j < d.np; ++j) {
      b.add_variable(weight * (1 - 2 * xi[j]), Scalar(0), Scalar(1));
      if (xi[j] == 1) constant += weight;
    }
  }
  const std::size_t s0 = b.num_vars();
  if (with_sigma) {
    for (std::size_t i = 0; i < d.m; ++i) b.add_variable(1, Scalar(0), std::nullopt);
  }

  Vec hxi;
  if (req.mode == Mode::Q && req.H != nullptr) hxi = multiply(*req.H, xi);
  for (std::size_t i = 0; i < d.m; ++i) {
    std::vector<std::pair<std::size_t, Scalar>> terms;
    for (std::size_t j = 0; j < d.nc2; ++j)
      if (d.Wc(i, j) != 0) terms.emplace_back(j, d.Wc(i, j));
    for (std::size_t j = 0; j < d.nd2; ++j)
      if (d.Wd(i, j) != 0) terms.emplace_back(d.nc2 + j, d.Wd(i, j));
    if (with_z) {
      for (std::size_t j = 0; j < d.np; ++j)
        if ((*req.H)(i, j) != 0) terms.emplace_back(z0 + j, -(*req.H)(i, j));
    }
    if (with_sigma) terms.emplace_back(s0 + i, Scalar(1));
    Scalar rhs = d.h0[i] - tx[i];
    if (!hxi.empty()) rhs += hxi[i];
    b.add_row(terms, req.senses.empty() ? RowSense::GreaterEqual : req.senses[i], rhs);
  }

  const LinearProgram lp = b.build();
  const SolveOutcome out = integer ? solve_milp(lp) : solve_lp(lp);
  RecourseSolution sol;
  if (out.status == SolveStatus::Infeasible) return sol;
  if (out.status == SolveStatus::Unbounded) {
    sol.value = ExtValue::neg_inf();
    return sol;
  }
  sol.value = ExtValue(constant + out.objective);
  sol.y.assign(out.primal.begin(), out.primal.begin() + static_cast<std::ptrdiff_t>(d.n2()));
  if (with_z) {
    sol.z.assign(out.primal.begin() + static_cast<std::ptrdiff_t>(z0),
                 out.primal.begin() + static_cast<std::ptrdiff_t>(z0 + d.np));
  }
  if (with_sigma) {
    sol.sigma.assign(out.primal.begin() + static_cast<std::ptrdiff_t>(s0), out.primal.end());
  }
  return sol;
}

void check_lambda(const Scalar& lambda) {
  if (lambda < 0) throw DomainError("lambda must be >= 0, got " + to_string(lambda));
}

}  // namespace

Vec ProblemData::c(const Vec& xi) const { return add(c0, multiply(C, xi)); }

Vec ProblemData::dc(const Vec& xi) const {
  Vec base(d0.begin(), d0.begin() + static_cast<std::ptrdiff_t>(nc2));
  return add(base, multiply(Dc, xi));
}

Vec ProblemData::dd(const Vec& xi) const {
  Vec base(d0.begin() + static_cast<std::ptrdiff_t>(nc2), d0.end());
  return add(base, multiply(Dd, xi));
}

Mat ProblemData::W() const { return Wc.joined(Wd); }

void ProblemData::validate_common() const {
  check_vec(c0, n1, "c0");
  check_mat(C, n1, np, "C");
  check_vec(d0, n2(), "d0");
  check_mat(Dc, nc2, np, "Dc");
  check_mat(Dd, nd2, np, "Dd");
  check_mat(T, m, n1, "T");
  check_mat(Wc, m, nc2, "Wc");
  check_mat(Wd, m, nd2, "Wd");
  check_vec(h0, m, "h0");
  if (X.empty()) throw InputError("X: first-stage set is empty");
  for (std::size_t k = 0; k < X.size(); ++k) check_vec(X[k], n1, ("X.points[" + std::to_string(k) + "]").c_str());
  if (Xi.empty()) throw InputError("Xi: uncertainty set is empty");
  if (Xi.size() > kEnumerationCap) throw LimitExceeded("Xi: more than 2^16 points");
  for (std::size_t k = 0; k < Xi.size(); ++k) {
    const std::string name = "Xi.points[" + std::to_string(k) + "]";
    check_vec(Xi[k], np, name.c_str());
    if (!is_binary(Xi[k])) throw InputError(name + ": entries must be 0 or 1");
  }
  if (yc_upper.size() != nc2) throw InputError("Y.yc_upper: expected length " + std::to_string(nc2));
  for (std::size_t j = 0; j < nc2; ++j) {
    if (yc_upper[j] && *yc_upper[j] < 0) throw InputError("Y.yc_upper[" + std::to_string(j) + "] is negative");
  }
  check_vec(yd_lower, nd2, "Y.yd_lower");
  check_vec(yd_upper, nd2, "Y.yd_upper");
  for (std::size_t j = 0; j < nd2; ++j) {
    if (!is_integer(yd_lower[j]) || !is_integer(yd_upper[j])) {
      throw InputError("Y: integer box bounds must be integers (index " + std::to_string(j) + ")");
    }
    if (yd_lower[j] > yd_upper[j]) throw InputError("Y: yd_lower > yd_upper at index " + std::to_string(j));
  }
  if (bounds) {
    check_vec(bounds->x_lower, n1, "bounds.x_lower");
    check_vec(bounds->x_upper, n1, "bounds.x_upper");
    check_vec(bounds->y_lower, n2(), "bounds.y_lower");
    check_vec(bounds->y_upper, n2(), "bounds.y_upper");
  }
}

std::size_t ProblemData::yd_count() const {
  std::size_t count = 1;
  for (std::size_t j = 0; j < nd2; ++j) {
    const Integer width = Integer(yd_upper[j].get_num() - yd_lower[j].get_num()) + 1;
    if (width > static_cast<long>(kEnumerationCap) || count * width.get_ui() > kEnumerationCap) {
      return kEnumerationCap + 1;
    }
    count *= width.get_ui();
  }
  return count;
}

void GeneralInstance::validate() const {
  validate_common();
  check_mat(H, m, np, "H");
}

void IndicatorInstance::validate() const {
  validate_common();
  check_index_sets(I0, np, m, "I0");
  check_index_sets(I1, np, m, "I1");
}

std::vector<Vec> expand_budget(std::size_t np, unsigned budget) {
  std::vector<Vec> out;
  Vec current(np);
  // Lexicographic order over {0,1}^np, filtered by the budget.
  const auto recurse = [&](auto&& self, std::size_t j, unsigned used) -> void {
    if (j == np) {
      if (out.size() >= kEnumerationCap) throw LimitExceeded("budget uncertainty set exceeds 2^16 points");
      out.push_back(current);
      return;
    }
    current[j] = 0;
    self(self, j + 1, used);
    if (used < budget) {
      current[j] = 1;
      self(self, j + 1, used + 1);
      current[j] = 0;
    }
  };
  recurse(recurse, 0, 0);
  return out;
}

std::vector<Vec> enumerate_yd(const ProblemData& data) {
  if (data.yd_count() > kEnumerationCap) throw LimitExceeded("Y_d has more than 2^16 points");
  std::vector<Vec> out;
  Vec current = data.yd_lower;
  for (;;) {
    out.push_back(current);
    std::size_t j = data.nd2;
    while (j > 0 && current[j - 1] == data.yd_upper[j - 1]) {
      current[j - 1] = data.yd_lower[j - 1];
      --j;
    }
    if (j == 0) return out;
    current[j - 1] += 1;
  }
}

GeneralInstance fold_yc_bounds(const GeneralInstance& inst) {
  Mat h = inst.H;
  GeneralInstance out = fold_common(inst, &h);
  out.H = std::move(h);
  return out;
}

IndicatorInstance fold_yc_bounds(const IndicatorInstance& inst) { return fold_common(inst, nullptr); }

Scalar penalty_phi(const Vec& z, const Vec& xi) {
  if (z.size() != xi.size()) throw InputError("penalty_phi: z and xi lengths differ");
  Scalar out = 0;
  for (std::size_t j = 0; j < z.size(); ++j) out += xi[j] == 0 ? z[j] : Scalar(1 - z[j]);
  return out;
}

Scalar penalty_phi_indicator(const IndicatorInstance& inst, const Vec& x, const Vec& y, const Vec& xi) {
  check_vec(x, inst.n1, "x");
  check_vec(y, inst.n2(), "y");
  check_vec(xi, inst.np, "xi");
  const Vec g = subtract(add(multiply(inst.T, x), multiply(inst.W(), y)), inst.h0);
  Scalar out = 0;
  for (std::size_t j = 0; j < inst.np; ++j) {
    if (xi[j] == 1) {
      for (std::size_t i : inst.I1[j]) out += g[i];
    } else {
      for (std::size_t i : inst.I0[j]) out += g[i];
    }
  }
  return out;
}

RecourseSolution solve_Q(const GeneralInstance& inst, const Vec& x, const Vec& xi) {
  RecourseRequest req;
  req.H = &inst.H;
  return solve_recourse(inst, x, xi, req);
}

ExtValue eval_Q(const GeneralInstance& inst, const Vec& x, const Vec& xi) { return solve_Q(inst, x, xi).value; }

ExtValue eval_Q_restricted(const GeneralInstance& inst, const Vec& x, const Vec& xi, const Vec& yd) {
  RecourseRequest req;
  req.H = &inst.H;
  req.fixed_yd = &yd;
  return solve_recourse(inst, x, xi, req).value;
}

RecourseSolution solve_L(const GeneralInstance& inst, const Vec& x, const Vec& xi, const Scalar& lambda) {
  check_lambda(lambda);
  RecourseRequest req;
  req.mode = Mode::L;
  req.H = &inst.H;
  req.lambda = lambda;
  return solve_recourse(inst, x, xi, req);
}

ExtValue eval_L(const GeneralInstance& inst, const Vec& x, const Vec& xi, const Scalar& lambda) {
  return solve_L(inst, x, xi, lambda).value;
}

ExtValue eval_L_restricted(const GeneralInstance& inst, const Vec& x, const Vec& xi, const Scalar& lambda,
                           const Vec& yd) {
  check_lambda(lambda);
  RecourseRequest req;
  req.mode = Mode::L;
  req.H = &inst.H;
  req.lambda = lambda;
  req.fixed_yd = &yd;
  return solve_recourse(inst, x, xi, req).value;
}

RecourseSolution solve_slack(const GeneralInstance& inst, const Vec& x, const Vec& xi) {
  RecourseRequest req;
  req.mode = Mode::Slack;
  req.H = &inst.H;
  return solve_recourse(inst, x, xi, req);
}

RecourseSolution solve_QI(const IndicatorInstance& inst, const Vec& x, const Vec& xi) {
  check_vec(xi, inst.np, "xi");
  RecourseRequest req;
  req.senses.assign(inst.m, RowSense::GreaterEqual);
  for (std::size_t j = 0; j < inst.np; ++j) {
    for (std::size_t i : xi[j] == 1 ? inst.I1[j] : inst.I0[j]) req.senses[i] = RowSense::Equal;
  }
  return solve_recourse(inst, x, xi, req);
}

ExtValue eval_QI(const IndicatorInstance& inst, const Vec& x, const Vec& xi) { return solve_QI(inst, x, xi).value; }

RecourseSolution solve_LI(const IndicatorInstance& inst, const Vec& x, const Vec& xi, const Scalar& lambda) {
  check_lambda(lambda);
  check_vec(xi, inst.np, "xi");
  RecourseRequest req;
  req.mode = Mode::WeightedRows;
  req.row_weights.assign(inst.m, Scalar(0));
  for (std::size_t j = 0; j < inst.np; ++j) {
    for (std::size_t i : xi[j] == 1 ? inst.I1[j] : inst.I0[j]) req.row_weights[i] += lambda;
  }
  return solve_recourse(inst, x, xi, req);
}

ExtValue eval_LI(const IndicatorInstance& inst, const Vec& x, const Vec& xi, const Scalar& lambda) {
  return solve_LI(inst, x, xi, lambda).value;
}

}  // namespace lagro
