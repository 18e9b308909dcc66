#include <limits>
#include <set>

#include "lagro/error.hpp"
#include "lagro/instances.hpp"
#include "lagro/oracle.hpp"

namespace lagro {

SeededRng::SeededRng(std::uint64_t seed) : engine_(seed) {}

std::uint64_t SeededRng::next() { return engine_(); }

std::int64_t SeededRng::between(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw InputError("SeededRng::between: empty range");
  const std::uint64_t n = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
  if (n == 0) return static_cast<std::int64_t>(next());
  const std::uint64_t rem = (std::uint64_t{0} - n) % n;  // 2^64 mod n
  std::uint64_t r = next();
  while (rem != 0 && r > std::numeric_limits<std::uint64_t>::max() - rem) r = next();
  return lo + static_cast<std::int64_t>(r % n);
}

namespace {

constexpr int kMaxAttempts = 10000;

Scalar draw(SeededRng& rng, int lo, int hi) { return Scalar(static_cast<long>(rng.between(lo, hi))); }

Vec draw_vec(SeededRng& rng, std::size_t n, int lo, int hi) {
  Vec v(n);
  for (auto& s : v) s = draw(rng, lo, hi);
  return v;
}

Mat draw_mat(SeededRng& rng, std::size_t rows, std::size_t cols, int lo, int hi) {
  Mat m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = draw(rng, lo, hi);
  return m;
}

// Entries are zero with probability 1/3, otherwise uniform in [-mag, mag].
Mat draw_sparse(SeededRng& rng, std::size_t rows, std::size_t cols, int mag) {
  Mat m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (rng.between(0, 2) != 0) m(i, j) = draw(rng, -mag, mag);
  return m;
}

std::vector<Vec> draw_x_set(SeededRng& rng, std::size_t n1, std::size_t count) {
  std::size_t capacity = 1;
  for (std::size_t j = 0; j < n1 && capacity < count; ++j) capacity *= 3;
  if (capacity < count) throw InputError("generator: cannot draw that many distinct points in {0,1,2}^n1");
  std::set<std::vector<long>> seen;
  std::vector<Vec> out;
  while (out.size() < count) {
    std::vector<long> p(n1);
    for (auto& v : p) v = static_cast<long>(rng.between(0, 2));
    if (!seen.insert(p).second) continue;
    Vec x(n1);
    for (std::size_t j = 0; j < n1; ++j) x[j] = p[j];
    out.push_back(std::move(x));
  }
  return out;
}

void draw_xi(SeededRng& rng, ProblemData& d, const std::optional<unsigned>& budget) {
  if (budget) {
    d.xi_budget = budget;
    d.Xi = expand_budget(d.np, *budget);
    return;
  }
  if (d.np > 10) throw InputError("generator: explicit random Xi needs np <= 10");
  const std::vector<Vec> all = expand_budget(d.np, static_cast<unsigned>(d.np));
  d.Xi.clear();
  for (const auto& xi : all)
    if (rng.coin()) d.Xi.push_back(xi);
  if (d.Xi.empty()) d.Xi.push_back(all[static_cast<std::size_t>(rng.between(0, static_cast<std::int64_t>(all.size()) - 1))]);
}

void draw_y_box(SeededRng& rng, ProblemData& d, int mag) {
  d.yc_upper.assign(d.nc2, Bound());
  for (auto& u : d.yc_upper)
    if (rng.coin()) u = draw(rng, 1, std::max(1, mag));
  d.yd_lower.assign(d.nd2, Scalar(0));
  d.yd_upper.assign(d.nd2, Scalar(1));
  std::size_t count = std::size_t{1} << d.nd2;
  for (auto& u : d.yd_upper) {
    if (count * 3 / 2 <= 8 && rng.coin()) {
      u = 2;
      count = count * 3 / 2;
    }
  }
}

void set_dims(ProblemData& d, const RandomDims& dims) {
  d.n1 = dims.n1;
  d.nc2 = dims.nc2;
  d.nd2 = dims.nd2;
  d.np = dims.np;
  d.m = dims.m;
}

template <class Inst>
bool has_feasible_x(const Inst& inst) {
  return !solve_two_stage_bruteforce(inst).value.is_pos_inf();
}

}  // namespace

GeneralInstance gen_counterexample(const Scalar& gamma) {
  if (gamma <= 0) throw InputError("gen_counterexample: gamma must be positive");
  GeneralInstance g;
  g.n1 = 1;
  g.nc2 = 0;
  g.nd2 = 1;
  g.np = 1;
  g.m = 1;
  g.c0 = {0};
  g.C = Mat{{0}};
  g.d0 = {-gamma};
  g.Dc = Mat(0, 1);
  g.Dd = Mat{{0}};
  g.T = Mat{{0}};
  g.Wc = Mat(1, 0);
  g.Wd = Mat{{-1}};
  g.h0 = {Scalar(-3, 2)};
  g.H = Mat{{1}};
  g.X = {{0}};
  g.Xi = {{0}, {1}};
  g.yd_lower = {0};
  g.yd_upper = {1};
  g.validate();
  return g;
}

GeneralInstance gen_interdiction(std::size_t n, std::uint64_t seed) {
  if (n == 0 || n > 6) throw InputError("gen_interdiction: n must be in [1, 6]");
  SeededRng rng(seed);
  GeneralInstance g;
  g.n1 = 1;
  g.nc2 = 0;
  g.nd2 = n;
  g.np = n;
  g.m = n + 1;
  g.c0 = {draw(rng, 1, 4)};
  g.C = draw_mat(rng, 1, n, 0, 2);
  g.d0 = draw_vec(rng, n, -4, 4);
  g.Dc = Mat(0, n);
  g.Dd = draw_mat(rng, n, n, -2, 2);
  g.T = Mat(n + 1, 1);
  g.T(n, 0) = 1;
  g.Wc = Mat(n + 1, 0);
  g.Wd = Mat(n + 1, n);
  g.H = Mat(n + 1, n);
  g.h0.assign(n + 1, Scalar(-1));
  for (std::size_t j = 0; j < n; ++j) {
    g.Wd(j, j) = -1;  // -y_j >= -1 + xi_j
    g.H(j, j) = 1;
    g.Wd(n, j) = 1;  // x + sum y >= 1
  }
  g.h0[n] = 1;
  g.X = {{0}, {1}};
  g.xi_budget = static_cast<unsigned>(rng.between(1, static_cast<std::int64_t>(n)));
  g.Xi = expand_budget(n, *g.xi_budget);
  g.yd_lower.assign(n, Scalar(0));
  g.yd_upper.assign(n, Scalar(1));
  g.validate();
  return g;
}

GeneralInstance gen_random_general(const RandomDims& dims, std::uint64_t seed) {
  SeededRng rng(seed);
  const int mag = dims.magnitude;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    GeneralInstance g;
    set_dims(g, dims);
    g.c0 = draw_vec(rng, g.n1, -mag, mag);
    g.C = draw_mat(rng, g.n1, g.np, -mag, mag);
    g.d0 = draw_vec(rng, g.nc2, 0, mag);
    const Vec dd0 = draw_vec(rng, g.nd2, -mag, mag);
    g.d0.insert(g.d0.end(), dd0.begin(), dd0.end());
    g.Dc = draw_mat(rng, g.nc2, g.np, 0, mag);
    g.Dd = draw_mat(rng, g.nd2, g.np, -mag, mag);
    g.T = draw_sparse(rng, g.m, g.n1, mag);
    g.Wc = draw_sparse(rng, g.m, g.nc2, mag);
    g.Wd = draw_sparse(rng, g.m, g.nd2, mag);
    g.h0 = draw_vec(rng, g.m, -mag, mag);
    g.H = draw_sparse(rng, g.m, g.np, mag);
    g.X = draw_x_set(rng, g.n1, dims.x_count);
    draw_xi(rng, g, dims.budget);
    draw_y_box(rng, g, mag);
    g.validate();
    if (has_feasible_x(g)) return g;
  }
  throw LimitExceeded("gen_random_general: no feasible instance found");
}

IndicatorInstance gen_random_indicator(const RandomDims& dims, std::uint64_t seed) {
  if (dims.m == 0 || dims.np == 0) throw InputError("gen_random_indicator: needs m >= 1 and np >= 1");
  SeededRng rng(seed);
  const int mag = dims.magnitude;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    IndicatorInstance g;
    set_dims(g, dims);
    g.c0 = draw_vec(rng, g.n1, -mag, mag);
    g.C = draw_mat(rng, g.n1, g.np, -mag, mag);
    g.d0 = draw_vec(rng, g.n2(), 0, mag);
    g.Dc = draw_mat(rng, g.nc2, g.np, 0, mag);
    g.Dd = draw_mat(rng, g.nd2, g.np, 0, mag);
    g.T = draw_sparse(rng, g.m, g.n1, mag);
    g.Wc = draw_sparse(rng, g.m, g.nc2, mag);
    g.Wd = draw_sparse(rng, g.m, g.nd2, mag);
    g.h0 = draw_vec(rng, g.m, -mag, mag);
    g.I0.assign(g.np, {});
    g.I1.assign(g.np, {});
    for (std::size_t j = 0; j < g.np; ++j) {
      for (std::size_t i = 0; i < g.m; ++i) {
        if (rng.between(0, 2) == 0) g.I0[j].push_back(i);
        if (rng.between(0, 2) == 0) g.I1[j].push_back(i);
      }
    }
    const auto last_row = static_cast<std::int64_t>(g.m) - 1;
    const auto last_j = static_cast<std::int64_t>(g.np) - 1;
    bool any0 = false, any1 = false;
    for (std::size_t j = 0; j < g.np; ++j) {
      any0 = any0 || !g.I0[j].empty();
      any1 = any1 || !g.I1[j].empty();
    }
    if (!any0) g.I0[static_cast<std::size_t>(rng.between(0, last_j))].push_back(static_cast<std::size_t>(rng.between(0, last_row)));
    if (!any1) g.I1[static_cast<std::size_t>(rng.between(0, last_j))].push_back(static_cast<std::size_t>(rng.between(0, last_row)));
    g.X = draw_x_set(rng, g.n1, dims.x_count);
    draw_xi(rng, g, dims.budget);
    draw_y_box(rng, g, mag);
    g.validate();
    if (has_feasible_x(g)) return g;
  }
  throw LimitExceeded("gen_random_indicator: no feasible instance found");
}

GeneralInstance gen_homogeneous(const RandomDims& dims, std::uint64_t seed) {
  SeededRng rng(seed);
  const int mag = dims.magnitude;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    GeneralInstance g;
    set_dims(g, dims);
    const std::size_t base_rows = dims.m;
    g.m = base_rows + g.nc2;
    g.c0.assign(g.n1, Scalar(0));
    g.d0.assign(g.n2(), Scalar(0));
    g.h0.assign(g.m, Scalar(0));
    g.C = draw_mat(rng, g.n1, g.np, -mag, mag);
    g.Dc = draw_mat(rng, g.nc2, g.np, 0, mag);
    g.Dd = draw_mat(rng, g.nd2, g.np, -mag, mag);
    g.T = draw_sparse(rng, base_rows, g.n1, mag).stacked(Mat(g.nc2, g.n1));
    Mat cap(g.nc2, g.nc2);
    for (std::size_t j = 0; j < g.nc2; ++j) cap(j, j) = -1;
    g.Wc = draw_sparse(rng, base_rows, g.nc2, mag).stacked(cap);
    g.Wd = draw_sparse(rng, base_rows, g.nd2, mag).stacked(Mat(g.nc2, g.nd2));
    Mat sum_rows(g.nc2, g.np);
    for (std::size_t j = 0; j < g.nc2; ++j)
      for (std::size_t k = 0; k < g.np; ++k) sum_rows(j, k) = -1;
    g.H = draw_sparse(rng, base_rows, g.np, mag).stacked(sum_rows);
    if (base_rows == 0) {
      g.T = Mat(g.nc2, g.n1);
      g.Wc = cap;
      g.Wd = Mat(g.nc2, g.nd2);
      g.H = sum_rows;
    }
    g.X = draw_x_set(rng, g.n1, dims.x_count);
    draw_xi(rng, g, dims.budget);
    g.yc_upper.assign(g.nc2, Bound());
    g.yd_lower.assign(g.nd2, Scalar(0));
    g.yd_upper.assign(g.nd2, Scalar(1));
    BoxBounds box;
    box.x_lower.assign(g.n1, Scalar(0));
    box.x_upper.assign(g.n1, Scalar(2));
    box.y_lower.assign(g.n2(), Scalar(0));
    box.y_upper.assign(g.nc2, Scalar(static_cast<long>(g.np)));
    box.y_upper.insert(box.y_upper.end(), g.yd_upper.begin(), g.yd_upper.end());
    g.bounds = std::move(box);
    g.validate();
    if (has_feasible_x(g)) return g;
  }
  throw LimitExceeded("gen_homogeneous: no feasible instance found");
}

IndicatorInstance gen_network_design_small(std::size_t nodes, unsigned k) {
  if (nodes < 2 || nodes > 5) throw InputError("gen_network_design_small: nodes must be in [2, 5]");
  std::vector<std::pair<std::size_t, std::size_t>> arcs;
  for (std::size_t v = 1; v < nodes; ++v) arcs.emplace_back(0, v);
  for (std::size_t v = 1; v + 1 < nodes; ++v) arcs.emplace_back(v, v + 1);
  const std::size_t A = arcs.size(), demand = nodes - 1;

  IndicatorInstance g;
  g.n1 = A;
  g.nc2 = A + demand;
  g.nd2 = 0;
  g.np = A;
  g.m = 2 * A + demand;
  g.c0.resize(A);
  for (std::size_t a = 0; a < A; ++a) g.c0[a] = 1 + static_cast<long>(a % 3);
  g.C = Mat(A, A);
  g.d0.assign(g.nc2, Scalar(0));
  for (std::size_t v = 0; v < demand; ++v) g.d0[A + v] = 10;
  g.Dc = Mat(g.nc2, A);
  g.Dd = Mat(0, A);
  g.T = Mat(g.m, A);
  g.Wc = Mat(g.m, g.nc2);
  g.Wd = Mat(g.m, 0);
  g.h0.assign(g.m, Scalar(0));
  g.I0.assign(A, {});
  g.I1.assign(A, {});
  for (std::size_t a = 0; a < A; ++a) {
    g.T(a, a) = 2;  // capacity: 2 x_a - f_a >= 0
    g.Wc(a, a) = -1;
    g.Wc(A + demand + a, a) = 1;  // f_a >= 0, forced to equality when arc a fails
    g.I1[a].push_back(A + demand + a);
  }
  for (std::size_t v = 1; v < nodes; ++v) {
    const std::size_t row = A + v - 1;
    for (std::size_t a = 0; a < A; ++a) {
      if (arcs[a].second == v) g.Wc(row, a) += 1;
      if (arcs[a].first == v) g.Wc(row, a) -= 1;
    }
    g.Wc(row, A + v - 1) = 1;  // shortfall
    g.h0[row] = 1;
  }
  g.X = expand_budget(A, static_cast<unsigned>(A));
  g.xi_budget = k;
  g.Xi = expand_budget(A, k);
  g.yc_upper.assign(g.nc2, Bound());
  g.validate();
  return g;
}

IndicatorInstance gen_restart_instance() {
  IndicatorInstance g;
  g.n1 = 1;
  g.nc2 = 1;
  g.nd2 = 0;
  g.np = 1;
  g.m = 1;
  g.c0 = {0};
  g.C = Mat{{0}};
  g.d0 = {Scalar(-1, 4)};
  g.Dc = Mat{{0}};
  g.Dd = Mat(0, 1);
  g.T = Mat{{0}};
  g.Wc = Mat{{Scalar(1, 100)}};  // g_0 = (y - 1) / 100 >= 0
  g.Wd = Mat(1, 0);
  g.h0 = {Scalar(1, 100)};
  g.I0 = {{}};
  g.I1 = {{0}};
  g.X = {{0}};
  g.Xi = {{0}, {1}};
  g.yc_upper = {Scalar(10)};
  g.validate();
  return g;
}

}  // namespace lagro
