#include "lagro/kernel.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "lagro/error.hpp"

namespace lagro {

namespace {

using IntMat = std::vector<std::vector<int>>;

IntMat transposed(const IntMat& a) {
  if (a.empty()) return {};
  IntMat t(a[0].size(), std::vector<int>(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a[i].size(); ++j) t[j][i] = a[i][j];
  return t;
}

bool same_up_to_sign(const std::vector<int>& a, const std::vector<int>& b) {
  if (a == b) return true;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] != -b[i]) return false;
  return true;
}

// Drops rows that cannot change the verdict: zero rows, rows with a single
// nonzero, and rows equal to an earlier row up to sign.
bool reduce_rows(IntMat& a) {
  IntMat kept;
  for (auto& row : a) {
    const auto nz = std::count_if(row.begin(), row.end(), [](int v) { return v != 0; });
    if (nz <= 1) continue;
    const bool dup = std::any_of(kept.begin(), kept.end(),
                                 [&](const std::vector<int>& k) { return same_up_to_sign(k, row); });
    if (!dup) kept.push_back(std::move(row));
  }
  const bool changed = kept.size() != a.size();
  a = std::move(kept);
  return changed;
}

std::int64_t bareiss_det(std::vector<std::vector<std::int64_t>> a) {
  const std::size_t n = a.size();
  std::int64_t sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      std::size_t p = k + 1;
      while (p < n && a[p][k] == 0) ++p;
      if (p == n) return 0;
      std::swap(a[k], a[p]);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

bool next_combination(std::vector<std::size_t>& c, std::size_t n) {
  const std::size_t k = c.size();
  for (std::size_t i = k; i-- > 0;) {
    if (c[i] < n - k + i) {
      ++c[i];
      for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

bool is_totally_unimodular(const Mat& m) {
  IntMat a(m.rows(), std::vector<int>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const Scalar& v = m(i, j);
      if (v != 0 && v != 1 && v != -1) return false;
      a[i][j] = static_cast<int>(v.get_num().get_si());
    }
  }

  for (bool changed = true; changed && !a.empty();) {
    changed = reduce_rows(a);
    a = transposed(a);
    changed = reduce_rows(a) || changed;
    a = transposed(a);
  }
  if (a.empty() || a[0].empty()) return true;

  const std::size_t rows = a.size(), cols = a[0].size();
  for (std::size_t k = 2; k <= std::min(rows, cols); ++k) {
    std::vector<std::size_t> r(k);
    std::iota(r.begin(), r.end(), 0);
    do {
      std::vector<std::size_t> c(k);
      std::iota(c.begin(), c.end(), 0);
      do {
        std::vector<std::vector<std::int64_t>> sub(k, std::vector<std::int64_t>(k));
        for (std::size_t i = 0; i < k; ++i)
          for (std::size_t j = 0; j < k; ++j) sub[i][j] = a[r[i]][c[j]];
        const std::int64_t d = bareiss_det(std::move(sub));
        if (d > 1 || d < -1) return false;
      } while (next_combination(c, cols));
    } while (next_combination(r, rows));
  }
  return true;
}

Scalar vertex_bound(const Mat& a, const Vec& b) {
  if (a.rows() != b.size()) throw InputError("vertex_bound: rows of A != length of b");
  if (!all_integer(a) || !all_integer(b)) {
    throw ConditionViolation("vertex_bound: A and b must be integer-valued");
  }
  const std::size_t m = a.rows();
  if (m == 0) return 0;
  return Scalar(factorial(static_cast<unsigned>(m))) * max_abs_norm(b) *
         power(max_abs_norm(a), static_cast<unsigned>(m - 1));
}

}  // namespace lagro
