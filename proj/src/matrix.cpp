#include "lagro/matrix.hpp"

#include <algorithm>
#include <string>

#include "lagro/error.hpp"

namespace lagro {

Mat::Mat(std::initializer_list<std::initializer_list<Scalar>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw InputError("ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Mat Mat::from_rows(const std::vector<Vec>& rows, std::size_t cols_if_empty) {
  Mat out(rows.size(), rows.empty() ? cols_if_empty : rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != out.cols_) {
      throw InputError("row " + std::to_string(r) + " has " + std::to_string(rows[r].size()) +
                       " entries, expected " + std::to_string(out.cols_));
    }
    std::copy(rows[r].begin(), rows[r].end(), out.row(r).begin());
  }
  return out;
}

Mat Mat::identity(std::size_t n) {
  Mat out(n, n);
  for (std::size_t i = 0; i < n; ++i) out(i, i) = 1;
  return out;
}

Vec Mat::column(std::size_t c) const {
  Vec out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

Mat Mat::transpose() const {
  Mat out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  return out;
}

Mat Mat::negated() const {
  Mat out = *this;
  for (auto& v : out.data_) v = -v;
  return out;
}

Mat Mat::stacked(const Mat& below) const {
  if (rows_ == 0) return below;
  if (below.rows_ == 0) return *this;
  if (cols_ != below.cols_) throw InputError("stacked: column counts differ");
  Mat out(rows_ + below.rows_, cols_);
  std::copy(data_.begin(), data_.end(), out.data_.begin());
  std::copy(below.data_.begin(), below.data_.end(), out.data_.begin() + data_.size());
  return out;
}

Mat Mat::joined(const Mat& right) const {
  if (rows_ != right.rows_) throw InputError("joined: row counts differ");
  Mat out(rows_, cols_ + right.cols_);
  for (std::size_t r = 0; r < rows_; ++r) {
    auto dst = out.row(r);
    std::copy(row(r).begin(), row(r).end(), dst.begin());
    std::copy(right.row(r).begin(), right.row(r).end(), dst.begin() + cols_);
  }
  return out;
}

Vec multiply(const Mat& m, std::span<const Scalar> v) {
  if (m.cols() != v.size()) throw InputError("multiply: dimension mismatch");
  Vec out(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) out[r] = dot(m.row(r), v);
  return out;
}

Vec multiply_transposed(const Mat& m, std::span<const Scalar> v) {
  if (m.rows() != v.size()) throw InputError("multiply_transposed: dimension mismatch");
  Vec out(m.cols());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    if (v[r] == 0) continue;
    for (std::size_t c = 0; c < m.cols(); ++c) out[c] += m(r, c) * v[r];
  }
  return out;
}

Scalar dot(std::span<const Scalar> a, std::span<const Scalar> b) {
  if (a.size() != b.size()) throw InputError("dot: dimension mismatch");
  Scalar out = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != 0 && b[i] != 0) out += a[i] * b[i];
  }
  return out;
}

Vec add(std::span<const Scalar> a, std::span<const Scalar> b) {
  if (a.size() != b.size()) throw InputError("add: dimension mismatch");
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

Vec subtract(std::span<const Scalar> a, std::span<const Scalar> b) {
  if (a.size() != b.size()) throw InputError("subtract: dimension mismatch");
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Vec scaled(std::span<const Scalar> a, const Scalar& factor) {
  Vec out(a.begin(), a.end());
  for (auto& v : out) v *= factor;
  return out;
}

Scalar max_abs_norm(const Mat& m) {
  Scalar out = 0;
  for (std::size_t r = 0; r < m.rows(); ++r) out = std::max(out, max_abs_norm(m.row(r)));
  return out;
}

Scalar max_abs_norm(std::span<const Scalar> v) {
  Scalar out = 0;
  for (const auto& x : v) {
    Scalar a = abs(x);
    if (a > out) out = a;
  }
  return out;
}

Scalar induced_inf_norm(const Mat& m) {
  Scalar out = 0;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Scalar sum = 0;
    for (const auto& x : m.row(r)) sum += abs(x);
    if (sum > out) out = sum;
  }
  return out;
}

bool all_integer(const Mat& m) {
  for (std::size_t r = 0; r < m.rows(); ++r)
    if (!all_integer(m.row(r))) return false;
  return true;
}

bool all_integer(std::span<const Scalar> v) {
  return std::all_of(v.begin(), v.end(), [](const Scalar& x) { return is_integer(x); });
}

bool all_zero(const Mat& m) {
  for (std::size_t r = 0; r < m.rows(); ++r)
    if (!all_zero(m.row(r))) return false;
  return true;
}

bool all_zero(std::span<const Scalar> v) {
  return std::all_of(v.begin(), v.end(), [](const Scalar& x) { return x == 0; });
}

}  // namespace lagro
