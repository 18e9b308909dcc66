#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "lagro/rational.hpp"

namespace lagro {

using Vec = std::vector<Scalar>;

/// Dense row-major matrix of exact rationals.
class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  /// Builds from nested rows; all rows must have the same length.
  Mat(std::initializer_list<std::initializer_list<Scalar>> rows);
  static Mat from_rows(const std::vector<Vec>& rows, std::size_t cols_if_empty = 0);
  static Mat identity(std::size_t n);

  [[nodiscard]] std::size_t rows() const { return rows_; }
  [[nodiscard]] std::size_t cols() const { return cols_; }
  [[nodiscard]] bool empty() const { return rows_ == 0 || cols_ == 0; }

  Scalar& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Scalar& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  [[nodiscard]] std::span<const Scalar> row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }
  [[nodiscard]] std::span<Scalar> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  [[nodiscard]] Vec column(std::size_t c) const;

  [[nodiscard]] Mat transpose() const;
  [[nodiscard]] Mat negated() const;
  /// Appends rows of `below` (column counts must agree).
  [[nodiscard]] Mat stacked(const Mat& below) const;
  /// [this | right] (row counts must agree).
  [[nodiscard]] Mat joined(const Mat& right) const;

  friend bool operator==(const Mat&, const Mat&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Scalar> data_;
};

/// M v; throws InputError on dimension mismatch.
Vec multiply(const Mat& m, std::span<const Scalar> v);
/// M' v.
Vec multiply_transposed(const Mat& m, std::span<const Scalar> v);
Scalar dot(std::span<const Scalar> a, std::span<const Scalar> b);
Vec add(std::span<const Scalar> a, std::span<const Scalar> b);
Vec subtract(std::span<const Scalar> a, std::span<const Scalar> b);
Vec scaled(std::span<const Scalar> a, const Scalar& factor);

/// Largest absolute entry; 0 for an empty matrix.
Scalar max_abs_norm(const Mat& m);
Scalar max_abs_norm(std::span<const Scalar> v);
/// Induced infinity norm: largest absolute row sum; 0 for an empty matrix.
Scalar induced_inf_norm(const Mat& m);

bool all_integer(const Mat& m);
bool all_integer(std::span<const Scalar> v);
bool all_zero(const Mat& m);
bool all_zero(std::span<const Scalar> v);

}  // namespace lagro
