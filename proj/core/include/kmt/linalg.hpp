#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "kmt/cyclotomic.hpp"

namespace kmt {

using Vec = std::vector<Cyc>;
using Mat = std::vector<Vec>;  // row-major

bool is_zero(const Vec& v);
Vec add(const Vec& a, const Vec& b);
Vec scale(const Cyc& s, const Vec& v);
/// a += s * b (sizes must agree)
void axpy(Vec& a, const Cyc& s, const Vec& b);

Mat identity(std::size_t n);
Mat multiply(const Mat& a, const Mat& b);
Vec apply(const Mat& a, const Vec& v);
/// Row vector times matrix.
Vec apply_left(const Vec& row, const Mat& a);
Mat transpose(const Mat& a, std::size_t cols);

/// Rank via exact Gaussian elimination.
std::size_t rank(Mat m);
/// Basis of {x : m x = 0}; pivots are chosen at the first nonzero column.
std::vector<Vec> nullspace(const Mat& m, std::size_t cols);
/// Inverse of a square matrix, or nullopt if singular.
std::optional<Mat> inverse(const Mat& m);
/// Some x with m x = b, or nullopt if inconsistent.
std::optional<Vec> solve(const Mat& m, const Vec& b, std::size_t cols);

/// Incrementally grown span with reduced echelon rows. Every stored row
/// remembers how it was assembled from the inserted vectors, so membership
/// queries can return explicit coefficients.
class EchelonBasis {
 public:
  explicit EchelonBasis(std::size_t dim = 0) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t rank() const { return rows_.size(); }
  std::size_t inserted() const { return inserted_; }

  /// Returns true when v enlarged the span. Every call counts as an inserted
  /// vector (index = number of previous calls) for coefficient tracking.
  bool insert(const Vec& v);
  bool contains(const Vec& v) const;
  /// Coefficients c with v = sum_i c_i * inserted_i, or nullopt.
  std::optional<Vec> express(const Vec& v) const;
  /// Reduced rows (a basis of the span).
  const std::vector<Vec>& rows() const { return rows_; }

 private:
  // Reduces v in place; returns the combination of inserted vectors subtracted.
  Vec reduce(Vec& v) const;

  std::size_t dim_;
  std::size_t inserted_ = 0;
  std::vector<Vec> rows_;
  std::vector<std::size_t> pivots_;
  std::vector<Vec> combos_;  // rows_[i] = sum_j combos_[i][j] * inserted_j
};

}  // namespace kmt
