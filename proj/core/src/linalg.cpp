#include "kmt/linalg.hpp"

#include <stdexcept>

namespace kmt {

bool is_zero(const Vec& v) {
  for (const auto& x : v)
    if (!x.is_zero()) return false;
  return true;
}

Vec add(const Vec& a, const Vec& b) {
  Vec r = a;
  for (std::size_t i = 0; i < b.size(); ++i) r[i] += b[i];
  return r;
}

Vec scale(const Cyc& s, const Vec& v) {
  Vec r(v.size());
  if (s.is_zero()) return r;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!v[i].is_zero()) r[i] = s * v[i];
  return r;
}

void axpy(Vec& a, const Cyc& s, const Vec& b) {
  if (s.is_zero()) return;
  if (a.size() < b.size()) a.resize(b.size());
  for (std::size_t i = 0; i < b.size(); ++i)
    if (!b[i].is_zero()) a[i] += s * b[i];
}

Mat identity(std::size_t n) {
  Mat m(n, Vec(n));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = Cyc(1);
  return m;
}

Mat multiply(const Mat& a, const Mat& b) {
  std::size_t cols = b.empty() ? 0 : b[0].size();
  Mat r(a.size(), Vec(cols));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t k = 0; k < a[i].size(); ++k)
      if (!a[i][k].is_zero()) axpy(r[i], a[i][k], b[k]);
  return r;
}

Vec apply(const Mat& a, const Vec& v) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    Cyc s;
    for (std::size_t k = 0; k < v.size(); ++k)
      if (!v[k].is_zero() && !a[i][k].is_zero()) s += a[i][k] * v[k];
    r[i] = s;
  }
  return r;
}

Vec apply_left(const Vec& row, const Mat& a) {
  std::size_t cols = a.empty() ? 0 : a[0].size();
  Vec r(cols);
  for (std::size_t k = 0; k < row.size(); ++k)
    if (!row[k].is_zero()) axpy(r, row[k], a[k]);
  return r;
}

Mat transpose(const Mat& a, std::size_t cols) {
  Mat t(cols, Vec(a.size()));
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < cols; ++j) t[j][i] = a[i][j];
  return t;
}

namespace {

// Reduced row echelon form in place; returns pivot columns.
std::vector<std::size_t> rref(Mat& m, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < m.size(); ++col) {
    std::size_t piv = row;
    while (piv < m.size() && m[piv][col].is_zero()) ++piv;
    if (piv == m.size()) continue;
    std::swap(m[piv], m[row]);
    Cyc inv = m[row][col].inverse();
    for (std::size_t k = col; k < m[row].size(); ++k)
      if (!m[row][k].is_zero()) m[row][k] *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][col].is_zero()) continue;
      Cyc f = m[r][col];
      for (std::size_t k = col; k < m[r].size(); ++k)
        if (!m[row][k].is_zero()) m[r][k] -= f * m[row][k];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

std::size_t rank(Mat m) {
  if (m.empty()) return 0;
  return rref(m, m[0].size()).size();
}

std::vector<Vec> nullspace(const Mat& m, std::size_t cols) {
  Mat a = m;
  auto pivots = rref(a, cols);
  std::vector<bool> is_pivot(cols, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::vector<Vec> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    Vec x(cols);
    x[free] = Cyc(1);
    for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = -a[r][free];
    basis.push_back(std::move(x));
  }
  return basis;
}

std::optional<Mat> inverse(const Mat& m) {
  std::size_t n = m.size();
  Mat a = m;
  for (std::size_t i = 0; i < n; ++i) {
    a[i].resize(2 * n);
    a[i][n + i] = Cyc(1);
  }
  auto pivots = rref(a, n);
  if (pivots.size() != n) return std::nullopt;
  Mat r(n, Vec(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r[i][j] = a[i][n + j];
  return r;
}

std::optional<Vec> solve(const Mat& m, const Vec& b, std::size_t cols) {
  Mat a = m;
  for (std::size_t i = 0; i < a.size(); ++i) {
    a[i].resize(cols);
    a[i].push_back(b[i]);
  }
  auto pivots = rref(a, cols + 1);
  Vec x(cols);
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    if (pivots[r] == cols) return std::nullopt;
    x[pivots[r]] = a[r][cols];
  }
  return x;
}

Vec EchelonBasis::reduce(Vec& v) const {
  Vec combo(inserted_);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const Cyc f = v[pivots_[i]];
    if (f.is_zero()) continue;
    for (std::size_t k = pivots_[i]; k < dim_; ++k)
      if (!rows_[i][k].is_zero()) v[k] -= f * rows_[i][k];
    axpy(combo, f, combos_[i]);
  }
  return combo;
}

bool EchelonBasis::insert(const Vec& v) {
  if (v.size() != dim_) throw std::invalid_argument("echelon: dimension mismatch");
  Vec w = v;
  Vec combo = reduce(w);
  std::size_t idx = inserted_++;
  for (auto& c : combos_) c.resize(inserted_);
  std::size_t piv = 0;
  while (piv < dim_ && w[piv].is_zero()) ++piv;
  if (piv == dim_) return false;
  // w = v - sum combo_j * inserted_j
  Vec row_combo(inserted_);
  for (std::size_t j = 0; j < combo.size(); ++j) row_combo[j] = -combo[j];
  row_combo[idx] = Cyc(1);
  Cyc inv = w[piv].inverse();
  w = scale(inv, w);
  row_combo = scale(inv, row_combo);
  // keep rows fully reduced at the new pivot
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    Cyc f = rows_[i][piv];
    if (f.is_zero()) continue;
    axpy(rows_[i], -f, w);
    axpy(combos_[i], -f, row_combo);
  }
  rows_.push_back(std::move(w));
  pivots_.push_back(piv);
  combos_.push_back(std::move(row_combo));
  return true;
}

bool EchelonBasis::contains(const Vec& v) const {
  Vec w = v;
  reduce(w);
  return is_zero(w);
}

std::optional<Vec> EchelonBasis::express(const Vec& v) const {
  Vec w = v;
  Vec combo = reduce(w);
  if (!is_zero(w)) return std::nullopt;
  combo.resize(inserted_);
  return combo;
}

}  // namespace kmt
