#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "frobcong/rings.hpp"

namespace frobcong {

// Dense matrix over a finite field (PrimeField or ExtField).
template <class Field>
class Matrix {
 public:
  using value_type = typename Field::value_type;

  Matrix(Field F, size_t rows, size_t cols) : F_(std::move(F)), rows_(rows), cols_(cols), a_(rows * cols, F_.zero()) {}
  static Matrix from_ints(Field F, const std::vector<std::vector<i64>>& rows) {
    size_t c = rows.empty() ? 0 : rows[0].size();
    Matrix M(F, rows.size(), c);
    for (size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != c) throw DomainError("Matrix: ragged rows");
      for (size_t j = 0; j < c; ++j) M(i, j) = M.F_.from_int(rows[i][j]);
    }
    return M;
  }
  static Matrix identity(Field F, size_t n) {
    Matrix M(F, n, n);
    for (size_t i = 0; i < n; ++i) M(i, i) = M.F_.one();
    return M;
  }

  const Field& field() const { return F_; }
  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  value_type& operator()(size_t i, size_t j) { return a_[i * cols_ + j]; }
  const value_type& operator()(size_t i, size_t j) const { return a_[i * cols_ + j]; }
  bool operator==(const Matrix& o) const { return F_ == o.F_ && rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_; }

  Matrix operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw DomainError("Matrix: dimension mismatch in product");
    Matrix R(F_, rows_, o.cols_);
    for (size_t i = 0; i < rows_; ++i) {
      for (size_t k = 0; k < cols_; ++k) {
        if (F_.is_zero((*this)(i, k))) continue;
        for (size_t j = 0; j < o.cols_; ++j) F_.addmul(R(i, j), (*this)(i, k), o(k, j));
      }
    }
    return R;
  }

  std::string str() const {
    std::ostringstream os;
    for (size_t i = 0; i < rows_; ++i) {
      os << "[";
      for (size_t j = 0; j < cols_; ++j) os << (j ? " " : "") << F_.format((*this)(i, j));
      os << "]\n";
    }
    return os.str();
  }

  // row_i <- row_i - c * row_k
  void row_axpy(size_t i, size_t k, const value_type& c) {
    for (size_t j = 0; j < cols_; ++j) {
      if (!F_.is_zero((*this)(k, j))) (*this)(i, j) = F_.sub((*this)(i, j), F_.mul(c, (*this)(k, j)));
    }
  }
  void row_scale(size_t i, const value_type& c) {
    for (size_t j = 0; j < cols_; ++j) (*this)(i, j) = F_.mul(c, (*this)(i, j));
  }
  void row_swap(size_t i, size_t k) {
    for (size_t j = 0; j < cols_; ++j) std::swap((*this)(i, j), (*this)(k, j));
  }

 private:
  Field F_;
  size_t rows_, cols_;
  std::vector<value_type> a_;
};

template <class Field>
struct RrefResult {
  Matrix<Field> rref;
  std::vector<size_t> pivots;  // pivot column of each nonzero row
  Matrix<Field> transform;     // transform * input = rref
  size_t rank() const { return pivots.size(); }
};

// Reduced row echelon form; the pivot in each column is the first nonzero entry at or below the current row.
template <class Field>
RrefResult<Field> rref_mod(const Matrix<Field>& M) {
  const Field& F = M.field();
  Matrix<Field> R = M;
  Matrix<Field> T = Matrix<Field>::identity(F, M.rows());
  std::vector<size_t> piv;
  size_t r = 0;
  for (size_t c = 0; c < R.cols() && r < R.rows(); ++c) {
    size_t p = r;
    while (p < R.rows() && F.is_zero(R(p, c))) ++p;
    if (p == R.rows()) continue;
    R.row_swap(r, p);
    T.row_swap(r, p);
    auto inv = F.inv(R(r, c));
    R.row_scale(r, inv);
    T.row_scale(r, inv);
    for (size_t i = 0; i < R.rows(); ++i) {
      if (i == r || F.is_zero(R(i, c))) continue;
      auto f = R(i, c);
      R.row_axpy(i, r, f);
      T.row_axpy(i, r, f);
    }
    piv.push_back(c);
    ++r;
  }
  return {std::move(R), std::move(piv), std::move(T)};
}

// Solve x * A = b for a row vector x (A has one row per unknown). Returns nullopt with the
// first column where b leaves the row space when there is no solution.
template <class Field>
struct RowSolve {
  std::optional<std::vector<typename Field::value_type>> x;
  std::optional<size_t> first_bad_column;
};

template <class Field>
RowSolve<Field> solve_row_combination(const RrefResult<Field>& rr, std::vector<typename Field::value_type> b) {
  const Field& F = rr.rref.field();
  const size_t n = rr.transform.rows();
  std::vector<typename Field::value_type> x(n, F.zero());
  for (size_t k = 0; k < rr.pivots.size(); ++k) {
    size_t c = rr.pivots[k];
    auto coef = b[c];
    if (F.is_zero(coef)) continue;
    for (size_t j = 0; j < b.size(); ++j) b[j] = F.sub(b[j], F.mul(coef, rr.rref(k, j)));
    for (size_t i = 0; i < n; ++i) F.addmul(x[i], coef, rr.transform(k, i));
  }
  for (size_t j = 0; j < b.size(); ++j) {
    if (!F.is_zero(b[j])) return {std::nullopt, j};
  }
  return {std::move(x), std::nullopt};
}

}  // namespace frobcong
