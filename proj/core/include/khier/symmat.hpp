#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "khier/error.hpp"
#include "khier/scalar.hpp"

namespace khier {

// Dense row-major matrix, 0-based access.
template <class S>
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(std::size_t(rows) * cols, S(0)) {}
  Matrix(std::initializer_list<std::initializer_list<S>> init);

  static Matrix identity(int n) {
    Matrix I(n, n);
    for (int i = 0; i < n; ++i) I(i, i) = S(1);
    return I;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  S& operator()(int i, int j) { return data_[std::size_t(i) * cols_ + j]; }
  const S& operator()(int i, int j) const { return data_[std::size_t(i) * cols_ + j]; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw Error(ErrorCode::InvalidStructure, "matrix product: dimension mismatch");
    Matrix c(a.rows_, b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int l = 0; l < a.cols_; ++l) {
        const S& x = a(i, l);
        if (x == 0) continue;
        for (int j = 0; j < b.cols_; ++j) c(i, j) += x * b(l, j);
      }
    return c;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<S> data_;
};

template <class S>
Matrix<S>::Matrix(std::initializer_list<std::initializer_list<S>> init)
    : rows_(int(init.size())), cols_(init.size() ? int(init.begin()->size()) : 0) {
  data_.reserve(std::size_t(rows_) * cols_);
  for (const auto& row : init) {
    if (int(row.size()) != cols_) throw Error(ErrorCode::InvalidStructure, "ragged matrix initializer");
    for (const auto& v : row) data_.push_back(v);
  }
}

// Symmetric matrix; set() writes both triangles so entry(i,j) == entry(j,i).
template <class S>
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int n) : full_(n, n) {}
  // Takes the upper triangle of a square matrix.
  static SymMatrix from_upper(const Matrix<S>& m) {
    if (m.rows() != m.cols()) throw Error(ErrorCode::InvalidStructure, "symmetric matrix must be square");
    SymMatrix s(m.rows());
    for (int i = 0; i < m.rows(); ++i)
      for (int j = i; j < m.cols(); ++j) s.set(i, j, m(i, j));
    return s;
  }
  static SymMatrix identity(int n) { return from_upper(Matrix<S>::identity(n)); }

  int n() const { return full_.rows(); }
  const S& operator()(int i, int j) const { return full_(i, j); }
  void set(int i, int j, const S& v) {
    full_(i, j) = v;
    full_(j, i) = v;
  }
  void add(int i, int j, const S& v) {
    full_(i, j) += v;
    if (i != j) full_(j, i) += v;
  }
  const Matrix<S>& full() const { return full_; }
  bool is_zero() const {
    for (int i = 0; i < n(); ++i)
      for (int j = i; j < n(); ++j)
        if (full_(i, j) != 0) return false;
    return true;
  }
  bool operator==(const SymMatrix& o) const { return full_ == o.full_; }

  SymMatrix& operator+=(const SymMatrix& o) {
    check_same(o);
    for (int i = 0; i < n(); ++i)
      for (int j = 0; j < n(); ++j) full_(i, j) += o.full_(i, j);
    return *this;
  }
  friend SymMatrix operator+(SymMatrix a, const SymMatrix& b) { return a += b; }
  friend SymMatrix operator*(const S& c, SymMatrix a) {
    for (int i = 0; i < a.n(); ++i)
      for (int j = 0; j < a.n(); ++j) a.full_(i, j) *= c;
    return a;
  }

 private:
  void check_same(const SymMatrix& o) const {
    if (o.n() != n()) throw Error(ErrorCode::InvalidStructure, "symmetric matrix: dimension mismatch");
  }
  Matrix<S> full_;
};

// Sorted, distinct, 1-based row/column indices.
class IndexSet {
 public:
  IndexSet() = default;
  explicit IndexSet(std::vector<int> members);
  // {first, ..., last}, 1-based inclusive; empty when last < first.
  static IndexSet range(int first, int last);
  const std::vector<int>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  bool operator==(const IndexSet& o) const { return members_ == o.members_; }

 private:
  std::vector<int> members_;
};

template <class S>
SymMatrix<S> congruence(const SymMatrix<S>& M, const Matrix<S>& T) {
  if (T.rows() != M.n() || T.cols() != M.n())
    throw Error(ErrorCode::InvalidStructure, "congruence: T must be n x n");
  Matrix<S> prod = T.transpose() * M.full() * T;
  return SymMatrix<S>::from_upper(prod);
}

template <class S>
SymMatrix<S> principal_submatrix(const SymMatrix<S>& M, const IndexSet& set) {
  const auto& idx = set.members();
  for (int i : idx)
    if (i < 1 || i > M.n()) throw Error(ErrorCode::InvalidStructure, "principal_submatrix: index out of range");
  SymMatrix<S> sub(int(idx.size()));
  for (std::size_t a = 0; a < idx.size(); ++a)
    for (std::size_t b = a; b < idx.size(); ++b) sub.set(int(a), int(b), M(idx[a] - 1, idx[b] - 1));
  return sub;
}

// sum_i c_i M_i + base.
template <class S>
SymMatrix<S> combine(const std::vector<S>& c, const std::vector<SymMatrix<S>>& mats, SymMatrix<S> base) {
  for (std::size_t i = 0; i < c.size() && i < mats.size(); ++i) {
    if (c[i] == 0) continue;
    const auto& A = mats[i];
    for (int r = 0; r < A.n(); ++r)
      for (int s = r; s < A.n(); ++s)
        if (A(r, s) != 0) base.add(r, s, c[i] * A(r, s));
  }
  return base;
}

SymMatrix<Real> to_real(const SymMatrix<Rational>& M);
Matrix<Real> to_real(const Matrix<Rational>& M);

// Exact Gauss-Jordan; throws InvalidStructure when singular.
Matrix<Rational> inverse(const Matrix<Rational>& M);
Rational determinant(Matrix<Rational> M);

enum class Definiteness { PD, PSD, INDEFINITE };
const char* to_string(Definiteness d);

Real default_tolerance();  // 2^-64

struct Pivots {
  std::vector<Real> values;  // 1x1 pivots and eigenvalues of 2x2 pivots
  int zero_tail = 0;         // trailing pivots skipped as numerically zero
};

// Symmetric-pivoted LDL^T (Bunch-Kaufman tests on the largest diagonal,
// lowest index on ties).
Pivots ldlt_pivots(const SymMatrix<Real>& M, const Real& threshold);

// PD if all pivots > tol*(1+sum|m_ii|), PSD if all >= -tol*(1+sum|m_ii|).
Definiteness definiteness(const SymMatrix<Real>& M, const Real& tol = default_tolerance());
Definiteness definiteness(const SymMatrix<Rational>& M, const Real& tol = default_tolerance());

// definiteness() after scaling by D^-1/2 (D = diag M); used where entries
// span many orders of magnitude. Nonpositive diagonal falls back to the
// unscaled test.
Definiteness definiteness_equilibrated(const SymMatrix<Real>& M, const Real& tol = default_tolerance());

}  // namespace khier
