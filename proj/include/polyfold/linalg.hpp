#pragma once

#include <vector>

#include "polyfold/rational.hpp"

namespace polyfold {

using VecQ = std::vector<Rational>;
using VecD = std::vector<double>;

VecD to_double(const VecQ& v);

// Dense row-major matrix with entries of type T (Rational or double).
template <class T>
struct Matrix {
  int rows = 0;
  int cols = 0;
  std::vector<T> a;

  Matrix() = default;
  Matrix(int r, int c) : rows(r), cols(c), a(std::size_t(r) * c, T(0)) {}

  T& operator()(int r, int c) { return a[std::size_t(r) * cols + c]; }
  const T& operator()(int r, int c) const { return a[std::size_t(r) * cols + c]; }

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::vector<T> apply(const std::vector<T>& x) const {
    std::vector<T> y(rows, T(0));
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) y[r] = y[r] + (*this)(r, c) * x[c];
    return y;
  }

  Matrix mul(const Matrix& o) const {
    Matrix m(rows, o.cols);
    for (int r = 0; r < rows; ++r)
      for (int k = 0; k < cols; ++k)
        for (int c = 0; c < o.cols; ++c)
          m(r, c) = m(r, c) + (*this)(r, k) * o(k, c);
    return m;
  }

  friend bool operator==(const Matrix& x, const Matrix& y) {
    return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
  }
};

using MatQ = Matrix<Rational>;
using MatD = Matrix<double>;

MatD to_double(const MatQ& m);

// Exact rank via Gaussian elimination.
int rank(MatQ m);
// Float rank with a pivot threshold.
int rank(MatD m, double tol = 1e-9);

// Determinant; exact for MatQ, partial-pivot LU for MatD. Matrices must be square.
Rational det(MatQ m);
double det(MatD m);

// Kernel basis (columns of the returned matrix span ker m).
MatQ kernel_basis(const MatQ& m);
MatD kernel_basis(const MatD& m, double tol = 1e-9);

// Solve m x = b for square m; returns false when singular.
bool solve(const MatQ& m, const VecQ& b, VecQ& x);
bool solve(const MatD& m, const VecD& b, VecD& x, double tol = 1e-13);

// Smallest singular value, via Jacobi eigenvalues of m^T m.
double smallest_singular_value(const MatD& m);

// True when span(columns of a) + span(columns of b) is all of R^n
// (n = common number of rows).
bool spans_sum_to_full(const MatD& a, const MatD& b, double tol = 1e-9);

// Column-span containment: every column of a lies in span(columns of b).
bool span_contained(const MatD& a, const MatD& b, double tol = 1e-9);

}  // namespace polyfold
