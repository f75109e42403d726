#include "polyfold/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace polyfold {

VecD to_double(const VecQ& v) {
  VecD out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].to_double();
  return out;
}

MatD to_double(const MatQ& m) {
  MatD out(m.rows, m.cols);
  for (std::size_t i = 0; i < m.a.size(); ++i) out.a[i] = m.a[i].to_double();
  return out;
}

namespace {

// Reduced row echelon form; returns pivot columns. Exact.
std::vector<int> rref(MatQ& m) {
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < m.cols && r < m.rows; ++c) {
    int p = -1;
    for (int i = r; i < m.rows; ++i)
      if (!m(i, c).is_zero()) {
        p = i;
        break;
      }
    if (p < 0) continue;
    for (int j = 0; j < m.cols; ++j) std::swap(m(p, j), m(r, j));
    Rational inv = Rational(1) / m(r, c);
    for (int j = 0; j < m.cols; ++j) m(r, j) *= inv;
    for (int i = 0; i < m.rows; ++i) {
      if (i == r || m(i, c).is_zero()) continue;
      Rational f = m(i, c);
      for (int j = 0; j < m.cols; ++j) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

std::vector<int> rref(MatD& m, double tol) {
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < m.cols && r < m.rows; ++c) {
    int p = -1;
    double best = tol;
    for (int i = r; i < m.rows; ++i)
      if (std::abs(m(i, c)) > best) {
        best = std::abs(m(i, c));
        p = i;
      }
    if (p < 0) continue;
    for (int j = 0; j < m.cols; ++j) std::swap(m(p, j), m(r, j));
    double inv = 1.0 / m(r, c);
    for (int j = 0; j < m.cols; ++j) m(r, j) *= inv;
    for (int i = 0; i < m.rows; ++i) {
      if (i == r || m(i, c) == 0.0) continue;
      double f = m(i, c);
      for (int j = 0; j < m.cols; ++j) m(i, j) -= f * m(r, j);
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <class M>
M kernel_from_rref(const M& m, const std::vector<int>& pivots) {
  std::vector<bool> is_pivot(m.cols, false);
  for (int c : pivots) is_pivot[c] = true;
  int nk = m.cols - int(pivots.size());
  M k(m.cols, nk);
  int col = 0;
  for (int c = 0; c < m.cols; ++c) {
    if (is_pivot[c]) continue;
    k(c, col) = 1;
    for (std::size_t r = 0; r < pivots.size(); ++r) k(pivots[r], col) = -m(int(r), c);
    ++col;
  }
  return k;
}

}  // namespace

int rank(MatQ m) { return int(rref(m).size()); }
int rank(MatD m, double tol) { return int(rref(m, tol).size()); }

Rational det(MatQ m) {
  if (m.rows != m.cols) throw std::invalid_argument("det: matrix not square");
  Rational d(1);
  for (int c = 0; c < m.cols; ++c) {
    int p = -1;
    for (int i = c; i < m.rows; ++i)
      if (!m(i, c).is_zero()) {
        p = i;
        break;
      }
    if (p < 0) return Rational(0);
    if (p != c) {
      for (int j = 0; j < m.cols; ++j) std::swap(m(p, j), m(c, j));
      d = -d;
    }
    d *= m(c, c);
    Rational inv = Rational(1) / m(c, c);
    for (int i = c + 1; i < m.rows; ++i) {
      if (m(i, c).is_zero()) continue;
      Rational f = m(i, c) * inv;
      for (int j = c; j < m.cols; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return d;
}

double det(MatD m) {
  if (m.rows != m.cols) throw std::invalid_argument("det: matrix not square");
  double d = 1.0;
  for (int c = 0; c < m.cols; ++c) {
    int p = c;
    for (int i = c + 1; i < m.rows; ++i)
      if (std::abs(m(i, c)) > std::abs(m(p, c))) p = i;
    if (m(p, c) == 0.0) return 0.0;
    if (p != c) {
      for (int j = 0; j < m.cols; ++j) std::swap(m(p, j), m(c, j));
      d = -d;
    }
    d *= m(c, c);
    for (int i = c + 1; i < m.rows; ++i) {
      double f = m(i, c) / m(c, c);
      for (int j = c; j < m.cols; ++j) m(i, j) -= f * m(c, j);
    }
  }
  return d;
}

MatQ kernel_basis(const MatQ& m) {
  MatQ r = m;
  auto pivots = rref(r);
  return kernel_from_rref(r, pivots);
}

MatD kernel_basis(const MatD& m, double tol) {
  MatD r = m;
  auto pivots = rref(r, tol);
  return kernel_from_rref(r, pivots);
}

bool solve(const MatQ& m, const VecQ& b, VecQ& x) {
  if (m.rows != m.cols || int(b.size()) != m.rows)
    throw std::invalid_argument("solve: shape mismatch");
  MatQ aug(m.rows, m.cols + 1);
  for (int r = 0; r < m.rows; ++r) {
    for (int c = 0; c < m.cols; ++c) aug(r, c) = m(r, c);
    aug(r, m.cols) = b[r];
  }
  auto pivots = rref(aug);
  if (int(pivots.size()) != m.cols) return false;
  x.assign(m.cols, Rational(0));
  for (int r = 0; r < m.cols; ++r) x[r] = aug(r, m.cols);
  return true;
}

bool solve(const MatD& m, const VecD& b, VecD& x, double tol) {
  if (m.rows != m.cols || int(b.size()) != m.rows)
    throw std::invalid_argument("solve: shape mismatch");
  MatD aug(m.rows, m.cols + 1);
  for (int r = 0; r < m.rows; ++r) {
    for (int c = 0; c < m.cols; ++c) aug(r, c) = m(r, c);
    aug(r, m.cols) = b[r];
  }
  auto pivots = rref(aug, tol);
  if (int(pivots.size()) != m.cols || (!pivots.empty() && pivots.back() == m.cols))
    return false;
  x.assign(m.cols, 0.0);
  for (int r = 0; r < m.cols; ++r) x[r] = aug(r, m.cols);
  return true;
}

double smallest_singular_value(const MatD& m) {
  // Jacobi eigenvalue iteration on the (small) Gram matrix m^T m.
  int n = m.cols;
  MatD g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0;
      for (int r = 0; r < m.rows; ++r) s += m(r, i) * m(r, j);
      g(i, j) = s;
    }
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += g(p, q) * g(p, q);
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(g(p, q)) < 1e-300) continue;
        double theta = (g(q, q) - g(p, p)) / (2 * g(p, q));
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (int k = 0; k < n; ++k) {
          double gpk = g(p, k), gqk = g(q, k);
          g(p, k) = c * gpk - s * gqk;
          g(q, k) = s * gpk + c * gqk;
        }
        for (int k = 0; k < n; ++k) {
          double gkp = g(k, p), gkq = g(k, q);
          g(k, p) = c * gkp - s * gkq;
          g(k, q) = s * gkp + c * gkq;
        }
      }
  }
  double lmin = g(0, 0);
  for (int i = 1; i < n; ++i) lmin = std::min(lmin, g(i, i));
  return std::sqrt(std::max(0.0, lmin));
}

bool spans_sum_to_full(const MatD& a, const MatD& b, double tol) {
  if (a.rows != b.rows) throw std::invalid_argument("spans: row mismatch");
  MatD j(a.rows, a.cols + b.cols);
  for (int r = 0; r < a.rows; ++r) {
    for (int c = 0; c < a.cols; ++c) j(r, c) = a(r, c);
    for (int c = 0; c < b.cols; ++c) j(r, a.cols + c) = b(r, c);
  }
  return rank(j, tol) == a.rows;
}

bool span_contained(const MatD& a, const MatD& b, double tol) {
  if (a.rows != b.rows) throw std::invalid_argument("spans: row mismatch");
  int rb = rank(b, tol);
  MatD j(a.rows, a.cols + b.cols);
  for (int r = 0; r < a.rows; ++r) {
    for (int c = 0; c < b.cols; ++c) j(r, c) = b(r, c);
    for (int c = 0; c < a.cols; ++c) j(r, b.cols + c) = a(r, c);
  }
  return rank(j, tol) == rb;
}

}  // namespace polyfold
