#include "polyfold/form.hpp"

#include <algorithm>
#include <stdexcept>

namespace polyfold {

namespace {

// Sorts idx in place; returns the permutation sign, or 0 on duplicates.
int sort_index(DifferentialForm::Index& idx) {
  int sign = 1;
  for (std::size_t i = 1; i < idx.size(); ++i)
    for (std::size_t j = i; j > 0 && idx[j] < idx[j - 1]; --j) {
      std::swap(idx[j], idx[j - 1]);
      sign = -sign;
    }
  for (std::size_t i = 1; i < idx.size(); ++i)
    if (idx[i] == idx[i - 1]) return 0;
  return sign;
}

}  // namespace

DifferentialForm DifferentialForm::function(const Polynomial& f) {
  DifferentialForm out(f.nvars(), 0);
  out.add({}, f);
  return out;
}

DifferentialForm DifferentialForm::dx(int nvars, int i) {
  DifferentialForm out(nvars, 1);
  out.add({i}, Polynomial::constant(nvars, Rational(1)));
  return out;
}

DifferentialForm DifferentialForm::monomial(const Polynomial& f, Index i) {
  DifferentialForm out(f.nvars(), int(i.size()));
  out.add(std::move(i), f);
  return out;
}

void DifferentialForm::add(Index idx, const Polynomial& f) {
  if (int(idx.size()) != degree_) throw std::invalid_argument("form: index degree mismatch");
  if (f.nvars() != nvars_) throw std::invalid_argument("form: coefficient arity mismatch");
  for (int i : idx)
    if (i < 0 || i >= nvars_) throw std::invalid_argument("form: index out of range");
  int sign = sort_index(idx);
  if (sign == 0 || f.is_zero()) return;
  auto it = coeffs_.find(idx);
  Polynomial add = sign > 0 ? f : -f;
  if (it == coeffs_.end()) {
    coeffs_.emplace(std::move(idx), std::move(add));
  } else {
    it->second += add;
    if (it->second.is_zero()) coeffs_.erase(it);
  }
}

Polynomial DifferentialForm::coefficient(const Index& idx) const {
  auto it = coeffs_.find(idx);
  return it == coeffs_.end() ? Polynomial(nvars_) : it->second;
}

Polynomial DifferentialForm::top_coefficient() const {
  if (degree_ != nvars_) throw std::logic_error("form: not a top-degree form");
  Index all;
  for (int i = 0; i < nvars_; ++i) all.push_back(i);
  return coefficient(all);
}

DifferentialForm DifferentialForm::operator+(const DifferentialForm& o) const {
  if (nvars_ != o.nvars_ || degree_ != o.degree_)
    throw std::invalid_argument("form: shape mismatch in sum");
  DifferentialForm out(nvars_, degree_);
  out.coeffs_ = coeffs_;
  for (const auto& [idx, f] : o.coeffs_) {
    auto it = out.coeffs_.find(idx);
    if (it == out.coeffs_.end()) {
      out.coeffs_.emplace(idx, f);
    } else {
      it->second += f;
      if (it->second.is_zero()) out.coeffs_.erase(it);
    }
  }
  return out;
}

DifferentialForm DifferentialForm::scaled(const Rational& c) const {
  DifferentialForm out(nvars_, degree_);
  if (c.is_zero()) return out;
  for (const auto& [idx, f] : coeffs_) out.coeffs_.emplace(idx, f.scaled(c));
  return out;
}

DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b) {
  if (a.nvars_ != b.nvars_) throw std::invalid_argument("form: wedge arity mismatch");
  DifferentialForm out(a.nvars_, a.degree_ + b.degree_);
  for (const auto& [ia, fa] : a.coeffs_)
    for (const auto& [ib, fb] : b.coeffs_) {
      DifferentialForm::Index idx = ia;
      idx.insert(idx.end(), ib.begin(), ib.end());
      out.add(std::move(idx), fa * fb);
    }
  return out;
}

DifferentialForm DifferentialForm::exterior_derivative() const {
  DifferentialForm out(nvars_, degree_ + 1);
  for (const auto& [idx, f] : coeffs_)
    for (int j = 0; j < nvars_; ++j) {
      Polynomial df = f.derivative(j);
      if (df.is_zero()) continue;
      Index widx;
      widx.push_back(j);
      widx.insert(widx.end(), idx.begin(), idx.end());
      out.add(std::move(widx), df);
    }
  return out;
}

DifferentialForm DifferentialForm::pullback(const PolyMap& f) const {
  if (int(f.size()) != nvars_) throw std::invalid_argument("form: pullback arity mismatch");
  int m = f.empty() ? nvars_ : f[0].nvars();
  DifferentialForm out(m, degree_);
  // Differentials of the component functions.
  std::vector<DifferentialForm> df;
  for (int i = 0; i < nvars_; ++i) {
    DifferentialForm d(m, 1);
    for (int j = 0; j < m; ++j) d.add({j}, f[i].derivative(j));
    df.push_back(std::move(d));
  }
  for (const auto& [idx, coef] : coeffs_) {
    DifferentialForm term = DifferentialForm::function(coef.compose(f));
    for (int i : idx) term = wedge(term, df[i]);
    out = out + term;
  }
  return out;
}

bool form_group_invariant(const ChartGroupoid& cg, const DifferentialForm& omega,
                          std::string* why) {
  for (const auto& g : cg.group.elements)
    if (!(omega.pullback(cg.act(g)) == omega)) {
      if (why) *why = "form is not invariant under " + g;
      return false;
    }
  return true;
}

namespace {

// 8-point Gauss–Legendre rule on [-1, 1].
constexpr double kGlNode[8] = {-0.9602898564975363, -0.7966664774136267,
                               -0.5255324099163290, -0.1834346424956498,
                               0.1834346424956498,  0.5255324099163290,
                               0.7966664774136267,  0.9602898564975363};
constexpr double kGlWeight[8] = {0.1012285362903763, 0.2223810344533745,
                                 0.3137066458778873, 0.3626837833783620,
                                 0.3626837833783620, 0.3137066458778873,
                                 0.2223810344533745, 0.1012285362903763};

void quad_recurse(const Polynomial& f, const std::vector<std::pair<double, double>>& cells,
                  int dim, VecD& x, double w, double& acc) {
  if (dim == int(x.size())) {
    acc += w * f.eval(x);
    return;
  }
  auto [lo, hi] = cells[dim];
  double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  for (int k = 0; k < 8; ++k) {
    x[dim] = mid + half * kGlNode[k];
    quad_recurse(f, cells, dim + 1, x, w * half * kGlWeight[k], acc);
  }
}

}  // namespace

double quadrature_box(const Polynomial& f, const Box& box, int cells_per_dim) {
  int n = int(box.size());
  double acc = 0;
  // Iterate the cell grid (cells_per_dim^n cells).
  std::vector<int> cell(n, 0);
  while (true) {
    std::vector<std::pair<double, double>> cells(n);
    for (int i = 0; i < n; ++i) {
      double lo = box[i].lo.to_double(), hi = box[i].hi.to_double();
      double step = (hi - lo) / cells_per_dim;
      cells[i] = {lo + cell[i] * step, lo + (cell[i] + 1) * step};
    }
    VecD x(n, 0.0);
    quad_recurse(f, cells, 0, x, 1.0, acc);
    int i = 0;
    for (; i < n; ++i) {
      if (++cell[i] < cells_per_dim) break;
      cell[i] = 0;
    }
    if (i == n) break;
  }
  return acc;
}

}  // namespace polyfold
