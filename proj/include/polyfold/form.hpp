#pragma once

#include <map>
#include <vector>

#include "polyfold/chart.hpp"
#include "polyfold/polynomial.hpp"

namespace polyfold {

// Differential k-form with polynomial coefficients on an n-dimensional
// chart: a coefficient per strictly increasing multi-index.
class DifferentialForm {
public:
  using Index = std::vector<int>;  // strictly increasing coordinate tuple

  DifferentialForm() = default;
  DifferentialForm(int nvars, int degree) : nvars_(nvars), degree_(degree) {}

  static DifferentialForm function(const Polynomial& f);          // 0-form
  static DifferentialForm dx(int nvars, int i);                   // basis 1-form
  static DifferentialForm monomial(const Polynomial& f, Index i); // f dx_I

  int nvars() const { return nvars_; }
  int degree() const { return degree_; }
  bool is_zero() const { return coeffs_.empty(); }

  // Adds f dx_idx; idx may be unsorted, the sign is adjusted. Duplicate
  // coordinates annihilate the term.
  void add(Index idx, const Polynomial& f);
  const std::map<Index, Polynomial>& coefficients() const { return coeffs_; }
  Polynomial coefficient(const Index& idx) const;
  // A top-degree form has a single coefficient against dx_0∧..∧dx_{n-1}.
  Polynomial top_coefficient() const;

  DifferentialForm operator+(const DifferentialForm& o) const;
  DifferentialForm scaled(const Rational& c) const;
  friend DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b);

  DifferentialForm exterior_derivative() const;

  // Pullback along a polynomial map f: R^m -> R^n (the form lives on n
  // variables; the result lives on m).
  DifferentialForm pullback(const PolyMap& f) const;

  friend bool operator==(const DifferentialForm& a, const DifferentialForm& b) {
    return a.nvars_ == b.nvars_ && a.degree_ == b.degree_ && a.coeffs_ == b.coeffs_;
  }

private:
  int nvars_ = 0;
  int degree_ = 0;
  std::map<Index, Polynomial> coeffs_;
};

// (T φ_g)^* ω == ω for every group element, checked symbolically.
bool form_group_invariant(const ChartGroupoid& cg, const DifferentialForm& omega,
                          std::string* why = nullptr);

// Gauss–Legendre quadrature of order 8 per cell over a box, with each
// dimension split into `cells_per_dim` cells.
double quadrature_box(const Polynomial& f, const Box& box, int cells_per_dim = 4);

}  // namespace polyfold
