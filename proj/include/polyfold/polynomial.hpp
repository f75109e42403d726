#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "polyfold/linalg.hpp"
#include "polyfold/rational.hpp"

namespace polyfold {

// Interval with rational endpoints.
struct Interval {
  Rational lo, hi;
};
using Box = std::vector<Interval>;

// Multivariate polynomial over x0..x_{nvars-1} with rational coefficients.
class Polynomial {
public:
  using Exponents = std::vector<std::uint32_t>;

  Polynomial() : nvars_(0) {}
  explicit Polynomial(int nvars) : nvars_(nvars) {}

  static Polynomial constant(int nvars, const Rational& c);
  static Polynomial variable(int nvars, int i);
  // Affine a0 + sum a_i x_i; coeffs = {a1..an}, c = a0.
  static Polynomial affine(const VecQ& coeffs, const Rational& c);

  int nvars() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_value() const;  // valid when is_constant()
  int total_degree() const;
  bool is_affine() const { return total_degree() <= 1; }

  void add_term(const Exponents& e, const Rational& c);

  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& p);
  Polynomial& operator-=(const Polynomial& p);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial scaled(const Rational& c) const;

  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.nvars_ == b.nvars_ && a.terms_ == b.terms_;
  }

  Rational eval(const VecQ& x) const;
  double eval(const VecD& x) const;

  Polynomial derivative(int i) const;

  // Substitute x_i := subst[i]; all subst share a common variable count.
  Polynomial compose(const std::vector<Polynomial>& subst) const;

  // Fix variable i to a constant; result has nvars-1 variables
  // (remaining variables are renumbered in order).
  Polynomial restrict_var(int i, const Rational& value) const;

  // Exact integral over a product of intervals (dimension == nvars).
  Rational integrate_box(const Box& box) const;

  const std::map<Exponents, Rational>& terms() const { return terms_; }

  std::string str() const;

private:
  int nvars_;
  std::map<Exponents, Rational> terms_;
};

// Polynomial map R^n -> R^m given componentwise.
using PolyMap = std::vector<Polynomial>;

PolyMap identity_map(int n);
PolyMap compose(const PolyMap& outer, const PolyMap& inner);
bool operator==(const PolyMap& a, const PolyMap& b);
VecQ eval(const PolyMap& f, const VecQ& x);
VecD eval(const PolyMap& f, const VecD& x);
MatQ jacobian(const PolyMap& f, const VecQ& x);
MatD jacobian(const PolyMap& f, const VecD& x);

}  // namespace polyfold
