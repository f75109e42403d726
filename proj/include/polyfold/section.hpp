#pragma once

#include <optional>
#include <vector>

#include "polyfold/polynomial.hpp"

namespace polyfold {

// Product over coordinates of the standard C∞ cutoff
//   b(t) = exp(1 - 1/(1 - t^2)) for |t| < 1, 0 otherwise,
// evaluated at t_i = (x_i - center_i)/radius_i. b(0) = 1.
struct BumpBox {
  VecQ center;
  VecQ radius;

  double eval(const VecD& x) const;
  double partial(int i, const VecD& x) const;
  bool inside_support(const VecD& x) const;

  friend bool operator==(const BumpBox& a, const BumpBox& b) {
    return a.center == b.center && a.radius == b.radius;
  }
  friend bool operator<(const BumpBox& a, const BumpBox& b);
};

// Scalar field on a chart: finite sum of polynomial terms, each optionally
// damped by a bump cutoff. Purely polynomial fields evaluate exactly on
// rational points.
class SmoothScalar {
public:
  struct Term {
    Polynomial poly;
    std::optional<BumpBox> bump;
  };

  SmoothScalar() = default;
  explicit SmoothScalar(Polynomial p);
  SmoothScalar(Polynomial p, BumpBox b);

  static SmoothScalar zero(int nvars) { return SmoothScalar(Polynomial(nvars)); }

  int nvars() const { return nvars_; }
  bool is_polynomial() const;
  bool is_zero() const { return terms_.empty(); }
  // The polynomial content; throws when a bump term is present.
  Polynomial as_polynomial() const;

  double eval(const VecD& x) const;
  Rational eval_exact(const VecQ& x) const;  // throws when a bump term is present
  double partial(int i, const VecD& x) const;

  SmoothScalar& operator+=(const SmoothScalar& o);
  friend SmoothScalar operator+(SmoothScalar a, const SmoothScalar& b) { return a += b; }
  SmoothScalar scaled(const Rational& c) const;

  // Precompose with a polynomial self-map of the chart. Bump terms require
  // the map to be coordinatewise affine of the form x_i -> a x_j + b
  // (signed permutation plus shift); throws otherwise.
  SmoothScalar precompose(const PolyMap& m) const;

  // Normalized term-list comparison.
  friend bool operator==(const SmoothScalar& a, const SmoothScalar& b);

  const std::vector<Term>& terms() const { return terms_; }

private:
  void normalize();
  int nvars_ = 0;
  std::vector<Term> terms_;  // kept sorted by bump key, polys merged
};

// Vector-valued section expression over a chart (one scalar per fiber
// coordinate).
struct SectionExpr {
  std::vector<SmoothScalar> comps;

  int fiber_dim() const { return int(comps.size()); }
  int nvars() const { return comps.empty() ? 0 : comps[0].nvars(); }
  bool is_polynomial() const;

  VecD eval(const VecD& x) const;
  VecQ eval_exact(const VecQ& x) const;
  MatD jacobian(const VecD& x) const;

  SectionExpr operator+(const SectionExpr& o) const;
  SectionExpr scaled(const Rational& c) const;
  SectionExpr precompose(const PolyMap& m) const;
  // Apply a constant matrix to the fiber values.
  SectionExpr transformed(const MatQ& m) const;

  static SectionExpr zero(int nvars, int fiber_dim);
  static SectionExpr from_polys(const PolyMap& polys);
  // Constant fiber vector e damped by the cutoff.
  static SectionExpr bump_vector(const BumpBox& b, const VecQ& e);

  friend bool operator==(const SectionExpr& a, const SectionExpr& b) {
    return a.comps == b.comps;
  }
};

}  // namespace polyfold
