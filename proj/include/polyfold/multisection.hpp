#pragma once

#include <optional>
#include <vector>

#include "polyfold/bundle.hpp"

namespace polyfold {

struct WeightedSection {
  SectionExpr section;
  Rational weight;   // positive
  bool is_plus = true;
};

// Weight functor on a chart bundle, presented by finitely many sections with
// positive rational weights summing to 1. The value at a fiber vector is the
// sum of the weights of the sections passing through it.
class Multisection {
public:
  Multisection() = default;
  Multisection(const ChartBundle* bundle, std::vector<WeightedSection> sections);

  static Multisection trivial(const ChartBundle& b);

  const ChartBundle* bundle() const { return bundle_; }
  const std::vector<WeightedSection>& sections() const { return sections_; }
  Rational total_weight() const;

  bool is_trivial() const;

  // Weight sums to 1, weights positive, fiber arities match, and the induced
  // functor is morphism-invariant (symbolically where the data allows,
  // sampled otherwise).
  bool validate(std::string* why = nullptr) const;

  // Exact evaluation: rational point, rational fiber vector, polynomial
  // sections. Throws std::logic_error when a bump term forces floats.
  Rational evaluate(const VecQ& x, const VecQ& e) const;
  // Float path with fiber-vector equality tolerance.
  Rational evaluate(const VecD& x, const VecD& e, double tol = 1e-9) const;

  // Distinct fiber values over x with their weights (exact path).
  std::vector<std::pair<VecQ, Rational>> support_at(const VecQ& x) const;
  std::vector<std::pair<VecD, Rational>> support_at(const VecD& x, double tol = 1e-9) const;

  // Pointwise max of section norms, sup over a sample grid (exact reading
  // for constant sections).
  double norm_sup(const AuxiliaryNorm& n, int grid_per_dim = 33) const;

private:
  void dedup();
  const ChartBundle* bundle_ = nullptr;
  std::vector<WeightedSection> sections_;
};

// Convolution sum: sections added pairwise, weights multiplied.
Multisection sum(const Multisection& a, const Multisection& b);

// Convex combination: union of the section lists with scaled weights.
Multisection convex_combination(const Rational& alpha, const Multisection& one,
                                const Multisection& zero);

// Symmetrization of a single section over the chart group: sections
// h_g(φ_g(y)) = μ(g)·h(y) with uniform weights 1/#G. `support` is the
// invariant region that must contain supp h; bump-backed sections are
// checked against it (support leaking out is an error).
Multisection symmetrize(const ChartBundle& b, const SectionExpr& h, const Box& support);

// Parametrized family: t ↦ symmetrization of h_t = Σ t_j h^j.
struct ParamMultisection {
  const ChartBundle* bundle = nullptr;
  std::vector<SectionExpr> basis;
  Box support;  // invariant region containing every basis support

  int param_dim() const { return int(basis.size()); }
  // Requires |t|_∞ < 1.
  Multisection freeze(const VecQ& t) const;
};

// Sup over the sample grid of the norm of one section.
double section_norm_sup(const ChartBundle& b, const SectionExpr& s, const AuxiliaryNorm& n,
                        int grid_per_dim = 33);

}  // namespace polyfold
