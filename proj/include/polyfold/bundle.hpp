#pragma once

#include <functional>
#include <map>
#include <string>

#include "polyfold/chart.hpp"
#include "polyfold/functor.hpp"
#include "polyfold/section.hpp"

namespace polyfold {

// ---------------------------------------------------------------------------
// Finite tier: vector-space fibers over a finite groupoid with a linear
// transport matrix per morphism.

struct FiniteStrongBundle {
  const FiniteGroupoid* base = nullptr;
  std::map<ObjId, int> fiber_dim;
  std::map<MorId, MatQ> mu;  // morphism g: x -> y  =>  matrix E_x -> E_y

  const MatQ& mu_of(const MorId& m) const;
  // Identity transport at units, cocycle over the composition table,
  // invertibility, fiber dimension constant on orbits.
  ValidationReport validate() const;
};

struct FiniteSection {
  const FiniteStrongBundle* bundle = nullptr;
  std::map<ObjId, VecQ> value;
  bool is_plus = false;

  // μ(φ)·F(src φ) == F(tgt φ) for every morphism.
  bool is_functorial(std::string* why = nullptr) const;
};

// Bundle map covering a functor of the bases, linear on fibers.
struct FiniteBundleMap {
  const FiniteStrongBundle* source = nullptr;  // E' over X'
  const FiniteStrongBundle* target = nullptr;  // E  over X
  GroupoidFunctor base_map;                    // X' -> X
  std::map<ObjId, MatQ> fiber_map;             // per object of X': E'_y -> E_{φ(y)}

  bool validate(std::string* why = nullptr) const;  // μ-compatibility
  bool is_equivalence() const;  // base equivalence + invertible fibers
};

// Φ(Φ*(F)(y)) = F(φ(y)); requires invertible fiber maps.
FiniteSection pullback_section(const FiniteBundleMap& phi, const FiniteSection& f);
// Defined for bundle equivalences; inverse of the pullback.
FiniteSection pushforward_section(const FiniteBundleMap& phi, const FiniteSection& f);

// Natural equivalence of bundle maps covering τ on the bases:
// μ(τ(x))·Φ_x == Ψ_x for every object x of the source base.
bool bundle_maps_naturally_equivalent(const FiniteBundleMap& phi, const FiniteBundleMap& psi,
                                      const NaturalTransformation& tau,
                                      std::string* why = nullptr);

// ---------------------------------------------------------------------------
// Chart tier: a trivialized R^m bundle over a chart groupoid; the transport
// along Γ(g, y) is a constant invertible matrix per group element.

struct ChartBundle {
  ChartGroupoid base;
  int fiber_dim = 0;
  std::map<std::string, MatQ> mu;  // group element -> transport matrix

  int dim() const { return base.dim(); }
  const MatQ& mu_of(const std::string& g) const;
  ValidationReport validate() const;

  static ChartBundle trivial_line(const ChartGroupoid& cg);
};

struct ChartSection {
  SectionExpr expr;
  bool is_plus = false;

  VecD eval(const VecD& x) const { return expr.eval(x); }
  VecQ eval_exact(const VecQ& x) const { return expr.eval_exact(x); }
  MatD jacobian(const VecD& x) const { return expr.jacobian(x); }
};

// Functoriality μ(g)·F(y) = F(φ_g(y)); symbolic for polynomial sections,
// sampled on the stratum lattice otherwise.
bool section_equivariant(const ChartBundle& b, const SectionExpr& s,
                         std::string* why = nullptr, double tol = 1e-9);

// ---------------------------------------------------------------------------
// Auxiliary norms: fiberwise norms, morphism-invariant. The semicontinuity
// axiom of the infinite-dimensional theory is vacuous for finite fibers and
// is not modeled; reflexivity of the fibers is automatic.

struct AuxiliaryNorm {
  std::function<double(const VecD& x, const VecD& e)> fn;
  std::string desc;

  double operator()(const VecD& x, const VecD& e) const { return fn(x, e); }

  static AuxiliaryNorm euclidean();
  // |e|_2 scaled by a positive polynomial weight in the base point.
  static AuxiliaryNorm weighted_euclidean(const Polynomial& w);
};

// Fiberwise norm axioms, sampled: positivity, absolute homogeneity,
// triangle inequality.
bool check_norm_axioms(const ChartBundle& b, const AuxiliaryNorm& n, unsigned seed,
                       std::string* why = nullptr);

// N(μ(g, e)) == N(e) over sampled points and fiber vectors.
bool check_norm_invariance(const ChartBundle& b, const AuxiliaryNorm& n, unsigned seed,
                           double tol = 1e-9);

// Group-averaged norm  (1/#G) Σ_g raw(φ_g(x), μ(g)·e); morphism-invariant by
// construction. Throws std::invalid_argument when `raw` fails the sampled
// norm axioms.
AuxiliaryNorm average_norm(const ChartBundle& b, const AuxiliaryNorm& raw, unsigned seed = 1);

}  // namespace polyfold
