#pragma once

#include <map>
#include <string>

#include "polyfold/groupoid.hpp"
#include "polyfold/stratify.hpp"

namespace polyfold {

// A finite group acting on a corner domain by polynomial maps. Morphisms
// are the formal pairs Γ(g, y): y -> φ_g(y).
struct ChartGroupoid {
  FiniteGroup group;
  CornerDomain domain;
  std::map<std::string, PolyMap> action;  // group element -> self-map of the domain

  int dim() const { return domain.dim(); }
  const PolyMap& act(const std::string& g) const;
  VecQ apply(const std::string& g, const VecQ& x) const;
  VecD apply(const std::string& g, const VecD& x) const;

  // Homomorphism property is checked symbolically (exact composition of the
  // polynomial maps); domain and face preservation on the stratum lattice.
  bool validate(std::string* why = nullptr) const;

  // Elements fixing x.
  std::vector<std::string> point_stabilizer(const VecQ& x) const;
  std::vector<std::string> point_stabilizer(const VecD& x, double tol = 1e-9) const;

  // Elements acting as the identity map of the whole chart (detected
  // symbolically; exact for polynomial actions).
  std::vector<std::string> ineffective_kernel() const;
  int effective_order() const;

  // Orbit of a point, deduplicated, sorted lexicographically.
  std::vector<VecD> orbit(const VecD& x, double tol = 1e-9) const;

  // Formal morphism Γ(g, y): y -> φ_g(y).
  struct FormalMorphism {
    std::string element;
    VecQ source;
    VecQ target;
  };
  FormalMorphism gamma(const std::string& g, const VecQ& y) const;

  static ChartGroupoid trivial(const CornerDomain& d);
};

// Morphism-invariance of the degeneracy index and face structure, checked
// on the stratum lattice.
bool is_face_structured(const ChartGroupoid& cg, std::string* why = nullptr);

// Equivalence of chart groupoids: a group isomorphism together with an
// equivariant polynomial diffeomorphism of the underlying domains.
struct ChartEquivalence {
  const ChartGroupoid* source = nullptr;
  const ChartGroupoid* target = nullptr;
  std::map<std::string, std::string> group_iso;  // source element -> target element
  PolyMap map;                                   // source domain -> target domain

  VecQ apply(const VecQ& x) const { return eval(map, x); }
  VecD apply(const VecD& x) const { return eval(map, x); }

  // Group isomorphism, symbolic equivariance map∘φ_g = φ'_{ρ(g)}∘map,
  // Jacobian nondegeneracy and domain mapping on the stratum lattice.
  bool validate(std::string* why = nullptr) const;

  static ChartEquivalence identity(const ChartGroupoid& cg);
};

// Face images under a validated chart equivalence: every face of the source
// maps into exactly one face of the target; returns the assignment.
std::vector<std::pair<Face, Face>> face_correspondence(const ChartEquivalence& eq,
                                                       std::string* why = nullptr);

}  // namespace polyfold
