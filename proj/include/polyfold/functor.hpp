#pragma once

#include <map>
#include <optional>
#include <string>

#include "polyfold/groupoid.hpp"

namespace polyfold {

// Functor between finite groupoids, given by its object and morphism maps.
struct GroupoidFunctor {
  const FiniteGroupoid* domain = nullptr;
  const FiniteGroupoid* codomain = nullptr;
  std::map<ObjId, ObjId> object_map;
  std::map<MorId, MorId> morphism_map;

  ObjId on_object(const ObjId& x) const { return object_map.at(x); }
  MorId on_morphism(const MorId& m) const { return morphism_map.at(m); }

  // Checks the homomorphism equations against the structure maps.
  bool is_valid(std::string* why = nullptr) const;

  static GroupoidFunctor identity(const FiniteGroupoid& g);
  static GroupoidFunctor compose(const GroupoidFunctor& outer, const GroupoidFunctor& inner);
  // Inclusion of the full subcategory on a subset of objects.
  static GroupoidFunctor full_subcategory_inclusion(const FiniteGroupoid& sub,
                                                    const FiniteGroupoid& whole);
};

struct EquivalenceDiagnostic {
  bool orbit_injective = true;
  bool orbit_surjective = true;
  bool stabilizers_injective = true;
  bool stabilizers_surjective = true;
  std::string detail;
  bool ok() const {
    return orbit_injective && orbit_surjective && stabilizers_injective &&
           stabilizers_surjective;
  }
};

// Equivalence = bijection on orbit spaces + isomorphism on every stabilizer.
bool is_equivalence(const GroupoidFunctor& f, EquivalenceDiagnostic* diag = nullptr);

// Natural transformation between parallel functors.
struct NaturalTransformation {
  std::map<ObjId, MorId> component;  // x -> morphism F(x) -> G(x) in the codomain
};

// Checks component endpoints and all naturality squares.
// Throws std::invalid_argument on malformed witnesses (wrong endpoints).
bool naturally_equivalent(const GroupoidFunctor& f, const GroupoidFunctor& g,
                          const NaturalTransformation& tau, std::string* why = nullptr);

// Search for a natural transformation F ≃ G. Components are forced along
// morphisms, so only one free choice per orbit of the domain remains.
std::optional<NaturalTransformation> find_natural_transformation(const GroupoidFunctor& f,
                                                                 const GroupoidFunctor& g);

// Orbit map on classes induced by a functor: index of codomain orbit per
// domain orbit (orbits in orbit_space order).
std::vector<int> induced_orbit_map(const GroupoidFunctor& f);

}  // namespace polyfold
