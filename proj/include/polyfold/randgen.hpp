#pragma once

#include <memory>
#include <random>

#include "polyfold/curves.hpp"
#include "polyfold/fibered.hpp"

namespace polyfold {

// Deterministic random fixtures for property checks.
struct FixtureGen {
  std::mt19937_64 rng;

  explicit FixtureGen(unsigned seed) : rng(seed) {}

  int pick(int lo, int hi);  // inclusive

  FiniteGroup random_group();

  // Action groupoid of a random group on a disjoint union of coset spaces
  // (free orbits, fixed points, and proper-stabilizer orbits all occur).
  std::shared_ptr<FiniteGroupoid> random_action_groupoid(int max_orbits = 3);

  // A full-subcategory inclusion hitting every orbit: an equivalence into
  // the given groupoid. Returns the subgroupoid and the inclusion.
  struct SubInclusion {
    std::shared_ptr<FiniteGroupoid> sub;
    GroupoidFunctor inclusion;
  };
  SubInclusion random_equivalence_into(const std::shared_ptr<FiniteGroupoid>& whole);

  // A functor that is deliberately not an equivalence (constant functor).
  GroupoidFunctor constant_functor(const std::shared_ptr<FiniteGroupoid>& from,
                                   const std::shared_ptr<FiniteGroupoid>& to);

  // Random connected nodal surface.
  NodalSurface random_connected_surface(int max_components = 5);
};

}  // namespace polyfold
