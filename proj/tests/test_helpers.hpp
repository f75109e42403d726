#pragma once

#include <map>

#include "polyfold/fibered.hpp"
#include "polyfold/functor.hpp"
#include "polyfold/groupoid.hpp"

namespace polyfold::testing {

// Z/2 acting on {a, b, c}, swapping a and b.
inline FiniteGroupoid z2_swap_abc() {
  auto g = FiniteGroup::cyclic(2);
  std::map<std::pair<std::string, ObjId>, ObjId> act;
  for (const auto& x : {"a", "b", "c"}) act[{"g0", x}] = x;
  act[{"g1", "a"}] = "b";
  act[{"g1", "b"}] = "a";
  act[{"g1", "c"}] = "c";
  return action_groupoid(g, {"a", "b", "c"}, act);
}

// One-object groupoid with stabilizer Z/n.
inline FiniteGroupoid one_object_cyclic(int n) {
  auto g = FiniteGroup::cyclic(n);
  std::map<std::pair<std::string, ObjId>, ObjId> act;
  for (const auto& e : g.elements) act[{e, "pt"}] = "pt";
  return action_groupoid(g, {"pt"}, act);
}

// Discrete groupoid (identities only).
inline FiniteGroupoid discrete(const std::vector<ObjId>& objs) {
  auto g = FiniteGroup::cyclic(1);
  std::map<std::pair<std::string, ObjId>, ObjId> act;
  for (const auto& x : objs) act[{"g0", x}] = x;
  return action_groupoid(g, objs, act);
}

// Full subcategory of `whole` on the given objects.
inline FiniteGroupoid full_subcategory(const FiniteGroupoid& whole,
                                       const std::vector<ObjId>& objs) {
  FiniteGroupoid s;
  s.objects = objs;
  s.sort_objects();
  auto keep = [&](const ObjId& x) { return s.has_object(x); };
  for (const auto& [id, m] : whole.morphisms)
    if (keep(m.src) && keep(m.tgt)) s.morphisms[id] = m;
  for (const auto& x : objs) s.identity[x] = whole.identity.at(x);
  for (const auto& [id, m] : s.morphisms) s.inverse[id] = whole.inverse.at(id);
  for (const auto& [pair, res] : whole.compose_table)
    if (s.morphisms.count(pair.first) && s.morphisms.count(pair.second))
      s.compose_table[pair] = res;
  return s;
}

}  // namespace polyfold::testing
