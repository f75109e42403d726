#include "polyfold/randgen.hpp"

#include <algorithm>

namespace polyfold {

int FixtureGen::pick(int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

FiniteGroup FixtureGen::random_group() {
  switch (pick(0, 4)) {
    case 0: return FiniteGroup::cyclic(2);
    case 1: return FiniteGroup::cyclic(3);
    case 2: return FiniteGroup::cyclic(4);
    case 3: return FiniteGroup::klein_four();
    default: return FiniteGroup::symmetric3();
  }
}

namespace {

// Subgroups (as element lists) available for coset actions.
std::vector<std::vector<std::string>> subgroup_pool(const FiniteGroup& g) {
  std::vector<std::vector<std::string>> subs;
  subs.push_back({g.unit()});     // free orbit
  subs.push_back(g.elements);     // fixed point
  // All cyclic subgroups.
  for (const auto& e : g.elements) {
    std::vector<std::string> cyc{g.unit()};
    std::string cur = e;
    while (cur != g.unit()) {
      cyc.push_back(cur);
      cur = g.mul(cur, e);
    }
    std::sort(cyc.begin(), cyc.end());
    if (std::find(subs.begin(), subs.end(), cyc) == subs.end()) subs.push_back(cyc);
  }
  return subs;
}

}  // namespace

std::shared_ptr<FiniteGroupoid> FixtureGen::random_action_groupoid(int max_orbits) {
  FiniteGroup g = random_group();
  auto subs = subgroup_pool(g);
  int orbits = pick(1, max_orbits);

  std::vector<ObjId> carrier;
  std::map<std::pair<std::string, ObjId>, ObjId> action;
  for (int orbit = 0; orbit < orbits; ++orbit) {
    const auto& h = subs[pick(0, int(subs.size()) - 1)];
    // Cosets of h: points of the orbit.
    std::vector<std::vector<std::string>> cosets;
    std::set<std::string> seen;
    for (const auto& a : g.elements) {
      if (seen.count(a)) continue;
      std::vector<std::string> coset;
      for (const auto& s : h) coset.push_back(g.mul(a, s));
      std::sort(coset.begin(), coset.end());
      for (const auto& c : coset) seen.insert(c);
      cosets.push_back(coset);
    }
    auto coset_name = [&](const std::vector<std::string>& c) {
      return "o" + std::to_string(orbit) + "_" + c.front();
    };
    for (const auto& c : cosets) carrier.push_back(coset_name(c));
    for (const auto& a : g.elements)
      for (const auto& c : cosets) {
        // a · (cH) = (ac)H
        std::vector<std::string> moved;
        for (const auto& e : c) moved.push_back(g.mul(a, e));
        std::sort(moved.begin(), moved.end());
        action[{a, coset_name(c)}] = coset_name(moved);
      }
  }
  return std::make_shared<FiniteGroupoid>(action_groupoid(g, carrier, action));
}

FixtureGen::SubInclusion FixtureGen::random_equivalence_into(
    const std::shared_ptr<FiniteGroupoid>& whole) {
  auto orbits = orbit_space(*whole);
  std::vector<ObjId> keep;
  for (const auto& orbit : orbits) {
    // Keep a random nonempty subset of each orbit.
    std::set<std::size_t> chosen;
    chosen.insert(std::size_t(pick(0, int(orbit.size()) - 1)));
    for (std::size_t i = 0; i < orbit.size(); ++i)
      if (pick(0, 1)) chosen.insert(i);
    for (auto i : chosen) keep.push_back(orbit[i]);
  }
  std::sort(keep.begin(), keep.end());

  auto sub = std::make_shared<FiniteGroupoid>();
  sub->objects = keep;
  auto keeps = [&](const ObjId& x) {
    return std::binary_search(keep.begin(), keep.end(), x);
  };
  for (const auto& [id, m] : whole->morphisms)
    if (keeps(m.src) && keeps(m.tgt)) sub->morphisms[id] = m;
  for (const auto& x : keep) sub->identity[x] = whole->identity.at(x);
  for (const auto& [id, m] : sub->morphisms) sub->inverse[id] = whole->inverse.at(id);
  for (const auto& [pair, res] : whole->compose_table)
    if (sub->morphisms.count(pair.first) && sub->morphisms.count(pair.second))
      sub->compose_table[pair] = res;

  SubInclusion out;
  out.sub = sub;
  out.inclusion.domain = sub.get();
  out.inclusion.codomain = whole.get();
  for (const auto& x : sub->objects) out.inclusion.object_map[x] = x;
  for (const auto& [id, m] : sub->morphisms) out.inclusion.morphism_map[id] = id;
  return out;
}

GroupoidFunctor FixtureGen::constant_functor(const std::shared_ptr<FiniteGroupoid>& from,
                                             const std::shared_ptr<FiniteGroupoid>& to) {
  GroupoidFunctor f;
  f.domain = from.get();
  f.codomain = to.get();
  const ObjId& target = to->objects[std::size_t(pick(0, int(to->objects.size()) - 1))];
  for (const auto& x : from->objects) f.object_map[x] = target;
  for (const auto& [id, m] : from->morphisms) f.morphism_map[id] = to->identity.at(target);
  return f;
}

NodalSurface FixtureGen::random_connected_surface(int max_components) {
  NodalSurface s;
  int n = pick(1, max_components);
  for (int i = 0; i < n; ++i)
    s.components.push_back({"c" + std::to_string(i), pick(0, 2)});
  int next_point = 0;
  auto fresh = [&]() { return "p" + std::to_string(next_point++); };
  // Spanning tree of nodes keeps the surface connected.
  for (int i = 1; i < n; ++i) {
    int j = pick(0, i - 1);
    s.nodes.push_back({{fresh(), "c" + std::to_string(i)},
                       {fresh(), "c" + std::to_string(j)}});
  }
  // Extra nodes, self-nodes allowed.
  int extra = pick(0, 2);
  for (int e = 0; e < extra; ++e) {
    int i = pick(0, n - 1), j = pick(0, n - 1);
    s.nodes.push_back({{fresh(), "c" + std::to_string(i)},
                       {fresh(), "c" + std::to_string(j)}});
  }
  // Marked points.
  int marks = pick(0, 3);
  for (int m = 0; m < marks; ++m)
    s.marked.push_back({fresh(), "c" + std::to_string(pick(0, n - 1))});
  return s;
}

}  // namespace polyfold
