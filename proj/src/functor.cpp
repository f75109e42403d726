#include "polyfold/functor.hpp"

#include <algorithm>
#include <stdexcept>

namespace polyfold {

bool GroupoidFunctor::is_valid(std::string* why) const {
  auto bad = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (!domain || !codomain) return bad("functor: missing endpoints");
  for (const auto& x : domain->objects) {
    auto it = object_map.find(x);
    if (it == object_map.end()) return bad("functor: no image for object " + x);
    if (!codomain->has_object(it->second)) return bad("functor: image object unknown");
  }
  for (const auto& [id, m] : domain->morphisms) {
    auto it = morphism_map.find(id);
    if (it == morphism_map.end()) return bad("functor: no image for morphism " + id);
    const auto& fm = codomain->mor(it->second);
    if (fm.src != on_object(m.src)) return bad("functor: source not preserved at " + id);
    if (fm.tgt != on_object(m.tgt)) return bad("functor: target not preserved at " + id);
  }
  for (const auto& x : domain->objects)
    if (on_morphism(domain->identity.at(x)) != codomain->identity.at(on_object(x)))
      return bad("functor: unit not preserved at " + x);
  for (const auto& [id, m] : domain->morphisms)
    if (on_morphism(domain->inverse.at(id)) != codomain->inverse.at(on_morphism(id)))
      return bad("functor: inverse not preserved at " + id);
  for (const auto& [ig, mg] : domain->morphisms)
    for (const auto& [ih, mh] : domain->morphisms) {
      if (mg.src != mh.tgt) continue;
      if (on_morphism(domain->compose(ig, ih)) !=
          codomain->compose(on_morphism(ig), on_morphism(ih)))
        return bad("functor: composition not preserved at (" + ig + ", " + ih + ")");
    }
  return true;
}

GroupoidFunctor GroupoidFunctor::identity(const FiniteGroupoid& g) {
  GroupoidFunctor f;
  f.domain = &g;
  f.codomain = &g;
  for (const auto& x : g.objects) f.object_map[x] = x;
  for (const auto& [id, m] : g.morphisms) f.morphism_map[id] = id;
  return f;
}

GroupoidFunctor GroupoidFunctor::compose(const GroupoidFunctor& outer,
                                         const GroupoidFunctor& inner) {
  if (inner.codomain != outer.domain)
    throw std::invalid_argument("functor compose: endpoints do not match");
  GroupoidFunctor f;
  f.domain = inner.domain;
  f.codomain = outer.codomain;
  for (const auto& [x, y] : inner.object_map) f.object_map[x] = outer.on_object(y);
  for (const auto& [m, n] : inner.morphism_map) f.morphism_map[m] = outer.on_morphism(n);
  return f;
}

GroupoidFunctor GroupoidFunctor::full_subcategory_inclusion(const FiniteGroupoid& sub,
                                                            const FiniteGroupoid& whole) {
  GroupoidFunctor f;
  f.domain = &sub;
  f.codomain = &whole;
  for (const auto& x : sub.objects) f.object_map[x] = x;
  for (const auto& [id, m] : sub.morphisms) f.morphism_map[id] = id;
  return f;
}

std::vector<int> induced_orbit_map(const GroupoidFunctor& f) {
  auto dom_orbits = orbit_space(*f.domain);
  auto cod_orbits = orbit_space(*f.codomain);
  std::vector<int> out(dom_orbits.size(), -1);
  for (std::size_t i = 0; i < dom_orbits.size(); ++i)
    out[i] = orbit_index(cod_orbits, f.on_object(dom_orbits[i].front()));
  return out;
}

bool is_equivalence(const GroupoidFunctor& f, EquivalenceDiagnostic* diag) {
  EquivalenceDiagnostic d;
  auto cod_orbits = orbit_space(*f.codomain);
  auto omap = induced_orbit_map(f);
  std::vector<int> hits(cod_orbits.size(), 0);
  for (int t : omap) {
    if (t >= 0) ++hits[t];
  }
  for (std::size_t i = 0; i < omap.size(); ++i)
    for (std::size_t j = i + 1; j < omap.size(); ++j)
      if (omap[i] == omap[j]) {
        d.orbit_injective = false;
        d.detail = "orbit map identifies two classes";
      }
  for (std::size_t t = 0; t < hits.size(); ++t)
    if (hits[t] == 0) {
      d.orbit_surjective = false;
      d.detail = "orbit map misses a class";
    }
  for (const auto& x : f.domain->objects) {
    auto sx = f.domain->stabilizer(x);
    auto sy = f.codomain->stabilizer(f.on_object(x));
    std::set<MorId> images;
    for (const auto& m : sx) images.insert(f.on_morphism(m));
    if (images.size() != sx.size()) {
      d.stabilizers_injective = false;
      d.detail = "stabilizer map not injective at " + x;
    }
    if (images.size() != sy.size()) {
      d.stabilizers_surjective = false;
      d.detail = "stabilizer map not surjective at " + x;
    }
  }
  if (diag) *diag = d;
  return d.ok();
}

bool naturally_equivalent(const GroupoidFunctor& f, const GroupoidFunctor& g,
                          const NaturalTransformation& tau, std::string* why) {
  if (f.domain != g.domain || f.codomain != g.codomain)
    throw std::invalid_argument("naturality: functors are not parallel");
  const auto& cod = *f.codomain;
  for (const auto& x : f.domain->objects) {
    auto it = tau.component.find(x);
    if (it == tau.component.end())
      throw std::invalid_argument("naturality: missing component at " + x);
    const auto& m = cod.mor(it->second);
    if (m.src != f.on_object(x) || m.tgt != g.on_object(x))
      throw std::invalid_argument("naturality: component at " + x + " has wrong endpoints");
  }
  for (const auto& [id, h] : f.domain->morphisms) {
    // τ(x') ∘ F(h) == G(h) ∘ τ(x)
    auto lhs = cod.compose(tau.component.at(h.tgt), f.on_morphism(id));
    auto rhs = cod.compose(g.on_morphism(id), tau.component.at(h.src));
    if (lhs != rhs) {
      if (why) *why = "square fails at morphism " + id;
      return false;
    }
  }
  return true;
}

std::optional<NaturalTransformation> find_natural_transformation(const GroupoidFunctor& f,
                                                                 const GroupoidFunctor& g) {
  if (f.domain != g.domain || f.codomain != g.codomain) return std::nullopt;
  const auto& dom = *f.domain;
  const auto& cod = *f.codomain;
  auto orbits = orbit_space(dom);

  NaturalTransformation tau;
  // Per orbit: choose the component at the representative, then propagate
  // along morphisms; consistency of every square is re-checked at the end.
  for (const auto& orbit : orbits) {
    const ObjId& rep = orbit.front();
    auto candidates = cod.hom(f.on_object(rep), g.on_object(rep));
    bool orbit_done = false;
    for (const auto& c : candidates) {
      std::map<ObjId, MorId> comp;
      comp[rep] = c;
      bool consistent = true;
      // BFS through morphisms out of assigned objects.
      std::vector<ObjId> queue = {rep};
      while (!queue.empty() && consistent) {
        ObjId x = queue.back();
        queue.pop_back();
        for (const auto& [id, m] : dom.morphisms) {
          if (m.src != x) continue;
          // τ(tgt) = G(h) ∘ τ(src) ∘ F(h)^{-1}
          MorId forced = cod.compose(
              cod.compose(g.on_morphism(id), comp.at(x)),
              cod.inverse.at(f.on_morphism(id)));
          auto it = comp.find(m.tgt);
          if (it == comp.end()) {
            comp[m.tgt] = forced;
            queue.push_back(m.tgt);
          } else if (it->second != forced) {
            consistent = false;
            break;
          }
        }
      }
      if (consistent && comp.size() == orbit.size()) {
        for (const auto& [x, t] : comp) tau.component[x] = t;
        orbit_done = true;
        break;
      }
    }
    if (!orbit_done) return std::nullopt;
  }
  std::string why;
  if (!naturally_equivalent(f, g, tau, &why)) return std::nullopt;
  return tau;
}

}  // namespace polyfold
