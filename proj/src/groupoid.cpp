#include "polyfold/groupoid.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <stdexcept>

namespace polyfold {

bool FiniteGroupoid::has_object(const ObjId& x) const {
  return std::find(objects.begin(), objects.end(), x) != objects.end();
}

const Morphism& FiniteGroupoid::mor(const MorId& m) const {
  auto it = morphisms.find(m);
  if (it == morphisms.end()) throw std::out_of_range("groupoid: unknown morphism " + m);
  return it->second;
}

MorId FiniteGroupoid::compose(const MorId& g, const MorId& h) const {
  auto it = compose_table.find({g, h});
  if (it == compose_table.end())
    throw std::out_of_range("groupoid: composition undefined for (" + g + ", " + h + ")");
  return it->second;
}

std::vector<MorId> FiniteGroupoid::hom(const ObjId& x, const ObjId& y) const {
  std::vector<MorId> out;
  for (const auto& [id, m] : morphisms)
    if (m.src == x && m.tgt == y) out.push_back(id);
  return out;
}

std::vector<MorId> FiniteGroupoid::stabilizer(const ObjId& x) const { return hom(x, x); }

void FiniteGroupoid::sort_objects() { std::sort(objects.begin(), objects.end()); }

ValidationReport validate_groupoid(const FiniteGroupoid& g) {
  ValidationReport rep;
  auto fail = [&](const std::string& what, const std::string& detail) {
    rep.ok = false;
    rep.failure = what;
    rep.detail = detail;
    return rep;
  };

  for (const auto& [id, m] : g.morphisms) {
    if (!g.has_object(m.src) || !g.has_object(m.tgt))
      return fail("source-target", "morphism " + id + " has unknown endpoint");
  }

  // Units exist and are endomorphisms.
  for (const auto& x : g.objects) {
    auto it = g.identity.find(x);
    if (it == g.identity.end()) return fail("unit", "no identity at " + x);
    const auto& m = g.mor(it->second);
    if (m.src != x || m.tgt != x)
      return fail("unit", "identity at " + x + " is not an endomorphism");
  }

  // Index morphisms by source and target.
  std::map<ObjId, std::vector<MorId>> by_src, by_tgt;
  for (const auto& [id, m] : g.morphisms) {
    by_src[m.src].push_back(id);
    by_tgt[m.tgt].push_back(id);
  }

  // Composition table covers exactly the composable pairs.
  std::size_t composable_count = 0;
  for (const auto& [ih, mh] : g.morphisms) {
    auto it_src = by_src.find(mh.tgt);
    if (it_src == by_src.end()) continue;
    for (const auto& ig : it_src->second) {
      ++composable_count;
      auto it = g.compose_table.find({ig, ih});
      if (it == g.compose_table.end())
        return fail("composition-table",
                    "composable pair (" + ig + ", " + ih + ") has no entry");
      const auto& mc = g.mor(it->second);
      if (mc.src != mh.src || mc.tgt != g.mor(ig).tgt)
        return fail("source-target", "compose(" + ig + ", " + ih + ") endpoints wrong");
    }
  }
  if (g.compose_table.size() != composable_count)
    return fail("composition-table", "entry present for a non-composable pair");
  for (const auto& [pair, res] : g.compose_table) {
    auto ig = g.morphisms.find(pair.first);
    auto ih = g.morphisms.find(pair.second);
    if (ig == g.morphisms.end() || ih == g.morphisms.end() ||
        g.morphisms.find(res) == g.morphisms.end())
      return fail("composition-table", "entry references unknown morphism");
    if (ig->second.src != ih->second.tgt)
      return fail("composition-table", "entry present for a non-composable pair");
  }

  // Units are two-sided.
  for (const auto& [id, m] : g.morphisms) {
    if (g.compose(g.identity.at(m.tgt), id) != id)
      return fail("unit", "left unit fails at " + id);
    if (g.compose(id, g.identity.at(m.src)) != id)
      return fail("unit", "right unit fails at " + id);
  }

  // Inverses are two-sided.
  for (const auto& [id, m] : g.morphisms) {
    auto it = g.inverse.find(id);
    if (it == g.inverse.end()) return fail("inverse", "no inverse for " + id);
    const auto& mi = g.mor(it->second);
    if (mi.src != m.tgt || mi.tgt != m.src)
      return fail("inverse", "inverse of " + id + " has wrong endpoints");
    if (g.compose(id, it->second) != g.identity.at(m.tgt))
      return fail("inverse", id + " ∘ " + it->second + " is not a unit");
    if (g.compose(it->second, id) != g.identity.at(m.src))
      return fail("inverse", it->second + " ∘ " + id + " is not a unit");
  }

  // Associativity over all composable triples.
  for (const auto& [ib, mb] : g.morphisms) {
    auto outer = by_src.find(mb.tgt);
    auto inner = by_tgt.find(mb.src);
    if (outer == by_src.end() || inner == by_tgt.end()) continue;
    for (const auto& ia : outer->second)
      for (const auto& ic : inner->second)
        if (g.compose(g.compose(ia, ib), ic) != g.compose(ia, g.compose(ib, ic)))
          return fail("associativity", "(" + ia + "∘" + ib + ")∘" + ic +
                                           " != " + ia + "∘(" + ib + "∘" + ic + ")");
  }

  return rep;
}

std::vector<std::vector<ObjId>> orbit_space(const FiniteGroupoid& g) {
  std::map<ObjId, ObjId> parent;
  for (const auto& x : g.objects) parent[x] = x;
  std::function<ObjId(const ObjId&)> find = [&](const ObjId& x) -> ObjId {
    ObjId r = x;
    while (parent[r] != r) r = parent[r];
    return r;
  };
  for (const auto& [id, m] : g.morphisms) {
    ObjId a = find(m.src), b = find(m.tgt);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::map<ObjId, std::vector<ObjId>> classes;
  for (const auto& x : g.objects) classes[find(x)].push_back(x);
  std::vector<std::vector<ObjId>> out;
  for (auto& [rep, cls] : classes) {
    std::sort(cls.begin(), cls.end());
    out.push_back(cls);
  }
  return out;
}

int orbit_index(const std::vector<std::vector<ObjId>>& orbits, const ObjId& x) {
  for (std::size_t i = 0; i < orbits.size(); ++i)
    if (std::binary_search(orbits[i].begin(), orbits[i].end(), x)) return int(i);
  return -1;
}

std::string FiniteGroup::mul(const std::string& g, const std::string& h) const {
  auto it = table.find({g, h});
  if (it == table.end()) throw std::out_of_range("group: missing product (" + g + "," + h + ")");
  return it->second;
}

std::string FiniteGroup::inv(const std::string& g) const {
  for (const auto& h : elements)
    if (mul(g, h) == unit()) return h;
  throw std::logic_error("group: no inverse for " + g);
}

bool FiniteGroup::is_valid(std::string* why) const {
  auto bad = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (elements.empty()) return bad("empty element list");
  for (const auto& a : elements)
    for (const auto& b : elements) {
      auto it = table.find({a, b});
      if (it == table.end()) return bad("missing product");
      if (std::find(elements.begin(), elements.end(), it->second) == elements.end())
        return bad("product outside element list");
    }
  const auto& e = unit();
  for (const auto& a : elements)
    if (mul(e, a) != a || mul(a, e) != a) return bad("first element is not a unit");
  for (const auto& a : elements) {
    bool inv_found = false;
    for (const auto& b : elements)
      if (mul(a, b) == e && mul(b, a) == e) inv_found = true;
    if (!inv_found) return bad("element without inverse: " + a);
  }
  for (const auto& a : elements)
    for (const auto& b : elements)
      for (const auto& c : elements)
        if (mul(mul(a, b), c) != mul(a, mul(b, c))) return bad("associativity fails");
  return true;
}

FiniteGroup FiniteGroup::cyclic(int n) {
  FiniteGroup g;
  for (int i = 0; i < n; ++i) g.elements.push_back("g" + std::to_string(i));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      g.table[{g.elements[i], g.elements[j]}] = g.elements[(i + j) % n];
  return g;
}

FiniteGroup FiniteGroup::klein_four() {
  FiniteGroup g;
  g.elements = {"e", "a", "b", "c"};
  auto idx = [&](const std::string& s) {
    return int(std::find(g.elements.begin(), g.elements.end(), s) - g.elements.begin());
  };
  // xor-composition on {0,1,2,3}
  for (const auto& x : g.elements)
    for (const auto& y : g.elements) g.table[{x, y}] = g.elements[idx(x) ^ idx(y)];
  return g;
}

FiniteGroup FiniteGroup::symmetric3() {
  // Permutations of {0,1,2} named by their one-line image.
  std::vector<std::array<int, 3>> perms = {
      {0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {1, 0, 2}, {0, 2, 1}, {2, 1, 0}};
  auto name = [](const std::array<int, 3>& p) {
    return "p" + std::to_string(p[0]) + std::to_string(p[1]) + std::to_string(p[2]);
  };
  FiniteGroup g;
  for (const auto& p : perms) g.elements.push_back(name(p));
  for (const auto& p : perms)
    for (const auto& q : perms) {
      std::array<int, 3> pq{};  // (p∘q)(i) = p[q[i]]
      for (int i = 0; i < 3; ++i) pq[i] = p[q[i]];
      g.table[{name(p), name(q)}] = name(pq);
    }
  return g;
}

FiniteGroupoid action_groupoid(const FiniteGroup& grp, const std::vector<ObjId>& carrier,
                               const std::map<std::pair<std::string, ObjId>, ObjId>& action) {
  std::string why;
  if (!grp.is_valid(&why)) throw std::invalid_argument("action_groupoid: bad group: " + why);
  // The action must be a homomorphism into permutations of the carrier.
  auto act = [&](const std::string& g, const ObjId& x) {
    auto it = action.find({g, x});
    if (it == action.end())
      throw std::invalid_argument("action_groupoid: action undefined at (" + g + "," + x + ")");
    return it->second;
  };
  for (const auto& x : carrier) {
    if (act(grp.unit(), x) != x)
      throw std::invalid_argument("action_groupoid: unit does not act trivially");
    for (const auto& g : grp.elements)
      for (const auto& h : grp.elements)
        if (act(grp.mul(g, h), x) != act(g, act(h, x)))
          throw std::invalid_argument("action_groupoid: action is not a homomorphism");
  }

  FiniteGroupoid out;
  out.objects = carrier;
  out.sort_objects();
  auto mid = [](const std::string& g, const ObjId& x) { return g + "@" + x; };
  for (const auto& g : grp.elements)
    for (const auto& x : carrier)
      out.morphisms[mid(g, x)] = Morphism{mid(g, x), x, act(g, x)};
  for (const auto& x : carrier) out.identity[x] = mid(grp.unit(), x);
  for (const auto& g : grp.elements)
    for (const auto& x : carrier)
      out.inverse[mid(g, x)] = mid(grp.inv(g), act(g, x));
  // (h, g·x) ∘ (g, x) = (hg, x)
  for (const auto& g : grp.elements)
    for (const auto& x : carrier)
      for (const auto& h : grp.elements)
        out.compose_table[{mid(h, act(g, x)), mid(g, x)}] = mid(grp.mul(h, g), x);
  return out;
}

}  // namespace polyfold
