#include "polyfold/curves.hpp"

#include <algorithm>
#include <stdexcept>

namespace polyfold {

bool NodalSurface::has_component(const std::string& id) const {
  for (const auto& c : components)
    if (c.id == id) return true;
  return false;
}

int NodalSurface::genus_of(const std::string& id) const {
  for (const auto& c : components)
    if (c.id == id) return c.genus;
  throw std::out_of_range("surface: unknown component " + id);
}

bool NodalSurface::is_valid(std::string* why) const {
  auto bad = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  std::set<std::string> comp_ids;
  for (const auto& c : components) {
    if (c.genus < 0) return bad("negative genus");
    if (!comp_ids.insert(c.id).second) return bad("duplicate component id " + c.id);
  }
  std::set<std::string> pts;
  for (const auto& m : marked) {
    if (!has_component(m.comp)) return bad("marked point on unknown component");
    if (!pts.insert(m.point).second) return bad("duplicate point id " + m.point);
  }
  std::set<std::string> nodal_pts;
  for (const auto& [x, y] : nodes) {
    if (!has_component(x.comp) || !has_component(y.comp))
      return bad("nodal point on unknown component");
    if (x.point == y.point) return bad("nodal pair with identical points");
    for (const auto& p : {x, y}) {
      if (!pts.insert(p.point).second) return bad("nodal pairs are not disjoint");
      nodal_pts.insert(p.point);
    }
  }
  for (const auto& m : marked)
    if (nodal_pts.count(m.point)) return bad("marked point coincides with a nodal point");
  return true;
}

int NodalSurface::special_points(const std::string& comp) const {
  int n = 0;
  for (const auto& m : marked)
    if (m.comp == comp) ++n;
  for (const auto& [x, y] : nodes) {
    if (x.comp == comp) ++n;
    if (y.comp == comp) ++n;
  }
  return n;
}

bool is_connected(const NodalSurface& s) {
  if (s.components.empty()) return false;
  std::map<std::string, std::string> parent;
  for (const auto& c : s.components) parent[c.id] = c.id;
  std::function<std::string(const std::string&)> find = [&](const std::string& x) {
    std::string r = x;
    while (parent[r] != r) r = parent[r];
    return r;
  };
  for (const auto& [x, y] : s.nodes) {
    auto a = find(x.comp), b = find(y.comp);
    if (a != b) parent[a] = b;
  }
  std::set<std::string> roots;
  for (const auto& c : s.components) roots.insert(find(c.id));
  return roots.size() == 1;
}

int arithmetic_genus(const NodalSurface& s) {
  if (!is_connected(s)) throw std::invalid_argument("genus: surface is not connected");
  int g = 1 + int(s.nodes.size());
  for (const auto& c : s.components) g += c.genus - 1;
  return g;
}

StabilityReport is_stable(const NodalSurface& s) {
  StabilityReport rep;
  for (const auto& c : s.components)
    if (2 * c.genus + s.special_points(c.id) < 3) {
      rep.stable = false;
      rep.failing_components.push_back(c.id);
    }
  return rep;
}

namespace {

// Removes one unstable component per the three weeding rules. The component
// must be unstable.
NodalSurface weed_once(const NodalSurface& s, const std::string& comp) {
  int genus = s.genus_of(comp);
  int marked_here = 0;
  for (const auto& m : s.marked)
    if (m.comp == comp) ++marked_here;
  // Indices of nodes touching the component, with the endpoint count.
  std::vector<int> touching;
  int endpoint_count = 0;
  for (std::size_t i = 0; i < s.nodes.size(); ++i) {
    int cnt = (s.nodes[i].first.comp == comp) + (s.nodes[i].second.comp == comp);
    if (cnt > 0) touching.push_back(int(i));
    endpoint_count += cnt;
  }

  if (genus > 0)
    throw NotStabilizable("unstable positive-genus component cannot be weeded: " + comp);
  if (touching.empty())
    throw NotStabilizable("lone sphere with fewer than three special points: " + comp);

  NodalSurface out;
  for (const auto& c : s.components)
    if (c.id != comp) out.components.push_back(c);
  if (out.components.empty())
    throw NotStabilizable("weeding " + comp + " empties the surface");

  auto off_comp_end = [&](int node_idx) {
    const auto& [x, y] = s.nodes[node_idx];
    return x.comp == comp ? y : x;
  };

  if (endpoint_count == 1 && marked_here == 0) {
    // Sphere with one node: drop it together with the node.
    for (std::size_t i = 0; i < s.nodes.size(); ++i)
      if (int(i) != touching[0]) out.nodes.push_back(s.nodes[i]);
    out.marked = s.marked;
    return out;
  }
  if (endpoint_count == 2 && marked_here == 0) {
    if (touching.size() == 1)
      throw NotStabilizable("self-noded sphere with no other special points: " + comp);
    // Sphere with two nodal pairs: shortcut them.
    auto a = off_comp_end(touching[0]);
    auto b = off_comp_end(touching[1]);
    for (std::size_t i = 0; i < s.nodes.size(); ++i)
      if (int(i) != touching[0] && int(i) != touching[1]) out.nodes.push_back(s.nodes[i]);
    out.nodes.push_back({a, b});
    out.marked = s.marked;
    return out;
  }
  if (endpoint_count == 1 && marked_here == 1) {
    // Sphere with one node and one marked point: the marked point moves to
    // the far end of the node, keeping its order position.
    auto far = off_comp_end(touching[0]);
    for (std::size_t i = 0; i < s.nodes.size(); ++i)
      if (int(i) != touching[0]) out.nodes.push_back(s.nodes[i]);
    out.marked = s.marked;
    for (auto& m : out.marked)
      if (m.comp == comp) m.comp = far.comp;
    return out;
  }
  throw NotStabilizable("component " + comp + " is outside the three weeding rules");
}

NodalSurface stabilize_impl(const NodalSurface& s, const std::vector<int>* picks) {
  std::string why;
  if (!s.is_valid(&why)) throw std::invalid_argument("stabilize: " + why);
  if (!is_connected(s)) throw std::invalid_argument("stabilize: surface is not connected");
  NodalSurface cur = s;
  std::size_t step = 0;
  while (true) {
    auto rep = is_stable(cur);
    if (rep.stable) return cur;
    std::sort(rep.failing_components.begin(), rep.failing_components.end());
    std::size_t pick = 0;
    if (picks && step < picks->size())
      pick = std::size_t((*picks)[step]) % rep.failing_components.size();
    cur = weed_once(cur, rep.failing_components[pick]);
    ++step;
  }
}

}  // namespace

NodalSurface stabilize(const NodalSurface& s) { return stabilize_impl(s, nullptr); }

NodalSurface stabilize_with_order(const NodalSurface& s, const std::vector<int>& picks) {
  return stabilize_impl(s, &picks);
}

namespace {

struct ComponentLabel {
  int genus;
  std::vector<int> marked_indices;
  friend bool operator==(const ComponentLabel& a, const ComponentLabel& b) {
    return a.genus == b.genus && a.marked_indices == b.marked_indices;
  }
};

ComponentLabel label_of(const NodalSurface& s, const std::string& comp) {
  ComponentLabel l;
  l.genus = s.genus_of(comp);
  for (std::size_t i = 0; i < s.marked.size(); ++i)
    if (s.marked[i].comp == comp) l.marked_indices.push_back(int(i));
  return l;
}

// Node multigraph as a sorted multiset of component-id pairs.
std::vector<std::pair<std::string, std::string>> edge_multiset(
    const NodalSurface& s, const std::map<std::string, std::string>& relabel) {
  std::vector<std::pair<std::string, std::string>> edges;
  for (const auto& [x, y] : s.nodes) {
    std::string a = relabel.at(x.comp), b = relabel.at(y.comp);
    if (b < a) std::swap(a, b);
    edges.emplace_back(a, b);
  }
  std::sort(edges.begin(), edges.end());
  return edges;
}

bool backtrack(const NodalSurface& a, const NodalSurface& b, std::size_t next,
               std::map<std::string, std::string>& assign, std::set<std::string>& used) {
  if (next == a.components.size()) {
    std::map<std::string, std::string> ident;
    for (const auto& c : b.components) ident[c.id] = c.id;
    return edge_multiset(a, assign) == edge_multiset(b, ident);
  }
  const auto& ca = a.components[next];
  auto la = label_of(a, ca.id);
  for (const auto& cb : b.components) {
    if (used.count(cb.id)) continue;
    if (!(label_of(b, cb.id) == la)) continue;
    assign[ca.id] = cb.id;
    used.insert(cb.id);
    if (backtrack(a, b, next + 1, assign, used)) return true;
    assign.erase(ca.id);
    used.erase(cb.id);
  }
  return false;
}

}  // namespace

bool isomorphic(const NodalSurface& a, const NodalSurface& b) {
  if (a.components.size() != b.components.size()) return false;
  if (a.marked.size() != b.marked.size()) return false;
  if (a.nodes.size() != b.nodes.size()) return false;
  std::map<std::string, std::string> assign;
  std::set<std::string> used;
  return backtrack(a, b, 0, assign, used);
}

}  // namespace polyfold
