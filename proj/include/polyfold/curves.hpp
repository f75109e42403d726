#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace polyfold {

// Combinatorial nodal surface: components with genus, ordered marked points,
// and unordered nodal pairs of distinct points.
struct NodalSurface {
  struct Component {
    std::string id;
    int genus = 0;
  };
  struct PointRef {
    std::string point;
    std::string comp;
    friend bool operator==(const PointRef& a, const PointRef& b) {
      return a.point == b.point && a.comp == b.comp;
    }
  };

  std::vector<Component> components;
  std::vector<PointRef> marked;                       // ordered
  std::vector<std::pair<PointRef, PointRef>> nodes;   // unordered pairs

  bool has_component(const std::string& id) const;
  int genus_of(const std::string& id) const;

  // Distinct point ids, disjoint nodal pairs, marked ∩ nodal = ∅,
  // components known.
  bool is_valid(std::string* why = nullptr) const;

  // Number of special points (marked + nodal) on a component.
  int special_points(const std::string& comp) const;
};

// Connectivity of the component graph with node edges.
bool is_connected(const NodalSurface& s);

// g_a = 1 + #nodes + Σ (genus − 1); requires a connected surface.
int arithmetic_genus(const NodalSurface& s);

struct StabilityReport {
  bool stable = true;
  std::vector<std::string> failing_components;  // 2g + #special < 3
};

StabilityReport is_stable(const NodalSurface& s);

// Raised when weeding empties the surface or hits a case outside the three
// weeding rules.
struct NotStabilizable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Iterated removal of unstable sphere components by the three weeding rules
// (drop a one-node sphere; shortcut a two-node sphere; replace the partner
// node of a one-node-one-marked sphere by the marked point).
NodalSurface stabilize(const NodalSurface& s);

// Variant weeding the unstable components in a caller-chosen order (the
// order among currently-unstable components is selected by the picker
// index); used for order-independence checks.
NodalSurface stabilize_with_order(const NodalSurface& s, const std::vector<int>& picks);

// Decorated-graph isomorphism: component bijection preserving genus, the
// positions of the ordered marked points, and the node multigraph.
bool isomorphic(const NodalSurface& a, const NodalSurface& b);

}  // namespace polyfold
