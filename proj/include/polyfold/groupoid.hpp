#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace polyfold {

using ObjId = std::string;
using MorId = std::string;

struct Morphism {
  MorId id;
  ObjId src;
  ObjId tgt;
};

// Finite groupoid: objects, invertible morphisms, explicit structure tables.
// Composition convention: compose(g, h) = g∘h, defined when src(g) == tgt(h).
class FiniteGroupoid {
public:
  std::vector<ObjId> objects;              // kept sorted for determinism
  std::map<MorId, Morphism> morphisms;
  std::map<ObjId, MorId> identity;
  std::map<MorId, MorId> inverse;
  std::map<std::pair<MorId, MorId>, MorId> compose_table;  // (g, h) -> g∘h

  bool has_object(const ObjId& x) const;
  const Morphism& mor(const MorId& m) const;
  MorId compose(const MorId& g, const MorId& h) const;  // throws on undefined pair

  // All morphisms x -> y, in id order.
  std::vector<MorId> hom(const ObjId& x, const ObjId& y) const;
  // Stabilizer: all morphisms x -> x.
  std::vector<MorId> stabilizer(const ObjId& x) const;

  void sort_objects();
};

struct ValidationReport {
  bool ok = true;
  std::string failure;  // "unit", "inverse", "associativity", ... when !ok
  std::string detail;
};

ValidationReport validate_groupoid(const FiniteGroupoid& g);

// Partition of objects into orbits; each class is sorted, classes ordered by
// their smallest representative.
std::vector<std::vector<ObjId>> orbit_space(const FiniteGroupoid& g);

// Index of the orbit containing x, under the ordering of orbit_space.
int orbit_index(const std::vector<std::vector<ObjId>>& orbits, const ObjId& x);

// Finite group given by a multiplication table over element names.
struct FiniteGroup {
  std::vector<std::string> elements;  // elements[0] is the unit
  std::map<std::pair<std::string, std::string>, std::string> table;  // (g,h) -> gh

  std::string unit() const { return elements.at(0); }
  std::string mul(const std::string& g, const std::string& h) const;
  std::string inv(const std::string& g) const;
  bool is_valid(std::string* why = nullptr) const;

  static FiniteGroup cyclic(int n);                 // Z/n, elements "g0".."g{n-1}"
  static FiniteGroup klein_four();
  static FiniteGroup symmetric3();
};

// Action groupoid of a finite group on a finite set. Morphism ids are "g@x"
// with source x and target action(g, x).
FiniteGroupoid action_groupoid(const FiniteGroup& grp, const std::vector<ObjId>& carrier,
                               const std::map<std::pair<std::string, ObjId>, ObjId>& action);

}  // namespace polyfold
