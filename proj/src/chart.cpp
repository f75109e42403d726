#include "polyfold/chart.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace polyfold {

const PolyMap& ChartGroupoid::act(const std::string& g) const {
  auto it = action.find(g);
  if (it == action.end()) throw std::out_of_range("chart: no action for element " + g);
  return it->second;
}

VecQ ChartGroupoid::apply(const std::string& g, const VecQ& x) const {
  return eval(act(g), x);
}

VecD ChartGroupoid::apply(const std::string& g, const VecD& x) const {
  return eval(act(g), x);
}

bool ChartGroupoid::validate(std::string* why) const {
  auto bad = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  std::string gw;
  if (!group.is_valid(&gw)) return bad("chart: bad group: " + gw);
  if (!domain.is_valid(&gw)) return bad("chart: bad domain: " + gw);
  for (const auto& g : group.elements) {
    auto it = action.find(g);
    if (it == action.end()) return bad("chart: missing action for " + g);
    if (int(it->second.size()) != dim()) return bad("chart: action arity for " + g);
    for (const auto& comp : it->second)
      if (comp.nvars() != dim()) return bad("chart: action arity for " + g);
  }
  // Unit acts as the identity and the action is a homomorphism, symbolically.
  if (!(act(group.unit()) == identity_map(dim())))
    return bad("chart: unit does not act as the identity");
  for (const auto& g : group.elements)
    for (const auto& h : group.elements)
      if (!(compose(act(g), act(h)) == act(group.mul(g, h))))
        return bad("chart: action is not a homomorphism at (" + g + "," + h + ")");
  // Domain and degeneracy preservation on the stratum lattice.
  for (const auto& x : stratum_samples(domain))
    for (const auto& g : group.elements) {
      VecQ y = apply(g, x);
      if (!domain.contains(y)) return bad("chart: action leaves the domain at " + g);
      if (degeneracy_index(domain, y) != degeneracy_index(domain, x))
        return bad("chart: action changes the degeneracy index at " + g);
    }
  return true;
}

std::vector<std::string> ChartGroupoid::point_stabilizer(const VecQ& x) const {
  std::vector<std::string> out;
  for (const auto& g : group.elements)
    if (apply(g, x) == x) out.push_back(g);
  return out;
}

std::vector<std::string> ChartGroupoid::point_stabilizer(const VecD& x, double tol) const {
  std::vector<std::string> out;
  for (const auto& g : group.elements) {
    VecD y = apply(g, x);
    double d = 0;
    for (std::size_t i = 0; i < x.size(); ++i) d = std::max(d, std::abs(y[i] - x[i]));
    if (d <= tol) out.push_back(g);
  }
  return out;
}

std::vector<std::string> ChartGroupoid::ineffective_kernel() const {
  std::vector<std::string> out;
  auto id = identity_map(dim());
  for (const auto& g : group.elements)
    if (act(g) == id) out.push_back(g);
  return out;
}

int ChartGroupoid::effective_order() const {
  return int(group.elements.size() / ineffective_kernel().size());
}

std::vector<VecD> ChartGroupoid::orbit(const VecD& x, double tol) const {
  std::vector<VecD> out;
  for (const auto& g : group.elements) {
    VecD y = apply(g, x);
    bool seen = false;
    for (const auto& z : out) {
      double d = 0;
      for (std::size_t i = 0; i < y.size(); ++i) d = std::max(d, std::abs(y[i] - z[i]));
      if (d <= tol) seen = true;
    }
    if (!seen) out.push_back(y);
  }
  std::sort(out.begin(), out.end());
  return out;
}

ChartGroupoid::FormalMorphism ChartGroupoid::gamma(const std::string& g, const VecQ& y) const {
  if (!domain.contains(y)) throw std::domain_error("chart: Γ source outside the domain");
  return {g, y, apply(g, y)};
}

ChartGroupoid ChartGroupoid::trivial(const CornerDomain& d) {
  ChartGroupoid cg;
  cg.group = FiniteGroup::cyclic(1);
  cg.domain = d;
  cg.action["g0"] = identity_map(d.dim());
  return cg;
}

bool is_face_structured(const ChartGroupoid& cg, std::string* why) {
  if (!is_face_structured(cg.domain)) {
    if (why) *why = "domain is not face structured";
    return false;
  }
  for (const auto& x : stratum_samples(cg.domain))
    for (const auto& g : cg.group.elements)
      if (degeneracy_index(cg.domain, cg.apply(g, x)) != degeneracy_index(cg.domain, x)) {
        if (why) *why = "degeneracy index is not morphism invariant";
        return false;
      }
  return true;
}

bool ChartEquivalence::validate(std::string* why) const {
  auto bad = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (!source || !target) return bad("equivalence: missing charts");
  if (int(map.size()) != target->dim()) return bad("equivalence: map arity");
  // Group isomorphism.
  if (group_iso.size() != source->group.elements.size())
    return bad("equivalence: group map incomplete");
  std::set<std::string> image;
  for (const auto& [g, h] : group_iso) image.insert(h);
  if (image.size() != target->group.elements.size())
    return bad("equivalence: group map is not a bijection");
  for (const auto& g : source->group.elements)
    for (const auto& h : source->group.elements)
      if (group_iso.at(source->group.mul(g, h)) !=
          target->group.mul(group_iso.at(g), group_iso.at(h)))
        return bad("equivalence: group map is not a homomorphism");
  // Equivariance, symbolically.
  for (const auto& g : source->group.elements)
    if (!(compose(map, source->act(g)) == compose(target->act(group_iso.at(g)), map)))
      return bad("equivalence: map is not equivariant at " + g);
  // Domain mapping, degeneracy preservation and nondegenerate Jacobian on
  // the stratum lattice.
  for (const auto& x : stratum_samples(source->domain)) {
    VecQ y = eval(map, x);
    if (!target->domain.contains(y)) return bad("equivalence: image leaves the target domain");
    if (degeneracy_index(target->domain, y) != degeneracy_index(source->domain, x))
      return bad("equivalence: degeneracy index not preserved");
    if (det(jacobian(map, x)).is_zero())
      return bad("equivalence: singular Jacobian on the lattice");
  }
  return true;
}

ChartEquivalence ChartEquivalence::identity(const ChartGroupoid& cg) {
  ChartEquivalence eq;
  eq.source = &cg;
  eq.target = &cg;
  for (const auto& g : cg.group.elements) eq.group_iso[g] = g;
  eq.map = identity_map(cg.dim());
  return eq;
}

std::vector<std::pair<Face, Face>> face_correspondence(const ChartEquivalence& eq,
                                                       std::string* why) {
  std::vector<std::pair<Face, Face>> out;
  auto src_faces = faces(eq.source->domain);
  auto tgt_faces = faces(eq.target->domain);
  for (const auto& f : src_faces) {
    // Midpoint of the face: pin the face coordinate, center the others.
    VecQ x;
    for (int i = 0; i < eq.source->dim(); ++i) {
      const auto& c = eq.source->domain.coords[i];
      x.push_back(i == f.coord ? f.value : (c.lo + c.hi) / Rational(2));
    }
    VecQ y = eq.apply(x);
    auto hits = faces_at(eq.target->domain, y);
    if (hits.size() != 1) {
      if (why) *why = "face image does not land in exactly one face";
      return {};
    }
    out.emplace_back(f, hits.front());
  }
  // Bijectivity of the assignment.
  std::vector<Face> images;
  for (const auto& [f, g] : out) images.push_back(g);
  for (const auto& g : tgt_faces)
    if (std::count(images.begin(), images.end(), g) != 1) {
      if (why) *why = "face correspondence is not a bijection";
      return {};
    }
  return out;
}

}  // namespace polyfold
