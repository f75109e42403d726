#include "polyfold/stratify.hpp"

#include <cmath>
#include <stdexcept>

namespace polyfold {

bool CornerDomain::is_valid(std::string* why) const {
  for (const auto& c : coords) {
    if (!(c.lo < c.hi)) {
      if (why) *why = "degenerate interval";
      return false;
    }
  }
  return true;
}

bool CornerDomain::contains(const VecQ& x) const {
  if (int(x.size()) != dim()) return false;
  for (int i = 0; i < dim(); ++i) {
    const auto& c = coords[i];
    if (x[i] < c.lo || (x[i] == c.lo && !c.lo_face)) return false;
    if (x[i] > c.hi || (x[i] == c.hi && !c.hi_face)) return false;
  }
  return true;
}

bool CornerDomain::contains(const VecD& x, double tol) const {
  if (int(x.size()) != dim()) return false;
  for (int i = 0; i < dim(); ++i) {
    const auto& c = coords[i];
    double lo = c.lo.to_double(), hi = c.hi.to_double();
    if (x[i] < lo - tol || x[i] > hi + tol) return false;
    if (!c.lo_face && x[i] <= lo + tol) return false;
    if (!c.hi_face && x[i] >= hi - tol) return false;
  }
  return true;
}

bool CornerDomain::strictly_inside(const VecD& x, double margin) const {
  if (int(x.size()) != dim()) return false;
  for (int i = 0; i < dim(); ++i) {
    if (x[i] <= coords[i].lo.to_double() + margin) return false;
    if (x[i] >= coords[i].hi.to_double() - margin) return false;
  }
  return true;
}

Box CornerDomain::bounding_box() const {
  Box b;
  for (const auto& c : coords) b.push_back({c.lo, c.hi});
  return b;
}

int degeneracy_index(const CornerDomain& d, const VecQ& x) {
  if (!d.contains(x)) throw std::domain_error("degeneracy index: point outside domain");
  int n = 0;
  for (int i = 0; i < d.dim(); ++i) {
    if (d.coords[i].lo_face && x[i] == d.coords[i].lo) ++n;
    if (d.coords[i].hi_face && x[i] == d.coords[i].hi) ++n;
  }
  return n;
}

int degeneracy_index(const CornerDomain& d, const VecD& x, double tol) {
  if (!d.contains(x, tol)) throw std::domain_error("degeneracy index: point outside domain");
  int n = 0;
  for (int i = 0; i < d.dim(); ++i) {
    if (d.coords[i].lo_face && std::abs(x[i] - d.coords[i].lo.to_double()) <= tol) ++n;
    if (d.coords[i].hi_face && std::abs(x[i] - d.coords[i].hi.to_double()) <= tol) ++n;
  }
  return n;
}

std::vector<Face> faces(const CornerDomain& d) {
  std::vector<Face> out;
  for (int i = 0; i < d.dim(); ++i) {
    if (d.coords[i].lo_face) out.push_back({i, FaceEnd::Lo, d.coords[i].lo});
    if (d.coords[i].hi_face) out.push_back({i, FaceEnd::Hi, d.coords[i].hi});
  }
  return out;
}

std::vector<Face> faces_at(const CornerDomain& d, const VecQ& x) {
  std::vector<Face> out;
  for (const auto& f : faces(d))
    if (x[f.coord] == f.value) out.push_back(f);
  return out;
}

std::vector<Face> faces_at(const CornerDomain& d, const VecD& x, double tol) {
  std::vector<Face> out;
  for (const auto& f : faces(d))
    if (std::abs(x[f.coord] - f.value.to_double()) <= tol) out.push_back(f);
  return out;
}

std::vector<VecQ> stratum_samples(const CornerDomain& d) {
  std::vector<VecQ> pts{{}};
  for (int i = 0; i < d.dim(); ++i) {
    const auto& c = d.coords[i];
    std::vector<Rational> choices;
    if (c.lo_face) choices.push_back(c.lo);
    choices.push_back((c.lo + c.hi) / Rational(2));
    if (c.hi_face) choices.push_back(c.hi);
    std::vector<VecQ> next;
    for (const auto& p : pts)
      for (const auto& v : choices) {
        VecQ q = p;
        q.push_back(v);
        next.push_back(q);
      }
    pts = std::move(next);
  }
  return pts;
}

bool is_face_structured(const CornerDomain& d) {
  for (const auto& x : stratum_samples(d))
    if (int(faces_at(d, x).size()) != degeneracy_index(d, x)) return false;
  return true;
}

MatD boundary_tangent(const CornerDomain& d, const VecD& x, double tol) {
  auto active = faces_at(d, x, tol);
  std::vector<bool> pinned(d.dim(), false);
  for (const auto& f : active) pinned[f.coord] = true;
  int k = 0;
  for (bool p : pinned)
    if (!p) ++k;
  MatD t(d.dim(), k);
  int col = 0;
  for (int i = 0; i < d.dim(); ++i)
    if (!pinned[i]) t(i, col++) = 1.0;
  return t;
}

}  // namespace polyfold
