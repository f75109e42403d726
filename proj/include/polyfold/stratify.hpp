#pragma once

#include <string>
#include <vector>

#include "polyfold/polynomial.hpp"

namespace polyfold {

// One coordinate of a corner domain: an interval with 0, 1 or 2 declared
// boundary faces. An end that is not a declared face is open (the chart
// extends up to it but does not contain it).
struct CoordSpec {
  Rational lo, hi;
  bool lo_face = false;
  bool hi_face = false;
};

enum class FaceEnd { Lo, Hi };

struct Face {
  int coord;
  FaceEnd end;
  Rational value;  // the coordinate value the face pins

  friend bool operator==(const Face& a, const Face& b) {
    return a.coord == b.coord && a.end == b.end;
  }
};

// Product of intervals in R^n with declared boundary faces.
struct CornerDomain {
  std::vector<CoordSpec> coords;

  int dim() const { return int(coords.size()); }
  bool is_valid(std::string* why = nullptr) const;

  bool contains(const VecQ& x) const;
  bool contains(const VecD& x, double tol = 1e-12) const;
  // Open part only: every coordinate strictly between its bounds.
  bool strictly_inside(const VecD& x, double margin = 0.0) const;

  Box bounding_box() const;
};

// Number of coordinates of x sitting at a declared boundary end.
// Throws std::domain_error when x lies outside the domain.
int degeneracy_index(const CornerDomain& d, const VecQ& x);
int degeneracy_index(const CornerDomain& d, const VecD& x, double tol = 1e-9);

// All declared boundary faces, ordered by (coordinate, end).
std::vector<Face> faces(const CornerDomain& d);

// Faces containing the point x.
std::vector<Face> faces_at(const CornerDomain& d, const VecQ& x);
std::vector<Face> faces_at(const CornerDomain& d, const VecD& x, double tol = 1e-9);

// Stratum lattice: every combination of {lo end, midpoint, hi end} per
// coordinate that lies in the domain (ends only when they are faces).
std::vector<VecQ> stratum_samples(const CornerDomain& d);

// Every sampled stratum point lies in exactly d(x) faces.
bool is_face_structured(const CornerDomain& d);

// Tangent directions at x spanning T^∂ = intersection of the tangent spaces
// of all local faces through x: the coordinate axes not pinned by any face.
// Returned as an n × k matrix of column vectors.
MatD boundary_tangent(const CornerDomain& d, const VecD& x, double tol = 1e-9);

}  // namespace polyfold
