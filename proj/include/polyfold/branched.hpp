#pragma once

#include <optional>
#include <vector>

#include "polyfold/form.hpp"

namespace polyfold {

// Oriented local branch: a polynomial parametrization of a reference box
// into the chart region.
struct Branch {
  Box ref;          // reference box, dimension = branch dimension
  PolyMap param;    // ref -> chart region
  int orientation;  // +1 or -1

  int dim() const { return int(ref.size()); }
};

// Measurable region: per branch, a list of parameter boxes; an empty
// optional means the full support.
struct MeasurableRegion {
  std::optional<std::vector<std::vector<Box>>> per_branch;

  static MeasurableRegion everything() { return {}; }
};

// Weighted family of equidimensional branches over a chart groupoid,
// invariant under the group action.
struct BranchedSubgroupoid {
  const ChartGroupoid* chart = nullptr;
  std::vector<Branch> branches;
  std::vector<Rational> weights;  // positive, one per branch

  int branch_dim() const { return branches.empty() ? 0 : branches.front().dim(); }

  // Same dimension across branches; branch images inside the domain; every
  // reference face lands symbolically inside a declared chart face ("good
  // position"); the weight functor is invariant on sampled branch points.
  bool validate(std::string* why = nullptr) const;

  // Membership of a chart point in one branch (exact for affine
  // parametrizations, Newton-seeded otherwise).
  bool on_branch(int i, const VecD& y, double tol = 1e-9) const;

  // Θ(y) = Σ_{y ∈ M_i} σ_i.
  Rational theta(const VecD& y, double tol = 1e-9) const;
};

// Effective group data of the underlying chart.
struct EffectiveGroup {
  int order;                        // #G_e
  std::vector<std::string> kernel;  // the ineffective part
};
EffectiveGroup effective_group(const ChartGroupoid& cg);

// Branched integral of a top-degree form:
//   (1/#G_e) Σ_i σ_i ∫_{K_i} ω | M_i.
// Exact route (antiderivatives) and quadrature route.
Rational integrate(const BranchedSubgroupoid& bs, const DifferentialForm& omega,
                   const MeasurableRegion& region = {});
double integrate_quadrature(const BranchedSubgroupoid& bs, const DifferentialForm& omega,
                            const MeasurableRegion& region = {}, int cells_per_dim = 4);

// Boundary integral of an (n-1)-form over the oriented branch boundaries
// lying in declared chart faces (outward-normal-first convention).
Rational boundary_integrate(const BranchedSubgroupoid& bs, const DifferentialForm& tau);
double boundary_integrate_quadrature(const BranchedSubgroupoid& bs, const DifferentialForm& tau,
                                     int cells_per_dim = 4);

// |∫ dω − ∮ ω|, exact and quadrature routes.
Rational stokes_residual(const BranchedSubgroupoid& bs, const DifferentialForm& omega);
double stokes_residual_quadrature(const BranchedSubgroupoid& bs, const DifferentialForm& omega,
                                  int cells_per_dim = 4);

// Invariance of the branched measure under a chart equivalence. The branches
// live on the source chart; the form lives on the target chart; the branches
// are pushed forward through the equivalence and both measures are compared
// on corresponding regions. Returns the largest absolute discrepancy.
Rational pullback_invariance_residual(const ChartEquivalence& eq,
                                      const BranchedSubgroupoid& on_source,
                                      const DifferentialForm& omega_on_target,
                                      const std::vector<MeasurableRegion>& regions);

}  // namespace polyfold
