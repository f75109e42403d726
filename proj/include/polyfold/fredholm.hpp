#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "polyfold/branched.hpp"
#include "polyfold/errors.hpp"
#include "polyfold/multisection.hpp"

namespace polyfold {

// Equivariant section of a chart bundle together with the compactness data.
struct ToyFredholmProblem {
  ChartBundle bundle;
  SectionExpr section;        // F
  std::optional<Box> window;  // U, an open sub-box around S(F)
  AuxiliaryNorm norm = AuxiliaryNorm::euclidean();

  int index() const { return bundle.dim() - bundle.fiber_dim; }
  bool validate(std::string* why = nullptr) const;
};

// Tuning knobs of the zero finder; the defaults are part of the contract.
struct SolverOptions {
  int seeds_per_dim = 64;
  int max_newton_iters = 50;
  double residual_tol = 1e-12;
  double dedup_radius = 1e-9;
};

struct SolutionOrbit {
  VecD representative;       // lexicographically smallest point of the orbit
  std::vector<VecD> points;  // the full orbit
  Rational weight;           // Λ(F(x))
  int effective_stabilizer;  // order of the stabilizer in the effective group
};

struct WeightedSolutionSet {
  std::vector<SolutionOrbit> orbits;               // isolated solutions
  std::optional<BranchedSubgroupoid> branches;     // positive-dimensional case
  bool positive_dimensional() const { return branches.has_value(); }
};

// Zero set of (F, Λ): grid-seeded damped Newton for index 0; exact affine
// slices for positive index (affine section equations only).
WeightedSolutionSet solution_set(const ToyFredholmProblem& p, const Multisection& lambda,
                                 const SolverOptions& opts = {});

// Linearization of F at a solution with respect to Λ: one matrix per
// equivalence class of D(F - a_i)(x) over the sections passing through F(x).
struct LinearizationClasses {
  VecD base_point;
  std::vector<MatD> classes;              // pairwise distinct representatives
  std::vector<std::vector<int>> members;  // section indices per class
};

LinearizationClasses linearization_classes(const ToyFredholmProblem& p,
                                           const Multisection& lambda, const VecD& x,
                                           double tol = 1e-9);

// Transversality verdict per solution orbit and linearization class.
struct TransversalityVerdict {
  bool transversal = true;       // every class surjective
  bool good_position = true;     // + kernels compatible with every face intersection
  bool general_position = true;  // + kernels transversal to T^∂
  bool readings_disagree = false;  // the two general-position readings differ
  std::vector<std::string> failing_orbits;
};

TransversalityVerdict transversality(const ToyFredholmProblem& p, const Multisection& lambda,
                                     const WeightedSolutionSet& sols,
                                     double sv_floor = 1e-8);

// Desk reading of compactness control: Ū compact inside the chart and
// S(F) ⊂ U.
bool controls_compactness(const ToyFredholmProblem& p, const Box& window,
                          const AuxiliaryNorm& n, const SolverOptions& opts = {});

struct PerturbationOptions {
  double epsilon = 0.3;
  unsigned seed = 7;
  int sample_budget = 200;
  bool boundary_trivial = false;  // keep perturbation supports away from faces
  SolverOptions solver;
  double sv_floor = 1e-8;
};

struct PerturbationReport {
  bool already_transversal = false;
  int attempts = 0;
  VecQ accepted_parameter;
  TransversalityVerdict verdict;
  WeightedSolutionSet solutions;  // of (F, Λ ⊕ τ)
  double tau_norm = 0.0;
};

// Cokernel-filling perturbation search. Returns the multisection τ with
// N(τ) < ε making (F, Λ ⊕ τ) transversal (general position when the domain
// has declared faces). Throws MathPreconditionError / BudgetExhausted.
std::pair<Multisection, PerturbationReport> perturb(const ToyFredholmProblem& p,
                                                    const Multisection& lambda,
                                                    const PerturbationOptions& opts = {});

// Sign of det of an invertible square matrix; throws MathPreconditionError
// at (near-)singular input.
int orientation_sign(const MatD& m, double sv_floor = 1e-8);
int orientation_sign(const MatQ& m);

// Weighted signed rational count of an index-0 transversal pair.
Rational degree(const ToyFredholmProblem& p, const Multisection& lambda,
                const SolverOptions& opts = {}, double sv_floor = 1e-8);

// Φ([ω]) = ∫_{(S, λ_f)} ω. For isolated solutions ω must be a 0-form; for
// branch handles the integral is delegated to the branched measure.
double invariant(const ToyFredholmProblem& p, const Multisection& lambda,
                 const DifferentialForm& omega, const SolverOptions& opts = {});

// Boundary pair: Ψ([ω, θ]) = ∫_S ω − ∫_{∂S} θ.
double invariant_boundary_pair(const ToyFredholmProblem& p, const Multisection& lambda,
                               const DifferentialForm& omega, const DifferentialForm& theta,
                               const SolverOptions& opts = {});

}  // namespace polyfold
