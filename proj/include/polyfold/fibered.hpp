#pragma once

#include <memory>
#include <optional>
#include <string>

#include "polyfold/functor.hpp"

namespace polyfold {

using GroupoidPtr = std::shared_ptr<const FiniteGroupoid>;

// Non-owning view of a caller-owned groupoid.
GroupoidPtr borrow(const FiniteGroupoid& g);

// Weak fibered product of F: X -> Y and G: Z -> Y. Objects are triples
// (x, φ, z) with φ: F(x) -> G(z); morphisms are triples (h, φ, k) carrying
// the φ at their source.
struct FiberedProduct {
  std::shared_ptr<FiniteGroupoid> total;
  GroupoidFunctor pi1;  // total -> X
  GroupoidFunctor pi2;  // total -> Z
  std::map<ObjId, MorId> phi_of;  // object of total -> its connecting morphism in Y

  ObjId object_id(const ObjId& x, const MorId& phi, const ObjId& z) const;
};

FiberedProduct weak_fibered_product(const GroupoidFunctor& F, const GroupoidFunctor& G);

// Diagram X <- A -> Y whose back leg is an equivalence.
struct Diagram {
  GroupoidPtr left, middle, right;
  GroupoidFunctor back;     // A -> X, equivalence
  GroupoidFunctor forward;  // A -> Y

  bool is_valid(std::string* why = nullptr) const;
  static Diagram identity(const GroupoidPtr& g);
  // A functor X -> Y as the diagram X <- X -> Y with identity back leg.
  static Diagram from_functor(const GroupoidPtr& x, const GroupoidPtr& y,
                              const GroupoidFunctor& f);
};

struct RefinementWitness {
  GroupoidFunctor H;                // middle(finer) -> middle(coarser), an equivalence
  NaturalTransformation tau_left;   // back(coarser)∘H ≃ back(finer)
  NaturalTransformation tau_right;  // forward(coarser)∘H ≃ forward(finer)
};

// True when `finer` refines `coarser` through the witness. Throws on
// endpoint mismatch between the two diagrams.
bool is_refinement(const Diagram& finer, const Diagram& coarser, const RefinementWitness& w,
                   std::string* why = nullptr);

// Composite witness: if c refines b via `inner` and b refines d via `outer`,
// then c refines d via the returned witness.
RefinementWitness compose_refinement_witnesses(const Diagram& d, const Diagram& b,
                                               const Diagram& c, const RefinementWitness& outer,
                                               const RefinementWitness& inner);

// Constructive part of refinement transitivity: both b and bp refine d;
// the returned diagram (built on the fibered product of the two witnesses'
// legs) refines both, with explicit witnesses.
struct CommonRefinement {
  Diagram diagram;
  RefinementWitness onto_first;
  RefinementWitness onto_second;
};
std::optional<CommonRefinement> common_refinement_of_refinements(const Diagram& d,
                                                                 const Diagram& b,
                                                                 const Diagram& bp,
                                                                 const RefinementWitness& wb,
                                                                 const RefinementWitness& wbp);

// Equality test for diagrams with common endpoints: searches for a common
// refinement built on the fibered product of the two back legs.
std::optional<CommonRefinement> find_common_refinement(const Diagram& a, const Diagram& b);

// Generalized map: a diagram kept as canonical representative, plus the
// induced orbit-class map |Φ|∘|F|⁻¹.
class GeneralizedMap {
public:
  explicit GeneralizedMap(Diagram d);

  const Diagram& representative() const { return rep_; }
  const GroupoidPtr& source() const { return rep_.left; }
  const GroupoidPtr& target() const { return rep_.right; }

  // Orbit map: source orbit index -> target orbit index.
  const std::vector<int>& orbit_map() const { return orbit_map_; }

  bool is_s_invertible() const;

  friend GeneralizedMap compose(const GeneralizedMap& a, const GeneralizedMap& b);

private:
  Diagram rep_;
  std::vector<int> orbit_map_;
};

// Composition a: X ⇒ Y then b: Y ⇒ Z (note argument order: first a, then b).
GeneralizedMap compose(const GeneralizedMap& a, const GeneralizedMap& b);

// Strong inverse; throws std::invalid_argument when the forward leg is not
// an equivalence.
GeneralizedMap s_inverse(const GeneralizedMap& a);

// The diagonal witness showing compose(a, s_inverse(a)) equals the identity:
// for a with representative X <- A -> Y (both legs equivalences), the diagram
// X <- A -> X refines the composite (via the diagonal into A ×_Y A) and
// refines 1_X (via the back leg).
struct InverseCompositeCheck {
  GeneralizedMap composite;     // a ∘ a⁻¹
  Diagram identity_diagram;     // 1_X
  CommonRefinement refinement;  // refines both
};
InverseCompositeCheck diagonal_identity_witness(const GeneralizedMap& a);

}  // namespace polyfold
