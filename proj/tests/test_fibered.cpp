#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "polyfold/fibered.hpp"
#include "test_helpers.hpp"

using namespace polyfold;
using namespace polyfold::testing;

TEST_CASE("fibered product of BZ/2 with the point") {
  auto y = std::make_shared<FiniteGroupoid>(one_object_cyclic(2));
  auto z = std::make_shared<FiniteGroupoid>(one_object_cyclic(1));
  auto F = GroupoidFunctor::identity(*y);
  GroupoidFunctor G;
  G.domain = z.get();
  G.codomain = y.get();
  G.object_map["pt"] = "pt";
  G.morphism_map[z->identity.at("pt")] = y->identity.at("pt");
  REQUIRE(G.is_valid());

  auto fp = weak_fibered_product(F, G);
  CHECK(fp.total->objects.size() == 2);  // one per morphism of Z/2
  CHECK(validate_groupoid(*fp.total).ok);
  CHECK(orbit_space(*fp.total).size() == 1);
  for (const auto& o : fp.total->objects) CHECK(fp.total->stabilizer(o).size() == 1);
  CHECK(is_equivalence(fp.pi2));
}

TEST_CASE("fibered product of identities on a discrete groupoid is the diagonal") {
  auto x = std::make_shared<FiniteGroupoid>(discrete({"p", "q"}));
  auto F = GroupoidFunctor::identity(*x);
  auto fp = weak_fibered_product(F, F);
  CHECK(fp.total->objects.size() == 2);
  CHECK(validate_groupoid(*fp.total).ok);
  CHECK(orbit_space(*fp.total).size() == 2);
}

TEST_CASE("projection is an equivalence when the first leg is one") {
  auto whole = std::make_shared<FiniteGroupoid>(z2_swap_abc());
  auto sub = std::make_shared<FiniteGroupoid>(full_subcategory(*whole, {"a", "c"}));
  auto F = GroupoidFunctor::full_subcategory_inclusion(*sub, *whole);
  auto G = GroupoidFunctor::identity(*whole);
  auto fp = weak_fibered_product(F, G);
  CHECK(validate_groupoid(*fp.total).ok);
  CHECK(is_equivalence(fp.pi2));
  CHECK(is_equivalence(fp.pi1));  // G is an equivalence here as well
}

TEST_CASE("refinement checks") {
  auto y = std::make_shared<FiniteGroupoid>(z2_swap_abc());
  auto sub = std::make_shared<FiniteGroupoid>(full_subcategory(*y, {"a", "c"}));
  auto F = GroupoidFunctor::full_subcategory_inclusion(*sub, *y);

  SUBCASE("a diagram refines itself through the identity witness") {
    auto d = Diagram::identity(y);
    RefinementWitness w;
    w.H = GroupoidFunctor::identity(*y);
    for (const auto& x : y->objects) {
      w.tau_left.component[x] = y->identity.at(x);
      w.tau_right.component[x] = y->identity.at(x);
    }
    CHECK(is_refinement(d, d, w));
  }

  SUBCASE("Y <- sub -> Y with legs (F, F) refines the identity via H = F") {
    Diagram finer;
    finer.left = y;
    finer.middle = sub;
    finer.right = y;
    finer.back = F;
    finer.forward = F;
    REQUIRE(finer.is_valid());

    RefinementWitness w;
    w.H = F;
    for (const auto& x : sub->objects) {
      w.tau_left.component[x] = y->identity.at(x);
      w.tau_right.component[x] = y->identity.at(x);
    }
    CHECK(is_refinement(finer, Diagram::identity(y), w));
  }

  SUBCASE("witness with a non-equivalence H fails") {
    auto d = Diagram::identity(y);
    RefinementWitness w;
    // Constant functor to c is valid but not an equivalence.
    w.H.domain = y.get();
    w.H.codomain = y.get();
    for (const auto& x : y->objects) w.H.object_map[x] = "c";
    for (const auto& [id, m] : y->morphisms) w.H.morphism_map[id] = y->identity.at("c");
    REQUIRE(w.H.is_valid());
    for (const auto& x : y->objects) {
      w.tau_left.component[x] = y->identity.at(x);
      w.tau_right.component[x] = y->identity.at(x);
    }
    std::string why;
    CHECK_FALSE(is_refinement(d, d, w, &why));
    CHECK(why == "witness functor is not an equivalence");
  }
}

TEST_CASE("generalized map composition matches orbit map composition") {
  auto y = std::make_shared<FiniteGroupoid>(z2_swap_abc());
  auto sub = std::make_shared<FiniteGroupoid>(full_subcategory(*y, {"a", "c"}));
  auto F = GroupoidFunctor::full_subcategory_inclusion(*sub, *y);

  Diagram d;  // sub ⇒ y via inclusion both ways
  d.left = sub;
  d.middle = sub;
  d.right = y;
  d.back = GroupoidFunctor::identity(*sub);
  d.forward = F;
  GeneralizedMap a(d);

  GeneralizedMap ident(Diagram::identity(y));
  auto comp = compose(a, ident);
  REQUIRE(comp.orbit_map().size() == a.orbit_map().size());
  for (std::size_t i = 0; i < a.orbit_map().size(); ++i) {
    int via = a.orbit_map()[i];
    CHECK(comp.orbit_map()[i] == ident.orbit_map()[via]);
  }

  // Composite with the identity has a common refinement with the original.
  auto common = find_common_refinement(comp.representative(), a.representative());
  CHECK(common.has_value());
}

TEST_CASE("s-inverse: composite refines the identity via the diagonal") {
  auto y = std::make_shared<FiniteGroupoid>(z2_swap_abc());
  auto sub = std::make_shared<FiniteGroupoid>(full_subcategory(*y, {"a", "c"}));

  Diagram d;
  d.left = sub;
  d.middle = sub;
  d.right = y;
  d.back = GroupoidFunctor::identity(*sub);
  d.forward = GroupoidFunctor::full_subcategory_inclusion(*sub, *y);
  GeneralizedMap a(d);
  REQUIRE(a.is_s_invertible());

  auto check = diagonal_identity_witness(a);
  CHECK(is_refinement(check.refinement.diagram, check.composite.representative(),
                      check.refinement.onto_first));
  CHECK(is_refinement(check.refinement.diagram, check.identity_diagram,
                      check.refinement.onto_second));

  // Orbit map of a ∘ a⁻¹ is the identity on classes.
  for (std::size_t i = 0; i < check.composite.orbit_map().size(); ++i)
    CHECK(check.composite.orbit_map()[i] == int(i));
}

TEST_CASE("s-inverse requires an equivalence forward leg") {
  auto y = std::make_shared<FiniteGroupoid>(z2_swap_abc());
  auto one = std::make_shared<FiniteGroupoid>(one_object_cyclic(1));
  Diagram d;
  d.left = y;
  d.middle = y;
  d.right = one;
  d.back = GroupoidFunctor::identity(*y);
  GroupoidFunctor constant;
  constant.domain = y.get();
  constant.codomain = one.get();
  for (const auto& x : y->objects) constant.object_map[x] = "pt";
  for (const auto& [id, m] : y->morphisms)
    constant.morphism_map[id] = one->identity.at("pt");
  d.forward = constant;
  GeneralizedMap a(d);
  CHECK_FALSE(a.is_s_invertible());
  CHECK_THROWS_AS(s_inverse(a), std::invalid_argument);
}

TEST_CASE("refinement transitivity constructs a common refinement") {
  auto y = std::make_shared<FiniteGroupoid>(z2_swap_abc());
  auto sub_ac = std::make_shared<FiniteGroupoid>(full_subcategory(*y, {"a", "c"}));
  auto sub_bc = std::make_shared<FiniteGroupoid>(full_subcategory(*y, {"b", "c"}));

  auto d = Diagram::identity(y);
  Diagram b;
  b.left = y;
  b.middle = sub_ac;
  b.right = y;
  b.back = GroupoidFunctor::full_subcategory_inclusion(*sub_ac, *y);
  b.forward = b.back;
  Diagram bp;
  bp.left = y;
  bp.middle = sub_bc;
  bp.right = y;
  bp.back = GroupoidFunctor::full_subcategory_inclusion(*sub_bc, *y);
  bp.forward = bp.back;

  auto wit = [&](const Diagram& finer) {
    RefinementWitness w;
    w.H = finer.back;
    for (const auto& x : finer.middle->objects) {
      w.tau_left.component[x] = y->identity.at(x);
      w.tau_right.component[x] = y->identity.at(x);
    }
    return w;
  };
  auto wb = wit(b);
  auto wbp = wit(bp);
  REQUIRE(is_refinement(b, d, wb));
  REQUIRE(is_refinement(bp, d, wbp));

  auto common = common_refinement_of_refinements(d, b, bp, wb, wbp);
  REQUIRE(common.has_value());
  CHECK(is_refinement(common->diagram, b, common->onto_first));
  CHECK(is_refinement(common->diagram, bp, common->onto_second));
}

TEST_CASE("composition of s-invertible maps is s-invertible") {
  auto y = std::make_shared<FiniteGroupoid>(z2_swap_abc());
  auto sub_ac = std::make_shared<FiniteGroupoid>(full_subcategory(*y, {"a", "c"}));
  auto sub_bc = std::make_shared<FiniteGroupoid>(full_subcategory(*y, {"b", "c"}));

  Diagram d1;  // sub_ac ⇒ y
  d1.left = sub_ac;
  d1.middle = sub_ac;
  d1.right = y;
  d1.back = GroupoidFunctor::identity(*sub_ac);
  d1.forward = GroupoidFunctor::full_subcategory_inclusion(*sub_ac, *y);
  Diagram d2;  // y ⇒ sub_bc, both legs equivalences
  d2.left = y;
  d2.middle = sub_bc;
  d2.right = sub_bc;
  d2.back = GroupoidFunctor::full_subcategory_inclusion(*sub_bc, *y);
  d2.forward = GroupoidFunctor::identity(*sub_bc);

  GeneralizedMap a(d1), b(d2);
  REQUIRE(a.is_s_invertible());
  REQUIRE(b.is_s_invertible());
  auto comp = compose(a, b);
  CHECK(comp.is_s_invertible());
}

TEST_CASE("equivalent diagrams induce equal orbit maps") {
  auto y = std::make_shared<FiniteGroupoid>(z2_swap_abc());
  auto sub = std::make_shared<FiniteGroupoid>(full_subcategory(*y, {"a", "c"}));

  Diagram d1 = Diagram::identity(y);
  Diagram d2;
  d2.left = y;
  d2.middle = sub;
  d2.right = y;
  d2.back = GroupoidFunctor::full_subcategory_inclusion(*sub, *y);
  d2.forward = d2.back;

  auto common = find_common_refinement(d1, d2);
  REQUIRE(common.has_value());
  GeneralizedMap m1(d1), m2(d2);
  CHECK(m1.orbit_map() == m2.orbit_map());
}
