#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "polyfold/functor.hpp"
#include "polyfold/groupoid.hpp"
#include "polyfold/randgen.hpp"
#include "test_helpers.hpp"

using namespace polyfold;
using namespace polyfold::testing;

TEST_CASE("action groupoid of Z/2 on {a,b,c} passes validation") {
  auto g = z2_swap_abc();
  CHECK(g.objects.size() == 3);
  CHECK(g.morphisms.size() == 6);
  auto rep = validate_groupoid(g);
  CHECK(rep.ok);
}

TEST_CASE("broken unit is reported as unit failure") {
  auto g = z2_swap_abc();
  g.identity["c"] = "g1@c";  // g1@c: c -> c but not a unit
  auto rep = validate_groupoid(g);
  CHECK_FALSE(rep.ok);
  CHECK(rep.failure == "unit");
}

TEST_CASE("one-object Z/3 groupoid validates") {
  auto g = one_object_cyclic(3);
  CHECK(validate_groupoid(g).ok);
  CHECK(g.stabilizer("pt").size() == 3);
}

TEST_CASE("missing composition entry is reported") {
  auto g = z2_swap_abc();
  g.compose_table.erase({"g1@b", "g1@a"});
  auto rep = validate_groupoid(g);
  CHECK_FALSE(rep.ok);
  CHECK(rep.failure == "composition-table");
}

TEST_CASE("orbit spaces") {
  auto orbits = orbit_space(z2_swap_abc());
  REQUIRE(orbits.size() == 2);
  CHECK(orbits[0] == std::vector<ObjId>{"a", "b"});
  CHECK(orbits[1] == std::vector<ObjId>{"c"});

  CHECK(orbit_space(discrete({"x", "y", "z"})).size() == 3);
  CHECK(orbit_space(one_object_cyclic(3)).size() == 1);
}

TEST_CASE("stabilizers") {
  auto g = z2_swap_abc();
  CHECK(g.stabilizer("c").size() == 2);
  CHECK(g.stabilizer("a").size() == 1);
}

TEST_CASE("stabilizers along a morphism are conjugate-isomorphic") {
  auto g = z2_swap_abc();
  for (const auto& [id, m] : g.morphisms) {
    auto sx = g.stabilizer(m.src);
    auto sy = g.stabilizer(m.tgt);
    REQUIRE(sx.size() == sy.size());
    // Conjugation by the morphism maps one stabilizer onto the other.
    std::set<MorId> conj;
    for (const auto& s : sx)
      conj.insert(g.compose(g.compose(id, s), g.inverse.at(id)));
    CHECK(conj == std::set<MorId>(sy.begin(), sy.end()));
  }
}

TEST_CASE("equivalences: full subcategory inclusion, constant functor, identity") {
  auto whole = z2_swap_abc();
  auto sub = full_subcategory(whole, {"a", "c"});
  REQUIRE(validate_groupoid(sub).ok);
  auto inc = GroupoidFunctor::full_subcategory_inclusion(sub, whole);
  REQUIRE(inc.is_valid());
  CHECK(is_equivalence(inc));

  auto two = discrete({"x", "y"});
  auto one = discrete({"pt"});
  GroupoidFunctor constant;
  constant.domain = &two;
  constant.codomain = &one;
  for (const auto& x : two.objects) constant.object_map[x] = "pt";
  for (const auto& [id, m] : two.morphisms) constant.morphism_map[id] = one.identity.at("pt");
  REQUIRE(constant.is_valid());
  EquivalenceDiagnostic diag;
  CHECK_FALSE(is_equivalence(constant, &diag));
  CHECK_FALSE(diag.orbit_injective);

  CHECK(is_equivalence(GroupoidFunctor::identity(whole)));
}

TEST_CASE("natural transformations") {
  auto g = one_object_cyclic(2);
  auto f = GroupoidFunctor::identity(g);

  SUBCASE("identity components") {
    NaturalTransformation tau;
    tau.component["pt"] = g.identity.at("pt");
    CHECK(naturally_equivalent(f, f, tau));
  }
  SUBCASE("conjugation by the nontrivial element") {
    NaturalTransformation tau;
    tau.component["pt"] = "g1@pt";
    CHECK(naturally_equivalent(f, f, tau));
  }
  SUBCASE("broken square") {
    // id vs the squaring endofunctor of BZ/4 are not naturally equivalent,
    // so every witness has a failing square.
    auto z4 = one_object_cyclic(4);
    auto idz = GroupoidFunctor::identity(z4);
    GroupoidFunctor sq;  // g -> g∘g
    sq.domain = &z4;
    sq.codomain = &z4;
    sq.object_map["pt"] = "pt";
    for (const auto& [id2, m] : z4.morphisms) sq.morphism_map[id2] = z4.compose(id2, id2);
    REQUIRE(sq.is_valid());
    NaturalTransformation bad;
    bad.component["pt"] = "g1@pt";
    CHECK_FALSE(naturally_equivalent(idz, sq, bad));
    CHECK_FALSE(find_natural_transformation(idz, sq).has_value());
  }
  SUBCASE("malformed witness endpoints throw") {
    auto whole = z2_swap_abc();
    auto id = GroupoidFunctor::identity(whole);
    NaturalTransformation tau;
    tau.component["a"] = "g1@a";  // a -> b, wrong target for id ≃ id
    tau.component["b"] = whole.identity.at("b");
    tau.component["c"] = whole.identity.at("c");
    CHECK_THROWS_AS(naturally_equivalent(id, id, tau), std::invalid_argument);
  }
}

TEST_CASE("naturally equivalent functors induce the same orbit map") {
  auto g = z2_swap_abc();
  auto f = GroupoidFunctor::identity(g);
  // G = conjugation-twisted identity: same on objects/orbits here.
  GroupoidFunctor h = f;
  auto tau = find_natural_transformation(f, h);
  REQUIRE(tau.has_value());
  CHECK(induced_orbit_map(f) == induced_orbit_map(h));
}

TEST_CASE("equivalences are closed under composition") {
  auto whole = z2_swap_abc();
  auto sub = full_subcategory(whole, {"a", "c"});
  auto subsub = full_subcategory(sub, {"a", "c"});
  auto i1 = GroupoidFunctor::full_subcategory_inclusion(sub, whole);
  auto i2 = GroupoidFunctor::full_subcategory_inclusion(subsub, sub);
  REQUIRE(is_equivalence(i1));
  REQUIRE(is_equivalence(i2));
  auto both = GroupoidFunctor::compose(i1, i2);
  REQUIRE(both.is_valid());
  CHECK(is_equivalence(both));
}

TEST_CASE("a functor naturally equivalent to an equivalence is one") {
  FixtureGen gen(606);
  for (int trial = 0; trial < 10; ++trial) {
    auto whole = gen.random_action_groupoid();
    auto f = GroupoidFunctor::identity(*whole);
    // Conjugate the identity through randomly chosen components: G is the
    // functor x -> target(τ(x)), h -> τ(tgt h) ∘ h ∘ τ(src h)^{-1}.
    NaturalTransformation tau;
    GroupoidFunctor g;
    g.domain = whole.get();
    g.codomain = whole.get();
    for (const auto& x : whole->objects) {
      // Any morphism out of x works as the component.
      std::vector<MorId> outgoing;
      for (const auto& [id, m] : whole->morphisms)
        if (m.src == x) outgoing.push_back(id);
      tau.component[x] = outgoing[std::size_t(gen.pick(0, int(outgoing.size()) - 1))];
      g.object_map[x] = whole->mor(tau.component[x]).tgt;
    }
    for (const auto& [id, m] : whole->morphisms)
      g.morphism_map[id] = whole->compose(
          whole->compose(tau.component.at(m.tgt), id),
          whole->inverse.at(tau.component.at(m.src)));
    REQUIRE(g.is_valid());
    CHECK(naturally_equivalent(f, g, tau));
    CHECK(is_equivalence(g));
    CHECK(induced_orbit_map(f) == induced_orbit_map(g));
  }
}

TEST_CASE("equivalence composition closure on random triples") {
  FixtureGen gen(404);
  for (int trial = 0; trial < 10; ++trial) {
    auto whole = gen.random_action_groupoid();
    auto inc1 = gen.random_equivalence_into(whole);
    // Second inclusion into the first subgroupoid.
    auto inc2 = gen.random_equivalence_into(inc1.sub);
    REQUIRE(is_equivalence(inc1.inclusion));
    REQUIRE(is_equivalence(inc2.inclusion));
    auto both = GroupoidFunctor::compose(inc1.inclusion, inc2.inclusion);
    REQUIRE(both.is_valid());
    CHECK(is_equivalence(both));
  }
}

TEST_CASE("action groupoid rejections and counts") {
  auto grp = FiniteGroup::cyclic(2);
  std::map<std::pair<std::string, ObjId>, ObjId> bad;
  bad[{"g0", "a"}] = "a";
  bad[{"g1", "a"}] = "a";
  bad[{"g0", "b"}] = "b";
  bad[{"g1", "b"}] = "a";  // not a permutation compatible with g1*g1 = e
  CHECK_THROWS_AS(action_groupoid(grp, {"a", "b"}, bad), std::invalid_argument);

  auto g = z2_swap_abc();
  CHECK(g.objects.size() == 3);
  CHECK(g.morphisms.size() == 6);  // 2 group elements * 3 points

  auto d = discrete({"p", "q"});
  CHECK(d.morphisms.size() == 2);
}
