#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "polyfold/curves.hpp"
#include "polyfold/randgen.hpp"

using namespace polyfold;

namespace {

NodalSurface torus() {
  NodalSurface s;
  s.components.push_back({"t", 1});
  return s;
}

NodalSurface two_spheres_one_node() {
  NodalSurface s;
  s.components.push_back({"a", 0});
  s.components.push_back({"b", 0});
  s.nodes.push_back({{"p", "a"}, {"q", "b"}});
  return s;
}

NodalSurface self_noded_sphere() {
  NodalSurface s;
  s.components.push_back({"a", 0});
  s.nodes.push_back({{"p", "a"}, {"q", "a"}});
  return s;
}

}  // namespace

TEST_CASE("connectivity") {
  CHECK(is_connected(two_spheres_one_node()));
  CHECK(is_connected(torus()));
  NodalSurface disjoint;
  disjoint.components.push_back({"a", 0});
  disjoint.components.push_back({"b", 0});
  CHECK_FALSE(is_connected(disjoint));
}

TEST_CASE("arithmetic genus") {
  CHECK(arithmetic_genus(torus()) == 1);
  CHECK(arithmetic_genus(two_spheres_one_node()) == 0);
  CHECK(arithmetic_genus(self_noded_sphere()) == 1);
  NodalSurface disjoint;
  disjoint.components.push_back({"a", 0});
  disjoint.components.push_back({"b", 0});
  CHECK_THROWS_AS(arithmetic_genus(disjoint), std::invalid_argument);
}

TEST_CASE("stability") {
  NodalSurface sphere3;
  sphere3.components.push_back({"a", 0});
  sphere3.marked = {{"m1", "a"}, {"m2", "a"}, {"m3", "a"}};
  CHECK(is_stable(sphere3).stable);

  auto pair = two_spheres_one_node();  // each sphere has one special point
  auto rep = is_stable(pair);
  CHECK_FALSE(rep.stable);
  CHECK(rep.failing_components.size() == 2);

  CHECK_FALSE(is_stable(torus()).stable);  // 2·1 + 0 < 3
}

TEST_CASE("stabilize: marked sphere attached to a torus (case three)") {
  NodalSurface s;
  s.components.push_back({"sph", 0});
  s.components.push_back({"tor", 1});
  s.marked = {{"m", "sph"}};
  s.nodes.push_back({{"p", "sph"}, {"q", "tor"}});
  REQUIRE(is_connected(s));
  REQUIRE(arithmetic_genus(s) == 1);

  auto t = stabilize(s);
  REQUIRE(t.components.size() == 1);
  CHECK(t.components[0].id == "tor");
  CHECK(t.marked.size() == 1);
  CHECK(t.marked[0].comp == "tor");
  CHECK(t.nodes.empty());
  CHECK(arithmetic_genus(t) == 1);
  CHECK(is_stable(t).stable);
}

TEST_CASE("stabilize: torus-sphere-torus chain (case two shortcut)") {
  NodalSurface s;
  s.components.push_back({"t1", 1});
  s.components.push_back({"mid", 0});
  s.components.push_back({"t2", 1});
  s.nodes.push_back({{"a", "t1"}, {"b", "mid"}});
  s.nodes.push_back({{"c", "mid"}, {"d", "t2"}});
  REQUIRE(arithmetic_genus(s) == 2);

  auto t = stabilize(s);
  CHECK(t.components.size() == 2);
  REQUIRE(t.nodes.size() == 1);
  CHECK(t.nodes[0].first.comp != t.nodes[0].second.comp);
  CHECK(arithmetic_genus(t) == 2);
  CHECK(is_stable(t).stable);
}

TEST_CASE("stabilize: one-node sphere dropped (case one)") {
  NodalSurface s;
  s.components.push_back({"sph", 0});
  s.components.push_back({"base", 1});
  s.marked = {{"m", "base"}};
  s.nodes.push_back({{"p", "sph"}, {"q", "base"}});
  auto t = stabilize(s);
  CHECK(t.components.size() == 1);
  CHECK(t.components[0].id == "base");
  CHECK(t.nodes.empty());
  CHECK(arithmetic_genus(s) == arithmetic_genus(t));
}

TEST_CASE("stabilize is the identity on stable surfaces") {
  NodalSurface s;
  s.components.push_back({"a", 0});
  s.marked = {{"m1", "a"}, {"m2", "a"}, {"m3", "a"}};
  auto t = stabilize(s);
  CHECK(isomorphic(s, t));
}

TEST_CASE("unstabilizable inputs are rejected") {
  NodalSurface lone;
  lone.components.push_back({"a", 0});
  lone.marked = {{"m", "a"}};
  CHECK_THROWS_AS(stabilize(lone), NotStabilizable);

  CHECK_THROWS_AS(stabilize(torus()), NotStabilizable);
  CHECK_THROWS_AS(stabilize(self_noded_sphere()), NotStabilizable);
}

TEST_CASE("isomorphism checks") {
  auto a = two_spheres_one_node();
  NodalSurface b;
  b.components.push_back({"x", 0});
  b.components.push_back({"y", 0});
  b.nodes.push_back({{"u", "y"}, {"v", "x"}});
  CHECK(isomorphic(a, b));

  // Marked order matters.
  NodalSurface m1, m2;
  m1.components.push_back({"a", 0});
  m1.components.push_back({"b", 0});
  m1.nodes.push_back({{"p", "a"}, {"q", "b"}});
  m1.marked = {{"s", "a"}, {"t", "b"}, {"u", "a"}, {"v", "b"}};
  m2 = m1;
  std::swap(m2.marked[0], m2.marked[1]);
  CHECK(isomorphic(m1, m1));
  CHECK_FALSE(isomorphic(m1, m2));

  // Node chain vs self-node differ as graphs.
  NodalSurface chain;
  chain.components.push_back({"a", 0});
  chain.components.push_back({"b", 0});
  chain.nodes.push_back({{"p", "a"}, {"q", "b"}});
  chain.nodes.push_back({{"r", "a"}, {"s", "b"}});
  NodalSurface selfn;
  selfn.components.push_back({"a", 0});
  selfn.components.push_back({"b", 0});
  selfn.nodes.push_back({{"p", "a"}, {"q", "b"}});
  selfn.nodes.push_back({{"r", "a"}, {"s", "a"}});
  CHECK_FALSE(isomorphic(chain, selfn));
}

TEST_CASE("random surfaces: genus preservation, idempotence, order independence") {
  FixtureGen gen(2024);
  int stabilized = 0, rejected = 0;
  for (int trial = 0; trial < 400; ++trial) {
    auto s = gen.random_connected_surface();
    std::string why;
    REQUIRE_MESSAGE(s.is_valid(&why), why);
    REQUIRE(is_connected(s));
    int g = arithmetic_genus(s);
    try {
      auto t = stabilize(s);
      ++stabilized;
      CHECK(arithmetic_genus(t) == g);
      CHECK(is_stable(t).stable);
      CHECK(isomorphic(stabilize(t), t));  // idempotence
      // Order independence over random weeding orders.
      for (int run = 0; run < 5; ++run) {
        std::vector<int> picks;
        for (int k = 0; k < 20; ++k) picks.push_back(gen.pick(0, 100));
        auto u = stabilize_with_order(s, picks);
        CHECK(isomorphic(u, t));
      }
    } catch (const NotStabilizable&) {
      ++rejected;  // degenerate shapes (weed to empty) are rejected by design
    }
  }
  CHECK(stabilized > 250);
}
