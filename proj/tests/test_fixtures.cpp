#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>

#include "polyfold/fixtures.hpp"

using namespace polyfold;
namespace fx = polyfold::fixtures;

#ifndef FIXTURE_DIR
#define FIXTURE_DIR "fixtures"
#endif

namespace {
std::string at(const std::string& name) { return std::string(FIXTURE_DIR) + "/" + name; }
}  // namespace

TEST_CASE("rational and polynomial parsing") {
  CHECK(fx::parse_rational(fx::json("3/4")) == Rational(3, 4));
  CHECK(fx::parse_rational(fx::json(5)) == Rational(5));
  CHECK_THROWS_AS(fx::parse_rational(fx::json("abc")), fx::SchemaError);

  auto j = fx::json::parse(R"([[[2], "1"], [[0], "-1/2"]])");
  auto p = fx::parse_poly(j, 1);
  CHECK(p.eval(VecQ{Rational(2)}) == Rational(7, 2));
}

TEST_CASE("groupoid fixture round trip") {
  auto g = fx::parse_finite_groupoid(fx::load_file(at("groupoid_z2_swap.json")));
  CHECK(validate_groupoid(*g).ok);
  CHECK(g->objects.size() == 3);
  CHECK(g->morphisms.size() == 6);
  auto j = fx::finite_groupoid_to_json(*g);
  auto g2 = fx::parse_finite_groupoid(j);
  CHECK(fx::same_tables(*g, *g2));
}

TEST_CASE("multisection fixture: four-section worked values") {
  auto loaded = fx::parse_multisection_fixture(fx::load_file(at("msec_four.json")));
  CHECK(loaded.lambda.total_weight() == Rational(1));
  CHECK(loaded.lambda.evaluate(VecQ{Rational(0)}, VecQ{Rational(5)}) == Rational(2, 5));
  CHECK(loaded.lambda.evaluate(VecQ{Rational(1)}, VecQ{Rational(0)}) == Rational(1));
  CHECK(loaded.lambda.evaluate(VecQ{Rational(0)}, VecQ{Rational(9)}) == Rational(0));
}

TEST_CASE("branched fixture loads and integrates") {
  auto loaded = fx::parse_branched(fx::load_file(at("stokes_square.json")));
  auto omega = loaded.forms.at("omega");
  CHECK(stokes_residual(loaded.subgroupoid, omega) == Rational(0));
}

TEST_CASE("problem fixtures load and validate") {
  auto lin = fx::parse_problem(fx::load_file(at("degree_linear.json")));
  CHECK(degree(*lin.problem, lin.lambda) == Rational(1));

  auto z2 = fx::parse_problem(fx::load_file(at("degree_z2.json")));
  CHECK(degree(*z2.problem, z2.lambda) == Rational(1, 2));

  auto edge = fx::parse_problem(fx::load_file(at("problem_edge.json")));
  auto omega = edge.forms.at("omega");
  CHECK(invariant(*edge.problem, edge.lambda, omega) == doctest::Approx(0.5));
}

TEST_CASE("curve fixtures") {
  auto s = fx::parse_curve(fx::load_file(at("curve_torus_sphere.json")));
  CHECK(arithmetic_genus(s) == 1);
  auto t = stabilize(s);
  CHECK(t.components.size() == 1);
  CHECK(arithmetic_genus(t) == 1);
}

TEST_CASE("functor and diagram fixtures") {
  auto F = fx::parse_functor(fx::load_file(at("functor_id_bz2.json")));
  CHECK(is_equivalence(F.functor));
  auto G = fx::parse_functor(fx::load_file(at("functor_point_to_bz2.json")));
  CHECK(fx::same_tables(*F.codomain, *G.codomain));
  G.functor.codomain = F.codomain.get();
  auto fp = weak_fibered_product(F.functor, G.functor);
  CHECK(fp.total->objects.size() == 2);
  CHECK(is_equivalence(fp.pi2));

  auto d = fx::parse_diagram(fx::load_file(at("diagram_identity_bz2.json")));
  auto w = fx::parse_witness(fx::load_file(at("witness_identity_bz2.json")), *d.middle,
                             *d.middle, *d.left, *d.right);
  CHECK(is_refinement(d.diagram, d.diagram, w));
}

TEST_CASE("schema errors carry diagnostics") {
  CHECK_THROWS_AS(fx::load_file(at("does_not_exist.json")), fx::SchemaError);

  auto j = fx::load_file(at("degree_linear.json"));
  j.erase("section");
  CHECK_THROWS_AS(fx::parse_problem(j), fx::SchemaError);

  auto bad = fx::load_file(at("msec_four.json"));
  bad["multisection"]["sections"][0]["weight"] = "1/3";  // breaks the sum
  CHECK_THROWS_AS(fx::parse_multisection_fixture(bad), fx::SchemaError);
}
