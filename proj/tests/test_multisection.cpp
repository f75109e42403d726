#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "polyfold/multisection.hpp"

using namespace polyfold;

namespace {

ChartBundle line_over_interval(Rational lo, Rational hi) {
  ChartGroupoid cg;
  cg.group = FiniteGroup::cyclic(1);
  cg.domain = CornerDomain{{{lo, hi, false, false}}};
  cg.action["g0"] = identity_map(1);
  return ChartBundle::trivial_line(cg);
}

ChartBundle sign_line_bundle() {
  ChartGroupoid cg;
  cg.group = FiniteGroup::cyclic(2);
  cg.domain = CornerDomain{{{Rational(-2), Rational(2), false, false}}};
  cg.action["g0"] = identity_map(1);
  cg.action["g1"] = {Polynomial::affine({Rational(-1)}, Rational(0))};
  ChartBundle b;
  b.base = cg;
  b.fiber_dim = 1;
  b.mu["g0"] = MatQ::identity(1);
  MatQ neg(1, 1);
  neg(0, 0) = Rational(-1);
  b.mu["g1"] = neg;
  return b;
}

SectionExpr const_section(const ChartBundle& b, Rational c) {
  return SectionExpr::from_polys({Polynomial::constant(b.dim(), c)});
}

// Quadratic through prescribed values at x = -1, 0, 1.
Polynomial quadratic_through(Rational at_m1, Rational at_0, Rational at_1) {
  // p(x) = a x^2 + b x + c with c = at_0, a = (at_m1 + at_1)/2 - at_0,
  // b = (at_1 - at_m1)/2.
  Polynomial p(1);
  Rational c = at_0;
  Rational a = (at_m1 + at_1) / Rational(2) - at_0;
  Rational b = (at_1 - at_m1) / Rational(2);
  p.add_term({2}, a);
  p.add_term({1}, b);
  p.add_term({0}, c);
  return p;
}

}  // namespace

TEST_CASE("four-section fixture: weights add where sections meet") {
  // Four sections on a line bundle over (-2, 2) with weights 1/10 .. 4/10,
  // arranged so that at y = 0 sections 1 and 3 pass through e1' = 5 and
  // sections 2 and 4 through e2' = 7, and at z = 1 all four vanish.
  auto b = line_over_interval(Rational(-2), Rational(2));
  std::vector<WeightedSection> ws;
  ws.push_back({SectionExpr::from_polys({quadratic_through(Rational(1), Rational(5), Rational(0))}),
                Rational(1, 10), true});
  ws.push_back({SectionExpr::from_polys({quadratic_through(Rational(2), Rational(7), Rational(0))}),
                Rational(2, 10), true});
  ws.push_back({SectionExpr::from_polys({quadratic_through(Rational(3), Rational(5), Rational(0))}),
                Rational(3, 10), true});
  ws.push_back({SectionExpr::from_polys({quadratic_through(Rational(4), Rational(7), Rational(0))}),
                Rational(4, 10), true});
  Multisection lam(&b, std::move(ws));
  std::string why;
  REQUIRE_MESSAGE(lam.validate(&why), why);

  // At x = -1 all four values are distinct.
  for (int j = 1; j <= 4; ++j)
    CHECK(lam.evaluate(VecQ{Rational(-1)}, VecQ{Rational(j)}) == Rational(j, 10));
  // At y = 0 the weights of coinciding sections add.
  CHECK(lam.evaluate(VecQ{Rational(0)}, VecQ{Rational(5)}) == Rational(1, 10) + Rational(3, 10));
  CHECK(lam.evaluate(VecQ{Rational(0)}, VecQ{Rational(7)}) == Rational(2, 10) + Rational(4, 10));
  // At z = 1 all four sections vanish: the zero vector carries full weight.
  CHECK(lam.evaluate(VecQ{Rational(1)}, VecQ{Rational(0)}) == Rational(1));
  // A vector on no section gets the empty sum.
  CHECK(lam.evaluate(VecQ{Rational(0)}, VecQ{Rational(11)}) == Rational(0));
  // Fiber support sums to 1 at every object.
  for (const auto& x : {Rational(-1), Rational(0), Rational(1), Rational(1, 3)}) {
    Rational total(0);
    for (const auto& [e, w] : lam.support_at(VecQ{x})) total += w;
    CHECK(total == Rational(1));
  }
}

TEST_CASE("sum convolves sections and weights") {
  auto b = line_over_interval(Rational(-2), Rational(2));
  Multisection lam(&b, {{const_section(b, Rational(0)), Rational(1, 2), true},
                        {const_section(b, Rational(1)), Rational(1, 2), true}});
  Multisection lamp(&b, {{const_section(b, Rational(0)), Rational(1, 3), true},
                         {const_section(b, Rational(2)), Rational(2, 3), true}});
  auto s = sum(lam, lamp);
  CHECK(s.total_weight() == Rational(1));
  CHECK(s.sections().size() == 4);  // values {0, 2, 1, 3}
  CHECK(s.evaluate(VecQ{Rational(0)}, VecQ{Rational(0)}) == Rational(1, 6));
  CHECK(s.evaluate(VecQ{Rational(0)}, VecQ{Rational(2)}) == Rational(1, 3));
  CHECK(s.evaluate(VecQ{Rational(0)}, VecQ{Rational(1)}) == Rational(1, 6));
  CHECK(s.evaluate(VecQ{Rational(0)}, VecQ{Rational(3)}) == Rational(1, 3));
}

TEST_CASE("trivial multisection is the unit of the sum") {
  auto b = line_over_interval(Rational(-2), Rational(2));
  Multisection lam(&b, {{const_section(b, Rational(0)), Rational(1, 2), true},
                        {const_section(b, Rational(1)), Rational(1, 2), true}});
  auto s = sum(lam, Multisection::trivial(b));
  REQUIRE(s.sections().size() == lam.sections().size());
  for (const auto& e : {Rational(0), Rational(1), Rational(5)})
    CHECK(s.evaluate(VecQ{Rational(0)}, VecQ{e}) == lam.evaluate(VecQ{Rational(0)}, VecQ{e}));
}

TEST_CASE("random rational sums keep total weight exactly 1") {
  auto b = line_over_interval(Rational(-2), Rational(2));
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<std::int64_t> cnum(-9, 9), parts(2, 4);
  for (int trial = 0; trial < 30; ++trial) {
    auto make = [&]() {
      int k = int(parts(rng));
      std::vector<WeightedSection> ws;
      for (int j = 0; j < k; ++j)
        ws.push_back({const_section(b, Rational(cnum(rng))), Rational(1, k), true});
      return Multisection(&b, std::move(ws));
    };
    auto s = sum(make(), make());
    CHECK(s.total_weight() == Rational(1));
    std::string why;
    CHECK_MESSAGE(s.validate(&why), why);
  }
}

TEST_CASE("sum is commutative and associative on the induced functor") {
  auto b = line_over_interval(Rational(-2), Rational(2));
  Multisection a(&b, {{const_section(b, Rational(0)), Rational(1, 2), true},
                      {const_section(b, Rational(1)), Rational(1, 2), true}});
  Multisection c(&b, {{const_section(b, Rational(2)), Rational(1, 3), true},
                      {const_section(b, Rational(0)), Rational(2, 3), true}});
  Multisection d(&b, {{const_section(b, Rational(1)), Rational(1, 4), true},
                      {const_section(b, Rational(3)), Rational(3, 4), true}});

  auto ab = sum(a, c), ba = sum(c, a);
  auto ab_c = sum(sum(a, c), d), a_bc = sum(a, sum(c, d));
  VecQ x{Rational(0)};
  for (auto& [e, w] : ab.support_at(x)) CHECK(ba.evaluate(x, e) == w);
  for (auto& [e, w] : ab_c.support_at(x)) CHECK(a_bc.evaluate(x, e) == w);
  CHECK(ab_c.support_at(x).size() == a_bc.support_at(x).size());
}

TEST_CASE("convex combination evaluates pointwise") {
  auto b = line_over_interval(Rational(-2), Rational(2));
  Multisection one(&b, {{const_section(b, Rational(1)), Rational(1), true}});
  Multisection zero = Multisection::trivial(b);
  Rational alpha(1, 3);
  auto mix = convex_combination(alpha, one, zero);
  CHECK(mix.total_weight() == Rational(1));
  VecQ x{Rational(0)};
  CHECK(mix.evaluate(x, VecQ{Rational(1)}) ==
        alpha * one.evaluate(x, VecQ{Rational(1)}) +
            (Rational(1) - alpha) * zero.evaluate(x, VecQ{Rational(1)}));
  CHECK(mix.evaluate(x, VecQ{Rational(0)}) == Rational(1) - alpha);
}

TEST_CASE("symmetrize over the trivial group returns the section alone") {
  auto b = line_over_interval(Rational(-2), Rational(2));
  BumpBox bump{{Rational(1, 2)}, {Rational(1, 4)}};
  auto h = SectionExpr::bump_vector(bump, {Rational(1)});
  auto lam = symmetrize(b, h, b.base.domain.bounding_box());
  REQUIRE(lam.sections().size() == 1);
  CHECK(lam.sections()[0].weight == Rational(1));
}

TEST_CASE("symmetrize over the reflection produces the odd partner") {
  auto b = sign_line_bundle();
  BumpBox bump{{Rational(1, 2)}, {Rational(1, 5)}};
  auto h = SectionExpr::bump_vector(bump, {Rational(1)});
  auto lam = symmetrize(b, h, b.base.domain.bounding_box());
  std::string why;
  REQUIRE_MESSAGE(lam.validate(&why), why);
  REQUIRE(lam.sections().size() == 2);
  for (const auto& ws : lam.sections()) CHECK(ws.weight == Rational(1, 2));

  // h_σ(-y) = -h(y) on sample points.
  const auto& hs = lam.sections()[1].section;
  const auto& he = lam.sections()[0].section;
  for (double y : {0.45, 0.5, 0.55, 0.6}) {
    CHECK(hs.eval(VecD{-y})[0] == doctest::Approx(-he.eval(VecD{y})[0]));
  }

  // Triviality away from the transported supports.
  CHECK(lam.evaluate(VecD{1.5}, VecD{0.0}) == Rational(1));
  CHECK(lam.evaluate(VecD{1.5}, VecD{0.3}) == Rational(0));
}

TEST_CASE("symmetrize rejects supports leaking from the region") {
  auto b = sign_line_bundle();
  BumpBox bump{{Rational(1, 2)}, {Rational(1, 5)}};
  auto h = SectionExpr::bump_vector(bump, {Rational(1)});
  Box small{{Rational(0), Rational(1)}};  // not invariant: misses the mirror image
  CHECK_THROWS_AS(symmetrize(b, h, small), std::invalid_argument);
}

TEST_CASE("freeze: zero parameter gives the trivial multisection") {
  auto b = sign_line_bundle();
  ParamMultisection pm;
  pm.bundle = &b;
  BumpBox bump{{Rational(1, 2)}, {Rational(1, 5)}};
  pm.basis = {SectionExpr::bump_vector(bump, {Rational(1)})};
  pm.support = b.base.domain.bounding_box();
  auto lam = pm.freeze(VecQ{Rational(0)});
  CHECK(lam.is_trivial());
  CHECK(lam.total_weight() == Rational(1));
}

TEST_CASE("freeze is linear in the parameter") {
  auto b = line_over_interval(Rational(-2), Rational(2));
  ParamMultisection pm;
  pm.bundle = &b;
  pm.basis = {const_section(b, Rational(1))};
  pm.support = b.base.domain.bounding_box();
  auto lam = pm.freeze(VecQ{Rational(1, 2)});
  REQUIRE(lam.sections().size() == 1);
  CHECK(lam.sections()[0].section.eval(VecD{0.3})[0] == doctest::Approx(0.5));
  CHECK_THROWS_AS(pm.freeze(VecQ{Rational(3, 2)}), std::invalid_argument);
}

TEST_CASE("norm bounds") {
  auto b = line_over_interval(Rational(-2), Rational(2));
  auto n = AuxiliaryNorm::euclidean();
  Multisection lam(&b, {{const_section(b, Rational(0)), Rational(1, 2), true},
                        {const_section(b, Rational(1)), Rational(1, 2), true}});
  CHECK(lam.norm_sup(n) == doctest::Approx(1.0));
  CHECK(Multisection::trivial(b).norm_sup(n) == doctest::Approx(0.0));

  // Subadditivity of the sup-norm under ⊕ on random constant fixtures.
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<std::int64_t> cnum(-9, 9);
  for (int trial = 0; trial < 20; ++trial) {
    Multisection u(&b, {{const_section(b, Rational(cnum(rng))), Rational(1, 2), true},
                        {const_section(b, Rational(cnum(rng))), Rational(1, 2), true}});
    Multisection v(&b, {{const_section(b, Rational(cnum(rng))), Rational(1, 3), true},
                        {const_section(b, Rational(cnum(rng))), Rational(2, 3), true}});
    CHECK(sum(u, v).norm_sup(n) <= u.norm_sup(n) + v.norm_sup(n) + 1e-12);
  }

  // Basis sections with norm < ε/k freeze to norm < ε for |t|_∞ < 1.
  double eps = 0.5;
  ParamMultisection pm;
  pm.bundle = &b;
  pm.basis = {const_section(b, Rational(1, 5)), const_section(b, Rational(1, 6))};
  pm.support = b.base.domain.bounding_box();
  REQUIRE(section_norm_sup(b, pm.basis[0], n) < eps / 2);
  REQUIRE(section_norm_sup(b, pm.basis[1], n) < eps / 2);
  auto lam2 = pm.freeze(VecQ{Rational(9, 10), Rational(-9, 10)});
  CHECK(lam2.norm_sup(n) < eps);
}
