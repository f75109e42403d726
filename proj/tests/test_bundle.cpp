#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "polyfold/bundle.hpp"
#include "test_helpers.hpp"

using namespace polyfold;
using namespace polyfold::testing;

namespace {

FiniteStrongBundle trivial_line_bundle(const FiniteGroupoid& g) {
  FiniteStrongBundle b;
  b.base = &g;
  for (const auto& x : g.objects) b.fiber_dim[x] = 1;
  for (const auto& [id, m] : g.morphisms) b.mu[id] = MatQ::identity(1);
  return b;
}

ChartBundle sign_line_bundle() {
  // Z/2 on (-2, 2) by x -> -x with μ(σ, e) = -e.
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

}  // namespace

TEST_CASE("trivial line bundle over the swap groupoid validates") {
  auto g = z2_swap_abc();
  auto b = trivial_line_bundle(g);
  CHECK(b.validate().ok);
}

TEST_CASE("sign line bundle over the reflection chart validates") {
  auto b = sign_line_bundle();
  auto rep = b.validate();
  CHECK_MESSAGE(rep.ok, rep.detail);
}

TEST_CASE("non-invertible transport is rejected") {
  auto b = sign_line_bundle();
  b.mu["g1"] = MatQ(1, 1);  // zero matrix
  auto rep = b.validate();
  CHECK_FALSE(rep.ok);
  // The broken cocycle μ(g1)μ(g1) != μ(g0) or the singularity may trip first.
  CHECK((rep.failure == "invertibility" || rep.failure == "cocycle"));
}

TEST_CASE("fiber dimension must be constant on orbits") {
  auto g = z2_swap_abc();
  auto b = trivial_line_bundle(g);
  b.fiber_dim["a"] = 2;
  CHECK_FALSE(b.validate().ok);
}

TEST_CASE("finite sections: functoriality") {
  auto g = z2_swap_abc();
  auto b = trivial_line_bundle(g);
  FiniteSection s;
  s.bundle = &b;
  s.value["a"] = {Rational(3)};
  s.value["b"] = {Rational(3)};  // must match across the swap for trivial μ
  s.value["c"] = {Rational(7)};
  CHECK(s.is_functorial());
  s.value["b"] = {Rational(4)};
  CHECK_FALSE(s.is_functorial());
}

TEST_CASE("pullback along a double-cover-style equivalence") {
  // Pair groupoid on {u, v} (all four arrows) -> one-point groupoid: a
  // genuine non-injective equivalence of finite groupoids.
  FiniteGroupoid pair;
  pair.objects = {"u", "v"};
  for (const auto& s : {"u", "v"})
    for (const auto& t : {"u", "v"}) {
      MorId id = std::string(s) + ">" + t;
      pair.morphisms[id] = Morphism{id, s, t};
    }
  for (const auto& s : {"u", "v"}) pair.identity[s] = std::string(s) + ">" + s;
  for (const auto& [id, m] : pair.morphisms) pair.inverse[id] = m.tgt + ">" + m.src;
  for (const auto& [ig, mg] : pair.morphisms)
    for (const auto& [ih, mh] : pair.morphisms)
      if (mg.src == mh.tgt) pair.compose_table[{ig, ih}] = mh.src + ">" + mg.tgt;
  REQUIRE(validate_groupoid(pair).ok);

  auto point = one_object_cyclic(1);
  GroupoidFunctor collapse;
  collapse.domain = &pair;
  collapse.codomain = &point;
  for (const auto& x : pair.objects) collapse.object_map[x] = "pt";
  for (const auto& [id, m] : pair.morphisms)
    collapse.morphism_map[id] = point.identity.at("pt");
  REQUIRE(collapse.is_valid());
  REQUIRE(is_equivalence(collapse));

  auto eprime = trivial_line_bundle(pair);
  auto e = trivial_line_bundle(point);
  FiniteBundleMap phi;
  phi.source = &eprime;
  phi.target = &e;
  phi.base_map = collapse;
  MatQ two(1, 1);
  two(0, 0) = Rational(2);
  for (const auto& x : pair.objects) phi.fiber_map[x] = two;
  std::string why;
  REQUIRE_MESSAGE(phi.validate(&why), why);
  REQUIRE(phi.is_equivalence());

  FiniteSection f;
  f.bundle = &e;
  f.value["pt"] = {Rational(6)};
  auto pulled = pullback_section(phi, f);
  // Defining equation Φ(Φ*F(y)) = F(φ(y)):  2 · v = 6  =>  v = 3.
  CHECK(pulled.value.at("u") == VecQ{Rational(3)});
  CHECK(pulled.value.at("v") == VecQ{Rational(3)});
  CHECK(pulled.is_functorial());

  // Pushforward inverts the pullback.
  auto back = pushforward_section(phi, pulled);
  CHECK(back.value.at("pt") == VecQ{Rational(6)});
}

TEST_CASE("identity pullback returns the section") {
  auto g = z2_swap_abc();
  auto b = trivial_line_bundle(g);
  FiniteBundleMap id;
  id.source = &b;
  id.target = &b;
  id.base_map = GroupoidFunctor::identity(g);
  for (const auto& x : g.objects) id.fiber_map[x] = MatQ::identity(1);
  REQUIRE(id.validate());
  FiniteSection s;
  s.bundle = &b;
  for (const auto& x : g.objects) s.value[x] = {Rational(5)};
  auto pulled = pullback_section(id, s);
  CHECK(pulled.value == s.value);
}

TEST_CASE("naturally equivalent bundle maps pull back sections identically") {
  // Base: one-object Z/2; bundle: line with μ(σ) = -1. Two bundle maps
  // related by the natural transformation with component σ.
  auto bz2 = one_object_cyclic(2);
  FiniteStrongBundle e;
  e.base = &bz2;
  e.fiber_dim["pt"] = 1;
  e.mu[bz2.identity.at("pt")] = MatQ::identity(1);
  MatQ neg(1, 1);
  neg(0, 0) = Rational(-1);
  e.mu["g1@pt"] = neg;
  REQUIRE(e.validate().ok);

  FiniteBundleMap phi;
  phi.source = &e;
  phi.target = &e;
  phi.base_map = GroupoidFunctor::identity(bz2);
  phi.fiber_map["pt"] = MatQ::identity(1);
  REQUIRE(phi.validate());

  // Ψ = μ(σ) ∘ Φ covering the conjugated base map (same here).
  FiniteBundleMap psi = phi;
  psi.fiber_map["pt"] = neg;
  REQUIRE(psi.validate());

  NaturalTransformation tau;
  tau.component["pt"] = "g1@pt";
  std::string why;
  CHECK(bundle_maps_naturally_equivalent(phi, psi, tau, &why));

  // The only functorial sections of this bundle vanish, and both pullbacks
  // agree on them.
  FiniteSection zero;
  zero.bundle = &e;
  zero.value["pt"] = {Rational(0)};
  REQUIRE(zero.is_functorial());
  auto p1 = pullback_section(phi, zero);
  auto p2 = pullback_section(psi, zero);
  CHECK(p1.value == p2.value);
}

TEST_CASE("naturally equivalent maps over distinct base functors agree on pullbacks") {
  // Pair groupoid on {u, v}: hom sets are singletons, so any component
  // choice is natural. Φ covers the identity, Ψ covers the swap.
  FiniteGroupoid pair;
  pair.objects = {"u", "v"};
  for (const auto& s : {"u", "v"})
    for (const auto& t : {"u", "v"}) {
      MorId id = std::string(s) + ">" + t;
      pair.morphisms[id] = Morphism{id, s, t};
    }
  for (const auto& s : {"u", "v"}) pair.identity[s] = std::string(s) + ">" + s;
  for (const auto& [id, m] : pair.morphisms) pair.inverse[id] = m.tgt + ">" + m.src;
  for (const auto& [ig, mg] : pair.morphisms)
    for (const auto& [ih, mh] : pair.morphisms)
      if (mg.src == mh.tgt) pair.compose_table[{ig, ih}] = mh.src + ">" + mg.tgt;
  REQUIRE(validate_groupoid(pair).ok);

  auto e = trivial_line_bundle(pair);
  FiniteBundleMap phi;
  phi.source = &e;
  phi.target = &e;
  phi.base_map = GroupoidFunctor::identity(pair);
  for (const auto& x : pair.objects) phi.fiber_map[x] = MatQ::identity(1);
  REQUIRE(phi.validate());

  FiniteBundleMap psi = phi;
  psi.base_map.object_map = {{"u", "v"}, {"v", "u"}};
  for (const auto& [id, m] : pair.morphisms) {
    std::string swapped_src = m.src == "u" ? "v" : "u";
    std::string swapped_tgt = m.tgt == "u" ? "v" : "u";
    psi.base_map.morphism_map[id] = swapped_src + ">" + swapped_tgt;
  }
  REQUIRE(psi.base_map.is_valid());
  REQUIRE(psi.validate());

  NaturalTransformation tau;
  tau.component["u"] = "u>v";
  tau.component["v"] = "v>u";
  std::string why;
  REQUIRE(bundle_maps_naturally_equivalent(phi, psi, tau, &why));

  FiniteSection f;
  f.bundle = &e;
  f.value["u"] = {Rational(9)};
  f.value["v"] = {Rational(9)};  // functorial: constant across the single orbit
  REQUIRE(f.is_functorial());
  auto p1 = pullback_section(phi, f);
  auto p2 = pullback_section(psi, f);
  CHECK(p1.value == p2.value);
}

TEST_CASE("section equivariance over the sign bundle") {
  auto b = sign_line_bundle();
  // F(x) = x is odd: μ(σ)F(x) = -x = F(-x). Symbolic check.
  auto odd = SectionExpr::from_polys({Polynomial::variable(1, 0)});
  CHECK(section_equivariant(b, odd));
  auto even = SectionExpr::from_polys({Polynomial::constant(1, Rational(1))});
  CHECK_FALSE(section_equivariant(b, even));
}

TEST_CASE("auxiliary norms: averaging enforces invariance") {
  auto b = sign_line_bundle();
  auto eu = AuxiliaryNorm::euclidean();
  CHECK(check_norm_axioms(b, eu, 3));
  CHECK(check_norm_invariance(b, eu, 3));

  // Averaged Euclidean stays Euclidean (already invariant): |−e| = |e|.
  auto avg = average_norm(b, eu);
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int k = 0; k < 32; ++k) {
    VecD x{u(rng)}, e{u(rng)};
    CHECK(avg(x, e) == doctest::Approx(eu(x, e)).epsilon(1e-12));
  }

  // Raw N(x, e) = |e| (1 + x) is a norm fiberwise but not invariant;
  // averaging symmetrizes it to |e| (1 + x^2/... ) — check evenness.
  Polynomial w = Polynomial::affine({Rational(1, 4)}, Rational(1));
  auto raw = AuxiliaryNorm::weighted_euclidean(w);
  CHECK_FALSE(check_norm_invariance(b, raw, 4));
  auto sym = average_norm(b, raw);
  CHECK(check_norm_invariance(b, sym, 4));
  for (int k = 0; k < 16; ++k) {
    VecD x{u(rng)}, e{u(rng)};
    VecD mx{-x[0]};
    CHECK(sym(x, e) == doctest::Approx(sym(mx, e)).epsilon(1e-12));
  }

  // Already-even weight |e|(1 + x^2): averaging is the identity on it.
  Polynomial even(1);
  even.add_term({0}, Rational(1));
  even.add_term({2}, Rational(1));
  auto raw_even = AuxiliaryNorm::weighted_euclidean(even);
  CHECK(check_norm_invariance(b, raw_even, 5));
  auto avg_even = average_norm(b, raw_even);
  for (int k = 0; k < 16; ++k) {
    VecD x{u(rng)}, e{u(rng)};
    CHECK(avg_even(x, e) == doctest::Approx(raw_even(x, e)).epsilon(1e-12));
  }

  // Trivial group: averaged equals raw.
  auto triv = ChartBundle::trivial_line(
      ChartGroupoid::trivial(CornerDomain{{{Rational(-2), Rational(2), false, false}}}));
  auto avg_triv = average_norm(triv, raw);
  for (int k = 0; k < 16; ++k) {
    VecD x{u(rng)}, e{u(rng)};
    CHECK(avg_triv(x, e) == doctest::Approx(raw(x, e)).epsilon(1e-12));
  }
}

TEST_CASE("norms that fail the axioms are rejected") {
  auto b = sign_line_bundle();
  AuxiliaryNorm bogus;
  bogus.desc = "squared";  // violates homogeneity
  bogus.fn = [](const VecD&, const VecD& e) {
    double s = 0;
    for (double v : e) s += v * v;
    return s;
  };
  CHECK_THROWS_AS(average_norm(b, bogus), std::invalid_argument);
}
