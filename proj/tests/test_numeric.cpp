#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "polyfold/linalg.hpp"
#include "polyfold/polynomial.hpp"
#include "polyfold/rational.hpp"

using namespace polyfold;

TEST_CASE("rational normalization and arithmetic") {
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(1, -2) == Rational(-1, 2));
  CHECK((Rational(1, 2) + Rational(1, 3)) == Rational(5, 6));
  CHECK((Rational(1, 2) * Rational(2, 3)) == Rational(1, 3));
  CHECK((Rational(1, 2) / Rational(1, 4)) == Rational(2));
  CHECK(Rational(7).str() == "7");
  CHECK(Rational(-3, 9).str() == "-1/3");
  CHECK(Rational::parse("5/15") == Rational(1, 3));
  CHECK(Rational::parse("-4") == Rational(-4));
  CHECK(Rational(3, 5).pow(3) == Rational(27, 125));
  CHECK_THROWS(Rational(1, 0));
  CHECK(Rational(1, 3) < Rational(1, 2));
}

TEST_CASE("rational field laws on random triples") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::int64_t> num(-40, 40), den(1, 12);
  for (int i = 0; i < 300; ++i) {
    Rational a(num(rng), den(rng)), b(num(rng), den(rng)), c(num(rng), den(rng));
    CHECK((a + b) * c == a * c + b * c);
    CHECK(a + (b + c) == (a + b) + c);
    CHECK(a * (b * c) == (a * b) * c);
    if (!b.is_zero()) CHECK(a / b * b == a);
  }
}

TEST_CASE("polynomial evaluation, derivative, composition") {
  // p(x, y) = x^2 y + 3 y
  Polynomial p(2);
  p.add_term({2, 1}, Rational(1));
  p.add_term({0, 1}, Rational(3));
  CHECK(p.eval(VecQ{Rational(2), Rational(5)}) == Rational(35));
  CHECK(p.derivative(0).eval(VecQ{Rational(2), Rational(5)}) == Rational(20));
  CHECK(p.derivative(1).eval(VecQ{Rational(2), Rational(5)}) == Rational(7));

  // q(t) = p(t, t^2) = t^4 + 3 t^2
  auto q = p.compose({Polynomial::variable(1, 0),
                      Polynomial::variable(1, 0) * Polynomial::variable(1, 0)});
  CHECK(q.eval(VecQ{Rational(2)}) == Rational(28));
  CHECK(q.total_degree() == 4);
}

TEST_CASE("polynomial box integration is exact") {
  // ∫_0^1 ∫_0^1 (2x + 3y^2) dx dy = 1 + 1 = 2
  Polynomial p(2);
  p.add_term({1, 0}, Rational(2));
  p.add_term({0, 2}, Rational(3));
  Box box{{Rational(0), Rational(1)}, {Rational(0), Rational(1)}};
  CHECK(p.integrate_box(box) == Rational(2));

  // Fundamental theorem on random cubics: ∫_a^b p' = p(b) - p(a).
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<std::int64_t> coef(-6, 6);
  for (int i = 0; i < 50; ++i) {
    Polynomial c(1);
    for (unsigned d = 0; d <= 3; ++d) c.add_term({d}, Rational(coef(rng)));
    Rational a(coef(rng), 3), b = a + Rational(2);
    CHECK(c.derivative(0).integrate_box({{a, b}}) == c.eval(VecQ{b}) - c.eval(VecQ{a}));
  }
}

TEST_CASE("restrict_var drops one variable") {
  Polynomial p(2);
  p.add_term({2, 1}, Rational(1));  // x^2 y
  auto r = p.restrict_var(0, Rational(3));
  CHECK(r.nvars() == 1);
  CHECK(r.eval(VecQ{Rational(2)}) == Rational(18));
}

TEST_CASE("exact linear algebra") {
  MatQ m(3, 3);
  int v[9] = {2, 0, 1, 0, 3, 0, 4, 0, 2};  // det = 0
  for (int i = 0; i < 9; ++i) m.a[i] = Rational(v[i]);
  CHECK(det(m) == Rational(0));
  CHECK(rank(m) == 2);
  auto k = kernel_basis(m);
  CHECK(k.cols == 1);
  auto img = m.apply({k(0, 0), k(1, 0), k(2, 0)});
  for (const auto& e : img) CHECK(e == Rational(0));

  MatQ s(2, 2);
  s(0, 0) = Rational(1), s(0, 1) = Rational(2);
  s(1, 0) = Rational(3), s(1, 1) = Rational(4);
  VecQ x;
  CHECK(solve(s, VecQ{Rational(5), Rational(11)}, x));
  CHECK(x[0] == Rational(1));
  CHECK(x[1] == Rational(2));
}

TEST_CASE("float singular values and spans") {
  MatD m(2, 2);
  m(0, 0) = 3;
  m(1, 1) = 4;
  CHECK(smallest_singular_value(m) == doctest::Approx(3.0));
  MatD a(2, 1), b(2, 1);
  a(0, 0) = 1;
  b(1, 0) = 1;
  CHECK(spans_sum_to_full(a, b));
  CHECK_FALSE(spans_sum_to_full(a, a));
  CHECK(span_contained(a, a));
  CHECK_FALSE(span_contained(a, b));
}

TEST_CASE("float determinant sign matches exact determinant") {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> coef(-5, 5);
  for (int trial = 0; trial < 100; ++trial) {
    MatQ q(3, 3);
    for (auto& e : q.a) e = Rational(coef(rng));
    Rational dq = det(q);
    double dd = det(to_double(q));
    if (!dq.is_zero()) CHECK((dq.sign() > 0) == (dd > 0));
  }
}
