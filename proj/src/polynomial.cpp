#include "polyfold/polynomial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace polyfold {

Polynomial Polynomial::constant(int nvars, const Rational& c) {
  Polynomial p(nvars);
  p.add_term(Exponents(nvars, 0), c);
  return p;
}

Polynomial Polynomial::variable(int nvars, int i) {
  Polynomial p(nvars);
  Exponents e(nvars, 0);
  e[i] = 1;
  p.add_term(e, Rational(1));
  return p;
}

Polynomial Polynomial::affine(const VecQ& coeffs, const Rational& c) {
  Polynomial p(int(coeffs.size()));
  p.add_term(Exponents(coeffs.size(), 0), c);
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    Exponents e(coeffs.size(), 0);
    e[i] = 1;
    p.add_term(e, coeffs[i]);
  }
  return p;
}

bool Polynomial::is_constant() const {
  return terms_.empty() ||
         (terms_.size() == 1 &&
          terms_.begin()->first == Exponents(nvars_, 0));
}

Rational Polynomial::constant_value() const {
  if (terms_.empty()) return Rational(0);
  return terms_.begin()->second;
}

int Polynomial::total_degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) {
    int t = 0;
    for (auto x : e) t += int(x);
    d = std::max(d, t);
  }
  return d;
}

void Polynomial::add_term(const Exponents& e, const Rational& c) {
  if (int(e.size()) != nvars_) throw std::invalid_argument("polynomial: exponent arity");
  if (c.is_zero()) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
  } else {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Polynomial Polynomial::operator-() const {
  Polynomial p(nvars_);
  for (const auto& [e, c] : terms_) p.terms_.emplace(e, -c);
  return p;
}

Polynomial& Polynomial::operator+=(const Polynomial& p) {
  if (nvars_ != p.nvars_) throw std::invalid_argument("polynomial: arity mismatch");
  for (const auto& [e, c] : p.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& p) {
  if (nvars_ != p.nvars_) throw std::invalid_argument("polynomial: arity mismatch");
  for (const auto& [e, c] : p.terms_) add_term(e, -c);
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.nvars_ != b.nvars_) throw std::invalid_argument("polynomial: arity mismatch");
  Polynomial p(a.nvars_);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      Polynomial::Exponents e(a.nvars_);
      for (int i = 0; i < a.nvars_; ++i) e[i] = ea[i] + eb[i];
      p.add_term(e, ca * cb);
    }
  return p;
}

Polynomial Polynomial::scaled(const Rational& c) const {
  Polynomial p(nvars_);
  if (c.is_zero()) return p;
  for (const auto& [e, k] : terms_) p.terms_.emplace(e, k * c);
  return p;
}

Rational Polynomial::eval(const VecQ& x) const {
  if (int(x.size()) != nvars_) throw std::invalid_argument("polynomial: eval arity");
  Rational acc(0);
  for (const auto& [e, c] : terms_) {
    Rational t = c;
    for (int i = 0; i < nvars_; ++i)
      if (e[i]) t *= x[i].pow(e[i]);
    acc += t;
  }
  return acc;
}

double Polynomial::eval(const VecD& x) const {
  if (int(x.size()) != nvars_) throw std::invalid_argument("polynomial: eval arity");
  double acc = 0;
  for (const auto& [e, c] : terms_) {
    double t = c.to_double();
    for (int i = 0; i < nvars_; ++i)
      if (e[i]) t *= std::pow(x[i], double(e[i]));
    acc += t;
  }
  return acc;
}

Polynomial Polynomial::derivative(int i) const {
  Polynomial p(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[i] == 0) continue;
    Exponents d = e;
    d[i] -= 1;
    p.add_term(d, c * Rational(std::int64_t(e[i])));
  }
  return p;
}

Polynomial Polynomial::compose(const std::vector<Polynomial>& subst) const {
  if (int(subst.size()) != nvars_) throw std::invalid_argument("polynomial: compose arity");
  int m = subst.empty() ? 0 : subst[0].nvars();
  for (const auto& s : subst)
    if (s.nvars() != m) throw std::invalid_argument("polynomial: compose arity");
  // Cache powers of each substituted component.
  std::vector<std::vector<Polynomial>> pw(nvars_);
  for (int i = 0; i < nvars_; ++i) pw[i].push_back(Polynomial::constant(m, Rational(1)));
  Polynomial out(m);
  for (const auto& [e, c] : terms_) {
    Polynomial t = Polynomial::constant(m, c);
    for (int i = 0; i < nvars_; ++i) {
      while (pw[i].size() <= e[i]) pw[i].push_back(pw[i].back() * subst[i]);
      if (e[i]) t = t * pw[i][e[i]];
    }
    out += t;
  }
  return out;
}

Polynomial Polynomial::restrict_var(int i, const Rational& value) const {
  Polynomial out(nvars_ - 1);
  for (const auto& [e, c] : terms_) {
    Exponents d;
    d.reserve(nvars_ - 1);
    for (int j = 0; j < nvars_; ++j)
      if (j != i) d.push_back(e[j]);
    out.add_term(d, c * value.pow(e[i]));
  }
  return out;
}

Rational Polynomial::integrate_box(const Box& box) const {
  if (int(box.size()) != nvars_) throw std::invalid_argument("polynomial: box arity");
  Rational acc(0);
  for (const auto& [e, c] : terms_) {
    Rational t = c;
    for (int i = 0; i < nvars_; ++i) {
      unsigned k = e[i] + 1;
      t *= (box[i].hi.pow(k) - box[i].lo.pow(k)) / Rational(std::int64_t(k));
    }
    acc += t;
  }
  return acc;
}

std::string Polynomial::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c.str();
    for (int i = 0; i < nvars_; ++i) {
      if (e[i] == 0) continue;
      os << "*x" << i;
      if (e[i] > 1) os << "^" << e[i];
    }
  }
  return os.str();
}

PolyMap identity_map(int n) {
  PolyMap f;
  for (int i = 0; i < n; ++i) f.push_back(Polynomial::variable(n, i));
  return f;
}

PolyMap compose(const PolyMap& outer, const PolyMap& inner) {
  PolyMap f;
  f.reserve(outer.size());
  for (const auto& c : outer) f.push_back(c.compose(inner));
  return f;
}

bool operator==(const PolyMap& a, const PolyMap& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!(a[i] == b[i])) return false;
  return true;
}

VecQ eval(const PolyMap& f, const VecQ& x) {
  VecQ y;
  y.reserve(f.size());
  for (const auto& c : f) y.push_back(c.eval(x));
  return y;
}

VecD eval(const PolyMap& f, const VecD& x) {
  VecD y;
  y.reserve(f.size());
  for (const auto& c : f) y.push_back(c.eval(x));
  return y;
}

MatQ jacobian(const PolyMap& f, const VecQ& x) {
  int m = int(f.size());
  int n = f.empty() ? 0 : f[0].nvars();
  MatQ j(m, n);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < n; ++c) j(r, c) = f[r].derivative(c).eval(x);
  return j;
}

MatD jacobian(const PolyMap& f, const VecD& x) {
  int m = int(f.size());
  int n = f.empty() ? 0 : f[0].nvars();
  MatD j(m, n);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < n; ++c) j(r, c) = f[r].derivative(c).eval(x);
  return j;
}

}  // namespace polyfold
