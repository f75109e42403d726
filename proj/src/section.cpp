#include "polyfold/section.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace polyfold {

namespace {

double cutoff(double t) {
  if (std::abs(t) >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

double cutoff_deriv(double t) {
  if (std::abs(t) >= 1.0) return 0.0;
  double u = 1.0 - t * t;
  return cutoff(t) * (-2.0 * t / (u * u));
}

}  // namespace

double BumpBox::eval(const VecD& x) const {
  double v = 1.0;
  for (std::size_t i = 0; i < center.size(); ++i)
    v *= cutoff((x[i] - center[i].to_double()) / radius[i].to_double());
  return v;
}

double BumpBox::partial(int i, const VecD& x) const {
  double v = 1.0;
  for (std::size_t j = 0; j < center.size(); ++j) {
    double t = (x[j] - center[j].to_double()) / radius[j].to_double();
    if (int(j) == i)
      v *= cutoff_deriv(t) / radius[j].to_double();
    else
      v *= cutoff(t);
  }
  return v;
}

bool BumpBox::inside_support(const VecD& x) const {
  for (std::size_t i = 0; i < center.size(); ++i)
    if (std::abs(x[i] - center[i].to_double()) >= radius[i].to_double()) return false;
  return true;
}

bool operator<(const BumpBox& a, const BumpBox& b) {
  if (a.center != b.center) return a.center < b.center;
  return a.radius < b.radius;
}

SmoothScalar::SmoothScalar(Polynomial p) : nvars_(p.nvars()) {
  terms_.push_back({std::move(p), std::nullopt});
  normalize();
}

SmoothScalar::SmoothScalar(Polynomial p, BumpBox b) : nvars_(p.nvars()) {
  terms_.push_back({std::move(p), std::move(b)});
  normalize();
}

bool SmoothScalar::is_polynomial() const {
  for (const auto& t : terms_)
    if (t.bump) return false;
  return true;
}

Polynomial SmoothScalar::as_polynomial() const {
  if (terms_.empty()) return Polynomial(nvars_);
  if (terms_.size() != 1 || terms_[0].bump)
    throw std::logic_error("smooth scalar: not a plain polynomial");
  return terms_[0].poly;
}

double SmoothScalar::eval(const VecD& x) const {
  double v = 0;
  for (const auto& t : terms_) {
    double p = t.poly.eval(x);
    if (t.bump) p *= t.bump->eval(x);
    v += p;
  }
  return v;
}

Rational SmoothScalar::eval_exact(const VecQ& x) const {
  Rational v(0);
  for (const auto& t : terms_) {
    if (t.bump) throw std::logic_error("smooth scalar: exact evaluation with bump term");
    v += t.poly.eval(x);
  }
  return v;
}

double SmoothScalar::partial(int i, const VecD& x) const {
  double v = 0;
  for (const auto& t : terms_) {
    double dp = t.poly.derivative(i).eval(x);
    if (t.bump)
      v += dp * t.bump->eval(x) + t.poly.eval(x) * t.bump->partial(i, x);
    else
      v += dp;
  }
  return v;
}

void SmoothScalar::normalize() {
  std::stable_sort(terms_.begin(), terms_.end(), [](const Term& a, const Term& b) {
    if (a.bump.has_value() != b.bump.has_value()) return !a.bump.has_value();
    if (!a.bump) return false;
    return *a.bump < *b.bump;
  });
  std::vector<Term> merged;
  for (auto& t : terms_) {
    if (!merged.empty() && merged.back().bump == t.bump)
      merged.back().poly += t.poly;
    else
      merged.push_back(std::move(t));
  }
  terms_.clear();
  for (auto& t : merged)
    if (!t.poly.is_zero()) terms_.push_back(std::move(t));
}

SmoothScalar& SmoothScalar::operator+=(const SmoothScalar& o) {
  if (nvars_ == 0) nvars_ = o.nvars_;
  for (const auto& t : o.terms_) terms_.push_back(t);
  normalize();
  return *this;
}

SmoothScalar SmoothScalar::scaled(const Rational& c) const {
  SmoothScalar s;
  s.nvars_ = nvars_;
  for (const auto& t : terms_) s.terms_.push_back({t.poly.scaled(c), t.bump});
  s.normalize();
  return s;
}

SmoothScalar SmoothScalar::precompose(const PolyMap& m) const {
  SmoothScalar s;
  s.nvars_ = m.empty() ? 0 : m[0].nvars();
  for (const auto& t : terms_) {
    Term nt;
    nt.poly = t.poly.compose(m);
    if (t.bump) {
      // Only signed-permutation-plus-shift maps keep a bump box a bump box.
      int n = int(m.size());
      BumpBox nb;
      nb.center.assign(n, Rational(0));
      nb.radius.assign(n, Rational(1));
      std::vector<bool> fixed(n, false);
      for (int i = 0; i < n; ++i) {
        const auto& comp = m[i];
        if (!comp.is_affine())
          throw std::invalid_argument("bump precompose: map is not affine");
        int var = -1;
        Rational a(0), b(0);
        for (const auto& [e, c] : comp.terms()) {
          int deg = 0, which = -1;
          for (int j = 0; j < comp.nvars(); ++j)
            if (e[j]) {
              deg += int(e[j]);
              which = j;
            }
          if (deg == 0)
            b = c;
          else if (deg == 1 && (var == -1 || var == which)) {
            var = which;
            a = c;
          } else {
            throw std::invalid_argument("bump precompose: map mixes coordinates");
          }
        }
        if (var < 0 || a.is_zero())
          throw std::invalid_argument("bump precompose: degenerate coordinate map");
        // The i-th factor b((y_i - c_i)/r_i) with y_i = a x_var + b becomes
        // b((x_var - (c_i - b)/a) / (r_i/|a|)).
        nb.center[var] = (t.bump->center[i] - b) / a;
        nb.radius[var] = (t.bump->radius[i] / a).abs();
        if (fixed[var]) throw std::invalid_argument("bump precompose: map is not injective");
        fixed[var] = true;
      }
      nt.bump = nb;
    }
    s.terms_.push_back(std::move(nt));
  }
  s.normalize();
  return s;
}

bool operator==(const SmoothScalar& a, const SmoothScalar& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (!(a.terms_[i].poly == b.terms_[i].poly)) return false;
    if (a.terms_[i].bump != b.terms_[i].bump) return false;
  }
  return true;
}

bool SectionExpr::is_polynomial() const {
  for (const auto& c : comps)
    if (!c.is_polynomial()) return false;
  return true;
}

VecD SectionExpr::eval(const VecD& x) const {
  VecD v;
  v.reserve(comps.size());
  for (const auto& c : comps) v.push_back(c.eval(x));
  return v;
}

VecQ SectionExpr::eval_exact(const VecQ& x) const {
  VecQ v;
  v.reserve(comps.size());
  for (const auto& c : comps) v.push_back(c.eval_exact(x));
  return v;
}

MatD SectionExpr::jacobian(const VecD& x) const {
  MatD j(fiber_dim(), int(x.size()));
  for (int r = 0; r < fiber_dim(); ++r)
    for (int c = 0; c < int(x.size()); ++c) j(r, c) = comps[r].partial(c, x);
  return j;
}

SectionExpr SectionExpr::operator+(const SectionExpr& o) const {
  if (comps.size() != o.comps.size())
    throw std::invalid_argument("section: fiber dimension mismatch");
  SectionExpr s;
  for (std::size_t i = 0; i < comps.size(); ++i) s.comps.push_back(comps[i] + o.comps[i]);
  return s;
}

SectionExpr SectionExpr::scaled(const Rational& c) const {
  SectionExpr s;
  for (const auto& comp : comps) s.comps.push_back(comp.scaled(c));
  return s;
}

SectionExpr SectionExpr::precompose(const PolyMap& m) const {
  SectionExpr s;
  for (const auto& comp : comps) s.comps.push_back(comp.precompose(m));
  return s;
}

SectionExpr SectionExpr::transformed(const MatQ& m) const {
  if (m.cols != fiber_dim())
    throw std::invalid_argument("section: matrix shape mismatch");
  SectionExpr s;
  for (int r = 0; r < m.rows; ++r) {
    SmoothScalar acc;
    for (int c = 0; c < m.cols; ++c) acc += comps[c].scaled(m(r, c));
    if (acc.terms().empty() && nvars() > 0) acc = SmoothScalar::zero(nvars());
    s.comps.push_back(acc);
  }
  return s;
}

SectionExpr SectionExpr::zero(int nvars, int fiber_dim) {
  SectionExpr s;
  for (int i = 0; i < fiber_dim; ++i) s.comps.push_back(SmoothScalar::zero(nvars));
  return s;
}

SectionExpr SectionExpr::from_polys(const PolyMap& polys) {
  SectionExpr s;
  for (const auto& p : polys) s.comps.push_back(SmoothScalar(p));
  return s;
}

SectionExpr SectionExpr::bump_vector(const BumpBox& b, const VecQ& e) {
  SectionExpr s;
  int n = int(b.center.size());
  for (const auto& c : e)
    s.comps.push_back(SmoothScalar(Polynomial::constant(n, c), b));
  return s;
}

}  // namespace polyfold
