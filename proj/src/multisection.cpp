#include "polyfold/multisection.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace polyfold {

namespace {

std::vector<VecD> grid_points(const CornerDomain& d, int per_dim) {
  std::vector<VecD> pts{{}};
  for (int i = 0; i < d.dim(); ++i) {
    double lo = d.coords[i].lo.to_double(), hi = d.coords[i].hi.to_double();
    std::vector<VecD> next;
    for (const auto& p : pts)
      for (int k = 0; k < per_dim; ++k) {
        VecD q = p;
        q.push_back(lo + (hi - lo) * (k + 0.5) / per_dim);
        next.push_back(q);
      }
    pts = std::move(next);
  }
  return pts;
}

bool close(const VecD& a, const VecD& b, double tol) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > tol) return false;
  return true;
}

}  // namespace

Multisection::Multisection(const ChartBundle* bundle, std::vector<WeightedSection> sections)
    : bundle_(bundle), sections_(std::move(sections)) {
  dedup();
}

Multisection Multisection::trivial(const ChartBundle& b) {
  std::vector<WeightedSection> s;
  s.push_back({SectionExpr::zero(b.dim(), b.fiber_dim), Rational(1), true});
  return Multisection(&b, std::move(s));
}

Rational Multisection::total_weight() const {
  Rational t(0);
  for (const auto& ws : sections_) t += ws.weight;
  return t;
}

bool Multisection::is_trivial() const {
  for (const auto& ws : sections_)
    for (const auto& c : ws.section.comps)
      if (!c.is_zero()) return false;
  return true;
}

void Multisection::dedup() {
  std::vector<WeightedSection> merged;
  for (auto& ws : sections_) {
    bool found = false;
    for (auto& m : merged)
      if (m.section == ws.section) {
        m.weight += ws.weight;
        m.is_plus = m.is_plus && ws.is_plus;
        found = true;
        break;
      }
    if (!found) merged.push_back(std::move(ws));
  }
  sections_ = std::move(merged);
}

bool Multisection::validate(std::string* why) const {
  auto bad = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (!bundle_) return bad("multisection: no bundle");
  if (sections_.empty()) return bad("multisection: empty section list");
  for (const auto& ws : sections_) {
    if (!(ws.weight > Rational(0))) return bad("multisection: weight not positive");
    if (ws.section.fiber_dim() != bundle_->fiber_dim)
      return bad("multisection: fiber dimension mismatch");
  }
  if (total_weight() != Rational(1)) return bad("multisection: weights do not sum to 1");

  // Morphism invariance: for every g the transported weighted family must
  // coincide with the original one.
  const auto& cg = bundle_->base;
  for (const auto& g : cg.group.elements) {
    bool symbolic_ok = true;
    try {
      std::vector<bool> used(sections_.size(), false);
      for (const auto& ws : sections_) {
        SectionExpr moved =
            ws.section.precompose(cg.act(cg.group.inv(g))).transformed(bundle_->mu_of(g));
        bool matched = false;
        for (std::size_t j = 0; j < sections_.size(); ++j) {
          if (used[j] || sections_[j].weight != ws.weight) continue;
          if (sections_[j].section == moved) {
            used[j] = true;
            matched = true;
            break;
          }
        }
        if (!matched) {
          symbolic_ok = false;
          break;
        }
      }
    } catch (const std::invalid_argument&) {
      symbolic_ok = false;
    }
    if (symbolic_ok) continue;
    // Sampled fallback: the induced functor agrees on transported vectors.
    for (const auto& xq : stratum_samples(cg.domain)) {
      VecD x = to_double(xq);
      VecD gx = cg.apply(g, x);
      MatD mu = to_double(bundle_->mu_of(g));
      for (const auto& ws : sections_) {
        VecD e = ws.section.eval(x);
        Rational lhs = evaluate(x, e);
        Rational rhs = evaluate(gx, mu.apply(e));
        if (lhs != rhs) return bad("multisection: functor not morphism-invariant at " + g);
      }
    }
  }
  return true;
}

Rational Multisection::evaluate(const VecQ& x, const VecQ& e) const {
  Rational v(0);
  for (const auto& ws : sections_)
    if (ws.section.eval_exact(x) == e) v += ws.weight;
  return v;
}

Rational Multisection::evaluate(const VecD& x, const VecD& e, double tol) const {
  Rational v(0);
  for (const auto& ws : sections_)
    if (close(ws.section.eval(x), e, tol)) v += ws.weight;
  return v;
}

std::vector<std::pair<VecQ, Rational>> Multisection::support_at(const VecQ& x) const {
  std::vector<std::pair<VecQ, Rational>> out;
  for (const auto& ws : sections_) {
    VecQ e = ws.section.eval_exact(x);
    bool found = false;
    for (auto& [v, w] : out)
      if (v == e) {
        w += ws.weight;
        found = true;
      }
    if (!found) out.emplace_back(e, ws.weight);
  }
  return out;
}

std::vector<std::pair<VecD, Rational>> Multisection::support_at(const VecD& x, double tol) const {
  std::vector<std::pair<VecD, Rational>> out;
  for (const auto& ws : sections_) {
    VecD e = ws.section.eval(x);
    bool found = false;
    for (auto& [v, w] : out)
      if (close(v, e, tol)) {
        w += ws.weight;
        found = true;
      }
    if (!found) out.emplace_back(e, ws.weight);
  }
  return out;
}

double Multisection::norm_sup(const AuxiliaryNorm& n, int grid_per_dim) const {
  double best = 0;
  for (const auto& x : grid_points(bundle_->base.domain, grid_per_dim))
    for (const auto& ws : sections_) best = std::max(best, n(x, ws.section.eval(x)));
  return best;
}

Multisection sum(const Multisection& a, const Multisection& b) {
  if (a.bundle() != b.bundle())
    throw std::invalid_argument("multisection sum: bundle mismatch");
  std::vector<WeightedSection> out;
  for (const auto& sa : a.sections())
    for (const auto& sb : b.sections())
      out.push_back({sa.section + sb.section, sa.weight * sb.weight,
                     sa.is_plus && sb.is_plus});
  return Multisection(a.bundle(), std::move(out));
}

Multisection convex_combination(const Rational& alpha, const Multisection& one,
                                const Multisection& zero) {
  if (one.bundle() != zero.bundle())
    throw std::invalid_argument("multisection convex combination: bundle mismatch");
  if (!(Rational(0) < alpha) || !(alpha < Rational(1)))
    throw std::invalid_argument("multisection convex combination: alpha outside (0,1)");
  std::vector<WeightedSection> out;
  for (const auto& ws : one.sections())
    out.push_back({ws.section, ws.weight * alpha, ws.is_plus});
  for (const auto& ws : zero.sections())
    out.push_back({ws.section, ws.weight * (Rational(1) - alpha), ws.is_plus});
  return Multisection(one.bundle(), std::move(out));
}

namespace {

// Supports of bump terms must sit inside `region`, and the transported
// supports must as well (the region stands in for the invariant set V).
void check_support(const ChartBundle& b, const SectionExpr& s, const Box& region) {
  if (int(region.size()) != b.dim())
    throw std::invalid_argument("symmetrize: support region arity");
  for (const auto& comp : s.comps)
    for (const auto& t : comp.terms()) {
      if (!t.bump) continue;  // polynomial terms are globally supported; allowed
      for (const auto& g : b.base.group.elements) {
        // Transported support box of h_g.
        SectionExpr moved = s.precompose(b.base.act(b.base.group.inv(g)));
        for (const auto& mc : moved.comps)
          for (const auto& mt : mc.terms()) {
            if (!mt.bump) continue;
            for (int i = 0; i < b.dim(); ++i) {
              Rational lo = mt.bump->center[i] - mt.bump->radius[i];
              Rational hi = mt.bump->center[i] + mt.bump->radius[i];
              if (lo < region[i].lo || hi > region[i].hi)
                throw std::invalid_argument("symmetrize: support leaks out of the region");
            }
          }
      }
    }
}

}  // namespace

Multisection symmetrize(const ChartBundle& b, const SectionExpr& h, const Box& support) {
  check_support(b, h, support);
  const auto& grp = b.base.group;
  Rational w(1, std::int64_t(grp.elements.size()));
  std::vector<WeightedSection> out;
  for (const auto& g : grp.elements) {
    // h_g(z) = μ(g)·h(φ_{g^{-1}}(z))
    SectionExpr hg = h.precompose(b.base.act(grp.inv(g))).transformed(b.mu_of(g));
    out.push_back({std::move(hg), w, true});
  }
  return Multisection(&b, std::move(out));
}

Multisection ParamMultisection::freeze(const VecQ& t) const {
  if (int(t.size()) != param_dim())
    throw std::invalid_argument("freeze: parameter arity mismatch");
  for (const auto& c : t)
    if (!(c.abs() < Rational(1)))
      throw std::invalid_argument("freeze: parameter outside the open unit box");
  SectionExpr ht = SectionExpr::zero(bundle->dim(), bundle->fiber_dim);
  for (int j = 0; j < param_dim(); ++j) ht = ht + basis[j].scaled(t[j]);
  return symmetrize(*bundle, ht, support);
}

double section_norm_sup(const ChartBundle& b, const SectionExpr& s, const AuxiliaryNorm& n,
                        int grid_per_dim) {
  double best = 0;
  for (const auto& x : grid_points(b.base.domain, grid_per_dim))
    best = std::max(best, n(x, s.eval(x)));
  return best;
}

}  // namespace polyfold
