#include "polyfold/bundle.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace polyfold {

const MatQ& FiniteStrongBundle::mu_of(const MorId& m) const {
  auto it = mu.find(m);
  if (it == mu.end()) throw std::out_of_range("bundle: no transport for morphism " + m);
  return it->second;
}

ValidationReport FiniteStrongBundle::validate() const {
  ValidationReport rep;
  auto fail = [&](const std::string& what, const std::string& detail) {
    rep.ok = false;
    rep.failure = what;
    rep.detail = detail;
    return rep;
  };
  if (!base) return fail("shape", "no base groupoid");
  for (const auto& x : base->objects)
    if (!fiber_dim.count(x)) return fail("shape", "no fiber dimension at " + x);
  for (const auto& [id, m] : base->morphisms) {
    auto it = mu.find(id);
    if (it == mu.end()) return fail("shape", "no transport at " + id);
    if (it->second.rows != fiber_dim.at(m.tgt) || it->second.cols != fiber_dim.at(m.src))
      return fail("shape", "transport shape at " + id);
  }
  // Fiber dimension constant on orbits.
  for (const auto& [id, m] : base->morphisms)
    if (fiber_dim.at(m.src) != fiber_dim.at(m.tgt))
      return fail("fiber-dimension", "dimension jumps across " + id);
  // Identity axiom.
  for (const auto& x : base->objects)
    if (!(mu_of(base->identity.at(x)) == MatQ::identity(fiber_dim.at(x))))
      return fail("identity", "unit transport at " + x + " is not the identity");
  // Invertibility.
  for (const auto& [id, m] : base->morphisms)
    if (det(mu_of(id)).is_zero()) return fail("invertibility", "singular transport at " + id);
  // Cocycle over the composition table.
  for (const auto& [pair, res] : base->compose_table)
    if (!(mu_of(res) == mu_of(pair.first).mul(mu_of(pair.second))))
      return fail("cocycle",
                  "μ(" + pair.first + "∘" + pair.second + ") != μ(" + pair.first + ")μ(" +
                      pair.second + ")");
  return rep;
}

bool FiniteSection::is_functorial(std::string* why) const {
  for (const auto& [id, m] : bundle->base->morphisms) {
    VecQ lhs = bundle->mu_of(id).apply(value.at(m.src));
    if (lhs != value.at(m.tgt)) {
      if (why) *why = "functoriality fails at " + id;
      return false;
    }
  }
  return true;
}

bool FiniteBundleMap::validate(std::string* why) const {
  auto bad = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (!source || !target) return bad("bundle map: missing bundles");
  if (!base_map.is_valid(why)) return false;
  for (const auto& y : source->base->objects) {
    auto it = fiber_map.find(y);
    if (it == fiber_map.end()) return bad("bundle map: no fiber map at " + y);
    if (it->second.rows != target->fiber_dim.at(base_map.on_object(y)) ||
        it->second.cols != source->fiber_dim.at(y))
      return bad("bundle map: fiber map shape at " + y);
  }
  // μ-compatibility: μ_target(φ(g)) · Φ_{src g} == Φ_{tgt g} · μ_source(g).
  for (const auto& [id, m] : source->base->morphisms) {
    auto lhs = target->mu_of(base_map.on_morphism(id)).mul(fiber_map.at(m.src));
    auto rhs = fiber_map.at(m.tgt).mul(source->mu_of(id));
    if (!(lhs == rhs)) return bad("bundle map: transport compatibility fails at " + id);
  }
  return true;
}

bool FiniteBundleMap::is_equivalence() const {
  if (!polyfold::is_equivalence(base_map)) return false;
  for (const auto& [y, m] : fiber_map)
    if (m.rows != m.cols || det(m).is_zero()) return false;
  return true;
}

FiniteSection pullback_section(const FiniteBundleMap& phi, const FiniteSection& f) {
  FiniteSection out;
  out.bundle = phi.source;
  out.is_plus = f.is_plus;
  for (const auto& y : phi.source->base->objects) {
    const MatQ& m = phi.fiber_map.at(y);
    if (m.rows != m.cols) throw std::invalid_argument("pullback: fiber map not square");
    VecQ rhs = f.value.at(phi.base_map.on_object(y));
    VecQ x;
    if (!solve(m, rhs, x)) throw std::invalid_argument("pullback: fiber map not invertible");
    out.value[y] = x;
  }
  return out;
}

FiniteSection pushforward_section(const FiniteBundleMap& phi, const FiniteSection& f) {
  if (!phi.is_equivalence())
    throw std::invalid_argument("pushforward: bundle map is not an equivalence");
  FiniteSection out;
  out.bundle = phi.target;
  out.is_plus = f.is_plus;
  const auto& X = *phi.target->base;
  for (const auto& x : X.objects) {
    // Find y in the source base and a morphism g: φ(y) -> x, then transport.
    bool done = false;
    for (const auto& y : phi.source->base->objects) {
      if (done) break;
      auto arrows = X.hom(phi.base_map.on_object(y), x);
      if (!arrows.empty()) {
        out.value[x] =
            phi.target->mu_of(arrows.front()).apply(phi.fiber_map.at(y).apply(f.value.at(y)));
        done = true;
      }
    }
    if (!done) throw std::logic_error("pushforward: object not reachable: " + x);
  }
  return out;
}

bool bundle_maps_naturally_equivalent(const FiniteBundleMap& phi, const FiniteBundleMap& psi,
                                      const NaturalTransformation& tau, std::string* why) {
  if (phi.source != psi.source || phi.target != psi.target) {
    if (why) *why = "bundle maps are not parallel";
    return false;
  }
  if (!naturally_equivalent(phi.base_map, psi.base_map, tau, why)) return false;
  for (const auto& y : phi.source->base->objects) {
    auto lhs = phi.target->mu_of(tau.component.at(y)).mul(phi.fiber_map.at(y));
    if (!(lhs == psi.fiber_map.at(y))) {
      if (why) *why = "fiber compatibility fails at " + y;
      return false;
    }
  }
  return true;
}

const MatQ& ChartBundle::mu_of(const std::string& g) const {
  auto it = mu.find(g);
  if (it == mu.end()) throw std::out_of_range("chart bundle: no transport for " + g);
  return it->second;
}

ValidationReport ChartBundle::validate() const {
  ValidationReport rep;
  auto fail = [&](const std::string& what, const std::string& detail) {
    rep.ok = false;
    rep.failure = what;
    rep.detail = detail;
    return rep;
  };
  std::string why;
  if (!base.validate(&why)) return fail("base", why);
  if (fiber_dim <= 0) return fail("shape", "fiber dimension must be positive");
  for (const auto& g : base.group.elements) {
    auto it = mu.find(g);
    if (it == mu.end()) return fail("shape", "no transport for " + g);
    if (it->second.rows != fiber_dim || it->second.cols != fiber_dim)
      return fail("shape", "transport shape for " + g);
  }
  if (!(mu_of(base.group.unit()) == MatQ::identity(fiber_dim)))
    return fail("identity", "unit transport is not the identity");
  for (const auto& g : base.group.elements)
    if (det(mu_of(g)).is_zero()) return fail("invertibility", "singular transport for " + g);
  for (const auto& g : base.group.elements)
    for (const auto& h : base.group.elements)
      if (!(mu_of(base.group.mul(g, h)) == mu_of(g).mul(mu_of(h))))
        return fail("cocycle", "μ(" + g + h + ") != μ(" + g + ")μ(" + h + ")");
  return rep;
}

ChartBundle ChartBundle::trivial_line(const ChartGroupoid& cg) {
  ChartBundle b;
  b.base = cg;
  b.fiber_dim = 1;
  for (const auto& g : cg.group.elements) b.mu[g] = MatQ::identity(1);
  return b;
}

bool section_equivariant(const ChartBundle& b, const SectionExpr& s, std::string* why,
                         double tol) {
  if (s.fiber_dim() != b.fiber_dim) {
    if (why) *why = "section: fiber dimension mismatch";
    return false;
  }
  if (s.is_polynomial()) {
    PolyMap f;
    for (const auto& c : s.comps) f.push_back(c.as_polynomial());
    for (const auto& g : b.base.group.elements) {
      // μ(g)·F == F ∘ φ_g, symbolically.
      PolyMap lhs;
      const MatQ& m = b.mu_of(g);
      for (int r = 0; r < m.rows; ++r) {
        Polynomial acc(b.dim());
        for (int c = 0; c < m.cols; ++c) acc += f[c].scaled(m(r, c));
        lhs.push_back(acc);
      }
      PolyMap rhs = compose(f, b.base.act(g));
      if (!(lhs == rhs)) {
        if (why) *why = "equivariance fails symbolically at " + g;
        return false;
      }
    }
    return true;
  }
  // Sampled check for non-polynomial sections.
  for (const auto& xq : stratum_samples(b.base.domain)) {
    VecD x = to_double(xq);
    for (const auto& g : b.base.group.elements) {
      VecD lhs = to_double(b.mu_of(g)).apply(s.eval(x));
      VecD rhs = s.eval(b.base.apply(g, x));
      for (std::size_t i = 0; i < lhs.size(); ++i)
        if (std::abs(lhs[i] - rhs[i]) > tol) {
          if (why) *why = "equivariance fails at a sample for " + g;
          return false;
        }
    }
  }
  return true;
}

AuxiliaryNorm AuxiliaryNorm::euclidean() {
  AuxiliaryNorm n;
  n.desc = "euclidean";
  n.fn = [](const VecD&, const VecD& e) {
    double s = 0;
    for (double v : e) s += v * v;
    return std::sqrt(s);
  };
  return n;
}

AuxiliaryNorm AuxiliaryNorm::weighted_euclidean(const Polynomial& w) {
  AuxiliaryNorm n;
  n.desc = "weighted-euclidean";
  n.fn = [w](const VecD& x, const VecD& e) {
    double s = 0;
    for (double v : e) s += v * v;
    return std::sqrt(s) * w.eval(x);
  };
  return n;
}

namespace {

std::vector<VecD> sample_points(const ChartGroupoid& cg, std::mt19937_64& rng, int count) {
  std::vector<VecD> pts;
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int k = 0; k < count; ++k) {
    VecD x;
    for (const auto& c : cg.domain.coords) {
      double lo = c.lo.to_double(), hi = c.hi.to_double();
      x.push_back(lo + (hi - lo) * u(rng));
    }
    pts.push_back(x);
  }
  return pts;
}

}  // namespace

bool check_norm_axioms(const ChartBundle& b, const AuxiliaryNorm& n, unsigned seed,
                       std::string* why) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  auto pts = sample_points(b.base, rng, 8);
  for (const auto& x : pts) {
    VecD zero(b.fiber_dim, 0.0);
    if (std::abs(n(x, zero)) > 1e-12) {
      if (why) *why = "norm of the zero vector is nonzero";
      return false;
    }
    for (int k = 0; k < 8; ++k) {
      VecD e(b.fiber_dim), f(b.fiber_dim);
      for (auto& v : e) v = u(rng);
      for (auto& v : f) v = u(rng);
      double ne = n(x, e), nf = n(x, f);
      bool nonzero = false;
      for (double v : e) nonzero |= (v != 0.0);
      if (nonzero && ne <= 0) {
        if (why) *why = "norm not positive";
        return false;
      }
      double lam = u(rng);
      VecD le(e);
      for (auto& v : le) v *= lam;
      if (std::abs(n(x, le) - std::abs(lam) * ne) > 1e-8 * (1 + ne)) {
        if (why) *why = "norm not absolutely homogeneous";
        return false;
      }
      VecD ef(e);
      for (std::size_t i = 0; i < ef.size(); ++i) ef[i] += f[i];
      if (n(x, ef) > ne + nf + 1e-9) {
        if (why) *why = "triangle inequality fails";
        return false;
      }
    }
  }
  return true;
}

bool check_norm_invariance(const ChartBundle& b, const AuxiliaryNorm& n, unsigned seed,
                           double tol) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  auto pts = sample_points(b.base, rng, 8);
  for (const auto& x : pts)
    for (int k = 0; k < 8; ++k) {
      VecD e(b.fiber_dim);
      for (auto& v : e) v = u(rng);
      double base_val = n(x, e);
      for (const auto& g : b.base.group.elements) {
        VecD gx = b.base.apply(g, x);
        VecD ge = to_double(b.mu_of(g)).apply(e);
        if (std::abs(n(gx, ge) - base_val) > tol * (1 + std::abs(base_val))) return false;
      }
    }
  return true;
}

AuxiliaryNorm average_norm(const ChartBundle& b, const AuxiliaryNorm& raw, unsigned seed) {
  std::string why;
  if (!check_norm_axioms(b, raw, seed, &why))
    throw std::invalid_argument("average_norm: raw norm rejected: " + why);
  AuxiliaryNorm n;
  n.desc = "averaged(" + raw.desc + ")";
  // Capture the group data by value.
  std::vector<std::pair<PolyMap, MatD>> moves;
  for (const auto& g : b.base.group.elements)
    moves.emplace_back(b.base.act(g), to_double(b.mu_of(g)));
  auto raw_fn = raw.fn;
  n.fn = [moves, raw_fn](const VecD& x, const VecD& e) {
    double s = 0;
    for (const auto& [act, m] : moves) s += raw_fn(eval(act, x), m.apply(e));
    return s / double(moves.size());
  };
  return n;
}

}  // namespace polyfold
