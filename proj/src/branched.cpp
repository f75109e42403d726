#include "polyfold/branched.hpp"

#include "polyfold/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace polyfold {

namespace {

std::vector<VecQ> box_lattice(const Box& box) {
  std::vector<VecQ> pts{{}};
  for (const auto& iv : box) {
    std::vector<Rational> choices{iv.lo, (iv.lo + iv.hi) / Rational(2), iv.hi};
    std::vector<VecQ> next;
    for (const auto& p : pts)
      for (const auto& v : choices) {
        VecQ q = p;
        q.push_back(v);
        next.push_back(q);
      }
    pts = std::move(next);
  }
  return pts;
}

bool box_contains(const Box& box, const VecD& u, double tol) {
  for (std::size_t i = 0; i < box.size(); ++i)
    if (u[i] < box[i].lo.to_double() - tol || u[i] > box[i].hi.to_double() + tol) return false;
  return true;
}

}  // namespace

bool BranchedSubgroupoid::validate(std::string* why) const {
  auto bad = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (!chart) return bad("branched: no chart");
  if (branches.empty()) return bad("branched: no branches");
  if (weights.size() != branches.size()) return bad("branched: weight count mismatch");
  for (const auto& w : weights)
    if (!(w > Rational(0))) return bad("branched: weight not positive");
  int n = branch_dim();
  for (const auto& b : branches) {
    if (b.dim() != n) return bad("branched: branches of mixed dimension");
    if (b.orientation != 1 && b.orientation != -1) return bad("branched: orientation flag");
    if (int(b.param.size()) != chart->dim()) return bad("branched: parametrization arity");
    for (const auto& c : b.param)
      if (c.nvars() != n) return bad("branched: parametrization arity");
  }
  // Branch images inside the domain (lattice samples, exact arithmetic).
  for (const auto& b : branches)
    for (const auto& u : box_lattice(b.ref))
      if (!chart->domain.contains(eval(b.param, u)))
        return bad("branched: branch leaves the chart domain");
  // Good position: every reference face must land inside a declared face of
  // the chart, symbolically.
  auto chart_faces = faces(chart->domain);
  for (const auto& b : branches)
    for (int i = 0; i < n; ++i)
      for (int end = 0; end < 2; ++end) {
        Rational value = end ? b.ref[i].hi : b.ref[i].lo;
        bool in_face = false;
        for (const auto& f : chart_faces) {
          Polynomial restricted = b.param[f.coord].restrict_var(i, value);
          if (restricted == Polynomial::constant(std::max(n - 1, 0), f.value)) {
            in_face = true;
            break;
          }
        }
        if (!in_face)
          return bad("branched: branch boundary does not lie in a declared chart face");
      }
  // Invariance of the weight functor on sampled branch points.
  for (std::size_t i = 0; i < branches.size(); ++i)
    for (const auto& uq : box_lattice(branches[i].ref)) {
      VecD y = to_double(eval(branches[i].param, uq));
      Rational base = theta(y);
      for (const auto& g : chart->group.elements)
        if (theta(chart->apply(g, y)) != base)
          return bad("branched: weight functor is not invariant under " + g);
    }
  return true;
}

bool BranchedSubgroupoid::on_branch(int i, const VecD& y, double tol) const {
  const Branch& b = branches[i];
  int n = b.dim();
  int N = chart->dim();
  // Affine case: solve the linear system exactly in floats.
  bool affine = true;
  for (const auto& c : b.param) affine &= c.is_affine();
  auto residual_at = [&](const VecD& u) {
    VecD p = eval(b.param, u);
    double r = 0;
    for (int k = 0; k < N; ++k) r = std::max(r, std::abs(p[k] - y[k]));
    return r;
  };
  if (affine) {
    // Least squares via the normal equations of the (constant) Jacobian.
    MatD j = jacobian(b.param, VecD(n, 0.0));
    VecD rhs(N);
    VecD p0 = eval(b.param, VecD(n, 0.0));
    for (int k = 0; k < N; ++k) rhs[k] = y[k] - p0[k];
    MatD jtj(n, n);
    VecD jtr(n, 0.0);
    for (int a = 0; a < n; ++a) {
      for (int c = 0; c < n; ++c) {
        double s = 0;
        for (int k = 0; k < N; ++k) s += j(k, a) * j(k, c);
        jtj(a, c) = s;
      }
      for (int k = 0; k < N; ++k) jtr[a] += j(k, a) * rhs[k];
    }
    VecD u;
    if (!solve(jtj, jtr, u)) return false;
    return residual_at(u) <= tol && box_contains(b.ref, u, tol);
  }
  // Newton from a seed grid.
  const int seeds = 8;
  for (int s = 0; s < (n == 0 ? 1 : int(std::pow(seeds, n))); ++s) {
    VecD u(n);
    int rem = s;
    for (int d = 0; d < n; ++d) {
      double lo = b.ref[d].lo.to_double(), hi = b.ref[d].hi.to_double();
      u[d] = lo + (hi - lo) * ((rem % seeds) + 0.5) / seeds;
      rem /= seeds;
    }
    for (int it = 0; it < 40; ++it) {
      VecD p = eval(b.param, u);
      VecD r(N);
      for (int k = 0; k < N; ++k) r[k] = p[k] - y[k];
      MatD j = jacobian(b.param, u);
      MatD jtj(n, n);
      VecD jtr(n, 0.0);
      for (int a = 0; a < n; ++a) {
        for (int c = 0; c < n; ++c) {
          double acc = 0;
          for (int k = 0; k < N; ++k) acc += j(k, a) * j(k, c);
          jtj(a, c) = acc;
        }
        for (int k = 0; k < N; ++k) jtr[a] += j(k, a) * r[k];
      }
      VecD step;
      if (!solve(jtj, jtr, step)) break;
      for (int d = 0; d < n; ++d) u[d] -= step[d];
    }
    if (residual_at(u) <= tol && box_contains(b.ref, u, tol)) return true;
  }
  return false;
}

Rational BranchedSubgroupoid::theta(const VecD& y, double tol) const {
  Rational v(0);
  for (std::size_t i = 0; i < branches.size(); ++i)
    if (on_branch(int(i), y, tol)) v += weights[i];
  return v;
}

EffectiveGroup effective_group(const ChartGroupoid& cg) {
  EffectiveGroup e;
  e.kernel = cg.ineffective_kernel();
  e.order = int(cg.group.elements.size() / e.kernel.size());
  return e;
}

namespace {

std::vector<Box> region_boxes(const BranchedSubgroupoid& bs, const MeasurableRegion& region,
                              std::size_t branch) {
  if (!region.per_branch) return {bs.branches[branch].ref};
  if (region.per_branch->size() != bs.branches.size())
    throw std::invalid_argument("region: per-branch box count mismatch");
  return (*region.per_branch)[branch];
}

struct BoundaryPiece {
  PolyMap param;  // restricted parametrization on the face
  Box ref;        // face reference box
  int sign;       // induced orientation factor
};

// Outward-normal-first convention: face u_i = hi gets (-1)^i, the opposite
// end flips the sign.
std::vector<BoundaryPiece> boundary_pieces(const Branch& b) {
  std::vector<BoundaryPiece> out;
  int n = b.dim();
  for (int i = 0; i < n; ++i)
    for (int end = 0; end < 2; ++end) {
      BoundaryPiece p;
      Rational value = end ? b.ref[i].hi : b.ref[i].lo;
      for (const auto& c : b.param) p.param.push_back(c.restrict_var(i, value));
      for (int d = 0; d < n; ++d)
        if (d != i) p.ref.push_back(b.ref[d]);
      int outward = end ? 1 : -1;
      p.sign = b.orientation * outward * ((i % 2) ? -1 : 1);
      out.push_back(std::move(p));
    }
  return out;
}

void require_integrable(const BranchedSubgroupoid& bs, const DifferentialForm& omega,
                        int expected_degree) {
  if (!bs.chart) throw MathPreconditionError("integrate: no chart");
  if (omega.nvars() != bs.chart->dim())
    throw MathPreconditionError("integrate: form arity mismatch");
  if (omega.degree() != expected_degree)
    throw MathPreconditionError("integrate: form degree mismatch");
  // Accept forms invariant under every group element, either strictly or as
  // densities: orientation-reversing elements may send ω to -ω, since they
  // also reverse the branch orientations.
  const auto& cg = *bs.chart;
  VecQ center;
  for (const auto& c : cg.domain.coords) center.push_back((c.lo + c.hi) / Rational(2));
  for (const auto& g : cg.group.elements) {
    auto pulled = omega.pullback(cg.act(g));
    if (pulled == omega) continue;
    int orient = det(jacobian(cg.act(g), center)).sign();
    if (orient < 0 && pulled == omega.scaled(Rational(-1))) continue;
    throw MathPreconditionError("integrate: form is not invariant under " + g);
  }
}

}  // namespace

Rational integrate(const BranchedSubgroupoid& bs, const DifferentialForm& omega,
                   const MeasurableRegion& region) {
  require_integrable(bs, omega, bs.branch_dim());
  Rational acc(0);
  for (std::size_t i = 0; i < bs.branches.size(); ++i) {
    const Branch& b = bs.branches[i];
    Polynomial top = omega.pullback(b.param).top_coefficient();
    Rational part(0);
    for (const auto& box : region_boxes(bs, region, i)) part += top.integrate_box(box);
    acc += bs.weights[i] * part * Rational(b.orientation);
  }
  return acc / Rational(effective_group(*bs.chart).order);
}

double integrate_quadrature(const BranchedSubgroupoid& bs, const DifferentialForm& omega,
                            const MeasurableRegion& region, int cells_per_dim) {
  require_integrable(bs, omega, bs.branch_dim());
  double acc = 0;
  for (std::size_t i = 0; i < bs.branches.size(); ++i) {
    const Branch& b = bs.branches[i];
    Polynomial top = omega.pullback(b.param).top_coefficient();
    double part = 0;
    for (const auto& box : region_boxes(bs, region, i))
      part += quadrature_box(top, box, cells_per_dim);
    acc += bs.weights[i].to_double() * part * b.orientation;
  }
  return acc / effective_group(*bs.chart).order;
}

Rational boundary_integrate(const BranchedSubgroupoid& bs, const DifferentialForm& tau) {
  require_integrable(bs, tau, bs.branch_dim() - 1);
  Rational acc(0);
  for (std::size_t i = 0; i < bs.branches.size(); ++i) {
    for (const auto& piece : boundary_pieces(bs.branches[i])) {
      Polynomial top = tau.pullback(piece.param).top_coefficient();
      acc += bs.weights[i] * top.integrate_box(piece.ref) * Rational(piece.sign);
    }
  }
  return acc / Rational(effective_group(*bs.chart).order);
}

double boundary_integrate_quadrature(const BranchedSubgroupoid& bs, const DifferentialForm& tau,
                                     int cells_per_dim) {
  require_integrable(bs, tau, bs.branch_dim() - 1);
  double acc = 0;
  for (std::size_t i = 0; i < bs.branches.size(); ++i)
    for (const auto& piece : boundary_pieces(bs.branches[i])) {
      Polynomial top = tau.pullback(piece.param).top_coefficient();
      acc += bs.weights[i].to_double() * quadrature_box(top, piece.ref, cells_per_dim) *
             piece.sign;
    }
  return acc / effective_group(*bs.chart).order;
}

Rational stokes_residual(const BranchedSubgroupoid& bs, const DifferentialForm& omega) {
  Rational lhs = integrate(bs, omega.exterior_derivative());
  Rational rhs = boundary_integrate(bs, omega);
  return (lhs - rhs).abs();
}

double stokes_residual_quadrature(const BranchedSubgroupoid& bs, const DifferentialForm& omega,
                                  int cells_per_dim) {
  double lhs = integrate_quadrature(bs, omega.exterior_derivative(), {}, cells_per_dim);
  double rhs = boundary_integrate_quadrature(bs, omega, cells_per_dim);
  return std::abs(lhs - rhs);
}

Rational pullback_invariance_residual(const ChartEquivalence& eq,
                                      const BranchedSubgroupoid& on_source,
                                      const DifferentialForm& omega_on_target,
                                      const std::vector<MeasurableRegion>& regions) {
  std::string why;
  if (!eq.validate(&why))
    throw std::invalid_argument("pullback invariance: bad equivalence: " + why);
  // Push the branches forward through the equivalence.
  BranchedSubgroupoid on_target;
  on_target.chart = eq.target;
  on_target.weights = on_source.weights;
  for (const auto& b : on_source.branches)
    on_target.branches.push_back({b.ref, compose(eq.map, b.param), b.orientation});

  DifferentialForm omega_on_source = omega_on_target.pullback(eq.map);

  Rational worst(0);
  for (const auto& region : regions) {
    Rational lhs = integrate(on_target, omega_on_target, region);
    Rational rhs = integrate(on_source, omega_on_source, region);
    Rational diff = (lhs - rhs).abs();
    if (worst < diff) worst = diff;
  }
  return worst;
}

}  // namespace polyfold
