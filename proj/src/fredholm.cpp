#include "polyfold/fredholm.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace polyfold {

namespace {

// Zeros are located only up to sqrt(residual tolerance); derivatives below
// that resolution are indistinguishable from zero.
constexpr double kResolutionFloor = 4e-6;

double inf_dist(const VecD& a, const VecD& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

double inf_norm(const VecD& a) {
  double d = 0;
  for (double v : a) d = std::max(d, std::abs(v));
  return d;
}

// F - a, evaluated and linearized through the section expressions.
struct Residual {
  const SectionExpr* f;
  const SectionExpr* a;
  VecD value(const VecD& x) const {
    VecD v = f->eval(x), w = a->eval(x);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= w[i];
    return v;
  }
  MatD jac(const VecD& x) const {
    MatD j = f->jacobian(x), k = a->jacobian(x);
    for (std::size_t i = 0; i < j.a.size(); ++i) j.a[i] -= k.a[i];
    return j;
  }
};

std::vector<VecD> newton_zeros(const Residual& r, const CornerDomain& domain,
                               const SolverOptions& opts) {
  int n = domain.dim();
  std::vector<VecD> found;
  long total_seeds = 1;
  for (int i = 0; i < n; ++i) total_seeds *= opts.seeds_per_dim;
  for (long s = 0; s < total_seeds; ++s) {
    VecD x(n);
    long rem = s;
    for (int d = 0; d < n; ++d) {
      double lo = domain.coords[d].lo.to_double(), hi = domain.coords[d].hi.to_double();
      x[d] = lo + (hi - lo) * ((rem % opts.seeds_per_dim) + 0.5) / opts.seeds_per_dim;
      rem /= opts.seeds_per_dim;
    }
    double res = inf_norm(r.value(x));
    bool ok = false;
    for (int it = 0; it < opts.max_newton_iters; ++it) {
      if (res < opts.residual_tol) {
        ok = true;
        break;
      }
      VecD step;
      if (!solve(r.jac(x), r.value(x), step, 1e-13)) break;  // singular: drop seed
      double lam = 1.0;
      bool moved = false;
      for (int h = 0; h < 30; ++h) {
        VecD y(n);
        for (int d = 0; d < n; ++d) y[d] = x[d] - lam * step[d];
        double ry = inf_norm(r.value(y));
        if (ry < res) {
          x = y;
          res = ry;
          moved = true;
          break;
        }
        lam *= 0.5;
      }
      if (!moved) break;
    }
    if (!ok) continue;
    // Polish with a few undamped steps to stabilize deduplication.
    for (int it = 0; it < 5; ++it) {
      VecD step;
      if (!solve(r.jac(x), r.value(x), step, 1e-13)) break;
      for (int d = 0; d < n; ++d) x[d] -= step[d];
    }
    if (inf_norm(r.value(x)) >= opts.residual_tol) continue;
    if (!domain.contains(x, 1e-9)) continue;
    bool dup = false;
    for (const auto& z : found)
      if (inf_dist(x, z) <= opts.dedup_radius) dup = true;
    if (!dup) found.push_back(x);
  }
  return found;
}

// Exact affine slice {x : A x = b} ∩ domain as a branch, for kernel
// dimension one or an axis-aligned kernel.
std::optional<Branch> affine_slice_branch(const MatQ& a, const VecQ& b,
                                          const CornerDomain& domain) {
  MatQ k = kernel_basis(a);
  int n = domain.dim();
  // Particular solution via least squares on the augmented system.
  MatQ aug(a.rows + k.cols, n);
  VecQ rhs(a.rows + k.cols, Rational(0));
  for (int r = 0; r < a.rows; ++r) {
    for (int c = 0; c < n; ++c) aug(r, c) = a(r, c);
    rhs[r] = b[r];
  }
  // Pin the kernel directions to the domain center to pick one solution.
  for (int kc = 0; kc < k.cols; ++kc) {
    for (int c = 0; c < n; ++c) aug(a.rows + kc, c) = k(c, kc);
    Rational dot(0);
    for (int c = 0; c < n; ++c)
      dot += k(c, kc) * (domain.coords[c].lo + domain.coords[c].hi) / Rational(2);
    rhs[a.rows + kc] = dot;
  }
  // Solve the (square after pinning) system by RREF on [aug | rhs].
  MatQ sys(aug.rows, n + 1);
  for (int r = 0; r < aug.rows; ++r) {
    for (int c = 0; c < n; ++c) sys(r, c) = aug(r, c);
    sys(r, n) = rhs[r];
  }
  // Consistency: rank[A|b] must equal rank A.
  {
    MatQ ab(a.rows, n + 1);
    for (int r = 0; r < a.rows; ++r) {
      for (int c = 0; c < n; ++c) ab(r, c) = a(r, c);
      ab(r, n) = b[r];
    }
    MatQ aa = a;
    if (rank(ab) != rank(aa)) return std::nullopt;  // empty slice
  }
  VecQ x0(n, Rational(0));
  {
    // Gaussian elimination on the stacked system.
    MatQ m = sys;
    std::vector<int> pivots;
    int rr = 0;
    for (int c = 0; c < n && rr < m.rows; ++c) {
      int p = -1;
      for (int i = rr; i < m.rows; ++i)
        if (!m(i, c).is_zero()) {
          p = i;
          break;
        }
      if (p < 0) continue;
      for (int j = 0; j <= n; ++j) std::swap(m(p, j), m(rr, j));
      Rational inv = Rational(1) / m(rr, c);
      for (int j = 0; j <= n; ++j) m(rr, j) *= inv;
      for (int i = 0; i < m.rows; ++i) {
        if (i == rr || m(i, c).is_zero()) continue;
        Rational f = m(i, c);
        for (int j = 0; j <= n; ++j) m(i, j) -= f * m(rr, j);
      }
      pivots.push_back(c);
      ++rr;
    }
    if (int(pivots.size()) != n) return std::nullopt;
    for (int r = 0; r < n; ++r) x0[pivots[r]] = m(r, n);
  }

  if (k.cols == 1) {
    // Line x0 + t v clipped against the domain box.
    VecQ v(n);
    for (int c = 0; c < n; ++c) v[c] = k(c, 0);
    Rational tlo, thi;
    bool first = true;
    for (int c = 0; c < n; ++c) {
      if (v[c].is_zero()) {
        if (x0[c] < domain.coords[c].lo || x0[c] > domain.coords[c].hi) return std::nullopt;
        continue;
      }
      Rational t1 = (domain.coords[c].lo - x0[c]) / v[c];
      Rational t2 = (domain.coords[c].hi - x0[c]) / v[c];
      if (t2 < t1) std::swap(t1, t2);
      if (first) {
        tlo = t1;
        thi = t2;
        first = false;
      } else {
        tlo = std::max(tlo, t1);
        thi = std::min(thi, t2);
      }
    }
    if (first || !(tlo < thi)) return std::nullopt;
    PolyMap param;
    for (int c = 0; c < n; ++c)
      param.push_back(Polynomial::affine({v[c]}, x0[c]));
    return Branch{Box{{tlo, thi}}, param, 1};
  }

  // Axis-aligned kernel of higher dimension: every kernel basis vector a
  // coordinate axis.
  std::vector<int> axes;
  for (int kc = 0; kc < k.cols; ++kc) {
    int axis = -1;
    for (int c = 0; c < n; ++c) {
      if (k(c, kc).is_zero()) continue;
      if (axis != -1) return std::nullopt;  // not axis aligned
      axis = c;
    }
    axes.push_back(axis);
  }
  Box ref;
  for (int axis : axes) ref.push_back({domain.coords[axis].lo, domain.coords[axis].hi});
  PolyMap param;
  int m = int(axes.size());
  for (int c = 0; c < n; ++c) {
    auto it = std::find(axes.begin(), axes.end(), c);
    if (it == axes.end())
      param.push_back(Polynomial::constant(m, x0[c]));
    else
      param.push_back(Polynomial::variable(m, int(it - axes.begin())));
  }
  return Branch{ref, param, 1};
}

int effective_stabilizer_order(const ChartGroupoid& cg, const VecD& x) {
  int stab = int(cg.point_stabilizer(x).size());
  int kernel = int(cg.ineffective_kernel().size());
  return stab / kernel;
}

}  // namespace

bool ToyFredholmProblem::validate(std::string* why) const {
  auto rep = bundle.validate();
  if (!rep.ok) {
    if (why) *why = "problem: " + rep.failure + ": " + rep.detail;
    return false;
  }
  if (section.fiber_dim() != bundle.fiber_dim) {
    if (why) *why = "problem: section fiber dimension mismatch";
    return false;
  }
  if (!section_equivariant(bundle, section, why)) return false;
  return true;
}

WeightedSolutionSet solution_set(const ToyFredholmProblem& p, const Multisection& lambda,
                                 const SolverOptions& opts) {
  WeightedSolutionSet out;
  const auto& cg = p.bundle.base;
  int n = p.bundle.dim();
  int m = p.bundle.fiber_dim;

  if (m < n) {
    // Positive index: exact affine slices only.
    BranchedSubgroupoid bs;
    bs.chart = &p.bundle.base;
    for (const auto& ws : lambda.sections()) {
      SectionExpr diff_expr = p.section + ws.section.scaled(Rational(-1));
      if (!diff_expr.is_polynomial())
        throw MathPreconditionError(
            "solution set: positive-index problems require polynomial data");
      MatQ a(m, n);
      VecQ b(m, Rational(0));
      for (int r = 0; r < m; ++r) {
        Polynomial poly = diff_expr.comps[r].as_polynomial();
        if (!poly.is_affine())
          throw MathPreconditionError(
              "solution set: positive-dimensional solutions need affine sections");
        for (int c = 0; c < n; ++c) {
          Polynomial::Exponents e(n, 0);
          e[c] = 1;
          auto it = poly.terms().find(e);
          a(r, c) = it == poly.terms().end() ? Rational(0) : it->second;
        }
        auto it0 = poly.terms().find(Polynomial::Exponents(n, 0));
        b[r] = it0 == poly.terms().end() ? Rational(0) : -it0->second;
      }
      auto branch = affine_slice_branch(a, b, cg.domain);
      if (branch) {
        bs.branches.push_back(*branch);
        bs.weights.push_back(ws.weight);
      }
    }
    if (!bs.branches.empty()) out.branches = std::move(bs);
    return out;
  }
  if (m > n)
    throw MathPreconditionError("solution set: negative-index problems are out of scope");

  // Index zero: Newton from a seed grid, one pass per local section.
  std::vector<VecD> points;
  for (const auto& ws : lambda.sections()) {
    Residual r{&p.section, &ws.section};
    for (const auto& z : newton_zeros(r, cg.domain, opts)) {
      bool dup = false;
      for (const auto& q : points)
        if (inf_dist(q, z) <= opts.dedup_radius) dup = true;
      if (!dup) points.push_back(z);
    }
  }
  // Group into orbits.
  std::vector<bool> used(points.size(), false);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (used[i]) continue;
    SolutionOrbit orbit;
    for (const auto& g : cg.group.elements) {
      VecD y = cg.apply(g, points[i]);
      for (std::size_t j = 0; j < points.size(); ++j)
        if (!used[j] && inf_dist(points[j], y) <= 10 * opts.dedup_radius) {
          used[j] = true;
          orbit.points.push_back(points[j]);
        }
    }
    std::sort(orbit.points.begin(), orbit.points.end());
    orbit.representative = orbit.points.front();
    orbit.weight = lambda.evaluate(orbit.representative, p.section.eval(orbit.representative));
    orbit.effective_stabilizer = effective_stabilizer_order(cg, orbit.representative);
    out.orbits.push_back(std::move(orbit));
  }
  std::sort(out.orbits.begin(), out.orbits.end(),
            [](const SolutionOrbit& a, const SolutionOrbit& b) {
              return a.representative < b.representative;
            });
  return out;
}

LinearizationClasses linearization_classes(const ToyFredholmProblem& p,
                                           const Multisection& lambda, const VecD& x,
                                           double tol) {
  VecD fx = p.section.eval(x);
  LinearizationClasses out;
  out.base_point = x;
  bool any = false;
  for (std::size_t i = 0; i < lambda.sections().size(); ++i) {
    const auto& ws = lambda.sections()[i];
    if (inf_dist(ws.section.eval(x), fx) > tol) continue;
    any = true;
    Residual r{&p.section, &ws.section};
    MatD jac = r.jac(x);
    bool matched = false;
    for (std::size_t c = 0; c < out.classes.size(); ++c) {
      double d = 0;
      for (std::size_t k = 0; k < jac.a.size(); ++k)
        d = std::max(d, std::abs(jac.a[k] - out.classes[c].a[k]));
      if (d <= tol) {
        out.members[c].push_back(int(i));
        matched = true;
        break;
      }
    }
    if (!matched) {
      out.classes.push_back(jac);
      out.members.push_back({int(i)});
    }
  }
  if (!any)
    throw MathPreconditionError("linearization: point does not solve the pair (F, Λ)");
  return out;
}

namespace {

bool kernel_good_position(const MatD& kernel, const CornerDomain& domain, const VecD& x) {
  auto active = faces_at(domain, x);
  int n = domain.dim();
  if (kernel.cols == 0 || active.empty()) return true;
  // For every subset of active faces: the kernel is either contained in the
  // intersection of their tangent spaces or transversal to it.
  int subsets = 1 << active.size();
  for (int mask = 1; mask < subsets; ++mask) {
    std::vector<bool> pinned(n, false);
    for (std::size_t f = 0; f < active.size(); ++f)
      if (mask & (1 << f)) pinned[active[f].coord] = true;
    int cols = 0;
    for (int i = 0; i < n; ++i)
      if (!pinned[i]) ++cols;
    MatD w(n, cols);
    int col = 0;
    for (int i = 0; i < n; ++i)
      if (!pinned[i]) w(i, col++) = 1.0;
    bool contained = span_contained(kernel, w);
    bool transversal = spans_sum_to_full(kernel, w);
    if (!contained && !transversal) return false;
  }
  return true;
}

}  // namespace

TransversalityVerdict transversality(const ToyFredholmProblem& p, const Multisection& lambda,
                                     const WeightedSolutionSet& sols, double sv_floor) {
  TransversalityVerdict v;
  if (sols.positive_dimensional()) {
    // Branch handles arise from affine slices of full row rank; check the
    // row rank of each slice's defining matrix through a sample point.
    for (const auto& b : sols.branches->branches) {
      VecQ mid;
      for (const auto& iv : b.ref) mid.push_back((iv.lo + iv.hi) / Rational(2));
      VecD x = to_double(eval(b.param, mid));
      auto cls = linearization_classes(p, lambda, x);
      for (const auto& mtx : cls.classes) {
        if (rank(mtx, sv_floor) < p.bundle.fiber_dim) {
          v.transversal = false;
          v.failing_orbits.push_back("branch");
        }
        MatD k = kernel_basis(mtx, sv_floor);
        MatD tb = boundary_tangent(p.bundle.base.domain, x);
        if (!spans_sum_to_full(k, tb)) v.general_position = false;
        if (!kernel_good_position(k, p.bundle.base.domain, x)) v.good_position = false;
      }
    }
    v.good_position = v.good_position && v.transversal;
    v.general_position = v.general_position && v.transversal;
    return v;
  }
  const double floor_eff = std::max(sv_floor, kResolutionFloor);
  for (const auto& orbit : sols.orbits) {
    auto cls = linearization_classes(p, lambda, orbit.representative);
    bool orbit_fails = false;
    for (const auto& mtx : cls.classes) {
      bool surjective =
          rank(mtx, floor_eff) == p.bundle.fiber_dim && smallest_singular_value(mtx) > floor_eff;
      if (!surjective) {
        v.transversal = false;
        orbit_fails = true;
        continue;
      }
      MatD k = kernel_basis(mtx, sv_floor);
      MatD tb = boundary_tangent(p.bundle.base.domain, orbit.representative);
      bool general = spans_sum_to_full(k, tb);
      // Second reading: transversality to every face-intersection tangent.
      auto active = faces_at(p.bundle.base.domain, orbit.representative);
      bool general_all = true;
      int n = p.bundle.base.domain.dim();
      for (int mask = 1; mask < (1 << active.size()); ++mask) {
        std::vector<bool> pinned(n, false);
        for (std::size_t f = 0; f < active.size(); ++f)
          if (mask & (1 << f)) pinned[active[f].coord] = true;
        int cols = 0;
        for (int i = 0; i < n; ++i)
          if (!pinned[i]) ++cols;
        MatD w(n, cols);
        int col = 0;
        for (int i = 0; i < n; ++i)
          if (!pinned[i]) w(i, col++) = 1.0;
        if (!spans_sum_to_full(k, w)) general_all = false;
      }
      if (general != general_all) v.readings_disagree = true;
      if (!general) {
        v.general_position = false;
        orbit_fails = true;
      }
      if (!kernel_good_position(k, p.bundle.base.domain, orbit.representative))
        v.good_position = false;
    }
    if (orbit_fails) {
      std::string tag;
      for (double c : orbit.representative) tag += (tag.empty() ? "" : ",") + std::to_string(c);
      v.failing_orbits.push_back(tag);
    }
  }
  v.good_position = v.good_position && v.transversal;
  v.general_position = v.general_position && v.transversal;
  return v;
}

bool controls_compactness(const ToyFredholmProblem& p, const Box& window,
                          const AuxiliaryNorm& n, const SolverOptions& opts) {
  (void)n;
  const auto& domain = p.bundle.base.domain;
  if (int(window.size()) != domain.dim()) return false;
  // Closure of the window must be compact inside the chart: it may touch a
  // declared face but not an open end.
  for (int i = 0; i < domain.dim(); ++i) {
    const auto& c = domain.coords[i];
    if (window[i].lo < c.lo || (window[i].lo == c.lo && !c.lo_face)) return false;
    if (window[i].hi > c.hi || (window[i].hi == c.hi && !c.hi_face)) return false;
    if (!(window[i].lo < window[i].hi)) return false;
  }
  // All zeros of F lie inside the window.
  auto zeros = solution_set(p, Multisection::trivial(p.bundle), opts);
  for (const auto& orbit : zeros.orbits)
    for (const auto& x : orbit.points)
      for (int i = 0; i < domain.dim(); ++i)
        if (x[i] < window[i].lo.to_double() - 1e-9 || x[i] > window[i].hi.to_double() + 1e-9)
          return false;
  if (zeros.positive_dimensional()) return false;
  return true;
}

namespace {

Rational rationalize(double v, std::int64_t den = 1 << 20) {
  return Rational(std::int64_t(std::llround(v * double(den))), den);
}

// Standard basis vectors completing the column span of the class matrices
// to all of R^m; exact rational output.
std::vector<VecQ> cokernel_completion(const std::vector<MatD>& classes, int m,
                                      double sv_floor) {
  std::vector<VecD> cols;
  for (const auto& c : classes)
    for (int j = 0; j < c.cols; ++j) {
      VecD col(m);
      for (int r = 0; r < m; ++r) col[r] = c(r, j);
      cols.push_back(col);
    }
  std::vector<VecQ> picked;
  auto current_rank = [&]() {
    MatD mm(m, int(cols.size() + picked.size()));
    int cc = 0;
    for (const auto& col : cols) {
      for (int r = 0; r < m; ++r) mm(r, cc) = col[r];
      ++cc;
    }
    for (const auto& col : picked) {
      for (int r = 0; r < m; ++r) mm(r, cc) = col[r].to_double();
      ++cc;
    }
    return rank(mm, sv_floor);
  };
  int base = current_rank();
  for (int k = 0; k < m && base < m; ++k) {
    VecQ e(m, Rational(0));
    e[k] = Rational(1);
    picked.push_back(e);
    int r = current_rank();
    if (r > base)
      base = r;
    else
      picked.pop_back();
  }
  return picked;
}

}  // namespace

std::pair<Multisection, PerturbationReport> perturb(const ToyFredholmProblem& p,
                                                    const Multisection& lambda,
                                                    const PerturbationOptions& opts) {
  PerturbationReport report;
  if (!p.window)
    throw MathPreconditionError("perturb: problem has no compactness window");
  if (!controls_compactness(p, *p.window, p.norm, opts.solver))
    throw MathPreconditionError("perturb: (U, N) does not control compactness");
  if (!(lambda.norm_sup(p.norm) < 0.5))
    throw MathPreconditionError("perturb: N(Λ) must be < 1/2");
  if (!(opts.epsilon > 0.0 && opts.epsilon < 0.5))
    throw MathPreconditionError("perturb: ε must lie in (0, 1/2)");

  const auto& cg = p.bundle.base;
  bool has_boundary = !faces(cg.domain).empty();

  auto sols = solution_set(p, lambda, opts.solver);
  auto verdict = transversality(p, lambda, sols, opts.sv_floor);
  bool target_met = has_boundary ? verdict.general_position : verdict.transversal;
  if (target_met) {
    report.already_transversal = true;
    report.verdict = verdict;
    report.solutions = std::move(sols);
    return {Multisection::trivial(p.bundle), std::move(report)};
  }
  if (sols.positive_dimensional())
    throw MathPreconditionError("perturb: positive-dimensional failing set is out of scope");

  int n = p.bundle.dim();
  int m = p.bundle.fiber_dim;

  // Build the parametrized family: bump sections filling the cokernels (and
  // completing T^∂ when the domain has faces) at every failing orbit.
  ParamMultisection family;
  family.bundle = &p.bundle;
  family.support = *p.window;

  // Bump centers: one per solution cluster (degenerate zeros are located
  // only up to the solver resolution, so nearby orbits share one support).
  std::vector<VecD> centers;
  for (const auto& orbit : sols.orbits) {
    bool near = false;
    for (const auto& c : centers)
      if (inf_dist(c, orbit.representative) <= 1e-3) near = true;
    if (!near) centers.push_back(orbit.representative);
  }
  for (const auto& x : centers) {
    auto cls = linearization_classes(p, lambda, x);

    // Choose a bump radius keeping the support box inside the window (and
    // away from declared faces with the boundary-trivial flag).
    VecQ center(n), radius(n);
    for (int i = 0; i < n; ++i) {
      center[i] = rationalize(x[i]);
      double lo = (*p.window)[i].lo.to_double(), hi = (*p.window)[i].hi.to_double();
      double slack = std::min(x[i] - lo, hi - x[i]);
      double r = slack > 0 ? 0.5 * slack : 0.0;
      if (opts.boundary_trivial) {
        const auto& c = cg.domain.coords[i];
        if (c.lo_face) r = std::min(r, 0.5 * (x[i] - c.lo.to_double()));
        if (c.hi_face) r = std::min(r, 0.5 * (c.hi.to_double() - x[i]));
      }
      if (r <= 1e-6)
        throw MathPreconditionError("perturb: no room for a bump support at a solution");
      // Shrink a notch so the rationalized box stays strictly inside.
      radius[i] = rationalize(r) * Rational(15, 16);
      if (radius[i] <= Rational(0)) radius[i] = Rational(1, 1 << 10);
    }
    BumpBox bump{center, radius};

    // Cokernel directions, made group-invariant: the span of all μ(g)·e
    // must cover the cokernels for every g.
    auto picked = cokernel_completion(cls.classes, m, std::max(opts.sv_floor, kResolutionFloor));
    std::vector<VecQ> directions;
    for (const auto& e : picked)
      for (const auto& g : cg.group.elements) {
        VecQ ge = p.bundle.mu_of(g).apply(e);
        directions.push_back(ge);
      }
    // Boundary case: complete the kernels across T^∂.
    if (has_boundary && !opts.boundary_trivial) {
      auto active = faces_at(cg.domain, x);
      for (const auto& f : active) {
        // h = axis pinned by the face; add -μ(g)·(M · h) for every class M.
        for (const auto& mtx : cls.classes) {
          VecQ mh(m);
          for (int r = 0; r < m; ++r) mh[r] = rationalize(mtx(r, f.coord));
          for (const auto& g : cg.group.elements) {
            VecQ v = p.bundle.mu_of(g).apply(mh);
            for (auto& c : v) c = -c;
            directions.push_back(v);
          }
        }
      }
    }
    // Reduce the direction list to a maximal independent subset, exactly.
    std::vector<VecQ> basis_dirs;
    MatQ acc(m, 0);
    for (const auto& dir : directions) {
      MatQ trial(m, acc.cols + 1);
      for (int r = 0; r < m; ++r) {
        for (int cc = 0; cc < acc.cols; ++cc) trial(r, cc) = acc(r, cc);
        trial(r, acc.cols) = dir[r];
      }
      if (rank(trial) > rank(acc)) {
        acc = trial;
        basis_dirs.push_back(dir);
      }
    }
    for (const auto& dir : basis_dirs)
      family.basis.push_back(SectionExpr::bump_vector(bump, dir));
  }

  if (family.basis.empty())
    throw MathPreconditionError("perturb: no perturbation directions found");

  // Scale the basis so each member has norm < ε/k.
  int k = family.param_dim();
  for (auto& s : family.basis) {
    double ns = section_norm_sup(p.bundle, s, p.norm);
    if (ns <= 0) continue;
    Rational scale = rationalize(opts.epsilon / (k * ns * 1.25), 1 << 24);
    s = s.scaled(scale);
  }

  // Regular-value search by rejection sampling.
  std::mt19937_64 rng(opts.seed);
  std::uniform_int_distribution<std::int64_t> draw(-(1 << 20) + 1, (1 << 20) - 1);
  for (int attempt = 1; attempt <= opts.sample_budget; ++attempt) {
    report.attempts = attempt;
    VecQ t(k);
    for (auto& c : t) c = Rational(draw(rng), 1 << 20);
    auto tau = family.freeze(t);
    double tn = tau.norm_sup(p.norm);
    if (!(tn < opts.epsilon)) continue;
    auto combined = sum(lambda, tau);
    auto new_sols = solution_set(p, combined, opts.solver);
    if (new_sols.positive_dimensional()) continue;
    auto new_verdict = transversality(p, combined, new_sols, opts.sv_floor);
    bool ok = has_boundary ? new_verdict.general_position : new_verdict.transversal;
    if (!ok) continue;
    report.accepted_parameter = t;
    report.verdict = new_verdict;
    report.solutions = std::move(new_sols);
    report.tau_norm = tn;
    return {std::move(tau), std::move(report)};
  }
  throw BudgetExhausted("perturb: sampling budget exhausted after " +
                        std::to_string(opts.sample_budget) + " attempts");
}

int orientation_sign(const MatD& m, double sv_floor) {
  if (m.rows != m.cols)
    throw MathPreconditionError("orientation: matrix not square");
  if (smallest_singular_value(m) <= sv_floor)
    throw MathPreconditionError("orientation: operator is singular");
  return det(m) > 0 ? 1 : -1;
}

int orientation_sign(const MatQ& m) {
  Rational d = det(m);
  if (d.is_zero()) throw MathPreconditionError("orientation: operator is singular");
  return d.sign();
}

Rational degree(const ToyFredholmProblem& p, const Multisection& lambda,
                const SolverOptions& opts, double sv_floor) {
  if (p.index() != 0) throw MathPreconditionError("degree: index must be zero");
  auto sols = solution_set(p, lambda, opts);
  if (sols.positive_dimensional())
    throw MathPreconditionError("degree: solution set is not isolated");
  auto verdict = transversality(p, lambda, sols, sv_floor);
  if (!verdict.transversal)
    throw MathPreconditionError("degree: pair is not transversal");
  Rational total(0);
  for (const auto& orbit : sols.orbits) {
    auto cls = linearization_classes(p, lambda, orbit.representative);
    int sign = orientation_sign(cls.classes.front(), sv_floor);
    for (const auto& mtx : cls.classes)
      if (orientation_sign(mtx, sv_floor) != sign)
        throw MathPreconditionError("degree: classes at an orbit disagree in sign");
    total += orbit.weight * Rational(sign) / Rational(orbit.effective_stabilizer);
  }
  return total;
}

double invariant(const ToyFredholmProblem& p, const Multisection& lambda,
                 const DifferentialForm& omega, const SolverOptions& opts) {
  auto sols = solution_set(p, lambda, opts);
  if (sols.positive_dimensional()) {
    if (omega.degree() != sols.branches->branch_dim())
      throw MathPreconditionError("invariant: form degree mismatch");
    if (!transversality(p, lambda, sols).transversal)
      throw MathPreconditionError("invariant: pair is not transversal");
    return integrate(*sols.branches, omega).to_double();
  }
  if (omega.degree() != 0)
    throw MathPreconditionError("invariant: isolated solutions need a 0-form");
  auto verdict = transversality(p, lambda, sols);
  if (!verdict.transversal)
    throw MathPreconditionError("invariant: pair is not transversal");
  Polynomial f = omega.coefficient({});
  double total = 0;
  for (const auto& orbit : sols.orbits) {
    auto cls = linearization_classes(p, lambda, orbit.representative);
    int sign = orientation_sign(cls.classes.front());
    total += orbit.weight.to_double() * sign * f.eval(orbit.representative) /
             orbit.effective_stabilizer;
  }
  return total;
}

double invariant_boundary_pair(const ToyFredholmProblem& p, const Multisection& lambda,
                               const DifferentialForm& omega, const DifferentialForm& theta,
                               const SolverOptions& opts) {
  auto sols = solution_set(p, lambda, opts);
  if (!sols.positive_dimensional())
    throw MathPreconditionError("invariant: boundary pairs need a branch handle");
  auto verdict = transversality(p, lambda, sols);
  if (!verdict.transversal || !verdict.good_position)
    throw MathPreconditionError("invariant: pair is not in good position");
  Rational lhs = integrate(*sols.branches, omega);
  Rational rhs = boundary_integrate(*sols.branches, theta);
  return (lhs - rhs).to_double();
}

}  // namespace polyfold
