// polyfold-lab: finite groupoid algebra, branched integration, and toy
// equivariant Fredholm problems from JSON fixtures.

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "polyfold/acceptance.hpp"
#include "polyfold/fixtures.hpp"

using namespace polyfold;
using fixtures::json;

namespace {

// Exit codes: 2 schema error, 3 mathematical precondition, 4 budget.
constexpr int kSchemaExit = 2;
constexpr int kMathExit = 3;
constexpr int kBudgetExit = 4;

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

unsigned seed_from_env(unsigned fallback) {
  const char* env = std::getenv("POLYFOLD_SEED");
  if (!env) return fallback;
  return unsigned(std::strtoul(env, nullptr, 10));
}

// Rebinds codomain/domain pointers after a structural-equality check, so
// diagrams loaded from separate files can be composed.
void require_same(const FiniteGroupoid& a, const FiniteGroupoid& b, const std::string& what) {
  if (!fixtures::same_tables(a, b))
    throw fixtures::SchemaError("fixture: " + what + " do not agree structurally");
}

json verdict_json(const TransversalityVerdict& v) {
  return json{{"transversal", v.transversal},
              {"good_position", v.good_position},
              {"general_position", v.general_position},
              {"failing_orbits", v.failing_orbits}};
}

json orbit_json(const SolutionOrbit& orbit) {
  json pts = json::array();
  for (const auto& p : orbit.points) {
    json pt = json::array();
    for (double c : p) pt.push_back(fixtures::double_str(c));
    pts.push_back(pt);
  }
  return json{{"points", pts},
              {"weight", orbit.weight.str()},
              {"effective_stabilizer", orbit.effective_stabilizer}};
}

MeasurableRegion parse_region_flag(const std::vector<std::string>& boxes,
                                   std::size_t branch_count) {
  MeasurableRegion region;
  if (boxes.empty()) return region;
  // --region accepts one "lo:hi[,lo:hi...]" box list per branch.
  if (boxes.size() != branch_count)
    throw fixtures::SchemaError("fixture: --region needs one box list per branch");
  region.per_branch.emplace();
  for (const auto& spec : boxes) {
    std::vector<Box> list;
    Box box;
    std::string cur;
    auto flush_interval = [&](const std::string& token) {
      auto pos = token.find(':');
      if (pos == std::string::npos)
        throw fixtures::SchemaError("fixture: region intervals are lo:hi");
      box.push_back({Rational::parse(token.substr(0, pos)),
                     Rational::parse(token.substr(pos + 1))});
    };
    for (char c : spec + ",") {
      if (c == ',') {
        if (!cur.empty()) flush_interval(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    if (!box.empty()) list.push_back(box);
    region.per_branch->push_back(list);
  }
  return region;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polyfold-lab: desk-scale groupoid, branched-integration and "
               "equivariant Fredholm toolkit"};
  app.require_subcommand(1);
  unsigned seed = seed_from_env(7);
  double tol = 1e-9;
  bool json_out = true;
  app.add_option("--seed", seed, "random seed (overrides POLYFOLD_SEED)");
  app.add_option("--tol", tol, "float comparison tolerance");
  app.add_flag("--json", json_out, "emit JSON (default)");

  // groupoid ----------------------------------------------------------------
  auto* groupoid = app.add_subcommand("groupoid", "finite groupoid operations");
  std::string g_file, g_object;
  auto* g_validate = groupoid->add_subcommand("validate", "check the groupoid axioms");
  g_validate->add_option("file", g_file)->required();
  auto* g_orbits = groupoid->add_subcommand("orbits", "orbit-space partition");
  g_orbits->add_option("file", g_file)->required();
  auto* g_stab = groupoid->add_subcommand("stabilizer", "stabilizer of an object");
  g_stab->add_option("file", g_file)->required();
  g_stab->add_option("--object", g_object)->required();

  // genmap --------------------------------------------------------------
  auto* genmap = app.add_subcommand("genmap", "fibered products and generalized maps");
  std::string m_a, m_b, m_c;
  auto* m_fprod = genmap->add_subcommand("fprod", "weak fibered product of two functors");
  m_fprod->add_option("F", m_a)->required();
  m_fprod->add_option("G", m_b)->required();
  auto* m_compose = genmap->add_subcommand("compose", "compose two generalized maps");
  m_compose->add_option("a", m_a)->required();
  m_compose->add_option("b", m_b)->required();
  auto* m_refine = genmap->add_subcommand("check-refinement", "verify a refinement witness");
  m_refine->add_option("dprime", m_a)->required();
  m_refine->add_option("d", m_b)->required();
  m_refine->add_option("witness", m_c)->required();

  // bundle --------------------------------------------------------------
  auto* bundle = app.add_subcommand("bundle", "chart bundle operations");
  std::string b_file;
  auto* b_validate = bundle->add_subcommand("validate", "check the transport axioms");
  b_validate->add_option("file", b_file)->required();

  // msec ----------------------------------------------------------------
  auto* msec = app.add_subcommand("msec", "multisection operations");
  std::string ms_file, ms_file2, ms_point, ms_vector;
  auto* ms_eval = msec->add_subcommand("eval", "evaluate the weight functor");
  ms_eval->add_option("file", ms_file)->required();
  ms_eval->add_option("--point", ms_point)->required();
  ms_eval->add_option("--vector", ms_vector)->required();
  auto* ms_sum = msec->add_subcommand("sum", "convolution sum of two multisections");
  ms_sum->add_option("a", ms_file)->required();
  ms_sum->add_option("b", ms_file2)->required();
  auto* ms_norm = msec->add_subcommand("norm", "sup of the pointwise section-norm max");
  ms_norm->add_option("file", ms_file)->required();
  auto* ms_symm = msec->add_subcommand("symmetrize", "symmetrize a named section");
  std::string ms_section;
  ms_symm->add_option("file", ms_file)->required();
  ms_symm->add_option("--section", ms_section)->required();

  // strat -----------------------------------------------------------------
  auto* strat = app.add_subcommand("strat", "corner-domain stratification");
  std::string s_file, s_point;
  auto* s_dindex = strat->add_subcommand("dindex", "degeneracy index of a point");
  s_dindex->add_option("domain", s_file)->required();
  s_dindex->add_option("--point", s_point)->required();
  auto* s_faces = strat->add_subcommand("faces", "enumerate declared faces");
  s_faces->add_option("domain", s_file)->required();

  // integrate / stokes ------------------------------------------------------
  std::string i_file, i_form;
  std::vector<std::string> i_region;
  auto* integrate_cmd = app.add_subcommand("integrate", "branched integral of a form");
  integrate_cmd->add_option("fixture", i_file)->required();
  integrate_cmd->add_option("--form", i_form)->required();
  integrate_cmd->add_option("--region", i_region, "per-branch parameter boxes lo:hi[,lo:hi]");
  auto* stokes_cmd = app.add_subcommand("stokes", "Stokes residual of a form");
  stokes_cmd->add_option("fixture", i_file)->required();
  stokes_cmd->add_option("--form", i_form)->required();

  // fredholm ------------------------------------------------------------
  std::string f_file, f_form, f_theta;
  double f_eps = 0.3;
  bool f_boundary_trivial = false;
  auto* solve_cmd = app.add_subcommand("solve", "weighted solution set of (F, Λ)");
  solve_cmd->add_option("fixture", f_file)->required();
  auto* perturb_cmd = app.add_subcommand("perturb", "cokernel-filling perturbation");
  perturb_cmd->add_option("fixture", f_file)->required();
  perturb_cmd->add_option("--eps", f_eps, "norm bound for τ");
  perturb_cmd->add_flag("--boundary-trivial", f_boundary_trivial,
                        "keep perturbation supports away from faces");
  auto* degree_cmd = app.add_subcommand("degree", "weighted signed rational count");
  degree_cmd->add_option("fixture", f_file)->required();
  auto* invariant_cmd = app.add_subcommand("invariant", "integrate a form over the solutions");
  invariant_cmd->add_option("fixture", f_file)->required();
  invariant_cmd->add_option("--form", f_form)->required();
  invariant_cmd->add_option("--theta", f_theta, "boundary form for the pair variant");

  // curve -----------------------------------------------------------------
  auto* curve = app.add_subcommand("curve", "nodal surface combinatorics");
  std::string c_file, c_file2;
  auto* c_genus = curve->add_subcommand("genus", "arithmetic genus");
  c_genus->add_option("file", c_file)->required();
  auto* c_stable = curve->add_subcommand("stable", "stability per component");
  c_stable->add_option("file", c_file)->required();
  auto* c_stabilize = curve->add_subcommand("stabilize", "weed unstable components");
  c_stabilize->add_option("file", c_file)->required();
  auto* c_iso = curve->add_subcommand("iso", "decorated-graph isomorphism");
  c_iso->add_option("a", c_file)->required();
  c_iso->add_option("b", c_file2)->required();

  // acceptance ----------------------------------------------------------
  auto* accept = app.add_subcommand("acceptance", "run the acceptance criteria");
  std::string a_suite = "fixtures", a_filter;
  accept->add_option("--suite", a_suite, "fixture directory");
  accept->add_option("--filter", a_filter, "substring filter over criterion names");

  // Global flags are accepted after subcommand names as well.
  for (auto* sc : app.get_subcommands({})) {
    sc->fallthrough();
    for (auto* nested : sc->get_subcommands({})) nested->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kSchemaExit;  // unknown subcommands and malformed flags
  }

  auto parse_vec = [](const std::string& s) {
    VecQ v;
    std::string cur;
    for (char c : s + ",") {
      if (c == ',') {
        if (!cur.empty()) v.push_back(Rational::parse(cur));
        cur.clear();
      } else {
        cur += c;
      }
    }
    return v;
  };

  try {
    if (g_validate->parsed()) {
      auto g = fixtures::parse_finite_groupoid(fixtures::load_file(g_file));
      auto rep = validate_groupoid(*g);
      emit(json{{"ok", rep.ok}, {"failure", rep.failure}, {"detail", rep.detail}});
      return rep.ok ? 0 : kMathExit;
    }
    if (g_orbits->parsed()) {
      auto g = fixtures::parse_finite_groupoid(fixtures::load_file(g_file));
      json classes = json::array();
      for (const auto& cls : orbit_space(*g)) classes.push_back(cls);
      emit(json{{"orbits", classes}});
      return 0;
    }
    if (g_stab->parsed()) {
      auto g = fixtures::parse_finite_groupoid(fixtures::load_file(g_file));
      if (!g->has_object(g_object))
        throw fixtures::SchemaError("fixture: unknown object " + g_object);
      emit(json{{"object", g_object}, {"stabilizer", g->stabilizer(g_object)}});
      return 0;
    }

    if (m_fprod->parsed()) {
      auto F = fixtures::parse_functor(fixtures::load_file(m_a));
      auto G = fixtures::parse_functor(fixtures::load_file(m_b));
      require_same(*F.codomain, *G.codomain, "functor codomains");
      G.functor.codomain = F.codomain.get();
      auto fp = weak_fibered_product(F.functor, G.functor);
      json out = fixtures::finite_groupoid_to_json(*fp.total);
      out["pi1_objects"] = fp.pi1.object_map;
      out["pi2_objects"] = fp.pi2.object_map;
      out["pi1_is_equivalence"] = is_equivalence(fp.pi1);
      out["pi2_is_equivalence"] = is_equivalence(fp.pi2);
      emit(out);
      return 0;
    }
    if (m_compose->parsed()) {
      auto a = fixtures::parse_diagram(fixtures::load_file(m_a));
      auto b = fixtures::parse_diagram(fixtures::load_file(m_b));
      require_same(*a.right, *b.left, "diagram endpoints");
      b.diagram.left = a.right;
      b.diagram.back.codomain = a.right.get();
      GeneralizedMap ga(a.diagram), gb(b.diagram);
      auto comp = compose(ga, gb);
      json out = fixtures::finite_groupoid_to_json(*comp.representative().middle);
      json omap = json::array();
      for (int t : comp.orbit_map()) omap.push_back(t);
      out["orbit_map"] = omap;
      emit(out);
      return 0;
    }
    if (m_refine->parsed()) {
      auto dprime = fixtures::parse_diagram(fixtures::load_file(m_a));
      auto d = fixtures::parse_diagram(fixtures::load_file(m_b));
      require_same(*dprime.left, *d.left, "diagram left endpoints");
      require_same(*dprime.right, *d.right, "diagram right endpoints");
      d.diagram.left = dprime.left;
      d.diagram.back.codomain = dprime.left.get();
      d.diagram.right = dprime.right;
      d.diagram.forward.codomain = dprime.right.get();
      auto w = fixtures::parse_witness(fixtures::load_file(m_c), *dprime.middle, *d.middle,
                                       *dprime.left, *dprime.right);
      std::string why;
      bool ok = is_refinement(dprime.diagram, d.diagram, w, &why);
      emit(json{{"refines", ok}, {"detail", why}});
      return 0;
    }

    if (b_validate->parsed()) {
      auto loaded = fixtures::parse_chart_bundle(fixtures::load_file(b_file));
      auto rep = loaded.bundle->validate();
      emit(json{{"ok", rep.ok}, {"failure", rep.failure}, {"detail", rep.detail}});
      return rep.ok ? 0 : kMathExit;
    }

    if (ms_eval->parsed()) {
      auto loaded = fixtures::parse_multisection_fixture(fixtures::load_file(ms_file));
      VecQ x = parse_vec(ms_point), e = parse_vec(ms_vector);
      Rational value;
      try {
        value = loaded.lambda.evaluate(x, e);
      } catch (const std::logic_error&) {
        // Bump-backed sections force the float path.
        value = loaded.lambda.evaluate(to_double(x), to_double(e), tol);
      }
      emit(json{{"value", value.str()}});
      return 0;
    }
    if (ms_sum->parsed()) {
      auto a = fixtures::parse_multisection_fixture(fixtures::load_file(ms_file));
      json ja = fixtures::load_file(ms_file);
      json jb = fixtures::load_file(ms_file2);
      if (ja.at("chart") != jb.at("chart") || ja.at("mu") != jb.at("mu") ||
          ja.at("fiber_dim") != jb.at("fiber_dim"))
        throw fixtures::SchemaError("fixture: summands live on different bundles");
      auto lam_b = fixtures::parse_multisection(jb.at("multisection"), *a.bundle);
      auto s = sum(a.lambda, lam_b);
      json sections = json::array();
      for (const auto& ws : s.sections()) sections.push_back(ws.weight.str());
      emit(json{{"total_weight", s.total_weight().str()},
                {"section_count", s.sections().size()},
                {"weights", sections}});
      return 0;
    }
    if (ms_norm->parsed()) {
      auto loaded = fixtures::parse_multisection_fixture(fixtures::load_file(ms_file));
      emit(json{{"norm", fixtures::double_str(
                             loaded.lambda.norm_sup(AuxiliaryNorm::euclidean()))}});
      return 0;
    }
    if (ms_symm->parsed()) {
      auto loaded = fixtures::parse_chart_bundle(fixtures::load_file(ms_file));
      auto it = loaded.sections.find(ms_section);
      if (it == loaded.sections.end())
        throw fixtures::SchemaError("fixture: no section named " + ms_section);
      auto lam = symmetrize(*loaded.bundle, it->second,
                            loaded.bundle->base.domain.bounding_box());
      json weights = json::array();
      for (const auto& ws : lam.sections()) weights.push_back(ws.weight.str());
      std::string why;
      emit(json{{"sections", lam.sections().size()},
                {"weights", weights},
                {"valid", lam.validate(&why)}});
      return 0;
    }

    if (s_dindex->parsed()) {
      auto j = fixtures::load_file(s_file);
      auto domain = fixtures::parse_domain(j.at("domain"));
      VecQ x = parse_vec(s_point);
      emit(json{{"d", degeneracy_index(domain, x)}});
      return 0;
    }
    if (s_faces->parsed()) {
      auto j = fixtures::load_file(s_file);
      auto domain = fixtures::parse_domain(j.at("domain"));
      json out = json::array();
      for (const auto& f : faces(domain))
        out.push_back(json{{"coord", f.coord},
                           {"end", f.end == FaceEnd::Lo ? "lo" : "hi"},
                           {"value", f.value.str()}});
      emit(json{{"faces", out}, {"face_structured", is_face_structured(domain)}});
      return 0;
    }

    if (integrate_cmd->parsed()) {
      auto loaded = fixtures::parse_branched(fixtures::load_file(i_file));
      auto it = loaded.forms.find(i_form);
      if (it == loaded.forms.end())
        throw fixtures::SchemaError("fixture: no form named " + i_form);
      auto region = parse_region_flag(i_region, loaded.subgroupoid.branches.size());
      Rational value = integrate(loaded.subgroupoid, it->second, region);
      double quad = integrate_quadrature(loaded.subgroupoid, it->second, region);
      emit(json{{"value", value.str()},
                {"quadrature", fixtures::double_str(quad)},
                {"residual", fixtures::double_str(std::abs(quad - value.to_double()))}});
      return 0;
    }
    if (stokes_cmd->parsed()) {
      auto loaded = fixtures::parse_branched(fixtures::load_file(i_file));
      auto it = loaded.forms.find(i_form);
      if (it == loaded.forms.end())
        throw fixtures::SchemaError("fixture: no form named " + i_form);
      Rational res = stokes_residual(loaded.subgroupoid, it->second);
      double quad = stokes_residual_quadrature(loaded.subgroupoid, it->second);
      emit(json{{"value", integrate(loaded.subgroupoid,
                                    it->second.exterior_derivative()).str()},
                {"residual", res.str()},
                {"quadrature_residual", fixtures::double_str(quad)}});
      return 0;
    }

    if (solve_cmd->parsed()) {
      auto loaded = fixtures::parse_problem(fixtures::load_file(f_file));
      auto sols = solution_set(*loaded.problem, loaded.lambda);
      json orbits = json::array();
      for (const auto& orbit : sols.orbits) orbits.push_back(orbit_json(orbit));
      json out{{"orbits", orbits}, {"positive_dimensional", sols.positive_dimensional()}};
      if (sols.positive_dimensional()) out["branch_count"] = sols.branches->branches.size();
      out["verdict"] = verdict_json(transversality(*loaded.problem, loaded.lambda, sols));
      emit(out);
      return 0;
    }
    if (perturb_cmd->parsed()) {
      auto loaded = fixtures::parse_problem(fixtures::load_file(f_file));
      PerturbationOptions opts;
      opts.epsilon = f_eps;
      opts.seed = seed;
      opts.boundary_trivial = f_boundary_trivial;
      auto [tau, rep] = perturb(*loaded.problem, loaded.lambda, opts);
      json tpar = json::array();
      for (const auto& t : rep.accepted_parameter) tpar.push_back(t.str());
      json orbits = json::array();
      for (const auto& orbit : rep.solutions.orbits) orbits.push_back(orbit_json(orbit));
      emit(json{{"already_transversal", rep.already_transversal},
                {"attempts", rep.attempts},
                {"parameter", tpar},
                {"tau_norm", fixtures::double_str(rep.tau_norm)},
                {"tau_sections", tau.sections().size()},
                {"verdict", verdict_json(rep.verdict)},
                {"orbits", orbits}});
      return 0;
    }
    if (degree_cmd->parsed()) {
      auto loaded = fixtures::parse_problem(fixtures::load_file(f_file));
      emit(json{{"degree", degree(*loaded.problem, loaded.lambda).str()}});
      return 0;
    }
    if (invariant_cmd->parsed()) {
      auto loaded = fixtures::parse_problem(fixtures::load_file(f_file));
      auto it = loaded.forms.find(f_form);
      if (it == loaded.forms.end())
        throw fixtures::SchemaError("fixture: no form named " + f_form);
      if (!f_theta.empty()) {
        auto th = loaded.forms.find(f_theta);
        if (th == loaded.forms.end())
          throw fixtures::SchemaError("fixture: no form named " + f_theta);
        emit(json{{"value", fixtures::double_str(invariant_boundary_pair(
                                *loaded.problem, loaded.lambda, it->second, th->second))}});
      } else {
        emit(json{{"value", fixtures::double_str(
                                invariant(*loaded.problem, loaded.lambda, it->second))}});
      }
      return 0;
    }

    if (c_genus->parsed()) {
      auto s = fixtures::parse_curve(fixtures::load_file(c_file));
      emit(json{{"connected", is_connected(s)},
                {"genus", is_connected(s) ? json(arithmetic_genus(s)) : json(nullptr)}});
      return 0;
    }
    if (c_stable->parsed()) {
      auto s = fixtures::parse_curve(fixtures::load_file(c_file));
      auto rep = is_stable(s);
      emit(json{{"stable", rep.stable}, {"failing_components", rep.failing_components}});
      return 0;
    }
    if (c_stabilize->parsed()) {
      auto s = fixtures::parse_curve(fixtures::load_file(c_file));
      auto t = stabilize(s);
      json comps = json::array();
      for (const auto& c : t.components)
        comps.push_back(json{{"id", c.id}, {"genus", c.genus}});
      json marked = json::array();
      for (const auto& m : t.marked)
        marked.push_back(json{{"point", m.point}, {"comp", m.comp}});
      json nodes = json::array();
      for (const auto& [x, y] : t.nodes)
        nodes.push_back(json::array({json{{"point", x.point}, {"comp", x.comp}},
                                     json{{"point", y.point}, {"comp", y.comp}}}));
      emit(json{{"kind", "curve"},
                {"components", comps},
                {"marked", marked},
                {"nodes", nodes},
                {"genus", arithmetic_genus(t)}});
      return 0;
    }
    if (c_iso->parsed()) {
      auto a = fixtures::parse_curve(fixtures::load_file(c_file));
      auto b = fixtures::parse_curve(fixtures::load_file(c_file2));
      emit(json{{"isomorphic", isomorphic(a, b)}});
      return 0;
    }

    if (accept->parsed()) {
      auto results = acceptance::run(a_suite, seed, a_filter);
      return acceptance::report(results);
    }
  } catch (const fixtures::SchemaError& e) {
    std::fprintf(stderr, "schema error: %s\n", e.what());
    return kSchemaExit;
  } catch (const BudgetExhausted& e) {
    std::fprintf(stderr, "budget exhausted: %s\n", e.what());
    return kBudgetExit;
  } catch (const MathPreconditionError& e) {
    std::fprintf(stderr, "precondition failed: %s\n", e.what());
    return kMathExit;
  } catch (const NotStabilizable& e) {
    std::fprintf(stderr, "precondition failed: %s\n", e.what());
    return kMathExit;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "schema error: %s\n", e.what());
    return kSchemaExit;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
