#include "polyfold/fixtures.hpp"

#include <cstdio>
#include <fstream>

namespace polyfold::fixtures {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw SchemaError("fixture: " + msg); }

const json& need(const json& j, const std::string& key) {
  auto it = j.find(key);
  if (it == j.end()) fail("missing field '" + key + "'");
  return *it;
}

}  // namespace

json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    fail("parse error in " + path + ": " + e.what());
  }
  return j;
}

Rational parse_rational(const json& j) {
  try {
    if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
    if (j.is_string()) return Rational::parse(j.get<std::string>());
  } catch (const std::exception& e) {
    fail(std::string("bad rational: ") + e.what());
  }
  fail("rational must be an integer or a 'p/q' string");
}

Polynomial parse_poly(const json& j, int nvars) {
  if (!j.is_array()) fail("polynomial must be a list of [exponents, coeff] terms");
  Polynomial p(nvars);
  for (const auto& term : j) {
    if (!term.is_array() || term.size() != 2) fail("polynomial term must be [exponents, coeff]");
    Polynomial::Exponents e;
    for (const auto& x : term[0]) e.push_back(x.get<std::uint32_t>());
    if (int(e.size()) != nvars) fail("polynomial exponent arity mismatch");
    p.add_term(e, parse_rational(term[1]));
  }
  return p;
}

PolyMap parse_poly_map(const json& j, int nvars, int comps) {
  if (!j.is_array() || int(j.size()) != comps) fail("polynomial map component count");
  PolyMap f;
  for (const auto& c : j) f.push_back(parse_poly(c, nvars));
  return f;
}

CornerDomain parse_domain(const json& j) {
  if (!j.is_array() || j.empty()) fail("domain must be a nonempty coordinate list");
  CornerDomain d;
  for (const auto& c : j) {
    CoordSpec spec;
    spec.lo = parse_rational(need(c, "lo"));
    spec.hi = parse_rational(need(c, "hi"));
    spec.lo_face = c.value("lo_face", false);
    spec.hi_face = c.value("hi_face", false);
    d.coords.push_back(spec);
  }
  std::string why;
  if (!d.is_valid(&why)) fail("bad domain: " + why);
  return d;
}

FiniteGroup parse_group(const json& j) {
  if (j.is_string()) {
    std::string name = j.get<std::string>();
    if (name == "trivial") return FiniteGroup::cyclic(1);
    if (name == "z2") return FiniteGroup::cyclic(2);
    if (name == "z3") return FiniteGroup::cyclic(3);
    if (name == "z4") return FiniteGroup::cyclic(4);
    if (name == "v4") return FiniteGroup::klein_four();
    if (name == "s3") return FiniteGroup::symmetric3();
    fail("unknown group name '" + name + "'");
  }
  FiniteGroup g;
  for (const auto& e : need(j, "elements")) g.elements.push_back(e.get<std::string>());
  for (const auto& row : need(j, "table")) {
    if (!row.is_array() || row.size() != 3) fail("group table rows are [g, h, gh]");
    g.table[{row[0].get<std::string>(), row[1].get<std::string>()}] =
        row[2].get<std::string>();
  }
  std::string why;
  if (!g.is_valid(&why)) fail("bad group: " + why);
  return g;
}

ChartGroupoid parse_chart(const json& j) {
  ChartGroupoid cg;
  cg.domain = parse_domain(need(j, "domain"));
  cg.group = parse_group(need(j, "group"));
  const json& act = need(j, "action");
  for (const auto& g : cg.group.elements) {
    auto it = act.find(g);
    if (it == act.end()) fail("missing action for group element " + g);
    cg.action[g] = parse_poly_map(*it, cg.dim(), cg.dim());
  }
  std::string why;
  if (!cg.validate(&why)) fail("bad chart: " + why);
  return cg;
}

MatQ parse_matrix(const json& j) {
  if (!j.is_array() || j.empty()) fail("matrix must be a row list");
  int rows = int(j.size());
  int cols = int(j[0].size());
  MatQ m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    if (int(j[r].size()) != cols) fail("ragged matrix");
    for (int c = 0; c < cols; ++c) m(r, c) = parse_rational(j[r][c]);
  }
  return m;
}

SectionExpr parse_section(const json& j, int nvars, int fiber_dim) {
  if (j.is_object() && j.contains("bump")) {
    const json& b = j["bump"];
    BumpBox bump;
    for (const auto& c : need(b, "center")) bump.center.push_back(parse_rational(c));
    for (const auto& r : need(b, "radius")) bump.radius.push_back(parse_rational(r));
    if (int(bump.center.size()) != nvars || int(bump.radius.size()) != nvars)
      fail("bump arity mismatch");
    VecQ vec;
    for (const auto& v : need(b, "vector")) vec.push_back(parse_rational(v));
    if (int(vec.size()) != fiber_dim) fail("bump vector dimension mismatch");
    return SectionExpr::bump_vector(bump, vec);
  }
  const json& polys = j.is_object() ? need(j, "polys") : j;
  return SectionExpr::from_polys(parse_poly_map(polys, nvars, fiber_dim));
}

DifferentialForm parse_form(const json& j, int nvars) {
  int degree = need(j, "degree").get<int>();
  DifferentialForm f(nvars, degree);
  for (const auto& term : need(j, "terms")) {
    DifferentialForm::Index idx;
    for (const auto& i : need(term, "idx")) idx.push_back(i.get<int>());
    f.add(idx, parse_poly(need(term, "coef"), nvars));
  }
  return f;
}

std::shared_ptr<FiniteGroupoid> parse_finite_groupoid(const json& j) {
  auto out = std::make_shared<FiniteGroupoid>();
  if (j.contains("group") && j.contains("action")) {
    // Action-groupoid form: carrier + group + (g, x) -> y triples.
    FiniteGroup g = parse_group(j["group"]);
    std::vector<ObjId> carrier;
    for (const auto& o : need(j, "objects")) carrier.push_back(o.get<std::string>());
    std::map<std::pair<std::string, ObjId>, ObjId> action;
    for (const auto& row : j["action"]) {
      if (!row.is_array() || row.size() != 3) fail("action rows are [g, x, y]");
      action[{row[0].get<std::string>(), row[1].get<std::string>()}] =
          row[2].get<std::string>();
    }
    try {
      *out = action_groupoid(g, carrier, action);
    } catch (const std::invalid_argument& e) {
      fail(e.what());
    }
    return out;
  }
  for (const auto& o : need(j, "objects")) out->objects.push_back(o.get<std::string>());
  out->sort_objects();
  for (const auto& m : need(j, "morphisms"))
    out->morphisms[need(m, "id").get<std::string>()] =
        Morphism{need(m, "id").get<std::string>(), need(m, "src").get<std::string>(),
                 need(m, "tgt").get<std::string>()};
  for (const auto& [x, v] : need(j, "identity").items())
    out->identity[x] = v.get<std::string>();
  for (const auto& [m, v] : need(j, "inverse").items()) out->inverse[m] = v.get<std::string>();
  for (const auto& row : need(j, "compose")) {
    if (!row.is_array() || row.size() != 3) fail("compose rows are [g, h, g∘h]");
    out->compose_table[{row[0].get<std::string>(), row[1].get<std::string>()}] =
        row[2].get<std::string>();
  }
  return out;
}

json finite_groupoid_to_json(const FiniteGroupoid& g) {
  json j;
  j["kind"] = "groupoid";
  j["objects"] = g.objects;
  json morphisms = json::array();
  for (const auto& [id, m] : g.morphisms)
    morphisms.push_back({{"id", id}, {"src", m.src}, {"tgt", m.tgt}});
  j["morphisms"] = morphisms;
  json identity = json::object();
  for (const auto& [x, m] : g.identity) identity[x] = m;
  j["identity"] = identity;
  json inverse = json::object();
  for (const auto& [m, i] : g.inverse) inverse[m] = i;
  j["inverse"] = inverse;
  json compose = json::array();
  for (const auto& [pair, res] : g.compose_table)
    compose.push_back({pair.first, pair.second, res});
  j["compose"] = compose;
  return j;
}

bool same_tables(const FiniteGroupoid& a, const FiniteGroupoid& b) {
  auto mor_equal = [&] {
    if (a.morphisms.size() != b.morphisms.size()) return false;
    for (const auto& [id, m] : a.morphisms) {
      auto it = b.morphisms.find(id);
      if (it == b.morphisms.end() || it->second.src != m.src || it->second.tgt != m.tgt)
        return false;
    }
    return true;
  };
  return a.objects == b.objects && mor_equal() && a.identity == b.identity &&
         a.inverse == b.inverse && a.compose_table == b.compose_table;
}

GroupoidFunctor parse_functor_maps(const json& j, const FiniteGroupoid& dom,
                                   const FiniteGroupoid& cod) {
  GroupoidFunctor f;
  f.domain = &dom;
  f.codomain = &cod;
  for (const auto& [x, y] : need(j, "objects").items()) f.object_map[x] = y.get<std::string>();
  for (const auto& [m, n] : need(j, "morphisms").items())
    f.morphism_map[m] = n.get<std::string>();
  std::string why;
  if (!f.is_valid(&why)) fail("bad functor: " + why);
  return f;
}

LoadedFunctor parse_functor(const json& j) {
  LoadedFunctor out;
  out.domain = parse_finite_groupoid(need(j, "domain"));
  out.codomain = parse_finite_groupoid(need(j, "codomain"));
  out.functor = parse_functor_maps(j, *out.domain, *out.codomain);
  return out;
}

LoadedDiagram parse_diagram(const json& j) {
  LoadedDiagram out;
  out.left = parse_finite_groupoid(need(j, "left"));
  out.middle = parse_finite_groupoid(need(j, "middle"));
  out.right = parse_finite_groupoid(need(j, "right"));
  out.diagram.left = out.left;
  out.diagram.middle = out.middle;
  out.diagram.right = out.right;
  out.diagram.back = parse_functor_maps(need(j, "back"), *out.middle, *out.left);
  out.diagram.forward = parse_functor_maps(need(j, "forward"), *out.middle, *out.right);
  std::string why;
  if (!out.diagram.is_valid(&why)) fail("bad diagram: " + why);
  return out;
}

RefinementWitness parse_witness(const json& j, const FiniteGroupoid& finer_middle,
                                const FiniteGroupoid& coarser_middle,
                                const FiniteGroupoid& left, const FiniteGroupoid& right) {
  RefinementWitness w;
  w.H = parse_functor_maps(need(j, "H"), finer_middle, coarser_middle);
  for (const auto& [x, m] : need(j, "tau_left").items())
    w.tau_left.component[x] = m.get<std::string>();
  for (const auto& [x, m] : need(j, "tau_right").items())
    w.tau_right.component[x] = m.get<std::string>();
  (void)left;
  (void)right;
  return w;
}

NodalSurface parse_curve(const json& j) {
  NodalSurface s;
  for (const auto& c : need(j, "components"))
    s.components.push_back({need(c, "id").get<std::string>(), need(c, "genus").get<int>()});
  if (j.contains("marked"))
    for (const auto& m : j["marked"])
      s.marked.push_back({need(m, "point").get<std::string>(),
                          need(m, "comp").get<std::string>()});
  if (j.contains("nodes"))
    for (const auto& n : j["nodes"]) {
      if (!n.is_array() || n.size() != 2) fail("nodes are pairs of point refs");
      s.nodes.push_back({{need(n[0], "point").get<std::string>(),
                          need(n[0], "comp").get<std::string>()},
                         {need(n[1], "point").get<std::string>(),
                          need(n[1], "comp").get<std::string>()}});
    }
  std::string why;
  if (!s.is_valid(&why)) fail("bad surface: " + why);
  return s;
}

LoadedBundle parse_chart_bundle(const json& j) {
  LoadedBundle out;
  out.bundle = std::make_shared<ChartBundle>();
  out.bundle->base = parse_chart(need(j, "chart"));
  out.bundle->fiber_dim = need(j, "fiber_dim").get<int>();
  for (const auto& g : out.bundle->base.group.elements) {
    const json& mu = need(j, "mu");
    auto it = mu.find(g);
    if (it == mu.end()) fail("missing transport for " + g);
    out.bundle->mu[g] = parse_matrix(*it);
  }
  auto rep = out.bundle->validate();
  if (!rep.ok) fail("bad bundle: " + rep.failure + ": " + rep.detail);
  if (j.contains("sections"))
    for (const auto& [name, s] : j["sections"].items())
      out.sections.emplace(name,
                           parse_section(s, out.bundle->dim(), out.bundle->fiber_dim));
  return out;
}

Multisection parse_multisection(const json& j, const ChartBundle& bundle) {
  std::vector<WeightedSection> sections;
  for (const auto& s : need(j, "sections")) {
    WeightedSection ws;
    ws.weight = parse_rational(need(s, "weight"));
    ws.section = parse_section(s, bundle.dim(), bundle.fiber_dim);
    ws.is_plus = s.value("is_plus", true);
    sections.push_back(std::move(ws));
  }
  Multisection lam(&bundle, std::move(sections));
  std::string why;
  if (!lam.validate(&why)) fail("bad multisection: " + why);
  return lam;
}

LoadedMultisection parse_multisection_fixture(const json& j) {
  LoadedMultisection out{parse_chart_bundle(j).bundle, {}};
  out.lambda = parse_multisection(need(j, "multisection"), *out.bundle);
  return out;
}

LoadedBranched parse_branched(const json& j) {
  LoadedBranched out;
  out.chart = std::make_shared<ChartGroupoid>(parse_chart(need(j, "chart")));
  out.subgroupoid.chart = out.chart.get();
  const json& branches = need(j, "branches");
  for (const auto& b : branches) {
    Branch br;
    for (const auto& iv : need(b, "ref")) {
      if (!iv.is_array() || iv.size() != 2) fail("branch ref intervals are [lo, hi]");
      br.ref.push_back({parse_rational(iv[0]), parse_rational(iv[1])});
    }
    br.param = parse_poly_map(need(b, "param"), int(br.ref.size()), out.chart->dim());
    br.orientation = b.value("orientation", 1);
    out.subgroupoid.branches.push_back(std::move(br));
  }
  for (const auto& w : need(j, "weights"))
    out.subgroupoid.weights.push_back(parse_rational(w));
  std::string why;
  if (!out.subgroupoid.validate(&why)) fail("bad branched subgroupoid: " + why);
  if (j.contains("forms"))
    for (const auto& [name, f] : j["forms"].items())
      out.forms.emplace(name, parse_form(f, out.chart->dim()));
  return out;
}

LoadedProblem parse_problem(const json& j) {
  LoadedProblem out;
  out.problem = std::make_shared<ToyFredholmProblem>();
  auto loaded = parse_chart_bundle(j);
  out.problem->bundle = *loaded.bundle;
  out.problem->section =
      parse_section(need(j, "section"), out.problem->bundle.dim(),
                    out.problem->bundle.fiber_dim);
  if (j.contains("window")) {
    Box w;
    for (const auto& iv : j["window"]) {
      if (!iv.is_array() || iv.size() != 2) fail("window intervals are [lo, hi]");
      w.push_back({parse_rational(iv[0]), parse_rational(iv[1])});
    }
    out.problem->window = w;
  }
  if (j.contains("norm")) {
    std::string name = j["norm"].get<std::string>();
    if (name == "euclidean")
      out.problem->norm = AuxiliaryNorm::euclidean();
    else
      fail("unknown norm '" + name + "'");
  }
  std::string why;
  if (!out.problem->validate(&why)) fail("bad problem: " + why);
  if (j.contains("multisection"))
    out.lambda = parse_multisection(j["multisection"], out.problem->bundle);
  else
    out.lambda = Multisection::trivial(out.problem->bundle);
  if (j.contains("forms"))
    for (const auto& [name, f] : j["forms"].items())
      out.forms.emplace(name, parse_form(f, out.problem->bundle.dim()));
  return out;
}

std::string rational_str(const Rational& r) { return r.str(); }

std::string double_str(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace polyfold::fixtures
