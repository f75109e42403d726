#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "polyfold/branched.hpp"
#include "polyfold/curves.hpp"
#include "polyfold/fibered.hpp"
#include "polyfold/fredholm.hpp"

namespace polyfold::fixtures {

using nlohmann::json;

// Malformed fixture payloads. Maps to CLI exit code 2.
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json load_file(const std::string& path);

Rational parse_rational(const json& j);
// Terms [[exponents...], "p/q"].
Polynomial parse_poly(const json& j, int nvars);
PolyMap parse_poly_map(const json& j, int nvars, int comps);
CornerDomain parse_domain(const json& j);
FiniteGroup parse_group(const json& j);
ChartGroupoid parse_chart(const json& j);
MatQ parse_matrix(const json& j);
SectionExpr parse_section(const json& j, int nvars, int fiber_dim);
DifferentialForm parse_form(const json& j, int nvars);

std::shared_ptr<FiniteGroupoid> parse_finite_groupoid(const json& j);
json finite_groupoid_to_json(const FiniteGroupoid& g);

// Equality of all five structure tables.
bool same_tables(const FiniteGroupoid& a, const FiniteGroupoid& b);

GroupoidFunctor parse_functor_maps(const json& j, const FiniteGroupoid& dom,
                                   const FiniteGroupoid& cod);

struct LoadedFunctor {
  std::shared_ptr<FiniteGroupoid> domain, codomain;
  GroupoidFunctor functor;
};
LoadedFunctor parse_functor(const json& j);

struct LoadedDiagram {
  std::shared_ptr<FiniteGroupoid> left, middle, right;
  Diagram diagram;
};
LoadedDiagram parse_diagram(const json& j);

RefinementWitness parse_witness(const json& j, const FiniteGroupoid& finer_middle,
                                const FiniteGroupoid& coarser_middle,
                                const FiniteGroupoid& left, const FiniteGroupoid& right);

NodalSurface parse_curve(const json& j);

struct LoadedBundle {
  std::shared_ptr<ChartBundle> bundle;
  std::map<std::string, SectionExpr> sections;
};
LoadedBundle parse_chart_bundle(const json& j);

struct LoadedMultisection {
  std::shared_ptr<ChartBundle> bundle;
  Multisection lambda;
};
LoadedMultisection parse_multisection_fixture(const json& j);
Multisection parse_multisection(const json& j, const ChartBundle& bundle);

struct LoadedBranched {
  std::shared_ptr<ChartGroupoid> chart;
  BranchedSubgroupoid subgroupoid;
  std::map<std::string, DifferentialForm> forms;
};
LoadedBranched parse_branched(const json& j);

struct LoadedProblem {
  std::shared_ptr<ToyFredholmProblem> problem;
  Multisection lambda;
  std::map<std::string, DifferentialForm> forms;
};
LoadedProblem parse_problem(const json& j);

// Deterministic serialization helpers: rationals "p/q", floats with 17
// significant digits.
std::string rational_str(const Rational& r);
std::string double_str(double v);

}  // namespace polyfold::fixtures
