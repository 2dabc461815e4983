#include "cgm/encoder.hpp"

namespace cgm {

InvalidModel::InvalidModel(std::vector<Diagnostic> diagnostics)
    : std::runtime_error([&] {
        std::string msg = "invalid model";
        for (const auto& d : diagnostics) msg += "; " + d.message;
        return msg;
      }()),
      diagnostics_(std::move(diagnostics)) {}

namespace {

Formula edge_formula(const CgmModel& model, const RelationEdge& edge) {
  return std::visit(
      [&](const auto& e) -> Formula {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, Contribution>) {
          return Formula::implication(Formula::prop(e.source), Formula::prop(e.target));
        } else if constexpr (std::is_same_v<T, Conflict>) {
          return !(Formula::prop(e.a) && Formula::prop(e.b));
        } else if constexpr (std::is_same_v<T, Binding>) {
          const Refinement* r1 = model.find_refinement(e.first);
          const Refinement* r2 = model.find_refinement(e.second);
          return Formula::implication(Formula::prop(r1->target) && Formula::prop(r2->target),
                                      Formula::equivalence(Formula::prop(e.first), Formula::prop(e.second)));
        } else {
          return Formula::constant(true);
        }
      },
      edge);
}

}  // namespace

std::vector<Conjunct> encode_conjuncts(const CgmModel& input) {
  if (auto diags = validate_structure(input); !diags.empty()) throw InvalidModel(std::move(diags));
  CgmModel model = canonical(input);
  ModelIndex index(model);
  std::vector<Conjunct> out;

  for (const auto& e : model.elements) {
    const auto& refs = index.refinements_of(e.id);
    if (refs.empty()) continue;
    std::vector<Formula> alternatives;
    for (const Refinement* r : refs) alternatives.push_back(Formula::prop(r->id));
    out.push_back({Formula::equivalence(Formula::prop(e.id), Formula::disjunction(alternatives)), "a:" + e.id});
  }
  for (const auto& r : model.refinements) {
    std::vector<Formula> sources;
    for (const auto& s : r.sources) sources.push_back(Formula::prop(s));
    out.push_back({Formula::equivalence(Formula::prop(r.id), Formula::conjunction(sources)), "b:" + r.id});
  }
  for (const auto& edge : model.edges) {
    if (std::holds_alternative<Preference>(edge)) continue;
    out.push_back({edge_formula(model, edge), "edge:" + describe(edge)});
  }
  for (const auto& c : model.constraints) out.push_back({c, "constraint:" + to_string(c)});
  for (const auto& [id, mark] : model.assertions) {
    Formula p = Formula::prop(id);
    out.push_back({mark == Mark::Satisfied ? p : !p, "assert:" + id});
  }
  for (const auto& attr : model.attributes) {
    LinearTerm sum = LinearTerm::variable(attr);
    for (const auto& e : model.elements) {
      auto it = e.attr_values.find(attr);
      if (it == e.attr_values.end()) continue;
      std::string var = contribution_variable(attr, e.id);
      LinearTerm v = LinearTerm::variable(var);
      out.push_back({Formula::implication(Formula::prop(e.id), Formula::linear(v, Relation::Equal, it->second.when_satisfied)),
                     "attr:" + var});
      out.push_back(
          {Formula::implication(!Formula::prop(e.id), Formula::linear(v, Relation::Equal, it->second.when_denied)),
           "attr:" + var});
      sum.add(var, -1);
    }
    out.push_back({Formula::linear(sum, Relation::Equal, 0), "attr:" + attr});
  }
  return out;
}

Formula encode(const CgmModel& model) {
  std::vector<Formula> parts;
  for (auto& c : encode_conjuncts(model)) parts.push_back(std::move(c.formula));
  return Formula::conjunction(std::move(parts));
}

Problem make_problem(const CgmModel& model) {
  ModelIndex index(model);
  return {encode(model), index.boolean_variables(), index.numeric_variables()};
}

AssertionSplit make_problem_without_assertions(const CgmModel& model) {
  ModelIndex index(model);
  AssertionSplit split;
  std::vector<Formula> parts;
  for (auto& c : encode_conjuncts(model)) {
    if (c.origin.rfind("assert:", 0) == 0) {
      split.assertions.push_back(c.formula);
      split.asserted.push_back(c.origin.substr(7));
    } else {
      parts.push_back(std::move(c.formula));
    }
  }
  split.problem = {Formula::conjunction(std::move(parts)), index.boolean_variables(), index.numeric_variables()};
  return split;
}

}  // namespace cgm
