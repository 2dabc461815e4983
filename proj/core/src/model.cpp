#include "cgm/model.hpp"

#include <algorithm>
#include <functional>

namespace cgm {

const char* to_string(ElementKind kind) { return kind == ElementKind::Goal ? "goal" : "assumption"; }
const char* to_string(Mark mark) { return mark == Mark::Satisfied ? "satisfied" : "denied"; }
const char* to_string(Polarity polarity) {
  return polarity == Polarity::Minimize ? "minimize" : "maximize";
}
const char* to_string(Classification classification) {
  switch (classification) {
    case Classification::Requirement: return "requirement";
    case Classification::IntermediateGoal: return "intermediate goal";
    case Classification::Task: return "task";
    case Classification::DomainAssumption: return "domain assumption";
  }
  return "?";
}

Conflict make_conflict(const ElementId& x, const ElementId& y) {
  return x <= y ? Conflict{x, y} : Conflict{y, x};
}

std::string describe(const RelationEdge& edge) {
  return std::visit(
      [](const auto& e) -> std::string {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, Contribution>) return "contribution " + e.source + " -> " + e.target;
        if constexpr (std::is_same_v<T, Conflict>) return "conflict " + e.a + " >< " + e.b;
        if constexpr (std::is_same_v<T, Binding>) return "bind " + e.first + " = " + e.second;
        if constexpr (std::is_same_v<T, Preference>) return "prefer " + e.preferred + " > " + e.other;
      },
      edge);
}

const Element* CgmModel::find_element(const ElementId& id) const {
  for (const auto& e : elements) {
    if (e.id == id) return &e;
  }
  return nullptr;
}

const Refinement* CgmModel::find_refinement(const RefinementId& id) const {
  for (const auto& r : refinements) {
    if (r.id == id) return &r;
  }
  return nullptr;
}

bool CgmModel::has_attribute(const AttrName& name) const {
  return std::find(attributes.begin(), attributes.end(), name) != attributes.end();
}

CgmModel canonical(const CgmModel& model) {
  CgmModel out = model;
  std::sort(out.elements.begin(), out.elements.end(),
            [](const Element& a, const Element& b) { return a.id < b.id; });
  std::sort(out.refinements.begin(), out.refinements.end(),
            [](const Refinement& a, const Refinement& b) { return a.id < b.id; });
  std::sort(out.edges.begin(), out.edges.end());
  std::sort(out.attributes.begin(), out.attributes.end());
  std::stable_sort(out.constraints.begin(), out.constraints.end(),
                   [](const Formula& a, const Formula& b) { return to_string(a) < to_string(b); });
  return out;
}

bool equivalent(const CgmModel& lhs, const CgmModel& rhs) {
  CgmModel a = canonical(lhs);
  CgmModel b = canonical(rhs);
  for (auto* m : {&a, &b}) {
    for (auto& r : m->refinements) std::sort(r.sources.begin(), r.sources.end());
  }
  return a == b;
}

std::string contribution_variable(const AttrName& attribute, const ElementId& element) {
  return attribute + "_" + element;
}

ModelIndex::ModelIndex(const CgmModel& model) : model_(model) {
  for (const auto& r : model.refinements) {
    refinements_of_[r.target].push_back(&r);
    for (const auto& s : r.sources) used_as_source_.insert(s);
  }
}

const std::vector<const Refinement*>& ModelIndex::refinements_of(const ElementId& element) const {
  static const std::vector<const Refinement*> kNone;
  auto it = refinements_of_.find(element);
  return it == refinements_of_.end() ? kNone : it->second;
}

bool ModelIndex::is_root(const ElementId& element) const { return !used_as_source_.count(element); }
bool ModelIndex::is_leaf(const ElementId& element) const { return refinements_of(element).empty(); }

std::optional<Classification> ModelIndex::classify(const ElementId& element) const {
  const Element* e = model_.find_element(element);
  if (!e) return std::nullopt;
  if (e->kind == ElementKind::Assumption) return Classification::DomainAssumption;
  if (is_root(element)) return Classification::Requirement;
  if (is_leaf(element)) return Classification::Task;
  return Classification::IntermediateGoal;
}

std::vector<ElementId> ModelIndex::requirements() const {
  std::vector<ElementId> out;
  for (const auto& e : model_.elements) {
    if (classify(e.id) == Classification::Requirement) out.push_back(e.id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<ElementId> ModelIndex::nice_to_have() const {
  std::vector<ElementId> out;
  for (const auto& id : requirements()) {
    auto it = model_.assertions.find(id);
    if (it == model_.assertions.end()) out.push_back(id);
  }
  return out;
}

std::vector<ElementId> ModelIndex::tasks() const {
  std::vector<ElementId> out;
  for (const auto& e : model_.elements) {
    if (classify(e.id) == Classification::Task) out.push_back(e.id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> ModelIndex::boolean_variables() const {
  std::vector<std::string> elements, refinements;
  for (const auto& e : model_.elements) elements.push_back(e.id);
  for (const auto& r : model_.refinements) refinements.push_back(r.id);
  std::sort(elements.begin(), elements.end());
  std::sort(refinements.begin(), refinements.end());
  elements.insert(elements.end(), refinements.begin(), refinements.end());
  return elements;
}

std::vector<std::string> ModelIndex::numeric_variables() const {
  std::vector<const Element*> sorted;
  for (const auto& e : model_.elements) sorted.push_back(&e);
  std::sort(sorted.begin(), sorted.end(), [](const Element* a, const Element* b) { return a->id < b->id; });
  std::vector<std::string> out;
  for (const auto& attr : model_.attributes) {
    out.push_back(attr);
    for (const Element* e : sorted) {
      if (e->attr_values.count(attr)) out.push_back(contribution_variable(attr, e->id));
    }
  }
  return out;
}

namespace {

bool is_builtin_objective(const std::string& name) {
  return name == "penaltyMinusReward" || name == "numUnsatRequirements" || name == "numSatTasks" ||
         name == "numUnsatPrefs";
}

}  // namespace

std::vector<Diagnostic> validate_structure(const CgmModel& model) {
  std::vector<Diagnostic> out;
  auto report = [&](std::string rule, std::string subject, std::string message) {
    out.push_back({std::move(rule), std::move(subject), std::move(message)});
  };

  std::set<std::string> element_ids, refinement_ids;
  for (const auto& e : model.elements) {
    if (e.id.empty()) report("empty-id", e.id, "element with empty id");
    if (!element_ids.insert(e.id).second) report("duplicate-id", e.id, "element '" + e.id + "' declared twice");
  }
  for (const auto& r : model.refinements) {
    if (element_ids.count(r.id)) {
      report("duplicate-id", r.id, "refinement '" + r.id + "' reuses an element id");
    } else if (!refinement_ids.insert(r.id).second) {
      report("duplicate-id", r.id, "refinement '" + r.id + "' declared twice");
    }
  }

  bool graph_sane = true;
  for (const auto& r : model.refinements) {
    const Element* target = model.find_element(r.target);
    if (!target) {
      report("unknown-id", r.id, "refinement '" + r.id + "' targets unknown element '" + r.target + "'");
      graph_sane = false;
    } else if (target->kind != ElementKind::Goal) {
      report("target-kind", r.id, "refinement '" + r.id + "' targets domain assumption '" + r.target + "'");
    }
    if (r.sources.empty()) report("empty-refinement", r.id, "refinement '" + r.id + "' has no sources");
    std::set<ElementId> seen;
    for (const auto& s : r.sources) {
      if (!model.find_element(s)) {
        report("unknown-id", r.id, "refinement '" + r.id + "' uses unknown source '" + s + "'");
        graph_sane = false;
      }
      if (!seen.insert(s).second) report("duplicate-source", r.id, "source '" + s + "' repeated in '" + r.id + "'");
    }
  }

  // A refinement lies on a cycle when its target reaches one of its sources
  // going downward (target -> refinement sources -> ...).
  std::map<ElementId, std::vector<ElementId>> children;
  for (const auto& r : model.refinements) {
    for (const auto& s : r.sources) children[r.target].push_back(s);
  }
  for (const auto& r : model.refinements) {
    std::set<ElementId> sources(r.sources.begin(), r.sources.end());
    std::set<ElementId> visited;
    std::vector<ElementId> stack{r.target};
    bool cyclic = sources.count(r.target) > 0;
    while (!stack.empty() && !cyclic) {
      ElementId cur = stack.back();
      stack.pop_back();
      for (const auto& child : children[cur]) {
        if (child == r.target) {
          cyclic = true;
          break;
        }
        if (visited.insert(child).second) stack.push_back(child);
      }
    }
    if (cyclic) report("cycle", r.id, "refinement '" + r.id + "' closes a refinement cycle through '" + r.target + "'");
  }

  std::set<AttrName> attrs;
  for (const auto& a : model.attributes) {
    if (!attrs.insert(a).second) report("duplicate-attribute", a, "attribute '" + a + "' declared twice");
    if (element_ids.count(a) || refinement_ids.count(a)) {
      report("name-clash", a, "attribute '" + a + "' clashes with an element or refinement id");
    }
  }

  ModelIndex index(model);
  for (const auto& e : model.elements) {
    if (e.reward < 0 || e.penalty < 0) report("negative-weight", e.id, "reward and penalty must be >= 0");
    if (graph_sane) {
      auto cls = index.classify(e.id);
      if (e.reward != 0 && cls != Classification::Requirement) {
        report("reward-placement", e.id, "reward on '" + e.id + "', which is not a requirement");
      }
      if (e.penalty != 0 && cls != Classification::Task) {
        report("penalty-placement", e.id, "penalty on '" + e.id + "', which is not a task");
      }
    }
    for (const auto& [attr, value] : e.attr_values) {
      if (!attrs.count(attr)) report("unknown-attribute", e.id, "attribute '" + attr + "' is not declared");
    }
  }

  auto need_element = [&](const std::string& id, const std::string& where) {
    if (!element_ids.count(id)) report("unknown-id", id, where + " references unknown element '" + id + "'");
  };
  for (const auto& edge : model.edges) {
    std::string where = describe(edge);
    std::visit(
        [&](const auto& e) {
          using T = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<T, Contribution>) {
            need_element(e.source, where);
            need_element(e.target, where);
            if (e.source == e.target) report("contribution-endpoints", e.source, "contribution endpoints must differ");
          } else if constexpr (std::is_same_v<T, Conflict>) {
            need_element(e.a, where);
            need_element(e.b, where);
            if (e.a == e.b) report("conflict-endpoints", e.a, "conflict endpoints must differ");
          } else if constexpr (std::is_same_v<T, Binding>) {
            for (const auto& r : {e.first, e.second}) {
              if (!refinement_ids.count(r)) report("unknown-id", r, where + " references unknown refinement '" + r + "'");
            }
            if (e.first == e.second) report("binding-distinct", e.first, "binding must link two distinct refinements");
          } else {
            bool pe = element_ids.count(e.preferred), pr = refinement_ids.count(e.preferred);
            bool oe = element_ids.count(e.other), orr = refinement_ids.count(e.other);
            if (!pe && !pr) report("unknown-id", e.preferred, where + " references unknown '" + e.preferred + "'");
            if (!oe && !orr) report("unknown-id", e.other, where + " references unknown '" + e.other + "'");
            if ((pe && orr) || (pr && oe)) {
              report("preference-kind", e.preferred, "preference must link two elements or two refinements");
            }
          }
        },
        edge);
  }

  for (const auto& [id, mark] : model.assertions) {
    if (!element_ids.count(id)) report("unknown-id", id, "assertion on unknown element '" + id + "'");
  }

  std::set<std::string> numeric;
  for (const auto& v : index.numeric_variables()) numeric.insert(v);
  for (const auto& c : model.constraints) {
    std::set<std::string> props, nums;
    collect_props(c, props);
    collect_numeric(c, nums);
    for (const auto& p : props) {
      if (!element_ids.count(p) && !refinement_ids.count(p)) {
        report("unknown-variable", p, "constraint '" + to_string(c) + "' references unknown proposition '" + p + "'");
      }
    }
    for (const auto& n : nums) {
      if (!numeric.count(n)) {
        report("unknown-variable", n, "constraint '" + to_string(c) + "' references unknown numeric variable '" + n + "'");
      }
    }
  }

  for (const auto& o : model.objectives) {
    if (!is_builtin_objective(o.name) && !attrs.count(o.name)) {
      report("unknown-objective", o.name, "objective '" + o.name + "' is neither builtin nor an attribute");
    }
  }
  return out;
}

namespace {

void require_total(const CgmModel& model, const Realization& candidate) {
  ModelIndex index(model);
  for (const auto& v : index.boolean_variables()) {
    if (!candidate.truth.count(v)) throw MissingAssignment(v);
  }
  for (const auto& v : index.numeric_variables()) {
    if (!candidate.values.count(v)) throw MissingAssignment(v);
  }
}

}  // namespace

CheckResult check_realization(const CgmModel& model, const Realization& candidate) {
  require_total(model, candidate);
  ModelIndex index(model);
  CheckResult result;
  auto truth = [&](const std::string& id) { return candidate.truth.at(id); };
  auto fail = [&](std::string condition, std::string origin, std::string message) {
    result.violations.push_back({std::move(condition), std::move(origin), std::move(message)});
  };

  for (const auto& e : model.elements) {
    const auto& refs = index.refinements_of(e.id);
    if (refs.empty()) continue;
    bool any = std::any_of(refs.begin(), refs.end(), [&](const Refinement* r) { return truth(r->id); });
    if (truth(e.id) != any) {
      fail("a", e.id,
           truth(e.id) ? "'" + e.id + "' is satisfied but none of its refinements is"
                       : "'" + e.id + "' is denied although one of its refinements is satisfied");
    }
  }
  for (const auto& r : model.refinements) {
    bool all = std::all_of(r.sources.begin(), r.sources.end(), [&](const ElementId& s) { return truth(s); });
    if (truth(r.id) != all) {
      fail("b", r.id,
           truth(r.id) ? "'" + r.id + "' is satisfied but not all of its sources are"
                       : "'" + r.id + "' is denied although all of its sources are satisfied");
    }
  }
  for (const auto& edge : model.edges) {
    std::visit(
        [&](const auto& e) {
          using T = std::decay_t<decltype(e)>;
          if constexpr (std::is_same_v<T, Contribution>) {
            if (truth(e.source) && !truth(e.target)) fail("edge", describe(edge), "contribution violated");
          } else if constexpr (std::is_same_v<T, Conflict>) {
            if (truth(e.a) && truth(e.b)) fail("edge", describe(edge), "conflicting elements both satisfied");
          } else if constexpr (std::is_same_v<T, Binding>) {
            const Refinement* r1 = model.find_refinement(e.first);
            const Refinement* r2 = model.find_refinement(e.second);
            if (r1 && r2 && truth(r1->target) && truth(r2->target) && truth(e.first) != truth(e.second)) {
              fail("edge", describe(edge), "bound refinements chosen differently");
            }
          }
        },
        edge);
  }
  for (const auto& [id, mark] : model.assertions) {
    if (truth(id) != (mark == Mark::Satisfied)) {
      fail("assertion", id, "'" + id + "' is asserted " + to_string(mark));
    }
  }
  for (const auto& attr : model.attributes) {
    Rational sum = 0;
    for (const auto& e : model.elements) {
      auto it = e.attr_values.find(attr);
      if (it == e.attr_values.end()) continue;
      std::string var = contribution_variable(attr, e.id);
      Rational expected = truth(e.id) ? it->second.when_satisfied : it->second.when_denied;
      const Rational& actual = candidate.values.at(var);
      if (actual != expected) {
        fail("attribute", var, var + " = " + to_string(actual) + ", expected " + to_string(expected));
      }
      sum += actual;
    }
    if (candidate.values.at(attr) != sum) {
      fail("attribute", attr, attr + " = " + to_string(candidate.values.at(attr)) + ", expected sum " + to_string(sum));
    }
  }
  for (const auto& c : model.constraints) {
    if (!evaluate(c, candidate)) fail("constraint", to_string(c), "constraint violated");
  }
  return result;
}

Realization restrict(const Realization& realization, const CgmModel& from, const CgmModel& to) {
  ModelIndex fi(from), ti(to);
  auto both = [](std::vector<std::string> a, std::vector<std::string> b) {
    std::set<std::string> sa(a.begin(), a.end()), out;
    for (const auto& v : b) {
      if (sa.count(v)) out.insert(v);
    }
    return out;
  };
  auto bools = both(fi.boolean_variables(), ti.boolean_variables());
  auto nums = both(fi.numeric_variables(), ti.numeric_variables());
  Realization out;
  for (const auto& [k, v] : realization.truth) {
    if (bools.count(k)) out.truth.emplace(k, v);
  }
  for (const auto& [k, v] : realization.values) {
    if (nums.count(k)) out.values.emplace(k, v);
  }
  return out;
}

Realization complete_with_defaults(const Realization& partial, const CgmModel& model) {
  ModelIndex index(model);
  Realization out = partial;
  for (const auto& v : index.boolean_variables()) out.truth.try_emplace(v, false);
  for (const auto& attr : model.attributes) {
    Rational sum = 0;
    for (const auto& e : model.elements) {
      auto it = e.attr_values.find(attr);
      if (it == e.attr_values.end()) continue;
      std::string var = contribution_variable(attr, e.id);
      auto [slot, inserted] = out.values.try_emplace(
          var, out.truth.at(e.id) ? it->second.when_satisfied : it->second.when_denied);
      sum += slot->second;
    }
    out.values.try_emplace(attr, sum);
  }
  return out;
}

StructureBroken::StructureBroken(std::vector<Diagnostic> diagnostics)
    : std::runtime_error([&] {
        std::string msg = "model structure broken";
        for (const auto& d : diagnostics) msg += "; " + d.message;
        return msg;
      }()),
      diagnostics_(std::move(diagnostics)) {}

namespace {

Element& element_ref(CgmModel& m, const ElementId& id) {
  for (auto& e : m.elements) {
    if (e.id == id) return e;
  }
  throw UnknownId(id);
}

Refinement& refinement_ref(CgmModel& m, const RefinementId& id) {
  for (auto& r : m.refinements) {
    if (r.id == id) return r;
  }
  throw UnknownId(id);
}

RelationEdge normalize(const RelationEdge& edge) {
  if (const auto* c = std::get_if<Conflict>(&edge)) return make_conflict(c->a, c->b);
  return edge;
}

// Applies one step; returns the inverse step.
std::vector<MutationStep> apply_step(CgmModel& m, const MutationStep& step) {
  return std::visit(
      [&](const auto& s) -> std::vector<MutationStep> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, delta::AddElement>) {
          m.elements.push_back(s.element);
          return {delta::RemoveElement{s.element.id}};
        } else if constexpr (std::is_same_v<T, delta::RemoveElement>) {
          Element old = element_ref(m, s.id);
          std::erase_if(m.elements, [&](const Element& e) { return e.id == s.id; });
          return {delta::AddElement{old}};
        } else if constexpr (std::is_same_v<T, delta::ReplaceElement>) {
          Element& e = element_ref(m, s.element.id);
          Element old = e;
          e = s.element;
          return {delta::ReplaceElement{old}};
        } else if constexpr (std::is_same_v<T, delta::AddRefinement>) {
          m.refinements.push_back(s.refinement);
          return {delta::RemoveRefinement{s.refinement.id}};
        } else if constexpr (std::is_same_v<T, delta::RemoveRefinement>) {
          Refinement old = refinement_ref(m, s.id);
          std::erase_if(m.refinements, [&](const Refinement& r) { return r.id == s.id; });
          return {delta::AddRefinement{old}};
        } else if constexpr (std::is_same_v<T, delta::AddSource>) {
          refinement_ref(m, s.refinement).sources.push_back(s.element);
          return {delta::RemoveSource{s.refinement, s.element}};
        } else if constexpr (std::is_same_v<T, delta::RemoveSource>) {
          auto& sources = refinement_ref(m, s.refinement).sources;
          auto it = std::find(sources.begin(), sources.end(), s.element);
          if (it == sources.end()) throw UnknownId(s.element);
          sources.erase(it);
          return {delta::AddSource{s.refinement, s.element}};
        } else if constexpr (std::is_same_v<T, delta::AddEdge>) {
          m.edges.push_back(normalize(s.edge));
          return {delta::RemoveEdge{s.edge}};
        } else if constexpr (std::is_same_v<T, delta::RemoveEdge>) {
          auto target = normalize(s.edge);
          auto it = std::find(m.edges.begin(), m.edges.end(), target);
          if (it == m.edges.end()) throw UnknownId(describe(target));
          m.edges.erase(it);
          return {delta::AddEdge{target}};
        } else if constexpr (std::is_same_v<T, delta::AddAttribute>) {
          m.attributes.push_back(s.name);
          return {delta::RemoveAttribute{s.name}};
        } else if constexpr (std::is_same_v<T, delta::RemoveAttribute>) {
          auto it = std::find(m.attributes.begin(), m.attributes.end(), s.name);
          if (it == m.attributes.end()) throw UnknownId(s.name);
          m.attributes.erase(it);
          return {delta::AddAttribute{s.name}};
        } else if constexpr (std::is_same_v<T, delta::AddConstraint>) {
          m.constraints.push_back(s.constraint);
          return {delta::RemoveConstraint{s.constraint}};
        } else if constexpr (std::is_same_v<T, delta::RemoveConstraint>) {
          auto it = std::find(m.constraints.begin(), m.constraints.end(), s.constraint);
          if (it == m.constraints.end()) throw UnknownId(to_string(s.constraint));
          m.constraints.erase(it);
          return {delta::AddConstraint{s.constraint}};
        } else if constexpr (std::is_same_v<T, delta::SetAssertion>) {
          element_ref(m, s.element);
          auto it = m.assertions.find(s.element);
          std::vector<MutationStep> inverse;
          if (it == m.assertions.end()) {
            inverse.push_back(delta::ClearAssertion{s.element});
          } else {
            inverse.push_back(delta::SetAssertion{s.element, it->second});
          }
          m.assertions[s.element] = s.mark;
          return inverse;
        } else {
          element_ref(m, s.element);
          auto it = m.assertions.find(s.element);
          if (it == m.assertions.end()) return {};
          Mark old = it->second;
          m.assertions.erase(it);
          return {delta::SetAssertion{s.element, old}};
        }
      },
      step);
}

}  // namespace

CgmModel apply_delta(const CgmModel& model, const std::vector<MutationStep>& delta) {
  CgmModel out = model;
  for (const auto& step : delta) apply_step(out, step);
  if (auto diags = validate_structure(out); !diags.empty()) throw StructureBroken(std::move(diags));
  return out;
}

std::vector<MutationStep> inverse_delta(const CgmModel& model, const std::vector<MutationStep>& delta) {
  CgmModel work = model;
  std::vector<MutationStep> inverse;
  for (const auto& step : delta) {
    auto undo = apply_step(work, step);
    inverse.insert(inverse.begin(), undo.begin(), undo.end());
  }
  return inverse;
}

}  // namespace cgm
