#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "cgm/formula.hpp"
#include "cgm/rational.hpp"

namespace cgm {

using ElementId = std::string;
using RefinementId = std::string;
using AttrName = std::string;

enum class ElementKind { Goal, Assumption };
enum class Mark { Satisfied, Denied };
enum class Polarity { Minimize, Maximize };

// Structural role of an element; derived from the refinement graph.
enum class Classification { Requirement, IntermediateGoal, Task, DomainAssumption };

const char* to_string(ElementKind kind);
const char* to_string(Mark mark);
const char* to_string(Polarity polarity);
const char* to_string(Classification classification);

struct AttrValue {
  Rational when_satisfied;
  Rational when_denied = 0;
  friend bool operator==(const AttrValue&, const AttrValue&) = default;
};

struct Element {
  ElementId id;
  ElementKind kind = ElementKind::Goal;
  std::string label;
  Rational reward = 0;
  Rational penalty = 0;
  std::map<AttrName, AttrValue> attr_values;
  friend bool operator==(const Element&, const Element&) = default;
};

struct Refinement {
  RefinementId id;
  ElementId target;
  std::vector<ElementId> sources;
  friend bool operator==(const Refinement&, const Refinement&) = default;
};

// Satisfying `source` forces `target`.
struct Contribution {
  ElementId source, target;
  friend auto operator<=>(const Contribution&, const Contribution&) = default;
};
// `a` and `b` cannot both hold; stored with a <= b.
struct Conflict {
  ElementId a, b;
  friend auto operator<=>(const Conflict&, const Conflict&) = default;
};
// When both targets hold, `first` is chosen iff `second` is.
struct Binding {
  RefinementId first, second;
  friend auto operator<=>(const Binding&, const Binding&) = default;
};
// Soft: unsatisfied when `other` holds without `preferred`.
struct Preference {
  std::string preferred, other;
  friend auto operator<=>(const Preference&, const Preference&) = default;
};

using RelationEdge = std::variant<Contribution, Conflict, Binding, Preference>;

Conflict make_conflict(const ElementId& x, const ElementId& y);
std::string describe(const RelationEdge& edge);

struct ObjectiveRef {
  std::string name;
  Polarity polarity = Polarity::Minimize;
  friend bool operator==(const ObjectiveRef&, const ObjectiveRef&) = default;
};

struct CgmModel {
  std::vector<Element> elements;
  std::vector<Refinement> refinements;
  std::vector<RelationEdge> edges;
  std::vector<AttrName> attributes;
  std::vector<Formula> constraints;
  std::map<ElementId, Mark> assertions;
  // Default lexicographic objective list declared with the model.
  std::vector<ObjectiveRef> objectives;

  const Element* find_element(const ElementId& id) const;
  const Refinement* find_refinement(const RefinementId& id) const;
  bool has_attribute(const AttrName& name) const;

  friend bool operator==(const CgmModel&, const CgmModel&) = default;
};

// Same model with every list sorted by id; refinement sources keep their order.
CgmModel canonical(const CgmModel& model);
// Equality up to declaration order (sources compared as sets).
bool equivalent(const CgmModel& lhs, const CgmModel& rhs);

// Per-element contribution variable of a numeric attribute.
std::string contribution_variable(const AttrName& attribute, const ElementId& element);

// Read-only structural queries over a model. Holds a reference; the model
// must outlive it.
class ModelIndex {
 public:
  explicit ModelIndex(const CgmModel& model);

  const CgmModel& model() const { return model_; }
  const std::vector<const Refinement*>& refinements_of(const ElementId& element) const;
  bool is_root(const ElementId& element) const;
  bool is_leaf(const ElementId& element) const;
  std::optional<Classification> classify(const ElementId& element) const;

  std::vector<ElementId> requirements() const;
  // Unasserted requirements.
  std::vector<ElementId> nice_to_have() const;
  std::vector<ElementId> tasks() const;

  // Element ids sorted, then refinement ids sorted.
  std::vector<std::string> boolean_variables() const;
  // Attribute globals followed by their contribution variables.
  std::vector<std::string> numeric_variables() const;

 private:
  const CgmModel& model_;
  std::map<ElementId, std::vector<const Refinement*>> refinements_of_;
  std::set<ElementId> used_as_source_;
};

struct Diagnostic {
  std::string rule;     // e.g. "cycle", "target-kind", "unknown-id"
  std::string subject;  // offending element/refinement id
  std::string message;
  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

std::vector<Diagnostic> validate_structure(const CgmModel& model);

using Realization = Assignment;

struct Violation {
  std::string condition;  // "a", "b", "edge", "constraint", "assertion", "attribute"
  std::string origin;     // element, refinement, edge or constraint that failed
  std::string message;
};

struct CheckResult {
  std::vector<Violation> violations;
  bool valid() const { return violations.empty(); }
};

// Evaluates the realization conditions clause by clause. Throws
// MissingAssignment if `candidate` is not total over the model's variables.
CheckResult check_realization(const CgmModel& model, const Realization& candidate);

// Sub-assignment over variables present in both models.
Realization restrict(const Realization& realization, const CgmModel& from, const CgmModel& to);

// Fills variables of `model` missing from `partial`: propositions false,
// attribute variables from the element values (globals as sums).
Realization complete_with_defaults(const Realization& partial, const CgmModel& model);

class UnknownId : public std::runtime_error {
 public:
  explicit UnknownId(const std::string& id) : std::runtime_error("unknown id '" + id + "'"), id_(id) {}
  const std::string& id() const { return id_; }

 private:
  std::string id_;
};

class StructureBroken : public std::runtime_error {
 public:
  explicit StructureBroken(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

namespace delta {
struct AddElement { Element element; };
struct RemoveElement { ElementId id; };
struct ReplaceElement { Element element; };
struct AddRefinement { Refinement refinement; };
struct RemoveRefinement { RefinementId id; };
struct AddSource { RefinementId refinement; ElementId element; };
struct RemoveSource { RefinementId refinement; ElementId element; };
struct AddEdge { RelationEdge edge; };
struct RemoveEdge { RelationEdge edge; };
struct AddAttribute { AttrName name; };
struct RemoveAttribute { AttrName name; };
struct AddConstraint { Formula constraint; };
struct RemoveConstraint { Formula constraint; };
struct SetAssertion { ElementId element; Mark mark; };
struct ClearAssertion { ElementId element; };
}  // namespace delta

using MutationStep =
    std::variant<delta::AddElement, delta::RemoveElement, delta::ReplaceElement, delta::AddRefinement,
                 delta::RemoveRefinement, delta::AddSource, delta::RemoveSource, delta::AddEdge,
                 delta::RemoveEdge, delta::AddAttribute, delta::RemoveAttribute, delta::AddConstraint,
                 delta::RemoveConstraint, delta::SetAssertion, delta::ClearAssertion>;

// Returns the mutated copy. Throws UnknownId for steps naming missing ids and
// StructureBroken when the result fails validate_structure.
CgmModel apply_delta(const CgmModel& model, const std::vector<MutationStep>& delta);

// Steps that undo `delta` when applied to apply_delta(model, delta).
std::vector<MutationStep> inverse_delta(const CgmModel& model, const std::vector<MutationStep>& delta);

}  // namespace cgm
