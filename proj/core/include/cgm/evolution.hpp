#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgm/model.hpp"
#include "cgm/objective.hpp"
#include "cgm/solver.hpp"

namespace cgm {

enum class InterestScope { All, Tasks, Explicit };

struct Interest {
  InterestScope scope = InterestScope::All;
  std::set<ElementId> ids;  // Explicit only

  static Interest all() { return {}; }
  static Interest tasks() { return {InterestScope::Tasks, {}}; }
  static Interest of(std::set<ElementId> ids) { return {InterestScope::Explicit, std::move(ids)}; }
};

// How new elements enter familiarity: satisfied ones (the default) or, as a
// variant, denied ones.
enum class FamiliarityVariant { CountNewSatisfied, CountNewDenied };

using Weights = std::map<ElementId, Rational>;

struct EvolutionContext {
  CgmModel old_model;
  CgmModel new_model;
  Realization old_realization;  // restricted to new_model
  std::set<ElementId> interest;
  std::set<ElementId> common;
  std::set<ElementId> added;
  std::set<ElementId> removed;
  std::optional<Weights> weights;
  FamiliarityVariant variant = FamiliarityVariant::CountNewSatisfied;
};

class NonTaskInterest : public std::runtime_error {
 public:
  explicit NonTaskInterest(const ElementId& id)
      : std::runtime_error("element of interest '" + id + "' is not a task of the new model"), id_(id) {}
  const ElementId& id() const { return id_; }

 private:
  ElementId id_;
};

class MissingWeight : public std::runtime_error {
 public:
  explicit MissingWeight(const ElementId& id) : std::runtime_error("no weight for '" + id + "'"), id_(id) {}
  const ElementId& id() const { return id_; }

 private:
  ElementId id_;
};

// Resolves the interest scope and partitions it by id identity. The
// realization is left empty. Throws UnknownId for explicit ids in neither
// model.
EvolutionContext diff(const CgmModel& old_model, const CgmModel& new_model, const Interest& interest = {});

// diff plus the old realization restricted to the new model.
EvolutionContext make_context(const CgmModel& old_model, const Realization& old_realization,
                              const CgmModel& new_model, const Interest& interest = {},
                              std::optional<Weights> weights = std::nullopt);

// Element penalty when positive, else 1, for every element of either model.
Weights default_weights(const CgmModel& old_model, const CgmModel& new_model);

Rational familiarity_cost(const EvolutionContext& ctx, const Realization& candidate);
Rational weighted_familiarity_cost(const EvolutionContext& ctx, const Realization& candidate);
Rational change_effort(const EvolutionContext& ctx, const Realization& candidate);
Rational weighted_change_effort(const EvolutionContext& ctx, const Realization& candidate);
Rational ernst_familiarity_cost(const EvolutionContext& ctx, const Realization& candidate);

enum class CriterionKind { Familiarity, WeightedFamiliarity, ChangeEffort, WeightedChangeEffort, ErnstFamiliarity };

const char* to_string(CriterionKind kind);
std::optional<CriterionKind> parse_criterion(const std::string& name);

// The criterion as an affine objective over the new model's propositions,
// with the old realization folded into constants.
ObjectiveSpec criterion_objective(const EvolutionContext& ctx, CriterionKind kind);
Rational criterion_value(const EvolutionContext& ctx, CriterionKind kind, const Realization& candidate);

struct SimilarityCriterion {
  CriterionKind kind = CriterionKind::Familiarity;
  std::vector<ObjectiveSpec> tie_breakers;
  // Defaults: all elements for familiarity kinds, tasks for effort kinds.
  std::optional<Interest> interest;
  std::optional<Weights> weights;  // weighted kinds; default_weights when empty
  FamiliarityVariant variant = FamiliarityVariant::CountNewSatisfied;
};

struct EvolutionResult {
  EvolutionContext context;
  Optimum optimum;  // values: criterion first, then the tie-breakers
  Rational criterion_value;
  std::map<std::string, Rational> objective_values;  // builtin objectives and attributes
  SolveStats stats;
};

// Throws Unrealizable when the new model has no realization.
EvolutionResult evolve(const CgmModel& old_model, const Realization& old_realization, const CgmModel& new_model,
                       const SimilarityCriterion& criterion, const SolverOptions& options = {});

}  // namespace cgm
