#include "cgm/evolution.hpp"

#include <algorithm>
#include <functional>

#include "cgm/reasoning.hpp"

namespace cgm {

namespace {

std::set<ElementId> element_ids(const CgmModel& m) {
  std::set<ElementId> out;
  for (const auto& e : m.elements) out.insert(e.id);
  return out;
}

bool old_truth(const EvolutionContext& ctx, const ElementId& id) {
  auto it = ctx.old_realization.truth.find(id);
  if (it == ctx.old_realization.truth.end()) throw MissingAssignment(id);
  return it->second;
}

bool candidate_truth(const Realization& candidate, const ElementId& id) {
  auto it = candidate.truth.find(id);
  if (it == candidate.truth.end()) throw MissingAssignment(id);
  return it->second;
}

void require_tasks(const EvolutionContext& ctx) {
  ModelIndex index(ctx.new_model);
  for (const auto& id : ctx.interest) {
    if (!ctx.new_model.find_element(id)) continue;
    if (index.classify(id) != Classification::Task) throw NonTaskInterest(id);
  }
}

using WeightFn = std::function<Rational(const ElementId&)>;

WeightFn unit_weight() {
  return [](const ElementId&) { return Rational(1); };
}

WeightFn context_weight(const EvolutionContext& ctx) {
  return [&ctx](const ElementId& id) -> Rational {
    if (!ctx.weights) throw MissingWeight(id);
    auto it = ctx.weights->find(id);
    if (it == ctx.weights->end()) throw MissingWeight(id);
    return it->second;
  };
}

Rational familiarity_with(const EvolutionContext& ctx, const Realization& candidate, const WeightFn& w) {
  Rational sum = 0;
  for (const auto& id : ctx.common) {
    if (candidate_truth(candidate, id) != old_truth(ctx, id)) sum += w(id);
  }
  bool counted = ctx.variant == FamiliarityVariant::CountNewSatisfied;
  for (const auto& id : ctx.added) {
    if (candidate_truth(candidate, id) == counted) sum += w(id);
  }
  return sum;
}

Rational effort_with(const EvolutionContext& ctx, const Realization& candidate, const WeightFn& w) {
  require_tasks(ctx);
  Rational sum = 0;
  for (const auto& id : ctx.common) {
    if (candidate_truth(candidate, id) && !old_truth(ctx, id)) sum += w(id);
  }
  for (const auto& id : ctx.added) {
    if (candidate_truth(candidate, id)) sum += w(id);
  }
  return sum;
}

// Adds w*Int(id) when `when_true`, else w*(1 - Int(id)).
void add_indicator(ObjectiveTerm& t, const ElementId& id, bool when_true, const Rational& w) {
  if (when_true) {
    t.indicators.emplace_back(Formula::prop(id), w);
  } else {
    t.constant += w;
    t.indicators.emplace_back(Formula::prop(id), -w);
  }
}

}  // namespace

EvolutionContext diff(const CgmModel& old_model, const CgmModel& new_model, const Interest& interest) {
  EvolutionContext ctx;
  ctx.old_model = old_model;
  ctx.new_model = new_model;
  std::set<ElementId> e1 = element_ids(old_model), e2 = element_ids(new_model);
  switch (interest.scope) {
    case InterestScope::All:
      ctx.interest = e1;
      ctx.interest.insert(e2.begin(), e2.end());
      break;
    case InterestScope::Tasks: {
      for (const auto& id : ModelIndex(new_model).tasks()) ctx.interest.insert(id);
      for (const auto& id : ModelIndex(old_model).tasks()) {
        if (!e2.count(id)) ctx.interest.insert(id);
      }
      break;
    }
    case InterestScope::Explicit:
      for (const auto& id : interest.ids) {
        if (!e1.count(id) && !e2.count(id)) throw UnknownId(id);
      }
      ctx.interest = interest.ids;
      break;
  }
  for (const auto& id : ctx.interest) {
    bool in1 = e1.count(id) > 0, in2 = e2.count(id) > 0;
    if (in1 && in2) ctx.common.insert(id);
    if (in2 && !in1) ctx.added.insert(id);
    if (in1 && !in2) ctx.removed.insert(id);
  }
  return ctx;
}

EvolutionContext make_context(const CgmModel& old_model, const Realization& old_realization,
                              const CgmModel& new_model, const Interest& interest, std::optional<Weights> weights) {
  EvolutionContext ctx = diff(old_model, new_model, interest);
  ctx.old_realization = restrict(old_realization, old_model, new_model);
  ctx.weights = std::move(weights);
  return ctx;
}

Weights default_weights(const CgmModel& old_model, const CgmModel& new_model) {
  Weights out;
  for (const CgmModel* m : {&old_model, &new_model}) {
    for (const auto& e : m->elements) out[e.id] = e.penalty > 0 ? e.penalty : Rational(1);
  }
  return out;
}

Rational familiarity_cost(const EvolutionContext& ctx, const Realization& candidate) {
  return familiarity_with(ctx, candidate, unit_weight());
}

Rational weighted_familiarity_cost(const EvolutionContext& ctx, const Realization& candidate) {
  return familiarity_with(ctx, candidate, context_weight(ctx));
}

Rational change_effort(const EvolutionContext& ctx, const Realization& candidate) {
  return effort_with(ctx, candidate, unit_weight());
}

Rational weighted_change_effort(const EvolutionContext& ctx, const Realization& candidate) {
  return effort_with(ctx, candidate, context_weight(ctx));
}

Rational ernst_familiarity_cost(const EvolutionContext& ctx, const Realization& candidate) {
  require_tasks(ctx);
  Rational sum = 0;
  for (const auto& id : ctx.common) {
    if (!candidate_truth(candidate, id) && old_truth(ctx, id)) sum += 1;
  }
  return sum;
}

const char* to_string(CriterionKind kind) {
  switch (kind) {
    case CriterionKind::Familiarity: return "familiarity";
    case CriterionKind::WeightedFamiliarity: return "weighted-familiarity";
    case CriterionKind::ChangeEffort: return "effort";
    case CriterionKind::WeightedChangeEffort: return "weighted-effort";
    case CriterionKind::ErnstFamiliarity: return "ernst";
  }
  return "?";
}

std::optional<CriterionKind> parse_criterion(const std::string& name) {
  for (auto k : {CriterionKind::Familiarity, CriterionKind::WeightedFamiliarity, CriterionKind::ChangeEffort,
                 CriterionKind::WeightedChangeEffort, CriterionKind::ErnstFamiliarity}) {
    if (name == to_string(k)) return k;
  }
  if (name == "changeEffort") return CriterionKind::ChangeEffort;
  if (name == "weightedFamiliarity") return CriterionKind::WeightedFamiliarity;
  if (name == "weightedChangeEffort") return CriterionKind::WeightedChangeEffort;
  if (name == "ernstFamiliarity") return CriterionKind::ErnstFamiliarity;
  return std::nullopt;
}

ObjectiveSpec criterion_objective(const EvolutionContext& ctx, CriterionKind kind) {
  ObjectiveSpec spec;
  spec.name = to_string(kind);
  spec.tag = ObjectiveTag::Custom;
  ObjectiveTerm& t = spec.term;
  bool weighted = kind == CriterionKind::WeightedFamiliarity || kind == CriterionKind::WeightedChangeEffort;
  WeightFn w = weighted ? context_weight(ctx) : unit_weight();
  switch (kind) {
    case CriterionKind::Familiarity:
    case CriterionKind::WeightedFamiliarity:
      for (const auto& id : ctx.common) add_indicator(t, id, !old_truth(ctx, id), w(id));
      for (const auto& id : ctx.added) {
        add_indicator(t, id, ctx.variant == FamiliarityVariant::CountNewSatisfied, w(id));
      }
      break;
    case CriterionKind::ChangeEffort:
    case CriterionKind::WeightedChangeEffort:
      require_tasks(ctx);
      for (const auto& id : ctx.common) {
        if (!old_truth(ctx, id)) add_indicator(t, id, true, w(id));
      }
      for (const auto& id : ctx.added) add_indicator(t, id, true, w(id));
      break;
    case CriterionKind::ErnstFamiliarity:
      require_tasks(ctx);
      for (const auto& id : ctx.common) {
        if (old_truth(ctx, id)) add_indicator(t, id, false, 1);
      }
      break;
  }
  return spec;
}

Rational criterion_value(const EvolutionContext& ctx, CriterionKind kind, const Realization& candidate) {
  switch (kind) {
    case CriterionKind::Familiarity: return familiarity_cost(ctx, candidate);
    case CriterionKind::WeightedFamiliarity: return weighted_familiarity_cost(ctx, candidate);
    case CriterionKind::ChangeEffort: return change_effort(ctx, candidate);
    case CriterionKind::WeightedChangeEffort: return weighted_change_effort(ctx, candidate);
    case CriterionKind::ErnstFamiliarity: return ernst_familiarity_cost(ctx, candidate);
  }
  return 0;
}

EvolutionResult evolve(const CgmModel& old_model, const Realization& old_realization, const CgmModel& new_model,
                       const SimilarityCriterion& criterion, const SolverOptions& options) {
  bool task_kind = criterion.kind == CriterionKind::ChangeEffort ||
                   criterion.kind == CriterionKind::WeightedChangeEffort ||
                   criterion.kind == CriterionKind::ErnstFamiliarity;
  Interest interest = criterion.interest.value_or(task_kind ? Interest::tasks() : Interest::all());
  std::optional<Weights> weights = criterion.weights;
  bool weighted = criterion.kind == CriterionKind::WeightedFamiliarity ||
                  criterion.kind == CriterionKind::WeightedChangeEffort;
  if (weighted && !weights) weights = default_weights(old_model, new_model);

  EvolutionResult result;
  result.context = make_context(old_model, old_realization, new_model, interest, weights);
  result.context.variant = criterion.variant;
  std::vector<ObjectiveSpec> objectives{criterion_objective(result.context, criterion.kind)};
  objectives.insert(objectives.end(), criterion.tie_breakers.begin(), criterion.tie_breakers.end());
  result.optimum = realize(new_model, objectives, options, &result.stats);
  result.criterion_value = criterion_value(result.context, criterion.kind, result.optimum.model);
  if (result.criterion_value != result.optimum.values.front()) {
    throw std::logic_error("criterion objective disagrees with its direct evaluation");
  }
  result.objective_values = builtin_values(new_model, result.optimum.model);
  return result;
}

}  // namespace cgm
