#include "cgm/reasoning.hpp"

#include "cgm/encoder.hpp"

namespace cgm {

Unrealizable::Unrealizable(std::vector<ElementId> core)
    : std::runtime_error([&] {
        std::string msg = "model is unrealizable";
        if (!core.empty()) {
          msg += "; conflicting assertions:";
          for (const auto& id : core) msg += " " + id;
        }
        return msg;
      }()),
      core_(std::move(core)) {}

std::vector<ElementId> diagnose_assertions(const CgmModel& model, const SolverOptions& options) {
  AssertionSplit split = make_problem_without_assertions(model);
  std::vector<ElementId> core;
  for (auto i : diagnose(split.problem, split.assertions, options)) core.push_back(split.asserted[i]);
  return core;
}

Optimum realize(const CgmModel& model, std::span<const ObjectiveSpec> objectives, const SolverOptions& options,
                SolveStats* stats) {
  OptimumResult result = optimize(make_problem(model), objectives, options);
  if (stats) *stats = result.stats;
  if (!result.optimum) throw Unrealizable(diagnose_assertions(model, options));
  return std::move(*result.optimum);
}

std::vector<Realization> enumerate_realizations(const CgmModel& model, std::optional<std::size_t> limit,
                                                const SolverOptions& options) {
  Problem p = make_problem(model);
  return enumerate_all(p, p.bool_vars, limit, options);
}

std::map<std::string, Rational> builtin_values(const CgmModel& model, const Realization& realization) {
  std::map<std::string, Rational> out;
  for (const auto& name : builtin_objective_names(model)) {
    out[name] = build_objective(model, name).term.evaluate(realization);
  }
  return out;
}

}  // namespace cgm
