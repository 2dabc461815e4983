#pragma once

#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgm/model.hpp"
#include "cgm/objective.hpp"
#include "cgm/solver.hpp"

namespace cgm {

// The model's assertions cannot all hold; `core` is a deletion-minimal
// subset of asserted element ids.
class Unrealizable : public std::runtime_error {
 public:
  explicit Unrealizable(std::vector<ElementId> core);
  const std::vector<ElementId>& core() const { return core_; }

 private:
  std::vector<ElementId> core_;
};

// Optimal realization of the model. Throws Unrealizable (with the core)
// when the model has no realization.
Optimum realize(const CgmModel& model, std::span<const ObjectiveSpec> objectives, const SolverOptions& options = {},
                SolveStats* stats = nullptr);

// Deletion-minimal set of assertions that make the model unrealizable;
// empty when the model is unrealizable even without assertions. Throws
// NotUnsat when the model is realizable.
std::vector<ElementId> diagnose_assertions(const CgmModel& model, const SolverOptions& options = {});

// Distinct realizations (projected on element and refinement propositions).
std::vector<Realization> enumerate_realizations(const CgmModel& model, std::optional<std::size_t> limit = std::nullopt,
                                                const SolverOptions& options = {});

// Every builtin objective and attribute evaluated on `realization`.
std::map<std::string, Rational> builtin_values(const CgmModel& model, const Realization& realization);

}  // namespace cgm
