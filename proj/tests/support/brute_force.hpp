#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cgm/model.hpp"

namespace cgm::support {

// Reference semantics written without the encoder, the solver or
// check_realization. Only Formula evaluation is shared.

struct OracleRoles {
  std::vector<ElementId> requirements, nice_to_have, tasks;
};
OracleRoles oracle_roles(const CgmModel& model);

// Conditions (a)-(c), edges and assertions, clause by clause.
bool oracle_valid(const CgmModel& model, const Assignment& a);

// Derived numeric values for the given element truth values.
void oracle_fill_numeric(const CgmModel& model, Assignment& a);

// All realizations: every element assignment, refinements derived from
// their sources, numeric variables derived from the attributes.
std::vector<Assignment> oracle_realizations(const CgmModel& model);

Rational oracle_objective(const CgmModel& model, const std::string& name, const Assignment& a);

using OracleObjective = std::pair<std::string, Polarity>;

// Lexicographic optimum values over oracle_realizations; nullopt when none.
std::optional<std::vector<Rational>> oracle_optimum(const CgmModel& model, const std::vector<OracleObjective>& objectives,
                                                    const std::vector<Assignment>& realizations);

}  // namespace cgm::support
