#pragma once

#include "cgm/json_io.hpp"
#include "cgm/solver.hpp"
#include "json.hpp"

namespace cgm::detail {

using Json = nlohmann::json;

Json rational_value(const Rational& r);
Rational rational_from(const Json& j, const std::string& where);

Json model_value(const CgmModel& model);
// Throws JsonError on schema violations; does not validate structure.
CgmModel model_from(const Json& j);

Json realization_value(const Realization& r);
Realization realization_from(const Json& bool_assign, const Json& num_assign);

Json delta_value(const std::vector<MutationStep>& delta);
std::vector<MutationStep> delta_from(const Json& j);

Json stats_value(const SolveStats& stats);

}  // namespace cgm::detail
