#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cgm/dsl.hpp"
#include "cgm/model.hpp"

namespace cgm {

class JsonError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr const char* kModelSchema = "cgm-model/1";
inline constexpr const char* kRealizationSchema = "cgm-realization/1";

ParseResult parse_json(std::string_view text, const std::string& file = "<json>");
std::string to_json(const CgmModel& model, int indent = 2);

// Compact JSON of canonical(model); the input of model_hash.
std::string canonical_json(const CgmModel& model);
// "sha256:" followed by the lowercase hex digest of canonical_json.
std::string model_hash(const CgmModel& model);

struct RealizationDoc {
  std::string model_hash;
  Realization realization;
};

std::string realization_to_json(const Realization& realization, const std::string& model_hash, int indent = 2);
RealizationDoc parse_realization_json(std::string_view text);

std::string delta_to_json(const std::vector<MutationStep>& delta, int indent = 2);
std::vector<MutationStep> parse_delta_json(std::string_view text);

}  // namespace cgm
