#pragma once

#include <span>
#include <stdexcept>
#include <string>

#include "cgm/model.hpp"
#include "cgm/objective.hpp"

namespace cgm {

struct ExportOptions {
  bool include_objectives = true;
  // Emits the lexicographic priority option before the objectives.
  bool lexicographic_mode = true;
  // Prepended to every declared symbol. Must itself be a legal simple symbol
  // prefix (letters, digits not first, and ~!@$%^&*_-+=<>.?/).
  std::string name_prefix;
};

class InvalidPrefix : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Simple symbol when legal, otherwise |quoted|. Throws std::invalid_argument
// for names containing '|' or '\\'.
std::string smt2_symbol(const std::string& name);
std::string smt2_rational(const Rational& value);

// QF_LRA script: declarations, one assert per encoding conjunct, then the
// objectives in order. Throws InvalidModel and InvalidPrefix.
std::string export_smt2(const CgmModel& model, std::span<const ObjectiveSpec> objectives,
                        const ExportOptions& options = {});

}  // namespace cgm
