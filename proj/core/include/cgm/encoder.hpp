#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "cgm/formula.hpp"
#include "cgm/model.hpp"
#include "cgm/solver.hpp"

namespace cgm {

class InvalidModel : public std::runtime_error {
 public:
  explicit InvalidModel(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

// One top-level conjunct of the encoding together with what produced it
// ("a:G", "b:R1", "edge:conflict A >< B", "constraint", "assert:G",
// "attr:cost_X", "attr:cost").
struct Conjunct {
  Formula formula;
  std::string origin;
};

// Throws InvalidModel when validate_structure reports anything.
std::vector<Conjunct> encode_conjuncts(const CgmModel& model);
Formula encode(const CgmModel& model);

// Encoding plus the model's canonical variable lists.
Problem make_problem(const CgmModel& model);

// Same problem without the assertion literals; those are returned separately
// (in element id order) for diagnosis.
struct AssertionSplit {
  Problem problem;
  std::vector<Formula> assertions;
  std::vector<ElementId> asserted;
};
AssertionSplit make_problem_without_assertions(const CgmModel& model);

}  // namespace cgm
