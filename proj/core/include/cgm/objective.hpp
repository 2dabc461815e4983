#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cgm/formula.hpp"
#include "cgm/model.hpp"

namespace cgm {

// Affine objective: sum of c * Int(f) over Boolean indicators, plus a linear
// term over numeric variables, plus a constant.
struct ObjectiveTerm {
  std::vector<std::pair<Formula, Rational>> indicators;
  LinearTerm numeric;
  Rational constant = 0;

  Rational evaluate(const Assignment& assignment) const;
  ObjectiveTerm& operator*=(const Rational& factor);
  ObjectiveTerm& operator+=(const ObjectiveTerm& other);
};

enum class ObjectiveTag { PenaltyMinusReward, NumUnsatRequirements, NumSatTasks, NumUnsatPrefs, Attribute, Custom };

struct ObjectiveSpec {
  std::string name;
  Polarity polarity = Polarity::Minimize;
  ObjectiveTerm term;
  ObjectiveTag tag = ObjectiveTag::Custom;
};

class UnknownAttribute : public std::runtime_error {
 public:
  explicit UnknownAttribute(const std::string& name)
      : std::runtime_error("unknown attribute '" + name + "'"), name_(name) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class UnknownObjective : public std::runtime_error {
 public:
  explicit UnknownObjective(const std::string& name)
      : std::runtime_error("unknown objective '" + name + "'") {}
};

ObjectiveSpec build_objective(const CgmModel& model, ObjectiveTag tag, const std::string& attribute = {});

// Resolves a builtin tag name ("penaltyMinusReward", ...) or a declared
// attribute. Throws UnknownObjective otherwise.
ObjectiveSpec build_objective(const CgmModel& model, const std::string& name,
                              Polarity polarity = Polarity::Minimize);

// The model's declared objective list, or [penaltyMinusReward] when empty.
std::vector<ObjectiveSpec> default_objectives(const CgmModel& model);

// Parses "lex:o1,o2,..." (the "lex:" prefix is optional). Each token is an
// objective name, optionally prefixed by "min:" or "max:". Throws
// UnknownObjective for unknown names and empty tokens.
std::vector<ObjectiveSpec> parse_objective_list(const CgmModel& model, std::string_view text);

// Names every builtin objective and every declared attribute, in that order.
std::vector<std::string> builtin_objective_names(const CgmModel& model);

}  // namespace cgm
