#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "cgm/formula.hpp"
#include "cgm/objective.hpp"

namespace cgm::support {

// Random Boolean + LRA formula: props P0.., numeric vars x0.. each boxed
// in [-10, 10], atoms with small integer coefficients and bounds.
struct RandomFormula {
  Formula formula;  // box & core
  Formula core;
  std::vector<std::string> props;
  std::vector<std::string> nums;
  std::vector<Formula> atoms;
};
RandomFormula random_formula(std::mt19937_64& rng, int max_props = 16, int max_nums = 4, int max_atoms = 4);

// Objective: integer weights on props plus integer coefficients on nums.
ObjectiveSpec random_objective(std::mt19937_64& rng, const RandomFormula& f, const std::string& name);

struct FmMinimum {
  bool feasible = false;
  bool bounded = true;
  bool attained = false;
  Rational value;  // infimum when feasible and bounded
};

// Brute force: every prop assignment times every atom truth pattern, each
// polyhedron decided by Fourier-Motzkin elimination.
class FmOracle {
 public:
  explicit FmOracle(const RandomFormula& f);
  ~FmOracle();

  bool satisfiable() const;
  // Number of prop assignments with a satisfying extension.
  std::size_t count_models() const;

  enum class Outcome { Unsat, Optimal, NotAttained, Unbounded };
  struct LexResult {
    Outcome outcome = Outcome::Unsat;
    std::size_t failed_index = 0;
    std::vector<Rational> values;
  };
  LexResult lex_minimize(const std::vector<ObjectiveSpec>& objectives) const;

 private:
  struct Region;
  const RandomFormula& f_;
  std::vector<Region> regions_;
};

}  // namespace cgm::support
