#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "cgm/engine/delta_rational.hpp"

namespace cgm::engine {

// Incremental bounded simplex over exact delta-rationals (general form:
// every row defines a slack as a linear combination of other variables).
// Bounds carry an opaque reason id; reason -1 marks a permanent bound that
// never appears in explanations.
class Simplex {
 public:
  int add_variable();
  // New basic variable s = sum coeff * var.
  int add_row(const std::map<int, Rational>& combination);
  std::size_t num_variables() const { return value_.size(); }

  // Both return false and fill `conflict` when the bounds of `var` cross.
  bool assert_upper(int var, const DeltaRational& bound, int reason, std::vector<int>& conflict);
  bool assert_lower(int var, const DeltaRational& bound, int reason, std::vector<int>& conflict);

  // Restores feasibility; on infeasibility returns false with the reasons of
  // an infeasible subset of the asserted bounds.
  bool check(std::vector<int>& conflict);

  void push();
  void pop(std::size_t levels);
  std::size_t depth() const { return checkpoints_.size(); }

  // Precondition: check() succeeded. Minimizes `var` over the current bounds
  // and leaves the optimal vertex as the assignment. Returns nullopt when
  // unbounded.
  std::optional<DeltaRational> minimize(int var);

  const DeltaRational& value(int var) const { return value_[var]; }
  // A positive delta small enough that every bound holds for c + k*delta.
  Rational concrete_delta() const;

  std::size_t pivots() const { return pivots_; }

 private:
  struct Bound {
    DeltaRational value;
    int reason;
  };
  struct TrailEntry {
    int var;
    bool upper;
    std::optional<Bound> previous;
  };

  bool is_basic(int var) const { return row_of_[var] >= 0; }
  bool can_increase(int var) const { return !upper_[var] || value_[var] < upper_[var]->value; }
  bool can_decrease(int var) const { return !lower_[var] || value_[var] > lower_[var]->value; }
  void update(int nonbasic, const DeltaRational& v);
  void pivot(int row, int entering);
  void pivot_and_update(int basic, int entering, const DeltaRational& v);
  static void push_reason(std::vector<int>& out, const std::optional<Bound>& b);

  std::vector<DeltaRational> value_;
  std::vector<std::optional<Bound>> lower_, upper_;
  std::vector<int> row_of_;  // -1 when nonbasic
  std::vector<std::map<int, Rational>> rows_;
  std::vector<int> basic_of_row_;
  std::vector<TrailEntry> trail_;
  std::vector<std::size_t> checkpoints_;
  std::size_t pivots_ = 0;
};

}  // namespace cgm::engine
