#pragma once

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "cgm/engine/simplex.hpp"
#include "cgm/formula.hpp"
#include "cgm/objective.hpp"
#include "cgm/solver.hpp"

namespace cgm::engine {

// Literal: 2*var for the positive phase, 2*var+1 for the negative one.
using Lit = int;
inline Lit make_lit(int var, bool negative = false) { return 2 * var + (negative ? 1 : 0); }
inline Lit negate(Lit l) { return l ^ 1; }
inline int var_of(Lit l) { return l >> 1; }
inline bool is_negative(Lit l) { return (l & 1) != 0; }

class BudgetGuard {
 public:
  BudgetGuard(const Budget& budget, SolveStats& stats);
  // Counts one step and throws ResourceLimit when the budget is spent.
  void charge();

 private:
  Budget budget_;
  SolveStats& stats_;
  std::chrono::steady_clock::time_point start_;
  std::uint64_t steps_ = 0;
};

// CDCL search over a Tseitin abstraction with the simplex as theory solver.
// Decisions follow variable creation order (declared Booleans first) with
// the false phase; no restarts, so runs are reproducible.
class Engine {
 public:
  enum class Status { Sat, Unsat };

  Engine(const std::vector<std::string>& bool_vars, const std::vector<std::string>& num_vars, BudgetGuard& guard,
         SolveStats& stats);

  Lit encode(const Formula& formula);
  void assert_formula(const Formula& formula);
  // Only at decision level 0.
  void add_clause(std::vector<Lit> clause);
  Lit new_selector();

  // Literal for `svar <relation> bound` over a simplex variable.
  Lit bound_lit(int svar, Relation relation, const Rational& bound);
  // Simplex variable carrying the non-constant part of `term`, or -1 when
  // the term is constant.
  int objective_var(const ObjectiveTerm& term);

  Status search(const std::vector<Lit>& assumptions = {});
  // After Sat: minimizes `svar` under the current full assignment.
  std::optional<DeltaRational> minimize(int svar);
  // After Sat: Booleans for the declared variables, rationals for the
  // numeric ones.
  Assignment model() const;
  bool value_of(const std::string& bool_var) const;
  Lit lit_of(const std::string& bool_var);
  void to_root() { backtrack(0); }
  bool inconsistent() const { return inconsistent_; }

 private:
  struct Atom {
    int svar;
    bool upper;  // true: svar <= bound, false: svar >= bound
    Rational bound;
  };

  int new_var();
  int value(Lit l) const;  // 1 true, 0 false, -1 unassigned
  int level() const { return static_cast<int>(trail_lim_.size()); }
  void enqueue(Lit l, int reason);
  void attach(int clause);
  int propagate();
  bool theory(std::vector<Lit>& conflict);
  void analyze(std::vector<Lit> conflict, std::vector<Lit>& learnt, int& backjump);
  void new_level();
  void backtrack(int target);
  int numeric_var(const std::string& name);
  int row_for(const std::map<int, Rational>& combination);
  Lit atom(int svar, bool upper, const Rational& bound);
  Lit constant(bool value) const { return value ? true_lit_ : negate(true_lit_); }
  Lit gate(Formula::Kind kind, const std::vector<Lit>& inputs);

  BudgetGuard& guard_;
  SolveStats& stats_;
  Simplex simplex_;

  std::vector<std::int8_t> assigns_;
  std::vector<int> level_of_;
  std::vector<int> reason_;
  std::vector<Lit> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;
  std::size_t theory_head_ = 0;
  bool theory_dirty_ = false;
  bool inconsistent_ = false;
  std::vector<std::vector<Lit>> clauses_;
  std::vector<std::vector<int>> watches_;
  std::vector<int> atom_of_var_;
  std::vector<Atom> atoms_;
  std::size_t order_cursor_ = 0;
  std::vector<char> seen_;

  Lit true_lit_ = 0;
  std::vector<std::string> bool_names_;
  std::vector<std::string> num_names_;
  std::map<std::string, int> bool_index_;
  std::map<std::string, int> num_index_;
  std::map<std::vector<std::pair<int, Rational>>, int> rows_;
  std::map<std::tuple<int, bool, Rational>, Lit> atom_index_;
  std::unordered_map<const void*, Lit> encoded_;
  std::vector<Formula> keep_alive_;
};

}  // namespace cgm::engine
