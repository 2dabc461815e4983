#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgm/formula.hpp"
#include "cgm/objective.hpp"

namespace cgm {

// A formula with its declared variables. Declared Boolean variables fix the
// decision order and the tie-break order; anything the formula mentions but
// the lists omit is appended in name order.
struct Problem {
  Formula formula;
  std::vector<std::string> bool_vars;
  std::vector<std::string> num_vars;

  static Problem from_formula(Formula formula);
};

struct Budget {
  std::optional<std::chrono::milliseconds> wall_clock;
  std::optional<std::uint64_t> steps;  // conflicts + theory checks
};

struct SolverOptions {
  Budget budget;
  // Re-proves optimality of the first objective with a fresh solver.
  bool verify_optimality = false;
  // Lexicographically smallest (false first) Boolean assignment among optima.
  bool canonical_tie_break = true;
};

struct SolveStats {
  std::uint64_t decisions = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t theory_checks = 0;
  std::chrono::microseconds elapsed{0};

  SolveStats& operator+=(const SolveStats& other);
};

struct SolveResult {
  bool sat = false;
  std::optional<Assignment> model;
  SolveStats stats;
};

struct Optimum {
  Assignment model;
  std::vector<Rational> values;
};

struct OptimumResult {
  std::optional<Optimum> optimum;  // empty when unsat
  SolveStats stats;
  bool sat() const { return optimum.has_value(); }
};

class ResourceLimit : public std::runtime_error {
 public:
  ResourceLimit() : std::runtime_error("solver resource budget exhausted") {}
};

class Unbounded : public std::runtime_error {
 public:
  explicit Unbounded(std::size_t index)
      : std::runtime_error("objective " + std::to_string(index) + " is unbounded"), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

// The objective's infimum is only approached (strict bounds), never reached.
class InfimumNotAttained : public std::runtime_error {
 public:
  InfimumNotAttained(std::size_t index, Rational infimum)
      : std::runtime_error("objective " + std::to_string(index) + " has infimum " + to_string(infimum) +
                           " which no model attains"),
        index_(index),
        infimum_(std::move(infimum)) {}
  std::size_t index() const { return index_; }
  const Rational& infimum() const { return infimum_; }

 private:
  std::size_t index_;
  Rational infimum_;
};

class NotUnsat : public std::runtime_error {
 public:
  NotUnsat() : std::runtime_error("formula together with the suspects is satisfiable") {}
};

SolveResult solve(const Problem& problem, const SolverOptions& options = {});

OptimumResult optimize(const Problem& problem, std::span<const ObjectiveSpec> objectives,
                       const SolverOptions& options = {});

// Calls `visit` once per distinct assignment to the `projection` Booleans
// that extends to a model; `visit` receives one such full model. Stops
// after `limit` or when `visit` returns false. Returns the number visited.
std::size_t enumerate(const Problem& problem, const std::vector<std::string>& projection,
                      std::optional<std::size_t> limit, const std::function<bool(const Assignment&)>& visit,
                      const SolverOptions& options = {});

std::vector<Assignment> enumerate_all(const Problem& problem, const std::vector<std::string>& projection,
                                      std::optional<std::size_t> limit = std::nullopt,
                                      const SolverOptions& options = {});

// Deletion-minimal subset (indices into `suspects`, ascending) such that
// formula & subset is unsat. Throws NotUnsat when formula & suspects is sat.
std::vector<std::size_t> diagnose(const Problem& problem, std::span<const Formula> suspects,
                                  const SolverOptions& options = {});

}  // namespace cgm
