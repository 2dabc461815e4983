#pragma once

#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "cgm/rational.hpp"

namespace cgm {

enum class Relation { Less, LessEqual, Equal, GreaterEqual, Greater };

const char* to_symbol(Relation relation);
bool compare(const Rational& lhs, Relation relation, const Rational& rhs);

// Sum of coefficient * variable. Zero coefficients are never stored.
class LinearTerm {
 public:
  LinearTerm() = default;
  static LinearTerm variable(const std::string& name, const Rational& coefficient = 1);

  void add(const std::string& name, const Rational& coefficient);
  LinearTerm& operator+=(const LinearTerm& other);
  LinearTerm& operator-=(const LinearTerm& other);
  LinearTerm& operator*=(const Rational& factor);

  const std::map<std::string, Rational>& coefficients() const { return coefficients_; }
  bool empty() const { return coefficients_.empty(); }

  friend bool operator==(const LinearTerm&, const LinearTerm&) = default;

 private:
  std::map<std::string, Rational> coefficients_;
};

// Truth values for propositions plus rational values for numeric variables.
struct Assignment {
  std::map<std::string, bool> truth;
  std::map<std::string, Rational> values;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

class MissingAssignment : public std::runtime_error {
 public:
  explicit MissingAssignment(const std::string& variable)
      : std::runtime_error("no value assigned to '" + variable + "'"), variable_(variable) {}
  const std::string& variable() const { return variable_; }

 private:
  std::string variable_;
};

// Immutable Boolean / linear-rational-arithmetic formula. Copies share nodes.
class Formula {
 public:
  enum class Kind { True, False, Prop, Linear, Not, And, Or, Implies, Iff };

  Formula();  // true

  static Formula constant(bool value);
  static Formula prop(const std::string& name);
  // term <relation> bound
  static Formula linear(LinearTerm term, Relation relation, Rational bound);
  static Formula negation(Formula operand);
  // An empty conjunction is true, an empty disjunction false; a single
  // operand is returned unchanged.
  static Formula conjunction(std::vector<Formula> operands);
  static Formula disjunction(std::vector<Formula> operands);
  static Formula implication(Formula premise, Formula conclusion);
  static Formula equivalence(Formula lhs, Formula rhs);

  Kind kind() const;
  const std::string& name() const;        // Prop
  const LinearTerm& term() const;          // Linear
  Relation relation() const;               // Linear
  const Rational& bound() const;           // Linear
  const std::vector<Formula>& operands() const;  // Not, And, Or, Implies, Iff

  // Identity of the shared node, used for memoization.
  const void* id() const { return node_.get(); }

  friend bool operator==(const Formula& lhs, const Formula& rhs);

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

Formula operator!(const Formula& f);
Formula operator&&(const Formula& lhs, const Formula& rhs);
Formula operator||(const Formula& lhs, const Formula& rhs);

// Throws MissingAssignment when a referenced variable is unassigned.
bool evaluate(const Formula& formula, const Assignment& assignment);
Rational evaluate(const LinearTerm& term, const Assignment& assignment);

void collect_props(const Formula& formula, std::set<std::string>& out);
void collect_numeric(const Formula& formula, std::set<std::string>& out);

// Renders in the DSL formula syntax (`! & | -> <->`, comparisons).
std::string to_string(const Formula& formula);
std::string to_string(const LinearTerm& term);

}  // namespace cgm
