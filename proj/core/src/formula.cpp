#include "cgm/formula.hpp"

#include <sstream>
#include <variant>

namespace cgm {

const char* to_symbol(Relation relation) {
  switch (relation) {
    case Relation::Less: return "<";
    case Relation::LessEqual: return "<=";
    case Relation::Equal: return "=";
    case Relation::GreaterEqual: return ">=";
    case Relation::Greater: return ">";
  }
  return "?";
}

bool compare(const Rational& lhs, Relation relation, const Rational& rhs) {
  switch (relation) {
    case Relation::Less: return lhs < rhs;
    case Relation::LessEqual: return lhs <= rhs;
    case Relation::Equal: return lhs == rhs;
    case Relation::GreaterEqual: return lhs >= rhs;
    case Relation::Greater: return lhs > rhs;
  }
  return false;
}

LinearTerm LinearTerm::variable(const std::string& name, const Rational& coefficient) {
  LinearTerm t;
  t.add(name, coefficient);
  return t;
}

void LinearTerm::add(const std::string& name, const Rational& coefficient) {
  if (coefficient == 0) return;
  auto [it, inserted] = coefficients_.try_emplace(name, coefficient);
  if (!inserted) {
    it->second += coefficient;
    if (it->second == 0) coefficients_.erase(it);
  }
}

LinearTerm& LinearTerm::operator+=(const LinearTerm& other) {
  for (const auto& [name, c] : other.coefficients_) add(name, c);
  return *this;
}

LinearTerm& LinearTerm::operator-=(const LinearTerm& other) {
  for (const auto& [name, c] : other.coefficients_) add(name, -c);
  return *this;
}

LinearTerm& LinearTerm::operator*=(const Rational& factor) {
  if (factor == 0) {
    coefficients_.clear();
    return *this;
  }
  for (auto& [name, c] : coefficients_) c *= factor;
  return *this;
}

struct Formula::Node {
  struct LinearAtom {
    LinearTerm term;
    Relation relation;
    Rational bound;
  };
  Kind kind;
  std::variant<std::monostate, std::string, LinearAtom, std::vector<Formula>> payload;
};

Formula::Formula() : Formula(constant(true)) {}

Formula Formula::constant(bool value) {
  static const auto kTrue = std::make_shared<const Node>(Node{Kind::True, {}});
  static const auto kFalse = std::make_shared<const Node>(Node{Kind::False, {}});
  return Formula(value ? kTrue : kFalse);
}

Formula Formula::prop(const std::string& name) {
  return Formula(std::make_shared<const Node>(Node{Kind::Prop, name}));
}

Formula Formula::linear(LinearTerm term, Relation relation, Rational bound) {
  return Formula(std::make_shared<const Node>(
      Node{Kind::Linear, Node::LinearAtom{std::move(term), relation, std::move(bound)}}));
}

Formula Formula::negation(Formula operand) {
  return Formula(std::make_shared<const Node>(Node{Kind::Not, std::vector<Formula>{std::move(operand)}}));
}

Formula Formula::conjunction(std::vector<Formula> operands) {
  if (operands.empty()) return constant(true);
  if (operands.size() == 1) return operands.front();
  return Formula(std::make_shared<const Node>(Node{Kind::And, std::move(operands)}));
}

Formula Formula::disjunction(std::vector<Formula> operands) {
  if (operands.empty()) return constant(false);
  if (operands.size() == 1) return operands.front();
  return Formula(std::make_shared<const Node>(Node{Kind::Or, std::move(operands)}));
}

Formula Formula::implication(Formula premise, Formula conclusion) {
  return Formula(std::make_shared<const Node>(
      Node{Kind::Implies, std::vector<Formula>{std::move(premise), std::move(conclusion)}}));
}

Formula Formula::equivalence(Formula lhs, Formula rhs) {
  return Formula(std::make_shared<const Node>(
      Node{Kind::Iff, std::vector<Formula>{std::move(lhs), std::move(rhs)}}));
}

Formula::Kind Formula::kind() const { return node_->kind; }
const std::string& Formula::name() const { return std::get<std::string>(node_->payload); }
const LinearTerm& Formula::term() const { return std::get<Node::LinearAtom>(node_->payload).term; }
Relation Formula::relation() const { return std::get<Node::LinearAtom>(node_->payload).relation; }
const Rational& Formula::bound() const { return std::get<Node::LinearAtom>(node_->payload).bound; }
const std::vector<Formula>& Formula::operands() const {
  return std::get<std::vector<Formula>>(node_->payload);
}

bool operator==(const Formula& lhs, const Formula& rhs) {
  if (lhs.node_ == rhs.node_) return true;
  if (lhs.kind() != rhs.kind()) return false;
  switch (lhs.kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False:
      return true;
    case Formula::Kind::Prop:
      return lhs.name() == rhs.name();
    case Formula::Kind::Linear:
      return lhs.term() == rhs.term() && lhs.relation() == rhs.relation() && lhs.bound() == rhs.bound();
    default:
      return lhs.operands() == rhs.operands();
  }
}

Formula operator!(const Formula& f) { return Formula::negation(f); }
Formula operator&&(const Formula& lhs, const Formula& rhs) { return Formula::conjunction({lhs, rhs}); }
Formula operator||(const Formula& lhs, const Formula& rhs) { return Formula::disjunction({lhs, rhs}); }

Rational evaluate(const LinearTerm& term, const Assignment& assignment) {
  Rational sum = 0;
  for (const auto& [name, c] : term.coefficients()) {
    auto it = assignment.values.find(name);
    if (it == assignment.values.end()) throw MissingAssignment(name);
    sum += c * it->second;
  }
  return sum;
}

bool evaluate(const Formula& formula, const Assignment& assignment) {
  using Kind = Formula::Kind;
  switch (formula.kind()) {
    case Kind::True: return true;
    case Kind::False: return false;
    case Kind::Prop: {
      auto it = assignment.truth.find(formula.name());
      if (it == assignment.truth.end()) throw MissingAssignment(formula.name());
      return it->second;
    }
    case Kind::Linear:
      return compare(evaluate(formula.term(), assignment), formula.relation(), formula.bound());
    case Kind::Not:
      return !evaluate(formula.operands()[0], assignment);
    case Kind::And: {
      bool result = true;
      for (const auto& op : formula.operands()) result = evaluate(op, assignment) && result;
      return result;
    }
    case Kind::Or: {
      bool result = false;
      for (const auto& op : formula.operands()) result = evaluate(op, assignment) || result;
      return result;
    }
    case Kind::Implies: {
      bool premise = evaluate(formula.operands()[0], assignment);
      bool conclusion = evaluate(formula.operands()[1], assignment);
      return !premise || conclusion;
    }
    case Kind::Iff:
      return evaluate(formula.operands()[0], assignment) == evaluate(formula.operands()[1], assignment);
  }
  return false;
}

void collect_props(const Formula& formula, std::set<std::string>& out) {
  switch (formula.kind()) {
    case Formula::Kind::Prop: out.insert(formula.name()); break;
    case Formula::Kind::True:
    case Formula::Kind::False:
    case Formula::Kind::Linear: break;
    default:
      for (const auto& op : formula.operands()) collect_props(op, out);
  }
}

void collect_numeric(const Formula& formula, std::set<std::string>& out) {
  switch (formula.kind()) {
    case Formula::Kind::Linear:
      for (const auto& [name, c] : formula.term().coefficients()) out.insert(name);
      break;
    case Formula::Kind::True:
    case Formula::Kind::False:
    case Formula::Kind::Prop: break;
    default:
      for (const auto& op : formula.operands()) collect_numeric(op, out);
  }
}

std::string to_string(const LinearTerm& term) {
  if (term.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [name, c] : term.coefficients()) {
    Rational magnitude = abs(c);
    if (first) {
      if (c < 0) out << '-';
    } else {
      out << (c < 0 ? " - " : " + ");
    }
    if (magnitude != 1) out << to_string(magnitude) << '*';
    out << name;
    first = false;
  }
  return out.str();
}

namespace {

int precedence(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Iff: return 1;
    case Formula::Kind::Implies: return 2;
    case Formula::Kind::Or: return 3;
    case Formula::Kind::And: return 4;
    case Formula::Kind::Not: return 5;
    default: return 6;
  }
}

void render(const Formula& f, std::ostream& out);

void render_operand(const Formula& child, int parent_precedence, std::ostream& out) {
  if (precedence(child) <= parent_precedence) {
    out << '(';
    render(child, out);
    out << ')';
  } else {
    render(child, out);
  }
}

void render(const Formula& f, std::ostream& out) {
  using Kind = Formula::Kind;
  switch (f.kind()) {
    case Kind::True: out << "true"; return;
    case Kind::False: out << "false"; return;
    case Kind::Prop: out << f.name(); return;
    case Kind::Linear:
      out << to_string(f.term()) << ' ' << to_symbol(f.relation()) << ' ' << to_string(f.bound());
      return;
    case Kind::Not:
      out << '!';
      render_operand(f.operands()[0], precedence(f), out);
      return;
    default: break;
  }
  const char* op = f.kind() == Kind::And ? " & "
                   : f.kind() == Kind::Or ? " | "
                   : f.kind() == Kind::Implies ? " -> "
                                               : " <-> ";
  bool first = true;
  for (const auto& child : f.operands()) {
    if (!first) out << op;
    render_operand(child, precedence(f), out);
    first = false;
  }
}

}  // namespace

std::string to_string(const Formula& formula) {
  std::ostringstream out;
  render(formula, out);
  return out.str();
}

}  // namespace cgm
