#include "cgm/smt2.hpp"

#include <set>
#include <sstream>

#include "cgm/encoder.hpp"

namespace cgm {

namespace {

bool symbol_char(char c) {
  if ((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9')) return true;
  return std::string_view("~!@$%^&*_-+=<>.?/").find(c) != std::string_view::npos;
}

bool is_digit(char c) { return c >= '0' && c <= '9'; }

const std::set<std::string>& clashing_words() {
  static const std::set<std::string> words = {
      "_",  "!",   "as",   "let",   "exists", "forall", "match", "par", "BINARY", "DECIMAL", "HEXADECIMAL",
      "NUMERAL", "STRING", "true", "false", "not", "and", "or", "xor", "=>", "=", "distinct", "ite",
      "+",  "-",   "*",    "/",     "<",      "<=",     ">",     ">=",  "div",    "mod",     "abs",
      "to_real", "to_int", "is_int", "Bool", "Real", "Int"};
  return words;
}

class Printer {
 public:
  explicit Printer(std::string prefix) : prefix_(std::move(prefix)) {}

  std::string var(const std::string& name) const { return smt2_symbol(prefix_ + name); }

  std::string term(const LinearTerm& t) const {
    std::vector<std::string> parts;
    for (const auto& [name, c] : t.coefficients()) {
      parts.push_back(c == 1 ? var(name) : "(* " + smt2_rational(c) + " " + var(name) + ")");
    }
    return sum(parts);
  }

  std::string formula(const Formula& f) const {
    switch (f.kind()) {
      case Formula::Kind::True: return "true";
      case Formula::Kind::False: return "false";
      case Formula::Kind::Prop: return var(f.name());
      case Formula::Kind::Linear:
        return std::string("(") + to_symbol(f.relation()) + " " + term(f.term()) + " " + smt2_rational(f.bound()) +
               ")";
      case Formula::Kind::Not: return "(not " + formula(f.operands()[0]) + ")";
      case Formula::Kind::And: return nary("and", f.operands());
      case Formula::Kind::Or: return nary("or", f.operands());
      case Formula::Kind::Implies: return nary("=>", f.operands());
      case Formula::Kind::Iff: return nary("=", f.operands());
    }
    return "true";
  }

  std::string objective(const ObjectiveTerm& t) const {
    std::vector<std::string> parts;
    for (const auto& [ind, c] : t.indicators) {
      std::string coerced = "(ite " + formula(ind) + " 1 0)";
      parts.push_back(c == 1 ? coerced : "(* " + smt2_rational(c) + " " + coerced + ")");
    }
    for (const auto& [name, c] : t.numeric.coefficients()) {
      parts.push_back(c == 1 ? var(name) : "(* " + smt2_rational(c) + " " + var(name) + ")");
    }
    if (t.constant != 0) parts.push_back(smt2_rational(t.constant));
    return sum(parts);
  }

 private:
  static std::string sum(const std::vector<std::string>& parts) {
    if (parts.empty()) return "0";
    if (parts.size() == 1) return parts[0];
    std::string out = "(+";
    for (const auto& p : parts) out += " " + p;
    return out + ")";
  }

  std::string nary(const char* op, const std::vector<Formula>& operands) const {
    std::string out = std::string("(") + op;
    for (const auto& o : operands) out += " " + formula(o);
    return out + ")";
  }

  std::string prefix_;
};

void check_prefix(const std::string& prefix) {
  if (prefix.empty()) return;
  if (is_digit(prefix[0])) throw InvalidPrefix("name prefix '" + prefix + "' starts with a digit");
  for (char c : prefix) {
    if (!symbol_char(c)) throw InvalidPrefix("name prefix '" + prefix + "' contains '" + std::string(1, c) + "'");
  }
}

}  // namespace

std::string smt2_symbol(const std::string& name) {
  bool simple = !name.empty() && !is_digit(name[0]) && !clashing_words().count(name);
  for (char c : name) simple = simple && symbol_char(c);
  if (simple) return name;
  if (name.find_first_of("|\\") != std::string::npos) {
    throw std::invalid_argument("'" + name + "' cannot be written as an SMT-LIB symbol");
  }
  return "|" + name + "|";
}

std::string smt2_rational(const Rational& value) {
  Rational a = abs(value);
  std::string body = a.get_den() == 1 ? a.get_num().get_str()
                                      : "(/ " + a.get_num().get_str() + " " + a.get_den().get_str() + ")";
  return value < 0 ? "(- " + body + ")" : body;
}

std::string export_smt2(const CgmModel& model, std::span<const ObjectiveSpec> objectives,
                        const ExportOptions& options) {
  check_prefix(options.name_prefix);
  std::vector<Conjunct> conjuncts = encode_conjuncts(model);
  Problem problem = make_problem(model);
  Printer p(options.name_prefix);

  std::ostringstream out;
  out << "; constrained goal model, " << model.elements.size() << " elements, " << model.refinements.size()
      << " refinements\n";
  out << "(set-option :produce-models true)\n";
  bool emit_objectives = options.include_objectives && !objectives.empty();
  if (emit_objectives && options.lexicographic_mode) out << "(set-option :opt.priority lex)\n";
  out << "(set-logic QF_LRA)\n";
  for (const auto& b : problem.bool_vars) out << "(declare-fun " << p.var(b) << " () Bool)\n";
  for (const auto& n : problem.num_vars) out << "(declare-fun " << p.var(n) << " () Real)\n";
  for (const auto& c : conjuncts) {
    out << "; " << c.origin << "\n";
    out << "(assert " << p.formula(c.formula) << ")\n";
  }
  if (emit_objectives) {
    out << "; objectives, " << (options.lexicographic_mode ? "lexicographic" : "independent") << " order:\n";
    for (std::size_t i = 0; i < objectives.size(); ++i) {
      out << ";   " << i + 1 << ". " << to_string(objectives[i].polarity) << " " << objectives[i].name << "\n";
    }
    for (const auto& o : objectives) {
      out << "(" << (o.polarity == Polarity::Minimize ? "minimize" : "maximize") << " " << p.objective(o.term)
          << ")\n";
    }
  }
  out << "(check-sat)\n";
  if (emit_objectives) out << "(get-objectives)\n";
  return out.str();
}

}  // namespace cgm
