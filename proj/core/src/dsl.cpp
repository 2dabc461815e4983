#include "cgm/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace cgm {

namespace {

const std::set<std::string, std::less<>> kReserved = {
    "goal",    "task",      "assumption", "refinement", "contribution", "conflict", "bind",
    "prefer",  "attr",      "attribute",  "constraint", "assert",       "objective", "lex",
    "minimize", "maximize", "true",       "false",      "satisfied",    "denied",    "when",
    "of",      "root",      "reward",     "penalty",    "label"};

enum class Tok {
  Ident, Number, String, LBrace, RBrace, LParen, RParen, LBracket, RBracket, Semi, Colon, Comma,
  LeftArrow, Arrow, DoubleArrow, Bowtie, Eq, Lt, Le, Gt, Ge, Not, And, Or, Star, Plus, Minus, End, Bad
};

const char* describe(Tok t) {
  switch (t) {
    case Tok::Ident: return "identifier";
    case Tok::Number: return "number";
    case Tok::String: return "string";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Semi: return "';'";
    case Tok::Colon: return "':'";
    case Tok::Comma: return "','";
    case Tok::LeftArrow: return "'<-'";
    case Tok::Arrow: return "'->'";
    case Tok::DoubleArrow: return "'<->'";
    case Tok::Bowtie: return "'><'";
    case Tok::Eq: return "'='";
    case Tok::Lt: return "'<'";
    case Tok::Le: return "'<='";
    case Tok::Gt: return "'>'";
    case Tok::Ge: return "'>='";
    case Tok::Not: return "'!'";
    case Tok::And: return "'&'";
    case Tok::Or: return "'|'";
    case Tok::Star: return "'*'";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::End: return "end of input";
    case Tok::Bad: return "invalid character";
  }
  return "?";
}

struct Token {
  Tok kind = Tok::End;
  std::string text;
  SourceSpan span;
};

class Lexer {
 public:
  Lexer(std::string_view text, const std::string& file) : text_(text), file_(file) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      Token t;
      t.span.file = file_;
      t.span.start_line = line_;
      t.span.start_col = col_;
      if (pos_ >= text_.size()) {
        t.kind = Tok::End;
        finish(t);
        out.push_back(t);
        return out;
      }
      char c = text_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
          t.text += advance();
        }
        t.kind = Tok::Ident;
      } else if (std::isdigit(static_cast<unsigned char>(c))) {
        lex_number(t);
      } else if (c == '"') {
        lex_string(t);
      } else {
        lex_punct(t);
      }
      finish(t);
      out.push_back(std::move(t));
    }
  }

 private:
  char peek(std::size_t ahead = 0) const { return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0'; }

  char advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void finish(Token& t) {
    t.span.end_line = line_;
    t.span.end_col = col_;
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else {
        break;
      }
    }
  }

  void lex_number(Token& t) {
    auto digits = [&] {
      while (std::isdigit(static_cast<unsigned char>(peek()))) t.text += advance();
    };
    digits();
    if ((peek() == '.' || peek() == '/') && std::isdigit(static_cast<unsigned char>(peek(1)))) {
      t.text += advance();
      digits();
    }
    t.kind = Tok::Number;
  }

  void lex_string(Token& t) {
    advance();
    t.kind = Tok::String;
    while (pos_ < text_.size() && peek() != '"' && peek() != '\n') {
      char c = advance();
      if (c == '\\' && pos_ < text_.size()) c = advance();
      t.text += c;
    }
    if (peek() == '"') {
      advance();
    } else {
      t.kind = Tok::Bad;
      t.text = "unterminated string";
    }
  }

  void lex_punct(Token& t) {
    auto take = [&](Tok kind, int n) {
      for (int i = 0; i < n; ++i) t.text += advance();
      t.kind = kind;
    };
    char c = peek();
    switch (c) {
      case '{': return take(Tok::LBrace, 1);
      case '}': return take(Tok::RBrace, 1);
      case '(': return take(Tok::LParen, 1);
      case ')': return take(Tok::RParen, 1);
      case '[': return take(Tok::LBracket, 1);
      case ']': return take(Tok::RBracket, 1);
      case ';': return take(Tok::Semi, 1);
      case ':': return take(Tok::Colon, 1);
      case ',': return take(Tok::Comma, 1);
      case '=': return take(Tok::Eq, 1);
      case '!': return take(Tok::Not, 1);
      case '&': return take(Tok::And, 1);
      case '|': return take(Tok::Or, 1);
      case '*': return take(Tok::Star, 1);
      case '+': return take(Tok::Plus, 1);
      case '-': return peek(1) == '>' ? take(Tok::Arrow, 2) : take(Tok::Minus, 1);
      case '<':
        if (peek(1) == '-' && peek(2) == '>') return take(Tok::DoubleArrow, 3);
        if (peek(1) == '-') return take(Tok::LeftArrow, 2);
        if (peek(1) == '=') return take(Tok::Le, 2);
        return take(Tok::Lt, 1);
      case '>':
        if (peek(1) == '<') return take(Tok::Bowtie, 2);
        if (peek(1) == '=') return take(Tok::Ge, 2);
        return take(Tok::Gt, 1);
      default:
        take(Tok::Bad, 1);
    }
  }

  std::string_view text_;
  std::string file_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

struct SyntaxError {};

SourceSpan join(const SourceSpan& a, const SourceSpan& b) {
  SourceSpan s = a;
  s.end_line = b.end_line;
  s.end_col = b.end_col;
  return s;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::vector<ParseDiagnostic>& diags)
      : tokens_(std::move(tokens)), diags_(diags) {}

  ParseResult parse_model();
  std::optional<Formula> parse_standalone_formula();

 private:
  struct Declared {
    SourceSpan span;
    std::string keyword;
    bool root_flag = false;
  };

  const Token& cur() const { return tokens_[pos_]; }
  const Token& peek_token(std::size_t ahead) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  bool at(Tok k) const { return cur().kind == k; }
  bool at_word(std::string_view w) const { return at(Tok::Ident) && cur().text == w; }
  Token consume() {
    Token t = cur();
    if (pos_ + 1 < tokens_.size()) ++pos_;
    return t;
  }

  [[noreturn]] void fail(std::vector<std::string> expected) {
    ParseDiagnostic d;
    d.span = cur().span;
    d.expected = expected;
    std::string found = at(Tok::Bad) ? cur().text : (at(Tok::End) ? "end of input" : "'" + cur().text + "'");
    d.message = "expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) d.message += i + 1 == expected.size() ? " or " : ", ";
      d.message += expected[i];
    }
    d.message += ", found " + found;
    diags_.push_back(std::move(d));
    throw SyntaxError{};
  }

  void error(const SourceSpan& span, std::string message, Severity severity = Severity::Error) {
    diags_.push_back({severity, span, std::move(message), {}});
  }

  Token expect(Tok k) {
    if (!at(k)) fail({describe(k)});
    return consume();
  }

  void expect_word(std::string_view w) {
    if (!at_word(w)) fail({"'" + std::string(w) + "'"});
    consume();
  }

  Token identifier() {
    if (!at(Tok::Ident)) fail({"identifier"});
    if (kReserved.count(cur().text)) fail({"identifier"});
    return consume();
  }

  Rational number_literal() {
    bool negative = false;
    SourceSpan start = cur().span;
    if (at(Tok::Minus) || at(Tok::Plus)) negative = consume().kind == Tok::Minus;
    if (!at(Tok::Number)) fail({"number"});
    Token t = consume();
    std::string err;
    auto value = parse_rational(t.text, &err);
    if (!value) {
      error(join(start, t.span), err);
      return 0;
    }
    return negative ? Rational(-*value) : *value;
  }

  void recover() {
    while (!at(Tok::End)) {
      Tok k = consume().kind;
      if (k == Tok::Semi || k == Tok::RBrace) return;
    }
  }

  void statement();
  void element_decl();
  void refinement_decl();
  void objective_decl();
  Formula formula();
  Formula implication();
  Formula disjunction();
  Formula conjunction();
  Formula unary();
  Formula primary();
  Formula comparison();
  bool starts_comparison() const;
  void linear_sum(LinearTerm& term, Rational& constant);

  void declare(const std::string& id, const SourceSpan& span, const std::string& keyword) {
    if (declared_.count(id)) {
      error(span, "'" + id + "' is already declared");
      return;
    }
    declared_[id] = {span, keyword, false};
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::vector<ParseDiagnostic>& diags_;
  CgmModel model_;
  std::map<std::string, Declared> declared_;
  std::map<std::string, SourceSpan> attr_spans_;
  std::vector<std::pair<std::size_t, SourceSpan>> edge_spans_;
  std::vector<SourceSpan> constraint_spans_;
};

void Parser::element_decl() {
  Token kw = consume();
  Token id = identifier();
  Element e;
  e.id = id.text;
  e.kind = kw.text == "assumption" ? ElementKind::Assumption : ElementKind::Goal;
  declare(e.id, id.span, kw.text);
  bool root_flag = false;
  if (at(Tok::Semi)) {
    consume();
  } else {
    expect(Tok::LBrace);
    while (!at(Tok::RBrace)) {
      if (at(Tok::End)) fail({"'}'"});
      SourceSpan item = cur().span;
      if (at_word("root")) {
        consume();
        root_flag = true;
      } else if (at_word("assert")) {
        consume();
        if (at_word("satisfied") || at_word("denied")) {
          Mark m = consume().text == "satisfied" ? Mark::Satisfied : Mark::Denied;
          if (model_.assertions.count(e.id)) error(item, "'" + e.id + "' is asserted twice");
          model_.assertions[e.id] = m;
        } else {
          fail({"'satisfied'", "'denied'"});
        }
      } else if (at_word("reward")) {
        consume();
        e.reward = number_literal();
      } else if (at_word("penalty")) {
        consume();
        e.penalty = number_literal();
      } else if (at_word("label")) {
        consume();
        e.label = expect(Tok::String).text;
      } else {
        fail({"'root'", "'assert'", "'reward'", "'penalty'", "'label'", "'}'"});
      }
      expect(Tok::Semi);
    }
    consume();
  }
  if (declared_.count(e.id) && declared_[e.id].span.start_line == id.span.start_line &&
      declared_[e.id].span.start_col == id.span.start_col) {
    declared_[e.id].root_flag = root_flag;
    model_.elements.push_back(std::move(e));
  }
}

void Parser::refinement_decl() {
  consume();
  Token id = identifier();
  expect(Tok::Colon);
  Token target = identifier();
  expect(Tok::LeftArrow);
  Refinement r;
  r.id = id.text;
  r.target = target.text;
  r.sources.push_back(identifier().text);
  while (at(Tok::Comma)) {
    consume();
    r.sources.push_back(identifier().text);
  }
  expect(Tok::Semi);
  declare(r.id, id.span, "refinement");
  model_.refinements.push_back(std::move(r));
}

void Parser::objective_decl() {
  consume();
  if (at_word("lex")) consume();
  Polarity polarity = Polarity::Minimize;
  if (at_word("minimize") || at_word("maximize")) {
    polarity = consume().text == "maximize" ? Polarity::Maximize : Polarity::Minimize;
  }
  auto item = [&] {
    Polarity p = polarity;
    if (at_word("minimize") || at_word("maximize")) {
      p = consume().text == "maximize" ? Polarity::Maximize : Polarity::Minimize;
    }
    if (!at(Tok::Ident)) fail({"objective name"});
    model_.objectives.push_back({consume().text, p});
  };
  if (at(Tok::LBracket)) {
    consume();
    item();
    while (at(Tok::Comma)) {
      consume();
      item();
    }
    expect(Tok::RBracket);
  } else {
    item();
  }
  expect(Tok::Semi);
}

void Parser::statement() {
  SourceSpan start = cur().span;
  if (at_word("goal") || at_word("task") || at_word("assumption")) return element_decl();
  if (at_word("refinement")) return refinement_decl();
  if (at_word("objective")) return objective_decl();
  if (at_word("contribution") || at_word("conflict") || at_word("bind") || at_word("prefer")) {
    std::string kw = consume().text;
    Token a = identifier();
    Tok sep = kw == "contribution" ? Tok::Arrow : kw == "conflict" ? Tok::Bowtie : kw == "bind" ? Tok::Eq : Tok::Gt;
    expect(sep);
    Token b = identifier();
    Token semi = expect(Tok::Semi);
    SourceSpan span = join(start, semi.span);
    if (kw == "conflict" && a.text == b.text) {
      error(span, "conflict endpoints must differ");
      return;
    }
    RelationEdge edge;
    if (kw == "contribution") edge = Contribution{a.text, b.text};
    if (kw == "conflict") edge = make_conflict(a.text, b.text);
    if (kw == "bind") edge = Binding{a.text, b.text};
    if (kw == "prefer") edge = Preference{a.text, b.text};
    edge_spans_.emplace_back(model_.edges.size(), span);
    model_.edges.push_back(std::move(edge));
    return;
  }
  if (at_word("attribute")) {
    consume();
    Token name = identifier();
    expect(Tok::Semi);
    if (model_.has_attribute(name.text)) {
      error(name.span, "attribute '" + name.text + "' is already declared");
    } else {
      model_.attributes.push_back(name.text);
      attr_spans_[name.text] = name.span;
    }
    return;
  }
  if (at_word("attr")) {
    consume();
    Token name = identifier();
    expect_word("of");
    Token id = identifier();
    expect(Tok::Eq);
    AttrValue v;
    v.when_satisfied = number_literal();
    expect_word("when");
    expect_word("satisfied");
    if (at(Tok::Comma)) {
      consume();
      v.when_denied = number_literal();
      expect_word("when");
      expect_word("denied");
    }
    Token semi = expect(Tok::Semi);
    if (!model_.has_attribute(name.text)) {
      model_.attributes.push_back(name.text);
      attr_spans_[name.text] = name.span;
    }
    auto it = std::find_if(model_.elements.begin(), model_.elements.end(),
                           [&](const Element& e) { return e.id == id.text; });
    if (it == model_.elements.end()) {
      error(id.span, "attr refers to undeclared element '" + id.text + "'");
    } else if (it->attr_values.count(name.text)) {
      error(join(start, semi.span), "attribute '" + name.text + "' of '" + id.text + "' is set twice");
    } else {
      it->attr_values[name.text] = v;
    }
    return;
  }
  if (at_word("constraint")) {
    consume();
    Formula f = formula();
    Token semi = expect(Tok::Semi);
    constraint_spans_.push_back(join(start, semi.span));
    model_.constraints.push_back(std::move(f));
    return;
  }
  if (at_word("assert")) {
    consume();
    Token id = identifier();
    if (!(at_word("satisfied") || at_word("denied"))) fail({"'satisfied'", "'denied'"});
    Mark m = consume().text == "satisfied" ? Mark::Satisfied : Mark::Denied;
    Token semi = expect(Tok::Semi);
    if (model_.assertions.count(id.text)) {
      error(join(start, semi.span), "'" + id.text + "' is asserted twice");
    } else {
      model_.assertions[id.text] = m;
    }
    return;
  }
  fail({"declaration"});
}

Formula Parser::formula() {
  Formula lhs = implication();
  while (at(Tok::DoubleArrow)) {
    consume();
    lhs = Formula::equivalence(lhs, implication());
  }
  return lhs;
}

Formula Parser::implication() {
  Formula lhs = disjunction();
  if (at(Tok::Arrow)) {
    consume();
    return Formula::implication(lhs, implication());
  }
  return lhs;
}

Formula Parser::disjunction() {
  std::vector<Formula> ops{conjunction()};
  while (at(Tok::Or)) {
    consume();
    ops.push_back(conjunction());
  }
  return Formula::disjunction(std::move(ops));
}

Formula Parser::conjunction() {
  std::vector<Formula> ops{unary()};
  while (at(Tok::And)) {
    consume();
    ops.push_back(unary());
  }
  return Formula::conjunction(std::move(ops));
}

Formula Parser::unary() {
  if (at(Tok::Not)) {
    consume();
    return !unary();
  }
  return primary();
}

bool Parser::starts_comparison() const {
  if (at(Tok::Number) || at(Tok::Minus) || at(Tok::Plus)) return true;
  if (!at(Tok::Ident)) return false;
  switch (peek_token(1).kind) {
    case Tok::Plus:
    case Tok::Minus:
    case Tok::Star:
    case Tok::Lt:
    case Tok::Le:
    case Tok::Eq:
    case Tok::Ge:
    case Tok::Gt:
      return true;
    default:
      return false;
  }
}

Formula Parser::primary() {
  if (at(Tok::LParen)) {
    consume();
    Formula f = formula();
    expect(Tok::RParen);
    return f;
  }
  if (at_word("true")) {
    consume();
    return Formula::constant(true);
  }
  if (at_word("false")) {
    consume();
    return Formula::constant(false);
  }
  if (starts_comparison()) return comparison();
  if (at(Tok::Ident) && !kReserved.count(cur().text)) return Formula::prop(consume().text);
  fail({"proposition", "comparison", "'('", "'!'"});
}

void Parser::linear_sum(LinearTerm& term, Rational& constant) {
  bool first = true;
  for (;;) {
    Rational sign = 1;
    if (at(Tok::Plus) || at(Tok::Minus)) {
      if (consume().kind == Tok::Minus) sign = -1;
    } else if (!first) {
      return;
    }
    first = false;
    if (at(Tok::Number)) {
      Rational c = number_literal() * sign;
      if (at(Tok::Star)) consume();
      if (at(Tok::Ident) && !kReserved.count(cur().text)) {
        term.add(consume().text, c);
      } else {
        constant += c;
      }
    } else if (at(Tok::Ident) && !kReserved.count(cur().text)) {
      term.add(consume().text, sign);
    } else {
      fail({"number", "identifier"});
    }
  }
}

Formula Parser::comparison() {
  LinearTerm lhs, rhs;
  Rational lhs_const = 0, rhs_const = 0;
  linear_sum(lhs, lhs_const);
  Relation rel;
  switch (cur().kind) {
    case Tok::Lt: rel = Relation::Less; break;
    case Tok::Le: rel = Relation::LessEqual; break;
    case Tok::Eq: rel = Relation::Equal; break;
    case Tok::Ge: rel = Relation::GreaterEqual; break;
    case Tok::Gt: rel = Relation::Greater; break;
    default: fail({"'<'", "'<='", "'='", "'>='", "'>'"});
  }
  consume();
  linear_sum(rhs, rhs_const);
  lhs -= rhs;
  return Formula::linear(std::move(lhs), rel, rhs_const - lhs_const);
}

std::optional<Formula> Parser::parse_standalone_formula() {
  try {
    Formula f = formula();
    if (!at(Tok::End)) fail({"end of formula"});
    if (std::any_of(diags_.begin(), diags_.end(), [](const auto& d) { return d.severity == Severity::Error; })) {
      return std::nullopt;
    }
    return f;
  } catch (const SyntaxError&) {
    return std::nullopt;
  }
}

ParseResult Parser::parse_model() {
  while (!at(Tok::End)) {
    try {
      statement();
    } catch (const SyntaxError&) {
      recover();
    }
  }

  SourceSpan fallback;
  fallback.file = tokens_.front().span.file;
  auto span_of = [&](const std::string& id) {
    auto it = declared_.find(id);
    if (it != declared_.end()) return it->second.span;
    auto at = attr_spans_.find(id);
    return at != attr_spans_.end() ? at->second : fallback;
  };

  bool syntax_ok = std::none_of(diags_.begin(), diags_.end(),
                                [](const auto& d) { return d.severity == Severity::Error; });
  if (syntax_ok) {
    for (const auto& d : validate_structure(model_)) {
      error(span_of(d.subject), d.message);
    }
    ModelIndex index(model_);
    for (const auto& [id, decl] : declared_) {
      if (decl.keyword == "task") {
        if (!index.is_leaf(id)) {
          error(decl.span, "'" + id + "' is declared as a task but is refined");
        } else if (index.is_root(id)) {
          error(decl.span, "'" + id + "' is declared as a task but is a root (a requirement)", Severity::Warning);
        }
      }
      if (decl.root_flag && !index.is_root(id)) {
        error(decl.span, "'" + id + "' is marked root but is a source of a refinement", Severity::Warning);
      }
    }
  }
  ParseResult result;
  std::stable_sort(diags_.begin(), diags_.end(), [](const ParseDiagnostic& a, const ParseDiagnostic& b) {
    return std::tie(a.span.start_line, a.span.start_col) < std::tie(b.span.start_line, b.span.start_col);
  });
  result.diagnostics = diags_;
  if (!result.has_errors()) result.model = std::move(model_);
  return result;
}

}  // namespace

bool ParseResult::has_errors() const {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const ParseDiagnostic& d) { return d.severity == Severity::Error; });
}

std::string format(const ParseDiagnostic& d) {
  std::ostringstream out;
  out << d.span.file << ':' << d.span.start_line << ':' << d.span.start_col << ": "
      << (d.severity == Severity::Error ? "error" : "warning") << ": " << d.message;
  return out.str();
}

bool is_reserved_word(std::string_view word) { return kReserved.count(word) > 0; }

bool is_identifier(std::string_view word) {
  if (word.empty() || std::isdigit(static_cast<unsigned char>(word.front()))) return false;
  for (char c : word) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  }
  return !is_reserved_word(word);
}

ParseResult parse_dsl(std::string_view text, const std::string& file) {
  std::vector<ParseDiagnostic> diags;
  Parser parser(Lexer(text, file).run(), diags);
  return parser.parse_model();
}

std::optional<Formula> parse_formula(std::string_view text, std::string* error) {
  std::vector<ParseDiagnostic> diags;
  Parser parser(Lexer(text, "<formula>").run(), diags);
  auto f = parser.parse_standalone_formula();
  if (!f && error) *error = diags.empty() ? "malformed formula" : diags.front().message;
  return f;
}

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string to_dsl(const CgmModel& model) {
  std::ostringstream out;
  ModelIndex index(model);
  for (const auto& a : model.attributes) out << "attribute " << a << ";\n";
  if (!model.attributes.empty()) out << '\n';
  for (const auto& e : model.elements) {
    const char* kw = e.kind == ElementKind::Assumption ? "assumption"
                     : index.classify(e.id) == Classification::Task ? "task"
                                                                    : "goal";
    std::vector<std::string> items;
    if (!e.label.empty()) items.push_back("label " + quote(e.label) + ";");
    if (e.reward != 0) items.push_back("reward " + to_string(e.reward) + ";");
    if (e.penalty != 0) items.push_back("penalty " + to_string(e.penalty) + ";");
    out << kw << ' ' << e.id;
    if (items.empty()) {
      out << ";\n";
    } else {
      out << " {";
      for (const auto& item : items) out << ' ' << item;
      out << " }\n";
    }
  }
  if (!model.refinements.empty()) out << '\n';
  for (const auto& r : model.refinements) {
    out << "refinement " << r.id << ": " << r.target << " <-";
    for (std::size_t i = 0; i < r.sources.size(); ++i) out << (i ? ", " : " ") << r.sources[i];
    out << ";\n";
  }
  if (!model.edges.empty()) out << '\n';
  for (const auto& edge : model.edges) out << describe(edge) << ";\n";
  bool any_attr = false;
  for (const auto& e : model.elements) {
    for (const auto& [name, v] : e.attr_values) {
      if (!any_attr) out << '\n';
      any_attr = true;
      out << "attr " << name << " of " << e.id << " = " << to_string(v.when_satisfied) << " when satisfied";
      if (v.when_denied != 0) out << ", " << to_string(v.when_denied) << " when denied";
      out << ";\n";
    }
  }
  if (!model.constraints.empty()) out << '\n';
  for (const auto& c : model.constraints) out << "constraint " << to_string(c) << ";\n";
  if (!model.assertions.empty()) out << '\n';
  for (const auto& [id, mark] : model.assertions) out << "assert " << id << ' ' << to_string(mark) << ";\n";
  if (!model.objectives.empty()) {
    bool uniform = std::all_of(model.objectives.begin(), model.objectives.end(),
                               [&](const ObjectiveRef& o) { return o.polarity == model.objectives[0].polarity; });
    out << "\nobjective lex";
    if (uniform) out << ' ' << to_string(model.objectives[0].polarity);
    out << " [";
    for (std::size_t i = 0; i < model.objectives.size(); ++i) {
      if (i) out << ", ";
      if (!uniform) out << to_string(model.objectives[i].polarity) << ' ';
      out << model.objectives[i].name;
    }
    out << "];\n";
  }
  return out.str();
}

}  // namespace cgm
