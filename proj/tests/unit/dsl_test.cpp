#include <gtest/gtest.h>

#include <algorithm>

#include "cgm/dsl.hpp"
#include "cgm/json_io.hpp"

using namespace cgm;

namespace {

bool mentions(const ParseResult& r, const std::string& text) {
  return std::any_of(r.diagnostics.begin(), r.diagnostics.end(),
                     [&](const ParseDiagnostic& d) { return d.message.find(text) != std::string::npos; });
}

}  // namespace

TEST(Dsl, ToyModel) {
  ParseResult r = parse_dsl("goal G { root; assert satisfied; } task T { penalty 15; } refinement R1: G <- T;");
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.model->elements.size(), 2u);
  EXPECT_EQ(r.model->refinements.size(), 1u);
  EXPECT_EQ(r.model->assertions.at("G"), Mark::Satisfied);
  EXPECT_EQ(r.model->find_element("T")->penalty, 15);
}

TEST(Dsl, ConflictEndpointsMustDiffer) {
  ParseResult r = parse_dsl("conflict A >< A;");
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(mentions(r, "conflict endpoints must differ"));
}

TEST(Dsl, ZeroDenominator) {
  ParseResult r = parse_dsl("goal G; task T; refinement R: G <- T;\nattr cost of T = 1/0 when satisfied;");
  ASSERT_FALSE(r.ok());
  EXPECT_TRUE(mentions(r, "zero denominator"));
  EXPECT_EQ(r.diagnostics[0].span.start_line, 2);
}

TEST(Dsl, SyntaxErrorCarriesSpanAndExpectedTokens) {
  ParseResult r = parse_dsl("goal G {\n  reward ;\n}");
  ASSERT_FALSE(r.ok());
  const ParseDiagnostic& d = r.diagnostics.front();
  EXPECT_EQ(d.severity, Severity::Error);
  EXPECT_EQ(d.span.start_line, 2);
  EXPECT_GE(d.span.start_col, 1);
}

TEST(Dsl, StructuralRulesBecomeDiagnostics) {
  EXPECT_TRUE(mentions(parse_dsl("goal G; refinement R: G <- G;"), "cycle"));
  EXPECT_TRUE(mentions(parse_dsl("goal G; task T { reward 3; } refinement R: G <- T;"), "not a requirement"));
  EXPECT_TRUE(mentions(parse_dsl("goal A; goal A;"), "already declared"));
  EXPECT_FALSE(parse_dsl("goal 1G;").ok());
}

TEST(Dsl, FullGrammar) {
  const char* text = R"(
    // every statement kind
    attribute cost;
    goal G { reward 5; }
    goal H;
    task A { penalty 1; }
    task B { penalty 2; }
    task C;
    assumption D;
    refinement R1: G <- A, B;
    refinement R2: G <- C, D;
    refinement R3: H <- A;
    contribution A -> C;
    conflict B >< C;
    bind R1 = R2;
    prefer A > B;
    attr cost of A = 7/2 when satisfied, 1 when denied;
    constraint (A | B) -> cost <= 10;
    constraint !(cost < 0) & (A <-> A);
    assert H denied;
    objective lex minimize [penaltyMinusReward, cost, numUnsatPrefs];
  )";
  ParseResult r = parse_dsl(text);
  ASSERT_TRUE(r.ok()) << (r.diagnostics.empty() ? "" : format(r.diagnostics[0]));
  const CgmModel& m = *r.model;
  EXPECT_EQ(m.elements.size(), 6u);
  EXPECT_EQ(m.refinements.size(), 3u);
  EXPECT_EQ(m.edges.size(), 4u);
  EXPECT_EQ(m.constraints.size(), 2u);
  EXPECT_EQ(m.find_element("A")->attr_values.at("cost"), (AttrValue{Rational(7, 2), 1}));
  EXPECT_EQ(m.find_element("D")->kind, ElementKind::Assumption);
  EXPECT_EQ(m.assertions.at("H"), Mark::Denied);
  ASSERT_EQ(m.objectives.size(), 3u);
  EXPECT_EQ(m.objectives[1].name, "cost");

  ParseResult again = parse_dsl(to_dsl(m));
  ASSERT_TRUE(again.ok());
  EXPECT_TRUE(equivalent(*again.model, m));
}

TEST(Dsl, FormulaSyntax) {
  std::string error;
  auto f = parse_formula("A & !B -> (x + 2*y <= 3 | C <-> D)", &error);
  ASSERT_TRUE(f) << error;
  EXPECT_EQ(f->kind(), Formula::Kind::Implies);
  EXPECT_FALSE(parse_formula("A & ", &error));
  EXPECT_FALSE(error.empty());
}

TEST(Dsl, Identifiers) {
  EXPECT_TRUE(is_identifier("UseAvailableRoom"));
  EXPECT_TRUE(is_identifier("_x1"));
  EXPECT_FALSE(is_identifier("1x"));
  EXPECT_FALSE(is_identifier("a-b"));
  EXPECT_TRUE(is_reserved_word("goal"));
}
