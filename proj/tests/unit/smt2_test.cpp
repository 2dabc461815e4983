#include <gtest/gtest.h>

#include <random>

#include "cgm/dsl.hpp"
#include "cgm/encoder.hpp"
#include "cgm/smt2.hpp"
#include "corpus.hpp"
#include "smt_interp.hpp"

using namespace cgm;
using support::SmtEnv;
using support::SmtScript;

namespace {

CgmModel parse(const std::string& text) {
  ParseResult r = parse_dsl(text);
  if (!r.ok()) throw std::runtime_error(format(r.diagnostics.at(0)));
  return *r.model;
}

}  // namespace

TEST(Smt2, ToyTranslation) {
  std::string text = export_smt2(parse("goal G; task T; refinement R: G <- T;"), {});
  EXPECT_NE(text.find("(assert (= G R))"), std::string::npos);
  EXPECT_NE(text.find("(assert (= R T))"), std::string::npos);
  EXPECT_NE(text.find("(set-logic QF_LRA)"), std::string::npos);
  EXPECT_NE(text.find("(declare-fun G () Bool)"), std::string::npos);
  EXPECT_NE(text.find("(check-sat)"), std::string::npos);
  EXPECT_EQ(text.find("(get-objectives)"), std::string::npos);
  EXPECT_EQ(text.find('\r'), std::string::npos);
}

TEST(Smt2, Deterministic) {
  for (const char* name : {"meeting_m1.cgm", "meeting_m2.cgm"}) {
    CgmModel m = support::load_corpus_model(name);
    auto objs = default_objectives(m);
    EXPECT_EQ(export_smt2(m, objs), export_smt2(m, objs)) << name;
  }
}

TEST(Smt2, PenaltyMinusRewardParsesBack) {
  CgmModel m = support::load_corpus_model("meeting_m1.cgm");
  std::vector<ObjectiveSpec> objs{build_objective(m, "penaltyMinusReward"), build_objective(m, "workTime")};
  SmtScript script = SmtScript::parse(export_smt2(m, objs));
  ASSERT_EQ(script.objectives.size(), 2u);
  EXPECT_EQ(script.objectives[0].first, "minimize");
  EXPECT_EQ(script.options.at(":opt.priority"), "lex");
  EXPECT_TRUE(script.get_objectives);
  Problem p = make_problem(m);
  std::mt19937_64 rng(7);
  for (int k = 0; k < 50; ++k) {
    Assignment a;
    SmtEnv env;
    for (const auto& v : p.bool_vars) env.bools[v] = a.truth[v] = std::bernoulli_distribution(0.5)(rng);
    for (const auto& v : p.num_vars) {
      env.reals[v] = a.values[v] = Rational(std::uniform_int_distribution<int>(-20, 20)(rng)) / 3;
    }
    for (std::size_t i = 0; i < objs.size(); ++i) {
      EXPECT_EQ(support::smt_eval_real(script.objectives[i].second, env), objs[i].term.evaluate(a));
    }
  }
}

TEST(Smt2, MaximizeAndOptions) {
  CgmModel m = support::load_corpus_model("meeting_m1.cgm");
  auto objs = parse_objective_list(m, "max:cost");
  ExportOptions o;
  o.lexicographic_mode = false;
  std::string text = export_smt2(m, objs, o);
  EXPECT_NE(text.find("(maximize cost)"), std::string::npos);
  EXPECT_EQ(text.find(":opt.priority"), std::string::npos);
  o.include_objectives = false;
  text = export_smt2(m, objs, o);
  EXPECT_EQ(text.find("maximize"), std::string::npos);
}

TEST(Smt2, PrefixAppliesToEverySymbol) {
  ExportOptions o;
  o.name_prefix = "m1.";
  SmtScript script = SmtScript::parse(export_smt2(parse("goal G; task T; refinement R: G <- T;"), {}, o));
  EXPECT_EQ(script.bool_decls, (std::vector<std::string>{"m1.G", "m1.T", "m1.R"}));
  o.name_prefix = "bad prefix";
  EXPECT_THROW(export_smt2(parse("goal G;"), {}, o), InvalidPrefix);
  o.name_prefix = "9x";
  EXPECT_THROW(export_smt2(parse("goal G;"), {}, o), InvalidPrefix);
}

TEST(Smt2, SymbolsAndRationals) {
  EXPECT_EQ(smt2_symbol("ScheduleMeeting"), "ScheduleMeeting");
  EXPECT_EQ(smt2_symbol("and"), "|and|");
  EXPECT_EQ(smt2_symbol("has space"), "|has space|");
  EXPECT_THROW(smt2_symbol("a|b"), std::invalid_argument);
  EXPECT_EQ(smt2_rational(5), "5");
  EXPECT_EQ(smt2_rational(-5), "(- 5)");
  EXPECT_EQ(smt2_rational(Rational(7, 2)), "(/ 7 2)");
  EXPECT_EQ(smt2_rational(Rational(-7, 2)), "(- (/ 7 2))");
}

TEST(Smt2, InvalidModel) {
  CgmModel m;
  m.elements = {{"G"}};
  m.refinements = {{"R", "G", {"G"}}};
  EXPECT_THROW(export_smt2(m, {}), InvalidModel);
}

TEST(Smt2, CorpusAssertsHoldOnMu1) {
  CgmModel m1 = support::load_corpus_model("meeting_m1.cgm");
  SmtScript script = SmtScript::parse(export_smt2(m1, default_objectives(m1)));
  Realization mu1 = support::load_mu1();
  SmtEnv env{mu1.truth, mu1.values};
  for (const auto& a : script.asserts) EXPECT_TRUE(support::smt_eval_bool(a, env));
  env.bools["ConfirmOccurrence"] = env.bools["CancelMeeting"] = true;
  bool all = true;
  for (const auto& a : script.asserts) all = all && support::smt_eval_bool(a, env);
  EXPECT_FALSE(all);
}
