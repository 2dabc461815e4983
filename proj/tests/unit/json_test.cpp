#include <gtest/gtest.h>

#include "cgm/dsl.hpp"
#include "cgm/json_io.hpp"
#include "corpus.hpp"

using namespace cgm;

namespace {

CgmModel toy() {
  return *parse_dsl("goal G { assert satisfied; } task T { penalty 15; } refinement R1: G <- T;").model;
}

}  // namespace

TEST(Json, ToyRoundTrip) {
  CgmModel m = toy();
  ParseResult r = parse_json(to_json(m));
  ASSERT_TRUE(r.ok());
  EXPECT_TRUE(equivalent(*r.model, m));
}

TEST(Json, CorpusRoundTrip) {
  for (const char* name : {"meeting_m1.cgm", "meeting_m2.cgm"}) {
    CgmModel m = support::load_corpus_model(name);
    ParseResult r = parse_json(to_json(m));
    ASSERT_TRUE(r.ok()) << name;
    EXPECT_TRUE(equivalent(*r.model, m)) << name;
    EXPECT_EQ(model_hash(*r.model), model_hash(m)) << name;
  }
}

TEST(Json, RequiredFieldNames) {
  std::string text = to_json(toy());
  for (const char* field : {"\"elements\"", "\"refinements\"", "\"edges\"", "\"attributes\"", "\"constraints\"",
                            "\"assertions\""}) {
    EXPECT_NE(text.find(field), std::string::npos) << field;
  }
}

TEST(Json, RationalsAsStrings) {
  CgmModel m = toy();
  m.attributes = {"workTime"};
  m.elements[1].attr_values["workTime"] = {Rational(7, 2), 0};
  std::string text = to_json(m);
  EXPECT_NE(text.find("\"7/2\""), std::string::npos);
  ParseResult r = parse_json(text);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.model->find_element("T")->attr_values.at("workTime").when_satisfied, Rational(7, 2));
}

TEST(Json, MalformedRationalDiagnostic) {
  std::string text = to_json(toy());
  std::string needle = "\"15\"";
  auto pos = text.find(needle);
  ASSERT_NE(pos, std::string::npos);
  text.replace(pos, needle.size(), "\"1/0\"");
  ParseResult r = parse_json(text);
  ASSERT_FALSE(r.ok());
  EXPECT_NE(r.diagnostics[0].message.find("zero denominator"), std::string::npos);
}

TEST(Json, SyntaxAndSchemaErrors) {
  EXPECT_FALSE(parse_json("{ not json").ok());
  EXPECT_FALSE(parse_json("[]").ok());
  EXPECT_FALSE(parse_json(R"({"elements": 3})").ok());
}

TEST(Json, HashIgnoresDeclarationOrder) {
  CgmModel m = support::load_corpus_model("meeting_m1.cgm");
  CgmModel shuffled = m;
  std::reverse(shuffled.elements.begin(), shuffled.elements.end());
  std::reverse(shuffled.refinements.begin(), shuffled.refinements.end());
  EXPECT_EQ(model_hash(shuffled), model_hash(m));
  EXPECT_EQ(model_hash(m).rfind("sha256:", 0), 0u);
  EXPECT_EQ(model_hash(m).size(), 7u + 64u);
  CgmModel changed = m;
  changed.elements[0].label += "!";
  EXPECT_NE(model_hash(changed), model_hash(m));
}

TEST(Json, RealizationRoundTrip) {
  Realization r;
  r.truth = {{"G", true}, {"T", false}};
  r.values = {{"cost", Rational(-7, 2)}};
  RealizationDoc doc = parse_realization_json(realization_to_json(r, "sha256:abc"));
  EXPECT_EQ(doc.realization, r);
  EXPECT_EQ(doc.model_hash, "sha256:abc");
}

TEST(Json, CorpusDeltaRoundTrip) {
  auto d = parse_delta_json(support::read_file(support::corpus_path("m1_to_m2.delta.json")));
  auto again = parse_delta_json(delta_to_json(d));
  ASSERT_EQ(again.size(), d.size());
  CgmModel m1 = support::load_corpus_model("meeting_m1.cgm");
  EXPECT_TRUE(equivalent(apply_delta(m1, again), apply_delta(m1, d)));
}
