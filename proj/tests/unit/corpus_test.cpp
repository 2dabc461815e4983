#include <gtest/gtest.h>

#include <algorithm>

#include "cgm/encoder.hpp"
#include "cgm/json_io.hpp"
#include "cgm/reasoning.hpp"
#include "corpus.hpp"

using namespace cgm;
using support::load_corpus_model;

namespace {

bool has_violation(const CheckResult& r, const std::string& condition, const std::string& origin) {
  return std::any_of(r.violations.begin(), r.violations.end(),
                     [&](const Violation& v) { return v.condition == condition && v.origin == origin; });
}

std::vector<Rational> triple(const CgmModel& m, const Realization& r) {
  auto v = builtin_values(m, r);
  return {v.at("penaltyMinusReward"), v.at("workTime"), v.at("cost")};
}

}  // namespace

TEST(Corpus, ReconstructedCounts) {
  CgmModel m1 = load_corpus_model("meeting_m1.cgm");
  CgmModel m2 = load_corpus_model("meeting_m2.cgm");
  EXPECT_EQ(m1.elements.size(), 34u);
  EXPECT_EQ(m1.refinements.size(), 20u);
  EXPECT_EQ(m2.elements.size(), 39u);
  EXPECT_EQ(m2.refinements.size(), 22u);
  for (const char* id : {"ScheduleMeeting", "LowCost", "UseHotelsAndConventionCenters", "UseAvailableRoom"}) {
    EXPECT_NE(m1.find_element(id), nullptr) << id;
  }
}

TEST(Corpus, DeltaProducesM2) {
  CgmModel m1 = load_corpus_model("meeting_m1.cgm");
  auto d = parse_delta_json(support::read_file(support::corpus_path("m1_to_m2.delta.json")));
  CgmModel m2 = apply_delta(m1, d);
  EXPECT_TRUE(equivalent(m2, load_corpus_model("meeting_m2.cgm")));
  EXPECT_TRUE(equivalent(apply_delta(m2, inverse_delta(m1, d)), m1));
}

TEST(Corpus, Mu1IsTheOptimumOfM1) {
  CgmModel m1 = load_corpus_model("meeting_m1.cgm");
  RealizationDoc doc = parse_realization_json(support::read_file(support::corpus_path("mu1.json")));
  EXPECT_EQ(doc.model_hash, model_hash(m1));
  EXPECT_TRUE(check_realization(m1, doc.realization).valid());
  EXPECT_EQ(triple(m1, doc.realization), (std::vector<Rational>{-65, 2, 0}));
  auto objs = default_objectives(m1);
  objs.push_back(build_objective(m1, "numUnsatRequirements"));
  EXPECT_EQ(realize(m1, objs).model, doc.realization);
}

TEST(Corpus, RestrictionDropsRemovedVariables) {
  CgmModel m1 = load_corpus_model("meeting_m1.cgm");
  CgmModel m2 = load_corpus_model("meeting_m2.cgm");
  Realization r = restrict(support::load_mu1(), m1, m2);
  EXPECT_FALSE(r.truth.count("CancelLessImportantMeeting"));
  EXPECT_FALSE(r.truth.count("R18"));
  EXPECT_TRUE(r.truth.count("UseAvailableRoom"));
  EXPECT_FALSE(r.truth.count("SetSystemCalendar"));
  EXPECT_EQ(restrict(r, m2, m2), r);
}

TEST(Corpus, StaleRealizationViolatesR13) {
  CgmModel m1 = load_corpus_model("meeting_m1.cgm");
  CgmModel m2 = load_corpus_model("meeting_m2.cgm");
  Realization r = complete_with_defaults(restrict(support::load_mu1(), m1, m2), m2);
  CheckResult result = check_realization(m2, r);
  EXPECT_FALSE(result.valid());
  EXPECT_TRUE(has_violation(result, "b", "R13"));
}

TEST(Corpus, RecomputedLexOptimum) {
  CgmModel m2 = load_corpus_model("meeting_m2.cgm");
  Optimum o = realize(m2, default_objectives(m2));
  EXPECT_EQ(o.values, (std::vector<Rational>{-65, 4, 0}));
  EXPECT_TRUE(check_realization(m2, o.model).valid());
}

TEST(Corpus, LowCostExcludesHotels) {
  CgmModel m1 = load_corpus_model("meeting_m1.cgm");
  m1.assertions["LowCost"] = Mark::Satisfied;
  auto all = enumerate_realizations(m1);
  ASSERT_FALSE(all.empty());
  for (const auto& r : all) EXPECT_FALSE(r.truth.at("UseHotelsAndConventionCenters"));
}

TEST(Corpus, MoreThanTwentyRealizations) {
  CgmModel m1 = load_corpus_model("meeting_m1.cgm");
  EXPECT_GT(enumerate_realizations(m1, 21).size(), 20u);
}
