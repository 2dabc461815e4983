#include <gtest/gtest.h>

#include <algorithm>

#include "cgm/model.hpp"

using namespace cgm;

namespace {

// G <- R1 <- T
CgmModel toy() {
  CgmModel m;
  m.elements = {{"G"}, {"T"}};
  m.refinements = {{"R1", "G", {"T"}}};
  return m;
}

bool has_rule(const std::vector<Diagnostic>& ds, const std::string& rule, const std::string& subject) {
  return std::any_of(ds.begin(), ds.end(), [&](const Diagnostic& d) { return d.rule == rule && d.subject == subject; });
}

bool has_violation(const CheckResult& r, const std::string& condition, const std::string& origin) {
  return std::any_of(r.violations.begin(), r.violations.end(),
                     [&](const Violation& v) { return v.condition == condition && v.origin == origin; });
}

}  // namespace

TEST(ValidateStructure, WellFormedThreeElementModel) {
  CgmModel m = toy();
  m.elements.push_back({"T2"});
  m.refinements[0].sources.push_back("T2");
  EXPECT_TRUE(validate_structure(m).empty());
}

TEST(ValidateStructure, SelfLoopIsACycle) {
  CgmModel m;
  m.elements = {{"G"}};
  m.refinements = {{"R", "G", {"G"}}};
  EXPECT_TRUE(has_rule(validate_structure(m), "cycle", "R"));
}

TEST(ValidateStructure, LongerCycle) {
  CgmModel m;
  m.elements = {{"A"}, {"B"}, {"C"}};
  m.refinements = {{"R1", "A", {"B"}}, {"R2", "B", {"C"}}, {"R3", "C", {"A"}}};
  auto ds = validate_structure(m);
  EXPECT_TRUE(std::any_of(ds.begin(), ds.end(), [](const Diagnostic& d) { return d.rule == "cycle"; }));
}

TEST(ValidateStructure, RefinementTargetingAssumption) {
  CgmModel m = toy();
  m.elements.push_back({"A", ElementKind::Assumption});
  m.refinements.push_back({"R2", "A", {"T"}});
  EXPECT_TRUE(has_rule(validate_structure(m), "target-kind", "R2"));
}

TEST(ValidateStructure, WeightPlacement) {
  CgmModel m = toy();
  m.elements[1].reward = 3;   // T is a task
  m.elements[0].penalty = 2;  // G is a requirement
  auto ds = validate_structure(m);
  EXPECT_TRUE(has_rule(ds, "reward-placement", "T"));
  EXPECT_TRUE(has_rule(ds, "penalty-placement", "G"));
}

TEST(ValidateStructure, DanglingReferences) {
  CgmModel m = toy();
  m.edges.push_back(make_conflict("T", "Nope"));
  m.edges.push_back(Binding{"R1", "R9"});
  m.assertions["Ghost"] = Mark::Satisfied;
  auto ds = validate_structure(m);
  EXPECT_TRUE(has_rule(ds, "unknown-id", "Nope"));
  EXPECT_TRUE(has_rule(ds, "unknown-id", "R9"));
  EXPECT_TRUE(has_rule(ds, "unknown-id", "Ghost"));
}

TEST(CheckRealization, ValidToyAssignment) {
  Realization r;
  r.truth = {{"G", true}, {"R1", true}, {"T", true}};
  EXPECT_TRUE(check_realization(toy(), r).valid());
}

TEST(CheckRealization, BrokenConjunctionReportsConditionB) {
  Realization r;
  r.truth = {{"G", true}, {"R1", true}, {"T", false}};
  CheckResult result = check_realization(toy(), r);
  ASSERT_EQ(result.violations.size(), 1u);
  EXPECT_EQ(result.violations[0].condition, "b");
  EXPECT_EQ(result.violations[0].origin, "R1");
}

TEST(CheckRealization, ConditionAAndAssertion) {
  CgmModel m = toy();
  m.assertions["G"] = Mark::Satisfied;
  Realization r;
  r.truth = {{"G", false}, {"R1", true}, {"T", true}};
  CheckResult result = check_realization(m, r);
  EXPECT_TRUE(has_violation(result, "a", "G"));
  EXPECT_TRUE(has_violation(result, "assertion", "G"));
}

TEST(CheckRealization, AttributesAndConstraints) {
  CgmModel m = toy();
  m.attributes = {"cost"};
  m.elements[1].attr_values["cost"] = {80, 0};
  m.constraints.push_back(Formula::linear(LinearTerm::variable("cost"), Relation::Less, 50));
  Realization r;
  r.truth = {{"G", true}, {"R1", true}, {"T", true}};
  r.values = {{"cost", 80}, {"cost_T", 80}};
  CheckResult result = check_realization(m, r);
  ASSERT_EQ(result.violations.size(), 1u);
  EXPECT_EQ(result.violations[0].condition, "constraint");
  r.values["cost_T"] = 0;
  result = check_realization(m, r);
  EXPECT_TRUE(has_violation(result, "attribute", "cost_T"));
  EXPECT_TRUE(has_violation(result, "attribute", "cost"));
}

TEST(CheckRealization, EdgesOnlyBindWhenBothTargetsHold) {
  CgmModel m;
  m.elements = {{"G"}, {"H"}, {"A"}, {"B"}, {"C"}, {"D"}};
  m.refinements = {{"R1", "G", {"A"}}, {"R2", "G", {"B"}}, {"R3", "H", {"C"}}, {"R4", "H", {"D"}}};
  m.edges.push_back(Binding{"R1", "R3"});
  Realization r;
  r.truth = {{"G", true}, {"H", true}, {"A", true}, {"B", false}, {"C", false}, {"D", true},
             {"R1", true}, {"R2", false}, {"R3", false}, {"R4", true}};
  EXPECT_TRUE(has_violation(check_realization(m, r), "edge", describe(Binding{"R1", "R3"})));
  r.truth["H"] = r.truth["D"] = r.truth["R4"] = false;
  EXPECT_TRUE(check_realization(m, r).valid());
}

TEST(CheckRealization, MissingAssignmentThrows) {
  Realization r;
  r.truth = {{"G", true}, {"R1", true}};
  EXPECT_THROW(check_realization(toy(), r), MissingAssignment);
}

TEST(Restrict, KeepsOnlySharedVariables) {
  CgmModel from, to;
  from.elements = {{"A"}, {"B"}};
  to.elements = {{"B"}, {"C"}};
  Realization r;
  r.truth = {{"A", true}, {"B", false}};
  Realization out = restrict(r, from, to);
  EXPECT_EQ(out.truth, (std::map<std::string, bool>{{"B", false}}));
  EXPECT_EQ(restrict(r, from, from), r);
}

TEST(ApplyDelta, AddTaskToRefinementSources) {
  CgmModel m = toy();
  Element t2{"T2"};
  CgmModel out = apply_delta(m, {delta::AddElement{t2}, delta::AddSource{"R1", "T2"}});
  EXPECT_EQ(out.find_refinement("R1")->sources.size(), 2u);
  EXPECT_EQ(m.find_refinement("R1")->sources.size(), 1u);
}

TEST(ApplyDelta, RemovingReferencedElementBreaksStructure) {
  CgmModel m = toy();
  m.elements.push_back({"U"});
  m.refinements.push_back({"R2", "G", {"U"}});
  m.edges.push_back(make_conflict("T", "U"));
  EXPECT_THROW(apply_delta(m, {delta::RemoveElement{"U"}}), StructureBroken);
}

TEST(ApplyDelta, UnknownIds) {
  EXPECT_THROW(apply_delta(toy(), {delta::RemoveElement{"Nope"}}), UnknownId);
  EXPECT_THROW(apply_delta(toy(), {delta::AddSource{"R7", "T"}}), UnknownId);
}

TEST(ApplyDelta, InverseRestoresModel) {
  CgmModel m = toy();
  std::vector<MutationStep> d{delta::AddElement{{"T2"}}, delta::AddSource{"R1", "T2"},
                              delta::SetAssertion{"G", Mark::Satisfied}};
  CgmModel changed = apply_delta(m, d);
  EXPECT_TRUE(equivalent(apply_delta(changed, inverse_delta(m, d)), m));
}

TEST(Classification, ToyRoles) {
  CgmModel m = toy();
  m.elements.push_back({"A", ElementKind::Assumption});
  m.refinements[0].sources.push_back("A");
  ModelIndex index(m);
  EXPECT_EQ(index.classify("G"), Classification::Requirement);
  EXPECT_EQ(index.classify("T"), Classification::Task);
  EXPECT_EQ(index.classify("A"), Classification::DomainAssumption);
  EXPECT_FALSE(index.classify("Nope"));
  EXPECT_EQ(index.boolean_variables(), (std::vector<std::string>{"A", "G", "T", "R1"}));
}
