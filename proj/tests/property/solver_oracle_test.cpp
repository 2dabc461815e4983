#include <gtest/gtest.h>

#include <random>

#include "brute_force.hpp"
#include "cgm/encoder.hpp"
#include "cgm/reasoning.hpp"
#include "cgm/solver.hpp"
#include "fm_oracle.hpp"
#include "random_cgm.hpp"

using namespace cgm;
using namespace cgm::support;

namespace {

SolverOptions checked() {
  SolverOptions o;
  o.verify_optimality = true;
  return o;
}

}  // namespace

TEST(FormulaOracle, SolveOptimizeEnumerateAgreeWithFourierMotzkin) {
  std::mt19937_64 rng(20240601);
  int optimal = 0, unattained = 0, unsat = 0;
  for (int n = 0; n < 500; ++n) {
    RandomFormula f = random_formula(rng);
    FmOracle oracle(f);
    Problem p{f.formula, f.props, f.nums};
    SolveResult s = solve(p);
    ASSERT_EQ(s.sat, oracle.satisfiable()) << "instance " << n << ": " << to_string(f.formula);
    if (s.sat) ASSERT_TRUE(evaluate(f.formula, *s.model)) << n;

    std::vector<ObjectiveSpec> objs{random_objective(rng, f, "o1"), random_objective(rng, f, "o2")};
    if (n % 3 == 0) objs[1].polarity = Polarity::Maximize;
    FmOracle::LexResult expected = oracle.lex_minimize(objs);
    switch (expected.outcome) {
      case FmOracle::Outcome::Unsat:
        ++unsat;
        EXPECT_FALSE(optimize(p, objs, checked()).sat()) << n;
        break;
      case FmOracle::Outcome::Optimal: {
        ++optimal;
        OptimumResult r = optimize(p, objs, checked());
        ASSERT_TRUE(r.sat()) << n;
        EXPECT_EQ(r.optimum->values, expected.values) << "instance " << n << ": " << to_string(f.formula);
        EXPECT_TRUE(evaluate(f.formula, r.optimum->model)) << n;
        for (std::size_t i = 0; i < objs.size(); ++i) {
          EXPECT_EQ(objs[i].term.evaluate(r.optimum->model), r.optimum->values[i]) << n;
        }
        break;
      }
      case FmOracle::Outcome::NotAttained:
        ++unattained;
        try {
          optimize(p, objs, checked());
          ADD_FAILURE() << "instance " << n << " should not attain its infimum";
        } catch (const InfimumNotAttained& e) {
          EXPECT_EQ(e.index(), expected.failed_index) << n;
          EXPECT_EQ(e.infimum(), expected.values.back()) << n;
        }
        break;
      case FmOracle::Outcome::Unbounded:
        EXPECT_THROW(optimize(p, objs), Unbounded) << n;
        break;
    }
    if (f.props.size() <= 12) {
      EXPECT_EQ(enumerate_all(p, f.props).size(), oracle.count_models()) << n;
    }
  }
  RecordProperty("optimal", optimal);
  RecordProperty("unattained", unattained);
  RecordProperty("unsat", unsat);
  EXPECT_GT(optimal, 100);
  EXPECT_GT(unsat, 5);
}

TEST(ModelOracle, RealizeMatchesBruteForceOptimum) {
  std::mt19937_64 rng(777);
  int realizable = 0;
  for (int n = 0; n < 500; ++n) {
    CgmModel m = random_cgm(rng);
    auto all = oracle_realizations(m);
    std::vector<std::vector<OracleObjective>> lists{
        {{"penaltyMinusReward", Polarity::Minimize}},
        {{"numSatTasks", Polarity::Minimize}},
        {{"numSatTasks", Polarity::Maximize}},
        {{"numUnsatRequirements", Polarity::Minimize}, {"penaltyMinusReward", Polarity::Minimize}},
    };
    if (!m.attributes.empty()) {
      lists.push_back({{"penaltyMinusReward", Polarity::Minimize}, {"cost", Polarity::Maximize}});
    }
    lists.push_back({{"numUnsatPrefs", Polarity::Minimize}, {"numSatTasks", Polarity::Minimize}});
    if (all.empty()) {
      EXPECT_THROW(realize(m, default_objectives(m)), Unrealizable) << n;
      continue;
    }
    ++realizable;
    for (const auto& list : lists) {
      std::vector<ObjectiveSpec> objs;
      for (const auto& [name, pol] : list) objs.push_back(build_objective(m, name, pol));
      Optimum o = realize(m, objs, checked());
      auto expected = oracle_optimum(m, list, all);
      ASSERT_TRUE(expected);
      EXPECT_EQ(o.values, *expected) << "instance " << n << " objective " << list[0].first;
      EXPECT_TRUE(oracle_valid(m, o.model)) << n;
      for (std::size_t i = 0; i < list.size(); ++i) {
        EXPECT_EQ(oracle_objective(m, list[i].first, o.model), o.values[i]) << n;
      }
    }
    EXPECT_EQ(enumerate_realizations(m).size(), all.size()) << n;
  }
  EXPECT_GT(realizable, 250);
}
