#include <gtest/gtest.h>

#include <random>
#include <set>

#include "brute_force.hpp"
#include "cgm/evolution.hpp"
#include "cgm/reasoning.hpp"
#include "random_cgm.hpp"

using namespace cgm;
using namespace cgm::support;

namespace {

Realization random_assignment(std::mt19937_64& rng, const CgmModel& m) {
  Realization r;
  for (const auto& v : ModelIndex(m).boolean_variables()) r.truth[v] = rng() & 1;
  oracle_fill_numeric(m, r);
  return r;
}

// Familiarity straight from its definition over element ids of both models.
Rational oracle_familiarity(const CgmModel& m1, const Realization& mu1, const CgmModel& m2, const Realization& c) {
  std::set<ElementId> e1;
  for (const auto& e : m1.elements) e1.insert(e.id);
  Rational cost = 0;
  for (const auto& e : m2.elements) {
    if (e1.count(e.id)) cost += c.truth.at(e.id) != mu1.truth.at(e.id) ? 1 : 0;
    else cost += c.truth.at(e.id) ? 1 : 0;
  }
  return cost;
}

Weights random_weights(std::mt19937_64& rng, const CgmModel& a, const CgmModel& b) {
  Weights w;
  for (const CgmModel* m : {&a, &b}) {
    for (const auto& e : m->elements) w[e.id] = std::uniform_int_distribution<int>(1, 9)(rng);
  }
  return w;
}

}  // namespace

TEST(EvolutionProperty, EffortNeverExceedsTaskFamiliarity) {
  std::mt19937_64 rng(31);
  int pairs = 0, equal = 0;
  while (pairs < 1000) {
    CgmModel m1 = random_cgm(rng), m2 = random_cgm(rng);
    Realization mu1 = random_assignment(rng, m1);
    EvolutionContext ctx = make_context(m1, mu1, m2, Interest::tasks());
    for (int k = 0; k < 5; ++k, ++pairs) {
      Realization c = random_assignment(rng, m2);
      Rational effort = change_effort(ctx, c), fam = familiarity_cost(ctx, c);
      EXPECT_LE(effort, fam);
      bool dropped = false;
      for (const auto& id : ctx.common) dropped = dropped || (ctx.old_realization.truth.at(id) && !c.truth.at(id));
      EXPECT_EQ(effort == fam, !dropped);
      equal += effort == fam;
    }
  }
  EXPECT_GT(equal, 50);
  EXPECT_LT(equal, pairs);
}

TEST(EvolutionProperty, UnitWeightsMatchUnweighted) {
  std::mt19937_64 rng(32);
  for (int n = 0; n < 300; ++n) {
    CgmModel m1 = random_cgm(rng), m2 = random_cgm(rng);
    Realization mu1 = random_assignment(rng, m1), c = random_assignment(rng, m2);
    Weights ones;
    for (const CgmModel* m : {&m1, &m2}) {
      for (const auto& e : m->elements) ones[e.id] = 1;
    }
    auto all = make_context(m1, mu1, m2, Interest::all(), ones);
    EXPECT_EQ(weighted_familiarity_cost(all, c), familiarity_cost(all, c));
    auto tasks = make_context(m1, mu1, m2, Interest::tasks(), ones);
    EXPECT_EQ(weighted_change_effort(tasks, c), change_effort(tasks, c));
    EXPECT_EQ(weighted_familiarity_cost(tasks, c), familiarity_cost(tasks, c));
  }
}

TEST(EvolutionProperty, CriterionTermsAreAffineIdentities) {
  std::mt19937_64 rng(33);
  for (int n = 0; n < 200; ++n) {
    CgmModel m1 = random_cgm(rng), m2 = random_cgm(rng);
    Realization mu1 = random_assignment(rng, m1);
    Weights w = random_weights(rng, m1, m2);
    auto all = make_context(m1, mu1, m2, Interest::all(), w);
    auto tasks = make_context(m1, mu1, m2, Interest::tasks(), w);
    for (int k = 0; k < 5; ++k) {
      Realization c = random_assignment(rng, m2);
      for (auto kind : {CriterionKind::Familiarity, CriterionKind::WeightedFamiliarity}) {
        EXPECT_EQ(criterion_objective(all, kind).term.evaluate(c), criterion_value(all, kind, c));
      }
      for (auto kind : {CriterionKind::ChangeEffort, CriterionKind::WeightedChangeEffort,
                        CriterionKind::ErnstFamiliarity}) {
        EXPECT_EQ(criterion_objective(tasks, kind).term.evaluate(c), criterion_value(tasks, kind, c));
      }
    }
  }
}

TEST(EvolutionProperty, FamiliarityOptimumMatchesBruteForce) {
  std::mt19937_64 rng(34);
  int instances = 0, unrealizable = 0;
  SolverOptions options;
  options.verify_optimality = true;
  while (instances < 200) {
    CgmModel m1 = random_cgm(rng), m2 = random_cgm(rng);
    auto r1 = oracle_realizations(m1);
    Realization mu1 = r1.empty() ? random_assignment(rng, m1) : r1[rng() % r1.size()];
    auto candidates = oracle_realizations(m2);
    ++instances;
    if (candidates.empty()) {
      ++unrealizable;
      EXPECT_THROW(evolve(m1, mu1, m2, SimilarityCriterion{}, options), Unrealizable);
      continue;
    }
    std::optional<Rational> best;
    for (const auto& c : candidates) {
      Rational v = oracle_familiarity(m1, mu1, m2, c);
      if (!best || v < *best) best = v;
    }
    EvolutionResult r = evolve(m1, mu1, m2, SimilarityCriterion{}, options);
    EXPECT_EQ(r.criterion_value, *best) << instances;
    EXPECT_EQ(oracle_familiarity(m1, mu1, m2, r.optimum.model), *best) << instances;
    EXPECT_TRUE(oracle_valid(m2, r.optimum.model)) << instances;
  }
  EXPECT_LT(unrealizable, 100);
}

TEST(EvolutionProperty, PositiveWeightScalingKeepsArgmin) {
  std::mt19937_64 rng(35);
  const Rational factors[] = {2, Rational(1, 3), Rational(7, 2)};
  int checked = 0;
  for (int n = 0; n < 150; ++n) {
    CgmModel m1 = random_cgm(rng), m2 = random_cgm(rng);
    Realization mu1 = random_assignment(rng, m1);
    if (oracle_realizations(m2).empty()) continue;
    Weights w = random_weights(rng, m1, m2);
    Rational factor = factors[n % 3];
    Weights scaled = w;
    for (auto& [id, v] : scaled) v *= factor;
    for (auto kind : {CriterionKind::WeightedFamiliarity, CriterionKind::WeightedChangeEffort}) {
      SimilarityCriterion base{kind};
      base.weights = w;
      SimilarityCriterion big = base;
      big.weights = scaled;
      EvolutionResult a = evolve(m1, mu1, m2, base), b = evolve(m1, mu1, m2, big);
      // b's realization is a certificate for the unscaled problem and vice versa.
      EXPECT_EQ(criterion_value(a.context, kind, b.optimum.model), a.criterion_value);
      EXPECT_EQ(criterion_value(b.context, kind, a.optimum.model), b.criterion_value);
      EXPECT_EQ(b.criterion_value, factor * a.criterion_value);
      ++checked;
    }
  }
  EXPECT_GT(checked, 150);
}
