#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "brute_force.hpp"
#include "cgm/dsl.hpp"
#include "cgm/encoder.hpp"
#include "cgm/json_io.hpp"
#include "random_cgm.hpp"

using namespace cgm;
using namespace cgm::support;

namespace {

// A total assignment near a realization: element truths from `bits`,
// refinements derived or flipped, numeric values derived or perturbed.
Assignment near_realization(std::mt19937_64& rng, const CgmModel& m, std::uint64_t bits) {
  Assignment a;
  for (std::size_t i = 0; i < m.elements.size(); ++i) a.truth[m.elements[i].id] = (bits >> i) & 1;
  std::bernoulli_distribution flip(0.08);
  for (const auto& r : m.refinements) {
    bool all = std::all_of(r.sources.begin(), r.sources.end(), [&](const auto& s) { return a.truth.at(s); });
    a.truth[r.id] = flip(rng) ? !all : all;
  }
  oracle_fill_numeric(m, a);
  for (auto& [k, v] : a.values) {
    if (flip(rng)) v += 1;
  }
  return a;
}

std::vector<std::string> boolean_vars(const CgmModel& m) { return ModelIndex(m).boolean_variables(); }

}  // namespace

TEST(CheckRealization, AgreesWithBruteForceEvaluator) {
  std::mt19937_64 rng(11);
  std::size_t checked = 0, valid = 0;
  for (int n = 0; n < 300; ++n) {
    CgmModel m = random_cgm(rng);
    std::uint64_t total = std::uint64_t{1} << m.elements.size();
    for (std::uint64_t bits = 0; bits < total; ++bits) {
      Assignment a = near_realization(rng, m, bits);
      bool expected = oracle_valid(m, a);
      ASSERT_EQ(check_realization(m, a).valid(), expected) << "model " << n << " bits " << bits;
      ++checked;
      valid += expected;
    }
  }
  EXPECT_GT(valid, 1000u);
  EXPECT_GT(checked, 50000u);
}

TEST(Encoding, SatisfiedExactlyByRealizations) {
  std::mt19937_64 rng(12);
  int exhaustive = 0;
  while (exhaustive < 80) {
    CgmModel m = random_cgm(rng);
    auto bools = boolean_vars(m);
    if (bools.size() > 14) continue;
    ++exhaustive;
    Formula f = encode(m);
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << bools.size()); ++bits) {
      Assignment a;
      for (std::size_t i = 0; i < bools.size(); ++i) a.truth[bools[i]] = (bits >> i) & 1;
      oracle_fill_numeric(m, a);
      ASSERT_EQ(evaluate(f, a), check_realization(m, a).valid()) << exhaustive << " " << bits;
    }
  }
}

TEST(RoundTrip, DslAndJsonOnRandomModels) {
  std::mt19937_64 rng(13);
  for (int n = 0; n < 400; ++n) {
    CgmModel m = random_cgm(rng);
    ParseResult dsl = parse_dsl(to_dsl(m));
    ASSERT_TRUE(dsl.ok()) << to_dsl(m) << "\n" << format(dsl.diagnostics.at(0));
    EXPECT_TRUE(equivalent(*dsl.model, m)) << to_dsl(m);
    ParseResult json = parse_json(to_json(m));
    ASSERT_TRUE(json.ok()) << to_json(m);
    EXPECT_TRUE(equivalent(*json.model, m));
    EXPECT_EQ(model_hash(*json.model), model_hash(m));
  }
}

TEST(RoundTrip, ParserFlagsStructurallyInvalidModels) {
  std::mt19937_64 rng(14);
  for (int n = 0; n < 200; ++n) {
    CgmModel m = random_cgm(rng);
    switch (n % 4) {
      case 0: m.refinements.push_back({"Rcycle", m.elements.front().id, {m.elements.front().id}}); break;
      case 1: m.elements.front().penalty = 3; break;
      case 2: m.edges.push_back(Contribution{m.elements[0].id, m.elements[0].id}); break;
      default: m.constraints.push_back(Formula::prop("Undeclared")); break;
    }
    if (validate_structure(m).empty()) continue;
    ParseResult r = parse_dsl(to_dsl(m));
    EXPECT_TRUE(!r.ok() && !r.diagnostics.empty()) << to_dsl(m);
  }
}

TEST(Restrict, Idempotent) {
  std::mt19937_64 rng(15);
  for (int n = 0; n < 300; ++n) {
    CgmModel a = random_cgm(rng), b = random_cgm(rng);
    Assignment r = near_realization(rng, a, rng());
    Realization once = restrict(r, a, b);
    EXPECT_EQ(restrict(once, a, b), once);
    EXPECT_EQ(restrict(r, a, a), r);
    for (const auto& [k, v] : once.truth) EXPECT_EQ(r.truth.at(k), v);
  }
}

TEST(Delta, InverseRestoresModel) {
  std::mt19937_64 rng(16);
  int applied = 0;
  for (int n = 0; n < 400; ++n) {
    CgmModel m = random_cgm(rng);
    std::vector<MutationStep> d;
    std::uniform_int_distribution<int> kind(0, 6);
    auto pick_element = [&] { return m.elements[rng() % m.elements.size()].id; };
    for (int k = 0; k < 3; ++k) {
      switch (kind(rng)) {
        case 0: d.push_back(delta::AddElement{{"New" + std::to_string(k)}}); break;
        case 1: d.push_back(delta::SetAssertion{pick_element(), Mark::Satisfied}); break;
        case 2:
          if (!m.assertions.empty()) d.push_back(delta::ClearAssertion{m.assertions.begin()->first});
          break;
        case 3:
          if (!m.refinements.empty()) d.push_back(delta::RemoveRefinement{m.refinements.back().id});
          break;
        case 4: d.push_back(delta::AddAttribute{"extra" + std::to_string(k)}); break;
        case 5:
          if (!m.edges.empty()) d.push_back(delta::RemoveEdge{m.edges.front()});
          break;
        default: {
          Element e = m.elements[rng() % m.elements.size()];
          e.label = "changed";
          d.push_back(delta::ReplaceElement{e});
        }
      }
    }
    CgmModel changed;
    try {
      changed = apply_delta(m, d);
    } catch (const StructureBroken&) {
      continue;
    } catch (const UnknownId&) {
      continue;
    }
    ++applied;
    EXPECT_TRUE(equivalent(apply_delta(changed, inverse_delta(m, d)), m)) << n;
  }
  EXPECT_GT(applied, 200);
}

TEST(Classification, RequirementsAndTasksAreDisjoint) {
  std::mt19937_64 rng(17);
  for (int n = 0; n < 500; ++n) {
    CgmModel m = random_cgm(rng);
    ModelIndex index(m);
    auto req = index.requirements(), tasks = index.tasks();
    std::vector<ElementId> both;
    std::set_intersection(req.begin(), req.end(), tasks.begin(), tasks.end(), std::back_inserter(both));
    EXPECT_TRUE(both.empty());
    OracleRoles roles = oracle_roles(m);
    EXPECT_EQ(req, roles.requirements);
    EXPECT_EQ(tasks, roles.tasks);
    for (const auto& e : m.elements) EXPECT_TRUE(index.classify(e.id).has_value());
  }
}
