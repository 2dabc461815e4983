#include "random_cgm.hpp"

#include <algorithm>
#include <set>

namespace cgm::support {

namespace {

int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
bool chance(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

template <class T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& v) {
  return v[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(v.size()) - 1))];
}

std::vector<std::string> all_props(const CgmModel& m) {
  std::vector<std::string> out;
  for (const auto& e : m.elements) out.push_back(e.id);
  for (const auto& r : m.refinements) out.push_back(r.id);
  return out;
}

}  // namespace

Formula random_constraint(std::mt19937_64& rng, const CgmModel& model) {
  auto props = all_props(model);
  auto atom = [&]() -> Formula {
    if (!model.attributes.empty() && chance(rng, 0.35)) {
      LinearTerm t = LinearTerm::variable(pick(rng, model.attributes));
      if (model.attributes.size() > 1 && chance(rng, 0.3)) t.add(model.attributes[1], uniform(rng, -2, 2));
      static const Relation rels[] = {Relation::Less, Relation::LessEqual, Relation::GreaterEqual, Relation::Greater,
                                      Relation::Equal};
      if (t.empty()) t = LinearTerm::variable(model.attributes[0]);
      return Formula::linear(t, rels[uniform(rng, 0, 4)], uniform(rng, -2, 12));
    }
    Formula p = Formula::prop(pick(rng, props));
    return chance(rng, 0.3) ? !p : p;
  };
  switch (uniform(rng, 0, 3)) {
    case 0: return Formula::implication(atom(), atom());
    case 1: return atom() || atom();
    case 2: return !(atom() && atom());
    default: return Formula::equivalence(atom(), atom());
  }
}

CgmModel random_cgm(std::mt19937_64& rng, const GenOptions& options) {
  CgmModel m;
  int n = uniform(rng, options.min_elements, options.max_elements);
  for (int i = 0; i < n; ++i) {
    Element e;
    e.id = "E" + std::to_string(i);
    m.elements.push_back(e);
  }
  int next_ref = 0;
  for (int i = 0; i < n - 1; ++i) {
    if (!chance(rng, 0.55)) continue;
    int count = chance(rng, 0.4) ? 2 : 1;
    for (int k = 0; k < count; ++k) {
      Refinement r;
      r.id = "R" + std::to_string(next_ref++);
      r.target = m.elements[i].id;
      int width = uniform(rng, 1, std::min(3, n - 1 - i));
      std::set<int> chosen;
      while (static_cast<int>(chosen.size()) < width) chosen.insert(uniform(rng, i + 1, n - 1));
      for (int s : chosen) r.sources.push_back(m.elements[s].id);
      m.refinements.push_back(r);
    }
  }
  ModelIndex shape(m);
  std::set<std::string> targets;
  for (const auto& r : m.refinements) targets.insert(r.target);
  for (auto& e : m.elements) {
    if (!targets.count(e.id) && !shape.is_root(e.id) && chance(rng, 0.2)) e.kind = ElementKind::Assumption;
  }
  ModelIndex index(m);
  for (auto& e : m.elements) {
    auto c = index.classify(e.id);
    if (c == Classification::Requirement && chance(rng, 0.6)) e.reward = uniform(rng, 1, 30);
    if (c == Classification::Task && chance(rng, 0.8)) e.penalty = uniform(rng, 1, 20);
  }
  if (options.attributes && chance(rng, 0.7)) {
    m.attributes = {"cost", "time"};
    for (auto& e : m.elements) {
      if (chance(rng, 0.35)) e.attr_values["cost"] = {uniform(rng, 1, 9), chance(rng, 0.2) ? uniform(rng, 1, 3) : 0};
      if (chance(rng, 0.25)) e.attr_values["time"] = {Rational(uniform(rng, 1, 7)) / 2, 0};
    }
  }
  if (options.edges) {
    int edges = uniform(rng, 0, 3);
    for (int k = 0; k < edges && n >= 2; ++k) {
      int a = uniform(rng, 0, n - 1), b = uniform(rng, 0, n - 1);
      if (a == b) continue;
      const auto& x = m.elements[a].id;
      const auto& y = m.elements[b].id;
      switch (uniform(rng, 0, 3)) {
        case 0: m.edges.push_back(Contribution{x, y}); break;
        case 1: m.edges.push_back(make_conflict(x, y)); break;
        case 2:
          if (m.refinements.size() >= 2) {
            int r1 = uniform(rng, 0, static_cast<int>(m.refinements.size()) - 1);
            int r2 = uniform(rng, 0, static_cast<int>(m.refinements.size()) - 1);
            if (r1 != r2) m.edges.push_back(Binding{m.refinements[r1].id, m.refinements[r2].id});
          }
          break;
        default: m.edges.push_back(Preference{x, y}); break;
      }
    }
    std::sort(m.edges.begin(), m.edges.end());
    m.edges.erase(std::unique(m.edges.begin(), m.edges.end()), m.edges.end());
  }
  if (options.constraints) {
    int k = uniform(rng, 0, 2);
    for (int i = 0; i < k; ++i) m.constraints.push_back(random_constraint(rng, m));
  }
  if (options.assertions) {
    for (const auto& e : m.elements) {
      if (chance(rng, 0.12)) m.assertions[e.id] = chance(rng, 0.75) ? Mark::Satisfied : Mark::Denied;
    }
  }
  return m;
}

}  // namespace cgm::support
