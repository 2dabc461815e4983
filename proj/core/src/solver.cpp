#include "cgm/solver.hpp"

#include <algorithm>
#include <set>

#include "cgm/engine/engine.hpp"

namespace cgm {

using engine::DeltaRational;
using engine::Engine;
using engine::Lit;
using engine::negate;

SolveStats& SolveStats::operator+=(const SolveStats& other) {
  decisions += other.decisions;
  conflicts += other.conflicts;
  theory_checks += other.theory_checks;
  elapsed += other.elapsed;
  return *this;
}

Problem Problem::from_formula(Formula formula) {
  Problem p;
  std::set<std::string> props, nums;
  collect_props(formula, props);
  collect_numeric(formula, nums);
  p.formula = std::move(formula);
  p.bool_vars.assign(props.begin(), props.end());
  p.num_vars.assign(nums.begin(), nums.end());
  return p;
}

namespace {

// Declared lists plus anything the formula or `extra` mentions.
Problem complete(const Problem& problem, const std::vector<std::string>& extra_bools = {}) {
  Problem p = problem;
  std::set<std::string> bools(p.bool_vars.begin(), p.bool_vars.end());
  std::set<std::string> nums(p.num_vars.begin(), p.num_vars.end());
  std::set<std::string> props, numeric;
  collect_props(p.formula, props);
  collect_numeric(p.formula, numeric);
  props.insert(extra_bools.begin(), extra_bools.end());
  for (const auto& v : props) {
    if (bools.insert(v).second) p.bool_vars.push_back(v);
  }
  for (const auto& v : numeric) {
    if (nums.insert(v).second) p.num_vars.push_back(v);
  }
  return p;
}

class Run {
 public:
  Run(const Problem& p, const SolverOptions& options)
      : start_(std::chrono::steady_clock::now()),
        guard_(options.budget, stats_),
        engine_(p.bool_vars, p.num_vars, guard_, stats_) {
    engine_.assert_formula(p.formula);
  }
  Engine& engine() { return engine_; }
  SolveStats finish() {
    stats_.elapsed = std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start_);
    return stats_;
  }

 private:
  std::chrono::steady_clock::time_point start_;
  SolveStats stats_;
  engine::BudgetGuard guard_;
  Engine engine_;
};

void expect_model(const Formula& formula, const Assignment& model) {
  if (!evaluate(formula, model)) throw std::logic_error("solver produced an assignment violating the formula");
}

ObjectiveTerm oriented(const ObjectiveSpec& spec) {
  ObjectiveTerm t = spec.term;
  if (spec.polarity == Polarity::Maximize) t *= Rational(-1);
  return t;
}

// Proves that no model of the formula has term < bound.
void certify_optimal(const Problem& p, const ObjectiveTerm& term, const Rational& bound) {
  SolverOptions plain;
  Run run(p, plain);
  Engine& e = run.engine();
  int o = e.objective_var(term);
  if (o < 0) return;
  e.add_clause({e.bound_lit(o, Relation::Less, bound)});
  if (e.search() != Engine::Status::Unsat) throw std::logic_error("optimality certificate failed");
}

}  // namespace

SolveResult solve(const Problem& problem, const SolverOptions& options) {
  Problem p = complete(problem);
  Run run(p, options);
  SolveResult result;
  if (run.engine().search() == Engine::Status::Sat) {
    result.sat = true;
    result.model = run.engine().model();
    expect_model(p.formula, *result.model);
  }
  result.stats = run.finish();
  return result;
}

OptimumResult optimize(const Problem& problem, std::span<const ObjectiveSpec> objectives,
                       const SolverOptions& options) {
  Problem p = complete(problem);
  Run run(p, options);
  Engine& e = run.engine();
  OptimumResult result;
  std::optional<Assignment> incumbent;
  std::vector<Rational> optimum_in_var;  // optimal value of each objective variable, if any

  for (std::size_t k = 0; k < objectives.size(); ++k) {
    ObjectiveTerm term = oriented(objectives[k]);
    int o = e.objective_var(term);
    if (o < 0) {
      e.to_root();
      if (e.search() == Engine::Status::Unsat) {
        result.stats = run.finish();
        return result;
      }
      incumbent = e.model();
      optimum_in_var.emplace_back(0);
      continue;
    }
    Lit selector = e.new_selector();
    std::optional<DeltaRational> best;
    std::optional<Assignment> best_model;
    for (;;) {
      e.to_root();
      if (e.search({selector}) == Engine::Status::Unsat) break;
      auto m = e.minimize(o);
      if (!m) throw Unbounded(k);
      best = *m;
      if (m->k == 0) best_model = e.model();
      e.to_root();
      Lit cut = m->k == 0 ? e.bound_lit(o, Relation::Less, m->c) : e.bound_lit(o, Relation::LessEqual, m->c);
      e.add_clause({negate(selector), cut});
    }
    e.to_root();
    if (!best) {
      if (k > 0) throw std::logic_error("objective pinning made the problem unsat");
      result.stats = run.finish();
      return result;
    }
    if (best->k != 0) {
      Rational infimum = best->c + term.constant;
      if (objectives[k].polarity == Polarity::Maximize) infimum = -infimum;
      throw InfimumNotAttained(k, infimum);
    }
    e.add_clause({negate(selector)});
    e.add_clause({e.bound_lit(o, Relation::LessEqual, best->c)});
    e.add_clause({e.bound_lit(o, Relation::GreaterEqual, best->c)});
    incumbent = best_model;
    optimum_in_var.push_back(best->c);
  }

  if (options.canonical_tie_break || !incumbent) {
    std::vector<Lit> fixed;
    for (const auto& name : p.bool_vars) {
      Lit l = e.lit_of(name);
      fixed.push_back(negate(l));
      e.to_root();
      if (e.search(fixed) == Engine::Status::Unsat) fixed.back() = l;
    }
    e.to_root();
    if (e.search(fixed) == Engine::Status::Unsat) {
      if (!objectives.empty()) throw std::logic_error("tie-break lost the optimum");
      result.stats = run.finish();
      return result;
    }
    incumbent = e.model();
  }

  Optimum opt;
  opt.model = std::move(*incumbent);
  expect_model(p.formula, opt.model);
  for (std::size_t k = 0; k < objectives.size(); ++k) {
    Rational v = objectives[k].term.evaluate(opt.model);
    Rational expected = optimum_in_var[k] + oriented(objectives[k]).constant;
    if (objectives[k].polarity == Polarity::Maximize) expected = -expected;
    bool constant_objective = oriented(objectives[k]).numeric.empty() &&
                              std::all_of(objectives[k].term.indicators.begin(), objectives[k].term.indicators.end(),
                                          [](const auto& ind) { return ind.second == 0; });
    if (!constant_objective && v != expected) throw std::logic_error("objective value disagrees with the optimum");
    opt.values.push_back(v);
  }
  result.stats = run.finish();
  if (options.verify_optimality && !objectives.empty()) {
    certify_optimal(p, oriented(objectives[0]), optimum_in_var[0]);
  }
  result.optimum = std::move(opt);
  return result;
}

std::size_t enumerate(const Problem& problem, const std::vector<std::string>& projection,
                      std::optional<std::size_t> limit, const std::function<bool(const Assignment&)>& visit,
                      const SolverOptions& options) {
  Problem p = complete(problem, projection);
  Run run(p, options);
  Engine& e = run.engine();
  std::vector<Lit> lits;
  for (const auto& name : projection) lits.push_back(e.lit_of(name));
  std::size_t count = 0;
  while (!limit || count < *limit) {
    e.to_root();
    if (e.search() == Engine::Status::Unsat) break;
    Assignment model = e.model();
    expect_model(p.formula, model);
    std::vector<Lit> block;
    for (std::size_t i = 0; i < lits.size(); ++i) {
      block.push_back(model.truth.at(projection[i]) ? negate(lits[i]) : lits[i]);
    }
    ++count;
    if (!visit(model)) break;
    if (block.empty()) break;
    e.to_root();
    e.add_clause(block);
  }
  return count;
}

std::vector<Assignment> enumerate_all(const Problem& problem, const std::vector<std::string>& projection,
                                      std::optional<std::size_t> limit, const SolverOptions& options) {
  std::vector<Assignment> out;
  enumerate(
      problem, projection, limit,
      [&](const Assignment& a) {
        out.push_back(a);
        return true;
      },
      options);
  return out;
}

std::vector<std::size_t> diagnose(const Problem& problem, std::span<const Formula> suspects,
                                  const SolverOptions& options) {
  Problem p = complete(problem);
  Run run(p, options);
  Engine& e = run.engine();
  std::vector<Lit> selectors;
  for (const auto& s : suspects) {
    Lit sel = e.new_selector();
    e.add_clause({negate(sel), e.encode(s)});
    selectors.push_back(sel);
  }
  auto unsat_with = [&](const std::vector<std::size_t>& subset) {
    std::vector<Lit> assumptions;
    for (auto i : subset) assumptions.push_back(selectors[i]);
    e.to_root();
    return e.search(assumptions) == Engine::Status::Unsat;
  };
  std::vector<std::size_t> core(suspects.size());
  for (std::size_t i = 0; i < core.size(); ++i) core[i] = i;
  if (!unsat_with(core)) throw NotUnsat();
  for (std::size_t i = 0; i < suspects.size(); ++i) {
    std::vector<std::size_t> without;
    for (auto j : core) {
      if (j != i) without.push_back(j);
    }
    if (without.size() == core.size()) continue;
    if (unsat_with(without)) core = std::move(without);
  }
  return core;
}

}  // namespace cgm
