#include "cgm/engine/engine.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace cgm::engine {

BudgetGuard::BudgetGuard(const Budget& budget, SolveStats& stats)
    : budget_(budget), stats_(stats), start_(std::chrono::steady_clock::now()) {}

void BudgetGuard::charge() {
  ++steps_;
  if (budget_.steps && steps_ > *budget_.steps) throw ResourceLimit();
  if (budget_.wall_clock && (steps_ & 15) == 0 &&
      std::chrono::steady_clock::now() - start_ > *budget_.wall_clock) {
    throw ResourceLimit();
  }
}

Engine::Engine(const std::vector<std::string>& bool_vars, const std::vector<std::string>& num_vars,
               BudgetGuard& guard, SolveStats& stats)
    : guard_(guard), stats_(stats) {
  true_lit_ = make_lit(new_var());
  enqueue(true_lit_, -1);
  for (const auto& name : bool_vars) {
    if (bool_index_.count(name)) continue;
    bool_index_[name] = new_var();
    bool_names_.push_back(name);
  }
  for (const auto& name : num_vars) {
    if (num_index_.count(name)) continue;
    num_index_[name] = simplex_.add_variable();
    num_names_.push_back(name);
  }
}

int Engine::new_var() {
  int v = static_cast<int>(assigns_.size());
  assigns_.push_back(-1);
  level_of_.push_back(0);
  reason_.push_back(-1);
  atom_of_var_.push_back(-1);
  seen_.push_back(0);
  watches_.emplace_back();
  watches_.emplace_back();
  return v;
}

int Engine::value(Lit l) const {
  int a = assigns_[var_of(l)];
  if (a < 0) return -1;
  return is_negative(l) ? 1 - a : a;
}

void Engine::enqueue(Lit l, int reason) {
  int v = var_of(l);
  assigns_[v] = is_negative(l) ? 0 : 1;
  level_of_[v] = level();
  reason_[v] = reason;
  trail_.push_back(l);
}

void Engine::attach(int clause) {
  const auto& c = clauses_[clause];
  watches_[c[0]].push_back(clause);
  watches_[c[1]].push_back(clause);
}

Lit Engine::new_selector() { return make_lit(new_var()); }

Lit Engine::lit_of(const std::string& bool_var) {
  auto it = bool_index_.find(bool_var);
  if (it != bool_index_.end()) return make_lit(it->second);
  int v = new_var();
  bool_index_[bool_var] = v;
  return make_lit(v);
}

bool Engine::value_of(const std::string& bool_var) const {
  return value(make_lit(bool_index_.at(bool_var))) == 1;
}

void Engine::add_clause(std::vector<Lit> clause) {
  to_root();
  if (inconsistent_) return;
  std::sort(clause.begin(), clause.end());
  clause.erase(std::unique(clause.begin(), clause.end()), clause.end());
  std::vector<Lit> kept;
  for (std::size_t i = 0; i < clause.size(); ++i) {
    Lit l = clause[i];
    if (i + 1 < clause.size() && clause[i + 1] == negate(l)) return;
    int v = value(l);
    if (v == 1) return;
    if (v == 0) continue;
    kept.push_back(l);
  }
  if (kept.empty()) {
    inconsistent_ = true;
    return;
  }
  if (kept.size() == 1) {
    enqueue(kept[0], -1);
    return;
  }
  clauses_.push_back(std::move(kept));
  attach(static_cast<int>(clauses_.size()) - 1);
}

int Engine::numeric_var(const std::string& name) {
  auto it = num_index_.find(name);
  if (it != num_index_.end()) return it->second;
  int s = simplex_.add_variable();
  num_index_[name] = s;
  return s;
}

int Engine::row_for(const std::map<int, Rational>& combination) {
  if (combination.size() == 1 && combination.begin()->second == 1) return combination.begin()->first;
  std::vector<std::pair<int, Rational>> key(combination.begin(), combination.end());
  auto it = rows_.find(key);
  if (it != rows_.end()) return it->second;
  int s = simplex_.add_row(combination);
  rows_.emplace(std::move(key), s);
  return s;
}

Lit Engine::atom(int svar, bool upper, const Rational& bound) {
  auto key = std::make_tuple(svar, upper, bound);
  auto it = atom_index_.find(key);
  if (it != atom_index_.end()) return it->second;
  int v = new_var();
  atom_of_var_[v] = static_cast<int>(atoms_.size());
  atoms_.push_back({svar, upper, bound});
  Lit l = make_lit(v);
  atom_index_.emplace(key, l);
  return l;
}

Lit Engine::bound_lit(int svar, Relation relation, const Rational& bound) {
  switch (relation) {
    case Relation::LessEqual: return atom(svar, true, bound);
    case Relation::Less: return negate(atom(svar, false, bound));
    case Relation::GreaterEqual: return atom(svar, false, bound);
    case Relation::Greater: return negate(atom(svar, true, bound));
    case Relation::Equal: return gate(Formula::Kind::And, {atom(svar, true, bound), atom(svar, false, bound)});
  }
  throw std::logic_error("bad relation");
}

Lit Engine::gate(Formula::Kind kind, const std::vector<Lit>& inputs) {
  using Kind = Formula::Kind;
  if (kind == Kind::And || kind == Kind::Or) {
    bool is_and = kind == Kind::And;
    Lit absorbing = constant(!is_and);
    std::vector<Lit> ins;
    for (Lit l : inputs) {
      if (l == absorbing) return absorbing;
      if (l == negate(absorbing)) continue;
      ins.push_back(l);
    }
    if (ins.empty()) return negate(absorbing);
    if (ins.size() == 1) return ins[0];
    Lit g = make_lit(new_var());
    // And: g -> each input, all inputs -> g. Or is the dual.
    Lit out = is_and ? g : negate(g);
    std::vector<Lit> big{out};
    for (Lit l : ins) {
      Lit in = is_and ? l : negate(l);
      add_clause({negate(out), in});
      big.push_back(negate(in));
    }
    add_clause(big);
    return g;
  }
  Lit a = inputs[0], b = inputs[1];
  Lit g = make_lit(new_var());
  add_clause({negate(g), negate(a), b});
  add_clause({negate(g), a, negate(b)});
  add_clause({g, a, b});
  add_clause({g, negate(a), negate(b)});
  return g;
}

Lit Engine::encode(const Formula& f) {
  using Kind = Formula::Kind;
  auto it = encoded_.find(f.id());
  if (it != encoded_.end()) return it->second;
  Lit result;
  switch (f.kind()) {
    case Kind::True: result = constant(true); break;
    case Kind::False: result = constant(false); break;
    case Kind::Prop: result = lit_of(f.name()); break;
    case Kind::Linear: {
      const auto& coeffs = f.term().coefficients();
      if (coeffs.empty()) {
        result = constant(compare(0, f.relation(), f.bound()));
        break;
      }
      Rational lead = coeffs.begin()->second;
      std::map<int, Rational> combination;
      for (const auto& [name, c] : coeffs) combination[numeric_var(name)] += c / lead;
      Rational bound = f.bound() / lead;
      Relation rel = f.relation();
      if (lead < 0) {
        switch (rel) {
          case Relation::Less: rel = Relation::Greater; break;
          case Relation::LessEqual: rel = Relation::GreaterEqual; break;
          case Relation::GreaterEqual: rel = Relation::LessEqual; break;
          case Relation::Greater: rel = Relation::Less; break;
          case Relation::Equal: break;
        }
      }
      result = bound_lit(row_for(combination), rel, bound);
      break;
    }
    case Kind::Not: result = negate(encode(f.operands()[0])); break;
    case Kind::And:
    case Kind::Or: {
      std::vector<Lit> ins;
      for (const auto& op : f.operands()) ins.push_back(encode(op));
      result = gate(f.kind(), ins);
      break;
    }
    case Kind::Implies:
      result = gate(Kind::Or, {negate(encode(f.operands()[0])), encode(f.operands()[1])});
      break;
    case Kind::Iff: {
      Lit a = encode(f.operands()[0]);
      Lit b = encode(f.operands()[1]);
      if (a == b) {
        result = constant(true);
      } else if (a == negate(b)) {
        result = constant(false);
      } else {
        result = gate(Kind::Iff, {a, b});
      }
      break;
    }
    default: throw std::logic_error("bad formula kind");
  }
  encoded_.emplace(f.id(), result);
  keep_alive_.push_back(f);
  return result;
}

void Engine::assert_formula(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::And:
      for (const auto& op : f.operands()) assert_formula(op);
      return;
    case Formula::Kind::Or: {
      std::vector<Lit> clause;
      for (const auto& op : f.operands()) clause.push_back(encode(op));
      add_clause(clause);
      return;
    }
    case Formula::Kind::Implies:
      add_clause({negate(encode(f.operands()[0])), encode(f.operands()[1])});
      return;
    default:
      add_clause({encode(f)});
  }
}

int Engine::objective_var(const ObjectiveTerm& term) {
  to_root();
  std::map<int, Rational> combination;
  std::vector<int> scratch;
  for (const auto& [f, c] : term.indicators) {
    if (c == 0) continue;
    int ind = simplex_.add_variable();
    simplex_.assert_lower(ind, DeltaRational(0), -1, scratch);
    simplex_.assert_upper(ind, DeltaRational(1), -1, scratch);
    Lit l = encode(f);
    add_clause({negate(l), atom(ind, false, 1)});
    add_clause({l, atom(ind, true, 0)});
    combination[ind] += c;
  }
  for (const auto& [name, c] : term.numeric.coefficients()) combination[numeric_var(name)] += c;
  std::erase_if(combination, [](const auto& e) { return e.second == 0; });
  if (combination.empty()) return -1;
  return row_for(combination);
}

int Engine::propagate() {
  while (qhead_ < trail_.size()) {
    Lit p = trail_[qhead_++];
    Lit falsified = negate(p);
    auto& ws = watches_[falsified];
    std::size_t i = 0, j = 0;
    while (i < ws.size()) {
      int ci = ws[i++];
      auto& c = clauses_[ci];
      if (c[0] == falsified) std::swap(c[0], c[1]);
      if (value(c[0]) == 1) {
        ws[j++] = ci;
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < c.size(); ++k) {
        if (value(c[k]) != 0) {
          std::swap(c[1], c[k]);
          watches_[c[1]].push_back(ci);
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[j++] = ci;
      if (value(c[0]) == 0) {
        while (i < ws.size()) ws[j++] = ws[i++];
        ws.resize(j);
        qhead_ = trail_.size();
        return ci;
      }
      enqueue(c[0], ci);
    }
    ws.resize(j);
  }
  return -1;
}

bool Engine::theory(std::vector<Lit>& conflict) {
  std::vector<int> reasons;
  while (theory_head_ < trail_.size()) {
    Lit l = trail_[theory_head_++];
    int a = atom_of_var_[var_of(l)];
    if (a < 0) continue;
    const Atom& at = atoms_[a];
    bool truth = !is_negative(l);
    bool ok;
    if (at.upper) {
      ok = truth ? simplex_.assert_upper(at.svar, DeltaRational(at.bound), l, reasons)
                 : simplex_.assert_lower(at.svar, DeltaRational(at.bound, 1), l, reasons);
    } else {
      ok = truth ? simplex_.assert_lower(at.svar, DeltaRational(at.bound), l, reasons)
                 : simplex_.assert_upper(at.svar, DeltaRational(at.bound, -1), l, reasons);
    }
    theory_dirty_ = true;
    if (!ok) {
      conflict.clear();
      for (int r : reasons) conflict.push_back(negate(r));
      return false;
    }
  }
  if (!theory_dirty_) return true;
  guard_.charge();
  ++stats_.theory_checks;
  if (!simplex_.check(reasons)) {
    conflict.clear();
    for (int r : reasons) conflict.push_back(negate(r));
    return false;
  }
  theory_dirty_ = false;
  return true;
}

void Engine::analyze(std::vector<Lit> conflict, std::vector<Lit>& learnt, int& backjump) {
  learnt.assign(1, 0);
  int pending = 0;
  Lit p = -1;
  std::size_t index = trail_.size();
  for (;;) {
    for (Lit q : conflict) {
      int v = var_of(q);
      if (p >= 0 && v == var_of(p)) continue;
      if (seen_[v] || level_of_[v] == 0) continue;
      seen_[v] = 1;
      if (level_of_[v] == level()) {
        ++pending;
      } else {
        learnt.push_back(q);
      }
    }
    do {
      --index;
    } while (!seen_[var_of(trail_[index])]);
    p = trail_[index];
    seen_[var_of(p)] = 0;
    if (--pending == 0) break;
    conflict = clauses_[reason_[var_of(p)]];
  }
  learnt[0] = negate(p);
  for (std::size_t i = 1; i < learnt.size(); ++i) seen_[var_of(learnt[i])] = 0;
  backjump = 0;
  if (learnt.size() > 1) {
    std::size_t best = 1;
    for (std::size_t i = 2; i < learnt.size(); ++i) {
      if (level_of_[var_of(learnt[i])] > level_of_[var_of(learnt[best])]) best = i;
    }
    std::swap(learnt[1], learnt[best]);
    backjump = level_of_[var_of(learnt[1])];
  }
}

void Engine::new_level() {
  trail_lim_.push_back(trail_.size());
  simplex_.push();
}

void Engine::backtrack(int target) {
  if (level() <= target) return;
  std::size_t keep = trail_lim_[target];
  for (std::size_t i = trail_.size(); i > keep; --i) {
    int v = var_of(trail_[i - 1]);
    assigns_[v] = -1;
    reason_[v] = -1;
  }
  trail_.resize(keep);
  simplex_.pop(trail_lim_.size() - target);
  trail_lim_.resize(target);
  qhead_ = trail_.size();
  theory_head_ = std::min(theory_head_, trail_.size());
  theory_dirty_ = true;
  order_cursor_ = 0;
}

Engine::Status Engine::search(const std::vector<Lit>& assumptions) {
  if (inconsistent_) return Status::Unsat;
  std::vector<Lit> conflict, learnt;
  for (;;) {
    int ci = propagate();
    bool has_conflict = ci >= 0;
    if (has_conflict) {
      conflict = clauses_[ci];
    } else if (!theory(conflict)) {
      has_conflict = true;
    }
    if (has_conflict) {
      ++stats_.conflicts;
      guard_.charge();
      int top = 0;
      for (Lit l : conflict) top = std::max(top, level_of_[var_of(l)]);
      if (top == 0) {
        inconsistent_ = true;
        return Status::Unsat;
      }
      backtrack(top);
      int backjump = 0;
      analyze(conflict, learnt, backjump);
      backtrack(backjump);
      if (learnt.size() == 1) {
        enqueue(learnt[0], -1);
      } else {
        clauses_.push_back(learnt);
        int idx = static_cast<int>(clauses_.size()) - 1;
        attach(idx);
        enqueue(learnt[0], idx);
      }
      continue;
    }
    if (static_cast<std::size_t>(level()) < assumptions.size()) {
      Lit a = assumptions[level()];
      int v = value(a);
      if (v == 0) return Status::Unsat;
      new_level();
      if (v < 0) enqueue(a, -1);
      continue;
    }
    while (order_cursor_ < assigns_.size() && assigns_[order_cursor_] >= 0) ++order_cursor_;
    if (order_cursor_ == assigns_.size()) return Status::Sat;
    ++stats_.decisions;
    new_level();
    enqueue(make_lit(static_cast<int>(order_cursor_), true), -1);
  }
}

std::optional<DeltaRational> Engine::minimize(int svar) { return simplex_.minimize(svar); }

Assignment Engine::model() const {
  Assignment out;
  for (const auto& name : bool_names_) out.truth[name] = value(make_lit(bool_index_.at(name))) == 1;
  Rational delta = simplex_.concrete_delta();
  for (const auto& name : num_names_) out.values[name] = simplex_.value(num_index_.at(name)).at(delta);
  return out;
}

}  // namespace cgm::engine
