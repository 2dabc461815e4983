#include "cgm/engine/simplex.hpp"

#include <algorithm>
#include <limits>

namespace cgm::engine {

int Simplex::add_variable() {
  value_.emplace_back();
  lower_.emplace_back();
  upper_.emplace_back();
  row_of_.push_back(-1);
  return static_cast<int>(value_.size()) - 1;
}

int Simplex::add_row(const std::map<int, Rational>& combination) {
  std::map<int, Rational> row;
  DeltaRational v;
  for (const auto& [var, c] : combination) {
    v += value_[var] * c;
    if (is_basic(var)) {
      for (const auto& [x, a] : rows_[row_of_[var]]) row[x] += c * a;
    } else {
      row[var] += c;
    }
  }
  std::erase_if(row, [](const auto& entry) { return entry.second == 0; });
  int s = add_variable();
  value_[s] = v;
  row_of_[s] = static_cast<int>(rows_.size());
  rows_.push_back(std::move(row));
  basic_of_row_.push_back(s);
  return s;
}

void Simplex::push_reason(std::vector<int>& out, const std::optional<Bound>& b) {
  if (b && b->reason >= 0) out.push_back(b->reason);
}

bool Simplex::assert_upper(int var, const DeltaRational& bound, int reason, std::vector<int>& conflict) {
  if (upper_[var] && upper_[var]->value <= bound) return true;
  trail_.push_back({var, true, upper_[var]});
  upper_[var] = Bound{bound, reason};
  if (lower_[var] && lower_[var]->value > bound) {
    conflict.clear();
    push_reason(conflict, lower_[var]);
    push_reason(conflict, upper_[var]);
    return false;
  }
  if (!is_basic(var) && value_[var] > bound) update(var, bound);
  return true;
}

bool Simplex::assert_lower(int var, const DeltaRational& bound, int reason, std::vector<int>& conflict) {
  if (lower_[var] && lower_[var]->value >= bound) return true;
  trail_.push_back({var, false, lower_[var]});
  lower_[var] = Bound{bound, reason};
  if (upper_[var] && upper_[var]->value < bound) {
    conflict.clear();
    push_reason(conflict, lower_[var]);
    push_reason(conflict, upper_[var]);
    return false;
  }
  if (!is_basic(var) && value_[var] < bound) update(var, bound);
  return true;
}

void Simplex::update(int nonbasic, const DeltaRational& v) {
  DeltaRational diff = v - value_[nonbasic];
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    auto it = rows_[r].find(nonbasic);
    if (it != rows_[r].end()) value_[basic_of_row_[r]] += diff * it->second;
  }
  value_[nonbasic] = v;
}

void Simplex::pivot(int row, int entering) {
  int leaving = basic_of_row_[row];
  std::map<int, Rational> old = std::move(rows_[row]);
  Rational a = old.at(entering);
  std::map<int, Rational> fresh;
  fresh[leaving] = 1 / a;
  for (const auto& [x, c] : old) {
    if (x != entering) fresh[x] = -c / a;
  }
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (static_cast<int>(r) == row) continue;
    auto it = rows_[r].find(entering);
    if (it == rows_[r].end()) continue;
    Rational c = it->second;
    rows_[r].erase(it);
    for (const auto& [x, f] : fresh) {
      auto [slot, inserted] = rows_[r].try_emplace(x, c * f);
      if (!inserted) {
        slot->second += c * f;
        if (slot->second == 0) rows_[r].erase(slot);
      }
    }
  }
  rows_[row] = std::move(fresh);
  basic_of_row_[row] = entering;
  row_of_[entering] = row;
  row_of_[leaving] = -1;
  ++pivots_;
}

void Simplex::pivot_and_update(int basic, int entering, const DeltaRational& v) {
  int row = row_of_[basic];
  const Rational& a = rows_[row].at(entering);
  DeltaRational theta = (v - value_[basic]) / a;
  value_[basic] = v;
  value_[entering] += theta;
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    if (static_cast<int>(r) == row) continue;
    auto it = rows_[r].find(entering);
    if (it != rows_[r].end()) value_[basic_of_row_[r]] += theta * it->second;
  }
  pivot(row, entering);
}

bool Simplex::check(std::vector<int>& conflict) {
  for (;;) {
    int violated = -1;
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      int b = basic_of_row_[r];
      if (violated >= 0 && b > violated) continue;
      if ((lower_[b] && value_[b] < lower_[b]->value) || (upper_[b] && value_[b] > upper_[b]->value)) violated = b;
    }
    if (violated < 0) return true;
    const auto& row = rows_[row_of_[violated]];
    bool raise = lower_[violated] && value_[violated] < lower_[violated]->value;
    int entering = -1;
    for (const auto& [x, a] : row) {
      bool up = (a > 0) == raise;
      if (up ? can_increase(x) : can_decrease(x)) {
        entering = x;
        break;
      }
    }
    if (entering < 0) {
      conflict.clear();
      push_reason(conflict, raise ? lower_[violated] : upper_[violated]);
      for (const auto& [x, a] : row) {
        bool up = (a > 0) == raise;
        push_reason(conflict, up ? upper_[x] : lower_[x]);
      }
      return false;
    }
    pivot_and_update(violated, entering, raise ? lower_[violated]->value : upper_[violated]->value);
  }
}

void Simplex::push() { checkpoints_.push_back(trail_.size()); }

void Simplex::pop(std::size_t levels) {
  if (levels == 0) return;
  std::size_t target = checkpoints_[checkpoints_.size() - levels];
  while (trail_.size() > target) {
    TrailEntry& e = trail_.back();
    (e.upper ? upper_ : lower_)[e.var] = std::move(e.previous);
    trail_.pop_back();
  }
  checkpoints_.resize(checkpoints_.size() - levels);
}

std::optional<DeltaRational> Simplex::minimize(int var) {
  for (;;) {
    std::map<int, Rational> unit;
    const std::map<int, Rational>* cost = &unit;
    if (is_basic(var)) {
      cost = &rows_[row_of_[var]];
    } else {
      unit[var] = 1;
    }
    int entering = -1;
    int direction = 0;
    for (const auto& [x, a] : *cost) {
      if (a < 0 && can_increase(x)) {
        entering = x;
        direction = 1;
        break;
      }
      if (a > 0 && can_decrease(x)) {
        entering = x;
        direction = -1;
        break;
      }
    }
    if (entering < 0) return value_[var];

    std::optional<DeltaRational> best;
    int leaving = -1;
    auto consider = [&](const DeltaRational& step, int candidate) {
      if (!best || step < *best || (step == *best && candidate < leaving)) {
        best = step;
        leaving = candidate;
      }
    };
    if (direction > 0 && upper_[entering]) consider(upper_[entering]->value - value_[entering], entering);
    if (direction < 0 && lower_[entering]) consider(value_[entering] - lower_[entering]->value, entering);
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      auto it = rows_[r].find(entering);
      if (it == rows_[r].end()) continue;
      int b = basic_of_row_[r];
      Rational rate = it->second * direction;
      if (rate > 0 && upper_[b]) consider((upper_[b]->value - value_[b]) / rate, b);
      if (rate < 0 && lower_[b]) consider((value_[b] - lower_[b]->value) / (-rate), b);
    }
    if (!best) return std::nullopt;
    if (leaving == entering) {
      update(entering, value_[entering] + *best * Rational(direction));
    } else {
      const Rational& a = rows_[row_of_[leaving]].at(entering);
      Rational rate = a * direction;
      pivot_and_update(leaving, entering, rate > 0 ? upper_[leaving]->value : lower_[leaving]->value);
    }
  }
}

Rational Simplex::concrete_delta() const {
  Rational delta = 1;
  for (std::size_t v = 0; v < value_.size(); ++v) {
    const DeltaRational& x = value_[v];
    if (lower_[v]) {
      const DeltaRational& l = lower_[v]->value;
      if (l.c < x.c && l.k > x.k) delta = std::min(delta, Rational((x.c - l.c) / (l.k - x.k)));
    }
    if (upper_[v]) {
      const DeltaRational& u = upper_[v]->value;
      if (x.c < u.c && x.k > u.k) delta = std::min(delta, Rational((u.c - x.c) / (x.k - u.k)));
    }
  }
  return delta;
}

}  // namespace cgm::engine
