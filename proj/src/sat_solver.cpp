#include "icsguard/sat_solver.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace icsguard {

namespace {

// Luby sequence scaled by y: 1 1 2 1 1 2 4 ...
double luby(double y, std::uint64_t x) {
  std::uint64_t size = 1;
  int seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  return std::pow(y, seq);
}

}  // namespace

float SatSolver::clause_activity(CRef c) const { return std::bit_cast<float>(arena_[c + 2]); }

void SatSolver::set_clause_activity(CRef c, float a) { arena_[c + 2] = std::bit_cast<std::uint32_t>(a); }

SatSolver::CRef SatSolver::alloc_clause(std::span<const Lit> lits, bool learnt, std::uint32_t lbd) {
  auto c = static_cast<CRef>(arena_.size());
  arena_.push_back(static_cast<std::uint32_t>(lits.size()));
  arena_.push_back((learnt ? 1u : 0u) | (lbd << 2));
  arena_.push_back(std::bit_cast<std::uint32_t>(0.0f));
  arena_.insert(arena_.end(), lits.begin(), lits.end());
  return c;
}

std::uint32_t SatSolver::new_var() {
  auto v = static_cast<std::uint32_t>(assign_.size());
  assign_.push_back(kUndef);
  level_.push_back(0);
  reason_.push_back(kNoReason);
  polarity_.push_back(1);
  activity_.push_back(0.0);
  seen_.push_back(0);
  heap_pos_.push_back(kNotInHeap);
  watches_.emplace_back();
  watches_.emplace_back();
  heap_insert(v);
  return v + 1;
}

void SatSolver::ensure_vars(std::uint32_t count) {
  while (var_count() < count) new_var();
}

bool SatSolver::add_clause(std::span<const Literal> clause) {
  if (!ok_) return false;
  cancel_until(0);
  std::vector<Lit> lits;
  lits.reserve(clause.size());
  for (Literal l : clause) {
    if (l.var() == 0) throw std::invalid_argument("literal with variable 0");
    ensure_vars(l.var());
    lits.push_back(encode(l));
  }
  std::sort(lits.begin(), lits.end());
  std::size_t j = 0;
  for (std::size_t i = 0; i < lits.size(); ++i) {
    Lit l = lits[i];
    if (value(l) == kTrue || (j > 0 && lits[j - 1] == (l ^ 1u))) return true;  // satisfied or tautology
    if (value(l) == kFalse || (j > 0 && lits[j - 1] == l)) continue;
    lits[j++] = l;
  }
  lits.resize(j);
  if (lits.empty()) {
    ok_ = false;
    return false;
  }
  if (lits.size() == 1) {
    enqueue(lits[0], kNoReason);
    if (propagate() != kNoReason) ok_ = false;
    return ok_;
  }
  CRef c = alloc_clause(lits, false, 0);
  originals_.push_back(c);
  attach(c);
  return true;
}

void SatSolver::attach(CRef c) {
  const Lit* lits = clause_lits(c);
  watches_[lits[0] ^ 1u].push_back({c, lits[1]});
  watches_[lits[1] ^ 1u].push_back({c, lits[0]});
}

void SatSolver::enqueue(Lit l, CRef reason) {
  std::uint32_t v = l >> 1;
  assign_[v] = static_cast<std::int8_t>((l & 1u) ? kFalse : kTrue);
  level_[v] = decision_level();
  reason_[v] = reason;
  trail_.push_back(l);
}

SatSolver::CRef SatSolver::propagate() {
  CRef conflict = kNoReason;
  while (qhead_ < trail_.size()) {
    Lit p = trail_[qhead_++];
    ++stats_.propagations;
    auto& ws = watches_[p];
    const Lit false_lit = p ^ 1u;
    std::size_t i = 0, j = 0;
    const std::size_t n = ws.size();
    while (i < n) {
      Watcher w = ws[i++];
      if (value(w.blocker) == kTrue) {
        ws[j++] = w;
        continue;
      }
      Lit* c = clause_lits(w.cref);
      if (c[0] == false_lit) std::swap(c[0], c[1]);
      Lit first = c[0];
      if (first != w.blocker && value(first) == kTrue) {
        ws[j++] = {w.cref, first};
        continue;
      }
      const std::uint32_t size = clause_size(w.cref);
      bool moved = false;
      for (std::uint32_t k = 2; k < size; ++k) {
        if (value(c[k]) != kFalse) {
          c[1] = c[k];
          c[k] = false_lit;
          watches_[c[1] ^ 1u].push_back({w.cref, first});
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[j++] = {w.cref, first};
      if (value(first) == kFalse) {
        conflict = w.cref;
        qhead_ = trail_.size();
        while (i < n) ws[j++] = ws[i++];
      } else {
        enqueue(first, w.cref);
      }
    }
    ws.resize(j);
    if (conflict != kNoReason) break;
  }
  return conflict;
}

void SatSolver::bump_var(std::uint32_t v) {
  activity_[v] += var_inc_;
  if (activity_[v] > 1e100) {
    for (auto& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (heap_contains(v)) heap_up(heap_pos_[v]);
}

void SatSolver::bump_clause(CRef c) {
  float a = clause_activity(c) + clause_inc_;
  set_clause_activity(c, a);
  if (a > 1e20f) {
    for (CRef l : learnts_) set_clause_activity(l, clause_activity(l) * 1e-20f);
    clause_inc_ *= 1e-20f;
  }
}

void SatSolver::analyze(CRef conflict, std::vector<Lit>& learnt, std::uint32_t& bt_level,
                        std::uint32_t& lbd) {
  learnt.clear();
  learnt.push_back(kNoLit);
  int path = 0;
  Lit p = kNoLit;
  std::size_t index = trail_.size();
  CRef c = conflict;
  do {
    if (clause_learnt(c)) bump_clause(c);
    const Lit* lits = clause_lits(c);
    const std::uint32_t size = clause_size(c);
    for (std::uint32_t k = (p == kNoLit ? 0 : 1); k < size; ++k) {
      Lit q = lits[k];
      std::uint32_t v = q >> 1;
      if (!seen_[v] && level_[v] > 0) {
        bump_var(v);
        seen_[v] = 1;
        if (level_[v] >= decision_level()) {
          ++path;
        } else {
          learnt.push_back(q);
        }
      }
    }
    while (!seen_[trail_[--index] >> 1]) {
    }
    p = trail_[index];
    c = reason_[p >> 1];
    seen_[p >> 1] = 0;
    --path;
  } while (path > 0);
  learnt[0] = p ^ 1u;

  // Recursive minimisation.
  std::uint32_t abstract_levels = 0;
  for (std::size_t k = 1; k < learnt.size(); ++k) abstract_levels |= 1u << (level_[learnt[k] >> 1] & 31u);
  analyze_toclear_.assign(learnt.begin(), learnt.end());
  std::size_t j = 1;
  for (std::size_t k = 1; k < learnt.size(); ++k) {
    std::uint32_t v = learnt[k] >> 1;
    if (reason_[v] == kNoReason || !redundant(learnt[k], abstract_levels)) learnt[j++] = learnt[k];
  }
  learnt.resize(j);

  bt_level = 0;
  if (learnt.size() > 1) {
    std::size_t max_i = 1;
    for (std::size_t k = 2; k < learnt.size(); ++k) {
      if (level_[learnt[k] >> 1] > level_[learnt[max_i] >> 1]) max_i = k;
    }
    std::swap(learnt[1], learnt[max_i]);
    bt_level = level_[learnt[1] >> 1];
  }

  for (Lit l : analyze_toclear_) seen_[l >> 1] = 0;

  // Literal block distance.
  std::vector<std::uint32_t> levels;
  levels.reserve(learnt.size());
  for (Lit l : learnt) levels.push_back(level_[l >> 1]);
  std::sort(levels.begin(), levels.end());
  lbd = static_cast<std::uint32_t>(std::unique(levels.begin(), levels.end()) - levels.begin());
}

bool SatSolver::redundant(Lit l, std::uint32_t abstract_levels) {
  analyze_stack_.clear();
  analyze_stack_.push_back(l);
  const std::size_t top = analyze_toclear_.size();
  while (!analyze_stack_.empty()) {
    Lit q = analyze_stack_.back();
    analyze_stack_.pop_back();
    CRef c = reason_[q >> 1];
    const Lit* lits = clause_lits(c);
    const std::uint32_t size = clause_size(c);
    for (std::uint32_t k = 1; k < size; ++k) {
      Lit r = lits[k];
      std::uint32_t v = r >> 1;
      if (!seen_[v] && level_[v] > 0) {
        if (reason_[v] != kNoReason && (abstract_levels & (1u << (level_[v] & 31u))) != 0) {
          seen_[v] = 1;
          analyze_stack_.push_back(r);
          analyze_toclear_.push_back(r);
        } else {
          for (std::size_t k2 = top; k2 < analyze_toclear_.size(); ++k2) seen_[analyze_toclear_[k2] >> 1] = 0;
          analyze_toclear_.resize(top);
          return false;
        }
      }
    }
  }
  return true;
}

void SatSolver::analyze_final(Lit failed) {
  // `failed` is an assumption currently assigned false.
  core_.clear();
  core_.push_back(decode(failed));
  if (decision_level() == 0) return;
  seen_[failed >> 1] = 1;
  for (std::size_t i = trail_.size(); i-- > trail_lim_[0];) {
    std::uint32_t v = trail_[i] >> 1;
    if (!seen_[v]) continue;
    if (reason_[v] == kNoReason) {
      // A decision above level 0 is an assumption; it may be ~failed itself.
      core_.push_back(decode(trail_[i]));
    } else {
      const Lit* lits = clause_lits(reason_[v]);
      const std::uint32_t size = clause_size(reason_[v]);
      for (std::uint32_t k = 1; k < size; ++k) {
        if (level_[lits[k] >> 1] > 0) seen_[lits[k] >> 1] = 1;
      }
    }
    seen_[v] = 0;
  }
  seen_[failed >> 1] = 0;
}

void SatSolver::cancel_until(std::uint32_t lvl) {
  if (decision_level() <= lvl) return;
  for (std::size_t i = trail_.size(); i-- > trail_lim_[lvl];) {
    std::uint32_t v = trail_[i] >> 1;
    polarity_[v] = static_cast<std::uint8_t>(trail_[i] & 1u);
    assign_[v] = kUndef;
    reason_[v] = kNoReason;
    if (!heap_contains(v)) heap_insert(v);
  }
  trail_.resize(trail_lim_[lvl]);
  trail_lim_.resize(lvl);
  qhead_ = trail_.size();
}

SatSolver::Lit SatSolver::pick_branch() {
  while (!heap_.empty()) {
    std::uint32_t v = heap_pop();
    if (assign_[v] == kUndef) return 2 * v + polarity_[v];
  }
  return kNoLit;
}

bool SatSolver::locked(CRef c) const {
  Lit first = clause_lits(c)[0];
  std::uint32_t v = first >> 1;
  return reason_[v] == c && value(first) == kTrue;
}

void SatSolver::reduce_learnts() {
  std::vector<CRef> sorted = learnts_;
  std::sort(sorted.begin(), sorted.end(), [this](CRef a, CRef b) {
    bool ga = clause_lbd(a) <= 2, gb = clause_lbd(b) <= 2;
    if (ga != gb) return !ga;  // glue clauses last (kept)
    return clause_activity(a) < clause_activity(b);
  });
  const std::size_t half = sorted.size() / 2;
  std::vector<CRef> keep;
  keep.reserve(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    CRef c = sorted[i];
    if (i < half && clause_lbd(c) > 2 && clause_size(c) > 2 && !locked(c)) {
      arena_[c + 1] |= 2u;
      wasted_ += clause_size(c) + 3;
    } else {
      keep.push_back(c);
    }
  }
  learnts_ = std::move(keep);
  for (auto& ws : watches_) {
    ws.erase(std::remove_if(ws.begin(), ws.end(), [this](const Watcher& w) { return clause_deleted(w.cref); }),
             ws.end());
  }
  if (wasted_ * 2 > arena_.size()) collect_garbage();
}

void SatSolver::collect_garbage() {
  std::vector<std::uint32_t> fresh;
  fresh.reserve(arena_.size() - wasted_);
  auto move = [&](CRef c) {
    auto n = static_cast<CRef>(fresh.size());
    fresh.insert(fresh.end(), arena_.begin() + c, arena_.begin() + c + 3 + arena_[c]);
    arena_[c + 2] = n;  // forwarding pointer
    return n;
  };
  for (auto& c : originals_) c = move(c);
  for (auto& c : learnts_) c = move(c);
  for (std::size_t v = 0; v < reason_.size(); ++v) {
    if (reason_[v] != kNoReason && assign_[v] != kUndef) reason_[v] = arena_[reason_[v] + 2];
  }
  arena_ = std::move(fresh);
  wasted_ = 0;
  for (auto& ws : watches_) ws.clear();
  for (CRef c : originals_) attach(c);
  for (CRef c : learnts_) attach(c);
}

bool SatSolver::out_of_time() {
  if (interrupt_ != nullptr && interrupt_->load(std::memory_order_relaxed)) return true;
  return deadline_ && Clock::now() >= *deadline_;
}

SatSolver::Result SatSolver::search(std::uint64_t conflict_limit) {
  std::uint64_t conflicts = 0;
  std::vector<Lit> learnt;
  for (;;) {
    CRef conflict = propagate();
    if (conflict != kNoReason) {
      ++stats_.conflicts;
      ++conflicts;
      if (decision_level() == 0) {
        ok_ = false;
        core_.clear();
        return Result::unsat;
      }
      std::uint32_t bt = 0, lbd = 0;
      analyze(conflict, learnt, bt, lbd);
      cancel_until(bt);
      if (learnt.size() == 1) {
        enqueue(learnt[0], kNoReason);
      } else {
        CRef c = alloc_clause(learnt, true, lbd);
        learnts_.push_back(c);
        attach(c);
        bump_clause(c);
        enqueue(learnt[0], c);
      }
      var_inc_ /= var_decay_;
      clause_inc_ /= clause_decay_;
      if ((stats_.conflicts & 255u) == 0 && out_of_time()) {
        timed_out_ = true;
        return Result::unknown;
      }
      continue;
    }

    if (conflicts >= conflict_limit) {
      cancel_until(0);
      return Result::unknown;
    }
    if (static_cast<double>(learnts_.size()) >= max_learnts_ + static_cast<double>(trail_.size())) {
      reduce_learnts();
    }

    Lit next = kNoLit;
    while (decision_level() < assumptions_.size()) {
      Lit a = assumptions_[decision_level()];
      if (value(a) == kTrue) {
        trail_lim_.push_back(static_cast<std::uint32_t>(trail_.size()));
      } else if (value(a) == kFalse) {
        analyze_final(a);
        return Result::unsat;
      } else {
        next = a;
        break;
      }
    }
    if (next == kNoLit) {
      ++stats_.decisions;
      if ((stats_.decisions & 1023u) == 0 && out_of_time()) {
        timed_out_ = true;
        return Result::unknown;
      }
      next = pick_branch();
      if (next == kNoLit) return Result::sat;
    }
    trail_lim_.push_back(static_cast<std::uint32_t>(trail_.size()));
    enqueue(next, kNoReason);
  }
}

SatSolver::Result SatSolver::solve(std::span<const Literal> assumptions) {
  ++stats_.solves;
  core_.clear();
  model_.clear();
  if (!ok_) return Result::unsat;
  assumptions_.clear();
  for (Literal l : assumptions) {
    ensure_vars(l.var());
    assumptions_.push_back(encode(l));
  }
  cancel_until(0);
  if (propagate() != kNoReason) {
    ok_ = false;
    return Result::unsat;
  }
  max_learnts_ = std::max(static_cast<double>(originals_.size()) / 3.0, 5000.0);
  timed_out_ = false;
  Result result = Result::unknown;
  for (std::uint64_t restart = 0; result == Result::unknown; ++restart) {
    result = search(static_cast<std::uint64_t>(luby(2.0, restart) * 100.0));
    if (result == Result::unknown) {
      if (timed_out_ || out_of_time()) break;
      ++stats_.restarts;
      max_learnts_ *= 1.05;
    }
  }
  if (result == Result::sat) {
    model_.resize(assign_.size());
    for (std::size_t v = 0; v < assign_.size(); ++v) model_[v] = assign_[v] == kTrue;
  }
  cancel_until(0);
  return result;
}

std::vector<bool> SatSolver::model() const {
  std::vector<bool> out(model_.size() + 1, false);
  for (std::size_t v = 0; v < model_.size(); ++v) out[v + 1] = model_[v];
  return out;
}

void SatSolver::heap_insert(std::uint32_t v) {
  heap_pos_[v] = static_cast<std::uint32_t>(heap_.size());
  heap_.push_back(v);
  heap_up(heap_pos_[v]);
}

void SatSolver::heap_up(std::uint32_t pos) {
  std::uint32_t v = heap_[pos];
  while (pos > 0) {
    std::uint32_t parent = (pos - 1) / 2;
    if (activity_[heap_[parent]] >= activity_[v]) break;
    heap_[pos] = heap_[parent];
    heap_pos_[heap_[pos]] = pos;
    pos = parent;
  }
  heap_[pos] = v;
  heap_pos_[v] = pos;
}

void SatSolver::heap_down(std::uint32_t pos) {
  std::uint32_t v = heap_[pos];
  const auto n = static_cast<std::uint32_t>(heap_.size());
  for (;;) {
    std::uint32_t child = 2 * pos + 1;
    if (child >= n) break;
    if (child + 1 < n && activity_[heap_[child + 1]] > activity_[heap_[child]]) ++child;
    if (activity_[heap_[child]] <= activity_[v]) break;
    heap_[pos] = heap_[child];
    heap_pos_[heap_[pos]] = pos;
    pos = child;
  }
  heap_[pos] = v;
  heap_pos_[v] = pos;
}

std::uint32_t SatSolver::heap_pop() {
  std::uint32_t top = heap_[0];
  heap_pos_[top] = kNotInHeap;
  std::uint32_t last = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    heap_[0] = last;
    heap_pos_[last] = 0;
    heap_down(0);
  }
  return top;
}

std::optional<std::vector<bool>> solve_sat(const std::vector<Clause>& clauses, std::uint32_t var_count,
                                           std::span<const Literal> assumptions) {
  SatSolver solver;
  solver.ensure_vars(var_count);
  for (const auto& c : clauses) {
    if (!solver.add_clause(c)) return std::nullopt;
  }
  if (solver.solve(assumptions) != SatSolver::Result::sat) return std::nullopt;
  auto model = solver.model();
  model.resize(static_cast<std::size_t>(var_count) + 1, false);
  return model;
}

}  // namespace icsguard
