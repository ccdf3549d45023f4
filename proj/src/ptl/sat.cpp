#include "tdlite/ptl/sat.hpp"

#include <algorithm>

namespace tdlite::ptl {

int SatSolver::new_var() {
  int v = (int)assign_.size();
  assign_.push_back(-1);
  phase_.push_back(0);
  level_.push_back(0);
  reason_.push_back(-1);
  act_.push_back(0.0);
  seen_.push_back(0);
  watches_.emplace_back();
  watches_.emplace_back();
  order_.push({0.0, v});
  return v;
}

void SatSolver::add_clause(std::vector<int> lits) {
  if (!ok_) return;
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  std::vector<int> kept;
  for (size_t i = 0; i < lits.size(); ++i) {
    if (i + 1 < lits.size() && lits[i + 1] == (lits[i] ^ 1)) return;  // taut
    if (lit_true(lits[i])) return;  // satisfied at the root level
    if (!lit_false(lits[i])) kept.push_back(lits[i]);
  }
  if (kept.empty()) {
    ok_ = false;
    return;
  }
  if (kept.size() == 1) {
    enqueue(kept[0], -1);
    if (propagate() != -1) ok_ = false;
    return;
  }
  int ci = (int)clauses_.size();
  clauses_.push_back(kept);
  watches_[kept[0]].push_back({ci, kept[1]});
  watches_[kept[1]].push_back({ci, kept[0]});
}

void SatSolver::enqueue(int l, int reason) {
  int v = l >> 1;
  assign_[v] = (int8_t)(1 - (l & 1));
  level_[v] = (int)trail_lim_.size();
  reason_[v] = reason;
  trail_.push_back(l);
}

int SatSolver::propagate() {
  while (qhead_ < trail_.size()) {
    int p = trail_[qhead_++];       // p just became true
    int fl = p ^ 1;                 // so fl is false
    std::vector<Watcher>& ws = watches_[fl];
    size_t i = 0, j = 0;
    while (i < ws.size()) {
      Watcher w = ws[i++];
      if (lit_true(w.blocker)) {
        ws[j++] = w;
        continue;
      }
      std::vector<int>& c = clauses_[w.clause];
      if (c[0] == fl) std::swap(c[0], c[1]);
      // c[1] == fl now; c[0] is the other watched literal.
      if (lit_true(c[0])) {
        ws[j++] = {w.clause, c[0]};
        continue;
      }
      bool moved = false;
      for (size_t k = 2; k < c.size(); ++k) {
        if (!lit_false(c[k])) {
          std::swap(c[1], c[k]);
          watches_[c[1]].push_back({w.clause, c[0]});
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[j++] = {w.clause, c[0]};
      if (lit_false(c[0])) {
        // Conflict: restore the untouched tail of the watch list.
        while (i < ws.size()) ws[j++] = ws[i++];
        ws.resize(j);
        qhead_ = trail_.size();
        return w.clause;
      }
      enqueue(c[0], w.clause);
    }
    ws.resize(j);
  }
  return -1;
}

void SatSolver::bump(int v) {
  act_[v] += var_inc_;
  if (act_[v] > 1e100) {
    for (double& a : act_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (assign_[v] == -1) order_.push({act_[v], v});
}

void SatSolver::analyze(int confl, std::vector<int>& learnt, int& bt_level) {
  learnt.assign(1, 0);  // slot for the asserting literal
  int count = 0, p = -1;
  size_t idx = trail_.size();
  int cur_level = (int)trail_lim_.size();
  for (;;) {
    std::vector<int>& c = clauses_[confl];
    for (size_t k = (p == -1 ? 0 : 1); k < c.size(); ++k) {
      int q = c[k], v = q >> 1;
      if (seen_[v] || level_[v] == 0) continue;
      seen_[v] = 1;
      bump(v);
      if (level_[v] == cur_level)
        ++count;
      else
        learnt.push_back(q);
    }
    // Walk back to the next marked trail literal.
    while (!seen_[trail_[--idx] >> 1]) {
    }
    p = trail_[idx];
    seen_[p >> 1] = 0;
    if (--count == 0) break;
    confl = reason_[p >> 1];
  }
  learnt[0] = p ^ 1;
  bt_level = 0;
  if (learnt.size() > 1) {
    size_t best = 1;
    for (size_t k = 2; k < learnt.size(); ++k)
      if (level_[learnt[k] >> 1] > level_[learnt[best] >> 1]) best = k;
    std::swap(learnt[1], learnt[best]);
    bt_level = level_[learnt[1] >> 1];
  }
  for (int l : learnt) seen_[l >> 1] = 0;
}

void SatSolver::backtrack(int lvl) {
  if ((int)trail_lim_.size() <= lvl) return;
  for (size_t i = trail_.size(); i-- > (size_t)trail_lim_[lvl];) {
    int v = trail_[i] >> 1;
    phase_[v] = (int8_t)(1 - (trail_[i] & 1));
    assign_[v] = -1;
    order_.push({act_[v], v});
  }
  trail_.resize(trail_lim_[lvl]);
  trail_lim_.resize(lvl);
  qhead_ = trail_.size();
}

int SatSolver::pick_branch() {
  while (!order_.empty()) {
    int v = order_.top().second;
    order_.pop();
    if (assign_[v] == -1) return v;
  }
  return -1;
}

SatSolver::Status SatSolver::solve(uint64_t max_conflicts) {
  if (!ok_) return Status::Unsat;
  uint64_t conflicts = 0;
  uint64_t restart_limit = 100, since_restart = 0;
  std::vector<int> learnt;
  for (;;) {
    int confl = propagate();
    if (confl != -1) {
      if (trail_lim_.empty()) return Status::Unsat;
      if (++conflicts > max_conflicts) return Status::Budget;
      ++since_restart;
      int bt;
      analyze(confl, learnt, bt);
      backtrack(bt);
      if (learnt.size() == 1) {
        enqueue(learnt[0], -1);
      } else {
        int ci = (int)clauses_.size();
        clauses_.push_back(learnt);
        watches_[learnt[0]].push_back({ci, learnt[1]});
        watches_[learnt[1]].push_back({ci, learnt[0]});
        enqueue(learnt[0], ci);
      }
      var_inc_ /= 0.95;
    } else {
      if (since_restart >= restart_limit) {
        since_restart = 0;
        restart_limit += restart_limit / 2;
        backtrack(0);
        continue;
      }
      int v = pick_branch();
      if (v == -1) return Status::Sat;
      trail_lim_.push_back((int)trail_.size());
      enqueue(2 * v + (phase_[v] ? 0 : 1), -1);
    }
  }
}

}  // namespace tdlite::ptl
