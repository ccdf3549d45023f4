// Conflict-driven clause-learning solver for plain CNF.
#pragma once

#include <cstdint>
#include <queue>
#include <vector>

namespace tdlite::ptl {

// Literals are 2*v for the positive and 2*v+1 for the negated occurrence of
// variable v; (lit ^ 1) negates.
class SatSolver {
 public:
  enum class Status { Sat, Unsat, Budget };

  int new_var();
  int num_vars() const { return (int)assign_.size(); }
  // Tautologies are dropped; an empty clause makes the instance unsat.
  void add_clause(std::vector<int> lits);
  size_t clause_count() const { return clauses_.size(); }
  Status solve(uint64_t max_conflicts);
  // Model value of variable v; meaningful after solve returned Sat.
  bool value(int v) const { return assign_[v] == 1; }

 private:
  struct Watcher {
    int clause;
    int blocker;
  };

  int level(int v) const { return level_[v]; }
  bool lit_true(int l) const { return assign_[l >> 1] == 1 - (l & 1); }
  bool lit_false(int l) const { return assign_[l >> 1] == (l & 1); }
  bool lit_unset(int l) const { return assign_[l >> 1] == -1; }
  void enqueue(int l, int reason);
  int propagate();  // returns conflicting clause index or -1
  void analyze(int confl, std::vector<int>& learnt, int& bt_level);
  void backtrack(int lvl);
  void bump(int v);
  int pick_branch();

  std::vector<std::vector<int>> clauses_;
  std::vector<std::vector<Watcher>> watches_;  // indexed by literal
  std::vector<int8_t> assign_;                 // -1 unset, 0 false, 1 true
  std::vector<int8_t> phase_;
  std::vector<int> level_, reason_;
  std::vector<int> trail_, trail_lim_;
  std::vector<double> act_;
  std::vector<uint8_t> seen_;
  std::priority_queue<std::pair<double, int>> order_;
  double var_inc_ = 1.0;
  size_t qhead_ = 0;
  bool ok_ = true;
};

}  // namespace tdlite::ptl
