// Separated Normal Form: initial, step, and eventuality clauses anchored at 0.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "tdlite/ptl/formula.hpp"

namespace tdlite::ptl {

// Propositional literal; next_prefix lifts it one instant forward.
struct TemporalLiteral {
  std::string var;
  bool pos = true;
  int next = 0;  // 0 or 1
};

struct SnfLit {
  std::string var;
  bool pos = true;
};

// ⊡(pre1 & ... -> X(post1 | ...)); empty pre = true, empty post = false.
// Over Z every instant is a successor, so "step: true -> X(c)" states c
// globally; there is no separate global-clause kind.
struct StepClause {
  std::vector<SnfLit> pre;
  std::vector<SnfLit> post;
};

// ⊡(pre1 & ... -> eventually lit), future or past.
struct EvClause {
  std::vector<SnfLit> pre;
  SnfLit lit;
  bool future = true;
};

struct SnfClauseSet {
  std::vector<std::vector<SnfLit>> init;  // disjunctions holding at instant 0
  std::vector<StepClause> step;
  std::vector<EvClause> ev;
  // Printed source subformula -> the variable naming it (variables map to
  // themselves). Carried for diagnostics; not part of the text format.
  std::map<std::string, std::string> names;

  std::string to_text() const;
  F to_formula() const;     // conjunction equisatisfiable with the source
  size_t literal_count() const;
};

// Throws std::runtime_error on malformed input.
SnfClauseSet snf_from_text(const std::string& text);

// Renaming of every temporal subformula by a fresh variable: psi ∧ ⊡(∧phi)
// with each phi element a biconditional over at most one temporal operator.
// Past next is shifted to a future-next biconditional.
struct FlatResult {
  F psi;
  std::vector<F> phi;
};
FlatResult flatten(const F& f);

// Replaces each boxed literal subformula in a flat clause list by a shared
// fresh variable; links carry the defining biconditionals.
struct SurrogateResult {
  std::vector<F> phi;
  std::map<std::string, std::string> table;  // printed box formula -> variable
  std::vector<F> links;
};
SurrogateResult introduce_surrogates(const std::vector<F>& phi);

// Equisatisfiable clause set, linear in the closure size of f.
SnfClauseSet to_snf(const F& f);

}  // namespace tdlite::ptl
