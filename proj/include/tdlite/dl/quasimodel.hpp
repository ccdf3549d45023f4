// Satisfiability for knowledge bases whose roles carry every/some-instant
// markers and whose concepts use only boolean connectives, successor counts
// and the every-instant operator. A satisfying interpretation is abstracted
// into a finite certificate: a window of instants, a set of runs assigning a
// concept type to every instant, and an extension of the assertion box fixing
// which asserted role pairs repeat at which instants. The certificate is
// checked by pure rank arithmetic and set conditions; the decision procedure
// searches for one by backtracking.
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tdlite/dl/ast.hpp"
#include "tdlite/ptl/generic_engine.hpp"

namespace tdlite::dl {

// Rank value standing for "arbitrarily many"; subtraction saturates.
inline constexpr long qm_omega = 1000000000L;
long qm_sub(long a, long n);

// Concept type at one instant. Ranks give, per role direction (printed as
// "r" or "r^-"), the largest required successor count: rank for the plain
// role, box_rank for the every-instant role, dia_rank for the some-instant
// role. Missing entries mean rank 0. Held every-instant concepts are keyed
// by their printed form.
struct SigmaType {
  std::set<std::string> atoms;
  std::set<std::string> boxed;
  std::map<std::string, long> rank;
  std::map<std::string, long> box_rank;
  std::map<std::string, long> dia_rank;
  bool operator==(const SigmaType&) const = default;
};

// Type assignment over the full instant window.
struct QmRun {
  std::map<long, SigmaType> at;
  bool operator==(const QmRun&) const = default;
};

// One positive role fact added on top of the assertion box; the role is a
// base name, the inverse direction is implicit.
struct ExtFact {
  long k = 0;
  std::string role;
  std::string from, to;
  bool operator==(const ExtFact&) const = default;
};

struct Quasimodel {
  std::vector<long> q_values;  // admissible finite rank values, sorted
  std::vector<long> instants;  // the window, sorted
  std::vector<QmRun> runs;
  std::vector<ExtFact> ext_delta;
};

struct QmViolation {
  std::string condition;  // "t3".."t7", "r1".."r6", "Q1".."Q4", "ext", ...
  std::string detail;
};

struct QmCheck {
  bool ok = true;
  std::vector<QmViolation> violations;
};

// Deterministic verification of every certificate condition against the
// knowledge base; each violation names the condition and the offending
// run, instant, role or object.
QmCheck check_quasimodel(const KnowledgeBase& kb, const Quasimodel& qm);

struct QmLimits {
  long max_count = 64;               // largest admissible successor count
  std::size_t max_ext_slots = 20;    // enumerable assertion-box extension slots
  std::size_t max_types = 20000;     // candidate types per instant
  std::size_t max_nodes = 4000000;   // overall backtracking budget
  int extra_instants = 1;            // window paddings tried beyond the first
};

struct QmVerdict {
  ptl::Outcome outcome = ptl::Outcome::Unsat;
  std::optional<Quasimodel> witness;
  std::string note;
};

// Decides satisfiability by certificate search. Requires an empty role
// hierarchy and concepts inside the fragment above, otherwise throws
// std::invalid_argument. Every satisfiable verdict carries a certificate
// that has been re-verified with check_quasimodel.
QmVerdict decide_temporalised(const KnowledgeBase& kb, const QmLimits& lim = {});

std::string to_json(const Quasimodel& qm);

}  // namespace tdlite::dl
