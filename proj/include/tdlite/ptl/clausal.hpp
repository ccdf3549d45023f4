// Fragment-specialised decision procedures: a certificate search for
// binary-clause (krom) inputs over boxes and next operators, and a
// polynomial grounding for horn inputs over boxes plus timestamped facts.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tdlite/ptl/formula.hpp"
#include "tdlite/ptl/generic_engine.hpp"
#include "tdlite/ptl/snf.hpp"
#include "tdlite/ptl/upword.hpp"

namespace tdlite::ptl {

// Clauses of at most two literals, each at the current or the next instant.
// Units are stored with both slots equal.
struct BinaryClauses {
  std::vector<std::string> vars;
  std::vector<std::pair<TemporalLiteral, TemporalLiteral>> clauses;
};

// Deductive closure of a globally-asserted binary clause set under resolution
// and next-shifting. It is complete for chain consequences: the global
// assertion of the input entails L -> X^k L' iff the closure holds a
// same-time clause (k = 0) or a path of k single-step clauses (k >= 1).
struct ClauseClosure {
  std::vector<std::string> vars;
  // Literal ids: 2*v positive, 2*v+1 negated, plus 2*vars.size() when the
  // literal carries a next prefix; (id ^ 1) negates. Symmetric bit matrix:
  // bits[a] has bit b set iff the clause {a, b} is in the closure.
  std::vector<std::vector<uint64_t>> bits;

  bool has(int a, int b) const;
  int id(const TemporalLiteral& l) const;
  TemporalLiteral literal(int id) const;
  std::vector<std::pair<TemporalLiteral, TemporalLiteral>> clauses() const;
};
ClauseClosure compute_closure(const BinaryClauses& phi);

// Nondeterministic finite automaton over a one-letter alphabet; the language
// is the set of accepted word lengths.
struct UnaryNFA {
  int states = 0;
  std::vector<int> initial, accepting;
  std::vector<std::pair<int, int>> edges;
};

// Does the automaton accept the length k? Boolean matrix squaring.
bool membership_exact(const UnaryNFA& a, unsigned long long k);

// Semilinear view of the accepted lengths: an exact explicit list below the
// threshold plus arithmetic progressions a + b*t (t >= 0), each sound for
// every length it generates.
struct ChrobakRep {
  unsigned long long threshold = 0;
  std::vector<unsigned long long> lengths;  // sorted; not covered by a progression
  std::vector<std::pair<unsigned long long, unsigned long long>> progressions;

  bool membership(unsigned long long k) const;
};
ChrobakRep chrobak(const UnaryNFA& a);

// Is some accepted length k with 0 < k < n?
bool interval_nonempty(const ChrobakRep& rep, unsigned long long n);

// Can two complete literal types sit exactly n >= 1 instants apart while
// every literal of gap holds at each instant strictly between them, under
// the global assertion summarised by the closure?
bool gap_realizable(const std::vector<SnfLit>& left,
                    const std::vector<SnfLit>& right,
                    const std::vector<SnfLit>& gap, unsigned long long n,
                    const ClauseClosure& star);

// Finite description backing a krom Sat verdict: complete literal types over
// the normalised variables at k+5 ordered instants, the gaps between them,
// and the literals pinned inside each gap. Instant origin sits at time 0;
// the word repeats [first, past_loop) to the left and (future_loop, last]
// to the right.
struct KromCertificate {
  std::vector<std::string> vars;
  std::vector<std::vector<bool>> types;       // one row per instant, over vars
  std::vector<unsigned long long> distances;  // gaps between adjacent instants
  int origin = 0;
  int past_loop = 0;
  int future_loop = 0;
  std::vector<std::vector<SnfLit>> gap_literals;  // pinned per gap

  std::string to_json() const;
};

struct ClausalResult {
  Outcome outcome = Outcome::Unsat;
  std::optional<UPWord> witness;
  std::optional<KromCertificate> certificate;
  std::string note;
};

// Conjunctions of binary clauses over literal towers of next and box
// operators, each clause optionally under a global box pair. Throws
// std::invalid_argument when the input does not fit that shape.
ClausalResult decide_krom(const F& f, const EngineLimits& lim = default_limits());

// Conjunctions of horn clauses over variables, boxed variables, and
// box-pair (every-instant) variables, each optionally under a global box
// pair, plus next-prefixed variable facts. Throws std::invalid_argument
// when the input does not fit that shape.
ClausalResult decide_horn(const F& f, const EngineLimits& lim = default_limits());

}  // namespace tdlite::ptl
