// Complete satisfiability over (Z,<) by bi-infinite type-graph search.
#pragma once

#include <optional>
#include <string>

#include "tdlite/ptl/formula.hpp"
#include "tdlite/ptl/upword.hpp"

namespace tdlite::ptl {

enum class Outcome { Sat, Unsat, ResourceExceeded };

struct EngineLimits {
  int max_vars = 24;          // propositional variables in the closure
  size_t max_types = 200000;  // explored-type budget
  size_t max_initial = 50000; // candidate types containing the input
};

// Limits with TDLITE_MAX_CLOSURE (variable bound) applied if set.
EngineLimits default_limits();

struct EngineResult {
  Outcome outcome = Outcome::Unsat;
  std::optional<UPWord> witness;
  std::string note;
};

// Sat iff some type containing f sits on a bi-infinite step-consistent path
// whose two ends cycle through self-fulfilling strongly connected components.
EngineResult decide_generic(const F& f, const EngineLimits& lim = default_limits());

// Exact semantic check of f at instant 0 of w (shared with the oracle).
bool verify_witness(const F& f, const UPWord& w);

}  // namespace tdlite::ptl
