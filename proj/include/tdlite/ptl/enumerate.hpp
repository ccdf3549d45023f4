// Bounded exhaustive model search over ultimately periodic words.
#pragma once

#include <optional>

#include "tdlite/ptl/eval.hpp"

namespace tdlite::ptl {

struct EnumBounds {
  int window = 3;        // window instants (placed around 0)
  int left_period = 1;
  int right_period = 1;
  int vars = 2;          // cap on variables considered (first by name)
};

// Exhaustive search for a model of f with the given shape; nullopt means "no
// model within bounds", which is explicitly weaker than unsatisfiability.
std::optional<UPWord> enumerate_ptl(const F& f, const EnumBounds& b);

}  // namespace tdlite::ptl
