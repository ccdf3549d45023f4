// Bounded-domain reference model search for knowledge bases: exhaustive over
// interpretations whose temporal dimension is a free window with constant
// tail rows on both sides. A returned model is exact; absence only means no
// model within the bounds.
#pragma once

#include <optional>
#include <vector>

#include "tdlite/dl/ast.hpp"

namespace tdlite::dl {

struct KbBounds {
  int domain = 2;
  int window = 2;  // free instants added on each side of the required span
  int periods = 1; // tail loop length; only 1 is supported
  unsigned long long max_conflicts = 200000;
};

// Finite certificate of satisfiability: assignments on the window instants
// plus one constant row per side that repeats outward forever. Objects are
// interpreted by distinct domain elements, object i as element i.
struct KbInterpretation {
  int domain = 0;
  std::vector<std::string> objects;
  std::vector<std::string> concepts;
  std::vector<std::string> roles;
  long from = 0, to = -1;
  // [window instant][concept][element]
  std::vector<std::vector<std::vector<bool>>> cwin;
  std::vector<std::vector<bool>> cleft, cright;
  // [window instant][role][e * domain + f]
  std::vector<std::vector<std::vector<bool>>> rwin;
  std::vector<std::vector<bool>> rleft, rright;
};

std::optional<KbInterpretation> enumerate_kb(const KnowledgeBase& kb,
                                             const KbBounds& b = {});

}  // namespace tdlite::dl
