// Text format for knowledge bases:
//   roles { rigid g ; flexible p ; }
//   tbox  { C1 <= C2 ; ... }
//   rbox  { r1 <= r2 ; ... }
//   abox  { A(a) @ 0 ; not s(a,b) @ -1 ; ... }
// Concepts use prefix operators not, X+, X-, G+, G-, F+, F-, G*, F*, the
// restrictions ">= q R" and "=< q R", parenthesised binary connectives
// and/or/U/S, and roles "[box|dia] name [^-]". print_kb parenthesises every
// binary connective, so parse_kb(print_kb(kb)) reproduces kb exactly.
#pragma once

#include <string>

#include "tdlite/dl/ast.hpp"

namespace tdlite::dl {

// Throws std::runtime_error with line:column on malformed input.
KnowledgeBase parse_kb(const std::string& text);
C parse_concept(const std::string& text);

std::string print_kb(const KnowledgeBase& kb);

}  // namespace tdlite::dl
