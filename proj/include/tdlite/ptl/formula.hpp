// Propositional temporal logic over (Z,<) with strict 'until'/'since'.
#pragma once

#include <memory>
#include <string>
#include <vector>

namespace tdlite::ptl {

enum class Op {
  False,
  Var,
  Not,
  And,
  Or,
  NextF,  // X+
  NextP,  // X-
  Until,  // strict: (a U b)(n) iff exists m>n with b(m) and a on (n,m)
  Since,  // strict past mirror
  BoxF,   // G+: all m>n
  BoxP,   // G-: all m<n
  DiaF,   // F+: some m>n
  DiaP,   // F-: some m<n
};

struct Formula;
using F = std::shared_ptr<const Formula>;

struct Formula {
  Op op;
  std::string name;  // Var only
  F a, b;            // children (b used by And/Or/Until/Since)
};

F f_false();
F f_true();
F var(std::string name);
F f_not(F a);
F f_and(F a, F b);
F f_or(F a, F b);
F implies(F a, F b);
F iff(F a, F b);
F next_f(F a);
F next_p(F a);
F until(F a, F b);
F since(F a, F b);
F box_f(F a);
F box_p(F a);
F dia_f(F a);
F dia_p(F a);
// G*: holds at every instant of Z (equals G+G- applied from any anchor).
F always(F a);
// n-fold X+ (n >= 0) or X- (n < 0).
F next_n(F a, long n);

F conj(const std::vector<F>& fs);  // empty -> true
F disj(const std::vector<F>& fs);  // empty -> false

bool equal(const F& x, const F& y);
std::string to_string(const F& f);

// Distinct subformulas in bottom-up order (children before parents).
std::vector<F> closure(const F& f);
// Number of temporal nodes in the closure.
int temporal_count(const std::vector<F>& cl);
// Variable names occurring in f, sorted.
std::vector<std::string> variables(const F& f);

bool is_temporal(Op op);

}  // namespace tdlite::ptl
