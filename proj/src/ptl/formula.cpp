#include "tdlite/ptl/formula.hpp"

#include <map>
#include <set>
#include <stdexcept>

namespace tdlite::ptl {

static F mk(Op op, std::string name, F a, F b) {
  auto f = std::make_shared<Formula>();
  f->op = op;
  f->name = std::move(name);
  f->a = std::move(a);
  f->b = std::move(b);
  return f;
}

F f_false() {
  static F cached = mk(Op::False, "", nullptr, nullptr);
  return cached;
}
F f_true() {
  static F cached = mk(Op::Not, "", f_false(), nullptr);
  return cached;
}
F var(std::string name) { return mk(Op::Var, std::move(name), nullptr, nullptr); }
F f_not(F a) { return mk(Op::Not, "", std::move(a), nullptr); }
F f_and(F a, F b) { return mk(Op::And, "", std::move(a), std::move(b)); }
F f_or(F a, F b) { return mk(Op::Or, "", std::move(a), std::move(b)); }
F implies(F a, F b) { return f_or(f_not(std::move(a)), std::move(b)); }
F iff(F a, F b) { return f_and(implies(a, b), implies(b, a)); }
F next_f(F a) { return mk(Op::NextF, "", std::move(a), nullptr); }
F next_p(F a) { return mk(Op::NextP, "", std::move(a), nullptr); }
F until(F a, F b) { return mk(Op::Until, "", std::move(a), std::move(b)); }
F since(F a, F b) { return mk(Op::Since, "", std::move(a), std::move(b)); }
F box_f(F a) { return mk(Op::BoxF, "", std::move(a), nullptr); }
F box_p(F a) { return mk(Op::BoxP, "", std::move(a), nullptr); }
F dia_f(F a) { return mk(Op::DiaF, "", std::move(a), nullptr); }
F dia_p(F a) { return mk(Op::DiaP, "", std::move(a), nullptr); }

F always(F a) {
  // G+ G- a quantifies over every instant: for all k>n, all m<k.
  return box_f(box_p(std::move(a)));
}

F next_n(F a, long n) {
  while (n > 0) { a = next_f(std::move(a)); --n; }
  while (n < 0) { a = next_p(std::move(a)); ++n; }
  return a;
}

F conj(const std::vector<F>& fs) {
  if (fs.empty()) return f_true();
  F acc = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) acc = f_and(acc, fs[i]);
  return acc;
}

F disj(const std::vector<F>& fs) {
  if (fs.empty()) return f_false();
  F acc = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) acc = f_or(acc, fs[i]);
  return acc;
}

bool is_temporal(Op op) {
  switch (op) {
    case Op::NextF: case Op::NextP: case Op::Until: case Op::Since:
    case Op::BoxF: case Op::BoxP: case Op::DiaF: case Op::DiaP:
      return true;
    default:
      return false;
  }
}

std::string to_string(const F& f) {
  switch (f->op) {
    case Op::False: return "false";
    case Op::Var: return f->name;
    case Op::Not: return "!" + to_string(f->a);
    case Op::And: return "(" + to_string(f->a) + " & " + to_string(f->b) + ")";
    case Op::Or: return "(" + to_string(f->a) + " | " + to_string(f->b) + ")";
    case Op::NextF: return "X+" + to_string(f->a);
    case Op::NextP: return "X-" + to_string(f->a);
    case Op::Until: return "(" + to_string(f->a) + " U " + to_string(f->b) + ")";
    case Op::Since: return "(" + to_string(f->a) + " S " + to_string(f->b) + ")";
    case Op::BoxF: return "G+" + to_string(f->a);
    case Op::BoxP: return "G-" + to_string(f->a);
    case Op::DiaF: return "F+" + to_string(f->a);
    case Op::DiaP: return "F-" + to_string(f->a);
  }
  throw std::logic_error("bad op");
}

bool equal(const F& x, const F& y) {
  if (x.get() == y.get()) return true;
  if (x->op != y->op || x->name != y->name) return false;
  if ((x->a == nullptr) != (y->a == nullptr)) return false;
  if ((x->b == nullptr) != (y->b == nullptr)) return false;
  if (x->a && !equal(x->a, y->a)) return false;
  if (x->b && !equal(x->b, y->b)) return false;
  return true;
}

static void closure_rec(const F& f, std::map<std::string, size_t>& seen,
                        std::vector<F>& out) {
  if (f->a) closure_rec(f->a, seen, out);
  if (f->b) closure_rec(f->b, seen, out);
  std::string key = to_string(f);
  if (seen.emplace(key, out.size()).second) out.push_back(f);
}

std::vector<F> closure(const F& f) {
  std::map<std::string, size_t> seen;
  std::vector<F> out;
  closure_rec(f, seen, out);
  return out;
}

int temporal_count(const std::vector<F>& cl) {
  int n = 0;
  for (auto& f : cl)
    if (is_temporal(f->op)) ++n;
  return n;
}

std::vector<std::string> variables(const F& f) {
  std::set<std::string> s;
  for (auto& g : closure(f))
    if (g->op == Op::Var) s.insert(g->name);
  return {s.begin(), s.end()};
}

}  // namespace tdlite::ptl
