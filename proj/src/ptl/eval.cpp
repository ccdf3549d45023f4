#include "tdlite/ptl/eval.hpp"

#include <map>
#include <stdexcept>

namespace tdlite::ptl {

namespace {

// The word is unrolled into D copies of each loop around the window. The
// outermost copy on each side is wrapped cyclically, so the fixpoint solved
// there is the limit value on the infinite repetition. Values of any closure
// formula are phase-periodic once the distance from the window exceeds
// (nesting depth) * period, hence D = temporal_count + 2 copies are enough
// for the wrapped copy to sit in the periodic regime.
struct Unrolled {
  long L, W, R, D, T;
  long lo;  // instant represented by index 0

  size_t succ(size_t i) const { return i + 1 < (size_t)T ? i + 1 : (size_t)(T - R); }
  size_t pred(size_t i) const { return i > 0 ? i - 1 : (size_t)(L - 1); }

  size_t index_of(long n, long from, long to) const {
    long i = n - lo;
    if (i < 0) {
      // Map far-left instants into the wrapped outermost copy by phase.
      i = ((i % L) + L) % L;
    } else if (i >= T) {
      long over = n - (to + D * R);
      i = T - R + ((over - 1) % R + R) % R;  // phase inside the last copy
      (void)from;
    }
    return (size_t)i;
  }
};

}  // namespace

bool eval_up(const F& f, const UPWord& w, long n) {
  if (!w.valid()) throw std::invalid_argument("eval_up: invalid word");
  auto cl = closure(f);
  Unrolled u;
  u.L = (long)w.left.size();
  u.W = (long)w.window.size();
  u.R = (long)w.right.size();
  u.D = temporal_count(cl) + 2;
  u.T = u.D * u.L + u.W + u.D * u.R;
  u.lo = w.from - u.D * u.L;

  std::map<std::string, size_t> vix;
  for (size_t i = 0; i < w.vars.size(); ++i) vix[w.vars[i]] = i;

  // val[ci] holds the truth of closure formula ci at each unrolled index.
  std::vector<std::vector<char>> val(cl.size(), std::vector<char>(u.T, 0));
  std::map<std::string, size_t> cix;
  for (size_t ci = 0; ci < cl.size(); ++ci) cix[to_string(cl[ci])] = ci;
  auto sub = [&](const F& g) -> std::vector<char>& { return val[cix.at(to_string(g))]; };

  for (size_t ci = 0; ci < cl.size(); ++ci) {
    const F& g = cl[ci];
    auto& v = val[ci];
    switch (g->op) {
      case Op::False:
        break;
      case Op::Var: {
        auto it = vix.find(g->name);
        for (long i = 0; i < u.T; ++i)
          v[i] = it == vix.end() ? 0 : (char)w.at(u.lo + i)[it->second];
        break;
      }
      case Op::Not: {
        auto& a = sub(g->a);
        for (long i = 0; i < u.T; ++i) v[i] = !a[i];
        break;
      }
      case Op::And: {
        auto &a = sub(g->a), &b = sub(g->b);
        for (long i = 0; i < u.T; ++i) v[i] = a[i] && b[i];
        break;
      }
      case Op::Or: {
        auto &a = sub(g->a), &b = sub(g->b);
        for (long i = 0; i < u.T; ++i) v[i] = a[i] || b[i];
        break;
      }
      case Op::NextF: {
        auto& a = sub(g->a);
        for (long i = 0; i < u.T; ++i) v[i] = a[u.succ(i)];
        break;
      }
      case Op::NextP: {
        auto& a = sub(g->a);
        for (long i = 0; i < u.T; ++i) v[i] = a[u.pred(i)];
        break;
      }
      case Op::Until: case Op::DiaF: case Op::BoxF: {
        auto& a = sub(g->a);
        const std::vector<char>* b = g->b ? &sub(g->b) : nullptr;
        bool greatest = g->op == Op::BoxF;
        for (long i = 0; i < u.T; ++i) v[i] = greatest;
        bool changed = true;
        while (changed) {
          changed = false;
          for (long i = u.T - 1; i >= 0; --i) {
            size_t s = u.succ(i);
            char nv;
            if (g->op == Op::Until) nv = (*b)[s] || (a[s] && v[s]);
            else if (g->op == Op::DiaF) nv = a[s] || v[s];
            else nv = a[s] && v[s];
            if (nv != v[i]) { v[i] = nv; changed = true; }
          }
        }
        break;
      }
      case Op::Since: case Op::DiaP: case Op::BoxP: {
        auto& a = sub(g->a);
        const std::vector<char>* b = g->b ? &sub(g->b) : nullptr;
        bool greatest = g->op == Op::BoxP;
        for (long i = 0; i < u.T; ++i) v[i] = greatest;
        bool changed = true;
        while (changed) {
          changed = false;
          for (long i = 0; i < u.T; ++i) {
            size_t p = u.pred(i);
            char nv;
            if (g->op == Op::Since) nv = (*b)[p] || (a[p] && v[p]);
            else if (g->op == Op::DiaP) nv = a[p] || v[p];
            else nv = a[p] && v[p];
            if (nv != v[i]) { v[i] = nv; changed = true; }
          }
        }
        break;
      }
    }
  }
  return val[cix.at(to_string(f))][u.index_of(n, w.from, w.to)];
}

bool eval_bounded(const F& f, const UPWord& w, long n, long horizon) {
  switch (f->op) {
    case Op::False: return false;
    case Op::Var: return w.value(n, f->name);
    case Op::Not: return !eval_bounded(f->a, w, n, horizon);
    case Op::And:
      return eval_bounded(f->a, w, n, horizon) && eval_bounded(f->b, w, n, horizon);
    case Op::Or:
      return eval_bounded(f->a, w, n, horizon) || eval_bounded(f->b, w, n, horizon);
    case Op::NextF: return eval_bounded(f->a, w, n + 1, horizon);
    case Op::NextP: return eval_bounded(f->a, w, n - 1, horizon);
    case Op::Until:
      for (long m = n + 1; m <= n + horizon; ++m) {
        if (eval_bounded(f->b, w, m, horizon)) return true;
        if (!eval_bounded(f->a, w, m, horizon)) return false;
      }
      return false;
    case Op::Since:
      for (long m = n - 1; m >= n - horizon; --m) {
        if (eval_bounded(f->b, w, m, horizon)) return true;
        if (!eval_bounded(f->a, w, m, horizon)) return false;
      }
      return false;
    case Op::DiaF:
      for (long m = n + 1; m <= n + horizon; ++m)
        if (eval_bounded(f->a, w, m, horizon)) return true;
      return false;
    case Op::DiaP:
      for (long m = n - 1; m >= n - horizon; --m)
        if (eval_bounded(f->a, w, m, horizon)) return true;
      return false;
    case Op::BoxF:
      for (long m = n + 1; m <= n + horizon; ++m)
        if (!eval_bounded(f->a, w, m, horizon)) return false;
      return true;
    case Op::BoxP:
      for (long m = n - 1; m >= n - horizon; --m)
        if (!eval_bounded(f->a, w, m, horizon)) return false;
      return true;
  }
  throw std::logic_error("bad op");
}

}  // namespace tdlite::ptl
