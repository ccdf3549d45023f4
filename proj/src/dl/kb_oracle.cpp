#include "tdlite/dl/kb_oracle.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "tdlite/ptl/sat.hpp"

namespace tdlite::dl {

namespace {

int pos(int v) { return 2 * v; }
int neg(int v) { return 2 * v + 1; }

// The temporal dimension of a candidate model: a deep-left column standing
// for every instant left of the padding, explicit columns for the padded
// window (padding rows repeat the tail row), and a deep-right column. The
// padding is wide enough that every subconcept value has stabilised at the
// outermost explicit columns, so the deep columns are exact for all the
// remaining instants and checking inclusions on every column checks them on
// all of Z.
struct Enc {
  ptl::SatSolver sat;
  const KnowledgeBase& kb;
  int d;
  long lo, hi;
  int W, K, S, CT;
  std::vector<std::string> cnames, rnames;
  std::map<std::string, int> cidx, ridx;
  std::vector<std::vector<int>> cvar;   // [concept][src * d + e]
  std::vector<std::vector<int>> rflex;  // [role][src * d * d + e * d + f]
  std::vector<std::vector<int>> rrig;   // [role][e * d + f]
  std::vector<std::vector<int>> rdia, rbox;
  std::map<std::string, int> defid;
  std::vector<std::vector<int>> defs;  // [id][col * d + e], -1 unbuilt
  std::vector<C> defc;
  int truev;

  explicit Enc(const KnowledgeBase& k) : kb(k) {}

  int src_of(int col) const {
    if (col <= K) return 0;
    if (col <= K + W) return col - K;
    return W + 1;
  }

  void clause(std::vector<int> lits) { sat.add_clause(std::move(lits)); }

  int fresh() { return sat.new_var(); }

  bool rigid_role(int ri) const { return kb.rigid(rnames[ri]); }

  int rbase(int ri, int src, int e, int f) {
    return rigid_role(ri) ? rrig[ri][e * d + f]
                          : rflex[ri][(src * d + e) * d + f];
  }

  int rval(const Role& r, int col, int e, int f) {
    if (r.inverted) std::swap(e, f);
    int ri = ridx.at(r.base);
    if (r.mark == RoleMark::plain || rigid_role(ri))
      return rbase(ri, src_of(col), e, f);
    auto& cache = r.mark == RoleMark::sometime ? rdia[ri] : rbox[ri];
    int& v = cache[e * d + f];
    if (v >= 0) return v;
    v = fresh();
    std::vector<int> big{r.mark == RoleMark::sometime ? neg(v) : pos(v)};
    for (int s = 0; s < S; ++s) {
      int u = rbase(ri, s, e, f);
      if (r.mark == RoleMark::sometime) {
        big.push_back(pos(u));
        clause({pos(v), neg(u)});
      } else {
        big.push_back(neg(u));
        clause({neg(v), pos(u)});
      }
    }
    clause(std::move(big));
    return v;
  }

  // x <-> at least q of the given literals, via a sequential counter.
  int count_at_least(const std::vector<int>& lits, int q) {
    if (q <= 0) return truev;
    if (q > (int)lits.size()) {
      int v = fresh();
      clause({neg(v)});
      return v;
    }
    // s[k] = at least k among the first j literals, rebuilt per step.
    std::vector<int> prev(q + 1, -1);
    for (int j = 1; j <= (int)lits.size(); ++j) {
      std::vector<int> cur(q + 1, -1);
      int r = lits[j - 1];
      for (int k = 1; k <= std::min(j, q); ++k) {
        int v = fresh();
        cur[k] = v;
        int skm1 = prev[k];          // >= k among first j-1 (-1: false)
        int skk = k == 1 ? truev : prev[k - 1];  // >= k-1 among first j-1
        if (skm1 >= 0) clause({pos(v), neg(skm1)});
        if (skk >= 0) clause({pos(v), neg(r), neg(skk)});
        std::vector<int> c1{neg(v), pos(r)};
        std::vector<int> c2{neg(v)};
        if (skm1 >= 0) {
          c1.push_back(pos(skm1));
          c2.push_back(pos(skm1));
        }
        if (skk >= 0) c2.push_back(pos(skk));
        clause(std::move(c1));
        clause(std::move(c2));
      }
      prev = cur;
    }
    return prev[q];
  }

  int id_of(const C& c) {
    std::string key = to_string(c);
    auto it = defid.find(key);
    if (it != defid.end()) return it->second;
    int id = (int)defs.size();
    defid.emplace(std::move(key), id);
    defs.emplace_back((size_t)CT * d, -1);
    defc.push_back(c);
    return id;
  }

  // Recursion can grow defs, so the memo is re-indexed, never held by
  // reference across child calls.
  int get(const C& c, int col, int e) {
    int id = id_of(c);
    size_t slot = (size_t)col * d + e;
    if (defs[id][slot] >= 0) return defs[id][slot];
    switch (c->kind) {
      case CK::Bot: {
        int v = fresh();
        clause({neg(v)});
        return defs[id][slot] = v;
      }
      case CK::Atomic:
        return defs[id][slot] = cvar[cidx.at(c->name)][src_of(col) * d + e];
      case CK::AtLeast: {
        std::vector<int> lits;
        for (int f = 0; f < d; ++f) lits.push_back(rval(c->role, col, e, f));
        return defs[id][slot] = count_at_least(lits, c->q);
      }
      case CK::Not: {
        int v = fresh();
        defs[id][slot] = v;
        int a = get(c->a, col, e);
        clause({pos(v), pos(a)});
        clause({neg(v), neg(a)});
        return v;
      }
      case CK::And: {
        int v = fresh();
        defs[id][slot] = v;
        int a = get(c->a, col, e), b = get(c->b, col, e);
        clause({neg(v), pos(a)});
        clause({neg(v), pos(b)});
        clause({pos(v), neg(a), neg(b)});
        return v;
      }
      case CK::Until:
      case CK::Since: {
        int v = fresh();
        defs[id][slot] = v;
        bool fut = c->kind == CK::Until;
        int deep = fut ? CT - 1 : 0;
        int far = fut ? 0 : CT - 1;
        if (col == deep) {
          // Constant rows forever onward: fulfilment is the row itself.
          int b = get(c->b, col, e);
          clause({neg(v), pos(b)});
          clause({pos(v), neg(b)});
          return v;
        }
        // One-step unfolding toward the looking side; the far deep column
        // unfolds through the outermost explicit column.
        int nb = col == far ? (fut ? 1 : CT - 2) : (fut ? col + 1 : col - 1);
        int a = get(c->a, nb, e), b = get(c->b, nb, e);
        int x = get(c, nb, e);
        clause({neg(v), pos(b), pos(a)});
        clause({neg(v), pos(b), pos(x)});
        clause({pos(v), neg(b)});
        clause({pos(v), neg(a), neg(x)});
        return v;
      }
      default:
        // Sugar is elaborated before encoding.
        return defs[id][slot] = truev;
    }
  }
};

int temporal_nodes(const C& c) {
  int n = (c->kind == CK::Until || c->kind == CK::Since) ? 1 : 0;
  if (c->a) n += temporal_nodes(c->a);
  if (c->b) n += temporal_nodes(c->b);
  return n;
}

}  // namespace

std::optional<KbInterpretation> enumerate_kb(const KnowledgeBase& kb,
                                             const KbBounds& b) {
  std::vector<std::string> obs = kb.objects();
  if ((int)obs.size() > b.domain || b.domain < 1 || b.periods != 1)
    return std::nullopt;

  Enc enc(kb);
  enc.d = b.domain;
  long tmin = 0, tmax = 0;
  for (auto& a : kb.abox) {
    tmin = std::min(tmin, a.timestamp);
    tmax = std::max(tmax, a.timestamp);
  }
  enc.lo = tmin - b.window;
  enc.hi = tmax + b.window;
  enc.W = (int)(enc.hi - enc.lo + 1);
  enc.S = enc.W + 2;

  std::vector<std::pair<C, C>> incl;
  int depth = 0;
  for (auto& i : kb.tbox) {
    incl.emplace_back(elaborate_sugar(i.lhs), elaborate_sugar(i.rhs));
    depth = std::max(depth, temporal_nodes(incl.back().first));
    depth = std::max(depth, temporal_nodes(incl.back().second));
  }
  enc.K = depth + 1;
  enc.CT = 2 * enc.K + enc.W + 2;

  enc.truev = enc.fresh();
  enc.clause({pos(enc.truev)});
  enc.cnames = kb.concept_names();
  enc.rnames = kb.role_names();
  for (size_t i = 0; i < enc.cnames.size(); ++i) enc.cidx[enc.cnames[i]] = (int)i;
  for (size_t i = 0; i < enc.rnames.size(); ++i) enc.ridx[enc.rnames[i]] = (int)i;
  int d = enc.d;
  for (size_t i = 0; i < enc.cnames.size(); ++i) {
    enc.cvar.emplace_back();
    for (int k = 0; k < enc.S * d; ++k) enc.cvar.back().push_back(enc.fresh());
  }
  for (size_t i = 0; i < enc.rnames.size(); ++i) {
    enc.rflex.emplace_back();
    enc.rrig.emplace_back();
    enc.rdia.emplace_back((size_t)d * d, -1);
    enc.rbox.emplace_back((size_t)d * d, -1);
    if (kb.rigid(enc.rnames[i])) {
      for (int k = 0; k < d * d; ++k) enc.rrig.back().push_back(enc.fresh());
    } else {
      for (int k = 0; k < enc.S * d * d; ++k)
        enc.rflex.back().push_back(enc.fresh());
    }
  }

  for (auto& [l, r] : incl)
    for (int col = 0; col < enc.CT; ++col)
      for (int e = 0; e < d; ++e)
        enc.clause({neg(enc.get(l, col, e)), pos(enc.get(r, col, e))});
  for (auto& ri : kb.rbox)
    for (int col = enc.K; col <= enc.K + enc.W + 1; ++col)
      for (int e = 0; e < d; ++e)
        for (int f = 0; f < d; ++f)
          enc.clause({neg(enc.rval(ri.lhs, col, e, f)),
                      pos(enc.rval(ri.rhs, col, e, f))});

  std::map<std::string, int> oidx;
  for (size_t i = 0; i < obs.size(); ++i) oidx[obs[i]] = (int)i;
  for (auto& a : kb.abox) {
    int col = (int)(a.timestamp - enc.lo) + enc.K + 1;
    int lit;
    if (a.is_role) {
      Role r{a.name, false, RoleMark::plain};
      lit = enc.rval(r, col, oidx.at(a.obj1), oidx.at(a.obj2));
    } else {
      lit = enc.get(atomic(a.name), col, oidx.at(a.obj1));
    }
    enc.clause({a.positive ? pos(lit) : neg(lit)});
  }

  if (enc.sat.solve(b.max_conflicts) != ptl::SatSolver::Status::Sat)
    return std::nullopt;

  KbInterpretation m;
  m.domain = d;
  m.objects = obs;
  m.concepts = enc.cnames;
  m.roles = enc.rnames;
  m.from = enc.lo;
  m.to = enc.hi;
  auto crow = [&](int src) {
    std::vector<std::vector<bool>> row;
    for (size_t c = 0; c < enc.cnames.size(); ++c) {
      row.emplace_back();
      for (int e = 0; e < d; ++e)
        row.back().push_back(enc.sat.value(enc.cvar[c][src * d + e]));
    }
    return row;
  };
  auto rrow = [&](int src) {
    std::vector<std::vector<bool>> row;
    for (size_t r = 0; r < enc.rnames.size(); ++r) {
      row.emplace_back();
      for (int k = 0; k < d * d; ++k)
        row.back().push_back(
            enc.sat.value(enc.rbase((int)r, src, k / d, k % d)));
    }
    return row;
  };
  m.cleft = crow(0);
  m.cright = crow(enc.W + 1);
  m.rleft = rrow(0);
  m.rright = rrow(enc.W + 1);
  for (int s = 1; s <= enc.W; ++s) {
    m.cwin.push_back(crow(s));
    m.rwin.push_back(rrow(s));
  }
  return m;
}

}  // namespace tdlite::dl
