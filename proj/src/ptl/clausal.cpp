#include "tdlite/ptl/clausal.hpp"

#include <algorithm>
#include <array>
#include <climits>
#include <map>
#include <numeric>
#include <queue>
#include <stdexcept>

#include <json.hpp>

#include "tdlite/ptl/sat.hpp"

namespace tdlite::ptl {

namespace {

// ---------------------------------------------------------------------------
// Bit rows and boolean matrices.

using Bits = std::vector<uint64_t>;
using Mat = std::vector<Bits>;

Bits make_bits(int n) { return Bits((size_t)(n + 63) / 64, 0); }

bool get_bit(const Bits& b, int i) { return (b[i >> 6] >> (i & 63)) & 1; }

void set_bit(Bits& b, int i) { b[(size_t)i >> 6] |= 1ull << (i & 63); }

void or_into(Bits& a, const Bits& b) {
  for (size_t w = 0; w < a.size(); ++w) a[w] |= b[w];
}

bool intersects(const Bits& a, const Bits& b) {
  for (size_t w = 0; w < a.size(); ++w)
    if (a[w] & b[w]) return true;
  return false;
}

template <typename Fn>
void for_each_bit(const Bits& b, Fn fn) {
  for (size_t w = 0; w < b.size(); ++w) {
    uint64_t x = b[w];
    while (x) {
      fn((int)(w * 64 + (size_t)__builtin_ctzll(x)));
      x &= x - 1;
    }
  }
}

Mat make_mat(int n) { return Mat((size_t)n, make_bits(n)); }

Mat mat_mul(const Mat& a, const Mat& b) {
  Mat c = make_mat((int)a.size());
  for (size_t i = 0; i < a.size(); ++i)
    for_each_bit(a[i], [&](int j) { or_into(c[i], b[j]); });
  return c;
}

Mat mat_or(const Mat& a, const Mat& b) {
  Mat c = a;
  for (size_t i = 0; i < a.size(); ++i) or_into(c[i], b[i]);
  return c;
}

// Row vector times matrix power; exponent may be astronomically large.
Bits vec_mat_pow(Bits v, Mat m, unsigned long long k) {
  while (k) {
    if (k & 1) {
      Bits out = make_bits((int)(m.size()));
      for_each_bit(v, [&](int i) { or_into(out, m[i]); });
      v = out;
    }
    k >>= 1;
    if (k) m = mat_mul(m, m);
  }
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// Clause closure.

bool ClauseClosure::has(int a, int b) const { return get_bit(bits[a], b); }

int ClauseClosure::id(const TemporalLiteral& l) const {
  for (size_t v = 0; v < vars.size(); ++v)
    if (vars[v] == l.var)
      return 2 * (int)v + (l.pos ? 0 : 1) + (l.next ? 2 * (int)vars.size() : 0);
  throw std::invalid_argument("unknown literal variable: " + l.var);
}

TemporalLiteral ClauseClosure::literal(int id) const {
  int two = 2 * (int)vars.size();
  TemporalLiteral l;
  l.next = id >= two ? 1 : 0;
  id %= two;
  l.var = vars[id / 2];
  l.pos = (id & 1) == 0;
  return l;
}

std::vector<std::pair<TemporalLiteral, TemporalLiteral>> ClauseClosure::clauses()
    const {
  std::vector<std::pair<TemporalLiteral, TemporalLiteral>> out;
  int n = 4 * (int)vars.size();
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b)
      if (has(a, b)) out.push_back({literal(a), literal(b)});
  return out;
}

ClauseClosure compute_closure(const BinaryClauses& phi) {
  ClauseClosure cs;
  cs.vars = phi.vars;
  int n = 4 * (int)phi.vars.size();
  cs.bits.assign((size_t)std::max(n, 1), make_bits(std::max(n, 1)));
  if (n == 0) return cs;

  std::queue<std::pair<int, int>> work;
  auto add = [&](int a, int b) {
    if (get_bit(cs.bits[a], b)) return;
    set_bit(cs.bits[a], b);
    set_bit(cs.bits[b], a);
    work.push({a, b});
  };
  for (auto& [x, y] : phi.clauses) add(cs.id(x), cs.id(y));

  int two = n / 2;
  while (!work.empty()) {
    auto [a, b] = work.front();
    work.pop();
    // Resolution against everything paired with the complement of a slot.
    Bits ra = cs.bits[a ^ 1], rb = cs.bits[b ^ 1];
    for_each_bit(ra, [&](int x) { add(b, x); });
    for_each_bit(rb, [&](int x) { add(a, x); });
    // A globally asserted clause also holds one instant later and earlier.
    if (a < two && b < two)
      add(a + two, b + two);
    else if (a >= two && b >= two)
      add(a - two, b - two);
    // A unit subsumes every clause containing it.
    if (a == b)
      for (int d = 0; d < n; ++d) add(d, a);
  }
  return cs;
}

// ---------------------------------------------------------------------------
// Unary automata.

namespace {

Mat nfa_matrix(const UnaryNFA& a) {
  Mat m = make_mat(std::max(a.states, 1));
  for (auto& [u, v] : a.edges) set_bit(m[u], v);
  return m;
}

}  // namespace

bool membership_exact(const UnaryNFA& a, unsigned long long k) {
  if (a.states == 0) return false;
  Bits cur = make_bits(a.states);
  for (int s : a.initial) set_bit(cur, s);
  cur = vec_mat_pow(cur, nfa_matrix(a), k);
  Bits acc = make_bits(a.states);
  for (int s : a.accepting) set_bit(acc, s);
  return intersects(cur, acc);
}

bool ChrobakRep::membership(unsigned long long k) const {
  if (k < threshold && std::binary_search(lengths.begin(), lengths.end(), k))
    return true;
  for (auto& [a, b] : progressions)
    if (k >= a && (k - a) % b == 0) return true;
  return false;
}

ChrobakRep chrobak(const UnaryNFA& a) {
  int n = a.states;
  ChrobakRep rep;
  rep.threshold = 4ull * n * n + 4ull * n;
  if (n == 0 || a.initial.empty() || a.accepting.empty()) return rep;

  std::vector<std::vector<int>> adj(n), radj(n);
  for (auto& [u, v] : a.edges) {
    adj[u].push_back(v);
    radj[v].push_back(u);
  }

  // Exact accepted lengths below the threshold by reachable-set iteration.
  Bits acc = make_bits(n);
  for (int s : a.accepting) set_bit(acc, s);
  Bits cur = make_bits(n);
  for (int s : a.initial) set_bit(cur, s);
  std::vector<bool> is_member((size_t)rep.threshold, false);
  std::vector<unsigned long long> expl;
  for (unsigned long long k = 0; k < rep.threshold; ++k) {
    if (intersects(cur, acc)) {
      expl.push_back(k);
      is_member[(size_t)k] = true;
    }
    Bits next = make_bits(n);
    for_each_bit(cur, [&](int u) {
      for (int v : adj[u]) set_bit(next, v);
    });
    cur = next;
  }

  // Strongly connected components (Kosaraju).
  std::vector<int> order, comp(n, -1);
  {
    std::vector<int> state(n, 0), stk;
    for (int r = 0; r < n; ++r) {
      if (state[r]) continue;
      stk.push_back(r);
      while (!stk.empty()) {
        int u = stk.back();
        if (state[u] == 0) {
          state[u] = 1;
          for (int v : adj[u])
            if (!state[v]) stk.push_back(v);
        } else {
          stk.pop_back();
          if (state[u] == 1) {
            state[u] = 2;
            order.push_back(u);
          }
        }
      }
    }
    int nc = 0;
    for (int i = n - 1; i >= 0; --i) {
      int r = order[i];
      if (comp[r] != -1) continue;
      stk.push_back(r);
      comp[r] = nc;
      while (!stk.empty()) {
        int u = stk.back();
        stk.pop_back();
        for (int v : radj[u])
          if (comp[v] == -1) {
            comp[v] = nc;
            stk.push_back(v);
          }
      }
      ++nc;
    }
  }
  int ncomp = 1 + *std::max_element(comp.begin(), comp.end());

  const unsigned long long INF = ULLONG_MAX;
  std::map<std::pair<unsigned long long, unsigned long long>, unsigned long long>
      best;  // (period, start mod period) -> smallest start
  for (int c = 0; c < ncomp; ++c) {
    std::vector<int> members;
    for (int u = 0; u < n; ++u)
      if (comp[u] == c) members.push_back(u);
    std::vector<std::pair<int, int>> internal;
    for (int u : members)
      for (int v : adj[u])
        if (comp[v] == c) internal.push_back({u, v});
    if (internal.empty()) continue;  // acyclic component, nothing to pump

    // Component period: gcd of level defects along internal edges.
    std::vector<long long> lvl(n, -1);
    std::queue<int> bfs;
    lvl[members[0]] = 0;
    bfs.push(members[0]);
    while (!bfs.empty()) {
      int u = bfs.front();
      bfs.pop();
      for (int v : adj[u])
        if (comp[v] == c && lvl[v] < 0) {
          lvl[v] = lvl[u] + 1;
          bfs.push(v);
        }
    }
    unsigned long long g = 0;
    for (auto& [u, v] : internal) {
      long long d = lvl[u] + 1 - lvl[v];
      g = std::gcd(g, (unsigned long long)(d < 0 ? -d : d));
    }
    if (g == 0) continue;

    // Shortest initial->u and u->accepting walks per length residue mod g,
    // over the whole automaton (breadth-first on the node x residue product).
    auto product_bfs = [&](const std::vector<int>& starts,
                           const std::vector<std::vector<int>>& edges) {
      std::vector<std::vector<unsigned long long>> dist(
          (size_t)n, std::vector<unsigned long long>((size_t)g, INF));
      std::queue<std::pair<int, int>> q;
      for (int s : starts) {
        if (dist[s][0] != INF) continue;
        dist[s][0] = 0;
        q.push({s, 0});
      }
      while (!q.empty()) {
        auto [u, r] = q.front();
        q.pop();
        int nr = (int)((r + 1) % g);
        for (int v : edges[u])
          if (dist[v][nr] == INF) {
            dist[v][nr] = dist[u][r] + 1;
            q.push({v, nr});
          }
      }
      return dist;
    };
    auto din = product_bfs(a.initial, adj);
    auto dout = product_bfs(a.accepting, radj);

    // Shortest accepted walk through this component per total residue; every
    // longer length in the same residue class stays accepted because closed
    // walks through the split node realise all large multiples of g.
    for (unsigned long long rho = 0; rho < g; ++rho) {
      unsigned long long bestlen = INF;
      for (int u : members)
        for (unsigned long long r1 = 0; r1 < g; ++r1) {
          if (din[u][r1] == INF) continue;
          unsigned long long r2 = (rho + g - r1 % g) % g;
          if (dout[u][r2] == INF) continue;
          bestlen = std::min(bestlen, din[u][r1] + dout[u][r2]);
        }
      if (bestlen == INF) continue;
      unsigned long long start =
          bestlen + g * ((2ull * n * n + g - 1) / g);  // pumping slack
      auto key = std::make_pair(g, start % g);
      auto it = best.find(key);
      if (it == best.end() || start < it->second) best[key] = start;
    }
  }

  for (auto& [key, start] : best) {
    unsigned long long b = key.first, s = start;
    // Pull the start down through explicitly verified members.
    while (s >= b && s - b < rep.threshold && is_member[(size_t)(s - b)]) s -= b;
    rep.progressions.push_back({s, b});
  }
  std::sort(rep.progressions.begin(), rep.progressions.end());
  rep.progressions.erase(
      std::unique(rep.progressions.begin(), rep.progressions.end()),
      rep.progressions.end());
  // Drop progressions subsumed by a coarser one.
  std::vector<std::pair<unsigned long long, unsigned long long>> kept;
  for (size_t i = 0; i < rep.progressions.size(); ++i) {
    auto [ai, bi] = rep.progressions[i];
    bool covered = false;
    for (size_t j = 0; j < rep.progressions.size() && !covered; ++j) {
      if (i == j) continue;
      auto [aj, bj] = rep.progressions[j];
      if (bi % bj == 0 && ai >= aj && (ai - aj) % bj == 0 &&
          (bj < bi || aj < ai || j < i))
        covered = true;
    }
    if (!covered) kept.push_back({ai, bi});
  }
  rep.progressions = kept;
  for (unsigned long long k : expl) {
    bool covered = false;
    for (auto& [s, b] : rep.progressions)
      if (k >= s && (k - s) % b == 0) covered = true;
    if (!covered) rep.lengths.push_back(k);
  }
  return rep;
}

bool interval_nonempty(const ChrobakRep& rep, unsigned long long n) {
  for (unsigned long long e : rep.lengths)
    if (e > 0 && e < n) return true;
  for (auto& [a, b] : rep.progressions) {
    unsigned long long k = a ? a : b;  // first positive member
    if (k < n) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Gap realisability.

namespace {

// One-step chain matrix: edge x -> y iff the closure has the clause
// {not x, next y}, i.e. the global assertion forces y one instant after x.
Mat chain_matrix(const ClauseClosure& star) {
  int two = 2 * (int)star.vars.size();
  Mat m = make_mat(std::max(two, 1));
  for (int x = 0; x < two; ++x)
    for (int y = 0; y < two; ++y)
      if (star.has(x ^ 1, y + two)) set_bit(m[x], y);
  return m;
}

Bits lits_to_bits(const std::vector<SnfLit>& ls, const ClauseClosure& star) {
  Bits b = make_bits(std::max(2 * (int)star.vars.size(), 1));
  for (auto& l : ls) set_bit(b, star.id({l.var, l.pos, 0}));
  return b;
}

Bits negate_lits(const Bits& b, int two) {
  Bits out = make_bits(std::max(two, 1));
  for_each_bit(b, [&](int l) { set_bit(out, l ^ 1); });
  return out;
}

// Same-time clauses violated inside the literal set?
bool same_time_closed(const Bits& set, const ClauseClosure& star, int two) {
  Bits neg = negate_lits(set, two);
  bool bad = false;
  for_each_bit(neg, [&](int a) {
    for (int w = 0; w < (two + 63) / 64; ++w)
      if (star.bits[a][(size_t)w] & neg[(size_t)w]) bad = true;
  });
  return !bad;
}

UnaryNFA chain_nfa(const Mat& m, const Bits& init, const Bits& acc) {
  UnaryNFA a;
  a.states = (int)m.size();
  for_each_bit(init, [&](int s) { a.initial.push_back(s); });
  for_each_bit(acc, [&](int s) { a.accepting.push_back(s); });
  for (size_t u = 0; u < m.size(); ++u)
    for_each_bit(m[u], [&](int v) { a.edges.push_back({(int)u, v}); });
  return a;
}

}  // namespace

bool gap_realizable(const std::vector<SnfLit>& left,
                    const std::vector<SnfLit>& right,
                    const std::vector<SnfLit>& gap, unsigned long long n,
                    const ClauseClosure& star) {
  if (n == 0) throw std::invalid_argument("gap width must be positive");
  int two = 2 * (int)star.vars.size();
  Bits psiL = lits_to_bits(left, star), psiR = lits_to_bits(right, star);
  Bits theta = lits_to_bits(gap, star);
  if (!same_time_closed(psiL, star, two)) return false;
  if (!same_time_closed(psiR, star, two)) return false;

  Mat m = chain_matrix(star);
  // Chains of exactly n steps from the left type may not contradict the right
  // type (the mirrored backward condition coincides by contraposition).
  Bits reach = vec_mat_pow(psiL, m, n);
  if (intersects(reach, negate_lits(psiR, two))) return false;

  if (!gap.empty() && n >= 2) {
    // Gap literals may not be refuted from either endpoint...
    if (interval_nonempty(chrobak(chain_nfa(m, psiL, negate_lits(theta, two))),
                          n))
      return false;
    if (interval_nonempty(chrobak(chain_nfa(m, theta, negate_lits(psiR, two))),
                          n))
      return false;
    // ...nor contradict each other at or between interior instants. The
    // zero-length case covers same-time clauses and complementary literals.
    Bits ntheta = negate_lits(theta, two);
    if (intersects(theta, ntheta)) return false;
    bool bad = false;
    for_each_bit(ntheta, [&](int a) {
      for (int w = 0; w < (two + 63) / 64; ++w)
        if (star.bits[a][(size_t)w] & ntheta[(size_t)w]) bad = true;
    });
    if (bad) return false;
    if (n >= 3 &&
        interval_nonempty(chrobak(chain_nfa(m, theta, ntheta)), n - 1))
      return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Krom normalisation.

namespace {

struct KLit {
  int kind;  // 0 literal, 1 true, 2 false
  int lit;   // 2*v or 2*v+1
  int next;  // 0 or 1
};

struct KromBox {
  int var;      // surrogate variable index
  bool future;  // future or past box
  int lit;      // boxed literal, current instant
};

struct KromNorm {
  std::vector<std::string> vars;
  std::map<std::string, int> index;
  size_t orig = 0;
  std::vector<std::vector<int>> init;  // clauses over current-instant literals
  std::vector<std::array<std::pair<int, int>, 2>> global;  // (lit, next) pairs
  std::vector<KromBox> boxes;
  bool false_init = false;

  std::map<int, int> fwd_name;   // y <-> X(L), keyed by L
  std::map<int, int> prev_name;  // X(y) <-> L, keyed by L
  std::map<std::pair<int, bool>, int> box_name;
  int fresh = 0;

  int add_var(const std::string& name) {
    index[name] = (int)vars.size();
    vars.push_back(name);
    return (int)vars.size() - 1;
  }
  int fresh_var() {
    std::string name;
    do name = "_k" + std::to_string(fresh++);
    while (index.count(name));
    return add_var(name);
  }
  int fwd_var(int l) {
    auto it = fwd_name.find(l);
    if (it != fwd_name.end()) return it->second;
    int y = fresh_var();
    global.push_back({{{2 * y + 1, 0}, {l, 1}}});
    global.push_back({{{2 * y, 0}, {l ^ 1, 1}}});
    return fwd_name[l] = y;
  }
  int prev_var(int l) {
    auto it = prev_name.find(l);
    if (it != prev_name.end()) return it->second;
    int y = fresh_var();
    global.push_back({{{2 * y + 1, 1}, {l, 0}}});
    global.push_back({{{2 * y, 1}, {l ^ 1, 0}}});
    return prev_name[l] = y;
  }
  int box_var(int l, bool future) {
    auto it = box_name.find({l, future});
    if (it != box_name.end()) return it->second;
    int s = fresh_var();
    boxes.push_back({s, future, l});
    return box_name[{l, future}] = s;
  }

  KLit reduce(const F& f) {
    switch (f->op) {
      case Op::False:
        return {2, 0, 0};
      case Op::Var: {
        auto it = index.find(f->name);
        int v = it == index.end() ? add_var(f->name) : it->second;
        return {0, 2 * v, 0};
      }
      case Op::Not: {
        KLit r = reduce(f->a);
        if (r.kind) {
          r.kind = 3 - r.kind;
          return r;
        }
        r.lit ^= 1;
        return r;
      }
      case Op::NextF: {
        KLit r = reduce(f->a);
        if (r.kind) return r;
        if (r.next) return {0, 2 * fwd_var(r.lit), 1};
        return {0, r.lit, 1};
      }
      case Op::NextP: {
        KLit r = reduce(f->a);
        if (r.kind) return r;
        if (r.next) return {0, r.lit, 0};  // past next cancels future next
        return {0, 2 * prev_var(r.lit), 0};
      }
      case Op::BoxF:
      case Op::BoxP:
      case Op::DiaF:
      case Op::DiaP: {
        KLit r = reduce(f->a);
        if (r.kind) return r;  // box or diamond over a constant
        bool dia = f->op == Op::DiaF || f->op == Op::DiaP;
        bool future = f->op == Op::BoxF || f->op == Op::DiaF;
        int inner = dia ? r.lit ^ 1 : r.lit;  // diamond = negated box
        if (r.next) inner = 2 * fwd_var(inner);
        int s = box_var(inner, future);
        return {0, 2 * s ^ (dia ? 1 : 0), 0};
      }
      default:
        throw std::invalid_argument(
            "binary clause input: operator not allowed in a literal");
    }
  }

  static void collect(const F& f, std::vector<F>& lits) {
    if (f->op == Op::Or) {
      collect(f->a, lits);
      collect(f->b, lits);
      return;
    }
    if (f->op == Op::Not && f->a->op == Op::And) {
      collect(f_not(f->a->a), lits);
      collect(f_not(f->a->b), lits);
      return;
    }
    lits.push_back(f);
  }

  void clause(const F& f, bool is_global) {
    std::vector<F> parts;
    collect(f, parts);
    std::vector<std::pair<int, int>> out;
    for (auto& p : parts) {
      KLit l = reduce(p);
      if (l.kind == 1) return;  // clause already true
      if (l.kind == 2) continue;
      out.push_back({l.lit, l.next});
    }
    if (out.size() > 2)
      throw std::invalid_argument(
          "binary clause input: clause with more than two literals");
    if (out.empty()) {
      false_init = true;
      return;
    }
    if (is_global) {
      if (out.size() == 1) out.push_back(out[0]);
      global.push_back({{out[0], out[1]}});
    } else {
      std::vector<int> c;
      for (auto [l, nx] : out) c.push_back(nx ? 2 * fwd_var(l) : l);
      init.push_back(c);
    }
  }

  void conjunct(const F& f, int depth) {
    if (f->op == Op::And) {
      conjunct(f->a, depth);
      conjunct(f->b, depth);
      return;
    }
    if ((f->op == Op::BoxF && f->a->op == Op::BoxP) ||
        (f->op == Op::BoxP && f->a->op == Op::BoxF)) {
      conjunct(f->a->a, depth + 1);  // box pair asserts at every instant of Z
      return;
    }
    clause(f, depth > 0);
  }
};

KromNorm krom_normalize(const F& f) {
  KromNorm nm;
  for (auto& v : variables(f)) nm.add_var(v);
  nm.orig = nm.vars.size();
  nm.conjunct(f, 0);
  return nm;
}

}  // namespace

// ---------------------------------------------------------------------------
// Krom engine.

namespace {

struct DistClass {
  unsigned long long n;  // smallest width with this behaviour
  Mat r;   // exact n-step chains
  Mat u;   // chains of width 0 < k < n
  Mat ut;  // same-time (with identity) plus chains of width k <= n-2
};

std::vector<uint64_t> class_key(const DistClass& c) {
  std::vector<uint64_t> key;
  for (const Mat* m : {&c.r, &c.u, &c.ut})
    for (auto& row : *m) key.insert(key.end(), row.begin(), row.end());
  return key;
}

struct PinSpec {
  int lit;   // literal held at every interior instant of the gap
  int cond;  // solver literal activating the pin
};

}  // namespace

std::string KromCertificate::to_json() const {
  nlohmann::json j;
  j["vars"] = vars;
  nlohmann::json ts = nlohmann::json::array();
  for (auto& row : types) {
    nlohmann::json r = nlohmann::json::array();
    for (bool b : row) r.push_back(b);
    ts.push_back(r);
  }
  j["types"] = ts;
  j["distances"] = distances;
  j["origin"] = origin;
  j["past_loop"] = past_loop;
  j["future_loop"] = future_loop;
  nlohmann::json gaps = nlohmann::json::array();
  for (auto& gap : gap_literals) {
    nlohmann::json g = nlohmann::json::array();
    for (auto& l : gap) g.push_back((l.pos ? "" : "!") + l.var);
    gaps.push_back(g);
  }
  j["gap_literals"] = gaps;
  return j.dump(2);
}

ClausalResult decide_krom(const F& f, const EngineLimits& lim) {
  KromNorm nm = krom_normalize(f);
  ClausalResult res;
  if (nm.false_init) {
    res.note = "empty clause produced during normalisation";
    return res;
  }
  int V = (int)nm.vars.size();
  if (V == 0) {
    // Constants only; an arbitrary word over no variables is a model.
    UPWord w;
    w.from = 0;
    w.to = 0;
    w.left = w.window = w.right = {{}};
    res.outcome = Outcome::Sat;
    res.witness = w;
    return res;
  }
  int two = 2 * V;

  BinaryClauses bc;
  bc.vars = nm.vars;
  for (auto& g : nm.global) {
    auto lit = [&](std::pair<int, int> p) {
      return TemporalLiteral{nm.vars[p.first / 2], (p.first & 1) == 0, p.second};
    };
    bc.clauses.push_back({lit(g[0]), lit(g[1])});
  }
  ClauseClosure star = compute_closure(bc);

  Mat m = chain_matrix(star);
  Mat r0 = make_mat(two);  // same-time implications plus identity
  for (int x = 0; x < two; ++x) {
    set_bit(r0[x], x);
    for (int y = 0; y < two; ++y)
      if (star.has(x ^ 1, y)) set_bit(r0[x], y);
  }

  // Distance behaviours: (r, u, ut) evolves deterministically with the gap
  // width, so enumerating until the first repeat lists every behaviour with
  // its smallest width.
  size_t class_cap = std::max<size_t>(lim.max_types / 50, 64);
  std::vector<DistClass> classes;
  {
    std::map<std::vector<uint64_t>, int> seen;
    DistClass cur{1, m, make_mat(two), make_mat(two)};
    for (;;) {
      auto key = class_key(cur);
      if (seen.count(key)) break;
      seen[key] = (int)classes.size();
      classes.push_back(cur);
      if (classes.size() > class_cap) {
        res.outcome = Outcome::ResourceExceeded;
        res.note = "distance behaviour list exceeded its cap";
        return res;
      }
      DistClass next;
      next.n = cur.n + 1;
      next.r = mat_mul(cur.r, m);
      next.u = mat_or(cur.u, cur.r);
      next.ut = mat_or(r0, cur.u);
      cur = next;
    }
  }

  int K = (int)nm.boxes.size();
  int P = K + 5;  // ordered instants carrying complete types

  SatSolver sat;
  size_t clause_budget = 160 * lim.max_initial, added = 0;
  bool over_budget = false;
  auto emit = [&](std::vector<int> c) {
    if (++added > clause_budget) {
      over_budget = true;
      return;
    }
    sat.add_clause(std::move(c));
  };
  for (int i = 0; i < P * V; ++i) sat.new_var();
  auto plit = [&](int p, int l) { return p * two + l; };

  // Globally forced units and same-time consequences at every instant.
  for (int u = 0; u < two; ++u)
    if (star.has(u, u))
      for (int p = 0; p < P; ++p) emit({plit(p, u)});
  for (int a = 0; a < two; ++a)
    for (int b = a; b < two; ++b)
      if (star.has(a, b))
        for (int p = 0; p < P; ++p) emit({plit(p, a), plit(p, b)});

  // Surrogate propagation between adjacent instants: a future box surrogate
  // persists rightward and asserts its literal at the next instant; when it
  // first turns on, the literal must still fail there. Past boxes mirror.
  for (auto& bx : nm.boxes) {
    int s = 2 * bx.var, L = bx.lit;
    for (int i = 0; i + 1 < P; ++i) {
      int here = bx.future ? i : i + 1, there = bx.future ? i + 1 : i;
      emit({plit(here, s) ^ 1, plit(there, s)});
      emit({plit(here, s) ^ 1, plit(there, L)});
      emit({plit(here, s), plit(there, s) ^ 1, plit(there, L) ^ 1});
    }
  }

  // Anchor triples: the past loop point, the origin, and the future loop
  // point, strictly ordered and strictly inside the instant list.
  struct Anchor {
    int lp, l0, lf, sel;
  };
  std::vector<Anchor> anchors;
  {
    std::vector<int> alo;
    for (int lp = 1; lp <= P - 4; ++lp)
      for (int l0 = lp + 1; l0 <= P - 3; ++l0)
        for (int lf = l0 + 1; lf <= P - 2; ++lf) {
          int sel = sat.new_var();
          anchors.push_back({lp, l0, lf, sel});
          alo.push_back(2 * sel);
          int guard = 2 * sel + 1;
          for (auto& c : nm.init) {
            std::vector<int> cl = {guard};
            for (int l : c) cl.push_back(plit(l0, l));
            emit(cl);
          }
          for (int v = 0; v < V; ++v) {
            // Types repeat at the loop points.
            emit({guard, plit(lf, 2 * v) ^ 1, plit(P - 1, 2 * v)});
            emit({guard, plit(lf, 2 * v), plit(P - 1, 2 * v) ^ 1});
            emit({guard, plit(lp, 2 * v) ^ 1, plit(0, 2 * v)});
            emit({guard, plit(lp, 2 * v), plit(0, 2 * v) ^ 1});
          }
          // An unset surrogate at its loop point needs a refuting instant on
          // the looping side.
          for (auto& bx : nm.boxes) {
            int s = 2 * bx.var, L = bx.lit;
            std::vector<int> cl = {guard, plit(bx.future ? lf : lp, s)};
            if (bx.future)
              for (int j = lf; j < P; ++j) cl.push_back(plit(j, L) ^ 1);
            else
              for (int j = 0; j <= lp; ++j) cl.push_back(plit(j, L) ^ 1);
            emit(cl);
          }
        }
    emit(alo);
  }

  // One distance behaviour per segment.
  std::vector<std::vector<int>> seg_sel((size_t)P - 1);
  for (int i = 0; i + 1 < P; ++i) {
    std::vector<int> alo;
    for (size_t c = 0; c < classes.size(); ++c) {
      int sel = sat.new_var();
      seg_sel[i].push_back(sel);
      alo.push_back(2 * sel);
      int guard = 2 * sel + 1;
      const DistClass& dc = classes[c];
      // Exact-width chains push left-type literals onto the right type.
      for (int x = 0; x < two; ++x)
        for_each_bit(dc.r[x],
                     [&](int y) { emit({guard, plit(i, x) ^ 1, plit(i + 1, y)}); });
      // Gap pins per surrogate, with the interior chain conditions.
      std::vector<PinSpec> pins;
      for (auto& bx : nm.boxes) {
        int s = 2 * bx.var, L = bx.lit;
        int cond = bx.future ? plit(i, s) : plit(i + 1, s);
        for (int theta : {L, s}) {
          for (int a = 0; a < two; ++a)
            if (get_bit(dc.u[a], theta ^ 1))
              emit({guard, cond ^ 1, plit(i, a) ^ 1});
          for_each_bit(dc.u[theta], [&](int y) {
            emit({guard, cond ^ 1, plit(i + 1, y)});
          });
          pins.push_back({theta, cond});
        }
        for (int a = 0; a < two; ++a)
          if (get_bit(dc.u[a], s)) emit({guard, cond, plit(i, a) ^ 1});
        for_each_bit(dc.u[s ^ 1],
                     [&](int y) { emit({guard, cond, plit(i + 1, y)}); });
        pins.push_back({s ^ 1, cond ^ 1});
      }
      // Pins hold at every interior instant, so any short chain from one pin
      // to the negation of another refutes this behaviour.
      for (size_t p1 = 0; p1 < pins.size(); ++p1)
        for (size_t p2 = p1; p2 < pins.size(); ++p2)
          if (get_bit(dc.ut[pins[p1].lit], pins[p2].lit ^ 1) ||
              get_bit(dc.ut[pins[p2].lit], pins[p1].lit ^ 1))
            emit({guard, pins[p1].cond ^ 1, pins[p2].cond ^ 1});
    }
    emit(alo);
  }

  if (over_budget) {
    res.outcome = Outcome::ResourceExceeded;
    res.note = "certificate clause budget exceeded";
    return res;
  }

  for (int round = 0; round < 50; ++round) {
    SatSolver::Status st = sat.solve(lim.max_types);
    if (st == SatSolver::Status::Budget) {
      res.outcome = Outcome::ResourceExceeded;
      res.note = "certificate search conflict budget exceeded";
      return res;
    }
    if (st == SatSolver::Status::Unsat) {
      res.outcome = Outcome::Unsat;
      res.note = "no placement of complete types admits a model";
      return res;
    }

    const Anchor* anc = nullptr;
    for (auto& a : anchors)
      if (sat.value(a.sel)) {
        anc = &a;
        break;
      }
    std::vector<int> chosen((size_t)P - 1, 0);
    for (int i = 0; i + 1 < P; ++i)
      for (size_t c = 0; c < classes.size(); ++c)
        if (sat.value(seg_sel[i][c])) {
          chosen[i] = (int)c;
          break;
        }

    KromCertificate cert;
    cert.vars = nm.vars;
    cert.origin = anc->l0;
    cert.past_loop = anc->lp;
    cert.future_loop = anc->lf;
    for (int p = 0; p < P; ++p) {
      std::vector<bool> row((size_t)V);
      for (int v = 0; v < V; ++v) row[v] = sat.value(p * V + v);
      cert.types.push_back(row);
    }
    std::vector<long> mpos(1, 0);
    for (int i = 0; i + 1 < P; ++i) {
      cert.distances.push_back(classes[chosen[i]].n);
      mpos.push_back(mpos.back() + (long)classes[chosen[i]].n);
    }
    for (int i = 0; i + 1 < P; ++i) {
      std::vector<SnfLit> gap;
      if (cert.distances[i] >= 2)
        for (auto& bx : nm.boxes) {
          bool on = cert.types[bx.future ? i : i + 1][bx.var];
          if (on) {
            gap.push_back({nm.vars[bx.lit / 2], (bx.lit & 1) == 0});
            gap.push_back({nm.vars[bx.var], true});
          } else {
            gap.push_back({nm.vars[bx.var], false});
          }
        }
      cert.gap_literals.push_back(gap);
    }

    // Realise the certificate: fill every instant of the spanned window.
    long tw = mpos.back() + 1;
    if ((unsigned long long)tw * (unsigned long long)V > 4000000ull) {
      res.outcome = Outcome::ResourceExceeded;
      res.note = "certificate window too wide to realise";
      return res;
    }
    SatSolver win;
    for (long i = 0; i < tw * V; ++i) win.new_var();
    auto wlit = [&](long t, int l) { return (int)(t * two + l); };
    for (auto& g : nm.global)
      for (long t = 0; t < tw; ++t) {
        long t1 = t + g[0].second, t2 = t + g[1].second;
        if (t1 >= tw || t2 >= tw) continue;  // loop rows repeat the constraint
        win.add_clause({wlit(t1, g[0].first), wlit(t2, g[1].first)});
      }
    for (auto& c : nm.init) {
      std::vector<int> cl;
      for (int l : c) cl.push_back(wlit(mpos[anc->l0], l));
      win.add_clause(cl);
    }
    for (int p = 0; p < P; ++p)
      for (int v = 0; v < V; ++v)
        win.add_clause({wlit(mpos[p], 2 * v + (cert.types[p][v] ? 0 : 1))});
    for (int i = 0; i + 1 < P; ++i)
      for (long t = mpos[i] + 1; t < mpos[i + 1]; ++t)
        for (auto& bx : nm.boxes) {
          int s = 2 * bx.var;
          if (cert.types[bx.future ? i : i + 1][bx.var]) {
            win.add_clause({wlit(t, bx.lit)});
            win.add_clause({wlit(t, s)});
          } else {
            win.add_clause({wlit(t, s ^ 1)});
          }
        }

    bool realised = win.solve(lim.max_types) == SatSolver::Status::Sat;
    if (realised) {
      UPWord w;
      w.vars.assign(nm.vars.begin(), nm.vars.begin() + (long)nm.orig);
      auto row = [&](long t) {
        std::vector<bool> r(nm.orig);
        for (size_t v = 0; v < nm.orig; ++v) r[v] = win.value((int)(t * V + (long)v));
        return r;
      };
      long t0 = mpos[anc->l0];
      w.from = -t0;
      w.to = tw - 1 - t0;
      for (long t = 0; t < tw; ++t) w.window.push_back(row(t));
      for (long t = 0; t < mpos[anc->lp]; ++t) w.left.push_back(row(t));
      for (long t = mpos[anc->lf] + 1; t < tw; ++t) w.right.push_back(row(t));
      if (verify_witness(f, w)) {
        res.outcome = Outcome::Sat;
        res.witness = w;
        res.certificate = cert;
        return res;
      }
    }
    // The candidate certificate does not extend to a model; exclude it.
    std::vector<int> block = {2 * anc->sel + 1};
    for (int i = 0; i + 1 < P; ++i) block.push_back(2 * seg_sel[i][chosen[i]] + 1);
    for (int p = 0; p < P; ++p)
      for (int v = 0; v < V; ++v)
        block.push_back(2 * (p * V + v) + (cert.types[p][v] ? 1 : 0));
    sat.add_clause(block);
  }
  res.outcome = Outcome::ResourceExceeded;
  res.note = "too many unrealisable certificates";
  return res;
}

// ---------------------------------------------------------------------------
// Horn normalisation and engine.

namespace {

struct HornNorm {
  std::vector<std::string> vars;
  std::map<std::string, int> index;
  struct HBox {
    int v;
    bool future;
  };
  std::vector<HBox> boxes;
  std::map<std::pair<int, bool>, int> box_index;
  struct HLit {
    int v;
    int box;  // -1 plain variable, else index into boxes
  };
  struct HClause {
    std::vector<HLit> body;
    bool has_head = false;
    HLit head{0, -1};
    bool global = false;
    bool trivially_true = false;
  };
  std::vector<HClause> clauses;
  std::vector<std::pair<int, long>> facts;  // variable true at an instant

  int var_of(const F& f) {
    auto it = index.find(f->name);
    if (it != index.end()) return it->second;
    index[f->name] = (int)vars.size();
    vars.push_back(f->name);
    return (int)vars.size() - 1;
  }
  HLit lambda(const F& f) {
    if (f->op == Op::Var) return {var_of(f), -1};
    if ((f->op == Op::BoxF || f->op == Op::BoxP) && f->a->op == Op::Var) {
      int v = var_of(f->a);
      bool fut = f->op == Op::BoxF;
      auto it = box_index.find({v, fut});
      if (it == box_index.end()) {
        it = box_index.insert({{v, fut}, (int)boxes.size()}).first;
        boxes.push_back({v, fut});
      }
      return {v, it->second};
    }
    throw std::invalid_argument(
        "horn clause input: literal must be a variable or a boxed variable");
  }

  static void collect(const F& f, std::vector<F>& parts) {
    if (f->op == Op::Or) {
      collect(f->a, parts);
      collect(f->b, parts);
      return;
    }
    if (f->op == Op::Not && f->a->op == Op::And) {
      collect(f_not(f->a->a), parts);
      collect(f_not(f->a->b), parts);
      return;
    }
    parts.push_back(f);
  }

  // A box pair over a variable is the 'at every instant' literal; it expands
  // into the variable now, under the future box, and under the past box.
  static const F* svbox_var(const F& f) {
    if (f->op == Op::BoxF && f->a->op == Op::BoxP && f->a->a->op == Op::Var)
      return &f->a->a;
    if (f->op == Op::BoxP && f->a->op == Op::BoxF && f->a->a->op == Op::Var)
      return &f->a->a;
    return nullptr;
  }

  void clause(const F& f, bool is_global) {
    std::vector<F> parts;
    collect(f, parts);
    HClause c;
    c.global = is_global;
    std::vector<HLit> heads;  // head conjunction from a box-pair literal
    for (auto& p : parts) {
      bool neg = false;
      F cur = p;
      while (cur->op == Op::Not) {
        neg = !neg;
        cur = cur->a;
      }
      if (cur->op == Op::False) {
        if (neg) return;  // a true literal satisfies the clause
        continue;
      }
      if (const F* v = svbox_var(cur)) {
        std::vector<HLit> three = {lambda(*v), lambda(box_f(*v)),
                                   lambda(box_p(*v))};
        if (neg) {
          c.body.insert(c.body.end(), three.begin(), three.end());
        } else {
          if (c.has_head || !heads.empty())
            throw std::invalid_argument(
                "horn clause input: more than one positive literal");
          heads = three;
        }
        continue;
      }
      HLit l = lambda(cur);
      if (neg) {
        c.body.push_back(l);
      } else {
        if (c.has_head || !heads.empty())
          throw std::invalid_argument(
              "horn clause input: more than one positive literal");
        c.has_head = true;
        c.head = l;
      }
    }
    if (!heads.empty()) {
      for (auto& h : heads) {
        HClause split = c;
        split.has_head = true;
        split.head = h;
        clauses.push_back(split);
      }
      return;
    }
    clauses.push_back(c);
  }

  void conjunct(const F& f, int depth) {
    if (f->op == Op::And) {
      conjunct(f->a, depth);
      conjunct(f->b, depth);
      return;
    }
    if ((f->op == Op::BoxF && f->a->op == Op::BoxP) ||
        (f->op == Op::BoxP && f->a->op == Op::BoxF)) {
      conjunct(f->a->a, depth + 1);
      return;
    }
    if (depth == 0) {
      long shift = 0;
      F cur = f;
      while (cur->op == Op::NextF || cur->op == Op::NextP) {
        shift += cur->op == Op::NextF ? 1 : -1;
        cur = cur->a;
      }
      if (cur->op == Op::Var) {
        facts.push_back({var_of(cur), shift});
        return;
      }
    }
    clause(f, depth > 0);
  }
};

}  // namespace

ClausalResult decide_horn(const F& f, const EngineLimits& lim) {
  HornNorm nm;
  nm.conjunct(f, 0);
  ClausalResult res;

  int V = (int)nm.vars.size(), B = (int)nm.boxes.size();
  long lo = 0, hi = 0;
  for (auto& [v, t] : nm.facts) {
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }
  // Slack for every box flip on each side; beyond it the least model repeats.
  lo -= B + 1;
  hi += B + 1;
  long width = hi - lo + 1;
  if ((unsigned long long)width * (unsigned long long)(V + B) >
      40 * (unsigned long long)lim.max_initial) {
    res.outcome = Outcome::ResourceExceeded;
    res.note = "grounding window too wide";
    return res;
  }

  int per = V + B;
  auto gid = [&](long t, int v) { return (int)((t - lo) * per + v); };
  auto gbid = [&](long t, int b) { return (int)((t - lo) * per + V + b); };
  auto ground = [&](const HornNorm::HLit& l, long t) {
    return l.box >= 0 ? gbid(t, l.box) : gid(t, l.v);
  };

  std::vector<std::vector<int>> bodies;
  std::vector<int> heads;  // -1 encodes an always-false head
  auto add = [&](std::vector<int> body, int head) {
    bodies.push_back(std::move(body));
    heads.push_back(head);
  };
  for (auto& [v, t] : nm.facts) add({}, gid(t, v));
  for (auto& c : nm.clauses) {
    long first = c.global ? lo : 0, last = c.global ? hi : 0;
    for (long t = first; t <= last; ++t) {
      std::vector<int> body;
      for (auto& l : c.body) body.push_back(ground(l, t));
      add(std::move(body), c.has_head ? ground(c.head, t) : -1);
    }
  }
  // Beyond the window the word repeats its edge row, so a future box equals
  // its variable at the right edge while a past box keeps the same value at
  // every later instant: box-at-edge and variable-at-edge. Grounding every
  // global clause once more under that valuation (and its mirror on the
  // left) covers all instants outside the window.
  int nmain = (int)(width * per);
  std::vector<int> tailbox((size_t)std::max(B, 1));
  for (int b = 0; b < B; ++b) {
    int v = nm.boxes[b].v;
    long edge = nm.boxes[b].future ? lo : hi;  // the side the box looks across
    int d = nmain + b;
    tailbox[b] = d;
    add({d}, gbid(edge, b));
    add({d}, gid(edge, v));
    add({gbid(edge, b), gid(edge, v)}, d);
  }
  auto ground_tail = [&](const HornNorm::HLit& l, bool rightward) {
    long edge = rightward ? hi : lo;
    if (l.box < 0) return gid(edge, l.v);
    // The box pointing along the tail collapses to the edge variable; the
    // box pointing back across the window keeps its combined edge value.
    if (nm.boxes[l.box].future == rightward) return gid(edge, nm.boxes[l.box].v);
    return tailbox[l.box];
  };
  for (auto& c : nm.clauses) {
    if (!c.global) continue;
    for (bool rightward : {false, true}) {
      std::vector<int> body;
      for (auto& l : c.body) body.push_back(ground_tail(l, rightward));
      add(std::move(body), c.has_head ? ground_tail(c.head, rightward) : -1);
    }
  }
  // Box variables: propagation toward the looping side, the boxed variable
  // one instant along, completion backward, and exactness at the boundary.
  for (int b = 0; b < B; ++b) {
    int v = nm.boxes[b].v;
    bool fut = nm.boxes[b].future;
    for (long t = lo; t < hi; ++t) {
      long here = fut ? t : t + 1, there = fut ? t + 1 : t;
      add({gbid(here, b)}, gbid(there, b));
      add({gbid(here, b)}, gid(there, v));
      add({gbid(there, b), gid(there, v)}, gbid(here, b));
    }
    long edge = fut ? hi : lo;
    add({gbid(edge, b)}, gid(edge, v));
    add({gid(edge, v)}, gbid(edge, b));
  }

  // Least model by unit propagation.
  int nground = nmain + B;
  std::vector<char> val((size_t)std::max(nground, 1), 0);
  std::vector<std::vector<int>> occ((size_t)std::max(nground, 1));
  std::vector<int> remaining(bodies.size());
  std::queue<int> fire;  // clause indices whose body is fully true
  for (size_t ci = 0; ci < bodies.size(); ++ci) {
    remaining[ci] = (int)bodies[ci].size();
    for (int v : bodies[ci]) occ[v].push_back((int)ci);
    if (remaining[ci] == 0) fire.push((int)ci);
  }
  std::queue<int> newly;
  while (!fire.empty() || !newly.empty()) {
    while (!fire.empty()) {
      int ci = fire.front();
      fire.pop();
      int h = heads[ci];
      if (h == -1) {
        res.outcome = Outcome::Unsat;
        res.note = "unit propagation derived the empty clause";
        return res;
      }
      if (!val[h]) {
        val[h] = 1;
        newly.push(h);
      }
    }
    while (!newly.empty()) {
      int v = newly.front();
      newly.pop();
      for (int ci : occ[v])
        if (--remaining[ci] == 0) fire.push(ci);
    }
  }

  UPWord w;
  w.vars = nm.vars;
  auto row = [&](long t) {
    std::vector<bool> r((size_t)V);
    for (int v = 0; v < V; ++v) r[v] = val[gid(t, v)] != 0;
    return r;
  };
  w.from = lo;
  w.to = hi;
  for (long t = lo; t <= hi; ++t) w.window.push_back(row(t));
  w.left = {row(lo)};
  w.right = {row(hi)};
  res.outcome = Outcome::Sat;
  res.witness = w;
  res.note = "least model with constant tails";
  return res;
}

}  // namespace tdlite::ptl
