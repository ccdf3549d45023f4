#include "tdlite/ptl/generic_engine.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <functional>
#include <map>
#include <stdexcept>

#include "tdlite/ptl/eval.hpp"
#include "tdlite/ptl/sat.hpp"

namespace tdlite::ptl {

namespace {

struct ResourceLimit {};

// On a word repeating one assignment at every instant, each temporal
// operator reduces to its argument: the quantified instants all carry the
// same values, and strict 'until'/'since' are witnessed at the adjacent
// instant with an empty gap, leaving just the right argument.
F collapse_constant(const F& f, std::map<const Formula*, F>& memo) {
  auto it = memo.find(f.get());
  if (it != memo.end()) return it->second;
  F r;
  switch (f->op) {
    case Op::False:
    case Op::Var:
      r = f;
      break;
    case Op::Not:
      r = f_not(collapse_constant(f->a, memo));
      break;
    case Op::And:
      r = f_and(collapse_constant(f->a, memo), collapse_constant(f->b, memo));
      break;
    case Op::Or:
      r = f_or(collapse_constant(f->a, memo), collapse_constant(f->b, memo));
      break;
    case Op::Until:
    case Op::Since:
      r = collapse_constant(f->b, memo);
      break;
    default:
      r = collapse_constant(f->a, memo);
      break;
  }
  memo.emplace(f.get(), r);
  return r;
}

// Looks for a satisfying constant word by Tseitin-encoding the collapsed
// formula. Cheap relative to the type construction, so it runs first; a
// failure here proves nothing and the caller falls through.
std::optional<UPWord> constant_witness(const F& f, uint64_t max_conflicts) {
  std::map<const Formula*, F> cm;
  F g = collapse_constant(f, cm);
  auto cl = closure(g);
  SatSolver s;
  std::map<std::string, int> ix;
  for (auto& c : cl) ix.emplace(to_string(c), s.new_var());
  for (auto& c : cl) {
    int x = ix.at(to_string(c));
    switch (c->op) {
      case Op::False:
        s.add_clause({2 * x + 1});
        break;
      case Op::Var:
        break;
      case Op::Not: {
        int a = ix.at(to_string(c->a));
        s.add_clause({2 * x + 1, 2 * a + 1});
        s.add_clause({2 * x, 2 * a});
        break;
      }
      case Op::And: {
        int a = ix.at(to_string(c->a)), b = ix.at(to_string(c->b));
        s.add_clause({2 * x + 1, 2 * a});
        s.add_clause({2 * x + 1, 2 * b});
        s.add_clause({2 * x, 2 * a + 1, 2 * b + 1});
        break;
      }
      case Op::Or: {
        int a = ix.at(to_string(c->a)), b = ix.at(to_string(c->b));
        s.add_clause({2 * x, 2 * a + 1});
        s.add_clause({2 * x, 2 * b + 1});
        s.add_clause({2 * x + 1, 2 * a, 2 * b});
        break;
      }
      default:
        return std::nullopt;  // unreachable: g is purely propositional
    }
  }
  s.add_clause({2 * ix.at(to_string(g))});
  if (s.solve(max_conflicts) != SatSolver::Status::Sat) return std::nullopt;
  UPWord w;
  w.vars = variables(f);
  std::vector<bool> row;
  for (auto& v : w.vars) {
    auto it = ix.find(v);
    // Variables dropped by the collapse are unconstrained; use false.
    row.push_back(it != ix.end() && s.value(it->second));
  }
  w.left.push_back(row);
  w.window.push_back(row);
  w.right.push_back(row);
  w.from = 0;
  w.to = 0;
  return w;
}

// Indexed closure with child links. A type assigns a bit to every closure
// item; boolean items are determined by their children, so the free bits are
// exactly the variables and the temporal items.
struct Space {
  std::vector<F> cl;
  std::vector<Op> op;
  std::vector<int> ca, cb;        // child indices, -1 if absent
  std::vector<int> var_items;     // Op::Var items
  std::vector<int> free_items;    // vars + temporal items
  std::vector<std::vector<int>> parents;
  int root = -1;
  std::vector<int> future_ev, past_ev;  // items with loop acceptance duties

  explicit Space(const F& f) {
    cl = closure(f);
    std::map<std::string, int> ix;
    for (int i = 0; i < (int)cl.size(); ++i) ix[to_string(cl[i])] = i;
    for (int i = 0; i < (int)cl.size(); ++i) {
      op.push_back(cl[i]->op);
      ca.push_back(cl[i]->a ? ix.at(to_string(cl[i]->a)) : -1);
      cb.push_back(cl[i]->b ? ix.at(to_string(cl[i]->b)) : -1);
    }
    parents.resize(cl.size());
    for (int i = 0; i < (int)cl.size(); ++i) {
      if (ca[i] >= 0) parents[ca[i]].push_back(i);
      if (cb[i] >= 0 && cb[i] != ca[i]) parents[cb[i]].push_back(i);
    }
    for (int i = 0; i < (int)cl.size(); ++i) {
      if (op[i] == Op::Var) var_items.push_back(i);
      if (op[i] == Op::Var || is_temporal(op[i])) free_items.push_back(i);
      switch (op[i]) {
        case Op::Until: case Op::DiaF: case Op::BoxF: future_ev.push_back(i); break;
        case Op::Since: case Op::DiaP: case Op::BoxP: past_ev.push_back(i); break;
        default: break;
      }
    }
    root = ix.at(to_string(f));
  }

  // Acceptance duty for loops: a self-fulfilling cycle must visit, per
  // eventuality item, a node where the obligation is absent or discharged.
  // A false box is an eventuality too: it promises a failing instant.
  bool discharged(int item, const std::vector<char>& v, bool future) const {
    switch (op[item]) {
      case Op::Until: return !future || !v[item] || v[cb[item]];
      case Op::DiaF: return !future || !v[item] || v[ca[item]];
      case Op::BoxF: return !future || v[item] || !v[ca[item]];
      case Op::Since: return future || !v[item] || v[cb[item]];
      case Op::DiaP: return future || !v[item] || v[ca[item]];
      case Op::BoxP: return future || v[item] || !v[ca[item]];
      default: return true;
    }
  }
};

struct Lit { int item; bool val; };

// Small structural solver enumerating the types that satisfy a set of unit
// and binary constraints over closure items. Branches on free items only;
// boolean items follow by propagation through the closure DAG.
struct Solver {
  const Space& sp;
  std::vector<signed char> val;
  std::vector<int> trail;
  std::vector<std::vector<Lit>> clauses;

  explicit Solver(const Space& s) : sp(s), val(s.cl.size(), -1) {}

  bool assign(int item, bool v) {
    if (val[item] >= 0) return val[item] == (signed char)v;
    if (sp.op[item] == Op::False && v) return false;
    val[item] = v;
    trail.push_back(item);
    return propagate(item);
  }

  bool propagate(int item) {
    int a = sp.ca[item], b = sp.cb[item];
    switch (sp.op[item]) {
      case Op::Not:
        if (!assign(a, !val[item])) return false;
        break;
      case Op::And:
        if (val[item] == 1) {
          if (!assign(a, true) || !assign(b, true)) return false;
        } else {
          if (val[a] == 1 && !assign(b, false)) return false;
          if (val[b] == 1 && !assign(a, false)) return false;
        }
        break;
      case Op::Or:
        if (val[item] == 0) {
          if (!assign(a, false) || !assign(b, false)) return false;
        } else {
          if (val[a] == 0 && !assign(b, true)) return false;
          if (val[b] == 0 && !assign(a, true)) return false;
        }
        break;
      default:
        break;
    }
    for (int p : sp.parents[item]) {
      int pa = sp.ca[p], pb = sp.cb[p];
      switch (sp.op[p]) {
        case Op::Not:
          if (!assign(p, !val[item])) return false;
          break;
        case Op::And:
          if (val[item] == 0) { if (!assign(p, false)) return false; }
          else if (val[pa] == 1 && val[pb] == 1) { if (!assign(p, true)) return false; }
          if (val[p] == 1 && (!assign(pa, true) || !assign(pb, true))) return false;
          if (val[p] == 0 && val[item] == 1) {
            int sib = pa == item ? pb : pa;
            if (!assign(sib, false)) return false;
          }
          break;
        case Op::Or:
          if (val[item] == 1) { if (!assign(p, true)) return false; }
          else if (val[pa] == 0 && val[pb] == 0) { if (!assign(p, false)) return false; }
          if (val[p] == 0 && (!assign(pa, false) || !assign(pb, false))) return false;
          if (val[p] == 1 && val[item] == 0) {
            int sib = pa == item ? pb : pa;
            if (!assign(sib, true)) return false;
          }
          break;
        default:
          break;
      }
    }
    return true;
  }

  bool clause_pass() {
    bool again = true;
    while (again) {
      again = false;
      for (auto& c : clauses) {
        const Lit* unassigned = nullptr;
        int nfalse = 0;
        bool sat = false;
        for (auto& l : c) {
          if (val[l.item] < 0) { if (!unassigned) unassigned = &l; }
          else if (val[l.item] == (signed char)l.val) sat = true;
          else ++nfalse;
        }
        if (sat) continue;
        if (nfalse == (int)c.size()) return false;
        if (nfalse == (int)c.size() - 1 && unassigned) {
          if (!assign(unassigned->item, unassigned->val)) return false;
          again = true;
        }
      }
    }
    return true;
  }

  // cb gets the full value vector; returning false stops the enumeration.
  template <class CB>
  bool enumerate(CB&& cb) {
    for (int i = 0; i < (int)sp.cl.size(); ++i)
      if (sp.op[i] == Op::False && val[i] < 0 && !assign(i, false)) return true;
    return dfs(0, cb);
  }

 private:
  template <class CB>
  bool dfs(size_t next_free, CB&& cb) {
    size_t mark = trail.size();
    if (!clause_pass()) {
      while (trail.size() > mark) { val[trail.back()] = -1; trail.pop_back(); }
      return true;  // conflict: backtrack, keep enumerating
    }
    while (next_free < sp.free_items.size() && val[sp.free_items[next_free]] >= 0)
      ++next_free;
    bool keep_going = true;
    if (next_free == sp.free_items.size()) {
      std::vector<char> full(val.begin(), val.end());
      for (char v : full)
        if (v < 0) throw std::logic_error("underived closure item");
      keep_going = cb(full);
    } else {
      int item = sp.free_items[next_free];
      for (bool v : {false, true}) {
        size_t inner = trail.size();
        if (assign(item, v)) {
          if (!dfs(next_free + 1, cb)) keep_going = false;
        }
        while (trail.size() > inner) { val[trail.back()] = -1; trail.pop_back(); }
        if (!keep_going) break;
      }
    }
    while (trail.size() > mark) { val[trail.back()] = -1; trail.pop_back(); }
    return keep_going;
  }
};

// Constraints a successor type must satisfy, given the current type u. They
// encode the one-step recurrences of the strict operators, e.g.
// (a U b)(n) = b(n+1) or (a(n+1) and (a U b)(n+1)).
void successor_constraints(const Space& sp, const std::vector<char>& u, Solver& s) {
  for (int i = 0; i < (int)sp.cl.size(); ++i) {
    int a = sp.ca[i], b = sp.cb[i];
    switch (sp.op[i]) {
      case Op::NextF: s.clauses.push_back({{a, (bool)u[i]}}); break;
      case Op::NextP: s.clauses.push_back({{i, (bool)u[a]}}); break;
      case Op::Until:
        if (u[i]) {
          s.clauses.push_back({{b, true}, {a, true}});
          s.clauses.push_back({{b, true}, {i, true}});
        } else {
          s.clauses.push_back({{b, false}});
          s.clauses.push_back({{a, false}, {i, false}});
        }
        break;
      case Op::DiaF:
        if (u[i]) s.clauses.push_back({{a, true}, {i, true}});
        else { s.clauses.push_back({{a, false}}); s.clauses.push_back({{i, false}}); }
        break;
      case Op::BoxF:
        if (u[i]) { s.clauses.push_back({{a, true}}); s.clauses.push_back({{i, true}}); }
        else s.clauses.push_back({{a, false}, {i, false}});
        break;
      case Op::Since:
        s.clauses.push_back({{i, (bool)(u[b] || (u[a] && u[i]))}});
        break;
      case Op::DiaP: s.clauses.push_back({{i, (bool)(u[a] || u[i])}}); break;
      case Op::BoxP: s.clauses.push_back({{i, (bool)(u[a] && u[i])}}); break;
      default: break;
    }
  }
}

// Mirror image: constraints a predecessor type must satisfy, given t.
void predecessor_constraints(const Space& sp, const std::vector<char>& t, Solver& s) {
  for (int i = 0; i < (int)sp.cl.size(); ++i) {
    int a = sp.ca[i], b = sp.cb[i];
    switch (sp.op[i]) {
      case Op::NextF: s.clauses.push_back({{i, (bool)t[a]}}); break;
      case Op::NextP: s.clauses.push_back({{a, (bool)t[i]}}); break;
      case Op::Since:
        if (t[i]) {
          s.clauses.push_back({{b, true}, {a, true}});
          s.clauses.push_back({{b, true}, {i, true}});
        } else {
          s.clauses.push_back({{b, false}});
          s.clauses.push_back({{a, false}, {i, false}});
        }
        break;
      case Op::DiaP:
        if (t[i]) s.clauses.push_back({{a, true}, {i, true}});
        else { s.clauses.push_back({{a, false}}); s.clauses.push_back({{i, false}}); }
        break;
      case Op::BoxP:
        if (t[i]) { s.clauses.push_back({{a, true}}); s.clauses.push_back({{i, true}}); }
        else s.clauses.push_back({{a, false}, {i, false}});
        break;
      case Op::Until:
        s.clauses.push_back({{i, (bool)(t[b] || (t[a] && t[i]))}});
        break;
      case Op::DiaF: s.clauses.push_back({{i, (bool)(t[a] || t[i])}}); break;
      case Op::BoxF: s.clauses.push_back({{i, (bool)(t[a] && t[i])}}); break;
      default: break;
    }
  }
}

std::string type_key(const Space& sp, const std::vector<char>& v) {
  std::string k(sp.free_items.size(), '0');
  for (size_t j = 0; j < sp.free_items.size(); ++j) k[j] = '0' + v[sp.free_items[j]];
  return k;
}

// Lazily expanded type graph with cached adjacency in both directions.
struct Graph {
  const Space& sp;
  size_t budget;
  std::vector<std::vector<char>> node;
  std::map<std::string, int> ids;
  std::vector<std::vector<int>> succ, pred;
  std::vector<char> succ_done, pred_done;

  Graph(const Space& s, size_t b) : sp(s), budget(b) {}

  int add(const std::vector<char>& v) {
    auto [it, fresh] = ids.emplace(type_key(sp, v), (int)node.size());
    if (fresh) {
      if (node.size() >= budget) throw ResourceLimit{};
      node.push_back(v);
      succ.emplace_back(); pred.emplace_back();
      succ_done.push_back(0); pred_done.push_back(0);
    }
    return it->second;
  }

  const std::vector<int>& neighbours(int n, bool forward) {
    auto& done = forward ? succ_done : pred_done;
    if (!done[n]) {
      done[n] = 1;
      Solver s(sp);
      // Copy the source type: node[] may reallocate while adding neighbours.
      std::vector<char> here = node[n];
      if (forward) successor_constraints(sp, here, s);
      else predecessor_constraints(sp, here, s);
      s.enumerate([&](const std::vector<char>& v) {
        int m = add(v);
        (forward ? succ : pred)[n].push_back(m);
        return true;
      });
    }
    return forward ? succ[n] : pred[n];
  }
};

// Expand everything reachable from the roots along one direction.
void explore(Graph& g, const std::vector<int>& roots, bool forward) {
  std::vector<char> seen;
  std::deque<int> q;
  auto visit = [&](int n) {
    if ((size_t)n >= seen.size()) seen.resize(g.node.size(), 0);
    if (!seen[n]) { seen[n] = 1; q.push_back(n); }
  };
  for (int r : roots) visit(r);
  while (!q.empty()) {
    int n = q.front(); q.pop_front();
    for (int m : g.neighbours(n, forward)) visit(m);
  }
}

// A loop SCC is "good" when it has an edge and discharges every eventuality.
bool good_loop(Graph& g, const std::vector<int>& members, bool forward) {
  bool has_edge = members.size() > 1;
  if (!has_edge)
    for (int m : g.neighbours(members[0], forward))
      if (m == members[0]) { has_edge = true; break; }
  if (!has_edge) return false;
  const auto& ev = forward ? g.sp.future_ev : g.sp.past_ev;
  for (int item : ev) {
    bool ok = false;
    for (int m : members)
      if (g.sp.discharged(item, g.node[m], forward)) { ok = true; break; }
    if (!ok) return false;
  }
  return true;
}

struct Condensation {
  std::vector<int> scc;                   // node -> scc id, -1 if unvisited
  std::vector<char> good;                 // per scc
  std::vector<char> canreach;             // node reaches (or sits in) a good scc
  std::vector<std::vector<int>> members;  // per scc
};

// Tarjan over the already-explored subgraph; SCCs close in reverse
// topological order, so reachability of a good SCC folds up as they close.
Condensation condense(Graph& g, const std::vector<int>& roots, bool forward) {
  Condensation c;
  size_t n_nodes = g.node.size();
  c.scc.assign(n_nodes, -1);
  c.canreach.assign(n_nodes, 0);
  std::vector<int> index(n_nodes, -1), low(n_nodes, 0);
  std::vector<char> onstack(n_nodes, 0);
  std::vector<int> stack;
  struct Frame { int n; size_t child; };
  std::vector<Frame> frames;
  int counter = 0;
  for (int root : roots) {
    if (index[root] >= 0) continue;
    frames.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root); onstack[root] = 1;
    while (!frames.empty()) {
      Frame& f = frames.back();
      const std::vector<int>& ns = g.neighbours(f.n, forward);
      if (f.child < ns.size()) {
        int m = ns[f.child++];
        if (index[m] < 0) {
          index[m] = low[m] = counter++;
          stack.push_back(m); onstack[m] = 1;
          frames.push_back({m, 0});
        } else if (onstack[m]) {
          low[f.n] = std::min(low[f.n], index[m]);
        }
        continue;
      }
      int n = f.n;
      frames.pop_back();
      if (!frames.empty()) low[frames.back().n] = std::min(low[frames.back().n], low[n]);
      if (low[n] == index[n]) {
        int id = (int)c.members.size();
        c.members.emplace_back();
        for (;;) {
          int m = stack.back(); stack.pop_back(); onstack[m] = 0;
          c.scc[m] = id;
          c.members.back().push_back(m);
          if (m == n) break;
        }
        bool reach = good_loop(g, c.members[id], forward);
        c.good.push_back((char)reach);
        if (!reach) {
          for (int m : c.members[id]) {
            for (int v : g.neighbours(m, forward))
              if (c.scc[v] != id && c.canreach[v]) { reach = true; break; }
            if (reach) break;
          }
        }
        if (reach)
          for (int m : c.members[id]) c.canreach[m] = 1;
      }
    }
  }
  return c;
}

std::vector<int> find_path(Graph& g, bool forward, int from,
                           const std::function<bool(int)>& allowed,
                           const std::function<bool(int)>& target) {
  std::map<int, int> parent;
  std::deque<int> q{from};
  parent[from] = from;
  while (!q.empty()) {
    int n = q.front(); q.pop_front();
    if (target(n)) {
      std::vector<int> path{n};
      while (n != from) { n = parent.at(n); path.push_back(n); }
      std::reverse(path.begin(), path.end());
      return path;
    }
    for (int m : g.neighbours(n, forward))
      if (allowed(m) && !parent.count(m)) { parent[m] = n; q.push_back(m); }
  }
  throw std::logic_error("expected path missing in type graph");
}

// Closed walk from the anchor, inside its SCC, visiting a discharge node for
// every eventuality. Entries exclude the anchor at the start and include it
// at the end; never empty.
std::vector<int> covering_walk(Graph& g, bool forward, const Condensation& c, int anchor) {
  int id = c.scc[anchor];
  auto in_scc = [&](int m) { return (size_t)m < c.scc.size() && c.scc[m] == id; };
  const auto& ev = forward ? g.sp.future_ev : g.sp.past_ev;
  std::vector<int> walk;
  int cur = anchor;
  for (int item : ev) {
    int wit = -1;
    for (int m : c.members[id])
      if (g.sp.discharged(item, g.node[m], forward)) { wit = m; break; }
    auto p = find_path(g, forward, cur, in_scc, [&](int n) { return n == wit; });
    walk.insert(walk.end(), p.begin() + 1, p.end());
    cur = wit;
  }
  auto back = find_path(g, forward, cur, in_scc, [&](int n) { return n == anchor; });
  walk.insert(walk.end(), back.begin() + 1, back.end());
  if (walk.empty()) {
    int step = -1;
    for (int m : g.neighbours(anchor, forward))
      if (in_scc(m)) { step = m; break; }
    auto close = find_path(g, forward, step, in_scc, [&](int n) { return n == anchor; });
    walk.push_back(step);
    walk.insert(walk.end(), close.begin() + 1, close.end());
  }
  return walk;
}

UPWord build_witness(const Space& sp, Graph& g, int t0,
                     const Condensation& cf, const Condensation& cp) {
  auto fwd_ok = [&](int n) { return (size_t)n < cf.canreach.size() && cf.canreach[n]; };
  auto pf = find_path(g, true, t0, fwd_ok,
                      [&](int n) { return fwd_ok(n) && cf.good[cf.scc[n]]; });
  auto right_walk = covering_walk(g, true, cf, pf.back());

  auto bwd_ok = [&](int n) { return cp.canreach[n] != 0; };
  auto pb = find_path(g, false, t0, bwd_ok,
                      [&](int n) { return cp.good[cp.scc[n]] != 0; });
  auto left_walk = covering_walk(g, false, cp, pb.back());

  UPWord w;
  for (int i : sp.var_items) w.vars.push_back(sp.cl[i]->name);
  auto row = [&](int n) {
    std::vector<bool> r;
    for (int i : sp.var_items) r.push_back(g.node[n][i] != 0);
    return r;
  };
  // left_walk runs backwards in time from pb.back(); the periodic left block
  // lists its nodes in forward time order.
  for (auto it = left_walk.rbegin(); it != left_walk.rend(); ++it)
    w.left.push_back(row(*it));
  for (auto it = pb.rbegin(); it != pb.rend(); ++it) w.window.push_back(row(*it));
  for (size_t i = 1; i < pf.size(); ++i) w.window.push_back(row(pf[i]));
  for (int n : right_walk) w.right.push_back(row(n));
  w.from = -(long)(pb.size() - 1);
  w.to = (long)(pf.size() - 1);
  return w;
}

}  // namespace

EngineLimits default_limits() {
  EngineLimits lim;
  if (const char* e = std::getenv("TDLITE_MAX_CLOSURE")) {
    int v = std::atoi(e);
    if (v > 0) lim.max_vars = v;
  }
  return lim;
}

bool verify_witness(const F& f, const UPWord& w) {
  return w.valid() && eval_up(f, w, 0);
}

// A box-pair conjunct asserted at the origin holds at every instant, so it
// can be split into its matrix plus the two strict halves. Without the split
// the strict-past half floats free during type enumeration: the outer box
// says nothing about the origin itself, and each such conjunct doubles the
// candidate count.
F split_global_conjuncts(const F& f) {
  if (f->op == Op::And)
    return f_and(split_global_conjuncts(f->a), split_global_conjuncts(f->b));
  bool fp = f->op == Op::BoxF && f->a->op == Op::BoxP;
  bool pf = f->op == Op::BoxP && f->a->op == Op::BoxF;
  if (!fp && !pf) return f;
  F x = f->a->a;
  return f_and(x, f_and(box_f(x), box_p(x)));
}

EngineResult decide_generic(const F& f0, const EngineLimits& lim) {
  // Satisfiability is assessed at the origin, where the split is exact.
  F f = split_global_conjuncts(f0);
  if (auto w = constant_witness(f, 100000)) {
    if (!verify_witness(f, *w))
      throw std::logic_error("constant witness failed verification");
    return {Outcome::Sat, *w, "constant witness"};
  }
  if ((int)variables(f).size() > lim.max_vars)
    return {Outcome::ResourceExceeded, std::nullopt, "variable budget exceeded"};
  Space sp(f);
  Graph g(sp, lim.max_types);
  try {
    // Types making the whole formula true are the time-0 candidates.
    std::vector<int> init;
    {
      Solver s(sp);
      s.clauses.push_back({{sp.root, true}});
      s.enumerate([&](const std::vector<char>& v) {
        init.push_back(g.add(v));
        return init.size() <= lim.max_initial;
      });
      if (init.size() > lim.max_initial) throw ResourceLimit{};
    }
    if (init.empty()) return {Outcome::Unsat, std::nullopt, "no candidate type"};

    explore(g, init, true);
    Condensation cf = condense(g, init, true);
    std::vector<int> survivors;
    for (int n : init)
      if (cf.canreach[n]) survivors.push_back(n);
    if (survivors.empty())
      return {Outcome::Unsat, std::nullopt, "no self-fulfilling future loop"};

    explore(g, survivors, false);
    Condensation cp = condense(g, survivors, false);
    int t0 = -1;
    for (int n : survivors)
      if (cp.canreach[n]) { t0 = n; break; }
    if (t0 < 0)
      return {Outcome::Unsat, std::nullopt, "no self-fulfilling past loop"};

    UPWord w = build_witness(sp, g, t0, cf, cp);
    if (!verify_witness(f, w))
      throw std::logic_error("constructed witness failed verification");
    return {Outcome::Sat, w, ""};
  } catch (const ResourceLimit&) {
    return {Outcome::ResourceExceeded, std::nullopt, "type budget exceeded"};
  }
}

}  // namespace tdlite::ptl
