#include "tdlite/dl/quasimodel.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <tuple>

#include "json.hpp"

namespace tdlite::dl {

long qm_sub(long a, long n) { return a == qm_omega ? qm_omega : a - n; }

namespace {

struct BudgetOut {};

struct Budget {
  std::size_t left;
  void spend(std::size_t n = 1) {
    if (left < n) throw BudgetOut{};
    left -= n;
  }
};

std::string dir_of(const Role& r) {
  return r.inverted ? r.base + "^-" : r.base;
}

std::string inv_dir(const std::string& d) {
  if (d.size() > 2 && d.compare(d.size() - 2, 2, "^-") == 0)
    return d.substr(0, d.size() - 2);
  return d + "^-";
}

// Normal form used throughout the engine: Bot, Atomic, AtLeast, Not, And and
// the every-instant operator. Count bounds and the some-instant operator are
// rewritten; anything else is outside the fragment.
C norm(const C& c) {
  switch (c->kind) {
    case CK::Bot:
    case CK::Atomic:
    case CK::AtLeast:
      return c;
    case CK::Top:
      return c_not(c_bot());
    case CK::AtMost:
      return c_not(at_least(c->q + 1, c->role));
    case CK::Not:
      return c_not(norm(c->a));
    case CK::And:
      return c_and(norm(c->a), norm(c->b));
    case CK::Or:
      return c_not(c_and(c_not(norm(c->a)), c_not(norm(c->b))));
    case CK::Always:
      return c_always(norm(c->a));
    case CK::Sometime:
      return c_not(c_always(c_not(norm(c->a))));
    default:
      throw std::invalid_argument(
          "concept operator outside the every/some-instant fragment: " +
          to_string(c));
  }
}

void close_over(const C& c, std::map<std::string, C>& cl) {
  if (!cl.emplace(to_string(c), c).second) return;
  if (c->a) close_over(c->a, cl);
  if (c->b) close_over(c->b, cl);
}

struct Setup {
  std::vector<ConceptInclusion> tbox;  // normalized inclusions
  std::vector<C> box_items;            // every-instant nodes in the closure
  std::vector<std::string> box_keys;   // their printed forms
  std::vector<std::string> atoms;
  std::vector<std::string> dirs;       // both directions of every role
  std::set<std::string> counted_dirs;  // directions under some closure count
  std::set<std::string> rigid_dirs;
  std::vector<std::string> objects;
  std::set<long> q_required;  // counts the certificate value set must contain
  long q_max = 1;             // largest admissible finite rank
  std::vector<long> qset;     // 0..q_max
  std::vector<long> qhat;     // qset plus omega
  bool atemporal = false;     // no marked counts and no every-instant items
};

Setup build_setup(const KnowledgeBase& kb) {
  Setup s;
  std::map<std::string, C> cl;
  for (auto& i : kb.tbox) {
    ConceptInclusion ni{norm(i.lhs), norm(i.rhs)};
    close_over(ni.lhs, cl);
    close_over(ni.rhs, cl);
    s.tbox.push_back(ni);
  }
  std::set<std::string> at;
  bool marked = false;
  s.q_required.insert(1);
  for (auto& [key, c] : cl) {
    if (c->kind == CK::Atomic) at.insert(c->name);
    if (c->kind == CK::AtLeast) {
      s.q_required.insert(c->q);
      s.counted_dirs.insert(dir_of(c->role));
      if (c->role.mark != RoleMark::plain) marked = true;
    }
    if (c->kind == CK::Always) {
      s.box_items.push_back(c);
      s.box_keys.push_back(key);
    }
  }
  for (auto& a : kb.abox)
    if (!a.is_role) at.insert(a.name);
  s.atoms.assign(at.begin(), at.end());
  s.objects = kb.objects();
  for (auto& r : kb.role_names()) {
    s.dirs.push_back(r);
    s.dirs.push_back(r + "^-");
    if (kb.rigid(r)) {
      s.rigid_dirs.insert(r);
      s.rigid_dirs.insert(r + "^-");
    }
  }
  for (long q = 0; q <= (long)s.objects.size(); ++q) s.q_required.insert(q);
  s.q_max = *s.q_required.rbegin();
  for (long q = 0; q <= s.q_max; ++q) s.qset.push_back(q);
  s.qhat = s.qset;
  s.qhat.push_back(qm_omega);
  s.atemporal = !marked && s.box_items.empty();
  return s;
}

long rank_of(const std::map<std::string, long>& m, const std::string& d) {
  auto it = m.find(d);
  return it == m.end() ? 0 : it->second;
}

bool mem(const C& c, const SigmaType& t) {
  switch (c->kind) {
    case CK::Bot:
      return false;
    case CK::Atomic:
      return t.atoms.count(c->name) != 0;
    case CK::Not:
      return !mem(c->a, t);
    case CK::And:
      return mem(c->a, t) && mem(c->b, t);
    case CK::Always:
      return t.boxed.count(to_string(c)) != 0;
    case CK::AtLeast: {
      const std::map<std::string, long>* m = &t.rank;
      if (c->role.mark == RoleMark::always) m = &t.box_rank;
      if (c->role.mark == RoleMark::sometime) m = &t.dia_rank;
      return c->q <= rank_of(*m, dir_of(c->role));
    }
    default:
      return false;  // unreachable on normalized input
  }
}

bool respects_tbox(const Setup& s, const SigmaType& t) {
  for (auto& i : s.tbox)
    if (mem(i.lhs, t) && !mem(i.rhs, t)) return false;
  return true;
}

// Positive role facts, canonically in the base direction.
using Fact = std::tuple<long, std::string, std::string, std::string>;

// Successor counts of one object read off an assertion-box extension: per
// direction, the count at each instant, the count of fillers present at
// every instant, and the count present at some instant.
struct Counts {
  std::map<std::string, std::map<long, long>> n_at;
  std::map<std::string, long> n_box, n_dia;
  long at(const std::string& d, long k) const {
    auto it = n_at.find(d);
    if (it == n_at.end()) return 0;
    auto jt = it->second.find(k);
    return jt == it->second.end() ? 0 : jt->second;
  }
  long box(const std::string& d) const { return rank_of(n_box, d); }
  long dia(const std::string& d) const { return rank_of(n_dia, d); }
};

Counts build_counts(const std::set<Fact>& ext, const std::vector<long>& zs,
                    const std::string& obj) {
  // direction -> filler -> instants at which the pair holds
  std::map<std::string, std::map<std::string, std::set<long>>> nb;
  for (auto& [k, role, from, to] : ext) {
    if (from == obj) nb[role][to].insert(k);
    if (to == obj) nb[role + "^-"][from].insert(k);
  }
  Counts c;
  for (auto& [d, fillers] : nb)
    for (auto& [b, ks] : fillers) {
      for (long k : ks) c.n_at[d][k]++;
      c.n_dia[d]++;
      if (ks.size() == zs.size()) c.n_box[d]++;
    }
  return c;
}

// Atoms an object's run must contain or avoid per instant.
using ForcedAtoms =
    std::map<long,
             std::pair<std::set<std::string>, std::set<std::string>>>;

ForcedAtoms forced_atoms_of(const KnowledgeBase& kb, const std::string& obj) {
  ForcedAtoms f;
  for (auto& a : kb.abox)
    if (!a.is_role && a.obj1 == obj)
      (a.positive ? f[a.timestamp].first : f[a.timestamp].second)
          .insert(a.name);
  return f;
}

// A run whose box rank on some direction is positive (or strictly below its
// some-instant rank) demands a peer run with the mirror property on the
// inverse direction. Demands are keyed "box1:<dir>" and "gap:<dir>".
std::set<std::string> induced_demands(const std::vector<std::string>& dirs,
                                      const std::map<std::string, long>& box,
                                      const std::map<std::string, long>& dia) {
  std::set<std::string> out;
  for (auto& d : dirs) {
    if (rank_of(box, d) >= 1) out.insert("box1:" + inv_dir(d));
    if (rank_of(box, d) < rank_of(dia, d)) out.insert("gap:" + inv_dir(d));
  }
  return out;
}

struct RunGoal {
  std::string box1_dir;  // require a positive box rank here
  std::string gap_dir;   // require box rank strictly below some-instant rank
};

// Existential condition a run must witness at some instant.
struct Witness {
  int kind = 0;  // 0: offset plain rank above bound; 1: below; 2: refute item
  std::string dir;
  long bound = 0;
  bool offset = false;  // subtract the assertion-box count before comparing
  C item;               // kind 2: concept some instant must falsify
};

bool holds_witness(const Witness& w, long k, const SigmaType& t,
                   const Counts* counts) {
  if (w.kind == 2) return !mem(w.item, t);
  long n = (w.offset && counts) ? counts->at(w.dir, k) : 0;
  long v = qm_sub(rank_of(t.rank, w.dir), n);
  return w.kind == 0 ? v > w.bound : v < w.bound;
}

struct RunProblem {
  const Setup* s = nullptr;
  const std::vector<long>* zs = nullptr;
  const Counts* counts = nullptr;       // null for anonymous runs
  const ForcedAtoms* forced = nullptr;  // null for anonymous runs
  const std::set<std::string>* allowed = nullptr;  // permitted demands
  RunGoal goal;
  // Flexible candidates precomputed once when no marked count and no
  // every-instant item occurs (the inclusions then constrain atoms and plain
  // ranks only, independently of the rigid part).
  const std::vector<SigmaType>* global_flex = nullptr;
};

// Backtracking choice of one candidate type per instant so that every
// witness condition is met somewhere.
bool cover_rec(const std::vector<long>& zs,
               const std::vector<std::vector<SigmaType>>& cands,
               const std::vector<Witness>& ws,
               const std::vector<std::vector<bool>>& possible,
               const Counts* counts, Budget& bud, std::size_t i,
               std::uint64_t done, std::uint64_t all,
               std::map<long, SigmaType>& out) {
  bud.spend();
  if (i == zs.size()) return done == all;
  for (std::size_t w = 0; w < ws.size(); ++w) {
    if (done >> w & 1) continue;
    bool later = false;
    for (std::size_t j = i; j < zs.size() && !later; ++j) later = possible[w][j];
    if (!later) return false;
  }
  for (auto& t : cands[i]) {
    std::uint64_t nd = done;
    for (std::size_t w = 0; w < ws.size(); ++w)
      if (!(nd >> w & 1) && holds_witness(ws[w], zs[i], t, counts))
        nd |= 1ULL << w;
    if (cover_rec(zs, cands, ws, possible, counts, bud, i + 1, nd, all, out)) {
      out[zs[i]] = t;
      return true;
    }
  }
  return false;
}

bool cover(const std::vector<long>& zs,
           const std::vector<std::vector<SigmaType>>& cands,
           const std::vector<Witness>& ws, const Counts* counts, Budget& bud,
           std::map<long, SigmaType>& out) {
  if (ws.size() >= 64) throw BudgetOut{};
  std::vector<std::vector<bool>> possible(ws.size(),
                                          std::vector<bool>(zs.size(), false));
  for (std::size_t w = 0; w < ws.size(); ++w) {
    bool any = false;
    for (std::size_t i = 0; i < zs.size(); ++i)
      for (auto& t : cands[i])
        if (holds_witness(ws[w], zs[i], t, counts)) {
          possible[w][i] = true;
          any = true;
          break;
        }
    if (!any) return false;
  }
  std::uint64_t all = ws.empty() ? 0 : (1ULL << ws.size()) - 1;
  return cover_rec(zs, cands, ws, possible, counts, bud, 0, 0, all, out);
}

// Enumerates the flexible parts (atoms and plain ranks) admissible at one
// instant under a fixed rigid part, per-direction rank intervals and the
// assertion-box forcing.
std::vector<SigmaType> flex_candidates(
    const Setup& s, const SigmaType& rigid,
    const std::map<std::string, std::pair<long, long>>& bounds,
    const std::set<std::string>& must, const std::set<std::string>& mustnot,
    const std::vector<SigmaType>* global_flex, const QmLimits& lim,
    Budget& bud) {
  std::vector<SigmaType> out;
  for (auto& a : must)
    if (mustnot.count(a)) return out;
  if (global_flex) {
    for (auto& g : *global_flex) {
      bud.spend();
      bool ok = true;
      for (auto& a : must)
        if (!g.atoms.count(a)) { ok = false; break; }
      for (auto& a : mustnot)
        if (ok && g.atoms.count(a)) ok = false;
      for (auto& [d, lh] : bounds) {
        if (!ok) break;
        long r = rank_of(g.rank, d);
        if (r < lh.first || r > lh.second) ok = false;
      }
      if (!ok) continue;
      SigmaType t = g;
      t.boxed = rigid.boxed;
      t.box_rank = rigid.box_rank;
      t.dia_rank = rigid.dia_rank;
      out.push_back(std::move(t));
      if (out.size() >= lim.max_types) break;
    }
    return out;
  }
  std::vector<std::string> free;
  for (auto& a : s.atoms)
    if (!must.count(a) && !mustnot.count(a)) free.push_back(a);
  if (free.size() >= 20) throw BudgetOut{};
  std::vector<std::vector<long>> choices;  // admissible ranks per direction
  for (auto& d : s.dirs) {
    auto lh = bounds.at(d);
    std::vector<long> vs;
    for (long q : s.qhat)
      if (q >= lh.first && q <= lh.second) vs.push_back(q);
    if (vs.empty()) return out;
    choices.push_back(std::move(vs));
  }
  for (std::uint64_t am = 0; am < (1ULL << free.size()); ++am) {
    std::vector<std::size_t> idx(choices.size(), 0);
    while (true) {
      bud.spend();
      SigmaType t = rigid;
      t.atoms.insert(must.begin(), must.end());
      for (std::size_t i = 0; i < free.size(); ++i)
        if (am >> i & 1) t.atoms.insert(free[i]);
      for (std::size_t i = 0; i < choices.size(); ++i)
        if (choices[i][idx[i]] > 0) t.rank[s.dirs[i]] = choices[i][idx[i]];
      bool ok = true;
      for (std::size_t b = 0; b < s.box_items.size() && ok; ++b)
        if (t.boxed.count(s.box_keys[b]) && !mem(s.box_items[b]->a, t))
          ok = false;
      if (ok && respects_tbox(s, t)) {
        out.push_back(std::move(t));
        if (out.size() >= lim.max_types) return out;
      }
      std::size_t i = 0;
      while (i < choices.size() && ++idx[i] >= choices[i].size()) idx[i++] = 0;
      if (i == choices.size()) break;
    }
  }
  return out;
}

// Searches for one coherent, saturated run meeting the problem's counts,
// forced atoms, demand allowance and goal. Rigid parts (held every-instant
// items plus box/dia ranks per direction) are enumerated outermost; for each
// the per-instant candidate tables are built and the witness conditions are
// covered by backtracking.
struct RunSearch {
  const RunProblem& p;
  const QmLimits& lim;
  Budget& bud;
  const Setup& s;
  const std::vector<long>& zs;
  std::uint64_t bm = 0;  // held every-instant items
  SigmaType rigid;
  std::vector<std::pair<long, long>> pair_of;  // box/dia rank per direction
  QmRun out;

  RunSearch(const RunProblem& pp, const QmLimits& ll, Budget& bb)
      : p(pp), lim(ll), bud(bb), s(*pp.s), zs(*pp.zs),
        pair_of(pp.s->dirs.size(), {0, 0}) {}

  std::optional<QmRun> run() {
    std::size_t nb = s.box_items.size();
    if (nb >= 16) throw BudgetOut{};
    for (bm = 0; bm < (1ULL << nb); ++bm) {
      rigid = SigmaType{};
      for (std::size_t b = 0; b < nb; ++b)
        if (bm >> b & 1) rigid.boxed.insert(s.box_keys[b]);
      if (assign(0)) return out;
    }
    return std::nullopt;
  }

  bool assign(std::size_t di) {
    bud.spend();
    if (di == s.dirs.size()) return settle();
    const std::string& d = s.dirs[di];
    long nbx = p.counts ? p.counts->box(d) : 0;
    long ndx = p.counts ? p.counts->dia(d) : 0;
    // A direction outside every closure count, with no assertion-box fillers
    // and not targeted by the goal, never needs a positive rank; pinning it
    // to zero only drops induced demands.
    if (ndx == 0 && !s.counted_dirs.count(d) && p.goal.box1_dir != d &&
        p.goal.gap_dir != d) {
      pair_of[di] = {0, 0};
      return assign(di + 1);
    }
    bool b1_ok = p.allowed->count("box1:" + inv_dir(d)) != 0;
    bool gap_ok = p.allowed->count("gap:" + inv_dir(d)) != 0;
    for (long bx : s.qset) {
      if (bx < nbx) continue;
      if (bx >= 1 && !b1_ok) break;  // ascending: nothing later is allowed
      if (p.goal.box1_dir == d && bx < 1) continue;
      long dlo = std::max(bx, bx - nbx + ndx);
      std::vector<long> dias;
      if (bx >= dlo && p.goal.gap_dir != d) dias.push_back(bx);
      if (!s.rigid_dirs.count(d) && gap_ok)
        for (long q : s.qhat)
          if (q > bx && q >= dlo) dias.push_back(q);
      for (long dx : dias) {
        pair_of[di] = {bx, dx};
        if (assign(di + 1)) return true;
      }
    }
    return false;
  }

  bool settle() {
    for (std::size_t i = 0; i < s.dirs.size(); ++i) {
      if (pair_of[i].first > 0)
        rigid.box_rank[s.dirs[i]] = pair_of[i].first;
      else
        rigid.box_rank.erase(s.dirs[i]);
      if (pair_of[i].second > 0)
        rigid.dia_rank[s.dirs[i]] = pair_of[i].second;
      else
        rigid.dia_rank.erase(s.dirs[i]);
    }
    std::vector<std::map<std::string, std::pair<long, long>>> bounds(zs.size());
    std::vector<std::set<std::string>> must(zs.size()), mustnot(zs.size());
    std::vector<std::string> keys(zs.size());
    for (std::size_t zi = 0; zi < zs.size(); ++zi) {
      long k = zs[zi];
      std::string key;
      for (std::size_t i = 0; i < s.dirs.size(); ++i) {
        auto [bx, dx] = pair_of[i];
        long nk = p.counts ? p.counts->at(s.dirs[i], k) : 0;
        long nbx = p.counts ? p.counts->box(s.dirs[i]) : 0;
        long ndx = p.counts ? p.counts->dia(s.dirs[i]) : 0;
        long lo = bx - nbx + nk;
        long hi = dx == qm_omega ? qm_omega : dx - ndx + nk;
        bounds[zi][s.dirs[i]] = {lo, hi};
        key += std::to_string(lo) + ":" + std::to_string(hi) + ";";
      }
      if (p.forced) {
        auto it = p.forced->find(k);
        if (it != p.forced->end()) {
          must[zi] = it->second.first;
          mustnot[zi] = it->second.second;
        }
      }
      for (auto& a : must[zi]) key += "+" + a;
      for (auto& a : mustnot[zi]) key += "-" + a;
      keys[zi] = std::move(key);
    }
    // Tables are filled for the most constrained instants first so that an
    // unmeetable instant fails the rigid assignment before the cheap ones
    // are enumerated.
    std::vector<std::size_t> order(zs.size());
    for (std::size_t zi = 0; zi < zs.size(); ++zi) order[zi] = zi;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) {
                       return must[a].size() + mustnot[a].size() >
                              must[b].size() + mustnot[b].size();
                     });
    std::vector<std::vector<SigmaType>> cands(zs.size());
    std::map<std::string, std::vector<SigmaType>> memo;
    for (std::size_t zi : order) {
      auto mit = memo.find(keys[zi]);
      if (mit == memo.end())
        mit = memo
                  .emplace(keys[zi],
                           flex_candidates(s, rigid, bounds[zi], must[zi],
                                           mustnot[zi], p.global_flex, lim,
                                           bud))
                  .first;
      if (mit->second.empty()) return false;
      cands[zi] = mit->second;
    }
    std::vector<Witness> ws;
    for (std::size_t i = 0; i < s.dirs.size(); ++i) {
      auto [bx, dx] = pair_of[i];
      const std::string& d = s.dirs[i];
      if (bx < dx) {
        ws.push_back({0, d, bx, false, {}});
        if (dx < qm_omega) ws.push_back({1, d, dx, false, {}});
      }
      if (p.counts) {
        long lo = bx - p.counts->box(d);
        long hi = qm_sub(dx, p.counts->dia(d));
        if (lo < hi) {
          ws.push_back({0, d, lo, true, {}});
          if (dx < qm_omega) ws.push_back({1, d, hi, true, {}});
        }
      }
    }
    for (std::size_t b = 0; b < s.box_items.size(); ++b)
      if (!(bm >> b & 1)) ws.push_back({2, "", 0, false, s.box_items[b]->a});
    std::map<long, SigmaType> at;
    if (!cover(zs, cands, ws, p.counts, bud, at)) return false;
    out.at = std::move(at);
    return true;
  }
};

std::optional<QmRun> search_run(const RunProblem& p, const QmLimits& lim,
                                Budget& bud) {
  return RunSearch(p, lim, bud).run();
}

std::set<std::string> run_demands(const Setup& s, const QmRun& r) {
  const SigmaType& t = r.at.begin()->second;
  return induced_demands(s.dirs, t.box_rank, t.dia_rank);
}

bool realizes_demand(const QmRun& r, const std::string& demand) {
  const SigmaType& t = r.at.begin()->second;
  auto sep = demand.find(':');
  std::string kind = demand.substr(0, sep), d = demand.substr(sep + 1);
  if (kind == "box1") return rank_of(t.box_rank, d) >= 1;
  return rank_of(t.box_rank, d) < rank_of(t.dia_rank, d);
}

std::string counts_key(const Counts& c) {
  std::string key;
  for (auto& [d, m] : c.n_at) {
    key += d + "{";
    for (auto& [k, n] : m) key += std::to_string(k) + ":" + std::to_string(n) + ",";
    key += "}";
  }
  for (auto& [d, n] : c.n_box) key += "b" + d + "=" + std::to_string(n) + ";";
  for (auto& [d, n] : c.n_dia) key += "d" + d + "=" + std::to_string(n) + ";";
  return key;
}

std::set<Fact> base_facts(const KnowledgeBase& kb) {
  std::set<Fact> out;
  for (auto& a : kb.abox)
    if (a.is_role && a.positive)
      out.insert({a.timestamp, a.name, a.obj1, a.obj2});
  return out;
}

std::set<Fact> negative_facts(const KnowledgeBase& kb) {
  std::set<Fact> out;
  for (auto& a : kb.abox)
    if (a.is_role && !a.positive)
      out.insert({a.timestamp, a.name, a.obj1, a.obj2});
  return out;
}

// One padding level of the overall search: fixed instant window, extension
// slots enumerated, one faithful run found per object, demand closure added.
std::optional<Quasimodel> search_level(const KnowledgeBase& kb, const Setup& s,
                                       const std::vector<long>& zs,
                                       const std::vector<SigmaType>* gflex,
                                       const QmLimits& lim, Budget& bud) {
  std::set<Fact> base = base_facts(kb);
  std::set<Fact> neg = negative_facts(kb);
  for (auto& f : base)
    if (neg.count(f)) return std::nullopt;  // directly contradictory input
  // rigid roles hold their asserted pairs at every instant
  std::set<Fact> forced;
  for (auto& [k, role, a, b] : base)
    if (s.rigid_dirs.count(role))
      for (long n : zs) forced.insert({n, role, a, b});
  for (auto& f : forced)
    if (neg.count(f)) return std::nullopt;
  std::set<Fact> given = base;
  given.insert(forced.begin(), forced.end());
  // open extension slots: asserted pairs of flexible roles at the remaining
  // instants, unless a negated assertion blocks them
  std::set<std::tuple<std::string, std::string, std::string>> pairs;
  for (auto& [k, role, a, b] : base)
    if (!s.rigid_dirs.count(role)) pairs.insert({role, a, b});
  std::vector<Fact> slots;
  for (auto& [role, a, b] : pairs)
    for (long k : zs) {
      Fact f{k, role, a, b};
      if (!given.count(f) && !neg.count(f)) slots.push_back(f);
    }
  if (slots.size() > lim.max_ext_slots) throw BudgetOut{};

  std::vector<ForcedAtoms> forced_atoms;
  for (auto& obj : s.objects) forced_atoms.push_back(forced_atoms_of(kb, obj));

  // Demands are resolved lazily.  A demand is assumed realizable until some
  // goal-directed search for it fails; the failure is permanent for this
  // window, so the demand joins the dead set and the level restarts with the
  // tighter allowance.  Only demands the chosen runs actually induce are ever
  // searched for, which keeps irrelevant corners of the rank space untouched.
  std::set<std::string> dead;
  while (true) {
    std::set<std::string> allowed;
    for (auto& d : s.dirs) {
      if (!dead.count("box1:" + d)) allowed.insert("box1:" + d);
      if (!dead.count("gap:" + d)) allowed.insert("gap:" + d);
    }
    bool retry = false;

    auto assemble = [&](const std::set<Fact>& ext,
                        std::vector<QmRun> runs) -> std::optional<Quasimodel> {
      // close the run set under the demands the chosen runs induce
      std::set<std::string> open;
      for (auto& r : runs) {
        auto ds = run_demands(s, r);
        open.insert(ds.begin(), ds.end());
      }
      std::set<std::string> done;
      while (true) {
        std::string next;
        for (auto& d : open) {
          bool met = false;
          for (auto& r : runs) met = met || realizes_demand(r, d);
          if (!met && !done.count(d)) {
            next = d;
            break;
          }
        }
        if (next.empty()) break;
        RunProblem p;
        p.s = &s;
        p.zs = &zs;
        p.allowed = &allowed;
        p.global_flex = gflex;
        auto sep = next.find(':');
        if (next.compare(0, sep, "box1") == 0)
          p.goal.box1_dir = next.substr(sep + 1);
        else
          p.goal.gap_dir = next.substr(sep + 1);
        auto r = search_run(p, lim, bud);
        if (!r) {
          dead.insert(next);
          retry = true;
          return std::nullopt;
        }
        auto ds = run_demands(s, *r);
        open.insert(ds.begin(), ds.end());
        done.insert(next);
        runs.push_back(std::move(*r));
      }
      Quasimodel qm;
      qm.q_values = s.qset;
      qm.instants = zs;
      for (auto& r : runs)
        if (std::find(qm.runs.begin(), qm.runs.end(), r) == qm.runs.end())
          qm.runs.push_back(r);
      for (auto& f : ext)
        if (!base.count(f))
          qm.ext_delta.push_back(
              {std::get<0>(f), std::get<1>(f), std::get<2>(f), std::get<3>(f)});
      return qm;
    };

    if (s.objects.empty()) {
      RunProblem p;
      p.s = &s;
      p.zs = &zs;
      p.allowed = &allowed;
      p.global_flex = gflex;
      auto r = search_run(p, lim, bud);
      if (!r) return std::nullopt;
      auto qm = assemble(given, {std::move(*r)});
      if (retry) continue;
      return qm;
    }

    // faithful-run results keyed by object and its count signature
    std::map<std::string, std::optional<QmRun>> memo;
    std::optional<Quasimodel> found;
    for (std::uint64_t mask = 0; mask < (1ULL << slots.size()) && !retry;
         ++mask) {
      bud.spend();
      std::set<Fact> ext = given;
      for (std::size_t i = 0; i < slots.size(); ++i)
        if (mask >> i & 1) ext.insert(slots[i]);
      std::vector<QmRun> runs;
      bool all_ok = true;
      for (std::size_t oi = 0; oi < s.objects.size() && all_ok; ++oi) {
        Counts c = build_counts(ext, zs, s.objects[oi]);
        std::string key = s.objects[oi] + "|" + counts_key(c);
        auto it = memo.find(key);
        if (it == memo.end()) {
          RunProblem p;
          p.s = &s;
          p.zs = &zs;
          p.counts = &c;
          p.forced = &forced_atoms[oi];
          p.allowed = &allowed;
          p.global_flex = gflex;
          it = memo.emplace(key, search_run(p, lim, bud)).first;
        }
        if (!it->second)
          all_ok = false;
        else
          runs.push_back(*it->second);
      }
      if (!all_ok) continue;
      found = assemble(ext, std::move(runs));
      if (found) return found;
    }
    if (!retry) return std::nullopt;
  }
}

std::vector<long> window(const KnowledgeBase& kb, int pad) {
  std::set<long> zs;
  for (auto& a : kb.abox) zs.insert(a.timestamp);
  if (zs.empty()) zs.insert(0);
  long lo = *zs.begin(), hi = *zs.rbegin();
  for (int i = 0; i <= pad; ++i) {
    zs.insert(lo - 1 - i);
    zs.insert(hi + 1 + i);
  }
  return {zs.begin(), zs.end()};
}

}  // namespace

QmCheck check_quasimodel(const KnowledgeBase& kb, const Quasimodel& qm) {
  QmCheck out;
  auto bad = [&](const std::string& cond, const std::string& detail) {
    out.ok = false;
    out.violations.push_back({cond, detail});
  };
  Setup s = build_setup(kb);

  std::set<long> qs(qm.q_values.begin(), qm.q_values.end());
  for (long q : s.q_required)
    if (!qs.count(q)) bad("Q", "missing required count " + std::to_string(q));
  if (qs.empty() || *qs.rbegin() != s.q_max)
    bad("Q", "largest count must be " + std::to_string(s.q_max));

  std::set<long> zset(qm.instants.begin(), qm.instants.end());
  for (auto& a : kb.abox)
    if (!zset.count(a.timestamp))
      bad("Z", "asserted instant " + std::to_string(a.timestamp) +
                   " outside the window");
  if (zset.empty()) bad("Z", "empty instant window");
  if (qm.runs.empty()) bad("dom", "no runs");
  if (!out.ok) return out;

  auto rank_admissible = [&](long v) { return v == qm_omega || qs.count(v); };
  auto all_dirs = [&](const SigmaType& t) {
    std::set<std::string> ds;
    for (auto& [d, v] : t.rank) ds.insert(d);
    for (auto& [d, v] : t.box_rank) ds.insert(d);
    for (auto& [d, v] : t.dia_rank) ds.insert(d);
    return ds;
  };
  std::set<std::string> box_key_set(s.box_keys.begin(), s.box_keys.end());

  for (std::size_t ri = 0; ri < qm.runs.size(); ++ri) {
    const QmRun& r = qm.runs[ri];
    std::string rn = "run " + std::to_string(ri);
    std::set<long> dom;
    for (auto& [k, t] : r.at) dom.insert(k);
    if (dom != zset) {
      bad("dom", rn + " is not total on the window");
      continue;
    }
    const SigmaType& first = r.at.begin()->second;
    for (auto& [k, t] : r.at) {
      std::string at = rn + " at " + std::to_string(k);
      if (t.boxed != first.boxed || t.box_rank != first.box_rank ||
          t.dia_rank != first.dia_rank)
        bad("r1", at + " changes a rigid concept");
      for (auto& key : t.boxed)
        if (!box_key_set.count(key)) bad("sigma", at + " holds unknown " + key);
      for (auto& d : all_dirs(t)) {
        long bx = rank_of(t.box_rank, d), px = rank_of(t.rank, d),
             dx = rank_of(t.dia_rank, d);
        if (!rank_admissible(px) || !rank_admissible(bx) ||
            !rank_admissible(dx))
          bad("t4", at + " has an inadmissible rank on " + d);
        if (bx == qm_omega || bx > s.q_max)
          bad("t5", at + " has an unbounded box rank on " + d);
        if (!(bx <= px && px <= dx)) bad("t6", at + " breaks box<=plain<=dia on " + d);
        if (s.rigid_dirs.count(d) && dx > bx)
          bad("t7", at + " splits ranks of rigid " + d);
      }
      for (std::size_t b = 0; b < s.box_items.size(); ++b)
        if (t.boxed.count(s.box_keys[b]) && !mem(s.box_items[b]->a, t))
          bad("t3", at + " holds " + s.box_keys[b] + " but not its body");
      for (auto& i : s.tbox)
        if (mem(i.lhs, t) && !mem(i.rhs, t))
          bad("Q1", at + " violates " + to_string(i.lhs) + " <= " +
                        to_string(i.rhs));
    }
    // saturation: strict rank gaps and refuted every-instant items need
    // witness instants
    for (auto& d : all_dirs(first)) {
      long bx = rank_of(first.box_rank, d), dx = rank_of(first.dia_rank, d);
      if (bx >= dx) continue;
      bool above = false, below = false;
      for (auto& [k, t] : r.at) {
        if (rank_of(t.rank, d) > bx) above = true;
        if (rank_of(t.rank, d) < dx) below = true;
      }
      if (!above) bad("r2", rn + " never exceeds its box rank on " + d);
      if (dx < qm_omega && !below)
        bad("r2", rn + " never drops below its dia rank on " + d);
    }
    for (std::size_t b = 0; b < s.box_items.size(); ++b) {
      if (first.boxed.count(s.box_keys[b])) continue;
      bool refuted = false;
      for (auto& [k, t] : r.at)
        if (!mem(s.box_items[b]->a, t)) refuted = true;
      if (!refuted)
        bad("r3", rn + " refutes " + s.box_keys[b] + " at no instant");
    }
  }

  // assertion-box extension
  std::set<Fact> base = base_facts(kb);
  std::set<Fact> neg = negative_facts(kb);
  std::set<std::string> roles;
  for (auto& n : kb.role_names()) roles.insert(n);
  std::set<std::string> obs(s.objects.begin(), s.objects.end());
  std::set<Fact> ext = base;
  for (auto& f : base)
    if (neg.count(f)) bad("ext", "assertion box contradicts itself");
  for (auto& e : qm.ext_delta) {
    Fact f{e.k, e.role, e.from, e.to};
    if (!zset.count(e.k)) bad("ext", "extension fact outside the window");
    if (!roles.count(e.role)) bad("ext", "extension uses unknown role " + e.role);
    if (!obs.count(e.from) || !obs.count(e.to))
      bad("ext", "extension uses unknown object");
    if (neg.count(f))
      bad("ext", "extension contradicts a negated assertion for " + e.role);
    ext.insert(f);
  }
  for (auto& [k, role, a, b] : ext)
    if (s.rigid_dirs.count(role))
      for (long n : qm.instants)
        if (!ext.count({n, role, a, b})) {
          bad("ext", "rigid role " + role + " misses an instant for (" + a +
                         "," + b + ")");
          break;
        }

  // one faithful run per object
  for (auto& obj : s.objects) {
    Counts c = build_counts(ext, qm.instants, obj);
    ForcedAtoms fa = forced_atoms_of(kb, obj);
    std::vector<QmViolation> best;
    bool found = false;
    for (std::size_t ri = 0; ri < qm.runs.size() && !found; ++ri) {
      const QmRun& r = qm.runs[ri];
      if ((long)r.at.size() != (long)zset.size()) continue;
      std::vector<QmViolation> vs;
      std::string rn = "object " + obj + " via run " + std::to_string(ri);
      for (auto& [k, pn] : fa) {
        auto it = r.at.find(k);
        if (it == r.at.end()) continue;
        for (auto& a : pn.first)
          if (!it->second.atoms.count(a))
            vs.push_back({"r4", rn + " misses " + a + " at " +
                                    std::to_string(k)});
        for (auto& a : pn.second)
          if (it->second.atoms.count(a))
            vs.push_back({"r4", rn + " wrongly holds " + a + " at " +
                                    std::to_string(k)});
      }
      const SigmaType& first = r.at.begin()->second;
      for (auto& d : s.dirs) {
        long bx = rank_of(first.box_rank, d), dx = rank_of(first.dia_rank, d);
        long lo = bx - c.box(d), hi = qm_sub(dx, c.dia(d));
        if (lo < 0)
          vs.push_back({"r5", rn + ": box rank below the asserted count on " +
                                  d});
        for (auto& [k, t] : r.at) {
          long mid = qm_sub(rank_of(t.rank, d), c.at(d, k));
          if (mid < lo || mid > hi)
            vs.push_back({"r5", rn + ": rank gap out of range on " + d +
                                    " at " + std::to_string(k)});
        }
        if (lo < hi) {
          bool above = false, below = false;
          for (auto& [k, t] : r.at) {
            long mid = qm_sub(rank_of(t.rank, d), c.at(d, k));
            if (mid > lo) above = true;
            if (mid < hi) below = true;
          }
          if (!above)
            vs.push_back({"r6", rn + ": no instant exceeds the box gap on " +
                                    d});
          if (dx < qm_omega && !below)
            vs.push_back({"r6", rn + ": no instant under the dia gap on " + d});
        }
      }
      if (vs.empty())
        found = true;
      else if (best.empty() || vs.size() < best.size())
        best = std::move(vs);
    }
    if (!found) {
      for (auto& v : best) out.violations.push_back(v);
      out.ok = false;
      bad("Q2", "no faithful run for object " + obj);
    }
  }

  // demand conditions across the run set
  for (auto& d : s.dirs) {
    bool need_box1 = false, need_gap = false, have_box1 = false,
         have_gap = false;
    for (auto& r : qm.runs) {
      const SigmaType& t = r.at.begin()->second;
      long bx = rank_of(t.box_rank, inv_dir(d)), dx = rank_of(t.dia_rank, inv_dir(d));
      if (bx >= 1) need_box1 = true;
      if (bx < dx) need_gap = true;
      long bx2 = rank_of(t.box_rank, d), dx2 = rank_of(t.dia_rank, d);
      if (bx2 >= 1) have_box1 = true;
      if (bx2 < dx2) have_gap = true;
    }
    if (need_box1 && !have_box1)
      bad("Q3", "no run sources the every-instant role " + d);
    if (need_gap && !have_gap)
      bad("Q4", "no run mirrors the rank gap on " + d);
  }
  return out;
}

QmVerdict decide_temporalised(const KnowledgeBase& kb, const QmLimits& lim) {
  if (!kb.rbox.empty())
    throw std::invalid_argument(
        "role hierarchies are outside the temporalised-role engine");
  Setup s = build_setup(kb);
  QmVerdict v;
  if (s.q_max + 1 > lim.max_count) {
    v.outcome = ptl::Outcome::ResourceExceeded;
    v.note = "successor counts exceed the configured bound";
    return v;
  }
  Budget bud{lim.max_nodes};
  try {
    // For inputs without marked counts and without every-instant items the
    // inclusions constrain only atoms and plain ranks: precompute the
    // admissible flexible parts once.
    std::vector<SigmaType> gflex;
    const std::vector<SigmaType>* gfp = nullptr;
    if (s.atemporal) {
      std::map<std::string, std::pair<long, long>> full;
      for (auto& d : s.dirs) full[d] = {0, qm_omega};
      gflex = flex_candidates(s, SigmaType{}, full, {}, {}, nullptr, lim, bud);
      gfp = &gflex;
    }
    for (int pad = 0; pad <= lim.extra_instants; ++pad) {
      auto zs = window(kb, pad);
      auto qm = search_level(kb, s, zs, gfp, lim, bud);
      if (qm) {
        auto chk = check_quasimodel(kb, *qm);
        if (!chk.ok)
          throw std::logic_error("certificate failed re-verification: " +
                                 chk.violations.front().condition + " " +
                                 chk.violations.front().detail);
        v.outcome = ptl::Outcome::Sat;
        v.witness = std::move(qm);
        v.note = "verified certificate with " +
                 std::to_string(v.witness->runs.size()) + " runs over " +
                 std::to_string(v.witness->instants.size()) + " instants";
        return v;
      }
    }
  } catch (const BudgetOut&) {
    v.outcome = ptl::Outcome::ResourceExceeded;
    v.note = "search budget exhausted";
    return v;
  }
  v.outcome = ptl::Outcome::Unsat;
  v.note = "no certificate within the configured window and extension bounds";
  return v;
}

std::string to_json(const Quasimodel& qm) {
  nlohmann::json j;
  j["Q"] = qm.q_values;
  j["Z"] = qm.instants;
  auto rank_str = [](long v) {
    return v == qm_omega ? std::string("omega") : std::to_string(v);
  };
  nlohmann::json runs = nlohmann::json::array();
  for (auto& r : qm.runs) {
    nlohmann::json jr;
    for (auto& [k, t] : r.at) {
      std::vector<std::string> lits;
      for (auto& a : t.atoms) lits.push_back(a);
      for (auto& b : t.boxed) lits.push_back(b);
      for (auto& [d, v] : t.rank) lits.push_back(">= " + rank_str(v) + " " + d);
      for (auto& [d, v] : t.box_rank)
        lits.push_back(">= " + rank_str(v) + " box " + d);
      for (auto& [d, v] : t.dia_rank)
        lits.push_back(">= " + rank_str(v) + " dia " + d);
      jr[std::to_string(k)] = lits;
    }
    runs.push_back(jr);
  }
  j["runs"] = runs;
  nlohmann::json delta = nlohmann::json::array();
  for (auto& e : qm.ext_delta)
    delta.push_back(
        {{"k", e.k}, {"role", e.role}, {"from", e.from}, {"to", e.to}});
  j["extA_delta"] = delta;
  return j.dump(2);
}

}  // namespace tdlite::dl
