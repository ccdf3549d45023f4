#include "tdlite/dl/translate.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "tdlite/ptl/clausal.hpp"

namespace tdlite::dl {

namespace {

Q mk(QtlK k) {
  auto n = std::make_shared<QtlNode>();
  n->kind = k;
  return n;
}

Q mk1(QtlK k, Q a) {
  auto n = std::make_shared<QtlNode>();
  n->kind = k;
  n->a = std::move(a);
  return n;
}

Q mk2(QtlK k, Q a, Q b) {
  auto n = std::make_shared<QtlNode>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

std::string role_text(const Role& r) {
  return r.base + (r.inverted ? "^-" : "");
}

bool is_true(const Q& f) {
  return f->kind == QtlK::Not && f->a->kind == QtlK::False;
}

}  // namespace

Q q_false() { return mk(QtlK::False); }
Q q_true() { return q_not(q_false()); }

Q q_pred(std::string pred, std::string term) {
  auto n = std::make_shared<QtlNode>();
  n->kind = QtlK::Pred;
  n->pred = std::move(pred);
  n->term = std::move(term);
  return n;
}

Q q_prop(std::string name) {
  auto n = std::make_shared<QtlNode>();
  n->kind = QtlK::Prop;
  n->pred = std::move(name);
  return n;
}

Q q_not(Q a) { return mk1(QtlK::Not, std::move(a)); }
Q q_and(Q a, Q b) { return mk2(QtlK::And, std::move(a), std::move(b)); }
Q q_or(Q a, Q b) { return mk2(QtlK::Or, std::move(a), std::move(b)); }
Q q_impl(Q a, Q b) { return q_or(q_not(std::move(a)), std::move(b)); }
Q q_next_f(Q a) { return mk1(QtlK::NextF, std::move(a)); }
Q q_next_p(Q a) { return mk1(QtlK::NextP, std::move(a)); }
Q q_box_f(Q a) { return mk1(QtlK::BoxF, std::move(a)); }
Q q_box_p(Q a) { return mk1(QtlK::BoxP, std::move(a)); }
Q q_dia_f(Q a) { return mk1(QtlK::DiaF, std::move(a)); }
Q q_dia_p(Q a) { return mk1(QtlK::DiaP, std::move(a)); }
Q q_until(Q a, Q b) { return mk2(QtlK::Until, std::move(a), std::move(b)); }
Q q_since(Q a, Q b) { return mk2(QtlK::Since, std::move(a), std::move(b)); }
Q q_always(Q a) { return mk1(QtlK::Always, std::move(a)); }
Q q_forall(Q a) { return mk1(QtlK::Forall, std::move(a)); }
Q q_exists(Q a) { return mk1(QtlK::Exists, std::move(a)); }

Q q_conj(const std::vector<Q>& fs) {
  Q acc;
  for (auto& f : fs) {
    if (is_true(f)) continue;
    acc = acc ? q_and(acc, f) : f;
  }
  return acc ? acc : q_true();
}

Q q_shift(Q a, long n) {
  while (n > 0) {
    a = q_next_f(std::move(a));
    --n;
  }
  while (n < 0) {
    a = q_next_p(std::move(a));
    ++n;
  }
  return a;
}

std::string to_string(const Q& f) {
  switch (f->kind) {
    case QtlK::False:
      return "bot";
    case QtlK::Pred:
      return f->pred + "(" + (f->term.empty() ? "x" : f->term) + ")";
    case QtlK::Prop:
      return f->pred;
    case QtlK::Not:
      return "not " + to_string(f->a);
    case QtlK::And:
      return "(" + to_string(f->a) + " and " + to_string(f->b) + ")";
    case QtlK::Or:
      return "(" + to_string(f->a) + " or " + to_string(f->b) + ")";
    case QtlK::Until:
      return "(" + to_string(f->a) + " U " + to_string(f->b) + ")";
    case QtlK::Since:
      return "(" + to_string(f->a) + " S " + to_string(f->b) + ")";
    case QtlK::NextF:
      return "X+ " + to_string(f->a);
    case QtlK::NextP:
      return "X- " + to_string(f->a);
    case QtlK::BoxF:
      return "G+ " + to_string(f->a);
    case QtlK::BoxP:
      return "G- " + to_string(f->a);
    case QtlK::DiaF:
      return "F+ " + to_string(f->a);
    case QtlK::DiaP:
      return "F- " + to_string(f->a);
    case QtlK::Always:
      return "G* " + to_string(f->a);
    case QtlK::Forall:
      return "forall x " + to_string(f->a);
    case QtlK::Exists:
      return "exists x " + to_string(f->a);
  }
  return "?";
}

namespace {

void collect_conjuncts(const Q& f, std::vector<Q>& out) {
  if (f->kind == QtlK::And) {
    collect_conjuncts(f->a, out);
    collect_conjuncts(f->b, out);
    return;
  }
  out.push_back(f);
}

}  // namespace

std::vector<Q> conjuncts(const Q& f) {
  std::vector<Q> out;
  collect_conjuncts(f, out);
  return out;
}

std::string count_pred(int q, const Role& r) {
  if (r.mark != RoleMark::plain)
    throw std::invalid_argument(
        "translation: marked role in a count restriction");
  return "E" + std::to_string(q) + ":" + role_text(r);
}

bool TranslationContext::rigid(const std::string& base) const {
  return std::find(rigid_roles.begin(), rigid_roles.end(), base) !=
         rigid_roles.end();
}

namespace {

void collect_counts(const C& c, std::set<int>& out) {
  if (c->kind == CK::AtLeast) out.insert(c->q);
  if (c->kind == CK::AtMost) out.insert(c->q + 1);
  if (c->a) collect_counts(c->a, out);
  if (c->b) collect_counts(c->b, out);
}

}  // namespace

TranslationContext build_context(const KnowledgeBase& kb) {
  TranslationContext ctx;
  std::set<int> qs{1};
  for (auto& i : kb.tbox) {
    collect_counts(i.lhs, qs);
    collect_counts(i.rhs, qs);
  }
  ctx.q_values.assign(qs.begin(), qs.end());
  ctx.objects = kb.objects();
  for (auto& base : kb.role_names()) {
    ctx.roles.push_back({base, false, RoleMark::plain});
    ctx.roles.push_back({base, true, RoleMark::plain});
  }
  for (auto& d : kb.roles)
    if (d.rigid) ctx.rigid_roles.push_back(d.name);
  std::set<long> ts;
  for (auto& a : kb.abox) ts.insert(a.timestamp);
  ctx.timestamps.assign(ts.begin(), ts.end());
  return ctx;
}

Q translate_concept(const C& c) {
  switch (c->kind) {
    case CK::Bot:
      return q_false();
    case CK::Top:
      return q_true();
    case CK::Atomic:
      return q_pred(c->name);
    case CK::AtLeast:
      return q_pred(count_pred(c->q, c->role));
    case CK::AtMost:
      return q_not(q_pred(count_pred(c->q + 1, c->role)));
    case CK::Not:
      return q_not(translate_concept(c->a));
    case CK::And:
      return q_and(translate_concept(c->a), translate_concept(c->b));
    case CK::Or:
      return q_or(translate_concept(c->a), translate_concept(c->b));
    case CK::Until:
      return q_until(translate_concept(c->a), translate_concept(c->b));
    case CK::Since:
      return q_since(translate_concept(c->a), translate_concept(c->b));
    case CK::NextF:
      return q_next_f(translate_concept(c->a));
    case CK::NextP:
      return q_next_p(translate_concept(c->a));
    case CK::BoxF:
      return q_box_f(translate_concept(c->a));
    case CK::BoxP:
      return q_box_p(translate_concept(c->a));
    case CK::DiaF:
      return q_dia_f(translate_concept(c->a));
    case CK::DiaP:
      return q_dia_p(translate_concept(c->a));
    case CK::Always:
      return q_always(translate_concept(c->a));
    case CK::Sometime:
      // Somewhere on Z: strictly after some instant strictly before.
      return q_dia_f(q_dia_p(translate_concept(c->a)));
  }
  return q_true();
}

Q tbox_dagger(const std::vector<ConceptInclusion>& tbox) {
  std::vector<Q> out;
  for (auto& i : tbox)
    out.push_back(q_always(
        q_forall(q_impl(translate_concept(i.lhs), translate_concept(i.rhs)))));
  return q_conj(out);
}

Q role_axioms(const TranslationContext& ctx) {
  std::vector<Q> out;
  for (auto& r : ctx.roles) {
    for (size_t i = 0; i + 1 < ctx.q_values.size(); ++i) {
      int q = ctx.q_values[i], qp = ctx.q_values[i + 1];
      out.push_back(q_always(q_forall(
          q_impl(q_pred(count_pred(qp, r)), q_pred(count_pred(q, r))))));
    }
    if (ctx.rigid(r.base)) {
      // A count that holds once holds always, split per direction so the
      // clause shape stays binary.
      for (int q : ctx.q_values) {
        out.push_back(q_always(q_forall(q_impl(
            q_pred(count_pred(q, r)), q_box_f(q_pred(count_pred(q, r)))))));
        out.push_back(q_always(q_forall(q_impl(
            q_pred(count_pred(q, r)), q_box_p(q_pred(count_pred(q, r)))))));
      }
    }
    out.push_back(q_always(q_impl(q_exists(q_pred(count_pred(1, r))),
                                  q_exists(q_pred(count_pred(1, inv(r)))))));
  }
  return q_conj(out);
}

Q abox_dagger(const std::vector<AboxAssertion>& abox,
              const TranslationContext& ctx) {
  // Pairs asserted per role direction and instant, inverse-closed.
  std::map<std::string, std::map<long, std::set<std::pair<std::string,
                                                          std::string>>>>
      slice;
  for (auto& a : abox) {
    if (!a.is_role || !a.positive) continue;
    slice[a.name][a.timestamp].insert({a.obj1, a.obj2});
    slice[a.name + "^-"][a.timestamp].insert({a.obj2, a.obj1});
  }
  // Distinct fillers of obj in the slice at n; rigid roles pool every
  // instant into each slice.
  auto fillers = [&](const std::string& rt, const std::string& base, long n,
                     const std::string& obj) {
    std::set<std::string> out;
    auto it = slice.find(rt);
    if (it == slice.end()) return out;
    for (auto& [m, pairs] : it->second) {
      if (m != n && !ctx.rigid(base)) continue;
      for (auto& [x, y] : pairs)
        if (x == obj) out.insert(y);
    }
    return out;
  };
  std::vector<Q> out;
  std::set<std::string> seen;
  auto add = [&](const Q& f) {
    if (seen.insert(to_string(f)).second) out.push_back(f);
  };
  for (auto& a : abox) {
    if (!a.is_role) {
      Q lit = q_pred(a.name, a.obj1);
      if (!a.positive) lit = q_not(lit);
      add(q_shift(lit, a.timestamp));
      continue;
    }
    Role r{a.name, false, RoleMark::plain};
    if (a.positive) {
      for (int dir = 0; dir < 2; ++dir) {
        const std::string& obj = dir ? a.obj2 : a.obj1;
        Role rr = dir ? inv(r) : r;
        size_t cnt =
            fillers(role_text(rr), a.name, a.timestamp, obj).size();
        int q = 1;
        for (int v : ctx.q_values)
          if ((size_t)v <= cnt) q = v;
        add(q_shift(q_pred(count_pred(q, rr), obj), a.timestamp));
      }
    } else if (fillers(role_text(r), a.name, a.timestamp, a.obj1)
                   .count(a.obj2)) {
      add(q_false());
    }
  }
  return q_conj(out);
}

namespace {

bool has_exists(const Q& f) {
  if (f->kind == QtlK::Exists) return true;
  if (f->a && has_exists(f->a)) return true;
  return f->b && has_exists(f->b);
}

// Destructures G* (not exists x E1:R(x) or exists x E1:R'(x)); returns the
// two predicate names.
bool match_range(const Q& f, std::string& from, std::string& to) {
  if (f->kind != QtlK::Always || f->a->kind != QtlK::Or) return false;
  const Q& l = f->a->a;
  const Q& r = f->a->b;
  if (l->kind != QtlK::Not || l->a->kind != QtlK::Exists ||
      r->kind != QtlK::Exists)
    return false;
  const Q& lp = l->a->a;
  const Q& rp = r->a;
  if (lp->kind != QtlK::Pred || rp->kind != QtlK::Pred || !lp->term.empty() ||
      !rp->term.empty())
    return false;
  from = lp->pred;
  to = rp->pred;
  return true;
}

}  // namespace

Q dequantify(const Q& kdagger) {
  std::vector<Q> out;
  for (auto& c : conjuncts(kdagger)) {
    std::string from, to;
    if (match_range(c, from, to)) {
      // from = E1:R, to = E1:R^- (or the other direction); the flag for a
      // direction says its domain is non-empty, the constant witnesses the
      // domain of the opposite direction at the origin.
      std::string rt = from.substr(3), rt_inv = to.substr(3);
      Q e = q_pred(from);
      Q p = q_prop("@pR/" + rt);
      Q p_inv = q_prop("@pR/" + rt_inv);
      out.push_back(q_always(q_forall(q_impl(e, p))));
      out.push_back(q_always(q_impl(p, q_box_f(p))));
      out.push_back(q_always(q_impl(p, q_box_p(p))));
      out.push_back(q_impl(p_inv, q_pred(from, "@dR/" + rt)));
      continue;
    }
    if (has_exists(c))
      throw std::invalid_argument(
          "dequantify: unexpected existential conjunct " + to_string(c));
    out.push_back(c);
  }
  return q_conj(out);
}

namespace {

ptl::F ground_rec(const Q& f, const std::vector<std::string>& consts,
                  const std::string* subst) {
  using namespace ptl;
  switch (f->kind) {
    case QtlK::False:
      return f_false();
    case QtlK::Pred: {
      std::string term = f->term;
      if (term.empty()) {
        if (!subst)
          throw std::invalid_argument("ground: free variable outside a "
                                      "quantifier in " + to_string(f));
        term = *subst;
      }
      return var(f->pred + "(" + term + ")");
    }
    case QtlK::Prop:
      return var(f->pred);
    case QtlK::Not:
      return f_not(ground_rec(f->a, consts, subst));
    case QtlK::And:
      return f_and(ground_rec(f->a, consts, subst),
                   ground_rec(f->b, consts, subst));
    case QtlK::Or:
      return f_or(ground_rec(f->a, consts, subst),
                  ground_rec(f->b, consts, subst));
    case QtlK::Until:
      return until(ground_rec(f->a, consts, subst),
                   ground_rec(f->b, consts, subst));
    case QtlK::Since:
      return since(ground_rec(f->a, consts, subst),
                   ground_rec(f->b, consts, subst));
    case QtlK::NextF:
      return next_f(ground_rec(f->a, consts, subst));
    case QtlK::NextP:
      return next_p(ground_rec(f->a, consts, subst));
    case QtlK::BoxF:
      return box_f(ground_rec(f->a, consts, subst));
    case QtlK::BoxP:
      return box_p(ground_rec(f->a, consts, subst));
    case QtlK::DiaF:
      return dia_f(ground_rec(f->a, consts, subst));
    case QtlK::DiaP:
      return dia_p(ground_rec(f->a, consts, subst));
    case QtlK::Always:
      return always(ground_rec(f->a, consts, subst));
    case QtlK::Forall: {
      std::vector<F> parts;
      for (auto& c : consts) parts.push_back(ground_rec(f->a, consts, &c));
      return conj(parts);
    }
    case QtlK::Exists:
      throw std::invalid_argument(
          "ground: existential quantifier survives; dequantify first");
  }
  return ptl::f_true();
}

}  // namespace

ptl::F ground(const Q& f, const TranslationContext& ctx) {
  std::vector<std::string> consts = ctx.objects;
  for (auto& r : ctx.roles) consts.push_back("@dR/" + role_text(r));
  // Interpretation domains are never empty: keep one element to quantify
  // over even when the input mentions no object and no role.
  if (consts.empty()) consts.push_back("@d0");
  return ground_rec(f, consts, nullptr);
}

namespace {

bool role_less(const Role& a, const Role& b) {
  return a.base != b.base ? a.base < b.base : a.inverted < b.inverted;
}

void collect_big_counts(const C& c, std::set<std::string>& out) {
  if (c->kind == CK::AtLeast && c->q >= 2) out.insert(c->role.base);
  if (c->kind == CK::AtMost && c->q >= 1) out.insert(c->role.base);
  if (c->a) collect_big_counts(c->a, out);
  if (c->b) collect_big_counts(c->b, out);
}

}  // namespace

KnowledgeBase saturate_role_hierarchy(const KnowledgeBase& kb) {
  KnowledgeBase out = kb;
  out.rbox.clear();
  if (kb.rbox.empty()) return out;

  // Reflexive-transitive closure over both directions of every role.
  std::vector<Role> all;
  for (auto& base : kb.role_names()) {
    all.push_back({base, false, RoleMark::plain});
    all.push_back({base, true, RoleMark::plain});
  }
  auto index = [&](const Role& r) {
    for (size_t i = 0; i < all.size(); ++i)
      if (all[i].base == r.base && all[i].inverted == r.inverted) return i;
    throw std::logic_error("role hierarchy: unknown role");
  };
  size_t n = all.size();
  std::vector<std::vector<bool>> sub(n, std::vector<bool>(n, false));
  for (size_t i = 0; i < n; ++i) sub[i][i] = true;
  for (auto& ri : kb.rbox) {
    sub[index(ri.lhs)][index(ri.rhs)] = true;
    sub[index(inv(ri.lhs))][index(inv(ri.rhs))] = true;
  }
  for (size_t k = 0; k < n; ++k)
    for (size_t i = 0; i < n; ++i)
      if (sub[i][k])
        for (size_t j = 0; j < n; ++j)
          if (sub[k][j]) sub[i][j] = true;

  // Proper super-roles may not sit under a count restriction that needs two
  // or more fillers: closing the assertion box would then under-count.
  std::set<std::string> big;
  for (auto& i : kb.tbox) {
    collect_big_counts(i.lhs, big);
    collect_big_counts(i.rhs, big);
  }
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (sub[i][j] && i != j && big.count(all[j].base))
        throw std::invalid_argument(
            "role hierarchy: super-role " + all[j].base +
            " occurs under a count restriction above one");

  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (sub[i][j] && i != j)
        out.tbox.push_back({at_least(1, all[i]), at_least(1, all[j])});

  std::set<std::string> seen;
  for (auto& a : kb.abox)
    if (a.is_role && a.positive)
      seen.insert(a.name + "|" + a.obj1 + "|" + a.obj2 + "@" +
                  std::to_string(a.timestamp));
  for (auto& a : kb.abox) {
    if (!a.is_role || !a.positive) continue;
    size_t i = index({a.name, false, RoleMark::plain});
    for (size_t j = 0; j < n; ++j) {
      if (!sub[i][j] || i == j) continue;
      AboxAssertion d;
      d.timestamp = a.timestamp;
      d.positive = true;
      d.is_role = true;
      d.name = all[j].base;
      d.obj1 = all[j].inverted ? a.obj2 : a.obj1;
      d.obj2 = all[j].inverted ? a.obj1 : a.obj2;
      std::string key = d.name + "|" + d.obj1 + "|" + d.obj2 + "@" +
                        std::to_string(d.timestamp);
      if (seen.insert(key).second) out.abox.push_back(d);
    }
  }
  return out;
}

namespace {

std::string fnv_hex(const std::string& s) {
  unsigned long long h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  for (int i = 15; i >= 0; --i) {
    buf[i] = "0123456789abcdef"[h & 15];
    h >>= 4;
  }
  return std::string(buf, 8);  // first eight digits are plenty
}

void collect_ptl_conjuncts(const ptl::F& f, std::vector<ptl::F>& out) {
  if (f->op == ptl::Op::And) {
    collect_ptl_conjuncts(f->a, out);
    collect_ptl_conjuncts(f->b, out);
    return;
  }
  out.push_back(f);
}

// A shifted ground literal: net next offset, sign, and the variable.
struct ShiftedLit {
  long shift = 0;
  bool pos = true;
  std::string name;
};

bool match_shifted(const ptl::F& f, ShiftedLit& out) {
  using ptl::Op;
  ptl::F cur = f;
  out = {};
  while (cur->op == Op::NextF || cur->op == Op::NextP) {
    out.shift += cur->op == Op::NextF ? 1 : -1;
    cur = cur->a;
  }
  while (cur->op == Op::Not) {
    out.pos = !out.pos;
    cur = cur->a;
  }
  if (cur->op != Op::Var) return false;
  out.name = cur->name;
  return true;
}

}  // namespace

ptl::F lower_abox_markers(const ptl::F& f, Engine target) {
  using namespace ptl;
  if (target != Engine::krom && target != Engine::horn) return f;
  std::vector<F> cs;
  collect_ptl_conjuncts(f, cs);
  std::vector<F> out;
  for (auto& c : cs) {
    ShiftedLit l;
    if (!match_shifted(c, l) || l.shift == 0 ||
        (target == Engine::horn && l.pos)) {
      out.push_back(c);
      continue;
    }
    std::string h = "@H/" + std::to_string(l.shift) + "/" +
                    fnv_hex((l.pos ? "+" : "-") + l.name);
    F lit = l.pos ? var(l.name) : f_not(var(l.name));
    if (target == Engine::horn) {
      // Fact pinning the marker at the shifted instant, plus a guard that
      // bars the literal's variable wherever the marker holds.
      out.push_back(next_n(var(h), l.shift));
      out.push_back(always(f_or(f_not(var(h)), f_not(var(l.name)))));
      continue;
    }
    // Nested strict diamonds reach the marker at exactly the shift: it
    // occurs at distance >= |n|, not at distance >= |n|+1, and never twice.
    auto dia_tower = [&](long k) {
      F g = var(h);
      for (long i = 0; i < k; ++i) g = l.shift > 0 ? dia_f(g) : dia_p(g);
      return g;
    };
    long n = l.shift > 0 ? l.shift : -l.shift;
    out.push_back(dia_tower(n));
    out.push_back(f_not(dia_tower(n + 1)));
    out.push_back(always(f_or(f_not(var(h)), f_not(dia_f(var(h))))));
    out.push_back(always(f_or(f_not(var(h)), lit)));
  }
  return conj(out);
}

Translation translate_kb(const KnowledgeBase& kb, Engine target) {
  Translation t;
  t.saturated = saturate_role_hierarchy(kb);
  t.ctx = build_context(t.saturated);
  t.kdagger = q_conj({tbox_dagger(t.saturated.tbox), role_axioms(t.ctx),
                      abox_dagger(t.saturated.abox, t.ctx)});
  t.kddagger = dequantify(t.kdagger);
  t.grounded = lower_abox_markers(ground(t.kddagger, t.ctx), target);
  return t;
}

namespace {

// Renames inner temporal towers so every box applies to a plain variable,
// which the horn engine requires; definitions come back as global
// biconditional clauses.
struct TowerFlattener {
  std::vector<ptl::F> defs;
  std::map<std::string, ptl::F> memo;
  int fresh = 0;

  ptl::F name(const ptl::F& g) {
    std::string key = ptl::to_string(g);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    ptl::F v = ptl::var("@t/" + std::to_string(fresh++));
    defs.push_back(ptl::always(ptl::f_or(ptl::f_not(v), g)));
    defs.push_back(ptl::always(ptl::f_or(ptl::f_not(g), v)));
    return memo[key] = v;
  }

  ptl::F tower(const ptl::F& f) {
    using ptl::Op;
    switch (f->op) {
      case Op::BoxF:
      case Op::BoxP:
      case Op::NextF:
      case Op::NextP:
      case Op::DiaF:
      case Op::DiaP: {
        ptl::F c = tower(f->a);
        if (c->op != Op::Var) c = name(c);
        auto n = std::make_shared<ptl::Formula>(*f);
        n->a = c;
        return n;
      }
      default:
        return f;
    }
  }

  ptl::F clause(const ptl::F& f) {
    using ptl::Op;
    switch (f->op) {
      case Op::Or:
        return ptl::f_or(clause(f->a), clause(f->b));
      case Op::And:
        return ptl::f_and(clause(f->a), clause(f->b));
      case Op::Not:
        return ptl::f_not(clause(f->a));
      case Op::Var:
      case Op::False:
        return f;
      default:
        return tower(f);
    }
  }

  ptl::F run(const ptl::F& f) {
    using ptl::Op;
    std::vector<ptl::F> cs;
    collect_ptl_conjuncts(f, cs);
    std::vector<ptl::F> out;
    for (auto& c : cs) {
      if ((c->op == Op::BoxF && c->a->op == Op::BoxP) ||
          (c->op == Op::BoxP && c->a->op == Op::BoxF)) {
        out.push_back(ptl::always(clause(c->a->a)));
        continue;
      }
      ShiftedLit l;
      if (match_shifted(c, l)) {
        out.push_back(c);  // shifted facts are consumed as-is
        continue;
      }
      out.push_back(clause(c));
    }
    for (auto& d : defs) out.push_back(d);
    return ptl::conj(out);
  }
};

}  // namespace

PipelineVerdict decide_translated(const KnowledgeBase& kb,
                                  const ptl::EngineLimits& lim) {
  PipelineVerdict v;
  v.profile = classify_fragment(kb);
  v.route = route(v.profile);
  if (!v.route.supported) {
    v.note = v.route.reason;
    return v;
  }
  if (v.route.engine == Engine::quasimodel) {
    v.note = "temporalised roles take the quasimodel engine";
    return v;
  }
  Translation t = translate_kb(kb, v.route.engine);
  ptl::F g = t.grounded;
  if (v.route.engine == Engine::horn) g = TowerFlattener{}.run(g);
  v.checked = g;
  auto run_generic = [&]() {
    v.checked = g;
    ptl::EngineResult r = ptl::decide_generic(g, lim);
    v.decided = r.outcome != ptl::Outcome::ResourceExceeded;
    v.outcome = r.outcome;
    v.witness = r.witness;
    if (!r.note.empty()) v.note = r.note;
  };
  try {
    switch (v.route.engine) {
      case Engine::krom: {
        ptl::ClausalResult r = ptl::decide_krom(g, lim);
        v.decided = r.outcome != ptl::Outcome::ResourceExceeded;
        v.outcome = r.outcome;
        v.witness = r.witness;
        if (!r.note.empty()) v.note = r.note;
        break;
      }
      case Engine::horn: {
        ptl::ClausalResult r = ptl::decide_horn(g, lim);
        v.decided = r.outcome != ptl::Outcome::ResourceExceeded;
        v.outcome = r.outcome;
        v.witness = r.witness;
        if (!r.note.empty()) v.note = r.note;
        break;
      }
      default:
        run_generic();
        break;
    }
  } catch (const std::invalid_argument& e) {
    // The routed engine rejected the clause shape; the complete engine
    // always applies.
    g = t.grounded;
    run_generic();
    v.note = std::string("fell back to the generic engine: ") + e.what();
  }
  return v;
}

}  // namespace tdlite::dl
