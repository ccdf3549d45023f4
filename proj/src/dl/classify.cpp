#include <algorithm>
#include <set>

#include "tdlite/dl/ast.hpp"

namespace tdlite::dl {

namespace {

bool is_temporal_op(CK k) {
  switch (k) {
    case CK::Until:
    case CK::Since:
    case CK::NextF:
    case CK::NextP:
    case CK::BoxF:
    case CK::BoxP:
    case CK::DiaF:
    case CK::DiaP:
    case CK::Always:
    case CK::Sometime:
      return true;
    default:
      return false;
  }
}

OpSet op_class(CK k) {
  switch (k) {
    case CK::Until:
    case CK::Since:
      return OpSet::us;
    case CK::NextF:
    case CK::NextP:
      return OpSet::fpx;
    case CK::BoxF:
    case CK::BoxP:
    case CK::DiaF:
    case CK::DiaP:
      return OpSet::fp;
    default:
      return OpSet::box_only;
  }
}

void scan_ops(const C& c, OpSet& ops, bool& temp_roles) {
  if (is_temporal_op(c->kind)) ops = std::max(ops, op_class(c->kind));
  if ((c->kind == CK::AtLeast || c->kind == CK::AtMost) &&
      c->role.mark != RoleMark::plain)
    temp_roles = true;
  if (c->a) scan_ops(c->a, ops, temp_roles);
  if (c->b) scan_ops(c->b, ops, temp_roles);
}

// A temporal concept of the sub-boolean grammars: a tower of unary temporal
// operators over bot, an atom, or a number restriction. Diamond towers are
// reported separately since the core shapes cannot express them.
bool is_tower(const C& c, bool& has_dia) {
  switch (c->kind) {
    case CK::Bot:
    case CK::Atomic:
    case CK::AtLeast:
      return true;
    case CK::DiaF:
    case CK::DiaP:
    case CK::Sometime:
      has_dia = true;
      return is_tower(c->a, has_dia);
    case CK::NextF:
    case CK::NextP:
    case CK::BoxF:
    case CK::BoxP:
    case CK::Always:
      return is_tower(c->a, has_dia);
    case CK::Until:
    case CK::Since:
      // In the until/since language a binary operator over two towers is
      // still a clause literal; bot-until and bot-since are its next-time
      // operators in particular.
      return is_tower(c->a, has_dia) && is_tower(c->b, has_dia);
    default:
      return false;
  }
}

// Classifies one inclusion as the least sub-boolean shape covering it.
BoolLevel inclusion_level(const ConceptInclusion& inc) {
  const C& l = inc.lhs;
  const C& r = inc.rhs;
  bool dia = false;
  // A side is a positive tower or a negated tower; at-most restrictions are
  // negated at-least towers.
  auto side = [&](const C& c, bool& negated) {
    negated = false;
    if (is_tower(c, dia)) return true;
    negated = true;
    if (c->kind == CK::AtMost) return true;
    return c->kind == CK::Not && is_tower(c->a, dia);
  };
  bool nl = false, nr = false;
  // Disjointness written as a two-tower conjunction below bot.
  if (l->kind == CK::And && r->kind == CK::Bot && is_tower(l->a, dia) &&
      is_tower(l->b, dia))
    return dia ? BoolLevel::krom : BoolLevel::core;
  if (!side(l, nl) || !side(r, nr)) return BoolLevel::full;
  // The binary-clause shapes: D1 below D2, D1 below not D2, not D1 below D2.
  if (nl && nr) return BoolLevel::full;
  // Diamond towers and negated left sides need the contrapositive trick,
  // which is unavailable without left-hand negation.
  if (dia || nl) return BoolLevel::krom;
  return BoolLevel::core;
}

}  // namespace

FragmentProfile classify_fragment(const KnowledgeBase& kb) {
  FragmentProfile p;
  for (auto& inc : kb.tbox) {
    scan_ops(inc.lhs, p.ops, p.temporal_roles);
    scan_ops(inc.rhs, p.ops, p.temporal_roles);
    p.level = std::max(p.level, inclusion_level(inc));
  }
  if (!kb.rbox.empty()) {
    // Side condition: no role may appear both under some role inclusion's
    // right-hand side and inside a >= q restriction with q >= 2.
    std::set<std::string> super;
    for (auto& ri : kb.rbox) super.insert(ri.rhs.base);
    bool violated = false;
    std::set<std::string> big;
    auto scan_big = [&](const C& c, auto&& self) -> void {
      if (c->kind == CK::AtLeast && c->q >= 2) big.insert(c->role.base);
      if (c->kind == CK::AtMost && c->q >= 1) big.insert(c->role.base);
      if (c->a) self(c->a, self);
      if (c->b) self(c->b, self);
    };
    for (auto& inc : kb.tbox) {
      scan_big(inc.lhs, scan_big);
      scan_big(inc.rhs, scan_big);
    }
    for (auto& r : big)
      if (super.count(r)) violated = true;
    p.role_inclusions = violated ? RoleIncl::unrestricted : RoleIncl::restricted;
  }
  return p;
}

std::string to_string(Engine e) {
  switch (e) {
    case Engine::generic:
      return "generic";
    case Engine::krom:
      return "krom";
    case Engine::horn:
      return "horn";
    case Engine::quasimodel:
      return "quasimodel";
  }
  return "?";
}

std::string to_string(const FragmentProfile& p) {
  std::string s;
  s += p.level == BoolLevel::core  ? "core"
       : p.level == BoolLevel::krom ? "krom"
                                     : "bool";
  s += p.ops == OpSet::box_only ? "/box"
       : p.ops == OpSet::fp      ? "/FP"
       : p.ops == OpSet::fpx     ? "/FPX"
                                  : "/US";
  if (p.temporal_roles) s += "/temporal-roles";
  if (p.role_inclusions == RoleIncl::restricted) s += "/role-incl";
  if (p.role_inclusions == RoleIncl::unrestricted) s += "/role-incl-unrestricted";
  return s;
}

RouteResult route(const FragmentProfile& p) {
  RouteResult r;
  if (p.temporal_roles && p.ops != OpSet::box_only) {
    r.supported = false;
    r.reason =
        "undecidable combination: temporalised role (lifespan-style "
        "constraint) together with a next/eventuality concept operator";
    return r;
  }
  if (p.temporal_roles) {
    if (p.role_inclusions != RoleIncl::none) {
      r.supported = false;
      r.reason = "role inclusions together with temporalised roles";
      return r;
    }
    r.engine = Engine::quasimodel;
    r.reason = "temporalised roles with undirected-box concepts";
    return r;
  }
  if (p.role_inclusions == RoleIncl::unrestricted) {
    r.supported = false;
    r.reason =
        "role inclusion hierarchy lacking the number-restriction side "
        "condition";
    return r;
  }
  if (p.level == BoolLevel::full || p.ops == OpSet::us) {
    r.engine = Engine::generic;
    r.reason = "boolean inclusions or until/since operators";
    return r;
  }
  if (p.level == BoolLevel::core && p.ops == OpSet::fp) {
    r.engine = Engine::horn;
    r.reason = "core inclusions with box operators only";
    return r;
  }
  r.engine = Engine::krom;
  r.reason = "binary-clause inclusions with box/next operators";
  return r;
}

KnowledgeBase reduce_subsumption(const std::vector<ConceptInclusion>& tbox,
                                 const C& lhs, const C& rhs) {
  KnowledgeBase kb;
  kb.tbox = tbox;
  C probe = atomic("_subs");
  kb.tbox.push_back({probe, lhs});
  kb.tbox.push_back({probe, c_not(rhs)});
  AboxAssertion a;
  a.name = "_subs";
  a.obj1 = "_o";
  kb.abox.push_back(a);
  return kb;
}

}  // namespace tdlite::dl
