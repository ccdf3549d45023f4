#include "tdlite/dl/ast.hpp"

#include <algorithm>
#include <set>

namespace tdlite::dl {

Role inv(Role r) {
  r.inverted = !r.inverted;
  return r;
}

Role role_box(Role r) {
  if (r.mark == RoleMark::plain) r.mark = RoleMark::always;
  return r;
}

Role role_dia(Role r) {
  if (r.mark == RoleMark::plain) r.mark = RoleMark::sometime;
  return r;
}

bool equal(const Role& x, const Role& y) {
  return x.base == y.base && x.inverted == y.inverted && x.mark == y.mark;
}

std::string to_string(const Role& r) {
  std::string s;
  if (r.mark == RoleMark::always) s += "box ";
  if (r.mark == RoleMark::sometime) s += "dia ";
  s += r.base;
  if (r.inverted) s += "^-";
  return s;
}

namespace {

C mk(CK k) {
  auto n = std::make_shared<ConceptNode>();
  n->kind = k;
  return n;
}

C mk1(CK k, C a) {
  auto n = std::make_shared<ConceptNode>();
  n->kind = k;
  n->a = std::move(a);
  return n;
}

C mk2(CK k, C a, C b) {
  auto n = std::make_shared<ConceptNode>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

}  // namespace

C c_bot() { return mk(CK::Bot); }
C c_top() { return mk(CK::Top); }

C atomic(std::string name) {
  auto n = std::make_shared<ConceptNode>();
  n->kind = CK::Atomic;
  n->name = std::move(name);
  return n;
}

C at_least(int q, Role r) {
  auto n = std::make_shared<ConceptNode>();
  n->kind = CK::AtLeast;
  n->q = q;
  n->role = std::move(r);
  return n;
}

C at_most(int q, Role r) {
  auto n = std::make_shared<ConceptNode>();
  n->kind = CK::AtMost;
  n->q = q;
  n->role = std::move(r);
  return n;
}

C exists(Role r) { return at_least(1, std::move(r)); }

C c_not(C a) { return mk1(CK::Not, std::move(a)); }
C c_and(C a, C b) { return mk2(CK::And, std::move(a), std::move(b)); }
C c_or(C a, C b) { return mk2(CK::Or, std::move(a), std::move(b)); }
C c_until(C a, C b) { return mk2(CK::Until, std::move(a), std::move(b)); }
C c_since(C a, C b) { return mk2(CK::Since, std::move(a), std::move(b)); }
C c_next_f(C a) { return mk1(CK::NextF, std::move(a)); }
C c_next_p(C a) { return mk1(CK::NextP, std::move(a)); }
C c_box_f(C a) { return mk1(CK::BoxF, std::move(a)); }
C c_box_p(C a) { return mk1(CK::BoxP, std::move(a)); }
C c_dia_f(C a) { return mk1(CK::DiaF, std::move(a)); }
C c_dia_p(C a) { return mk1(CK::DiaP, std::move(a)); }
C c_always(C a) { return mk1(CK::Always, std::move(a)); }
C c_sometime(C a) { return mk1(CK::Sometime, std::move(a)); }

bool equal(const C& x, const C& y) {
  if (x == y) return true;
  if (!x || !y || x->kind != y->kind) return false;
  switch (x->kind) {
    case CK::Bot:
    case CK::Top:
      return true;
    case CK::Atomic:
      return x->name == y->name;
    case CK::AtLeast:
    case CK::AtMost:
      return x->q == y->q && equal(x->role, y->role);
    default:
      return equal(x->a, y->a) && (x->b == nullptr) == (y->b == nullptr) &&
             (!x->b || equal(x->b, y->b));
  }
}

std::string to_string(const C& c) {
  switch (c->kind) {
    case CK::Bot:
      return "bot";
    case CK::Top:
      return "top";
    case CK::Atomic:
      return c->name;
    case CK::AtLeast:
      return ">= " + std::to_string(c->q) + " " + to_string(c->role);
    case CK::AtMost:
      return "=< " + std::to_string(c->q) + " " + to_string(c->role);
    case CK::Not:
      return "not " + to_string(c->a);
    case CK::And:
      return "(" + to_string(c->a) + " and " + to_string(c->b) + ")";
    case CK::Or:
      return "(" + to_string(c->a) + " or " + to_string(c->b) + ")";
    case CK::Until:
      return "(" + to_string(c->a) + " U " + to_string(c->b) + ")";
    case CK::Since:
      return "(" + to_string(c->a) + " S " + to_string(c->b) + ")";
    case CK::NextF:
      return "X+ " + to_string(c->a);
    case CK::NextP:
      return "X- " + to_string(c->a);
    case CK::BoxF:
      return "G+ " + to_string(c->a);
    case CK::BoxP:
      return "G- " + to_string(c->a);
    case CK::DiaF:
      return "F+ " + to_string(c->a);
    case CK::DiaP:
      return "F- " + to_string(c->a);
    case CK::Always:
      return "G* " + to_string(c->a);
    case CK::Sometime:
      return "F* " + to_string(c->a);
  }
  return "?";
}

int node_count(const C& c) {
  int n = 1;
  if (c->a) n += node_count(c->a);
  if (c->b) n += node_count(c->b);
  return n;
}

C elaborate_sugar(const C& c) {
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
      return c_not(elaborate_sugar(c->a));
    case CK::And:
      return c_and(elaborate_sugar(c->a), elaborate_sugar(c->b));
    case CK::Or:
      return c_not(c_and(c_not(elaborate_sugar(c->a)),
                         c_not(elaborate_sugar(c->b))));
    case CK::Until:
      return c_until(elaborate_sugar(c->a), elaborate_sugar(c->b));
    case CK::Since:
      return c_since(elaborate_sugar(c->a), elaborate_sugar(c->b));
    case CK::NextF:
      return c_until(c_bot(), elaborate_sugar(c->a));
    case CK::NextP:
      return c_since(c_bot(), elaborate_sugar(c->a));
    case CK::DiaF:
      return c_until(c_not(c_bot()), elaborate_sugar(c->a));
    case CK::DiaP:
      return c_since(c_not(c_bot()), elaborate_sugar(c->a));
    case CK::BoxF:
      return c_not(c_until(c_not(c_bot()), c_not(elaborate_sugar(c->a))));
    case CK::BoxP:
      return c_not(c_since(c_not(c_bot()), c_not(elaborate_sugar(c->a))));
    case CK::Always:
      // Every instant of Z: no instant anywhere fails the concept.
      return c_not(c_until(c_not(c_bot()),
                           c_since(c_not(c_bot()),
                                   c_not(elaborate_sugar(c->a)))));
    case CK::Sometime:
      return c_until(c_not(c_bot()),
                     c_since(c_not(c_bot()), elaborate_sugar(c->a)));
  }
  return c;
}

bool KnowledgeBase::rigid(const std::string& role) const {
  for (auto& d : roles)
    if (d.name == role) return d.rigid;
  return false;
}

namespace {

void collect_roles(const C& c, std::set<std::string>& out) {
  if (c->kind == CK::AtLeast || c->kind == CK::AtMost) out.insert(c->role.base);
  if (c->a) collect_roles(c->a, out);
  if (c->b) collect_roles(c->b, out);
}

void collect_concepts(const C& c, std::set<std::string>& out) {
  if (c->kind == CK::Atomic) out.insert(c->name);
  if (c->a) collect_concepts(c->a, out);
  if (c->b) collect_concepts(c->b, out);
}

}  // namespace

std::vector<std::string> KnowledgeBase::objects() const {
  std::set<std::string> s;
  for (auto& a : abox) {
    s.insert(a.obj1);
    if (a.is_role) s.insert(a.obj2);
  }
  return {s.begin(), s.end()};
}

std::vector<std::string> KnowledgeBase::concept_names() const {
  std::set<std::string> s;
  for (auto& i : tbox) {
    collect_concepts(i.lhs, s);
    collect_concepts(i.rhs, s);
  }
  for (auto& a : abox)
    if (!a.is_role) s.insert(a.name);
  return {s.begin(), s.end()};
}

std::vector<std::string> KnowledgeBase::role_names() const {
  std::set<std::string> s;
  for (auto& d : roles) s.insert(d.name);
  for (auto& i : tbox) {
    collect_roles(i.lhs, s);
    collect_roles(i.rhs, s);
  }
  for (auto& i : rbox) {
    s.insert(i.lhs.base);
    s.insert(i.rhs.base);
  }
  for (auto& a : abox)
    if (a.is_role) s.insert(a.name);
  return {s.begin(), s.end()};
}

}  // namespace tdlite::dl
