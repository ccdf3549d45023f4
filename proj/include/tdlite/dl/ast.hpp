// Object language for temporal DL-Lite knowledge bases: concepts and roles
// with temporal operators, TBox/ABox containers, the fragment classifier,
// and the router that picks a decision engine per fragment.
#pragma once

#include <memory>
#include <string>
#include <vector>

namespace tdlite::dl {

// Temporal marker on a role: holds now, at every instant, or at some instant.
enum class RoleMark { plain, always, sometime };

struct Role {
  std::string base;
  bool inverted = false;
  RoleMark mark = RoleMark::plain;
};

Role inv(Role r);
// Marker application with absorption: a marked role is time-invariant, so a
// second marker has no effect and the inner one is kept.
Role role_box(Role r);
Role role_dia(Role r);
bool equal(const Role& x, const Role& y);
std::string to_string(const Role& r);

enum class CK {
  Bot,
  Top,
  Atomic,
  AtLeast,   // >= q R
  AtMost,    // =< q R, sugar for not(>= q+1 R)
  Not,
  And,
  Or,
  Until,     // strict
  Since,     // strict
  NextF,
  NextP,
  BoxF,
  BoxP,
  DiaF,
  DiaP,
  Always,    // G*: every instant
  Sometime,  // F*: some instant
};

struct ConceptNode;
using C = std::shared_ptr<const ConceptNode>;

struct ConceptNode {
  CK kind;
  std::string name;  // Atomic only
  int q = 0;         // AtLeast/AtMost
  Role role;         // AtLeast/AtMost
  C a, b;            // children (b used by And/Or/Until/Since)
};

C c_bot();
C c_top();
C atomic(std::string name);
C at_least(int q, Role r);
C at_most(int q, Role r);
C exists(Role r);  // >= 1 R
C c_not(C a);
C c_and(C a, C b);
C c_or(C a, C b);
C c_until(C a, C b);
C c_since(C a, C b);
C c_next_f(C a);
C c_next_p(C a);
C c_box_f(C a);
C c_box_p(C a);
C c_dia_f(C a);
C c_dia_p(C a);
C c_always(C a);
C c_sometime(C a);

bool equal(const C& x, const C& y);
std::string to_string(const C& c);
int node_count(const C& c);

// Rewrites every derived operator into the Bot/Atomic/AtLeast/Not/And/
// Until/Since core; idempotent and size-linear.
C elaborate_sugar(const C& c);

struct RoleDecl {
  std::string name;
  bool rigid = false;
};

struct ConceptInclusion {
  C lhs, rhs;
};

// Role inclusions carry no temporal markers on either side.
struct RoleInclusion {
  Role lhs, rhs;
};

struct AboxAssertion {
  long timestamp = 0;
  bool positive = true;
  bool is_role = false;
  std::string name;
  std::string obj1, obj2;  // obj2 used by role assertions
};

struct KnowledgeBase {
  std::vector<RoleDecl> roles;
  std::vector<ConceptInclusion> tbox;
  std::vector<RoleInclusion> rbox;
  std::vector<AboxAssertion> abox;

  bool rigid(const std::string& role) const;
  // All object names mentioned, sorted.
  std::vector<std::string> objects() const;
  // All atomic concept names mentioned, sorted.
  std::vector<std::string> concept_names() const;
  // All role base names mentioned (declared or used), sorted.
  std::vector<std::string> role_names() const;
};

enum class BoolLevel { core, krom, full };
enum class OpSet { box_only, fp, fpx, us };
enum class RoleIncl { none, restricted, unrestricted };

struct FragmentProfile {
  BoolLevel level = BoolLevel::core;
  OpSet ops = OpSet::box_only;
  bool temporal_roles = false;
  RoleIncl role_inclusions = RoleIncl::none;
};
std::string to_string(const FragmentProfile& p);

// Least fragment covering the KB, read off the surface syntax (sugar is
// inspected directly; inclusion shapes decide the boolean level).
FragmentProfile classify_fragment(const KnowledgeBase& kb);

enum class Engine { generic, krom, horn, quasimodel };
std::string to_string(Engine e);

struct RouteResult {
  bool supported = true;
  Engine engine = Engine::generic;
  // Human-readable grounds for the choice; for unsupported combinations it
  // names both offending feature classes.
  std::string reason;
};

// Total and deterministic engine selection per fragment profile.
RouteResult route(const FragmentProfile& p);

// Subsumption lhs below rhs under the TBox, turned into a satisfiability
// question: the returned KB (fresh marker concept asserted of a fresh
// object, included in lhs and in not-rhs) is unsatisfiable iff the
// subsumption holds.
KnowledgeBase reduce_subsumption(const std::vector<ConceptInclusion>& tbox,
                                 const C& lhs, const C& rhs);

}  // namespace tdlite::dl
