// Reduction of a knowledge base to a propositional temporal formula: concepts
// become unary predicates over a single variable, roles become families of
// successor-count predicates tied together by saturation, rigidity and range
// axioms, the assertion box is sliced per instant, the remaining existential
// quantifiers are replaced by witness constants, and the universal variable is
// instantiated over all constants.
#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tdlite/dl/ast.hpp"
#include "tdlite/ptl/formula.hpp"
#include "tdlite/ptl/generic_engine.hpp"
#include "tdlite/ptl/upword.hpp"

namespace tdlite::dl {

// One-variable first-order temporal formulas. A predicate atom applies to
// either the single variable (empty term) or a named constant; propositional
// atoms have no term.
enum class QtlK {
  False,
  Pred,
  Prop,
  Not,
  And,
  Or,
  NextF,
  NextP,
  BoxF,
  BoxP,
  DiaF,
  DiaP,
  Until,
  Since,
  Always,  // holds at every instant of Z
  Forall,
  Exists,
};

struct QtlNode;
using Q = std::shared_ptr<const QtlNode>;

struct QtlNode {
  QtlK kind;
  std::string pred;  // Pred: predicate name; Prop: variable name
  std::string term;  // Pred only: constant name, empty for the free variable
  Q a, b;
};

Q q_false();
Q q_true();
Q q_pred(std::string pred, std::string term = "");
Q q_prop(std::string name);
Q q_not(Q a);
Q q_and(Q a, Q b);
Q q_or(Q a, Q b);
Q q_impl(Q a, Q b);
Q q_next_f(Q a);
Q q_next_p(Q a);
Q q_box_f(Q a);
Q q_box_p(Q a);
Q q_dia_f(Q a);
Q q_dia_p(Q a);
Q q_until(Q a, Q b);
Q q_since(Q a, Q b);
Q q_always(Q a);
Q q_forall(Q a);
Q q_exists(Q a);
Q q_conj(const std::vector<Q>& fs);  // empty -> true
Q q_shift(Q a, long n);              // n-fold next, future or past

std::string to_string(const Q& f);
// Top-level conjuncts, left to right.
std::vector<Q> conjuncts(const Q& f);

// Name of the successor-count predicate for "at least q distinct R-fillers";
// the role must be unmarked.
std::string count_pred(int q, const Role& r);

struct TranslationContext {
  std::vector<int> q_values;             // counts in the TBox plus 1, sorted
  std::vector<std::string> objects;      // assertion-box object names, sorted
  std::vector<Role> roles;               // unmarked, closed under inverse
  std::vector<std::string> rigid_roles;  // base names
  std::vector<long> timestamps;          // assertion instants, sorted
  bool rigid(const std::string& base) const;
};
TranslationContext build_context(const KnowledgeBase& kb);

// Structural map from concepts to one-variable formulas; commutes with every
// Boolean and temporal operator. Throws std::invalid_argument on a marked
// role, which this reduction does not cover.
Q translate_concept(const C& c);

// Conjunction of G* forall x (lhs -> rhs) over the inclusions.
Q tbox_dagger(const std::vector<ConceptInclusion>& tbox);

// Successor-count bookkeeping: monotonicity between consecutive counts,
// time-invariance for rigid roles, and range non-emptiness (the only
// existentially quantified conjuncts).
Q role_axioms(const TranslationContext& ctx);

// Shifted concept literals, one successor-count atom per positive role
// assertion (rigid roles pool every instant into each slice), and a falsum
// conjunct per direct positive/negative clash.
Q abox_dagger(const std::vector<AboxAssertion>& abox,
              const TranslationContext& ctx);

// Replaces each range conjunct exists x E1R(x) -> exists x E1R^-(x) by an
// existential-free pair using a fresh flag @pR/<role> and witness constant
// @dR/<role>. Every other conjunct passes through unchanged.
Q dequantify(const Q& kdagger);

// Instantiates the universal variable over the objects and the witness
// constants and turns atoms into propositions named pred(term). Throws
// std::invalid_argument if an existential quantifier remains.
ptl::F ground(const Q& f, const TranslationContext& ctx);

// Closes assertion-box role assertions and the TBox under the
// reflexive-transitive role hierarchy (and inverses), then drops the
// hierarchy. Throws std::invalid_argument when a super-role occurs under a
// count restriction needing two or more fillers, where this closure is
// unsound.
KnowledgeBase saturate_role_hierarchy(const KnowledgeBase& kb);

// Rewrites shifted ground facts for engines that do not consume them
// natively. For the binary-clause engine every shifted literal becomes a
// diamond-pinned marker holding at exactly one instant; for the horn engine
// shifted negative literals become a marker fact plus a headless guard
// clause; other targets pass through.
ptl::F lower_abox_markers(const ptl::F& f, Engine target);

struct Translation {
  KnowledgeBase saturated;
  TranslationContext ctx;
  Q kdagger;    // conjunction of TBox, role and assertion translations
  Q kddagger;   // existential-free form
  ptl::F grounded;  // propositional form, markers lowered for the target
};
Translation translate_kb(const KnowledgeBase& kb, Engine target);

struct PipelineVerdict {
  FragmentProfile profile;
  RouteResult route;
  bool decided = false;
  ptl::Outcome outcome = ptl::Outcome::Unsat;
  std::optional<ptl::UPWord> witness;
  ptl::F checked;  // formula the engine decided; witnesses satisfy it
  std::string note;
};

// classify -> route -> translate -> engine, for inputs routed to the
// propositional engines. Temporalised-role inputs come back undecided with
// the route naming the quasimodel engine.
PipelineVerdict decide_translated(
    const KnowledgeBase& kb,
    const ptl::EngineLimits& lim = ptl::default_limits());

}  // namespace tdlite::dl
