#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "tdlite/ptl/eval.hpp"
#include "tdlite/ptl/generic_engine.hpp"
#include "tdlite/ptl/snf.hpp"

using namespace tdlite::ptl;

TEST_CASE("until yields the unfolding clauses plus one eventuality") {
  SnfClauseSet s = to_snf(until(var("p"), var("q")));
  CHECK(s.init.size() == 1);
  CHECK(s.init[0].size() == 1);
  CHECK(s.step.size() == 4);
  REQUIRE(s.ev.size() == 1);
  CHECK(s.ev[0].future);
  CHECK(s.ev[0].lit.var == "q");
  CHECK(s.ev[0].lit.pos);
}

TEST_CASE("since mirrors into a past eventuality") {
  SnfClauseSet s = to_snf(since(var("p"), var("q")));
  CHECK(s.step.size() == 4);
  REQUIRE(s.ev.size() == 1);
  CHECK_FALSE(s.ev[0].future);
  CHECK(s.ev[0].lit.var == "q");
}

TEST_CASE("propositional inputs produce initial clauses only") {
  F f = f_or(f_and(var("p"), f_not(var("q"))), var("r"));
  SnfClauseSet s = to_snf(f);
  CHECK(s.step.empty());
  CHECK(s.ev.empty());
  CHECK_FALSE(s.init.empty());
  CHECK(decide_generic(s.to_formula()).outcome == Outcome::Sat);
  SnfClauseSet u = to_snf(f_and(var("p"), f_not(var("p"))));
  CHECK(u.step.empty());
  CHECK(decide_generic(u.to_formula()).outcome == Outcome::Unsat);
}

TEST_CASE("text format round-trips") {
  F f = f_and(until(var("p"), var("q")),
              f_or(box_p(var("p")), next_p(f_not(var("q")))));
  SnfClauseSet s = to_snf(f);
  std::string text = s.to_text();
  SnfClauseSet r = snf_from_text(text);
  CHECK(r.to_text() == text);
  CHECK(r.init.size() == s.init.size());
  CHECK(r.step.size() == s.step.size());
  CHECK(r.ev.size() == s.ev.size());
  CHECK(equal(r.to_formula(), s.to_formula()));
}

TEST_CASE("flatten renames and shifts past next") {
  // Operator-free inputs come back unchanged.
  FlatResult id = flatten(var("p"));
  CHECK(id.phi.empty());
  CHECK(to_string(id.psi) == "p");

  FlatResult fr = flatten(box_f(next_p(var("p"))));
  CHECK(to_string(fr.psi)[0] == '_');
  // Every definition carries at most one temporal operator, none of them X-.
  for (auto& d : fr.phi) {
    CHECK(temporal_count(closure(d)) <= 1);
    for (auto& item : closure(d)) CHECK(item->op != Op::NextP);
  }
}

TEST_CASE("surrogates are shared and boxes only") {
  std::vector<F> phi = {iff(var("x"), box_f(var("p"))),
                        iff(var("y"), f_or(box_f(var("p")), box_p(var("q")))),
                        iff(var("z"), dia_f(var("p")))};
  SurrogateResult sr = introduce_surrogates(phi);
  CHECK(sr.table.size() == 2);  // G+p shared between x and y
  CHECK(sr.links.size() == 2);
  for (auto& f : sr.phi)
    for (auto& item : closure(f)) {
      CHECK(item->op != Op::BoxF);
      CHECK(item->op != Op::BoxP);
    }
  // Box-free input is untouched.
  std::vector<F> none = {iff(var("z"), dia_f(var("p")))};
  SurrogateResult empty = introduce_surrogates(none);
  CHECK(empty.table.empty());
  CHECK(equal(empty.phi[0], none[0]));
}

static F random_formula(std::mt19937& rng, int depth,
                        const std::vector<std::string>& vars) {
  std::uniform_int_distribution<int> pick(0, 11);
  if (depth == 0 || pick(rng) == 0) {
    std::uniform_int_distribution<int> pv(0, (int)vars.size() - 1);
    return var(vars[pv(rng)]);
  }
  switch (pick(rng)) {
    case 1: return f_not(random_formula(rng, depth - 1, vars));
    case 2: return f_and(random_formula(rng, depth - 1, vars),
                         random_formula(rng, depth - 1, vars));
    case 3: return f_or(random_formula(rng, depth - 1, vars),
                        random_formula(rng, depth - 1, vars));
    case 4: return next_f(random_formula(rng, depth - 1, vars));
    case 5: return next_p(random_formula(rng, depth - 1, vars));
    case 6: return until(random_formula(rng, depth - 1, vars),
                         random_formula(rng, depth - 1, vars));
    case 7: return since(random_formula(rng, depth - 1, vars),
                         random_formula(rng, depth - 1, vars));
    case 8: return box_f(random_formula(rng, depth - 1, vars));
    case 9: return box_p(random_formula(rng, depth - 1, vars));
    case 10: return dia_f(random_formula(rng, depth - 1, vars));
    default: return dia_p(random_formula(rng, depth - 1, vars));
  }
}

// Extends a witness of f to the renamed variables by evaluating each named
// subformula on the original word. Loop rows are sampled one period beyond
// |closure| repetitions, where every subformula's value is phase-periodic.
static UPWord extend_witness(const F& f, const UPWord& w, const SnfClauseSet& s) {
  auto cl = closure(f);
  long L = (long)w.left.size(), R = (long)w.right.size();
  long k = (long)cl.size() + 2;
  UPWord e;
  e.from = w.from - k * L;
  e.to = w.to + k * R;
  std::vector<F> named;
  for (auto& item : cl) {
    e.vars.push_back(s.names.at(to_string(item)));
    named.push_back(item);
  }
  auto row = [&](long n) {
    std::vector<bool> r;
    for (auto& g : named) r.push_back(eval_up(g, w, n));
    return r;
  };
  for (long n = e.from - L; n < e.from; ++n) e.left.push_back(row(n));
  for (long n = e.from; n <= e.to; ++n) e.window.push_back(row(n));
  for (long n = e.to + 1; n <= e.to + R; ++n) e.right.push_back(row(n));
  return e;
}

TEST_CASE("satisfiable formulas keep a model after the transformation") {
  std::mt19937 rng(3);
  std::vector<std::string> vars = {"p", "q", "r", "s"};
  int covered = 0;
  for (int iter = 0; iter < 500; ++iter) {
    F f = random_formula(rng, 3, vars);
    auto r = decide_generic(f);
    if (r.outcome != Outcome::Sat) continue;
    ++covered;
    SnfClauseSet s = to_snf(f);
    UPWord e = extend_witness(f, *r.witness, s);
    REQUIRE(e.valid());
    CHECK(eval_up(s.to_formula(), e, 0));
  }
  CHECK(covered > 200);
}

TEST_CASE("flattening preserves the verdict") {
  std::mt19937 rng(4);
  std::vector<std::string> vars = {"p", "q"};
  for (int iter = 0; iter < 150; ++iter) {
    F f = random_formula(rng, 2, vars);
    FlatResult fr = flatten(f);
    F g = f_and(fr.psi, always(conj(fr.phi)));
    auto a = decide_generic(f);
    auto b = decide_generic(g);
    REQUIRE(a.outcome != Outcome::ResourceExceeded);
    REQUIRE(b.outcome != Outcome::ResourceExceeded);
    CHECK(a.outcome == b.outcome);
  }
}

TEST_CASE("clause sets stay equisatisfiable on small formulas") {
  std::mt19937 rng(5);
  std::vector<std::string> vars = {"p", "q"};
  EngineLimits lim = default_limits();
  lim.max_vars = 64;
  lim.max_types = 500000;
  lim.max_initial = 200000;
  int decided = 0;
  for (int iter = 0; iter < 60; ++iter) {
    F f = random_formula(rng, 2, vars);
    auto a = decide_generic(f);
    auto b = decide_generic(to_snf(f).to_formula(), lim);
    if (b.outcome == Outcome::ResourceExceeded) continue;
    ++decided;
    CHECK(a.outcome == b.outcome);
  }
  CHECK(decided > 25);
}

static size_t node_count(const F& f) {
  return 1 + (f->a ? node_count(f->a) : 0) + (f->b ? node_count(f->b) : 0);
}

TEST_CASE("clause sets are linear in the formula size") {
  std::mt19937 rng(6);
  std::vector<std::string> vars = {"p", "q", "r", "s"};
  for (int iter = 0; iter < 500; ++iter) {
    F f = random_formula(rng, 3, vars);
    SnfClauseSet s = to_snf(f);
    CHECK(s.literal_count() <= 6 * node_count(f));
  }
}
