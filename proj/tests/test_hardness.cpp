#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "tdlite/dl/ast.hpp"
#include "tdlite/dl/translate.hpp"
#include "tdlite/gen/hardness.hpp"
#include "tdlite/ptl/clausal.hpp"

using namespace tdlite::gen;
namespace ptl = tdlite::ptl;
namespace dl = tdlite::dl;

namespace {

// Reference solvers, kept deliberately naive and independent of the engines.

bool dpll(std::vector<std::vector<int>> clauses, std::map<int, bool> fixed) {
  for (;;) {
    int unit = 0;
    for (auto& c : clauses) {
      int unassigned = 0, last = 0;
      bool satisfied = false;
      for (int l : c) {
        auto it = fixed.find(std::abs(l));
        if (it == fixed.end()) {
          ++unassigned;
          last = l;
        } else if (it->second == (l > 0)) {
          satisfied = true;
        }
      }
      if (satisfied) continue;
      if (unassigned == 0) return false;
      if (unassigned == 1) {
        unit = last;
        break;
      }
    }
    if (unit == 0) break;
    fixed[std::abs(unit)] = unit > 0;
  }
  int branch = 0;
  for (auto& c : clauses)
    for (int l : c)
      if (!fixed.count(std::abs(l))) branch = std::abs(l);
  if (branch == 0) return true;
  auto with = [&](bool val) {
    auto f2 = fixed;
    f2[branch] = val;
    return dpll(clauses, std::move(f2));
  };
  return with(true) || with(false);
}

bool dpll_sat(const Cnf3& f) { return dpll(f.clauses, {}); }

bool colourable3(const Graph& g) {
  std::vector<int> col(g.nodes, 0);
  auto ok = [&] {
    for (auto& [u, v] : g.edges)
      if (col[u] == col[v]) return false;
    return true;
  };
  for (long long mask = 0;; ++mask) {
    long long rest = mask;
    for (int i = 0; i < g.nodes; ++i) {
      col[i] = rest % 3;
      rest /= 3;
    }
    if (rest > 0) return false;
    if (ok()) return true;
    if (g.nodes == 0) return true;
  }
}

bool horn_sat(const HornSet& f) {
  std::set<int> truth;
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto& c : f.clauses) {
      bool fires = true;
      for (int v : c.body) fires = fires && truth.count(v) > 0;
      if (!fires) continue;
      if (c.head == 0) return false;
      if (truth.insert(c.head).second) changed = true;
    }
  }
  return true;
}

bool simulate_accepts(const TmSpec& m, std::vector<std::string> input) {
  std::vector<std::string> tape(m.tape, m.blank);
  for (size_t i = 0; i < input.size(); ++i) tape[i] = input[i];
  int head = 1;
  std::string state = m.initial;
  std::map<std::pair<std::string, std::string>, TmStep> delta;
  for (auto& st : m.steps) delta[{st.state, st.read}] = st;
  std::set<std::string> visited;
  for (;;) {
    if (state == m.accepting) return true;
    std::string config = state + "@" + std::to_string(head);
    for (auto& s : tape) config += "|" + s;
    if (!visited.insert(config).second) return false;  // loops forever
    auto it = delta.find({state, tape[head - 1]});
    if (it == delta.end()) return false;  // stuck, not accepting
    tape[head - 1] = it->second.write;
    head += it->second.dir;
    state = it->second.next;
    if (head < 1 || head > m.tape) return false;  // falls off the tape
  }
}

bool krom_sat(const ptl::F& f) {
  auto r = decide_krom(f);
  REQUIRE(r.outcome != ptl::Outcome::ResourceExceeded);
  return r.outcome == ptl::Outcome::Sat;
}

bool horn_engine_sat(const ptl::F& f) {
  auto r = decide_horn(f);
  REQUIRE(r.outcome != ptl::Outcome::ResourceExceeded);
  return r.outcome == ptl::Outcome::Sat;
}

}  // namespace

TEST_CASE("prime-progression encoding of tiny formulas matches the splitting "
          "search") {
  // single positive unit: the all-true assignment is named by 1
  CHECK(krom_sat(gen_3sat({1, {{1}}})));
  // direct propositional contradiction
  CHECK_FALSE(krom_sat(gen_3sat({1, {{1}, {-1}}})));

  // every multiset of three literals over two variables
  std::vector<std::vector<int>> units;
  int lits[4] = {1, -1, 2, -2};
  for (int a = 0; a < 4; ++a)
    for (int b = a; b < 4; ++b)
      for (int c = b; c < 4; ++c) units.push_back({lits[a], lits[b], lits[c]});
  REQUIRE(units.size() == 20);

  int sat_seen = 0, unsat_seen = 0;
  auto check = [&](const Cnf3& f) {
    bool expect = dpll_sat(f);
    CHECK(krom_sat(gen_3sat(f)) == expect);
    (expect ? sat_seen : unsat_seen)++;
  };
  for (size_t i = 0; i < units.size(); ++i) {
    check({2, {units[i]}});
    for (size_t j = i + 1; j < units.size(); ++j) {
      check({2, {units[i], units[j]}});
      for (size_t k = j + 1; k < units.size(); ++k)
        check({2, {units[i], units[j], units[k]}});
    }
  }
  CHECK(sat_seen > 0);
  CHECK(unsat_seen > 0);
}

TEST_CASE("prime-progression encoding agrees on random three-variable "
          "formulas") {
  std::mt19937 rng(20240815);
  for (int round = 0; round < 40; ++round) {
    Cnf3 f;
    f.vars = 3;
    int n = 2 + (int)(rng() % 5);
    for (int i = 0; i < n; ++i) {
      std::vector<int> c;
      for (int j = 0; j < 3; ++j) {
        int v = 1 + (int)(rng() % 3);
        c.push_back(rng() % 2 ? v : -v);
      }
      f.clauses.push_back(c);
    }
    CHECK(krom_sat(gen_3sat(f)) == dpll_sat(f));
  }
}

TEST_CASE("colour-instant encoding matches brute force on all graphs with at "
          "most four nodes") {
  // triangle: three nodes, three colours
  CHECK(krom_sat(gen_3col({3, {{0, 1}, {1, 2}, {0, 2}}})));
  // complete graph on four nodes needs a fourth colour
  CHECK_FALSE(krom_sat(
      gen_3col({4, {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}})));
  // no edges, no conflicts
  CHECK(krom_sat(gen_3col({4, {}})));

  int unsat_seen = 0;
  for (int n = 0; n <= 4; ++n) {
    std::vector<std::pair<int, int>> all;
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v) all.push_back({u, v});
    for (unsigned mask = 0; mask < (1u << all.size()); ++mask) {
      Graph g{n, {}};
      for (size_t e = 0; e < all.size(); ++e)
        if (mask >> e & 1) g.edges.push_back(all[e]);
      bool expect = colourable3(g);
      CHECK(krom_sat(gen_3col(g)) == expect);
      if (!expect) ++unsat_seen;
    }
  }
  CHECK(unsat_seen > 0);
}

TEST_CASE("clause-marker encoding matches propagation on all small ternary "
          "horn sets") {
  CHECK(horn_engine_sat(gen_hornsat({1, {{{}, 1}}})));
  CHECK_FALSE(horn_engine_sat(gen_hornsat({1, {{{}, 1}, {{1}, 0}}})));
  CHECK_FALSE(horn_engine_sat(
      gen_hornsat({3, {{{}, 1}, {{}, 2}, {{1, 2}, 3}, {{3}, 0}}})));

  // clause universe on three variables: facts, refutations, implications,
  // and two-variable bodies with every head including falsum
  std::vector<HornClause> universe;
  for (int h = 1; h <= 3; ++h) universe.push_back({{}, h});
  for (int v = 1; v <= 3; ++v) universe.push_back({{v}, 0});
  for (int v = 1; v <= 3; ++v)
    for (int h = 1; h <= 3; ++h)
      if (v != h) universe.push_back({{v}, h});
  for (int v = 1; v <= 3; ++v)
    for (int w = v + 1; w <= 3; ++w)
      for (int h = 0; h <= 3; ++h) universe.push_back({{v, w}, h});
  REQUIRE(universe.size() == 24);

  int compared = 0, unsat_seen = 0;
  std::vector<size_t> pick;
  auto run = [&] {
    HornSet f;
    f.vars = 3;
    for (size_t i : pick) f.clauses.push_back(universe[i]);
    bool expect = horn_sat(f);
    CHECK(horn_engine_sat(gen_hornsat(f)) == expect);
    ++compared;
    if (!expect) ++unsat_seen;
  };
  auto choose = [&](auto&& self, size_t from) -> void {
    if (!pick.empty()) run();
    if (pick.size() == 4) return;
    for (size_t i = from; i < universe.size(); ++i) {
      pick.push_back(i);
      self(self, i + 1);
      pick.pop_back();
    }
  };
  choose(choose, 0);
  CHECK(compared == 24 + 276 + 2024 + 10626);
  CHECK(unsat_seen > 0);
}

namespace {

TmSpec bouncer_machine() {
  TmSpec m;
  m.states = {"q0", "q1", "qf"};
  m.symbols = {"a", "B"};
  m.blank = "B";
  m.initial = "q0";
  m.accepting = "qf";
  m.tape = 2;
  m.steps = {{"q0", "a", "q1", "a", 1},
             {"q0", "B", "q1", "B", 1},
             {"q1", "a", "q0", "a", -1},
             {"q1", "B", "q0", "B", -1}};
  return m;
}

}  // namespace

TEST_CASE("machine encoding is unsatisfiable exactly for accepting runs") {
  // accepts in one step
  TmSpec accept = bouncer_machine();
  accept.steps = {{"q0", "a", "qf", "a", 1}, {"q0", "B", "qf", "B", 1}};
  // bounces between the two cells forever
  TmSpec loop = bouncer_machine();
  // starts in the accepting state
  TmSpec degenerate = bouncer_machine();
  degenerate.steps.clear();
  degenerate.initial = "qf";

  std::vector<std::string> input = {"a"};
  CHECK(simulate_accepts(accept, input));
  CHECK_FALSE(simulate_accepts(loop, input));
  CHECK(simulate_accepts(degenerate, input));

  for (auto* m : {&accept, &loop, &degenerate}) {
    dl::KnowledgeBase kb = gen_tm(*m, input);
    dl::FragmentProfile p = dl::classify_fragment(kb);
    CHECK(p.level == dl::BoolLevel::core);
    CHECK(p.ops == dl::OpSet::us);
    CHECK_FALSE(p.temporal_roles);
    CHECK(dl::route(p).engine == dl::Engine::generic);
    auto v = dl::decide_translated(kb);
    REQUIRE(v.decided);
    bool expect_unsat = simulate_accepts(*m, input);
    CHECK((v.outcome == ptl::Outcome::Unsat) == expect_unsat);
  }
}

TEST_CASE("machine encoding emits the configuration bookkeeping inclusions") {
  dl::KnowledgeBase kb = gen_tm(bouncer_machine(), {"a"});
  std::set<std::string> printed;
  for (auto& inc : kb.tbox)
    printed.insert(dl::to_string(inc.lhs) + " <= " + dl::to_string(inc.rhs));
  CHECK(printed.count("H1_q0 <= (bot U H2_q1)"));
  CHECK(printed.count("H1_q0 <= (bot U S1_a)"));
  CHECK(printed.count("H2_q1 <= (bot U H1_q0)"));
  CHECK(printed.count("H1_q0 <= (bot U D1)"));
  CHECK(printed.count("(D1 and D2) <= bot"));
  CHECK(printed.count("S2_B <= (S2_B U D2)"));
  CHECK(printed.count("H1_qf <= bot"));
  CHECK(printed.count("H2_qf <= bot"));
  // head moves off neither tape end
  CHECK_FALSE(printed.count("H2_q0 <= (bot U H3_q1)"));
  REQUIRE(kb.abox.size() == 3);
  CHECK(kb.abox[0].name == "H1_q0");
  CHECK(kb.abox[1].name == "S1_a");
  CHECK(kb.abox[2].name == "S2_B");
}

TEST_CASE("problem input parsers accept the documented formats") {
  Cnf3 f = cnf_from_dimacs("c comment\np cnf 2 2\n1 -2 0\n2 2 1 0\n");
  CHECK(f.vars == 2);
  REQUIRE(f.clauses.size() == 2);
  CHECK(f.clauses[0] == std::vector<int>{1, -2});
  CHECK_THROWS_AS(cnf_from_dimacs("1 2 0\n"), std::invalid_argument);
  CHECK_THROWS_AS(cnf_from_dimacs("p cnf 1 1\n1 1 1 1 0\n"),
                  std::invalid_argument);

  Graph g = graph_from_edges("3\n0 1\n1 2\n");
  CHECK(g.nodes == 3);
  CHECK(g.edges.size() == 2);
  CHECK_THROWS_AS(graph_from_edges("2\n0 5\n"), std::invalid_argument);

  HornSet h = horn_from_text("-> 1\n1 -> 2\n1 2 -> F\n");
  CHECK(h.vars == 2);
  REQUIRE(h.clauses.size() == 3);
  CHECK(h.clauses[2].head == 0);
  CHECK_FALSE(horn_sat(h));
  CHECK_THROWS_AS(horn_from_text("1 2 3 -> 4\n"), std::invalid_argument);

  TmSpec m = tm_from_json(R"({
    "states": ["q0", "qf"], "symbols": ["a", "B"], "blank": "B",
    "initial": "q0", "accepting": "qf", "tape": 2,
    "steps": [{"state": "q0", "read": "a", "next": "qf",
               "write": "a", "move": "R"}]
  })");
  CHECK(m.states.size() == 2);
  CHECK(m.steps.size() == 1);
  CHECK(m.steps[0].dir == 1);
  CHECK_THROWS_AS(tm_from_json("{"), std::invalid_argument);
  CHECK_THROWS_AS(gen_tm(m, {"a", "a", "a"}), std::invalid_argument);
}
