#include "tdlite/gen/hardness.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace tdlite::gen {

namespace ptl = tdlite::ptl;
namespace dl = tdlite::dl;

namespace {

using nlohmann::json;
using ptl::F;

[[noreturn]] void bad(const std::string& msg) {
  throw std::invalid_argument(msg);
}

std::vector<long long> first_primes(int m) {
  std::vector<long long> out;
  for (long long k = 2; (int)out.size() < m; ++k) {
    bool prime = true;
    for (long long p : out)
      if (p * p <= k && k % p == 0) prime = false;
    if (prime) out.push_back(k);
  }
  return out;
}

// u_0 now, then a forced steps into a loop of length b, marking the defect
// variable d at every instant of a + b*N.
void progression(long long a, long long b, int tag, std::vector<F>& parts) {
  auto u = [&](long long j) {
    return ptl::var("u" + std::to_string(j) + "_g" + std::to_string(tag));
  };
  auto v = [&](long long j) {
    return ptl::var("v" + std::to_string(j) + "_g" + std::to_string(tag));
  };
  parts.push_back(u(0));
  for (long long j = 1; j <= a; ++j)
    parts.push_back(ptl::always(ptl::implies(u(j - 1), ptl::next_f(u(j)))));
  parts.push_back(ptl::always(ptl::implies(u(a), v(0))));
  for (long long j = 1; j <= b; ++j)
    parts.push_back(ptl::always(ptl::implies(v(j - 1), ptl::next_f(v(j)))));
  parts.push_back(ptl::always(ptl::implies(v(b), v(0))));
  parts.push_back(ptl::always(ptl::implies(v(0), ptl::var("d"))));
}

}  // namespace

Cnf3 cnf_from_dimacs(const std::string& text) {
  Cnf3 f;
  std::istringstream in(text);
  std::string line;
  bool header = false;
  int promised = 0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string first;
    if (!(ls >> first) || first == "c") continue;
    if (first == "p") {
      std::string kind;
      if (header || !(ls >> kind >> f.vars >> promised) || kind != "cnf")
        bad("dimacs: malformed problem line");
      if (f.vars < 0 || promised < 0) bad("dimacs: negative counts");
      header = true;
      continue;
    }
    if (!header) bad("dimacs: clause before the problem line");
    std::vector<int> clause;
    int lit = std::stoi(first);
    while (lit != 0) {
      clause.push_back(lit);
      if (!(ls >> lit)) bad("dimacs: clause not terminated by 0");
    }
    if (clause.empty() || clause.size() > 3)
      bad("dimacs: clauses must have one to three literals");
    for (int l : clause)
      if (l == 0 || std::abs(l) > f.vars) bad("dimacs: literal out of range");
    f.clauses.push_back(clause);
  }
  if (!header) bad("dimacs: missing problem line");
  if ((int)f.clauses.size() != promised) bad("dimacs: clause count mismatch");
  return f;
}

ptl::F gen_3sat(const Cnf3& f) {
  for (auto& c : f.clauses) {
    if (c.empty() || c.size() > 3) bad("3sat: clause size must be 1 to 3");
    for (int l : c)
      if (l == 0 || std::abs(l) > f.vars) bad("3sat: literal out of range");
  }
  std::vector<long long> primes = first_primes(f.vars);
  std::vector<F> parts;
  int tag = 0;
  // numbers that name no assignment: some residue is neither 0 nor 1
  for (int i = 0; i < f.vars; ++i)
    for (long long j = 2; j < primes[i]; ++j)
      progression(j, primes[i], tag++, parts);
  // numbers naming an assignment that falsifies a clause: every literal's
  // variable carries the residue making that literal false
  for (auto& c : f.clauses) {
    std::map<int, long long> residue;
    bool tautology = false;
    for (int l : c) {
      long long r = l > 0 ? 0 : 1;
      auto it = residue.find(std::abs(l));
      if (it != residue.end() && it->second != r) tautology = true;
      residue[std::abs(l)] = r;
    }
    if (tautology) continue;
    long long b = 1;
    for (auto& [v, r] : residue) b *= primes[v - 1];
    long long a = 0;
    while ([&] {
      for (auto& [v, r] : residue)
        if (a % primes[v - 1] != r) return true;
      return false;
    }())
      ++a;
    progression(a, b, tag++, parts);
  }
  // d covers every instant <= 0 but may not cover all of Z
  parts.push_back(ptl::var("p"));
  parts.push_back(
      ptl::always(ptl::implies(ptl::next_f(ptl::var("p")), ptl::var("p"))));
  parts.push_back(ptl::always(ptl::implies(ptl::var("p"), ptl::var("d"))));
  parts.push_back(ptl::implies(ptl::always(ptl::var("d")), ptl::f_false()));
  return ptl::conj(parts);
}

Graph graph_from_edges(const std::string& text) {
  Graph g;
  std::istringstream in(text);
  if (!(in >> g.nodes) || g.nodes < 0) bad("edges: missing node count");
  int u, v;
  while (in >> u) {
    if (!(in >> v)) bad("edges: dangling endpoint");
    if (u < 0 || v < 0 || u >= g.nodes || v >= g.nodes)
      bad("edges: endpoint out of range");
    g.edges.push_back({u, v});
  }
  return g;
}

ptl::F gen_3col(const Graph& g) {
  for (auto& [u, v] : g.edges)
    if (u < 0 || v < 0 || u >= g.nodes || v >= g.nodes)
      bad("3col: endpoint out of range");
  auto p = [](int i) { return ptl::var("p" + std::to_string(i)); };
  auto node = [](int i) { return ptl::var("v" + std::to_string(i)); };
  std::vector<F> parts;
  parts.push_back(p(0));
  for (int i = 0; i <= 3; ++i)
    parts.push_back(ptl::always(ptl::implies(p(i), ptl::box_f(p(i + 1)))));
  for (int i = 0; i < g.nodes; ++i)
    parts.push_back(ptl::always(ptl::implies(
        ptl::f_and(p(0), ptl::box_f(ptl::f_not(node(i)))), ptl::f_false())));
  for (int i = 0; i < g.nodes; ++i)
    parts.push_back(ptl::always(
        ptl::implies(ptl::f_and(p(4), node(i)), ptl::f_false())));
  for (auto& [u, v] : g.edges)
    parts.push_back(ptl::always(
        ptl::implies(ptl::f_and(node(u), node(v)), ptl::f_false())));
  return ptl::conj(parts);
}

HornSet horn_from_text(const std::string& text) {
  HornSet f;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<std::string> toks;
    std::string t;
    while (ls >> t) toks.push_back(t);
    if (toks.empty()) continue;
    auto arrow = std::find(toks.begin(), toks.end(), "->");
    if (arrow == toks.end() || arrow + 2 != toks.end())
      bad("horn: each line needs '->' followed by one head");
    HornClause c;
    auto num = [&](const std::string& s) {
      try {
        size_t used = 0;
        int v = std::stoi(s, &used);
        if (used != s.size() || v <= 0) bad("horn: bad variable " + s);
        return v;
      } catch (const std::logic_error&) {
        bad("horn: bad variable " + s);
      }
    };
    for (auto it = toks.begin(); it != arrow; ++it) c.body.push_back(num(*it));
    c.head = toks.back() == "F" ? 0 : num(toks.back());
    if (c.body.size() > 2) bad("horn: at most two body variables");
    for (int v : c.body) f.vars = std::max(f.vars, v);
    f.vars = std::max(f.vars, c.head);
    f.clauses.push_back(c);
  }
  return f;
}

ptl::F gen_hornsat(const HornSet& f) {
  auto x = [](int v) { return ptl::var("x" + std::to_string(v)); };
  std::vector<F> parts;
  int tag = 0;
  for (auto& c : f.clauses) {
    if (c.body.size() > 2) bad("hornsat: at most two body variables");
    for (int v : c.body)
      if (v <= 0 || v > f.vars) bad("hornsat: variable out of range");
    if (c.head < 0 || c.head > f.vars) bad("hornsat: head out of range");
    F head = c.head == 0 ? ptl::f_false() : x(c.head);
    if (c.body.empty()) {
      parts.push_back(head);
    } else if (c.body.size() == 1) {
      parts.push_back(ptl::implies(x(c.body[0]), head));
    } else {
      F ci = ptl::var("c" + std::to_string(tag++));
      parts.push_back(ci);
      parts.push_back(ptl::implies(x(c.body[0]), ptl::box_f(ci)));
      parts.push_back(ptl::implies(x(c.body[1]), ptl::box_p(ci)));
      parts.push_back(ptl::implies(ptl::always(ci), head));
    }
  }
  return ptl::conj(parts);
}

TmSpec tm_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    bad(std::string("tm: ") + e.what());
  }
  TmSpec m;
  try {
    m.states = j.at("states").get<std::vector<std::string>>();
    m.symbols = j.at("symbols").get<std::vector<std::string>>();
    m.blank = j.at("blank").get<std::string>();
    m.initial = j.at("initial").get<std::string>();
    m.accepting = j.at("accepting").get<std::string>();
    m.tape = j.at("tape").get<int>();
    for (auto& s : j.value("steps", json::array())) {
      TmStep st;
      st.state = s.at("state").get<std::string>();
      st.read = s.at("read").get<std::string>();
      st.next = s.at("next").get<std::string>();
      st.write = s.at("write").get<std::string>();
      std::string mv = s.at("move").get<std::string>();
      if (mv != "L" && mv != "R") bad("tm: move must be L or R");
      st.dir = mv == "R" ? 1 : -1;
      m.steps.push_back(st);
    }
  } catch (const json::exception& e) {
    bad(std::string("tm: ") + e.what());
  }
  return m;
}

dl::KnowledgeBase gen_tm(const TmSpec& m,
                         const std::vector<std::string>& input) {
  auto word = [](const std::string& s) {
    if (s.empty()) return false;
    for (char ch : s)
      if (!std::isalnum((unsigned char)ch) && ch != '_') return false;
    return true;
  };
  std::set<std::string> states(m.states.begin(), m.states.end());
  std::set<std::string> symbols(m.symbols.begin(), m.symbols.end());
  for (auto& s : m.states)
    if (!word(s)) bad("tm: state names must be identifiers");
  for (auto& s : m.symbols)
    if (!word(s)) bad("tm: symbol names must be identifiers");
  if (!symbols.count(m.blank)) bad("tm: blank symbol not declared");
  if (!states.count(m.initial) || !states.count(m.accepting))
    bad("tm: initial and accepting states must be declared");
  if (m.tape < 1) bad("tm: tape must have at least one cell");
  if ((int)input.size() > m.tape) bad("tm: input longer than the tape");
  for (auto& a : input)
    if (!symbols.count(a)) bad("tm: input symbol not declared");
  std::set<std::pair<std::string, std::string>> seen;
  for (auto& st : m.steps) {
    if (!states.count(st.state) || !states.count(st.next) ||
        !symbols.count(st.read) || !symbols.count(st.write))
      bad("tm: step references an undeclared name");
    if (st.state == m.accepting) bad("tm: no steps leave the accepting state");
    if (!seen.insert({st.state, st.read}).second)
      bad("tm: duplicate transition");
  }

  auto H = [](int i, const std::string& q) {
    return dl::atomic("H" + std::to_string(i) + "_" + q);
  };
  auto S = [](int i, const std::string& a) {
    return dl::atomic("S" + std::to_string(i) + "_" + a);
  };
  auto D = [](int i) { return dl::atomic("D" + std::to_string(i)); };
  auto step_to = [](const dl::C& rhs) { return dl::c_until(dl::c_bot(), rhs); };

  dl::KnowledgeBase kb;
  std::set<std::string> emitted;
  auto inc = [&](const dl::C& l, const dl::C& r) {
    std::string key = dl::to_string(l) + "<=" + dl::to_string(r);
    if (emitted.insert(key).second) kb.tbox.push_back({l, r});
  };
  // the scanned cell is rewritten and the head moves one cell
  for (auto& st : m.steps)
    for (int i = 1; i <= m.tape; ++i) {
      int to = i + st.dir;
      if (to < 1 || to > m.tape) continue;
      inc(H(i, st.state), step_to(H(to, st.next)));
      inc(H(i, st.state), step_to(S(i, st.write)));
    }
  // the head position is remembered for one instant
  for (int i = 1; i <= m.tape; ++i)
    for (auto& q : m.states) inc(H(i, q), step_to(D(i)));
  for (int i = 1; i <= m.tape; ++i)
    for (int j = i + 1; j <= m.tape; ++j)
      inc(dl::c_and(D(i), D(j)), dl::c_bot());
  // unscanned cells keep their symbol
  for (int i = 1; i <= m.tape; ++i)
    for (auto& a : m.symbols) inc(S(i, a), dl::c_until(S(i, a), D(i)));
  for (int i = 1; i <= m.tape; ++i) inc(H(i, m.accepting), dl::c_bot());

  dl::AboxAssertion head;
  head.name = "H1_" + m.initial;
  head.obj1 = "d";
  kb.abox.push_back(head);
  for (int i = 1; i <= m.tape; ++i) {
    dl::AboxAssertion cell;
    cell.name = "S" + std::to_string(i) + "_" +
                (i <= (int)input.size() ? input[i - 1] : m.blank);
    cell.obj1 = "d";
    kb.abox.push_back(cell);
  }
  return kb;
}

}  // namespace tdlite::gen
