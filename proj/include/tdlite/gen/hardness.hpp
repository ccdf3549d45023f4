// Encodings of classical decision problems into the clausal temporal
// fragments and into knowledge bases. Each generator preserves
// satisfiability exactly, so the outputs double as engine test corpora
// with independently checkable verdicts.
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "tdlite/dl/ast.hpp"
#include "tdlite/ptl/formula.hpp"

namespace tdlite::gen {

// CNF with clauses of at most three literals; a literal is +v or -v for a
// 1-based variable index v.
struct Cnf3 {
  int vars = 0;
  std::vector<std::vector<int>> clauses;
};
// DIMACS cnf format. Throws std::invalid_argument on malformed input or
// clauses longer than three literals.
Cnf3 cnf_from_dimacs(const std::string& text);

// Satisfiable iff the input is. Assignments are named by natural numbers
// through their residues modulo the first m primes; the formula forces a
// shared defect variable along every arithmetic progression of numbers that
// name no assignment or a falsifying one, and demands a defect-free instant.
// Binary clauses over box and next operators only.
ptl::F gen_3sat(const Cnf3& f);

// Undirected graph on nodes 0..nodes-1.
struct Graph {
  int nodes = 0;
  std::vector<std::pair<int, int>> edges;
};
// First line the node count, then one "u v" edge per line.
Graph graph_from_edges(const std::string& text);

// Satisfiable iff the graph is 3-colourable: a marker chain pins instants
// 1..3 as the colours, every node must occur at one of them, and adjacent
// nodes may not share an instant. Binary clauses over future boxes.
ptl::F gen_3col(const Graph& g);

// Horn clause over 1-based variables: body of at most two, head 0 = falsum.
struct HornClause {
  std::vector<int> body;
  int head = 0;
};
struct HornSet {
  int vars = 0;
  std::vector<HornClause> clauses;
};
// One clause per line: "-> h" (fact), "b -> h", "b1 b2 -> h", head "F" for
// falsum. Throws std::invalid_argument on malformed input.
HornSet horn_from_text(const std::string& text);

// Satisfiable iff the input is. Unit and binary clauses pass through;
// each two-variable body is mediated by a fresh clause marker pushed across
// the future by one body variable and across the past by the other, so the
// head fires exactly when the marker holds at every instant. Horn clauses
// over boxed variables.
ptl::F gen_hornsat(const HornSet& f);

// Deterministic machine over named states and symbols; dir +1 moves the
// head right, -1 left. The head never leaves cells 1..tape.
struct TmStep {
  std::string state, read;
  std::string next, write;
  int dir = 1;
};
struct TmSpec {
  std::vector<std::string> states, symbols;
  std::string blank;
  std::string initial, accepting;
  std::vector<TmStep> steps;
  int tape = 1;
};
// Object with "states", "symbols", "blank", "initial", "accepting", "tape"
// and a "steps" array of {state, read, next, write, move:"L"|"R"}.
TmSpec tm_from_json(const std::string& text);

// Knowledge base unsatisfiable iff the machine accepts the input within its
// tape bound. Concepts track the head position with its state, the cell
// contents, and the previous head position; bot-until inclusions advance the
// configuration one instant per step, and reaching the accepting state is
// forbidden outright.
dl::KnowledgeBase gen_tm(const TmSpec& m,
                         const std::vector<std::string>& input);

}  // namespace tdlite::gen
