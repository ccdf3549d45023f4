// Temporal entity-relationship schemas and their compilation into temporal
// DL-Lite knowledge bases. Entities become atomic concepts, attributes and
// binary relationships become roles (or reifying concepts with one
// functional role per argument), and the schema's timestamping, evolution
// and cardinality constraints become concept inclusions. The report keeps,
// per emitted inclusion, the schema element it came from.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "tdlite/dl/ast.hpp"

namespace tdlite::cm {

// Timestamping marker: snapshot extensions never change, temporary ones
// never keep an element forever.
enum class Stamp { unconstrained, snapshot, temporary };

// Evolution edge kinds: transition extension (next instant), dynamic
// evolution (some future instant), dynamic extension forward/backward, and
// persistent extension (all future instants).
enum class EvoKind { TEX, DEV, DEX, DEXminus, PEX };

enum class Encoding { role_based, reified };

struct Entity {
  std::string name;
  Stamp mark = Stamp::unconstrained;
};

struct Attribute {
  std::string name;
  std::string entity;
  std::string domain;  // e.g. Integer, String
  bool key = false;
  Stamp mark = Stamp::unconstrained;
};

struct RelArg {
  std::string name;    // argument (role place) name
  std::string entity;  // participating entity
};

struct Relationship {
  std::string name;
  RelArg arg1, arg2;
  Stamp mark = Stamp::unconstrained;
  bool reify = false;
};

// One isa group: every sub is included in the super; disjoint adds pairwise
// exclusion, covering adds the union inclusion.
struct IsaGroup {
  std::vector<std::string> subs;
  std::string super;
  bool disjoint = false;
  bool covering = false;
};

// Participation bounds of one relationship argument; lifespan counts over
// the whole existence of an instance, snapshot per instant. hi < 0 means
// unbounded.
struct Cardinality {
  std::string relationship;
  std::string arg;
  bool lifespan = false;
  long lo = 0;
  long hi = -1;
};

struct Evolution {
  EvoKind kind = EvoKind::DEV;
  std::string from, to;
};

// Relationship generalisation: sub is a sub-relationship of super.
struct RelGen {
  std::string sub, super;
};

struct Schema {
  std::vector<Entity> entities;
  std::vector<Attribute> attributes;
  std::vector<Relationship> relationships;
  std::vector<IsaGroup> isa;
  std::vector<Cardinality> cardinalities;
  std::vector<Evolution> evolution;
  std::vector<RelGen> generalisations;
};

// Parses the JSON ingestion format (top-level arrays `entities`,
// `attributes`, `relationships`, `isa`, `cardinalities`, `evolution`,
// `generalisations`) and validates well-formedness. Throws
// std::invalid_argument with a description of the offending element.
Schema schema_from_json(const std::string& text);

struct CompileOptions {
  Encoding encoding = Encoding::role_based;
};

struct CompilationReport {
  dl::KnowledgeBase kb;
  dl::FragmentProfile profile;
  // One entry per kb.tbox / kb.rbox element naming the schema element that
  // produced it (convention-derived encodings are flagged in the entry).
  std::vector<std::string> tbox_provenance;
  std::vector<std::string> rbox_provenance;
};

// One reason the compiled knowledge base cannot be routed: a constraint
// emitting a temporalised role together with a constraint emitting a
// next/eventuality operator.
struct OffendingPair {
  std::string marked_role_constraint;
  std::string evolution_constraint;
};

class UnsupportedCombination : public std::runtime_error {
 public:
  UnsupportedCombination(const std::string& what,
                         std::vector<OffendingPair> pairs_,
                         CompilationReport report_)
      : std::runtime_error(what),
        pairs(std::move(pairs_)),
        report(std::move(report_)) {}
  std::vector<OffendingPair> pairs;
  CompilationReport report;  // still useful for inspection
};

// Deterministic compilation. Throws UnsupportedCombination when the schema
// needs temporalised roles together with next/eventuality operators, and
// std::invalid_argument on ill-formed schemas.
CompilationReport compile(const Schema& s, const CompileOptions& opt = {});

// The offending constraint pairs behind an UnsupportedCombination; removing
// one member of every pair makes the schema routable. Empty when the schema
// compiles cleanly.
std::vector<OffendingPair> diagnose(const Schema& s,
                                    const CompileOptions& opt = {});

}  // namespace tdlite::cm
