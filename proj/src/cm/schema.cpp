#include "tdlite/cm/schema.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

#include "json.hpp"

namespace tdlite::cm {

namespace dl = tdlite::dl;

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& msg) {
  throw std::invalid_argument("schema: " + msg);
}

Stamp stamp_of(const json& j, const std::string& where) {
  std::string t = j.value("timestamp", "unconstrained");
  if (t == "snapshot") return Stamp::snapshot;
  if (t == "temporary") return Stamp::temporary;
  if (t == "unconstrained") return Stamp::unconstrained;
  bad("unknown timestamp mark '" + t + "' on " + where);
}

EvoKind evo_kind(const std::string& t) {
  if (t == "TEX") return EvoKind::TEX;
  if (t == "DEV") return EvoKind::DEV;
  if (t == "DEX") return EvoKind::DEX;
  if (t == "DEX-") return EvoKind::DEXminus;
  if (t == "PEX") return EvoKind::PEX;
  bad("unknown evolution kind '" + t + "'");
}

std::string evo_name(EvoKind k) {
  switch (k) {
    case EvoKind::TEX: return "TEX";
    case EvoKind::DEV: return "DEV";
    case EvoKind::DEX: return "DEX";
    case EvoKind::DEXminus: return "DEX-";
    case EvoKind::PEX: return "PEX";
  }
  return "?";
}

void validate(const Schema& s) {
  std::set<std::string> ents;
  for (auto& e : s.entities) {
    if (e.name.empty()) bad("entity with empty name");
    if (!ents.insert(e.name).second) bad("duplicate entity " + e.name);
  }
  auto need_entity = [&](const std::string& n, const std::string& where) {
    if (!ents.count(n)) bad("unknown entity " + n + " in " + where);
  };
  // Attributes and relationships share the role namespace.
  std::set<std::string> roles;
  auto need_fresh_role = [&](const std::string& n, const std::string& where) {
    if (n.empty()) bad("empty role name in " + where);
    if (!roles.insert(n).second)
      bad("role name " + n + " reused by " + where);
  };
  for (auto& a : s.attributes) {
    need_fresh_role(a.name, "attribute " + a.name);
    need_entity(a.entity, "attribute " + a.name);
    if (a.domain.empty()) bad("attribute " + a.name + " without domain");
  }
  std::map<std::string, const Relationship*> rels;
  for (auto& r : s.relationships) {
    need_fresh_role(r.name, "relationship " + r.name);
    if (!rels.emplace(r.name, &r).second)
      bad("duplicate relationship " + r.name);
    need_entity(r.arg1.entity, "relationship " + r.name);
    need_entity(r.arg2.entity, "relationship " + r.name);
    if (r.arg1.name.empty() || r.arg2.name.empty() ||
        r.arg1.name == r.arg2.name)
      bad("relationship " + r.name + " needs two distinct argument names");
  }
  for (auto& g : s.isa) {
    if (g.subs.empty()) bad("isa group without subs");
    need_entity(g.super, "isa group");
    for (auto& sub : g.subs) need_entity(sub, "isa group");
  }
  for (auto& c : s.cardinalities) {
    auto it = rels.find(c.relationship);
    if (it == rels.end())
      bad("cardinality on unknown relationship " + c.relationship);
    if (c.arg != it->second->arg1.name && c.arg != it->second->arg2.name)
      bad("cardinality on unknown argument " + c.relationship + "." + c.arg);
    if (c.lo < 0) bad("negative cardinality bound on " + c.relationship);
    if (c.hi >= 0 && c.hi < c.lo)
      bad("cardinality bounds out of order on " + c.relationship);
  }
  for (auto& e : s.evolution) {
    need_entity(e.from, "evolution edge");
    need_entity(e.to, "evolution edge");
  }
  for (auto& g : s.generalisations) {
    if (!rels.count(g.sub) || !rels.count(g.super))
      bad("generalisation over unknown relationship");
    if (g.sub == g.super) bad("relationship generalised to itself");
  }
}

// Relationships compiled through a reifying concept: explicitly flagged
// ones, those taking part in a generalisation while carrying a bound of at
// least two, and anything generalisation-connected to a reified one (both
// sides of a generalisation must use the same encoding).
std::set<std::string> reified_set(const Schema& s, const CompileOptions& opt) {
  std::set<std::string> out;
  if (opt.encoding == Encoding::reified) {
    for (auto& r : s.relationships) out.insert(r.name);
    return out;
  }
  std::set<std::string> in_gen;
  for (auto& g : s.generalisations) {
    in_gen.insert(g.sub);
    in_gen.insert(g.super);
  }
  for (auto& r : s.relationships) {
    if (r.reify) out.insert(r.name);
    if (!in_gen.count(r.name)) continue;
    for (auto& c : s.cardinalities)
      if (c.relationship == r.name && (c.lo >= 2 || c.hi >= 2))
        out.insert(r.name);
  }
  for (bool changed = true; changed;) {
    changed = false;
    for (auto& g : s.generalisations)
      if (out.count(g.sub) != out.count(g.super)) {
        out.insert(g.sub);
        out.insert(g.super);
        changed = true;
      }
  }
  return out;
}

struct Builder {
  CompilationReport out;

  void inc(dl::C l, dl::C r, const std::string& prov) {
    out.kb.tbox.push_back({std::move(l), std::move(r)});
    out.tbox_provenance.push_back(prov);
  }
  void rinc(dl::Role l, dl::Role r, const std::string& prov) {
    out.kb.rbox.push_back({std::move(l), std::move(r)});
    out.rbox_provenance.push_back(prov);
  }
  void role(const std::string& name, bool rigid) {
    out.kb.roles.push_back({name, rigid});
  }
};

std::string reify_concept(const std::string& rel) { return "C_" + rel; }

dl::Role plain(const std::string& base, bool inverted = false) {
  return dl::Role{base, inverted, dl::RoleMark::plain};
}

// The reification pattern for one argument place: the reifying concept has
// exactly one filler through the argument role, whose range is the
// participating entity.
void reify_arg(Builder& b, const std::string& rel, const RelArg& arg,
               bool rigid) {
  std::string cn = reify_concept(rel);
  std::string prov = "relationship:" + rel;
  b.role(arg.name, rigid);
  b.inc(dl::atomic(cn), dl::exists(plain(arg.name)), prov);
  b.inc(dl::at_least(2, plain(arg.name)), dl::c_bot(), prov);
  b.inc(dl::exists(plain(arg.name)), dl::atomic(cn), prov);
  b.inc(dl::exists(plain(arg.name, true)), dl::atomic(arg.entity), prov);
}

}  // namespace

Schema schema_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    bad(std::string("invalid JSON: ") + e.what());
  }
  Schema s;
  try {
    for (auto& e : j.value("entities", json::array())) {
      Entity ent;
      ent.name = e.at("name").get<std::string>();
      ent.mark = stamp_of(e, "entity " + ent.name);
      s.entities.push_back(ent);
    }
    for (auto& a : j.value("attributes", json::array())) {
      Attribute at;
      at.name = a.at("name").get<std::string>();
      at.entity = a.at("entity").get<std::string>();
      at.domain = a.at("domain").get<std::string>();
      at.key = a.value("key", false);
      at.mark = stamp_of(a, "attribute " + at.name);
      s.attributes.push_back(at);
    }
    for (auto& r : j.value("relationships", json::array())) {
      Relationship rel;
      rel.name = r.at("name").get<std::string>();
      auto& args = r.at("args");
      if (!args.is_array() || args.size() != 2)
        bad("relationship " + rel.name + " needs exactly two args");
      rel.arg1 = {args[0].at("name").get<std::string>(),
                  args[0].at("entity").get<std::string>()};
      rel.arg2 = {args[1].at("name").get<std::string>(),
                  args[1].at("entity").get<std::string>()};
      rel.mark = stamp_of(r, "relationship " + rel.name);
      rel.reify = r.value("reify", false);
      s.relationships.push_back(rel);
    }
    for (auto& g : j.value("isa", json::array())) {
      IsaGroup grp;
      for (auto& sub : g.at("subs")) grp.subs.push_back(sub.get<std::string>());
      grp.super = g.at("super").get<std::string>();
      grp.disjoint = g.value("disjoint", false);
      grp.covering = g.value("covering", false);
      s.isa.push_back(grp);
    }
    for (auto& c : j.value("cardinalities", json::array())) {
      Cardinality card;
      card.relationship = c.at("relationship").get<std::string>();
      card.arg = c.at("arg").get<std::string>();
      std::string kind = c.value("kind", "snapshot");
      if (kind != "snapshot" && kind != "lifespan")
        bad("unknown cardinality kind '" + kind + "'");
      card.lifespan = kind == "lifespan";
      card.lo = c.value("min", 0L);
      card.hi = c.contains("max") ? c.at("max").get<long>() : -1;
      s.cardinalities.push_back(card);
    }
    for (auto& e : j.value("evolution", json::array())) {
      Evolution ev;
      ev.kind = evo_kind(e.at("kind").get<std::string>());
      ev.from = e.at("from").get<std::string>();
      ev.to = e.at("to").get<std::string>();
      s.evolution.push_back(ev);
    }
    for (auto& g : j.value("generalisations", json::array())) {
      s.generalisations.push_back({g.at("sub").get<std::string>(),
                                   g.at("super").get<std::string>()});
    }
  } catch (const json::exception& e) {
    bad(std::string("missing or mistyped field: ") + e.what());
  }
  validate(s);
  return s;
}

CompilationReport compile(const Schema& s, const CompileOptions& opt) {
  validate(s);
  std::set<std::string> reified = reified_set(s, opt);
  Builder b;

  for (auto& g : s.isa) {
    for (auto& sub : g.subs)
      b.inc(dl::atomic(sub), dl::atomic(g.super), "isa:" + sub + "<" + g.super);
    if (g.covering) {
      dl::C u = dl::atomic(g.subs[0]);
      for (std::size_t i = 1; i < g.subs.size(); ++i)
        u = dl::c_or(u, dl::atomic(g.subs[i]));
      b.inc(dl::atomic(g.super), u, "covering:" + g.super);
    }
    if (g.disjoint)
      for (std::size_t i = 0; i < g.subs.size(); ++i)
        for (std::size_t k = i + 1; k < g.subs.size(); ++k)
          b.inc(dl::c_and(dl::atomic(g.subs[i]), dl::atomic(g.subs[k])),
                dl::c_bot(), "disjoint:" + g.subs[i] + "," + g.subs[k]);
  }

  for (auto& e : s.entities) {
    if (e.mark == Stamp::snapshot)
      b.inc(dl::atomic(e.name), dl::c_always(dl::atomic(e.name)),
            "timestamp:" + e.name);
    if (e.mark == Stamp::temporary)
      b.inc(dl::c_always(dl::atomic(e.name)), dl::c_bot(),
            "timestamp:" + e.name);
  }

  for (auto& a : s.attributes) {
    std::string prov = "attribute:" + a.name;
    // Snapshot attributes become rigid roles; temporary ones stay flexible
    // (flexibility is the weaker reading that keeps the role unmarked).
    b.role(a.name, a.mark == Stamp::snapshot);
    b.inc(dl::atomic(a.entity), dl::exists(plain(a.name)), prov);
    b.inc(dl::exists(plain(a.name, true)), dl::atomic(a.domain), prov);
    b.inc(dl::at_least(2, plain(a.name)), dl::c_bot(), prov);
    if (a.key)
      b.inc(dl::at_least(2, plain(a.name, true)), dl::c_bot(),
            "key:" + a.name);
  }

  // Attribute domains are mutually disjoint atomic concepts.
  std::vector<std::string> domains;
  for (auto& a : s.attributes)
    if (std::find(domains.begin(), domains.end(), a.domain) == domains.end())
      domains.push_back(a.domain);
  for (std::size_t i = 0; i < domains.size(); ++i)
    for (std::size_t k = i + 1; k < domains.size(); ++k)
      b.inc(dl::c_and(dl::atomic(domains[i]), dl::atomic(domains[k])),
            dl::c_bot(), "domains:" + domains[i] + "," + domains[k]);

  for (auto& r : s.relationships) {
    std::string prov = "relationship:" + r.name;
    if (reified.count(r.name)) {
      reify_arg(b, r.name, r.arg1, r.mark == Stamp::snapshot);
      reify_arg(b, r.name, r.arg2, r.mark == Stamp::snapshot);
      if (r.mark == Stamp::temporary)
        b.inc(dl::c_always(dl::atomic(reify_concept(r.name))), dl::c_bot(),
              "timestamp:" + r.name);
    } else {
      // Snapshot relationships become rigid roles; temporary ones stay
      // flexible, as with attributes.
      b.role(r.name, r.mark == Stamp::snapshot);
      b.inc(dl::exists(plain(r.name)), dl::atomic(r.arg1.entity), prov);
      b.inc(dl::exists(plain(r.name, true)), dl::atomic(r.arg2.entity), prov);
    }
  }

  for (auto& c : s.cardinalities) {
    const Relationship* rel = nullptr;
    for (auto& r : s.relationships)
      if (r.name == c.relationship) rel = &r;
    bool first = c.arg == rel->arg1.name;
    const RelArg& arg = first ? rel->arg1 : rel->arg2;
    // Participation of the argument's entity is counted along the role from
    // that side: the inverse argument role when reified, otherwise the
    // relationship role (inverted for the second argument).
    dl::Role dir = reified.count(rel->name) ? plain(arg.name, true)
                                            : plain(rel->name, !first);
    if (c.lifespan) dir = dl::role_dia(dir);
    std::string prov = std::string(c.lifespan ? "lifespan:" : "cardinality:") +
                       rel->name + "." + c.arg;
    if (c.lo >= 1) b.inc(dl::atomic(arg.entity), dl::at_least((int)c.lo, dir), prov);
    if (c.hi >= 0) b.inc(dl::atomic(arg.entity), dl::at_most((int)c.hi, dir), prov);
  }

  for (auto& e : s.evolution) {
    std::string prov = "evolution:" + evo_name(e.kind) + ":" + e.from + ">" + e.to;
    dl::C to = dl::atomic(e.to);
    dl::C rhs;
    switch (e.kind) {
      case EvoKind::TEX: rhs = dl::c_next_f(to); break;
      case EvoKind::DEV: rhs = dl::c_dia_f(to); break;
      case EvoKind::DEX:
        rhs = dl::c_dia_f(to);
        prov += ":convention";
        break;
      case EvoKind::DEXminus: rhs = dl::c_dia_p(to); break;
      case EvoKind::PEX: rhs = dl::c_box_f(to); break;
    }
    b.inc(dl::atomic(e.from), rhs, prov);
  }

  for (auto& g : s.generalisations) {
    std::string prov = "generalisation:" + g.sub + "<" + g.super;
    if (reified.count(g.sub)) {
      const Relationship *sub = nullptr, *super = nullptr;
      for (auto& r : s.relationships) {
        if (r.name == g.sub) sub = &r;
        if (r.name == g.super) super = &r;
      }
      b.inc(dl::atomic(reify_concept(g.sub)),
            dl::atomic(reify_concept(g.super)), prov);
      b.rinc(plain(sub->arg1.name), plain(super->arg1.name), prov);
      b.rinc(plain(sub->arg2.name), plain(super->arg2.name), prov);
    } else {
      b.rinc(plain(g.sub), plain(g.super), prov);
    }
  }

  b.out.profile = dl::classify_fragment(b.out.kb);
  if (b.out.profile.temporal_roles && b.out.profile.ops != dl::OpSet::box_only)
    throw UnsupportedCombination(
        "schema needs temporalised roles together with next/eventuality "
        "operators; no engine covers the combination",
        diagnose(s, opt), std::move(b.out));
  return b.out;
}

std::vector<OffendingPair> diagnose(const Schema& s, const CompileOptions&) {
  validate(s);
  // Marked roles come only from lifespan cardinalities (with at least one
  // bound); next/eventuality operators only from evolution edges.
  std::vector<std::string> marked, evo;
  for (auto& c : s.cardinalities)
    if (c.lifespan && (c.lo >= 1 || c.hi >= 0))
      marked.push_back("lifespan:" + c.relationship + "." + c.arg);
  for (auto& e : s.evolution)
    evo.push_back("evolution:" + evo_name(e.kind) + ":" + e.from + ">" + e.to);
  std::vector<OffendingPair> out;
  if (marked.empty() || evo.empty()) return out;
  for (auto& m : marked)
    for (auto& v : evo) out.push_back({m, v});
  return out;
}

}  // namespace tdlite::cm
