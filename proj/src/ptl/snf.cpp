#include "tdlite/ptl/snf.hpp"

#include <set>
#include <sstream>
#include <stdexcept>

namespace tdlite::ptl {

namespace {

std::string lit_text(const SnfLit& l) { return l.pos ? l.var : "!" + l.var; }

std::string join(const std::vector<SnfLit>& ls, const char* sep, const char* empty) {
  if (ls.empty()) return empty;
  std::string out;
  for (size_t i = 0; i < ls.size(); ++i) {
    if (i) out += sep;
    out += lit_text(ls[i]);
  }
  return out;
}

F lit_formula(const SnfLit& l) {
  return l.pos ? var(l.var) : f_not(var(l.var));
}

F conj_formula(const std::vector<SnfLit>& ls) {
  std::vector<F> fs;
  for (auto& l : ls) fs.push_back(lit_formula(l));
  return conj(fs);
}

F disj_formula(const std::vector<SnfLit>& ls) {
  std::vector<F> fs;
  for (auto& l : ls) fs.push_back(lit_formula(l));
  return disj(fs);
}

// Fresh-variable source avoiding a set of reserved names.
struct Names {
  std::set<std::string> used;
  std::string prefix;
  int counter = 0;
  std::string fresh() {
    for (;;) {
      std::string n = prefix + std::to_string(counter++);
      if (used.insert(n).second) return n;
    }
  }
};

SnfLit parse_lit(const std::string& tok) {
  if (tok.empty()) throw std::runtime_error("empty literal");
  if (tok[0] == '!') {
    if (tok.size() == 1) throw std::runtime_error("bare negation");
    return {tok.substr(1), false};
  }
  return {tok, true};
}

std::vector<std::string> split_on(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) { parts.push_back(cur); cur.clear(); }
    else if (!isspace((unsigned char)c)) cur += c;
  }
  parts.push_back(cur);
  return parts;
}

std::vector<SnfLit> parse_disj(const std::string& s) {
  std::string t;
  for (char c : s) if (!isspace((unsigned char)c)) t += c;
  if (t == "false") return {};
  std::vector<SnfLit> out;
  for (auto& p : split_on(s, '|')) out.push_back(parse_lit(p));
  return out;
}

std::vector<SnfLit> parse_conj(const std::string& s) {
  std::string t;
  for (char c : s) if (!isspace((unsigned char)c)) t += c;
  if (t == "true") return {};
  std::vector<SnfLit> out;
  for (auto& p : split_on(s, '&')) out.push_back(parse_lit(p));
  return out;
}

}  // namespace

std::string SnfClauseSet::to_text() const {
  std::ostringstream out;
  for (auto& c : init) out << "init: " << join(c, " | ", "false") << "\n";
  for (auto& c : step)
    out << "step: " << join(c.pre, " & ", "true") << " -> X("
        << join(c.post, " | ", "false") << ")\n";
  for (auto& c : ev)
    out << (c.future ? "evF: " : "evP: ") << join(c.pre, " & ", "true")
        << " -> " << (c.future ? "F " : "P ") << lit_text(c.lit) << "\n";
  return out.str();
}

F SnfClauseSet::to_formula() const {
  std::vector<F> parts;
  for (auto& c : init) parts.push_back(disj_formula(c));
  std::vector<F> global;
  for (auto& c : step)
    global.push_back(implies(conj_formula(c.pre), next_f(disj_formula(c.post))));
  for (auto& c : ev) {
    F target = c.future ? dia_f(lit_formula(c.lit)) : dia_p(lit_formula(c.lit));
    global.push_back(implies(conj_formula(c.pre), target));
  }
  if (!global.empty()) parts.push_back(always(conj(global)));
  return conj(parts);
}

size_t SnfClauseSet::literal_count() const {
  size_t n = 0;
  for (auto& c : init) n += c.size();
  for (auto& c : step) n += c.pre.size() + c.post.size();
  for (auto& c : ev) n += c.pre.size() + 1;
  return n;
}

SnfClauseSet snf_from_text(const std::string& text) {
  SnfClauseSet s;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    size_t start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    line = line.substr(start);
    auto colon = line.find(':');
    if (colon == std::string::npos) throw std::runtime_error("missing kind: " + line);
    std::string kind = line.substr(0, colon);
    std::string body = line.substr(colon + 1);
    if (kind == "init") {
      s.init.push_back(parse_disj(body));
    } else if (kind == "step") {
      auto arrow = body.find("->");
      auto open = body.find("X(", arrow == std::string::npos ? 0 : arrow);
      auto close = body.rfind(')');
      if (arrow == std::string::npos || open == std::string::npos ||
          close == std::string::npos || close < open)
        throw std::runtime_error("malformed step clause: " + line);
      s.step.push_back({parse_conj(body.substr(0, arrow)),
                        parse_disj(body.substr(open + 2, close - open - 2))});
    } else if (kind == "evF" || kind == "evP") {
      bool future = kind == "evF";
      auto arrow = body.find("->");
      if (arrow == std::string::npos) throw std::runtime_error("malformed eventuality: " + line);
      std::string rhs = body.substr(arrow + 2);
      size_t p = rhs.find_first_not_of(" \t");
      if (p == std::string::npos || rhs[p] != (future ? 'F' : 'P'))
        throw std::runtime_error("malformed eventuality target: " + line);
      s.ev.push_back({parse_conj(body.substr(0, arrow)),
                      parse_lit(split_on(rhs.substr(p + 1), ' ').back()), future});
    } else {
      throw std::runtime_error("unknown clause kind: " + kind);
    }
  }
  return s;
}

FlatResult flatten(const F& f) {
  auto cl = closure(f);
  Names nm;
  for (auto& v : variables(f)) nm.used.insert(v);
  nm.prefix = "_f";
  std::map<std::string, std::string> name;
  FlatResult out;
  for (auto& item : cl) {
    std::string key = to_string(item);
    if (item->op == Op::Var) { name[key] = item->name; continue; }
    std::string x = nm.fresh();
    name[key] = x;
    F xa = item->a ? var(name.at(to_string(item->a))) : nullptr;
    F xb = item->b ? var(name.at(to_string(item->b))) : nullptr;
    switch (item->op) {
      case Op::False: out.phi.push_back(f_not(var(x))); break;
      case Op::Not: out.phi.push_back(iff(var(x), f_not(xa))); break;
      case Op::And: out.phi.push_back(iff(var(x), f_and(xa, xb))); break;
      case Op::Or: out.phi.push_back(iff(var(x), f_or(xa, xb))); break;
      case Op::NextF: out.phi.push_back(iff(var(x), next_f(xa))); break;
      // x <-> previous(a) shifts to a <-> next(x); over Z the two are the
      // same constraint, and the flat form is then past-next free.
      case Op::NextP: out.phi.push_back(iff(xa, next_f(var(x)))); break;
      case Op::Until: out.phi.push_back(iff(var(x), until(xa, xb))); break;
      case Op::Since: out.phi.push_back(iff(var(x), since(xa, xb))); break;
      case Op::BoxF: out.phi.push_back(iff(var(x), box_f(xa))); break;
      case Op::BoxP: out.phi.push_back(iff(var(x), box_p(xa))); break;
      case Op::DiaF: out.phi.push_back(iff(var(x), dia_f(xa))); break;
      case Op::DiaP: out.phi.push_back(iff(var(x), dia_p(xa))); break;
      case Op::Var: break;
    }
  }
  out.psi = var(name.at(to_string(f)));
  return out;
}

namespace {

F replace_boxes(const F& f, Names& nm, std::map<std::string, std::string>& table,
                std::vector<F>& links) {
  if (!f->a) return f;
  if (f->op == Op::BoxF || f->op == Op::BoxP) {
    std::string key = to_string(f);
    auto it = table.find(key);
    if (it == table.end()) {
      std::string s = nm.fresh();
      it = table.emplace(key, s).first;
      links.push_back(iff(var(s), f));
    }
    return var(it->second);
  }
  F a = replace_boxes(f->a, nm, table, links);
  F b = f->b ? replace_boxes(f->b, nm, table, links) : nullptr;
  switch (f->op) {
    case Op::Not: return f_not(a);
    case Op::And: return f_and(a, b);
    case Op::Or: return f_or(a, b);
    case Op::NextF: return next_f(a);
    case Op::NextP: return next_p(a);
    case Op::Until: return until(a, b);
    case Op::Since: return since(a, b);
    case Op::DiaF: return dia_f(a);
    case Op::DiaP: return dia_p(a);
    default: return f;
  }
}

}  // namespace

SurrogateResult introduce_surrogates(const std::vector<F>& phi) {
  SurrogateResult out;
  Names nm;
  nm.prefix = "_b";
  for (auto& f : phi)
    for (auto& v : variables(f)) nm.used.insert(v);
  for (auto& f : phi)
    out.phi.push_back(replace_boxes(f, nm, out.table, out.links));
  return out;
}

SnfClauseSet to_snf(const F& f) {
  auto cl = closure(f);
  bool temporal = temporal_count(cl) > 0;
  Names nm;
  for (auto& v : variables(f)) nm.used.insert(v);
  nm.prefix = "_s";
  std::map<std::string, std::string> name;
  SnfClauseSet s;
  // A purely propositional input lives at instant 0 only, so its renaming
  // clauses go to the initial block and the result has no step clauses.
  auto global = [&](std::vector<SnfLit> c) {
    if (temporal) s.step.push_back({{}, std::move(c)});
    else s.init.push_back(std::move(c));
  };
  for (auto& item : cl) {
    std::string key = to_string(item);
    if (item->op == Op::Var) { name[key] = item->name; continue; }
    std::string x = nm.fresh();
    name[key] = x;
    std::string a = item->a ? name.at(to_string(item->a)) : "";
    std::string b = item->b ? name.at(to_string(item->b)) : "";
    switch (item->op) {
      case Op::False:
        global({{x, false}});
        break;
      case Op::Not:
        global({{x, false}, {a, false}});
        global({{x, true}, {a, true}});
        break;
      case Op::And:
        global({{x, false}, {a, true}});
        global({{x, false}, {b, true}});
        global({{x, true}, {a, false}, {b, false}});
        break;
      case Op::Or:
        global({{x, true}, {a, false}});
        global({{x, true}, {b, false}});
        global({{x, false}, {a, true}, {b, true}});
        break;
      case Op::NextF:
        s.step.push_back({{{x, true}}, {{a, true}}});
        s.step.push_back({{{x, false}}, {{a, false}}});
        break;
      case Op::NextP:
        s.step.push_back({{{a, true}}, {{x, true}}});
        s.step.push_back({{{a, false}}, {{x, false}}});
        break;
      case Op::Until:
        s.step.push_back({{{x, true}}, {{b, true}, {a, true}}});
        s.step.push_back({{{x, true}}, {{b, true}, {x, true}}});
        s.step.push_back({{{x, false}}, {{b, false}}});
        s.step.push_back({{{x, false}}, {{a, false}, {x, false}}});
        s.ev.push_back({{{x, true}}, {b, true}, true});
        break;
      case Op::Since:
        s.step.push_back({{{b, true}}, {{x, true}}});
        s.step.push_back({{{a, true}, {x, true}}, {{x, true}}});
        s.step.push_back({{{b, false}, {a, false}}, {{x, false}}});
        s.step.push_back({{{b, false}, {x, false}}, {{x, false}}});
        s.ev.push_back({{{x, true}}, {b, true}, false});
        break;
      case Op::BoxF:
        s.step.push_back({{{x, true}}, {{a, true}}});
        s.step.push_back({{{x, true}}, {{x, true}}});
        s.ev.push_back({{{x, false}}, {a, false}, true});
        break;
      case Op::BoxP:
        s.step.push_back({{{a, false}}, {{x, false}}});
        s.step.push_back({{{x, false}}, {{x, false}}});
        s.ev.push_back({{{x, false}}, {a, false}, false});
        break;
      case Op::DiaF:
        s.step.push_back({{{x, false}}, {{a, false}}});
        s.step.push_back({{{x, false}}, {{x, false}}});
        s.ev.push_back({{{x, true}}, {a, true}, true});
        break;
      case Op::DiaP:
        s.step.push_back({{{a, true}}, {{x, true}}});
        s.step.push_back({{{x, true}}, {{x, true}}});
        s.ev.push_back({{{x, true}}, {a, true}, false});
        break;
      case Op::Var:
        break;
    }
  }
  s.init.push_back({{name.at(to_string(f)), true}});
  s.names = std::move(name);
  return s;
}

}  // namespace tdlite::ptl
