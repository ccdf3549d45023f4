#include "tdlite/dl/parser.hpp"

#include <cctype>
#include <stdexcept>
#include <vector>

namespace tdlite::dl {

namespace {

struct Token {
  std::string text;
  int line = 1, col = 1;
};

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto push = [&](std::string t, int l, int c) {
    out.push_back({std::move(t), l, c});
  };
  while (i < s.size()) {
    char ch = s[i];
    if (ch == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (std::isspace((unsigned char)ch)) {
      ++col;
      ++i;
      continue;
    }
    int l = line, c = col;
    // Letter-plus-sign operator tokens win over identifiers.
    if ((ch == 'X' || ch == 'G' || ch == 'F') && i + 1 < s.size() &&
        (s[i + 1] == '+' || s[i + 1] == '-' ||
         (s[i + 1] == '*' && ch != 'X'))) {
      push(s.substr(i, 2), l, c);
      i += 2;
      col += 2;
      continue;
    }
    if (std::isalpha((unsigned char)ch) || ch == '_') {
      size_t j = i;
      while (j < s.size() &&
             (std::isalnum((unsigned char)s[j]) || s[j] == '_'))
        ++j;
      push(s.substr(i, j - i), l, c);
      col += (int)(j - i);
      i = j;
      continue;
    }
    if (std::isdigit((unsigned char)ch) ||
        (ch == '-' && i + 1 < s.size() &&
         std::isdigit((unsigned char)s[i + 1]))) {
      size_t j = i + 1;
      while (j < s.size() && std::isdigit((unsigned char)s[j])) ++j;
      push(s.substr(i, j - i), l, c);
      col += (int)(j - i);
      i = j;
      continue;
    }
    static const char* two[] = {"<=", ">=", "=<", "^-", nullptr};
    bool took = false;
    for (int k = 0; two[k]; ++k) {
      if (s.compare(i, 2, two[k]) == 0) {
        push(two[k], l, c);
        i += 2;
        col += 2;
        took = true;
        break;
      }
    }
    if (took) continue;
    if (std::string("{}();,@").find(ch) != std::string::npos) {
      push(std::string(1, ch), l, c);
      ++i;
      ++col;
      continue;
    }
    throw std::runtime_error(std::to_string(l) + ":" + std::to_string(c) +
                             ": unexpected character '" +
                             std::string(1, ch) + "'");
  }
  return out;
}

struct Parser {
  std::vector<Token> toks;
  size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) {
    if (pos < toks.size())
      throw std::runtime_error(std::to_string(toks[pos].line) + ":" +
                               std::to_string(toks[pos].col) + ": " + msg +
                               " (got '" + toks[pos].text + "')");
    throw std::runtime_error("unexpected end of input: " + msg);
  }

  bool peek(const std::string& t) const {
    return pos < toks.size() && toks[pos].text == t;
  }

  bool eat(const std::string& t) {
    if (!peek(t)) return false;
    ++pos;
    return true;
  }

  void expect(const std::string& t) {
    if (!eat(t)) fail("expected '" + t + "'");
  }

  static bool is_ident(const std::string& t) {
    if (t.empty() || (!std::isalpha((unsigned char)t[0]) && t[0] != '_'))
      return false;
    static const char* kw[] = {"not", "and", "or",   "U",     "S",
                               "bot", "top", "box",  "dia",   "rigid",
                               "flexible",   "roles", "tbox", "rbox",
                               "abox", nullptr};
    for (int k = 0; kw[k]; ++k)
      if (t == kw[k]) return false;
    return true;
  }

  std::string ident(const std::string& what) {
    if (pos >= toks.size() || !is_ident(toks[pos].text))
      fail("expected " + what);
    return toks[pos++].text;
  }

  long integer() {
    if (pos >= toks.size()) fail("expected a number");
    try {
      size_t used = 0;
      long v = std::stol(toks[pos].text, &used);
      if (used != toks[pos].text.size()) fail("expected a number");
      ++pos;
      return v;
    } catch (const std::invalid_argument&) {
      fail("expected a number");
    } catch (const std::out_of_range&) {
      fail("number out of range");
    }
  }

  Role role() {
    if (eat("box")) return role_box(role());
    if (eat("dia")) return role_dia(role());
    Role r;
    r.base = ident("a role name");
    if (eat("^-")) r.inverted = true;
    return r;
  }

  C concept_expr() {
    C a = unary();
    if (eat("and")) return c_and(a, unary());
    if (eat("or")) return c_or(a, unary());
    if (eat("U")) return c_until(a, unary());
    if (eat("S")) return c_since(a, unary());
    return a;
  }

  C unary() {
    if (eat("not")) return c_not(unary());
    if (eat("X+")) return c_next_f(unary());
    if (eat("X-")) return c_next_p(unary());
    if (eat("G+")) return c_box_f(unary());
    if (eat("G-")) return c_box_p(unary());
    if (eat("F+")) return c_dia_f(unary());
    if (eat("F-")) return c_dia_p(unary());
    if (eat("G*")) return c_always(unary());
    if (eat("F*")) return c_sometime(unary());
    if (eat(">=")) {
      long q = integer();
      if (q < 1) fail("restriction needs a positive count");
      return at_least((int)q, role());
    }
    if (eat("=<")) {
      long q = integer();
      if (q < 0) fail("restriction needs a non-negative count");
      return at_most((int)q, role());
    }
    return atom();
  }

  C atom() {
    if (eat("bot")) return c_bot();
    if (eat("top")) return c_top();
    if (eat("(")) {
      C c = concept_expr();
      expect(")");
      return c;
    }
    return atomic(ident("a concept"));
  }

  KnowledgeBase kb() {
    KnowledgeBase out;
    while (pos < toks.size()) {
      if (eat("roles")) {
        expect("{");
        while (!eat("}")) {
          bool rigid = eat("rigid");
          if (!rigid) expect("flexible");
          out.roles.push_back({ident("a role name"), rigid});
          expect(";");
        }
      } else if (eat("tbox")) {
        expect("{");
        while (!eat("}")) {
          C lhs = concept_expr();
          expect("<=");
          C rhs = concept_expr();
          expect(";");
          out.tbox.push_back({lhs, rhs});
        }
      } else if (eat("rbox")) {
        expect("{");
        while (!eat("}")) {
          Role lhs = role();
          expect("<=");
          Role rhs = role();
          expect(";");
          if (lhs.mark != RoleMark::plain || rhs.mark != RoleMark::plain)
            fail("role inclusions take unmarked roles");
          out.rbox.push_back({lhs, rhs});
        }
      } else if (eat("abox")) {
        expect("{");
        while (!eat("}")) {
          AboxAssertion a;
          a.positive = !eat("not");
          a.name = ident("a concept or role name");
          expect("(");
          a.obj1 = ident("an object name");
          if (eat(",")) {
            a.is_role = true;
            a.obj2 = ident("an object name");
          }
          expect(")");
          expect("@");
          a.timestamp = integer();
          expect(";");
          out.abox.push_back(a);
        }
      } else {
        fail("expected a roles/tbox/rbox/abox section");
      }
    }
    return out;
  }
};

}  // namespace

KnowledgeBase parse_kb(const std::string& text) {
  Parser p{lex(text)};
  return p.kb();
}

C parse_concept(const std::string& text) {
  Parser p{lex(text)};
  C c = p.concept_expr();
  if (p.pos != p.toks.size()) p.fail("trailing input after concept");
  return c;
}

std::string print_kb(const KnowledgeBase& kb) {
  std::string s;
  if (!kb.roles.empty()) {
    s += "roles {\n";
    for (auto& d : kb.roles)
      s += std::string("  ") + (d.rigid ? "rigid " : "flexible ") + d.name +
           " ;\n";
    s += "}\n";
  }
  s += "tbox {\n";
  for (auto& i : kb.tbox)
    s += "  " + to_string(i.lhs) + " <= " + to_string(i.rhs) + " ;\n";
  s += "}\n";
  if (!kb.rbox.empty()) {
    s += "rbox {\n";
    for (auto& i : kb.rbox)
      s += "  " + to_string(i.lhs) + " <= " + to_string(i.rhs) + " ;\n";
    s += "}\n";
  }
  s += "abox {\n";
  for (auto& a : kb.abox) {
    s += "  ";
    if (!a.positive) s += "not ";
    s += a.name + "(" + a.obj1;
    if (a.is_role) s += "," + a.obj2;
    s += ") @ " + std::to_string(a.timestamp) + " ;\n";
  }
  s += "}\n";
  return s;
}

}  // namespace tdlite::dl
