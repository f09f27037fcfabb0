#include "rwkit/condition.hpp"

#include <cctype>
#include <cstring>
#include <memory>

namespace rwkit {

std::vector<Symbol> condition_vocabulary() {
  return {
      {"true", 0},     {"false", 0},  {"and", 2},      {"or", 2},
      {"not", 1},      {"eq", 2},     {"neq", 2},      {"in", 2},
      {"subset", 2},   {"disjoint", 2}, {"empty", 1},  {"theta", 1},
      {"hasbc", 3},    {"regionof", 1}, {"kindof", 2},
  };
}

void declare_condition_vocabulary(Signature& sig) {
  for (const auto& s : condition_vocabulary()) sig.declare(s.name, s.arity);
}

bool is_condition_symbol(const std::string& name) {
  for (const auto& s : condition_vocabulary()) {
    if (s.name == name) return true;
  }
  return false;
}

TermPtr cond_true() { return Term::app(Symbol{"true", 0}, {}); }

namespace {

struct CCursor {
  const std::string& text;
  size_t pos;

  void skip_ws() {
    while (pos < text.size() &&
           std::isspace(static_cast<unsigned char>(text[pos]))) {
      ++pos;
    }
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  bool at_word(const char* w) {
    skip_ws();
    size_t n = std::strlen(w);
    if (text.compare(pos, n, w) != 0) return false;
    size_t after = pos + n;
    if (after < text.size() &&
        (std::isalnum(static_cast<unsigned char>(text[after])) ||
         text[after] == '_')) {
      return false;
    }
    return true;
  }

  bool eat_word(const char* w) {
    if (!at_word(w)) return false;
    pos += std::strlen(w);
    return true;
  }
};

TermPtr mk(const char* name, std::vector<TermPtr> kids) {
  return Term::app(Symbol{name, static_cast<int>(kids.size())},
                   std::move(kids));
}

class CParser {
public:
  CParser(const Signature& sig) {
    ext_ = sig;
    declare_condition_vocabulary(ext_);
    parser_ = std::make_unique<TermParser>(ext_);
  }

  TermPtr or_expr(CCursor& cur) {
    TermPtr a = and_expr(cur);
    while (cur.eat_word("or")) a = mk("or", {a, and_expr(cur)});
    return a;
  }

private:
  TermPtr and_expr(CCursor& cur) {
    TermPtr a = unary(cur);
    while (cur.eat_word("and")) a = mk("and", {a, unary(cur)});
    return a;
  }

  TermPtr unary(CCursor& cur) {
    if (cur.eat_word("not")) return mk("not", {unary(cur)});
    if (cur.peek() == '(') {
      ++cur.pos;
      TermPtr inner = or_expr(cur);
      if (cur.peek() != ')') {
        throw ParseError("expected ')' in condition", 1,
                         static_cast<int>(cur.pos) + 1);
      }
      ++cur.pos;
      return maybe_cmp(cur, inner);
    }
    TermPtr t = parser_->parse_prefix(cur.text, cur.pos);
    return maybe_cmp(cur, t);
  }

  TermPtr maybe_cmp(CCursor& cur, TermPtr lhs) {
    cur.skip_ws();
    if (cur.pos + 1 < cur.text.size() && cur.text[cur.pos] == '!' &&
        cur.text[cur.pos + 1] == '=') {
      cur.pos += 2;
      return mk("neq", {lhs, parser_->parse_prefix(cur.text, cur.pos)});
    }
    if (cur.pos < cur.text.size() && cur.text[cur.pos] == '=') {
      ++cur.pos;
      return mk("eq", {lhs, parser_->parse_prefix(cur.text, cur.pos)});
    }
    if (cur.eat_word("in")) {
      return mk("in", {lhs, parser_->parse_prefix(cur.text, cur.pos)});
    }
    return lhs;
  }

  Signature ext_;
  std::unique_ptr<TermParser> parser_;
};

}  // namespace

TermPtr parse_condition_prefix(const std::string& text, size_t& pos,
                               const Signature& sig) {
  CCursor cur{text, pos};
  CParser p(sig);
  TermPtr c = p.or_expr(cur);
  pos = cur.pos;
  return c;
}

TermPtr parse_condition(const std::string& text, const Signature& sig) {
  size_t pos = 0;
  TermPtr c = parse_condition_prefix(text, pos, sig);
  CCursor cur{text, pos};
  cur.skip_ws();
  if (cur.pos != text.size()) {
    throw ParseError("trailing input after condition", 1,
                     static_cast<int>(cur.pos) + 1);
  }
  return c;
}

}  // namespace rwkit
