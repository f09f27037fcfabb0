#include "rwkit/parser.hpp"

#include <cctype>

namespace rwkit {

bool is_numeral(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

namespace {

struct Cursor {
  const std::string& text;
  size_t pos = 0;
  int line = 1;
  int col = 1;

  void advance() {
    if (pos < text.size()) {
      if (text[pos] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++pos;
    }
  }

  void skip_ws() {
    while (pos < text.size() &&
           std::isspace(static_cast<unsigned char>(text[pos]))) {
      advance();
    }
  }

  bool eof() {
    skip_ws();
    return pos >= text.size();
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  void expect(char c) {
    if (peek() != c) {
      throw ParseError(std::string("expected '") + c + "', found '" +
                           (pos < text.size() ? std::string(1, text[pos])
                                              : std::string("<eof>")) +
                           "'",
                       line, col);
    }
    advance();
  }

  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(msg, line, col);
  }
};

bool name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::string read_name(Cursor& cur) {
  cur.skip_ws();
  std::string out;
  while (cur.pos < cur.text.size() && name_char(cur.text[cur.pos])) {
    out.push_back(cur.text[cur.pos]);
    cur.advance();
  }
  if (out.empty()) cur.fail("expected a name");
  return out;
}

class Impl {
public:
  Impl(const Signature& sig, const TermParser::DefResolver& defs, bool lenient)
      : sig_(sig), defs_(defs), lenient_(lenient) {}

  TermPtr term(Cursor& cur) {
    char c = cur.peek();
    if (c == '?') {
      cur.advance();
      return Term::var(read_name(cur));
    }
    if (c == '[' || c == '{') {
      char close = (c == '[') ? ']' : '}';
      cur.advance();
      std::vector<TermPtr> items;
      if (cur.peek() != close) {
        items.push_back(term(cur));
        while (cur.peek() == ',') {
          cur.advance();
          items.push_back(term(cur));
        }
      }
      cur.expect(close);
      return make_list(items);
    }
    if (c == '@') {
      cur.advance();
      std::string name = read_name(cur);
      if (!defs_) cur.fail("no shortcut definitions available for @" + name);
      TermPtr t = defs_(name);
      if (!t) cur.fail("undefined shortcut @" + name);
      return t;
    }
    std::string name = read_name(cur);
    std::vector<TermPtr> kids;
    bool applied = false;
    if (cur.peek() == '(') {
      applied = true;
      cur.advance();
      if (cur.peek() != ')') {
        kids.push_back(term(cur));
        while (cur.peek() == ',') {
          cur.advance();
          kids.push_back(term(cur));
        }
      }
      cur.expect(')');
    }
    int want = static_cast<int>(kids.size());
    if (sig_.knows(name)) {
      if (sig_.arity(name) != want) {
        cur.fail("symbol '" + name + "' expects " +
                 std::to_string(sig_.arity(name)) + " arguments, got " +
                 std::to_string(want));
      }
    } else if (!is_numeral(name) && !lenient_) {
      cur.fail("unknown symbol '" + name + "'");
    }
    (void)applied;
    return Term::app(Symbol{name, want}, std::move(kids));
  }

private:
  const Signature& sig_;
  const TermParser::DefResolver& defs_;
  bool lenient_;
};

}  // namespace

TermPtr TermParser::parse(const std::string& text) {
  Cursor cur{text};
  Impl impl(*sig_, defs_, lenient_);
  TermPtr t = impl.term(cur);
  if (!cur.eof()) cur.fail("trailing input after term");
  return t;
}

TermPtr TermParser::parse_prefix(const std::string& text, size_t& pos,
                                 int line) {
  Cursor cur{text};
  cur.pos = pos;
  cur.line = line;
  Impl impl(*sig_, defs_, lenient_);
  TermPtr t = impl.term(cur);
  pos = cur.pos;
  return t;
}

}  // namespace rwkit
