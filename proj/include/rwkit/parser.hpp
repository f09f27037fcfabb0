#pragma once

#include <functional>
#include <string>

#include "rwkit/term.hpp"

namespace rwkit {

struct ParseError : RwError {
  ParseError(const std::string& msg, int line, int col)
      : RwError(msg + " at line " + std::to_string(line) + ", column " +
                std::to_string(col)),
        line(line),
        col(col) {}
  int line;
  int col;
};

/// Recursive-descent parser for the canonical term syntax.
///
///   term  ::= '?'NAME | NAME | NAME '(' args ')' | '[' args ']' | '{' args '}'
///   args  ::= empty | term (',' term)*
///
/// Brackets and braces are sugar for cons/nil chains. Symbols must be
/// declared in the signature; numerals are auto-declared as constants.
class TermParser {
public:
  explicit TermParser(const Signature& sig) : sig_(&sig) {}

  /// Resolver for `@name` references (named shortcut terms). Optional.
  using DefResolver = std::function<TermPtr(const std::string&)>;
  void set_def_resolver(DefResolver r) { defs_ = std::move(r); }

  /// Accept undeclared symbols by registering them on the fly (used for
  /// meta-signature parsing where fixpoint constants appear).
  void set_lenient(bool lenient) { lenient_ = lenient; }

  TermPtr parse(const std::string& text);

  /// Parses one term starting at pos; leaves pos after it.
  TermPtr parse_prefix(const std::string& text, size_t& pos, int line = 1);

private:
  const Signature* sig_;
  DefResolver defs_;
  bool lenient_ = false;
};

bool is_numeral(const std::string& s);

}  // namespace rwkit
