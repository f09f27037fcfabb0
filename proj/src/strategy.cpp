#include "rwkit/strategy.hpp"

#include <cctype>
#include <map>
#include <sstream>

#include "rwkit/condition.hpp"
#include "rwkit/parser.hpp"

namespace rwkit {

StrategyPtr Strategy::rule(TermPtr l, TermPtr r, TermPtr cond,
                           std::string name) {
  auto s = std::shared_ptr<Strategy>(new Strategy());
  s->kind_ = StrKind::Rule;
  s->lhs_ = std::move(l);
  s->rhs_ = std::move(r);
  s->cond_ = std::move(cond);
  s->name_ = std::move(name);
  return s;
}

StrategyPtr Strategy::seq(StrategyPtr a, StrategyPtr b) {
  auto s = std::shared_ptr<Strategy>(new Strategy());
  s->kind_ = StrKind::Seq;
  s->a_ = std::move(a);
  s->b_ = std::move(b);
  return s;
}

StrategyPtr Strategy::choice(StrategyPtr a, StrategyPtr b) {
  auto s = std::shared_ptr<Strategy>(new Strategy());
  s->kind_ = StrKind::Choice;
  s->a_ = std::move(a);
  s->b_ = std::move(b);
  return s;
}

StrategyPtr Strategy::eta(StrategyPtr a) {
  auto s = std::shared_ptr<Strategy>(new Strategy());
  s->kind_ = StrKind::Eta;
  s->a_ = std::move(a);
  return s;
}

StrategyPtr Strategy::some(StrategyPtr a) {
  auto s = std::shared_ptr<Strategy>(new Strategy());
  s->kind_ = StrKind::Some;
  s->a_ = std::move(a);
  return s;
}

StrategyPtr Strategy::child(int j, StrategyPtr a) {
  auto s = std::shared_ptr<Strategy>(new Strategy());
  s->kind_ = StrKind::Child;
  s->j_ = j;
  s->a_ = std::move(a);
  return s;
}

StrategyPtr Strategy::fixvar(std::string name) {
  auto s = std::shared_ptr<Strategy>(new Strategy());
  s->kind_ = StrKind::FixVar;
  s->name_ = std::move(name);
  return s;
}

StrategyPtr Strategy::mu(std::string name, StrategyPtr body) {
  auto s = std::shared_ptr<Strategy>(new Strategy());
  s->kind_ = StrKind::Mu;
  s->name_ = std::move(name);
  s->a_ = std::move(body);
  return s;
}

StrategyPtr top_down(StrategyPtr s) {
  return Strategy::mu(
      "X", Strategy::choice(std::move(s),
                            Strategy::some(Strategy::fixvar("X"))));
}

StrategyPtr outer_most(StrategyPtr s) {
  return Strategy::mu(
      "X",
      Strategy::seq(std::move(s), Strategy::some(Strategy::fixvar("X"))));
}

StrategyPtr bottom_up(StrategyPtr s) {
  return Strategy::mu(
      "X", Strategy::choice(Strategy::some(Strategy::fixvar("X")),
                            std::move(s)));
}

StrategyPtr inner_most(StrategyPtr s) {
  return Strategy::mu(
      "X",
      Strategy::seq(Strategy::some(Strategy::fixvar("X")), std::move(s)));
}

StrategyPtr normalizer(StrategyPtr s) {
  return Strategy::mu("X",
                      Strategy::seq(std::move(s), Strategy::fixvar("X")));
}

StrategyPtr repeat_until_fail(StrategyPtr s) {
  return Strategy::mu(
      "X",
      Strategy::eta(Strategy::seq(std::move(s), Strategy::fixvar("X"))));
}

StrategyPtr everywhere(StrategyPtr s) {
  // mu X.( (s ; eta(Some(X))) (+) Some(X) ): rewrite here and continue
  // into the result's children, or rewrite somewhere below.
  auto X = [] { return Strategy::fixvar("X"); };
  return Strategy::mu(
      "X", Strategy::choice(
               Strategy::seq(std::move(s),
                             Strategy::eta(Strategy::some(X()))),
               Strategy::some(X())));
}

static void scan_unbound(const StrategyPtr& s, std::vector<std::string>& bound,
                         std::optional<std::string>& found) {
  if (found) return;
  switch (s->kind()) {
    case StrKind::Rule:
      return;
    case StrKind::Seq:
    case StrKind::Choice:
      scan_unbound(s->first(), bound, found);
      scan_unbound(s->second(), bound, found);
      return;
    case StrKind::Eta:
    case StrKind::Some:
    case StrKind::Child:
      scan_unbound(s->first(), bound, found);
      return;
    case StrKind::FixVar:
      for (auto it = bound.rbegin(); it != bound.rend(); ++it) {
        if (*it == s->var()) return;
      }
      found = s->var();
      return;
    case StrKind::Mu:
      bound.push_back(s->var());
      scan_unbound(s->first(), bound, found);
      bound.pop_back();
      return;
  }
}

std::optional<std::string> unbound_fixvar(const StrategyPtr& s) {
  std::vector<std::string> bound;
  std::optional<std::string> found;
  scan_unbound(s, bound, found);
  return found;
}

void check_closed(const StrategyPtr& s) {
  if (auto v = unbound_fixvar(s)) throw UnboundFixVar(*v);
}

static bool alpha_eq(const StrategyPtr& a, const StrategyPtr& b,
                     std::vector<std::pair<std::string, std::string>>& env) {
  if (a->kind() != b->kind()) return false;
  switch (a->kind()) {
    case StrKind::Rule: {
      auto opt_eq = [](const TermPtr& x, const TermPtr& y) {
        if (!x || !y) return !x && !y;
        return term_equal(x, y);
      };
      return term_equal(a->lhs(), b->lhs()) && term_equal(a->rhs(), b->rhs()) &&
             opt_eq(a->cond(), b->cond());
    }
    case StrKind::Seq:
    case StrKind::Choice:
      return alpha_eq(a->first(), b->first(), env) &&
             alpha_eq(a->second(), b->second(), env);
    case StrKind::Eta:
    case StrKind::Some:
      return alpha_eq(a->first(), b->first(), env);
    case StrKind::Child:
      return a->child_index() == b->child_index() &&
             alpha_eq(a->first(), b->first(), env);
    case StrKind::FixVar:
      for (auto it = env.rbegin(); it != env.rend(); ++it) {
        if (it->first == a->var() || it->second == b->var()) {
          return it->first == a->var() && it->second == b->var();
        }
      }
      return a->var() == b->var();
    case StrKind::Mu: {
      env.emplace_back(a->var(), b->var());
      bool ok = alpha_eq(a->first(), b->first(), env);
      env.pop_back();
      return ok;
    }
  }
  return false;
}

bool strategy_alpha_equal(const StrategyPtr& a, const StrategyPtr& b) {
  std::vector<std::pair<std::string, std::string>> env;
  return alpha_eq(a, b, env);
}

static void print_strategy(const StrategyPtr& s, std::ostringstream& os) {
  switch (s->kind()) {
    case StrKind::Rule:
      os << "rule(" << to_text(s->lhs()) << "," << to_text(s->rhs());
      if (s->cond()) os << "," << to_text(s->cond());
      os << ")";
      return;
    case StrKind::Seq:
      os << "seq(";
      print_strategy(s->first(), os);
      os << ",";
      print_strategy(s->second(), os);
      os << ")";
      return;
    case StrKind::Choice:
      os << "lchoice(";
      print_strategy(s->first(), os);
      os << ",";
      print_strategy(s->second(), os);
      os << ")";
      return;
    case StrKind::Eta:
      os << "eta(";
      print_strategy(s->first(), os);
      os << ")";
      return;
    case StrKind::Some:
      os << "some(";
      print_strategy(s->first(), os);
      os << ")";
      return;
    case StrKind::Child:
      os << "child(" << s->child_index() << ",";
      print_strategy(s->first(), os);
      os << ")";
      return;
    case StrKind::FixVar:
      os << s->var();
      return;
    case StrKind::Mu:
      os << "mu(" << s->var() << ",";
      print_strategy(s->first(), os);
      os << ")";
      return;
  }
}

std::string to_text(const StrategyPtr& s) {
  std::ostringstream os;
  print_strategy(s, os);
  return os.str();
}

namespace {

struct SCursor {
  const std::string& text;
  size_t pos = 0;

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

  void expect(char c) {
    if (peek() != c) {
      throw ParseError(std::string("expected '") + c + "' in strategy", 1,
                       static_cast<int>(pos) + 1);
    }
    ++pos;
  }

  std::string name() {
    skip_ws();
    std::string out;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) ||
            text[pos] == '_')) {
      out.push_back(text[pos]);
      ++pos;
    }
    if (out.empty()) {
      throw ParseError("expected a name in strategy", 1,
                       static_cast<int>(pos) + 1);
    }
    return out;
  }
};

class SParser {
public:
  SParser(const Signature& sig, const StrategyParser::RuleResolver& rules)
      : sig_(sig), terms_(sig), rules_(rules) {}

  StrategyPtr strategy(SCursor& cur) {
    if (cur.peek() == '@') {
      ++cur.pos;
      std::string name = cur.name();
      if (!rules_) {
        throw ParseError("no rule resolver for @" + name, 1,
                         static_cast<int>(cur.pos));
      }
      StrategyPtr s = rules_(name);
      if (!s) {
        throw ParseError("unknown rule @" + name, 1,
                         static_cast<int>(cur.pos));
      }
      return s;
    }
    std::string head = cur.name();
    if (cur.peek() != '(') {
      return Strategy::fixvar(head);  // bare name = fixed-point variable
    }
    cur.expect('(');
    StrategyPtr out;
    if (head == "rule") {
      TermPtr l = term(cur);
      cur.expect(',');
      TermPtr r = term(cur);
      TermPtr c;
      if (cur.peek() == ',') {
        ++cur.pos;
        c = cond(cur);
      }
      out = Strategy::rule(l, r, c);
    } else if (head == "seq") {
      StrategyPtr a = strategy(cur);
      cur.expect(',');
      out = Strategy::seq(a, strategy(cur));
    } else if (head == "lchoice") {
      StrategyPtr a = strategy(cur);
      cur.expect(',');
      StrategyPtr b = strategy(cur);
      // allow lchoice(a,b,c,...) as right-nested sugar
      while (cur.peek() == ',') {
        ++cur.pos;
        b = Strategy::choice(b, strategy(cur));
      }
      out = Strategy::choice(a, b);
    } else if (head == "eta") {
      out = Strategy::eta(strategy(cur));
    } else if (head == "some") {
      out = Strategy::some(strategy(cur));
    } else if (head == "child") {
      std::string j = cur.name();
      if (!is_numeral(j)) {
        throw ParseError("child() expects a numeral index", 1,
                         static_cast<int>(cur.pos));
      }
      cur.expect(',');
      out = Strategy::child(std::stoi(j), strategy(cur));
    } else if (head == "mu") {
      std::string x = cur.name();
      cur.expect(',');
      out = Strategy::mu(x, strategy(cur));
    } else if (head == "topdown") {
      out = top_down(strategy(cur));
    } else if (head == "outermost") {
      out = outer_most(strategy(cur));
    } else if (head == "bottomup") {
      out = bottom_up(strategy(cur));
    } else if (head == "innermost") {
      out = inner_most(strategy(cur));
    } else if (head == "normalizer") {
      out = normalizer(strategy(cur));
    } else if (head == "repeat") {
      out = repeat_until_fail(strategy(cur));
    } else if (head == "everywhere") {
      out = everywhere(strategy(cur));
    } else {
      throw ParseError("unknown strategy constructor '" + head + "'", 1,
                       static_cast<int>(cur.pos));
    }
    cur.expect(')');
    return out;
  }

private:
  TermPtr term(SCursor& cur) {
    cur.skip_ws();
    return terms_.parse_prefix(cur.text, cur.pos);
  }

  TermPtr cond(SCursor& cur) {
    cur.skip_ws();
    return parse_condition_prefix(cur.text, cur.pos, sig_);
  }

  const Signature& sig_;
  TermParser terms_;
  const StrategyParser::RuleResolver& rules_;
};

}  // namespace

StrategyParser::StrategyParser(const Signature& sig, RuleResolver rules)
    : sig_(&sig), rules_(std::move(rules)) {}

StrategyPtr StrategyParser::parse(const std::string& text) const {
  SCursor cur{text};
  SParser p(*sig_, rules_);
  StrategyPtr s = p.strategy(cur);
  cur.skip_ws();
  if (cur.pos != text.size()) {
    throw ParseError("trailing input after strategy", 1,
                     static_cast<int>(cur.pos) + 1);
  }
  return s;
}

}  // namespace rwkit
