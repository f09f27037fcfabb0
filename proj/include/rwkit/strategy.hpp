#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rwkit/term.hpp"

namespace rwkit {

struct UnboundFixVar : RwError {
  explicit UnboundFixVar(const std::string& name)
      : RwError("unbound fixed-point variable '" + name + "'"), name(name) {}
  std::string name;
};

class Strategy;
using StrategyPtr = std::shared_ptr<const Strategy>;

enum class StrKind { Rule, Seq, Choice, Eta, Some, Child, FixVar, Mu };

/// Strategy AST. Rule nodes may carry a condition (a term over the
/// condition vocabulary, see theta.hpp) and a name for tracing.
class Strategy {
public:
  static StrategyPtr rule(TermPtr l, TermPtr r, TermPtr cond = nullptr,
                          std::string name = {});
  static StrategyPtr seq(StrategyPtr a, StrategyPtr b);
  static StrategyPtr choice(StrategyPtr a, StrategyPtr b);
  static StrategyPtr eta(StrategyPtr a);
  static StrategyPtr some(StrategyPtr a);
  static StrategyPtr child(int j, StrategyPtr a);
  static StrategyPtr fixvar(std::string name);
  static StrategyPtr mu(std::string name, StrategyPtr body);

  StrKind kind() const { return kind_; }
  const TermPtr& lhs() const { return lhs_; }
  const TermPtr& rhs() const { return rhs_; }
  const TermPtr& cond() const { return cond_; }
  const std::string& rule_name() const { return name_; }
  const StrategyPtr& first() const { return a_; }
  const StrategyPtr& second() const { return b_; }
  int child_index() const { return j_; }
  const std::string& var() const { return name_; }

private:
  Strategy() = default;
  StrKind kind_ = StrKind::Rule;
  TermPtr lhs_, rhs_, cond_;
  std::string name_;  // rule name, fixvar name, or mu binder
  StrategyPtr a_, b_;
  int j_ = 0;
};

// Derived combinators (the standard composite traversals plus the two
// practical forms used by the derivation corpus).
StrategyPtr top_down(StrategyPtr s);     // mu X.(s (+) Some(X))
StrategyPtr outer_most(StrategyPtr s);   // mu X.(s ; Some(X))
StrategyPtr bottom_up(StrategyPtr s);    // mu X.(Some(X) (+) s)
StrategyPtr inner_most(StrategyPtr s);   // mu X.(Some(X) ; s)
StrategyPtr normalizer(StrategyPtr s);   // mu X.(s ; X)
StrategyPtr repeat_until_fail(StrategyPtr s);  // mu X.eta(s ; X)
/// Applies s once at every matching position, top-down, continuing into
/// the children of each rewritten subterm. Succeeds iff s fired at least
/// once. This is the position-covering traversal the meta layer needs.
StrategyPtr everywhere(StrategyPtr s);

/// ok when every FixVar is bound by an enclosing Mu; otherwise the
/// offending name.
std::optional<std::string> unbound_fixvar(const StrategyPtr& s);
void check_closed(const StrategyPtr& s);  // throws UnboundFixVar

/// Structural equality up to renaming of Mu-bound variables.
bool strategy_alpha_equal(const StrategyPtr& a, const StrategyPtr& b);

std::string to_text(const StrategyPtr& s);

/// Parses the strategy syntax:
///   rule(l,r) | rule(l,r,cond) | seq(s,s) | lchoice(s,s) | eta(s) |
///   some(s) | child(j,s) | mu(X,s) | X | @name |
///   topdown(s) | outermost(s) | bottomup(s) | innermost(s) |
///   normalizer(s) | repeat(s) | everywhere(s)
/// `@name` pulls a named rule via the resolver. Terms inside rule(...)
/// use the given term parser; the third argument parses as a condition
/// term over the condition vocabulary.
class StrategyParser {
public:
  using RuleResolver = std::function<StrategyPtr(const std::string&)>;
  StrategyParser(const Signature& sig, RuleResolver rules = nullptr);

  StrategyPtr parse(const std::string& text) const;

private:
  const Signature* sig_;
  RuleResolver rules_;
};

}  // namespace rwkit
