#pragma once

#include "rwkit/acmatch.hpp"
#include "rwkit/eval.hpp"
#include "rwkit/strategy.hpp"
#include "rwkit/theory.hpp"

namespace rwkit {

struct ConditionIllTyped : RwError {
  using RwError::RwError;
};

/// A rewrite rule with an optional condition term. vars(rhs) and
/// vars(cond) must be contained in vars(lhs).
struct ConditionalRule {
  std::string name;
  std::string category;  // usual | specialized | auxiliary
  TermPtr lhs;
  TermPtr rhs;
  TermPtr cond;  // nullptr = unconditional

  StrategyPtr as_strategy() const {
    return Strategy::rule(lhs, rhs, cond, name);
  }
};

/// Set-valued outcome of rewriting modulo a theory. The failing result
/// is the empty set; exhaustion is tracked separately and absorbs.
struct SetOutcome {
  TermSet terms;
  bool exhausted = false;

  bool failed() const { return terms.empty() && !exhausted; }
  static SetOutcome fail() { return {}; }
  static SetOutcome out_of_fuel() { return {TermSet{}, true}; }
  static SetOutcome of(const TermPtr& t, const EquationalTheory& E) {
    SetOutcome o;
    o.terms.insert(t, E);
    return o;
  }
};

/// Clause-by-clause lift of the plain semantics to sets of terms modulo
/// E: rules enumerate AC matches (with remainder at the rule root),
/// Seq composes set functions, Choice tests emptiness, Eta maps the
/// empty set to the singleton input. Some and Child operate on the
/// flattened sibling view of associative nodes.
SetOutcome eval_modulo(const StrategyPtr& s, const TermSet& input,
                       const EquationalTheory& E, Fuel& fuel,
                       const EvalContext& ctx = {});

SetOutcome eval_modulo_term(const StrategyPtr& s, const TermPtr& t,
                            const EquationalTheory& E, Fuel& fuel,
                            const EvalContext& ctx = {});

/// Single conditional rule applied at the root: the matches whose
/// instantiated condition holds. Empty set = no match passed.
SetOutcome eval_conditional(const ConditionalRule& rule, const TermPtr& t,
                            const EquationalTheory& E,
                            const EvalContext& ctx);

}  // namespace rwkit
