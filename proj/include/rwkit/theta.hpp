#pragma once

#include <set>
#include <string>
#include <vector>

#include "rwkit/grammar.hpp"
#include "rwkit/term.hpp"
#include "rwkit/theory.hpp"

namespace rwkit {

struct GuardViolated : RwError {
  GuardViolated(const std::string& why, Position where)
      : RwError("dependency-analyzer guard violated: " + why),
        where(std::move(where)) {}
  Position where;
};

struct IllTypedCondition : RwError {
  using RwError::RwError;
};

/// Set of variable terms, compared structurally (name and region both
/// count, so equal names over different regions stay distinct).
using VarSet = std::set<TermPtr, TermLess>;

std::string varset_text(const VarSet& s);

/// The variable dependency analyzer: the set of mathematical variables a
/// grammar-valid ground expression depends on. Operator guards that the
/// clauses leave undefined are hard errors; the derivative-of-constant
/// case additionally reports through diagnostics when provided.
VarSet theta(const GrammarSignature& g, const TermPtr& t,
             std::vector<std::string>* diagnostics = nullptr);

/// Evaluates a closed condition term (see condition.hpp for the
/// vocabulary). Equality atoms compare modulo the theory's AC symbols;
/// set atoms evaluate their theta(...) arguments through the analyzer.
bool eval_condition(const GrammarSignature& g, const EquationalTheory& E,
                    const TermPtr& cond);

}  // namespace rwkit
