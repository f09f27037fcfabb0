#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rwkit/grammar.hpp"
#include "rwkit/modulo.hpp"
#include "rwkit/theory.hpp"

namespace rwkit {

struct RuleLoadError : RwError {
  using RwError::RwError;
};

/// Kind-assignment witness showing how a rule instance can leave the
/// grammar.
struct ClosureWitness {
  std::string assignment;
  GrammarViolation violation;
  std::string describe() const;
};

/// Mechanized grammar-closure argument: the left side is validated with
/// rewrite variables taking every slot-consistent sort, and the right
/// side must validate identically under each assignment.
std::optional<ClosureWitness> closure_check(const GrammarSignature& g,
                                            const ConditionalRule& rule);

/// Named collection of conditional rules with category tags, shortcut
/// definitions, strategy macros and AC declarations.
///
/// File format (line oriented, '#' comments):
///   sig reg: Omega, Gamma          sig var: x, xsharp
///   sig fun: u, v                  sig oper: Integral, T
///   sig cons: eps, kappa0          ac: plus, times
///   def name = <term>
///   rule <name> <category>: <lhs> ~> <rhs> [cond: <condition>]
///   strategy <name>: <strategy text>
struct RuleBase {
  std::string name;
  std::vector<ConditionalRule> rules;
  std::map<std::string, std::string> macros;
  std::map<std::string, TermPtr> defs;
  std::vector<std::string> ac_decls;

  const ConditionalRule* find(const std::string& rule_name) const;
};

/// Parses a rule file, accumulating name pools into g and AC flags into
/// E. Every rule is checked: declared symbols only, vars(rhs) and
/// vars(cond) inside vars(lhs), and grammar closure.
RuleBase load_rulebase(const std::string& path, GrammarSignature& g,
                       EquationalTheory& E);

}  // namespace rwkit
