#pragma once

#include <string>
#include <vector>

#include "rwkit/parser.hpp"
#include "rwkit/term.hpp"

namespace rwkit {

// Rule conditions are ordinary terms over a fixed vocabulary, so they can
// be instantiated by substitutions, reified, and rewritten like anything
// else. The evaluator lives in theta.hpp.
//
//   true | false | and(c,c) | or(c,c) | not(c)
//   eq(t,t) | neq(t,t) | in(t,S) | subset(S,S) | disjoint(S,S) | empty(S)
//   S ::= theta(t)
//   helpers: hasbc(f,kind,region) | regionof(v) | kindof(f,tag)
//
// Infix surface syntax: `a = b`, `a != b`, `t in S`, `c and c`, `c or c`,
// `not c`, parentheses; the set/helper forms parse as applications.

std::vector<Symbol> condition_vocabulary();

/// Extends sig with the condition vocabulary (idempotent).
void declare_condition_vocabulary(Signature& sig);

bool is_condition_symbol(const std::string& name);

TermPtr cond_true();

/// Parses a condition starting at pos in text (infix syntax; application
/// forms fall through to the term parser over sig + vocabulary).
TermPtr parse_condition_prefix(const std::string& text, size_t& pos,
                               const Signature& sig);
TermPtr parse_condition(const std::string& text, const Signature& sig);

}  // namespace rwkit
