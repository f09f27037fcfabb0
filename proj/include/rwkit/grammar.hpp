#pragma once

#include <optional>
#include <set>
#include <string>
#include <variant>

#include "rwkit/term.hpp"

namespace rwkit {

enum class Kind { Region, Function, Variable, BoundaryCond, Any };

std::string kind_name(Kind k);

struct GrammarViolation {
  Position where;
  std::string reason;
  std::string describe() const;
};

struct GrammarViolationError : RwError {
  explicit GrammarViolationError(GrammarViolation v)
      : RwError(v.describe()), violation(std::move(v)) {}
  GrammarViolation violation;
};

/// The domain signature: constructor symbols (Reg, Fun, Var, BC, Oper,
/// IndexedFun/Reg/Var, M), the algebraic operations, type tags, boundary
/// condition kinds, the empty markers, and per-corpus name pools for
/// regions, variables, functions, operators and constants.
class GrammarSignature {
public:
  GrammarSignature();

  void add_region_name(const std::string& name);
  void add_var_name(const std::string& name);
  void add_fun_name(const std::string& name);
  void add_oper_name(const std::string& name);
  void add_cons_name(const std::string& name);

  bool is_region_name(const std::string& name) const;
  bool is_var_name(const std::string& name) const;
  bool is_fun_name(const std::string& name) const;
  bool is_oper_name(const std::string& name) const;
  /// Numerals always count as constants.
  bool is_cons_name(const std::string& name) const;
  bool is_op(const std::string& name) const;      // + - * / ^ and unary neg
  bool is_type_tag(const std::string& name) const;
  bool is_bc_kind(const std::string& name) const;

  const Signature& signature() const { return sig_; }
  Signature& signature() { return sig_; }

private:
  Signature sig_;
  std::set<std::string> regions_, vars_, funs_, opers_, cons_;
};

/// Decides membership of t in the domain grammar. Rewrite variables
/// validate against any nonterminal. Returns the principal kind or the
/// deepest violating position.
std::variant<Kind, GrammarViolation> validate(const GrammarSignature& g,
                                              const TermPtr& t);
/// Checks t against one nonterminal (function slots accept variables and
/// constants per the embedding productions).
std::optional<GrammarViolation> validate_as(const GrammarSignature& g,
                                            const TermPtr& t, Kind k);
/// Throwing form of validate.
Kind validate_or_throw(const GrammarSignature& g, const TermPtr& t);

// Shortcut constructors for the operator encodings. Arguments are
// validated; the exact field layout is the interchange contract.
TermPtr mk_integral(const GrammarSignature& g, TermPtr u, TermPtr x);
TermPtr mk_partial(const GrammarSignature& g, TermPtr u, TermPtr x);
TermPtr mk_trace(const GrammarSignature& g, TermPtr u, TermPtr x, TermPtr xp);
TermPtr mk_two_scale(const GrammarSignature& g, TermPtr u, TermPtr x,
                     std::vector<TermPtr> codomain, TermPtr eps);
TermPtr mk_two_scale_adjoint(const GrammarSignature& g, TermPtr v,
                             std::vector<TermPtr> domain, TermPtr x,
                             TermPtr eps);
TermPtr mk_smooth_adjoint(const GrammarSignature& g, TermPtr v,
                          std::vector<TermPtr> domain, TermPtr x,
                          TermPtr eps);
TermPtr mk_sum(const GrammarSignature& g, TermPtr u, TermPtr i);

}  // namespace rwkit
