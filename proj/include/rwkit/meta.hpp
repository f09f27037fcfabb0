#pragma once

#include <set>
#include <string>

#include "rwkit/eval.hpp"
#include "rwkit/strategy.hpp"
#include "rwkit/term.hpp"

namespace rwkit {

struct MalformedReification : RwError {
  MalformedReification(const std::string& why, Position where)
      : RwError("malformed reification: " + why), where(std::move(where)) {}
  Position where;
};

struct SoFailure : RwError {
  SoFailure() : RwError("second-order strategy failed") {}
};

/// First-order rewrite variables become nullary constants under this
/// name scheme when a strategy is viewed as a term; corpus symbol names
/// must not use the prefix.
std::string fo_var_constant(const std::string& var_name);
bool is_fo_var_constant(const std::string& symbol_name);
std::string fo_var_name(const std::string& symbol_name);

/// Strategies as terms over the extended signature: rule/2 (crule/3 when
/// conditional), seq/2, lchoice/2, eta/1, some/1, child/2, mu/2, with
/// fixed-point variables and first-order rewrite variables as constants.
TermPtr reify(const StrategyPtr& s);

/// Inverse of reify on well-formed strategy terms; reports the deepest
/// offending position otherwise.
StrategyPtr reflect(const TermPtr& t);

/// Extends sig with the strategy-constructor symbols and the condition
/// vocabulary so reified strategies parse as ordinary terms.
void declare_meta_constructors(Signature& sig);

/// Applies a second-order strategy (an ordinary strategy whose rules
/// rewrite strategy terms) to a first-order strategy. Throws SoFailure
/// when the transformation fails, FuelExhaustedError on divergence, and
/// MalformedReification when the result is not a strategy term.
StrategyPtr so_eval(const StrategyPtr& so, const StrategyPtr& s, Fuel& fuel,
                    const EvalContext& ctx = {});

/// Composition: apply a first, then b. Sequencing over strategy terms is
/// exactly function composition of the transformations.
StrategyPtr so_compose(StrategyPtr a, StrategyPtr b);

}  // namespace rwkit
