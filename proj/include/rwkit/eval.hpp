#pragma once

#include <functional>
#include <map>
#include <string>

#include "rwkit/strategy.hpp"
#include "rwkit/term.hpp"

namespace rwkit {

inline constexpr long long kDefaultFuel = 10000;

/// Budget of Mu unfoldings. Exhaustion is a third outcome, distinct from
/// Fail, so divergence is never silently masked.
struct Fuel {
  long long remaining = kDefaultFuel;
};

struct FuelExhaustedError : RwError {
  FuelExhaustedError() : RwError("fuel exhausted (possible divergence)") {}
};

enum class Status { Ok, Fail, Exhausted };

struct Outcome {
  Status status = Status::Fail;
  TermPtr term;  // set iff status == Ok

  static Outcome ok(TermPtr t) { return {Status::Ok, std::move(t)}; }
  static Outcome fail() { return {Status::Fail, nullptr}; }
  static Outcome exhausted() { return {Status::Exhausted, nullptr}; }
  bool is_ok() const { return status == Status::Ok; }
};

struct MissingConditionEvaluator : RwError {
  using RwError::RwError;
};

/// Hooks threaded through an evaluation. eval_cond receives a closed
/// (instantiated) condition term; absent, conditional rules are an error.
struct EvalContext {
  bool memory_mode = false;
  std::string memory_symbol = "M";
  std::function<bool(const TermPtr&)> eval_cond;
  std::map<std::string, long long>* fire_counts = nullptr;
};

/// Strategy application per the denotational clauses: rules match at the
/// root, Seq composes, Choice is left-biased, Eta turns failure into
/// identity, Some requires at least one succeeding immediate child and
/// rebuilds with fail-as-identity on each child, Child(j,s) targets one
/// child, Mu unfolds consuming fuel.
Outcome eval(const StrategyPtr& s, const TermPtr& t, Fuel& fuel,
             const EvalContext& ctx = {});

/// Same semantics except strategies route through memory nodes
/// M(current, history): only the first child is rewritten.
Outcome eval_mem(const StrategyPtr& s, const TermPtr& t, Fuel& fuel,
                 const EvalContext& ctx = {});

}  // namespace rwkit
