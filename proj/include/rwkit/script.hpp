#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rwkit/rules.hpp"
#include "rwkit/strategy.hpp"

namespace rwkit {

struct NotAnEquation : RwError {
  using RwError::RwError;
};

struct StepMismatchError : RwError {
  StepMismatchError(int block, int step, std::string expected,
                    std::vector<std::string> actual);
  int block;
  int step;
  std::string expected;
  std::vector<std::string> actual;
};

/// Rule environment a block runs against: loaded rules plus exports from
/// earlier blocks, strategy macros, and the shared theory and grammar.
struct RuleEnv {
  const GrammarSignature* gsig = nullptr;
  const EquationalTheory* theory = nullptr;
  std::map<std::string, ConditionalRule> rules;
  std::map<std::string, std::string> macros;

  void add_rule(const ConditionalRule& r, bool replace = false);
  StrategyPtr resolve(const std::string& name, int depth = 0) const;
  StrategyPtr parse_strategy(const std::string& text) const;
};

struct ScriptStep {
  int number = 0;
  std::string label;
  std::string strategy_text;
};

struct ExportDecl {
  std::string rule_name;
  std::string category = "specialized";
  bool authored = false;
  int from_step = 0;  // 0 = final term
  bool left_to_right = true;
  // occurrences of these terms become rewrite variables of these names
  std::vector<std::pair<std::string, std::string>> generalize;
  std::string lhs_text, rhs_text, cond_text;  // authored form
};

/// One lemma proof: a seed, the ordered (strategy, expected) steps, and
/// result-to-rules hooks threading conclusions into later blocks.
struct DerivationScript {
  int block = 0;
  std::string name;
  std::vector<std::string> imports;
  std::string seed_text;
  TermPtr seed;
  std::vector<ScriptStep> steps;
  std::vector<ExportDecl> exports;
  std::map<int, TermPtr> goldens;
  std::map<std::string, TermPtr> defs;
};

/// Script format, line oriented:
///   block: 1
///   name: constraint-on-u0
///   import: base
///   def <name> = <term>
///   seed: <term>
///   step <k> <label>: <strategy>
///   export rule <name> [category] from final|step <k> orient lr|rl
///            [generalize ?v = <term> ...]
///   export authored rule <name> [category]: <lhs> ~> <rhs> [cond: ...]
/// Golden files hold one `expect <k>: <term>` line per step.
DerivationScript load_script(const std::string& script_path,
                             const std::string& golden_path,
                             const GrammarSignature& g,
                             const std::map<std::string, TermPtr>& base_defs);

void load_goldens(const std::string& golden_path, const GrammarSignature& g,
                  const std::map<std::string, TermPtr>& defs,
                  std::map<int, TermPtr>& out);

void write_goldens(const std::string& golden_path,
                   const std::map<int, TermPtr>& goldens);

/// Converts a proved equation into oriented rewrite rules. Ground sides
/// are generalized only at the designated subterms. The identity rule is
/// rejected with a warning. The produced rule is closure-checked.
std::optional<ConditionalRule> result_to_rules(
    const GrammarSignature& g, const TermPtr& equation, bool left_to_right,
    const std::vector<std::pair<std::string, TermPtr>>& generalize,
    const std::string& rule_name, const std::string& category,
    std::vector<std::string>* warnings = nullptr);

struct StepOutcome {
  int step = 0;
  std::string label;
  std::string strategy_text;
  TermPtr before;
  TermPtr after;
  std::vector<std::string> rules_fired;
};

struct BlockResult {
  int block = 0;
  std::string name;
  bool ok = false;
  std::string failure;
  std::vector<StepOutcome> steps;
  TermPtr final_term;
  std::vector<ConditionalRule> exports;
  double seconds = 0.0;
};

struct RunOptions {
  bool golden_update = false;
  std::map<int, TermPtr>* new_goldens = nullptr;
};

/// Replays one block: evaluates each step modulo the theory, compares
/// the (required singleton) result against the frozen intermediate, and
/// materializes the exports. Throws StepMismatchError on divergence and
/// FuelExhaustedError when the budget runs out.
BlockResult run_block(const DerivationScript& script, RuleEnv& env,
                      Fuel& fuel, const RunOptions& opts = {});

std::string trace_to_json(const std::vector<BlockResult>& blocks);
std::string trace_to_latex(const std::vector<BlockResult>& blocks);

}  // namespace rwkit
