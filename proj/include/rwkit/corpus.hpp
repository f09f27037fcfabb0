#pragma once

#include <map>
#include <string>
#include <vector>

#include "rwkit/script.hpp"

namespace rwkit {

/// A generalization of the reference derivation: second-order strategies
/// that transform the rule inventory, rule deltas, replacement seeds and
/// frozen intermediates for the blocks it replays.
struct ExtensionPack {
  std::string name;
  bool replayable = false;  // stubs load and closure-check only
  std::vector<int> blocks;
  std::vector<std::string> so_vars;
  std::vector<std::pair<std::string, StrategyPtr>> so_strategies;
  std::vector<ConditionalRule> delta_rules;
  std::map<std::string, std::string> delta_macros;
  std::map<int, TermPtr> seeds;
  std::map<int, std::map<int, TermPtr>> goldens;
};

/// The whole on-disk corpus: grammar pools, theory, rules, macros,
/// shortcut definitions and the block scripts.
struct Corpus {
  std::string dir;
  GrammarSignature gsig;
  EquationalTheory theory;
  std::map<std::string, ConditionalRule> rules;
  std::map<std::string, std::string> macros;
  std::map<std::string, TermPtr> defs;
  std::map<int, DerivationScript> scripts;

  RuleEnv make_env() const;
};

Corpus load_corpus(const std::string& dir);

ExtensionPack load_pack(Corpus& corpus, const std::string& name);

/// Passes every first-order rule through the pack's second-order
/// strategies (fail-as-identity per rule), merges the deltas, and swaps
/// in the pack's seeds and goldens. Scripts outside pack.blocks drop out
/// of the replay set.
void apply_extension(Corpus& corpus, const ExtensionPack& pack, Fuel& fuel);

/// Disables one rule (condition := false). Used by the negative
/// controls: a corrupted rule must break some block with a step
/// mismatch.
void corrupt_rule(Corpus& corpus, const std::string& rule_name);

struct Report {
  bool ok = false;
  std::string failure;
  int failed_block = 0;
  int failed_step = 0;
  std::string expected;
  std::vector<std::string> actual;
  std::vector<BlockResult> blocks;
  std::map<std::string, long long> fire_counts;
  double seconds = 0.0;

  std::string to_json() const;
  std::string summary() const;
};

/// Runs the blocks in order, threading exports forward. The first step
/// mismatch aborts with the full trace collected so far.
Report run_derivation(Corpus& corpus, const std::vector<std::string>& packs,
                      Fuel fuel, bool golden_update = false);

}  // namespace rwkit
