#include "rwkit/corpus.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rwkit/condition.hpp"
#include "rwkit/meta.hpp"
#include "rwkit/parser.hpp"
#include "rwkit/theta.hpp"

namespace fs = std::filesystem;

namespace rwkit {

RuleEnv Corpus::make_env() const {
  RuleEnv env;
  env.gsig = &gsig;
  env.theory = &theory;
  env.rules = rules;
  env.macros = macros;
  return env;
}

namespace {

std::string strip(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::string t = strip(item);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

void absorb_rulebase(Corpus& corpus, const RuleBase& base) {
  for (const auto& r : base.rules) {
    if (corpus.rules.count(r.name)) {
      throw RuleLoadError("rule '" + r.name + "' defined twice");
    }
    corpus.rules.emplace(r.name, r);
  }
  for (const auto& [n, t] : base.macros) corpus.macros[n] = t;
  for (const auto& [n, t] : base.defs) corpus.defs[n] = t;
}

}  // namespace

Corpus load_corpus(const std::string& dir) {
  Corpus corpus;
  corpus.dir = dir;
  fs::path rules_dir = fs::path(dir) / "rules";
  if (!fs::exists(rules_dir)) {
    throw RuleLoadError("corpus directory '" + dir + "' has no rules/");
  }
  std::vector<fs::path> rule_files;
  for (const auto& e : fs::directory_iterator(rules_dir)) {
    if (e.path().extension() == ".rules") rule_files.push_back(e.path());
  }
  std::sort(rule_files.begin(), rule_files.end());
  for (const auto& p : rule_files) {
    absorb_rulebase(corpus,
                    load_rulebase(p.string(), corpus.gsig, corpus.theory));
  }
  fs::path scripts_dir = fs::path(dir) / "scripts";
  if (fs::exists(scripts_dir)) {
    for (const auto& e : fs::directory_iterator(scripts_dir)) {
      if (e.path().extension() != ".script") continue;
      fs::path golden = e.path();
      golden.replace_extension(".golden");
      DerivationScript s =
          load_script(e.path().string(), golden.string(), corpus.gsig,
                      corpus.defs);
      if (s.block <= 0) {
        throw RuleLoadError(e.path().string() + ": missing block number");
      }
      corpus.scripts.emplace(s.block, std::move(s));
    }
  }
  return corpus;
}

namespace {

/// Second-order rule sides parse with every ?name as a variable; names
/// outside the declared so-vars are first-order variables viewed as
/// constants.
TermPtr close_so_term(const TermPtr& t, const std::set<std::string>& sovars) {
  if (t->is_var()) {
    if (sovars.count(t->var_name())) return t;
    return Term::app(Symbol{fo_var_constant(t->var_name()), 0}, {});
  }
  if (t->children().empty()) return t;
  std::vector<TermPtr> kids;
  kids.reserve(t->children().size());
  for (const auto& c : t->children()) {
    kids.push_back(close_so_term(c, sovars));
  }
  return Term::app(t->head(), std::move(kids));
}

StrategyPtr close_so_strategy(const StrategyPtr& s,
                              const std::set<std::string>& sovars) {
  switch (s->kind()) {
    case StrKind::Rule: {
      TermPtr cond =
          s->cond() ? close_so_term(s->cond(), sovars) : nullptr;
      return Strategy::rule(close_so_term(s->lhs(), sovars),
                            close_so_term(s->rhs(), sovars), cond,
                            s->rule_name());
    }
    case StrKind::Seq:
      return Strategy::seq(close_so_strategy(s->first(), sovars),
                           close_so_strategy(s->second(), sovars));
    case StrKind::Choice:
      return Strategy::choice(close_so_strategy(s->first(), sovars),
                              close_so_strategy(s->second(), sovars));
    case StrKind::Eta:
      return Strategy::eta(close_so_strategy(s->first(), sovars));
    case StrKind::Some:
      return Strategy::some(close_so_strategy(s->first(), sovars));
    case StrKind::Child:
      return Strategy::child(s->child_index(),
                             close_so_strategy(s->first(), sovars));
    case StrKind::Mu:
      return Strategy::mu(s->var(), close_so_strategy(s->first(), sovars));
    case StrKind::FixVar:
      break;
  }
  return s;
}

}  // namespace

ExtensionPack load_pack(Corpus& corpus, const std::string& name) {
  ExtensionPack pack;
  pack.name = name;
  fs::path dir = fs::path(corpus.dir) / "packs" / name;
  if (!fs::exists(dir / "pack.conf")) {
    throw RuleLoadError("extension pack '" + name + "' not found under " +
                        (fs::path(corpus.dir) / "packs").string());
  }
  {
    std::ifstream in(dir / "pack.conf");
    std::string line;
    while (std::getline(in, line)) {
      std::string s = strip(line);
      if (s.empty() || s[0] == '#') continue;
      if (s.rfind("name:", 0) == 0) {
        // informational; directory name is authoritative
      } else if (s.rfind("status:", 0) == 0) {
        pack.replayable = strip(s.substr(7)) == "replayable";
      } else if (s.rfind("blocks:", 0) == 0) {
        for (const auto& b : split_commas(s.substr(7))) {
          pack.blocks.push_back(std::stoi(b));
        }
      }
    }
  }
  // rule deltas first: they may extend the grammar pools
  if (fs::exists(dir / "delta.rules")) {
    RuleBase delta = load_rulebase((dir / "delta.rules").string(),
                                   corpus.gsig, corpus.theory);
    pack.delta_rules = delta.rules;
    pack.delta_macros = delta.macros;
    for (const auto& [n, t] : delta.defs) corpus.defs[n] = t;
  }
  // second-order strategies over the meta signature
  if (fs::exists(dir / "transform.sos")) {
    Signature meta = corpus.gsig.signature();
    declare_meta_constructors(meta);
    std::ifstream in(dir / "transform.sos");
    std::string line;
    int lineno = 0;
    std::set<std::string> sovars;
    while (std::getline(in, line)) {
      ++lineno;
      std::string s = strip(line);
      if (s.empty() || s[0] == '#') continue;
      if (s.rfind("so-vars:", 0) == 0) {
        for (const auto& v : split_commas(s.substr(8))) {
          sovars.insert(v);
          pack.so_vars.push_back(v);
        }
        continue;
      }
      if (s.rfind("fixpoint-vars:", 0) == 0) {
        for (const auto& v : split_commas(s.substr(14))) {
          meta.declare(v, 0);
        }
        continue;
      }
      if (s.rfind("so ", 0) == 0) {
        size_t colon = s.find(':');
        if (colon == std::string::npos) {
          throw RuleLoadError((dir / "transform.sos").string() + ":" +
                              std::to_string(lineno) + ": malformed so line");
        }
        std::string so_name = strip(s.substr(3, colon - 3));
        StrategyParser parser(meta, nullptr);
        StrategyPtr raw = parser.parse(strip(s.substr(colon + 1)));
        StrategyPtr closed = close_so_strategy(raw, sovars);
        check_closed(closed);
        pack.so_strategies.emplace_back(so_name, closed);
        continue;
      }
      throw RuleLoadError((dir / "transform.sos").string() + ":" +
                          std::to_string(lineno) + ": unrecognized line");
    }
  }
  if (fs::exists(dir / "seeds.script")) {
    TermParser terms(corpus.gsig.signature());
    terms.set_def_resolver([&corpus](const std::string& n) -> TermPtr {
      auto it = corpus.defs.find(n);
      return it == corpus.defs.end() ? nullptr : it->second;
    });
    std::ifstream in(dir / "seeds.script");
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      std::string s = strip(line);
      if (s.empty() || s[0] == '#') continue;
      if (s.rfind("def ", 0) == 0) {
        size_t eq = s.find('=');
        if (eq == std::string::npos) {
          throw RuleLoadError("malformed def in seeds.script");
        }
        corpus.defs[strip(s.substr(4, eq - 4))] =
            terms.parse(strip(s.substr(eq + 1)));
        continue;
      }
      if (s.rfind("seed ", 0) == 0) {
        size_t colon = s.find(':');
        int block = std::stoi(strip(s.substr(5, colon - 5)));
        pack.seeds[block] = terms.parse(strip(s.substr(colon + 1)));
        continue;
      }
      throw RuleLoadError((dir / "seeds.script").string() + ":" +
                          std::to_string(lineno) + ": unrecognized line");
    }
  }
  for (int b : pack.blocks) {
    fs::path golden = dir / ("block" + std::to_string(b) + ".golden");
    if (fs::exists(golden)) {
      load_goldens(golden.string(), corpus.gsig, corpus.defs,
                   pack.goldens[b]);
    }
  }
  return pack;
}

void apply_extension(Corpus& corpus, const ExtensionPack& pack, Fuel& fuel) {
  EvalContext ctx;
  ctx.eval_cond = [&corpus](const TermPtr& c) {
    return eval_condition(corpus.gsig, corpus.theory, c);
  };
  if (!pack.so_strategies.empty()) {
    for (auto& [name, rule] : corpus.rules) {
      StrategyPtr s = rule.as_strategy();
      for (const auto& [so_name, so] : pack.so_strategies) {
        // fail-as-identity: rules the transformation does not touch pass
        // through unchanged
        StrategyPtr transformed;
        try {
          transformed = so_eval(Strategy::eta(so), s, fuel, ctx);
        } catch (const MalformedReification& e) {
          throw RuleLoadError("pack '" + pack.name + "' strategy '" +
                              so_name + "' on rule '" + name +
                              "': " + e.what());
        }
        s = transformed;
      }
      if (s->kind() != StrKind::Rule) {
        throw RuleLoadError("pack '" + pack.name + "' turned rule '" + name +
                            "' into a non-rule strategy");
      }
      rule.lhs = s->lhs();
      rule.rhs = s->rhs();
      rule.cond = s->cond();
    }
  }
  for (const auto& r : pack.delta_rules) {
    corpus.rules[r.name] = r;  // replace or add
  }
  for (const auto& [n, t] : pack.delta_macros) corpus.macros[n] = t;
  for (auto it = corpus.scripts.begin(); it != corpus.scripts.end();) {
    int b = it->first;
    bool keep = std::find(pack.blocks.begin(), pack.blocks.end(), b) !=
                pack.blocks.end();
    if (!keep) {
      it = corpus.scripts.erase(it);
      continue;
    }
    DerivationScript& s = it->second;
    auto seed_it = pack.seeds.find(b);
    if (seed_it != pack.seeds.end()) {
      s.seed = seed_it->second;
      s.seed_text = to_text(s.seed);
    }
    auto golden_it = pack.goldens.find(b);
    s.goldens = golden_it == pack.goldens.end()
                    ? std::map<int, TermPtr>{}
                    : golden_it->second;
    ++it;
  }
}

void corrupt_rule(Corpus& corpus, const std::string& rule_name) {
  auto it = corpus.rules.find(rule_name);
  if (it == corpus.rules.end()) {
    throw RuleLoadError("cannot corrupt unknown rule '" + rule_name + "'");
  }
  it->second.cond = Term::app(Symbol{"false", 0}, {});
}

std::string Report::to_json() const {
  nlohmann::json doc;
  doc["schema"] = "rwkit-report/1";
  doc["ok"] = ok;
  if (!ok) {
    doc["failure"] = failure;
    if (failed_block) doc["failed_block"] = failed_block;
    if (failed_step) doc["failed_step"] = failed_step;
    if (!expected.empty()) doc["expected"] = expected;
    if (!actual.empty()) doc["actual"] = actual;
  }
  doc["seconds"] = seconds;
  nlohmann::json fires = nlohmann::json::object();
  for (const auto& [n, c] : fire_counts) fires[n] = c;
  doc["rule_fires"] = std::move(fires);
  doc["trace"] = nlohmann::json::parse(trace_to_json(blocks));
  return doc.dump(2);
}

std::string Report::summary() const {
  std::ostringstream os;
  for (const auto& b : blocks) {
    os << "block " << b.block << " (" << b.name << "): "
       << (b.ok ? "pass" : "FAIL") << "  [" << b.steps.size() << " steps, "
       << b.seconds << " s]\n";
    if (b.ok && b.final_term) {
      os << "  final: " << to_text(b.final_term) << "\n";
    }
  }
  if (!ok) os << "failure: " << failure << "\n";
  return os.str();
}

Report run_derivation(Corpus& corpus, const std::vector<std::string>& packs,
                      Fuel fuel, bool golden_update) {
  auto t0 = std::chrono::steady_clock::now();
  for (const auto& p : packs) {
    ExtensionPack pack = load_pack(corpus, p);
    if (!pack.replayable) {
      throw RuleLoadError("extension pack '" + p +
                          "' is a stub and cannot be replayed");
    }
    apply_extension(corpus, pack, fuel);
  }

  Report report;
  RuleEnv env = corpus.make_env();
  std::map<std::string, long long> fires;
  try {
    for (auto& [num, script] : corpus.scripts) {
      RunOptions opts;
      std::map<int, TermPtr> fresh;
      opts.golden_update = golden_update;
      opts.new_goldens = &fresh;
      BlockResult r = run_block(script, env, fuel, opts);
      for (const auto& step : r.steps) {
        for (const auto& rule : step.rules_fired) ++fires[rule];
      }
      for (const auto& e : r.exports) env.add_rule(e, true);
      report.blocks.push_back(std::move(r));
      if (golden_update) {
        fs::path golden;
        if (packs.empty()) {
          golden = fs::path(corpus.dir) / "scripts" /
                   ("block" + std::to_string(num) + ".golden");
        } else {
          golden = fs::path(corpus.dir) / "packs" / packs.back() /
                   ("block" + std::to_string(num) + ".golden");
        }
        write_goldens(golden.string(), fresh);
      }
    }
    report.ok = true;
  } catch (const StepMismatchError& e) {
    report.ok = false;
    report.failure = e.what();
    report.failed_block = e.block;
    report.failed_step = e.step;
    report.expected = e.expected;
    report.actual = e.actual;
    BlockResult failed;
    failed.block = e.block;
    failed.ok = false;
    failed.failure = e.what();
    report.blocks.push_back(std::move(failed));
  }
  report.fire_counts = std::move(fires);
  report.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return report;
}

}  // namespace rwkit
