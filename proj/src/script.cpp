#include "rwkit/script.hpp"

#include <chrono>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rwkit/condition.hpp"
#include "rwkit/latex.hpp"
#include "rwkit/parser.hpp"
#include "rwkit/theta.hpp"

namespace rwkit {

StepMismatchError::StepMismatchError(int block_, int step_,
                                     std::string expected_,
                                     std::vector<std::string> actual_)
    : RwError("block " + std::to_string(block_) + " step " +
              std::to_string(step_) + " diverged from the frozen result"),
      block(block_),
      step(step_),
      expected(std::move(expected_)),
      actual(std::move(actual_)) {}

void RuleEnv::add_rule(const ConditionalRule& r, bool replace) {
  auto it = rules.find(r.name);
  if (it != rules.end()) {
    if (!replace) {
      throw RuleLoadError("rule '" + r.name + "' already defined");
    }
    it->second = r;
    return;
  }
  rules.emplace(r.name, r);
}

StrategyPtr RuleEnv::resolve(const std::string& name, int depth) const {
  if (depth > 32) {
    throw RuleLoadError("strategy macro recursion too deep at '" + name +
                        "'");
  }
  auto mit = macros.find(name);
  if (mit != macros.end()) {
    StrategyParser parser(gsig->signature(),
                          [this, depth](const std::string& n) {
                            return resolve(n, depth + 1);
                          });
    return parser.parse(mit->second);
  }
  auto rit = rules.find(name);
  if (rit != rules.end()) return rit->second.as_strategy();
  return nullptr;
}

StrategyPtr RuleEnv::parse_strategy(const std::string& text) const {
  StrategyParser parser(gsig->signature(), [this](const std::string& n) {
    return resolve(n, 0);
  });
  StrategyPtr s = parser.parse(text);
  check_closed(s);
  return s;
}

namespace {

std::string strip(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

TermParser make_term_parser(const GrammarSignature& g,
                            const std::map<std::string, TermPtr>& defs) {
  TermParser terms(g.signature());
  terms.set_def_resolver([&defs](const std::string& n) -> TermPtr {
    auto it = defs.find(n);
    return it == defs.end() ? nullptr : it->second;
  });
  return terms;
}

}  // namespace

void load_goldens(const std::string& golden_path, const GrammarSignature& g,
                  const std::map<std::string, TermPtr>& defs,
                  std::map<int, TermPtr>& out) {
  std::ifstream in(golden_path);
  if (!in) return;  // absent golden file = nothing frozen yet
  TermParser terms = make_term_parser(g, defs);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = strip(line);
    if (s.empty() || s[0] == '#') continue;
    if (s.rfind("expect ", 0) != 0) {
      throw RuleLoadError(golden_path + ":" + std::to_string(lineno) +
                          ": expected 'expect <k>: <term>'");
    }
    size_t colon = s.find(':');
    int k = std::stoi(strip(s.substr(7, colon - 7)));
    out[k] = terms.parse(strip(s.substr(colon + 1)));
  }
}

void write_goldens(const std::string& golden_path,
                   const std::map<int, TermPtr>& goldens) {
  std::ofstream outf(golden_path);
  if (!outf) {
    throw RuleLoadError("cannot write golden file '" + golden_path + "'");
  }
  outf << "# frozen per-step intermediates; regenerate with "
          "--golden-update\n";
  for (const auto& [k, t] : goldens) {
    outf << "expect " << k << ": " << to_text(t) << "\n";
  }
}

DerivationScript load_script(const std::string& script_path,
                             const std::string& golden_path,
                             const GrammarSignature& g,
                             const std::map<std::string, TermPtr>& base_defs) {
  std::ifstream in(script_path);
  if (!in) {
    throw RuleLoadError("cannot open script file '" + script_path + "'");
  }
  DerivationScript script;
  script.defs = base_defs;
  TermParser terms = make_term_parser(g, script.defs);

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = strip(line);
    if (s.empty() || s[0] == '#') continue;
    try {
      if (s.rfind("block:", 0) == 0) {
        script.block = std::stoi(strip(s.substr(6)));
        continue;
      }
      if (s.rfind("name:", 0) == 0) {
        script.name = strip(s.substr(5));
        continue;
      }
      if (s.rfind("import:", 0) == 0) {
        std::stringstream ss(s.substr(7));
        std::string item;
        while (std::getline(ss, item, ',')) {
          std::string t = strip(item);
          if (!t.empty()) script.imports.push_back(t);
        }
        continue;
      }
      if (s.rfind("def ", 0) == 0) {
        size_t eq = s.find('=');
        if (eq == std::string::npos) throw RuleLoadError("malformed def");
        script.defs[strip(s.substr(4, eq - 4))] =
            terms.parse(strip(s.substr(eq + 1)));
        continue;
      }
      if (s.rfind("seed:", 0) == 0) {
        script.seed_text = strip(s.substr(5));
        script.seed = terms.parse(script.seed_text);
        continue;
      }
      if (s.rfind("step ", 0) == 0) {
        size_t colon = s.find(':');
        if (colon == std::string::npos) throw RuleLoadError("malformed step");
        std::stringstream hs(s.substr(5, colon - 5));
        ScriptStep step;
        hs >> step.number;
        hs >> step.label;
        step.strategy_text = strip(s.substr(colon + 1));
        script.steps.push_back(std::move(step));
        continue;
      }
      if (s.rfind("export ", 0) == 0) {
        std::string rest = strip(s.substr(7));
        ExportDecl d;
        if (rest.rfind("authored rule ", 0) == 0) {
          d.authored = true;
          size_t colon = rest.find(':');
          if (colon == std::string::npos) {
            throw RuleLoadError("authored export needs ': lhs ~> rhs'");
          }
          std::stringstream hs(rest.substr(14, colon - 14));
          hs >> d.rule_name;
          std::string cat;
          if (hs >> cat) d.category = cat;
          std::string body = rest.substr(colon + 1);
          size_t arrow = body.find("~>");
          if (arrow == std::string::npos) {
            throw RuleLoadError("authored export needs 'lhs ~> rhs'");
          }
          std::string rhs_part = strip(body.substr(arrow + 2));
          size_t cond_at = rhs_part.find(" cond:");
          if (cond_at != std::string::npos) {
            d.cond_text = strip(rhs_part.substr(cond_at + 6));
            rhs_part = strip(rhs_part.substr(0, cond_at));
          }
          d.lhs_text = strip(body.substr(0, arrow));
          d.rhs_text = rhs_part;
          script.exports.push_back(std::move(d));
          continue;
        }
        if (rest.rfind("rule ", 0) != 0) {
          throw RuleLoadError("export needs 'rule' or 'authored rule'");
        }
        std::stringstream hs(rest.substr(5));
        hs >> d.rule_name;
        std::string word;
        while (hs >> word) {
          if (word == "usual" || word == "specialized" ||
              word == "auxiliary") {
            d.category = word;
          } else if (word == "from") {
            std::string what;
            hs >> what;
            if (what == "final") {
              d.from_step = 0;
            } else if (what == "step") {
              hs >> d.from_step;
            } else {
              throw RuleLoadError("export 'from' needs final|step <k>");
            }
          } else if (word == "orient") {
            std::string o;
            hs >> o;
            if (o == "lr") d.left_to_right = true;
            else if (o == "rl") d.left_to_right = false;
            else throw RuleLoadError("orient needs lr|rl");
          } else if (word == "generalize") {
            std::string v, eq, term_text;
            hs >> v;
            hs >> eq;
            std::getline(hs, term_text);
            if (v.empty() || v[0] != '?' || eq != "=") {
              throw RuleLoadError("generalize needs '?v = <term>'");
            }
            d.generalize.emplace_back(v.substr(1), strip(term_text));
          } else {
            throw RuleLoadError("unknown export word '" + word + "'");
          }
        }
        script.exports.push_back(std::move(d));
        continue;
      }
      throw RuleLoadError("unrecognized line");
    } catch (const RwError& e) {
      throw RuleLoadError(script_path + ":" + std::to_string(lineno) + ": " +
                          e.what());
    }
  }
  if (!golden_path.empty()) {
    load_goldens(golden_path, g, script.defs, script.goldens);
  }
  return script;
}

namespace {

TermPtr substitute_subterm(const TermPtr& t, const TermPtr& what,
                           const TermPtr& with) {
  if (term_equal(t, what)) return with;
  if (t->is_var() || t->children().empty()) return t;
  std::vector<TermPtr> kids;
  kids.reserve(t->children().size());
  bool changed = false;
  for (const auto& c : t->children()) {
    TermPtr c2 = substitute_subterm(c, what, with);
    changed = changed || c2.get() != c.get();
    kids.push_back(std::move(c2));
  }
  if (!changed) return t;
  return Term::app(t->head(), std::move(kids));
}

bool is_equation(const TermPtr& t) {
  return !t->is_var() && t->head().name == "Oper" && t->arity() == 5 &&
         !t->children()[0]->is_var() &&
         t->children()[0]->head().name == "Equals" &&
         list_items(t->children()[1]).size() == 2;
}

}  // namespace

std::optional<ConditionalRule> result_to_rules(
    const GrammarSignature& g, const TermPtr& equation, bool left_to_right,
    const std::vector<std::pair<std::string, TermPtr>>& generalize,
    const std::string& rule_name, const std::string& category,
    std::vector<std::string>* warnings) {
  if (!is_equation(equation) || !is_ground(equation)) {
    throw NotAnEquation("export source is not a ground equation: " +
                        to_text(equation));
  }
  auto sides = list_items(equation->children()[1]);
  TermPtr l = left_to_right ? sides[0] : sides[1];
  TermPtr r = left_to_right ? sides[1] : sides[0];
  for (const auto& [var, sub] : generalize) {
    TermPtr v = Term::var(var);
    l = substitute_subterm(l, sub, v);
    r = substitute_subterm(r, sub, v);
  }
  if (term_equal(l, r)) {
    if (warnings) {
      warnings->push_back("export '" + rule_name +
                          "' is the identity rule; skipped");
    }
    return std::nullopt;
  }
  ConditionalRule rule;
  rule.name = rule_name;
  rule.category = category;
  rule.lhs = l;
  rule.rhs = r;
  auto lv = vars_of(l);
  for (const auto& v : vars_of(r)) {
    if (!lv.count(v)) {
      throw RuleLoadError("export '" + rule_name +
                          "': generalized variable ?" + v +
                          " appears only on the right side");
    }
  }
  if (auto w = closure_check(g, rule)) {
    throw RuleLoadError("export '" + rule_name + "': " + w->describe());
  }
  return rule;
}

BlockResult run_block(const DerivationScript& script, RuleEnv& env,
                      Fuel& fuel, const RunOptions& opts) {
  auto t0 = std::chrono::steady_clock::now();
  BlockResult result;
  result.block = script.block;
  result.name = script.name;
  if (!script.seed) {
    throw RuleLoadError("block " + std::to_string(script.block) +
                        " has no seed");
  }
  if (auto v = validate_as(*env.gsig, script.seed, Kind::Function)) {
    throw GrammarViolationError(*v);
  }

  EvalContext ctx;
  std::map<std::string, long long> fired;
  ctx.fire_counts = &fired;
  ctx.eval_cond = [&env](const TermPtr& c) {
    return eval_condition(*env.gsig, *env.theory, c);
  };

  std::map<int, TermPtr> step_results;
  TermPtr current = ac_canonical(script.seed, *env.theory);
  for (const auto& step : script.steps) {
    StepOutcome out;
    out.step = step.number;
    out.label = step.label;
    out.strategy_text = step.strategy_text;
    out.before = current;
    fired.clear();

    StrategyPtr strategy = env.parse_strategy(step.strategy_text);
    SetOutcome o = eval_modulo_term(strategy, current, *env.theory, fuel, ctx);
    if (o.exhausted) throw FuelExhaustedError();
    std::vector<std::string> actual_texts;
    for (const auto& t : o.terms.items()) actual_texts.push_back(to_text(t));
    if (o.failed()) {
      throw StepMismatchError(script.block, step.number,
                              "strategy was expected to succeed",
                              {"<fail>"});
    }
    if (o.terms.size() != 1) {
      std::string want = "a single result";
      auto git = script.goldens.find(step.number);
      if (git != script.goldens.end()) want = to_text(git->second);
      throw StepMismatchError(script.block, step.number, want, actual_texts);
    }
    TermPtr got = o.terms.items().front();
    if (auto v = validate_as(*env.gsig, got, Kind::Function)) {
      throw GrammarViolationError(*v);
    }
    if (!opts.golden_update) {
      auto git = script.goldens.find(step.number);
      if (git == script.goldens.end()) {
        throw RuleLoadError("block " + std::to_string(script.block) +
                            " step " + std::to_string(step.number) +
                            " has no frozen expectation; run with "
                            "--golden-update first");
      }
      if (!ac_equal(git->second, got, *env.theory)) {
        throw StepMismatchError(script.block, step.number,
                                to_text(ac_canonical(git->second,
                                                     *env.theory)),
                                actual_texts);
      }
    } else if (opts.new_goldens) {
      (*opts.new_goldens)[step.number] = got;
    }
    for (const auto& [rn, n] : fired) {
      (void)n;
      out.rules_fired.push_back(rn);
    }
    out.after = got;
    result.steps.push_back(out);
    step_results[step.number] = got;
    current = got;
  }
  result.final_term = current;

  TermParser terms = make_term_parser(*env.gsig, script.defs);
  for (const auto& d : script.exports) {
    if (d.authored) {
      ConditionalRule r;
      r.name = d.rule_name;
      r.category = d.category;
      r.lhs = terms.parse(d.lhs_text);
      r.rhs = terms.parse(d.rhs_text);
      if (!d.cond_text.empty()) {
        r.cond = parse_condition(d.cond_text, env.gsig->signature());
      }
      if (auto w = closure_check(*env.gsig, r)) {
        throw RuleLoadError("export '" + r.name + "': " + w->describe());
      }
      result.exports.push_back(std::move(r));
      continue;
    }
    TermPtr source = current;
    if (d.from_step != 0) {
      auto it = step_results.find(d.from_step);
      if (it == step_results.end()) {
        throw RuleLoadError("export '" + d.rule_name +
                            "' references missing step " +
                            std::to_string(d.from_step));
      }
      source = it->second;
    }
    std::vector<std::pair<std::string, TermPtr>> gen;
    for (const auto& [v, text] : d.generalize) {
      gen.emplace_back(v, terms.parse(text));
    }
    if (auto r = result_to_rules(*env.gsig, source, d.left_to_right, gen,
                                 d.rule_name, d.category)) {
      result.exports.push_back(std::move(*r));
    }
  }

  result.ok = true;
  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return result;
}

std::string trace_to_json(const std::vector<BlockResult>& blocks) {
  nlohmann::json doc;
  doc["schema"] = "rwkit-trace/1";
  doc["blocks"] = nlohmann::json::array();
  for (const auto& b : blocks) {
    nlohmann::json jb;
    jb["block"] = b.block;
    jb["name"] = b.name;
    jb["ok"] = b.ok;
    if (!b.failure.empty()) jb["failure"] = b.failure;
    jb["seconds"] = b.seconds;
    jb["steps"] = nlohmann::json::array();
    for (const auto& s : b.steps) {
      nlohmann::json js;
      js["step"] = s.step;
      js["label"] = s.label;
      js["strategy"] = s.strategy_text;
      js["before"] = to_text(s.before);
      js["after"] = to_text(s.after);
      js["rules_fired"] = s.rules_fired;
      jb["steps"].push_back(std::move(js));
    }
    if (b.final_term) jb["final"] = to_text(b.final_term);
    nlohmann::json je = nlohmann::json::array();
    for (const auto& e : b.exports) {
      nlohmann::json r;
      r["name"] = e.name;
      r["category"] = e.category;
      r["lhs"] = to_text(e.lhs);
      r["rhs"] = to_text(e.rhs);
      if (e.cond) r["cond"] = to_text(e.cond);
      je.push_back(std::move(r));
    }
    jb["exports"] = std::move(je);
    doc["blocks"].push_back(std::move(jb));
  }
  return doc.dump(2);
}

std::string trace_to_latex(const std::vector<BlockResult>& blocks) {
  std::ostringstream os;
  for (const auto& b : blocks) {
    os << "\\paragraph{Block " << b.block << " (" << b.name << ")}\n";
    for (const auto& s : b.steps) {
      os << "\\textbf{Step " << s.step << "} (" << s.label
         << ") $\\Longrightarrow$\n\\begin{equation*}\n"
         << to_latex(s.after) << "\n\\end{equation*}\n";
    }
  }
  return os.str();
}

}  // namespace rwkit
