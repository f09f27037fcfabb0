// Batch front end: parse terms, run strategies, replay derivations, apply
// extension packs, and render traces.
//
// Exit codes: 0 success, 1 rewrite/derivation failure, 2 fuel exhausted,
// 3 input error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rwkit/condition.hpp"
#include "rwkit/corpus.hpp"
#include "rwkit/latex.hpp"
#include "rwkit/meta.hpp"
#include "rwkit/parser.hpp"
#include "rwkit/theta.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitFuel = 2;
constexpr int kExitInput = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw rwkit::RwError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::string strip(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

struct CommonOpts {
  std::string rules_file;
  std::string format = "text";
  long long fuel = rwkit::kDefaultFuel;
};

struct LoadedRules {
  rwkit::GrammarSignature gsig;
  rwkit::EquationalTheory theory;
  rwkit::RuleEnv env;
  std::map<std::string, rwkit::TermPtr> defs;
};

LoadedRules load_rules(const std::string& path) {
  LoadedRules out;
  rwkit::RuleBase base;
  if (!path.empty()) {
    base = rwkit::load_rulebase(path, out.gsig, out.theory);
  }
  out.env.gsig = &out.gsig;
  out.env.theory = &out.theory;
  for (const auto& r : base.rules) out.env.rules.emplace(r.name, r);
  out.env.macros = base.macros;
  out.defs = base.defs;
  return out;
}

void print_term(const rwkit::TermPtr& t, const std::string& format,
                std::ostream& os) {
  if (format == "latex") {
    os << rwkit::to_latex(t) << "\n";
  } else if (format == "json") {
    nlohmann::json doc;
    doc["schema"] = "rwkit-term/1";
    doc["term"] = rwkit::to_text(t);
    doc["latex"] = rwkit::to_latex(t);
    os << doc.dump(2) << "\n";
  } else {
    os << rwkit::to_text(t) << "\n";
  }
}

int cmd_parse(const CommonOpts& opts, const std::string& term_file,
              bool validate_term) {
  LoadedRules lr = load_rules(opts.rules_file);
  rwkit::TermParser parser(lr.gsig.signature());
  parser.set_def_resolver([&lr](const std::string& n) -> rwkit::TermPtr {
    auto it = lr.defs.find(n);
    return it == lr.defs.end() ? nullptr : it->second;
  });
  rwkit::TermPtr t = parser.parse(strip(read_file(term_file)));
  if (validate_term) {
    auto r = rwkit::validate(lr.gsig, t);
    if (auto* v = std::get_if<rwkit::GrammarViolation>(&r)) {
      std::cerr << v->describe() << "\n";
      return kExitFail;
    }
    std::cerr << "kind: " << rwkit::kind_name(std::get<rwkit::Kind>(r))
              << "\n";
  }
  print_term(t, opts.format, std::cout);
  return kExitOk;
}

int cmd_rewrite(const CommonOpts& opts, const std::string& term_file,
                const std::string& strategy_file, bool modulo_ac) {
  LoadedRules lr = load_rules(opts.rules_file);
  rwkit::TermParser parser(lr.gsig.signature());
  parser.set_def_resolver([&lr](const std::string& n) -> rwkit::TermPtr {
    auto it = lr.defs.find(n);
    return it == lr.defs.end() ? nullptr : it->second;
  });
  rwkit::TermPtr t = parser.parse(strip(read_file(term_file)));
  rwkit::StrategyPtr s = lr.env.parse_strategy(strip(read_file(strategy_file)));

  rwkit::Fuel fuel{opts.fuel};
  rwkit::EvalContext ctx;
  ctx.eval_cond = [&lr](const rwkit::TermPtr& c) {
    return rwkit::eval_condition(lr.gsig, lr.theory, c);
  };
  if (modulo_ac) {
    rwkit::SetOutcome o =
        rwkit::eval_modulo_term(s, t, lr.theory, fuel, ctx);
    if (o.exhausted) return kExitFuel;
    if (o.failed()) {
      std::cerr << "strategy failed\n";
      return kExitFail;
    }
    if (opts.format == "json") {
      nlohmann::json doc;
      doc["schema"] = "rwkit-results/1";
      doc["results"] = nlohmann::json::array();
      for (const auto& r : o.terms.items()) {
        doc["results"].push_back(rwkit::to_text(r));
      }
      std::cout << doc.dump(2) << "\n";
    } else {
      for (const auto& r : o.terms.items()) {
        print_term(r, opts.format, std::cout);
      }
    }
    return kExitOk;
  }
  rwkit::Outcome o = rwkit::eval(s, t, fuel, ctx);
  if (o.status == rwkit::Status::Exhausted) return kExitFuel;
  if (o.status == rwkit::Status::Fail) {
    std::cerr << "strategy failed\n";
    return kExitFail;
  }
  print_term(o.term, opts.format, std::cout);
  return kExitOk;
}

int cmd_derive(const std::string& corpus_dir,
               const std::vector<std::string>& packs, long long fuel,
               const std::string& format, bool golden_update,
               const std::string& trace_out) {
  rwkit::Corpus corpus = rwkit::load_corpus(corpus_dir);
  rwkit::Report report;
  try {
    report = rwkit::run_derivation(corpus, packs, rwkit::Fuel{fuel},
                                   golden_update);
  } catch (const rwkit::FuelExhaustedError& e) {
    std::cerr << e.what() << "\n";
    return kExitFuel;
  }
  if (!trace_out.empty()) {
    std::ofstream out(trace_out);
    out << report.to_json();
  }
  if (format == "json") {
    std::cout << report.to_json() << "\n";
  } else if (format == "latex") {
    std::cout << rwkit::trace_to_latex(report.blocks);
  } else {
    std::cout << report.summary();
  }
  if (!report.ok) {
    std::cerr << "expected: " << report.expected << "\n";
    for (const auto& a : report.actual) std::cerr << "actual:   " << a << "\n";
    return kExitFail;
  }
  return kExitOk;
}

int cmd_extend(const CommonOpts& opts, const std::string& strategy_file,
               const std::string& corpus_dir, const std::string& pack_name) {
  rwkit::Corpus corpus = rwkit::load_corpus(corpus_dir);
  rwkit::RuleEnv env = corpus.make_env();
  rwkit::StrategyPtr s = env.parse_strategy(strip(read_file(strategy_file)));
  rwkit::ExtensionPack pack = rwkit::load_pack(corpus, pack_name);
  rwkit::Fuel fuel{opts.fuel};
  rwkit::EvalContext ctx;
  ctx.eval_cond = [&corpus](const rwkit::TermPtr& c) {
    return rwkit::eval_condition(corpus.gsig, corpus.theory, c);
  };
  try {
    for (const auto& [name, so] : pack.so_strategies) {
      s = rwkit::so_eval(so, s, fuel, ctx);
    }
  } catch (const rwkit::SoFailure&) {
    std::cerr << "second-order strategy failed\n";
    return kExitFail;
  } catch (const rwkit::MalformedReification& e) {
    std::cerr << e.what() << "\n";
    return kExitFail;
  } catch (const rwkit::FuelExhaustedError&) {
    return kExitFuel;
  }
  std::cout << rwkit::to_text(s) << "\n";
  return kExitOk;
}

int cmd_trace(const std::string& trace_file, const std::string& format) {
  nlohmann::json doc = nlohmann::json::parse(read_file(trace_file));
  const nlohmann::json& trace =
      doc.contains("trace") ? doc["trace"] : doc;
  if (format == "latex") {
    for (const auto& b : trace["blocks"]) {
      std::cout << "\\paragraph{Block " << b["block"] << "}\n";
      for (const auto& s : b["steps"]) {
        std::cout << "\\textbf{Step " << s["step"] << "} ("
                  << s["label"].get<std::string>() << ") => "
                  << s["after"].get<std::string>() << "\n";
      }
    }
    return kExitOk;
  }
  for (const auto& b : trace["blocks"]) {
    std::cout << "block " << b["block"] << (b["ok"].get<bool>() ? "" : " FAIL")
              << "\n";
    for (const auto& s : b["steps"]) {
      std::cout << "  step " << s["step"] << " ["
                << s["label"].get<std::string>() << "]\n";
      std::cout << "    " << s["after"].get<std::string>() << "\n";
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"term rewriting and strategy toolkit for multi-scale model "
               "derivations"};
  app.require_subcommand(1);

  CommonOpts common;
  std::string term_file, strategy_file, corpus_dir = "corpus";
  std::string trace_file, trace_out, pack_name;
  std::vector<std::string> packs;
  std::string modulo_str;
  bool validate_term = false, golden_update = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--rules", common.rules_file, "rule file");
    cmd->add_option("--format", common.format, "text|json|latex")
        ->check(CLI::IsMember({"text", "json", "latex"}));
    cmd->add_option("--fuel", common.fuel, "mu-unfolding budget")
        ->check(CLI::PositiveNumber);
  };

  CLI::App* parse = app.add_subcommand("parse", "parse and reprint a term");
  parse->add_option("term", term_file, "term file")->required();
  parse->add_flag("--validate", validate_term, "check grammar membership");
  add_common(parse);

  CLI::App* rewrite =
      app.add_subcommand("rewrite", "apply a strategy to a term");
  rewrite->add_option("--term", term_file, "term file")->required();
  rewrite->add_option("--strategy", strategy_file, "strategy file")
      ->required();
  rewrite->add_option("--modulo", modulo_str,
                      "rewrite modulo the declared AC symbols")
      ->check(CLI::IsMember({"ac"}));
  add_common(rewrite);

  CLI::App* derive =
      app.add_subcommand("derive", "replay a model derivation");
  derive->add_option("model", corpus_dir,
                     "corpus directory (the model to derive)");
  derive->add_option("--pack", packs, "extension packs to apply in order");
  derive->add_option("--fuel", common.fuel, "mu-unfolding budget")
      ->check(CLI::PositiveNumber);
  derive->add_option("--format", common.format, "text|json|latex")
      ->check(CLI::IsMember({"text", "json", "latex"}));
  derive->add_flag("--golden-update", golden_update,
                   "regenerate frozen intermediates");
  derive->add_option("--trace-out", trace_out, "write the JSON trace here");

  CLI::App* extend = app.add_subcommand(
      "extend", "transform a strategy with a pack's second-order strategies");
  extend->add_option("--strategy", strategy_file, "strategy file")
      ->required();
  extend->add_option("--pack", pack_name, "extension pack name")->required();
  extend->add_option("--corpus", corpus_dir, "corpus directory");
  add_common(extend);

  CLI::App* trace = app.add_subcommand("trace", "render a JSON trace");
  trace->add_option("trace", trace_file, "trace JSON file")->required();
  trace->add_option("--format", common.format, "text|latex");

  CLI11_PARSE(app, argc, argv);

  try {
    if (parse->parsed()) {
      return cmd_parse(common, term_file, validate_term);
    }
    if (rewrite->parsed()) {
      return cmd_rewrite(common, term_file, strategy_file,
                         modulo_str == "ac");
    }
    if (derive->parsed()) {
      return cmd_derive(corpus_dir, packs, common.fuel, common.format,
                        golden_update, trace_out);
    }
    if (extend->parsed()) {
      return cmd_extend(common, strategy_file, corpus_dir, pack_name);
    }
    if (trace->parsed()) {
      return cmd_trace(trace_file, common.format);
    }
  } catch (const rwkit::FuelExhaustedError& e) {
    std::cerr << e.what() << "\n";
    return kExitFuel;
  } catch (const rwkit::StepMismatchError& e) {
    std::cerr << e.what() << "\n";
    return kExitFail;
  } catch (const rwkit::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitInput;
  } catch (const rwkit::RwError& e) {
    std::cerr << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
