#include "rwkit/rules.hpp"

#include <fstream>
#include <functional>
#include <sstream>

#include "rwkit/condition.hpp"
#include "rwkit/meta.hpp"
#include "rwkit/parser.hpp"

namespace rwkit {

std::string ClosureWitness::describe() const {
  return "not closed under assignment {" + assignment + "}: " +
         violation.describe();
}

namespace {

// Slot sorts for the closure analysis.
enum : unsigned {
  kRegion = 1u << 0,
  kFunction = 1u << 1,
  kVariable = 1u << 2,
  kBC = 1u << 3,
  kRegionName = 1u << 4,
  kVarName = 1u << 5,
  kFunName = 1u << 6,
  kOperName = 1u << 7,
  kTypeTag = 1u << 8,
  kBCKind = 1u << 9,
  kCons = 1u << 10,
  kDirList = 1u << 11,
  kRegList = 1u << 12,
  kVarList = 1u << 13,
  kBCList = 1u << 14,
  kFunList = 1u << 15,
  kParamList = 1u << 16,
};
using SortMask = unsigned;

constexpr SortMask kFunSlot = kFunction | kVariable | kCons;
constexpr SortMask kKindSorts = kRegion | kFunction | kVariable | kBC;
constexpr SortMask kListSorts =
    kDirList | kRegList | kVarList | kBCList | kFunList | kParamList;

const char* sort_name(SortMask bit) {
  switch (bit) {
    case kRegion: return "Region";
    case kFunction: return "Function";
    case kVariable: return "Variable";
    case kBC: return "BoundaryCondition";
    case kRegionName: return "RegionName";
    case kVarName: return "VariableName";
    case kFunName: return "FunctionName";
    case kOperName: return "OperatorName";
    case kTypeTag: return "TypeTag";
    case kBCKind: return "BCKind";
    case kCons: return "Constant";
    case kDirList: return "DirectionList";
    case kRegList: return "RegionList";
    case kVarList: return "VariableList";
    case kBCList: return "BCList";
    case kFunList: return "FunctionList";
    case kParamList: return "ParameterList";
  }
  return "?";
}

SortMask element_sort(SortMask list_sort) {
  switch (list_sort) {
    case kDirList: return kCons;
    case kRegList: return kRegion;
    case kVarList: return kVariable;
    case kBCList: return kBC;
    case kFunList: return kFunSlot;
    case kParamList: return kCons;
  }
  return 0;
}

struct SortWalk {
  const GrammarSignature& g;
  bool inferring;
  std::map<std::string, SortMask>& masks;
  std::optional<GrammarViolation> bad;

  bool fail(Position pos, std::string why) {
    if (!bad) bad = GrammarViolation{std::move(pos), std::move(why)};
    return false;
  }

  static Position sub(Position p, int i) {
    p.push_back(i);
    return p;
  }

  bool var_slot(const TermPtr& t, SortMask allowed, Position pos) {
    SortMask& m = masks[t->var_name()];
    if (inferring) {
      SortMask next = (m == 0) ? allowed : (m & allowed);
      if (next == 0) {
        return fail(pos, "variable ?" + t->var_name() +
                             " used in incompatible slots");
      }
      m = next;
      return true;
    }
    if (m == 0) {
      return fail(pos, "variable ?" + t->var_name() +
                           " does not occur on the left side");
    }
    if ((m & allowed) == 0) {
      return fail(pos, "variable ?" + t->var_name() + " has sort " +
                           sort_name(m) + ", slot needs another sort");
    }
    return true;
  }

  SortMask name_sorts(const std::string& n) {
    SortMask m = 0;
    if (g.is_region_name(n)) m |= kRegionName;
    if (g.is_var_name(n)) m |= kVarName;
    if (g.is_fun_name(n)) m |= kFunName;
    if (g.is_oper_name(n)) m |= kOperName;
    if (g.is_type_tag(n)) m |= kTypeTag;
    if (g.is_bc_kind(n)) m |= kBCKind;
    if (g.is_cons_name(n)) m |= kCons;
    return m;
  }

  bool list_slot(const TermPtr& t, SortMask list_sort, Position pos) {
    if (t->is_var()) return var_slot(t, list_sort, pos);
    if (!is_list_term(t)) {
      return fail(pos, std::string("expected a ") + sort_name(list_sort));
    }
    SortMask elem = element_sort(list_sort);
    TermPtr cur = t;
    int i = 1;
    while (!cur->is_var() && cur->head().name == kConsName) {
      if (!check(cur->children()[0], elem, sub(pos, i))) return false;
      cur = cur->children()[1];
      ++i;
    }
    if (cur->is_var()) {
      // list tail variable takes the same list sort
      return var_slot(cur, list_sort, pos);
    }
    return true;
  }

  bool check(const TermPtr& t, SortMask allowed, Position pos) {
    if (t->is_var()) return var_slot(t, allowed, pos);
    const std::string& h = t->head().name;
    if (is_list_term(t)) {
      SortMask lists = allowed & kListSorts;
      if (lists == 0) return fail(pos, "a list fits no allowed slot here");
      // slots carry at most one list sort
      return list_slot(t, lists, pos);
    }
    if (t->arity() == 0) {
      SortMask m = name_sorts(h);
      if (h == "BotR") m |= kRegion;
      if (h == "BotF") m |= kFunction;
      if ((m & allowed) == 0) {
        return fail(pos, "constant '" + h + "' fits no allowed slot here");
      }
      return true;
    }
    if (h == "Reg") {
      if (!(allowed & kRegion)) return fail(pos, "region term not allowed");
      return check(t->children()[0], kRegionName, sub(pos, 1)) &&
             list_slot(t->children()[1], kDirList, sub(pos, 2)) &&
             list_slot(t->children()[2], kRegList, sub(pos, 3)) &&
             check(t->children()[3], kRegion, sub(pos, 4)) &&
             check(t->children()[4], kFunSlot, sub(pos, 5));
    }
    if (h == "IndexedReg") {
      if (!(allowed & kRegion)) return fail(pos, "region term not allowed");
      return check(t->children()[0], kRegion | kFunSlot, sub(pos, 1)) &&
             check(t->children()[1], kVariable, sub(pos, 2));
    }
    if (h == "Var") {
      if (!(allowed & (kVariable | kFunction))) {
        return fail(pos, "variable term not allowed");
      }
      return check(t->children()[0], kVarName, sub(pos, 1)) &&
             check(t->children()[1], kRegion, sub(pos, 2));
    }
    if (h == "IndexedVar") {
      if (!(allowed & (kVariable | kFunction))) {
        return fail(pos, "variable term not allowed");
      }
      return check(t->children()[0], kVariable, sub(pos, 1)) &&
             check(t->children()[1], kVariable, sub(pos, 2));
    }
    if (h == "BC") {
      if (!(allowed & kBC)) return fail(pos, "boundary condition not allowed");
      return check(t->children()[0], kBCKind, sub(pos, 1)) &&
             check(t->children()[1], kRegion, sub(pos, 2)) &&
             check(t->children()[2], kFunSlot, sub(pos, 3));
    }
    if (h == "Fun") {
      if (!(allowed & kFunction)) return fail(pos, "function term not allowed");
      return check(t->children()[0], kFunName, sub(pos, 1)) &&
             list_slot(t->children()[1], kVarList, sub(pos, 2)) &&
             list_slot(t->children()[2], kBCList, sub(pos, 3)) &&
             check(t->children()[3], kTypeTag, sub(pos, 4));
    }
    if (h == "IndexedFun") {
      if (!(allowed & kFunction)) return fail(pos, "function term not allowed");
      return check(t->children()[0], kFunSlot, sub(pos, 1)) &&
             check(t->children()[1], kVariable, sub(pos, 2));
    }
    if (h == "Oper") {
      if (!(allowed & kFunction)) return fail(pos, "operator term not allowed");
      const TermPtr& args = t->children()[1];
      bool args_ok;
      if (!args->is_var() && is_list_term(args)) {
        args_ok = list_slot(args, kFunList, sub(pos, 2));
      } else {
        args_ok = check(args, kFunSlot, sub(pos, 2));
      }
      return check(t->children()[0], kOperName, sub(pos, 1)) && args_ok &&
             list_slot(t->children()[2], kVarList, sub(pos, 3)) &&
             list_slot(t->children()[3], kVarList, sub(pos, 4)) &&
             list_slot(t->children()[4], kParamList, sub(pos, 5));
    }
    if (g.is_op(h)) {
      if (!(allowed & kFunction)) {
        return fail(pos, "algebraic term not allowed");
      }
      for (int i = 0; i < t->arity(); ++i) {
        if (!check(t->children()[i], kFunSlot, sub(pos, i + 1))) return false;
      }
      return true;
    }
    if (h == "M" && t->arity() == 2) {
      SortMask kinds = allowed & kKindSorts;
      if (kinds == 0) return fail(pos, "memory term not allowed");
      return check(t->children()[0], kinds, sub(pos, 1)) &&
             check(t->children()[1], kinds, sub(pos, 2));
    }
    return fail(pos, "term '" + h + "' fits no grammar production");
  }
};

std::string assignment_text(const std::map<std::string, SortMask>& a) {
  std::string out;
  for (const auto& [v, m] : a) {
    if (!out.empty()) out += ", ";
    out += "?" + v + ":" + sort_name(m);
  }
  return out;
}

}  // namespace

std::optional<ClosureWitness> closure_check(const GrammarSignature& g,
                                            const ConditionalRule& rule) {
  std::vector<SortMask> top_kinds;
  if (rule.lhs->is_var()) {
    top_kinds = {kRegion, kFunction, kVariable, kBC};
  } else {
    for (SortMask k : {kRegion, kFunction, kVariable, kBC}) {
      std::map<std::string, SortMask> masks;
      SortWalk infer{g, true, masks, std::nullopt};
      if (infer.check(rule.lhs, k, {})) top_kinds.push_back(k);
    }
  }
  if (top_kinds.empty()) {
    return ClosureWitness{
        "", GrammarViolation{{}, "left side fits no nonterminal"}};
  }
  for (SortMask k : top_kinds) {
    std::map<std::string, SortMask> masks;
    SortWalk infer{g, true, masks, std::nullopt};
    if (!infer.check(rule.lhs, k, {})) continue;
    // enumerate concrete assignments
    std::vector<std::string> vars;
    for (const auto& [v, m] : masks) vars.push_back(v);
    std::vector<SortMask> chosen(vars.size(), 0);
    std::function<std::optional<ClosureWitness>(size_t)> go =
        [&](size_t i) -> std::optional<ClosureWitness> {
      if (i == vars.size()) {
        std::map<std::string, SortMask> assign;
        for (size_t j = 0; j < vars.size(); ++j) assign[vars[j]] = chosen[j];
        SortWalk check{g, false, assign, std::nullopt};
        if (!check.check(rule.rhs, k, {})) {
          return ClosureWitness{assignment_text(assign) + " at " +
                                    std::string(sort_name(k)),
                                *check.bad};
        }
        return std::nullopt;
      }
      SortMask m = masks[vars[i]];
      for (SortMask bit = 1; bit; bit <<= 1) {
        if ((m & bit) == 0) continue;
        chosen[i] = bit;
        if (auto w = go(i + 1)) return w;
      }
      return std::nullopt;
    };
    if (auto w = go(0)) return w;
  }
  return std::nullopt;
}

const ConditionalRule* RuleBase::find(const std::string& rule_name) const {
  for (const auto& r : rules) {
    if (r.name == rule_name) return &r;
  }
  return nullptr;
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

}  // namespace

RuleBase load_rulebase(const std::string& path, GrammarSignature& g,
                       EquationalTheory& E) {
  std::ifstream in(path);
  if (!in) throw RuleLoadError("cannot open rule file '" + path + "'");
  RuleBase base;
  {
    size_t slash = path.find_last_of('/');
    std::string fname = slash == std::string::npos ? path
                                                   : path.substr(slash + 1);
    size_t dot = fname.find_last_of('.');
    base.name = dot == std::string::npos ? fname : fname.substr(0, dot);
  }

  TermParser terms(g.signature());
  terms.set_def_resolver([&base](const std::string& n) -> TermPtr {
    auto it = base.defs.find(n);
    return it == base.defs.end() ? nullptr : it->second;
  });

  std::string line;
  int lineno = 0;
  ConditionalRule* pending = nullptr;
  auto finish_pending = [&]() {
    if (!pending) return;
    const ConditionalRule& r = *pending;
    auto lv = vars_of(r.lhs);
    for (const auto& v : vars_of(r.rhs)) {
      if (!lv.count(v)) {
        throw RuleLoadError("rule '" + r.name + "': right side variable ?" +
                            v + " missing on the left");
      }
    }
    if (r.cond) {
      for (const auto& v : vars_of(r.cond)) {
        if (!lv.count(v)) {
          throw RuleLoadError("rule '" + r.name + "': condition variable ?" +
                              v + " missing on the left");
        }
      }
    }
    if (auto w = closure_check(g, r)) {
      throw RuleLoadError("rule '" + r.name + "': " + w->describe());
    }
    pending = nullptr;
  };

  while (std::getline(in, line)) {
    ++lineno;
    std::string s = strip(line);
    if (s.empty() || s[0] == '#') continue;
    try {
      if (s.rfind("cond:", 0) == 0) {
        if (!pending) {
          throw RuleLoadError("cond: line without a preceding rule");
        }
        pending->cond = parse_condition(strip(s.substr(5)), g.signature());
        finish_pending();
        continue;
      }
      finish_pending();
      if (s.rfind("sig ", 0) == 0) {
        size_t colon = s.find(':');
        if (colon == std::string::npos) {
          throw RuleLoadError("malformed sig line");
        }
        std::string pool = strip(s.substr(4, colon - 4));
        for (const auto& n : split_commas(s.substr(colon + 1))) {
          if (is_fo_var_constant(n)) {
            throw RuleLoadError("symbol '" + n +
                                "' uses the reserved fo_ prefix");
          }
          if (pool == "reg") g.add_region_name(n);
          else if (pool == "var") g.add_var_name(n);
          else if (pool == "fun") g.add_fun_name(n);
          else if (pool == "oper") g.add_oper_name(n);
          else if (pool == "cons") g.add_cons_name(n);
          else throw RuleLoadError("unknown sig pool '" + pool + "'");
        }
        continue;
      }
      if (s.rfind("ac:", 0) == 0) {
        for (const auto& n : split_commas(s.substr(3))) {
          E.declare_ac(n);
          base.ac_decls.push_back(n);
        }
        continue;
      }
      if (s.rfind("def ", 0) == 0) {
        size_t eq = s.find('=');
        if (eq == std::string::npos) throw RuleLoadError("malformed def line");
        std::string name = strip(s.substr(4, eq - 4));
        base.defs[name] = terms.parse(strip(s.substr(eq + 1)));
        continue;
      }
      if (s.rfind("strategy ", 0) == 0) {
        size_t colon = s.find(':');
        if (colon == std::string::npos) {
          throw RuleLoadError("malformed strategy line");
        }
        std::string name = strip(s.substr(9, colon - 9));
        base.macros[name] = strip(s.substr(colon + 1));
        continue;
      }
      if (s.rfind("rule ", 0) == 0) {
        size_t colon = s.find(':');
        if (colon == std::string::npos) {
          throw RuleLoadError("malformed rule line");
        }
        std::vector<std::string> head;
        {
          std::stringstream hs(s.substr(5, colon - 5));
          std::string w;
          while (hs >> w) head.push_back(w);
        }
        if (head.empty() || head.size() > 2) {
          throw RuleLoadError("rule line needs '<name> [category]:'");
        }
        std::string body = s.substr(colon + 1);
        size_t arrow = body.find("~>");
        if (arrow == std::string::npos) {
          throw RuleLoadError("rule body needs 'lhs ~> rhs'");
        }
        ConditionalRule r;
        r.name = head[0];
        r.category = head.size() == 2 ? head[1] : "usual";
        if (r.category != "usual" && r.category != "specialized" &&
            r.category != "auxiliary") {
          throw RuleLoadError("unknown category '" + r.category + "'");
        }
        if (base.find(r.name)) {
          throw RuleLoadError("duplicate rule name '" + r.name + "'");
        }
        r.lhs = terms.parse(strip(body.substr(0, arrow)));
        r.rhs = terms.parse(strip(body.substr(arrow + 2)));
        base.rules.push_back(std::move(r));
        pending = &base.rules.back();
        continue;
      }
      throw RuleLoadError("unrecognized line");
    } catch (const RwError& e) {
      throw RuleLoadError(path + ":" + std::to_string(lineno) + ": " +
                          e.what());
    }
  }
  finish_pending();
  return base;
}

}  // namespace rwkit
