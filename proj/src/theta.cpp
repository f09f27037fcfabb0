#include "rwkit/theta.hpp"

#include <algorithm>
#include <sstream>

#include "rwkit/condition.hpp"

namespace rwkit {

std::string varset_text(const VarSet& s) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& v : s) {
    if (!first) os << ", ";
    first = false;
    os << to_text(v);
  }
  os << "}";
  return os.str();
}

namespace {

VarSet set_union(const VarSet& a, const VarSet& b) {
  VarSet out = a;
  out.insert(b.begin(), b.end());
  return out;
}

VarSet set_minus(const VarSet& a, const VarSet& b) {
  VarSet out;
  for (const auto& t : a) {
    if (!b.count(t)) out.insert(t);
  }
  return out;
}

bool subset_of(const VarSet& a, const VarSet& b) {
  return std::all_of(a.begin(), a.end(),
                     [&](const TermPtr& t) { return b.count(t) != 0; });
}

bool intersects(const VarSet& a, const VarSet& b) {
  return std::any_of(a.begin(), a.end(),
                     [&](const TermPtr& t) { return b.count(t) != 0; });
}

struct Analyzer {
  const GrammarSignature& g;
  std::vector<std::string>* diag;

  VarSet of_list(const TermPtr& t, const Position& pos) {
    VarSet out;
    int i = 1;
    TermPtr cur = t;
    while (!cur->is_var() && cur->head().name == kConsName) {
      Position at = pos;
      at.push_back(i++);
      out = set_union(out, of(cur->children()[0], at));
      cur = cur->children()[1];
    }
    return out;
  }

  /// Derivative variables may be index-decorated; the base variable is
  /// what membership in the argument's dependency set is checked on.
  static TermPtr indexed_base(const TermPtr& v) {
    TermPtr cur = v;
    while (!cur->is_var() && cur->head().name == "IndexedVar") {
      cur = cur->children()[0];
    }
    return cur;
  }

  VarSet of(const TermPtr& t, Position pos) {
    if (t->is_var()) {
      throw GuardViolated("dependency analysis requires a ground term", pos);
    }
    const std::string& h = t->head().name;
    if (t->arity() == 0) {
      if (g.is_cons_name(h) || h == "BotF" || h == "BotR" ||
          g.is_type_tag(h)) {
        return {};
      }
      return {};
    }
    if (h == "Var" || h == "IndexedVar") return {t};
    if (g.is_op(h)) {
      VarSet out;
      for (int i = 0; i < t->arity(); ++i) {
        Position at = pos;
        at.push_back(i + 1);
        out = set_union(out, of(t->children()[i], at));
      }
      return out;
    }
    if (h == "Fun") return of_list(t->children()[1], sub(pos, 2));
    if (h == "IndexedFun" || h == "IndexedReg") {
      return of(t->children()[0], sub(pos, 1));
    }
    if (h == "M") return of(t->children()[0], sub(pos, 1));
    if (h == kConsName) return of_list(t, pos);
    if (h == "Oper") return of_oper(t, pos);
    if (h == "Reg" || h == "BC") return {};
    return {};
  }

  VarSet of_oper(const TermPtr& t, const Position& pos) {
    const std::string name = t->children()[0]->head().name;
    const TermPtr& args = t->children()[1];
    const TermPtr& dom = t->children()[2];
    const TermPtr& cod = t->children()[3];
    auto arg_theta = [&] {
      if (is_list_term(args)) return of_list(args, sub(pos, 2));
      return of(args, sub(pos, 2));
    };
    if (name == "Integral") {
      return set_minus(arg_theta(), of_list(dom, sub(pos, 3)));
    }
    if (name == "Partial") {
      VarSet u = arg_theta();
      VarSet x = of_list(dom, sub(pos, 3));
      VarSet x_bases;
      for (const auto& v : x) x_bases.insert(indexed_base(v));
      if (subset_of(x, u) || subset_of(x_bases, u)) return u;
      if (diag) {
        diag->push_back("derivative with respect to " +
                        varset_text(x) + " of an expression depending on " +
                        varset_text(u) + " is identically zero");
      }
      return {};
    }
    if (name == "Restriction") {
      return of_list(cod, sub(pos, 4));
    }
    if (name == "T") {
      VarSet u = arg_theta();
      VarSet x = of_list(dom, sub(pos, 3));
      if (!intersects(x, u)) {
        throw GuardViolated(
            "two-scale transform of an expression independent of its "
            "domain variables",
            pos);
      }
      return set_union(set_minus(u, x), of_list(cod, sub(pos, 4)));
    }
    if (name == "Tstar" || name == "B") {
      VarSet v = arg_theta();
      VarSet xs = of_list(dom, sub(pos, 3));
      if (!intersects(xs, v)) {
        throw GuardViolated(
            "adjoint/regularization of an expression independent of its "
            "domain variables",
            pos);
      }
      return set_union(set_minus(v, xs), of_list(cod, sub(pos, 4)));
    }
    if (name == "Sum") {
      return set_minus(arg_theta(), of_list(dom, sub(pos, 3)));
    }
    // Extension operators (Equals, Periodic): union over the arguments.
    VarSet out = arg_theta();
    out = set_union(out, of_list(dom, sub(pos, 3)));
    return set_minus(out, {});
  }

  static Position sub(Position p, int i) {
    p.push_back(i);
    return p;
  }
};

struct CondEval {
  const GrammarSignature& g;
  const EquationalTheory& E;

  bool truth(const TermPtr& c) {
    if (c->is_var()) {
      throw IllTypedCondition("condition contains an unbound variable ?" +
                              c->var_name());
    }
    const std::string& h = c->head().name;
    if (h == "true") return true;
    if (h == "false") return false;
    if (h == "and") return truth(c->children()[0]) && truth(c->children()[1]);
    if (h == "or") return truth(c->children()[0]) || truth(c->children()[1]);
    if (h == "not") return !truth(c->children()[0]);
    if (h == "eq") {
      return ac_equal(resolve(c->children()[0]), resolve(c->children()[1]),
                      E);
    }
    if (h == "neq") {
      return !ac_equal(resolve(c->children()[0]), resolve(c->children()[1]),
                       E);
    }
    if (h == "in") return member(c->children()[0], c->children()[1]);
    if (h == "subset") {
      return subset_of(setof(c->children()[0]), setof(c->children()[1]));
    }
    if (h == "disjoint") {
      return !intersects(setof(c->children()[0]), setof(c->children()[1]));
    }
    if (h == "empty") return setof(c->children()[0]).empty();
    if (h == "hasbc") return has_bc(c);
    if (h == "kindof") {
      const TermPtr& f = c->children()[0];
      const TermPtr& tag = c->children()[1];
      return !f->is_var() && f->head().name == "Fun" &&
             term_equal(f->children()[3], tag);
    }
    throw IllTypedCondition("unknown condition form '" + h + "'");
  }

  /// regionof(v) resolves to the region of a variable term.
  TermPtr resolve(const TermPtr& t) {
    if (!t->is_var() && t->head().name == "regionof" && t->arity() == 1) {
      TermPtr v = resolve(t->children()[0]);
      while (!v->is_var() && v->head().name == "IndexedVar") {
        v = v->children()[0];
      }
      if (v->is_var() || v->head().name != "Var") {
        throw IllTypedCondition("regionof expects a variable term");
      }
      return v->children()[1];
    }
    return t;
  }

  VarSet setof(const TermPtr& s) {
    if (!s->is_var() && s->head().name == "theta" && s->arity() == 1) {
      return theta(g, s->children()[0]);
    }
    throw IllTypedCondition("expected a theta(...) set expression, found " +
                            to_text(s));
  }

  bool member(const TermPtr& x, const TermPtr& s) {
    if (!s->is_var() && s->head().name == "theta") {
      VarSet vs = setof(s);
      TermPtr cx = ac_canonical(resolve(x), E);
      return vs.count(cx) != 0;
    }
    // domain-membership annotation: variable 'in' region
    TermPtr v = resolve(x);
    while (!v->is_var() && v->head().name == "IndexedVar") {
      v = v->children()[0];
    }
    if (!v->is_var() && v->head().name == "Var") {
      const TermPtr& reg = v->children()[1];
      if (ac_equal(reg, s, E)) return true;
      return !s->is_var() && s->arity() == 0 && !reg->is_var() &&
             reg->head().name == "Reg" &&
             reg->children()[0]->head().name == s->head().name;
    }
    throw IllTypedCondition("membership atom expects theta(...) or a region");
  }

  bool has_bc(const TermPtr& c) {
    const TermPtr& f = resolve(c->children()[0]);
    const TermPtr& kind = c->children()[1];
    const TermPtr& where = c->children()[2];
    if (f->is_var() || f->head().name != "Fun") return false;
    for (const auto& bc : list_items(f->children()[2])) {
      if (bc->is_var() || bc->head().name != "BC") continue;
      if (!term_equal(bc->children()[0], kind)) continue;
      const TermPtr& reg = bc->children()[1];
      if (ac_equal(reg, resolve(where), E)) return true;
      // bare region name matches the region term's name slot
      if (!where->is_var() && where->arity() == 0 && !reg->is_var() &&
          reg->head().name == "Reg" &&
          reg->children()[0]->head().name == where->head().name) {
        return true;
      }
    }
    return false;
  }
};

}  // namespace

VarSet theta(const GrammarSignature& g, const TermPtr& t,
             std::vector<std::string>* diagnostics) {
  Analyzer a{g, diagnostics};
  return a.of(t, {});
}

bool eval_condition(const GrammarSignature& g, const EquationalTheory& E,
                    const TermPtr& cond) {
  CondEval ev{g, E};
  return ev.truth(cond);
}

}  // namespace rwkit
