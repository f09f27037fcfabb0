#include "rwkit/meta.hpp"

#include "rwkit/condition.hpp"
#include "rwkit/parser.hpp"

namespace rwkit {

namespace {
constexpr const char* kFoPrefix = "fo_";

Symbol sym(const char* name, int arity) { return Symbol{name, arity}; }

TermPtr constant(const std::string& name) {
  return Term::app(Symbol{name, 0}, {});
}
}  // namespace

std::string fo_var_constant(const std::string& var_name) {
  return kFoPrefix + var_name;
}

bool is_fo_var_constant(const std::string& symbol_name) {
  return symbol_name.rfind(kFoPrefix, 0) == 0;
}

std::string fo_var_name(const std::string& symbol_name) {
  return symbol_name.substr(std::string(kFoPrefix).size());
}

void declare_meta_constructors(Signature& sig) {
  sig.declare("rule", 2);
  sig.declare("crule", 3);
  sig.declare("seq", 2);
  sig.declare("lchoice", 2);
  sig.declare("eta", 1);
  sig.declare("some", 1);
  sig.declare("child", 2);
  sig.declare("mu", 2);
  declare_condition_vocabulary(sig);
}

namespace {

/// Rewrite variables inside rule sides become constants.
TermPtr freeze_vars(const TermPtr& t) {
  if (t->is_var()) return constant(fo_var_constant(t->var_name()));
  if (t->children().empty()) return t;
  std::vector<TermPtr> kids;
  kids.reserve(t->children().size());
  for (const auto& c : t->children()) kids.push_back(freeze_vars(c));
  return Term::app(t->head(), std::move(kids));
}

TermPtr thaw_vars(const TermPtr& t) {
  if (t->is_var()) return t;  // a second-order variable slipped through
  if (t->arity() == 0 && is_fo_var_constant(t->head().name)) {
    return Term::var(fo_var_name(t->head().name));
  }
  if (t->children().empty()) return t;
  std::vector<TermPtr> kids;
  kids.reserve(t->children().size());
  for (const auto& c : t->children()) kids.push_back(thaw_vars(c));
  return Term::app(t->head(), std::move(kids));
}

struct Reflector {
  StrategyPtr strategy(const TermPtr& t, Position pos,
                       std::set<std::string>& bound) {
    if (t->is_var()) {
      throw MalformedReification("unexpected rewrite variable", pos);
    }
    const std::string& h = t->head().name;
    if (h == "rule" && t->arity() == 2) {
      return Strategy::rule(thaw_vars(t->children()[0]),
                            thaw_vars(t->children()[1]));
    }
    if (h == "crule" && t->arity() == 3) {
      return Strategy::rule(thaw_vars(t->children()[0]),
                            thaw_vars(t->children()[1]),
                            thaw_vars(t->children()[2]));
    }
    if (h == "seq" && t->arity() == 2) {
      return Strategy::seq(strategy(t->children()[0], sub(pos, 1), bound),
                           strategy(t->children()[1], sub(pos, 2), bound));
    }
    if (h == "lchoice" && t->arity() == 2) {
      return Strategy::choice(strategy(t->children()[0], sub(pos, 1), bound),
                              strategy(t->children()[1], sub(pos, 2), bound));
    }
    if (h == "eta" && t->arity() == 1) {
      return Strategy::eta(strategy(t->children()[0], sub(pos, 1), bound));
    }
    if (h == "some" && t->arity() == 1) {
      return Strategy::some(strategy(t->children()[0], sub(pos, 1), bound));
    }
    if (h == "child" && t->arity() == 2) {
      const TermPtr& j = t->children()[0];
      if (j->is_var() || j->arity() != 0 || !is_numeral(j->head().name)) {
        throw MalformedReification("child index must be a numeral",
                                   sub(pos, 1));
      }
      return Strategy::child(
          std::stoi(j->head().name),
          strategy(t->children()[1], sub(pos, 2), bound));
    }
    if (h == "mu" && t->arity() == 2) {
      const TermPtr& x = t->children()[0];
      if (x->is_var() || x->arity() != 0) {
        throw MalformedReification("mu binder must be a constant",
                                   sub(pos, 1));
      }
      auto [it, inserted] = bound.insert(x->head().name);
      StrategyPtr body = strategy(t->children()[1], sub(pos, 2), bound);
      if (inserted) bound.erase(it);
      return Strategy::mu(x->head().name, body);
    }
    if (t->arity() == 0 && bound.count(h)) return Strategy::fixvar(h);
    throw MalformedReification("'" + h + "' is not a strategy constructor",
                               pos);
  }

  static Position sub(Position p, int i) {
    p.push_back(i);
    return p;
  }
};

}  // namespace

TermPtr reify(const StrategyPtr& s) {
  switch (s->kind()) {
    case StrKind::Rule: {
      if (s->cond()) {
        return Term::app(sym("crule", 3),
                         {freeze_vars(s->lhs()), freeze_vars(s->rhs()),
                          freeze_vars(s->cond())});
      }
      return Term::app(sym("rule", 2),
                       {freeze_vars(s->lhs()), freeze_vars(s->rhs())});
    }
    case StrKind::Seq:
      return Term::app(sym("seq", 2), {reify(s->first()), reify(s->second())});
    case StrKind::Choice:
      return Term::app(sym("lchoice", 2),
                       {reify(s->first()), reify(s->second())});
    case StrKind::Eta:
      return Term::app(sym("eta", 1), {reify(s->first())});
    case StrKind::Some:
      return Term::app(sym("some", 1), {reify(s->first())});
    case StrKind::Child:
      return Term::app(sym("child", 2),
                       {constant(std::to_string(s->child_index())),
                        reify(s->first())});
    case StrKind::FixVar:
      return constant(s->var());
    case StrKind::Mu:
      return Term::app(sym("mu", 2),
                       {constant(s->var()), reify(s->first())});
  }
  throw RwError("unreachable strategy kind");
}

StrategyPtr reflect(const TermPtr& t) {
  Reflector r;
  std::set<std::string> bound;
  return r.strategy(t, {}, bound);
}

StrategyPtr so_eval(const StrategyPtr& so, const StrategyPtr& s, Fuel& fuel,
                    const EvalContext& ctx) {
  check_closed(so);
  check_closed(s);
  TermPtr reified = reify(s);
  Outcome out = eval(so, reified, fuel, ctx);
  if (out.status == Status::Exhausted) throw FuelExhaustedError();
  if (out.status == Status::Fail) throw SoFailure();
  StrategyPtr back = reflect(out.term);
  check_closed(back);
  return back;
}

StrategyPtr so_compose(StrategyPtr a, StrategyPtr b) {
  return Strategy::seq(std::move(a), std::move(b));
}

}  // namespace rwkit
