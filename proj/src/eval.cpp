#include "rwkit/eval.hpp"

namespace rwkit {

namespace {

struct Frame {
  const Frame* parent = nullptr;
  const std::string* name = nullptr;
  const Strategy* mu = nullptr;

  const Strategy* lookup(const std::string& x) const {
    for (const Frame* f = this; f; f = f->parent) {
      if (f->name && *f->name == x) return f->mu;
    }
    return nullptr;
  }
};

struct Evaluator {
  Fuel& fuel;
  const EvalContext& ctx;

  Outcome run(const Strategy& s, const TermPtr& t, const Frame* env) {
    if (ctx.memory_mode && !t->is_var() && t->arity() == 2 &&
        t->head().name == ctx.memory_symbol) {
      Outcome inner = run(s, t->children()[0], env);
      if (!inner.is_ok()) return inner;
      return Outcome::ok(
          Term::app(t->head(), {inner.term, t->children()[1]}));
    }
    switch (s.kind()) {
      case StrKind::Rule: {
        auto sigma = match_at_root(s.lhs(), t);
        if (!sigma) return Outcome::fail();
        if (s.cond()) {
          if (!ctx.eval_cond) {
            throw MissingConditionEvaluator(
                "conditional rule '" + s.rule_name() +
                "' evaluated without a condition evaluator");
          }
          if (!ctx.eval_cond(sigma->apply(s.cond()))) return Outcome::fail();
        }
        if (ctx.fire_counts && !s.rule_name().empty()) {
          ++(*ctx.fire_counts)[s.rule_name()];
        }
        return Outcome::ok(sigma->apply(s.rhs()));
      }
      case StrKind::Seq: {
        Outcome a = run(*s.first(), t, env);
        if (!a.is_ok()) return a;
        return run(*s.second(), a.term, env);
      }
      case StrKind::Choice: {
        Outcome a = run(*s.first(), t, env);
        if (a.status == Status::Fail) return run(*s.second(), t, env);
        return a;
      }
      case StrKind::Eta: {
        Outcome a = run(*s.first(), t, env);
        if (a.status == Status::Fail) return Outcome::ok(t);
        return a;
      }
      case StrKind::Some: {
        if (t->is_var() || t->arity() == 0) return Outcome::fail();
        std::vector<TermPtr> kids;
        kids.reserve(t->arity());
        bool any = false;
        for (const auto& c : t->children()) {
          Outcome o = run(*s.first(), c, env);
          if (o.status == Status::Exhausted) return o;
          if (o.is_ok()) {
            any = true;
            kids.push_back(o.term);
          } else {
            kids.push_back(c);
          }
        }
        if (!any) return Outcome::fail();
        return Outcome::ok(Term::app(t->head(), std::move(kids)));
      }
      case StrKind::Child: {
        int j = s.child_index();
        if (t->is_var() || t->arity() == 0 || j < 1 || j > t->arity()) {
          return Outcome::fail();
        }
        Outcome o = run(*s.first(), t->children()[j - 1], env);
        if (!o.is_ok()) return o;
        std::vector<TermPtr> kids = t->children();
        kids[j - 1] = o.term;
        return Outcome::ok(Term::app(t->head(), std::move(kids)));
      }
      case StrKind::FixVar: {
        const Strategy* mu = env ? env->lookup(s.var()) : nullptr;
        if (!mu) throw UnboundFixVar(s.var());
        return run(*mu, t, env);
      }
      case StrKind::Mu: {
        if (fuel.remaining <= 0) return Outcome::exhausted();
        --fuel.remaining;
        Frame frame{env, &s.var(), &s};
        return run(*s.first(), t, &frame);
      }
    }
    return Outcome::fail();
  }
};

}  // namespace

Outcome eval(const StrategyPtr& s, const TermPtr& t, Fuel& fuel,
             const EvalContext& ctx) {
  Evaluator ev{fuel, ctx};
  return ev.run(*s, t, nullptr);
}

Outcome eval_mem(const StrategyPtr& s, const TermPtr& t, Fuel& fuel,
                 const EvalContext& ctx) {
  EvalContext mem = ctx;
  mem.memory_mode = true;
  Evaluator ev{fuel, mem};
  return ev.run(*s, t, nullptr);
}

}  // namespace rwkit
