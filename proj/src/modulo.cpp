#include "rwkit/modulo.hpp"

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

struct ModEvaluator {
  const EquationalTheory& E;
  Fuel& fuel;
  const EvalContext& ctx;

  SetOutcome run_set(const Strategy& s, const TermSet& in, const Frame* env) {
    SetOutcome acc;
    for (const auto& t : in.items()) {
      SetOutcome one = run(s, t, env);
      if (one.exhausted) return SetOutcome::out_of_fuel();
      acc.terms.merge(one.terms);
    }
    return acc;
  }

  SetOutcome run(const Strategy& s, const TermPtr& t, const Frame* env) {
    if (ctx.memory_mode && !t->is_var() && t->arity() == 2 &&
        t->head().name == ctx.memory_symbol) {
      SetOutcome inner = run(s, t->children()[0], env);
      if (inner.exhausted || inner.failed()) return inner;
      SetOutcome out;
      for (const auto& u : inner.terms.items()) {
        out.terms.insert(Term::app(t->head(), {u, t->children()[1]}), E);
      }
      return out;
    }
    switch (s.kind()) {
      case StrKind::Rule:
        return apply_rule(s, t);
      case StrKind::Seq: {
        SetOutcome a = run(*s.first(), t, env);
        if (a.exhausted || a.failed()) return a;
        return run_set(*s.second(), a.terms, env);
      }
      case StrKind::Choice: {
        SetOutcome a = run(*s.first(), t, env);
        if (a.failed()) return run(*s.second(), t, env);
        return a;
      }
      case StrKind::Eta: {
        SetOutcome a = run(*s.first(), t, env);
        if (a.failed()) return SetOutcome::of(t, E);
        return a;
      }
      case StrKind::Some:
        return some_clause(s, t, env);
      case StrKind::Child:
        return child_clause(s, t, env);
      case StrKind::FixVar: {
        const Strategy* mu = env ? env->lookup(s.var()) : nullptr;
        if (!mu) throw UnboundFixVar(s.var());
        return run(*mu, t, env);
      }
      case StrKind::Mu: {
        if (fuel.remaining <= 0) return SetOutcome::out_of_fuel();
        --fuel.remaining;
        Frame frame{env, &s.var(), &s};
        return run(*s.first(), t, &frame);
      }
    }
    return SetOutcome::fail();
  }

  SetOutcome apply_rule(const Strategy& s, const TermPtr& t) {
    bool root_ac = !s.lhs()->is_var() && E.is_ac(s.lhs()->head().name) &&
                   s.lhs()->head().name != E.memory_symbol;
    std::vector<ACMatch> matches =
        match_modulo_full(s.lhs(), t, E, root_ac);
    SetOutcome out;
    bool fired = false;
    for (const auto& m : matches) {
      if (s.cond()) {
        if (!ctx.eval_cond) {
          throw MissingConditionEvaluator(
              "conditional rule '" + s.rule_name() +
              "' evaluated without a condition evaluator");
        }
        TermPtr instantiated = m.sigma.apply(s.cond());
        if (!is_ground(instantiated)) {
          throw ConditionIllTyped("condition of rule '" + s.rule_name() +
                                  "' is not closed after matching: " +
                                  to_text(instantiated));
        }
        if (!ctx.eval_cond(instantiated)) continue;
      }
      fired = true;
      TermPtr result = m.sigma.apply(s.rhs());
      if (!m.remainder.empty()) {
        std::vector<TermPtr> parts = m.remainder;
        parts.push_back(result);
        result = ac_rebuild(s.lhs()->head(), std::move(parts), E);
      }
      out.terms.insert(result, E);
    }
    if (fired && ctx.fire_counts && !s.rule_name().empty()) {
      ++(*ctx.fire_counts)[s.rule_name()];
    }
    return out;
  }

  SetOutcome some_clause(const Strategy& s, const TermPtr& t,
                         const Frame* env) {
    if (t->is_var() || t->arity() == 0) return SetOutcome::fail();
    std::vector<TermPtr> sibs = ac_siblings(t, E);
    std::vector<TermSet> per_child(sibs.size());
    bool any = false;
    for (size_t i = 0; i < sibs.size(); ++i) {
      SetOutcome o = run(*s.first(), sibs[i], env);
      if (o.exhausted) return SetOutcome::out_of_fuel();
      if (!o.failed()) {
        any = true;
        per_child[i] = o.terms;
      } else {
        per_child[i].insert(sibs[i], E);  // fail-as-identity per child
      }
    }
    if (!any) return SetOutcome::fail();
    return combine(t, per_child);
  }

  SetOutcome child_clause(const Strategy& s, const TermPtr& t,
                          const Frame* env) {
    if (t->is_var() || t->arity() == 0) return SetOutcome::fail();
    std::vector<TermPtr> sibs = ac_siblings(t, E);
    int j = s.child_index();
    if (j < 1 || j > static_cast<int>(sibs.size())) {
      return SetOutcome::fail();
    }
    SetOutcome o = run(*s.first(), sibs[j - 1], env);
    if (o.exhausted || o.failed()) return o;
    std::vector<TermSet> per_child(sibs.size());
    for (size_t i = 0; i < sibs.size(); ++i) {
      if (static_cast<int>(i) == j - 1) {
        per_child[i] = o.terms;
      } else {
        per_child[i].insert(sibs[i], E);
      }
    }
    return combine(t, per_child);
  }

  /// Cartesian recombination of per-sibling result sets.
  SetOutcome combine(const TermPtr& t,
                     const std::vector<TermSet>& per_child) {
    std::vector<std::vector<TermPtr>> choices;
    long long total = 1;
    for (const auto& set : per_child) {
      choices.push_back(set.items());
      total *= static_cast<long long>(choices.back().size());
      if (total > kAcSplitCap) throw AcMatchLimit();
    }
    SetOutcome out;
    std::vector<size_t> idx(choices.size(), 0);
    while (true) {
      std::vector<TermPtr> kids;
      kids.reserve(choices.size());
      for (size_t i = 0; i < choices.size(); ++i) {
        kids.push_back(choices[i][idx[i]]);
      }
      TermPtr rebuilt;
      if (E.is_assoc(t->head().name) && t->head().name != E.memory_symbol) {
        rebuilt = ac_rebuild(t->head(), std::move(kids), E);
      } else {
        rebuilt = Term::app(t->head(), std::move(kids));
      }
      out.terms.insert(rebuilt, E);
      size_t k = 0;
      for (; k < idx.size(); ++k) {
        if (++idx[k] < choices[k].size()) break;
        idx[k] = 0;
      }
      if (k == idx.size()) break;
    }
    return out;
  }
};

}  // namespace

SetOutcome eval_modulo(const StrategyPtr& s, const TermSet& input,
                       const EquationalTheory& E, Fuel& fuel,
                       const EvalContext& ctx) {
  ModEvaluator ev{E, fuel, ctx};
  return ev.run_set(*s, input, nullptr);
}

SetOutcome eval_modulo_term(const StrategyPtr& s, const TermPtr& t,
                            const EquationalTheory& E, Fuel& fuel,
                            const EvalContext& ctx) {
  ModEvaluator ev{E, fuel, ctx};
  return ev.run(*s, t, nullptr);
}

SetOutcome eval_conditional(const ConditionalRule& rule, const TermPtr& t,
                            const EquationalTheory& E,
                            const EvalContext& ctx) {
  Fuel fuel;
  ModEvaluator ev{E, fuel, ctx};
  return ev.run(*rule.as_strategy(), t, nullptr);
}

}  // namespace rwkit
