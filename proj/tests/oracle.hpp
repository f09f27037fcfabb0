#pragma once

// Independent reference interpreter for the strategy semantics: the
// denotational clauses implemented naively, with mu handled by literal
// textual unfolding s[X/mu X.s]. Deliberately shares no evaluation code
// with the engine; used to cross-check eval.

#include "rwkit/eval.hpp"
#include "rwkit/strategy.hpp"

namespace rwtest {

using namespace rwkit;

inline StrategyPtr substitute_fixvar(const StrategyPtr& s,
                                     const std::string& x,
                                     const StrategyPtr& body) {
  switch (s->kind()) {
    case StrKind::Rule:
      return s;
    case StrKind::Seq:
      return Strategy::seq(substitute_fixvar(s->first(), x, body),
                           substitute_fixvar(s->second(), x, body));
    case StrKind::Choice:
      return Strategy::choice(substitute_fixvar(s->first(), x, body),
                              substitute_fixvar(s->second(), x, body));
    case StrKind::Eta:
      return Strategy::eta(substitute_fixvar(s->first(), x, body));
    case StrKind::Some:
      return Strategy::some(substitute_fixvar(s->first(), x, body));
    case StrKind::Child:
      return Strategy::child(s->child_index(),
                             substitute_fixvar(s->first(), x, body));
    case StrKind::FixVar:
      return s->var() == x ? body : s;
    case StrKind::Mu:
      if (s->var() == x) return s;  // shadowed
      return Strategy::mu(s->var(), substitute_fixvar(s->first(), x, body));
  }
  return s;
}

inline Outcome oracle_eval(const StrategyPtr& s, const TermPtr& t,
                           long long& fuel) {
  switch (s->kind()) {
    case StrKind::Rule: {
      auto sigma = match_at_root(s->lhs(), t);
      if (!sigma) return Outcome::fail();
      return Outcome::ok(sigma->apply(s->rhs()));
    }
    case StrKind::Seq: {
      Outcome a = oracle_eval(s->first(), t, fuel);
      if (!a.is_ok()) return a;
      return oracle_eval(s->second(), a.term, fuel);
    }
    case StrKind::Choice: {
      Outcome a = oracle_eval(s->first(), t, fuel);
      if (a.status == Status::Fail) return oracle_eval(s->second(), t, fuel);
      return a;
    }
    case StrKind::Eta: {
      Outcome a = oracle_eval(s->first(), t, fuel);
      if (a.status == Status::Fail) return Outcome::ok(t);
      return a;
    }
    case StrKind::Some: {
      if (t->is_var() || t->arity() == 0) return Outcome::fail();
      bool any = false;
      std::vector<TermPtr> kids;
      for (const auto& c : t->children()) {
        Outcome o = oracle_eval(s->first(), c, fuel);
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
      int j = s->child_index();
      if (t->is_var() || j < 1 || j > t->arity()) return Outcome::fail();
      Outcome o = oracle_eval(s->first(), t->children()[j - 1], fuel);
      if (!o.is_ok()) return o;
      std::vector<TermPtr> kids = t->children();
      kids[j - 1] = o.term;
      return Outcome::ok(Term::app(t->head(), std::move(kids)));
    }
    case StrKind::FixVar:
      throw UnboundFixVar(s->var());
    case StrKind::Mu: {
      if (fuel <= 0) return Outcome::exhausted();
      --fuel;
      StrategyPtr unfolded = substitute_fixvar(s->first(), s->var(), s);
      return oracle_eval(unfolded, t, fuel);
    }
  }
  return Outcome::fail();
}

}  // namespace rwtest
