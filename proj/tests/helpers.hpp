#pragma once

#include <random>
#include <vector>

#include "rwkit/parser.hpp"
#include "rwkit/strategy.hpp"
#include "rwkit/term.hpp"

namespace rwtest {

using namespace rwkit;

/// Small playground signature used across the engine tests:
/// f/1, g/1, h/2, plus/2, a, b, c constants.
inline Signature play_sig() {
  Signature s;
  s.declare("f", 1);
  s.declare("g", 1);
  s.declare("h", 2);
  s.declare("plus", 2);
  s.declare("times", 2);
  s.declare("a", 0);
  s.declare("b", 0);
  s.declare("c", 0);
  s.declare("M", 2);
  return s;
}

inline TermPtr pt(const std::string& text) {
  static Signature sig = play_sig();
  TermParser p(sig);
  return p.parse(text);
}

inline StrategyPtr ps(const std::string& text) {
  static Signature sig = play_sig();
  StrategyParser p(sig);
  return p.parse(text);
}

/// Random ground term over the playground signature with at most
/// max_nodes nodes.
inline TermPtr random_term(std::mt19937& rng, int max_nodes) {
  std::uniform_int_distribution<int> pick(0, 6);
  if (max_nodes <= 1) {
    const char* consts[] = {"a", "b", "c"};
    return pt(consts[pick(rng) % 3]);
  }
  switch (pick(rng)) {
    case 0:
    case 1:
      return pt("a");
    case 2:
      return Term::app(Symbol{"f", 1}, {random_term(rng, max_nodes - 1)});
    case 3:
      return Term::app(Symbol{"g", 1}, {random_term(rng, max_nodes - 1)});
    case 4:
      return Term::app(Symbol{"h", 2}, {random_term(rng, max_nodes / 2),
                                        random_term(rng, max_nodes / 2)});
    case 5:
      return Term::app(Symbol{"plus", 2}, {random_term(rng, max_nodes / 2),
                                           random_term(rng, max_nodes / 2)});
    default:
      return pt("b");
  }
}

/// Random pattern: like random_term but may place rewrite variables.
inline TermPtr random_pattern(std::mt19937& rng, int max_nodes) {
  std::uniform_int_distribution<int> pick(0, 7);
  int roll = pick(rng);
  if (max_nodes <= 1 || roll <= 1) {
    const char* leaves[] = {"a", "b", "c"};
    if (roll == 0) {
      std::uniform_int_distribution<int> v(0, 2);
      const char* vars[] = {"x", "y", "z"};
      return Term::var(vars[v(rng)]);
    }
    return pt(leaves[pick(rng) % 3]);
  }
  switch (roll) {
    case 2:
      return Term::app(Symbol{"f", 1}, {random_pattern(rng, max_nodes - 1)});
    case 3:
      return Term::app(Symbol{"g", 1}, {random_pattern(rng, max_nodes - 1)});
    case 4:
    case 5:
      return Term::app(Symbol{"h", 2},
                       {random_pattern(rng, max_nodes / 2),
                        random_pattern(rng, max_nodes / 2)});
    default:
      return Term::var("x");
  }
}

/// Random closed strategy of bounded depth over the playground
/// signature; mu_depth limits nested fixed points.
inline StrategyPtr random_strategy(std::mt19937& rng, int depth, int mu_depth,
                                   std::vector<std::string>& bound) {
  std::uniform_int_distribution<int> pick(0, 9);
  int roll = pick(rng);
  if (depth <= 1 || roll <= 2) {
    if (!bound.empty() && roll == 0) {
      std::uniform_int_distribution<size_t> b(0, bound.size() - 1);
      return Strategy::fixvar(bound[b(rng)]);
    }
    TermPtr l = random_pattern(rng, 3);
    // keep rule well-formed: rhs vars inside lhs vars
    auto lv = vars_of(l);
    TermPtr r;
    if (lv.empty()) {
      r = random_term(rng, 3);
    } else {
      r = Term::app(Symbol{"f", 1}, {Term::var(*lv.begin())});
    }
    return Strategy::rule(l, r);
  }
  switch (roll) {
    case 3:
      return Strategy::seq(random_strategy(rng, depth - 1, mu_depth, bound),
                           random_strategy(rng, depth - 1, mu_depth, bound));
    case 4:
    case 5:
      return Strategy::choice(
          random_strategy(rng, depth - 1, mu_depth, bound),
          random_strategy(rng, depth - 1, mu_depth, bound));
    case 6:
      return Strategy::eta(random_strategy(rng, depth - 1, mu_depth, bound));
    case 7:
      return Strategy::some(random_strategy(rng, depth - 1, mu_depth, bound));
    case 8: {
      std::uniform_int_distribution<int> j(1, 2);
      return Strategy::child(
          j(rng), random_strategy(rng, depth - 1, mu_depth, bound));
    }
    default: {
      if (mu_depth <= 0) {
        return Strategy::eta(
            random_strategy(rng, depth - 1, mu_depth, bound));
      }
      std::string x = "X" + std::to_string(bound.size());
      bound.push_back(x);
      StrategyPtr body =
          random_strategy(rng, depth - 1, mu_depth - 1, bound);
      bound.pop_back();
      return Strategy::mu(x, body);
    }
  }
}

inline StrategyPtr random_closed_strategy(std::mt19937& rng, int depth,
                                          int mu_depth) {
  std::vector<std::string> bound;
  return random_strategy(rng, depth, mu_depth, bound);
}

}  // namespace rwtest
