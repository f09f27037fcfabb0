#include <doctest.h>

#include "helpers.hpp"
#include "rwkit/parser.hpp"
#include "rwkit/term.hpp"

using namespace rwkit;
using rwtest::pt;

TEST_CASE("application nodes enforce arity") {
  Symbol f{"f", 1};
  TermPtr a = pt("a");
  TermPtr fa = Term::app(f, {a});
  CHECK(to_text(fa) == "f(a)");
  CHECK(to_text(Term::app(Symbol{"c", 0}, {})) == "c");
  CHECK_THROWS_AS(Term::app(f, {a, a}), ArityMismatch);
}

TEST_CASE("matching at the root") {
  SUBCASE("worked example: f(x) against f(a)") {
    auto sigma = match_at_root(Term::app(Symbol{"f", 1}, {Term::var("x")}),
                               pt("f(a)"));
    REQUIRE(sigma.has_value());
    CHECK(to_text(sigma->lookup("x")) == "a");
  }
  SUBCASE("symbol clash fails") {
    CHECK_FALSE(match_at_root(pt("f(b)"), pt("f(a)")).has_value());
  }
  SUBCASE("variable pattern takes the whole subject") {
    auto sigma = match_at_root(Term::var("x"), pt("f(a)"));
    REQUIRE(sigma.has_value());
    CHECK(to_text(sigma->lookup("x")) == "f(a)");
  }
  SUBCASE("two bindings for one variable fail") {
    TermPtr pat = Term::app(Symbol{"h", 2}, {Term::var("x"), Term::var("x")});
    CHECK_FALSE(match_at_root(pat, pt("h(a,b)")).has_value());
    CHECK(match_at_root(pat, pt("h(a,a)")).has_value());
  }
}

TEST_CASE("substitution application") {
  Substitution sigma;
  sigma.bind("x", pt("a"));
  SUBCASE("maps g(x) to g(a)") {
    CHECK(to_text(sigma.apply(Term::app(Symbol{"g", 1}, {Term::var("x")}))) ==
          "g(a)");
  }
  SUBCASE("empty substitution is the identity") {
    Substitution empty;
    TermPtr t = pt("h(f(a),b)");
    CHECK(term_equal(empty.apply(t), t));
  }
  SUBCASE("simultaneous replacement") {
    TermPtr t = Term::app(Symbol{"h", 2}, {Term::var("x"), Term::var("x")});
    CHECK(to_text(sigma.apply(t)) == "h(a,a)");
  }
  SUBCASE("binding a variable to itself is dropped") {
    Substitution s;
    s.bind("x", Term::var("x"));
    CHECK(s.empty());
  }
}

TEST_CASE("positions") {
  TermPtr t = pt("f(g(a))");
  CHECK(to_text(subterm_at(t, {1, 1})) == "a");
  CHECK(to_text(replace_at(pt("f(a)"), {1}, pt("b"))) == "f(b)");
  CHECK_THROWS_AS(replace_at(pt("c"), {1}, pt("b")), InvalidPosition);
  CHECK_THROWS_AS(subterm_at(t, {2}), InvalidPosition);
}

TEST_CASE("vars_of") {
  CHECK(vars_of(Term::app(Symbol{"f", 1}, {Term::var("x")})) ==
        std::set<std::string>{"x"});
  CHECK(vars_of(pt("f(a)")).empty());
  TermPtr t = Term::app(
      Symbol{"h", 2},
      {Term::var("x"), Term::app(Symbol{"g", 1}, {Term::var("y")})});
  CHECK(vars_of(t) == std::set<std::string>({"x", "y"}));
}

TEST_CASE("parser round trips and rejects junk") {
  Signature sig = rwtest::play_sig();
  TermParser p(sig);
  for (const char* text :
       {"f(g(a))", "h(a,h(b,c))", "plus(a,plus(b,c))", "?x", "f(?y)"}) {
    CHECK(to_text(p.parse(text)) == text);
  }
  CHECK_THROWS_AS(p.parse("f(a"), ParseError);
  CHECK_THROWS_AS(p.parse("unknown(a)"), ParseError);
  CHECK_THROWS_AS(p.parse("f(a,b)"), ParseError);  // arity
  CHECK_THROWS_AS(p.parse("f(a) trailing"), ParseError);
}

TEST_CASE("list sugar round trips through cons chains") {
  Signature sig;
  sig.declare("cons", 2);
  sig.declare("nil", 0);
  sig.declare("a", 0);
  sig.declare("b", 0);
  TermParser p(sig);
  TermPtr l = p.parse("[a,b]");
  CHECK(l->head().name == "cons");
  CHECK(to_text(l) == "[a,b]");
  CHECK(list_items(l).size() == 2);
  CHECK(to_text(p.parse("[]")) == "[]");
}
