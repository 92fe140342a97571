#include <doctest.h>

#include <random>
#include <set>

#include "jstit/syntax.hpp"

using namespace jstit;

namespace {

const AgentSet kAgents({"i", "j"});

Formula parse(const std::string& s) { return parse_formula(s, kAgents); }

// Independent random AST generator for round-trip properties. Kept separate
// from the harness generator on purpose: this one exercises the printer and
// parser only.
struct AstGen {
  std::mt19937_64 rng;
  explicit AstGen(std::uint64_t seed) : rng(seed) {}

  int below(int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); }

  Term term(int depth) {
    if (depth <= 0) {
      switch (below(4)) {
        case 0: return Term::var("x");
        case 1: return Term::var("y1");
        case 2: return Term::constant("c");
        default: return Term::constant("d2");
      }
    }
    switch (below(5)) {
      case 0: return Term::sum(term(depth - 1), term(depth - 1));
      case 1: return Term::app(term(depth - 1), term(depth - 1));
      case 2: return Term::check(term(depth - 1));
      default: return term(0);
    }
  }

  Formula formula(int depth, bool allow_et) {
    if (depth <= 0) {
      switch (below(3)) {
        case 0: return Formula::atom("p");
        case 1: return Formula::atom("q");
        default: return Formula::falsum();
      }
    }
    switch (below(14)) {
      case 0: return Formula::neg(formula(depth - 1, allow_et));
      case 1: return Formula::conj(formula(depth - 1, allow_et), formula(depth - 1, allow_et));
      case 2: return Formula::disj(formula(depth - 1, allow_et), formula(depth - 1, allow_et));
      case 3: return Formula::imp(formula(depth - 1, allow_et), formula(depth - 1, allow_et));
      case 4: return Formula::box(formula(depth - 1, allow_et));
      case 5: return Formula::diamond(formula(depth - 1, allow_et));
      case 6: return Formula::cstit(below(2) ? "i" : "j", formula(depth - 1, allow_et));
      case 7: return Formula::cstit_dual(below(2) ? "i" : "j", formula(depth - 1, allow_et));
      case 8: return Formula::knows(formula(depth - 1, allow_et));
      case 9: return Formula::just(term(2), formula(depth - 1, allow_et));
      case 10: return Formula::prove(below(2) ? "i" : "j", term(2), formula(depth - 1, allow_et));
      case 11: return Formula::proven(term(2), formula(depth - 1, allow_et));
      case 12:
        if (allow_et) return Formula::et(term(2));
        return formula(0, allow_et);
      default: return formula(0, allow_et);
    }
  }
};

// Fully parenthesized rendering, used for the precedence-soundness property.
std::string print_full_term(const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Var:
    case Term::Kind::Const: return t.name();
    case Term::Kind::Check: return "(!" + print_full_term(t.inner()) + ")";
    case Term::Kind::Sum: return "(" + print_full_term(t.left()) + " + " + print_full_term(t.right()) + ")";
    case Term::Kind::App: return "(" + print_full_term(t.left()) + "*" + print_full_term(t.right()) + ")";
  }
  return "";
}

std::string print_full(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Atom: return f.name();
    case Formula::Kind::Falsum: return "false";
    case Formula::Kind::Neg: return "(~" + print_full(f.child()) + ")";
    case Formula::Kind::And: return "(" + print_full(f.left()) + " & " + print_full(f.right()) + ")";
    case Formula::Kind::Or: return "(" + print_full(f.left()) + " | " + print_full(f.right()) + ")";
    case Formula::Kind::Imp: return "(" + print_full(f.left()) + " -> " + print_full(f.right()) + ")";
    case Formula::Kind::Box: return "([]" + print_full(f.child()) + ")";
    case Formula::Kind::Diamond: return "(<>" + print_full(f.child()) + ")";
    case Formula::Kind::Cstit: return "([" + f.agent() + "]" + print_full(f.child()) + ")";
    case Formula::Kind::CstitDual: return "(<" + f.agent() + ">" + print_full(f.child()) + ")";
    case Formula::Kind::Knows: return "(K" + print_full(f.child()) + ")";
    case Formula::Kind::Just: return "(" + print_full_term(f.term()) + ":" + print_full(f.child()) + ")";
    case Formula::Kind::Prove:
      return "Prove(" + f.agent() + "," + print_full_term(f.term()) + "," + print_full(f.child()) + ")";
    case Formula::Kind::Proven:
      return "Proven(" + print_full_term(f.term()) + "," + print_full(f.child()) + ")";
    case Formula::Kind::Et: return "(E(" + print_full_term(f.term()) + "))";
  }
  return "";
}

}  // namespace

TEST_CASE("term parsing follows the stated precedence") {
  CHECK(parse_term("x") == Term::var("x"));
  CHECK(parse_term("!x + y*z") ==
        Term::sum(Term::check(Term::var("x")), Term::app(Term::var("y"), Term::var("z"))));
  CHECK(parse_term("x*(y+z)") ==
        Term::app(Term::var("x"), Term::sum(Term::var("y"), Term::var("z"))));
  // left associativity
  CHECK(parse_term("x+y+z") ==
        Term::sum(Term::sum(Term::var("x"), Term::var("y")), Term::var("z")));
  CHECK(parse_term("x*y*z") ==
        Term::app(Term::app(Term::var("x"), Term::var("y")), Term::var("z")));
  CHECK(parse_term("!!c") == Term::check(Term::check(Term::constant("c"))));
}

TEST_CASE("term parse errors carry positions") {
  CHECK_THROWS_AS(parse_term("x +"), SyntaxError);
  CHECK_THROWS_AS(parse_term("p"), SyntaxError);  // atom ident, not a term
  CHECK_THROWS_AS(parse_term("x ? y"), SyntaxError);
  try {
    parse_term("x + \n @");
    FAIL("expected error");
  } catch (const SyntaxError& e) {
    CHECK(e.line == 2);
    CHECK(e.column == 2);
  }
}

TEST_CASE("formula parsing examples") {
  Formula p = Formula::atom("p");
  CHECK(parse("K(<>p & <>~p)") ==
        Formula::knows(Formula::conj(Formula::diamond(p), Formula::diamond(Formula::neg(p)))));
  CHECK(parse("Prove(j, x*y, p -> q)") ==
        Formula::prove("j", Term::app(Term::var("x"), Term::var("y")),
                       Formula::imp(p, Formula::atom("q"))));
  CHECK(parse("[]p -> [j]p") == Formula::imp(Formula::box(p), Formula::cstit("j", p)));
  CHECK(parse("x:p") == Formula::just(Term::var("x"), p));
  CHECK(parse("(x+y):p") == Formula::just(Term::sum(Term::var("x"), Term::var("y")), p));
  CHECK(parse("Kp") == Formula::knows(p));
  CHECK(parse("~false") == Formula::neg(Formula::falsum()));
  CHECK(parse("<j>p") == Formula::cstit_dual("j", p));
  // -> is loosest and right-associative; & binds tighter than |
  CHECK(parse("p -> q -> p") ==
        Formula::imp(p, Formula::imp(Formula::atom("q"), p)));
  CHECK(parse("p & q | p") ==
        Formula::disj(Formula::conj(p, Formula::atom("q")), p));
}

TEST_CASE("formula parse errors") {
  CHECK_THROWS_AS(parse("[k]p"), SyntaxError);       // unknown agent
  CHECK_THROWS_AS(parse("Prove(x, x, p)"), SyntaxError);
  CHECK_THROWS_AS(parse("p &"), SyntaxError);
  CHECK_THROWS_AS(parse("Ex"), SyntaxError);         // extension disabled
  CHECK_THROWS_AS(parse("Q"), SyntaxError);          // unknown lexeme
  CHECK(parse_formula("Ex", kAgents, ParseOptions{true}) == Formula::et(Term::var("x")));
}

TEST_CASE("printing matches the frozen examples") {
  Formula p = Formula::atom("p");
  CHECK(print_formula(Formula::knows(Formula::conj(
            Formula::diamond(p), Formula::diamond(Formula::neg(p))))) == "K(<>p & <>~p)");
  CHECK(print_formula(p) == "p");
  CHECK(print_term(Term::sum(Term::check(Term::var("x")),
                             Term::app(Term::var("y"), Term::var("z")))) == "!x + y*z");
  CHECK(print_formula(parse("Kp -> []p")) == "Kp -> []p");
}

TEST_CASE("normalization is idempotent and removes duals") {
  Formula f = parse("<>p & <j>q");
  Formula n = normalize(f);
  CHECK(n == parse("~[]~p & ~[j]~q"));
  CHECK(normalize(n) == n);
}

TEST_CASE("subformulas: children before parents, terms not included") {
  Formula p = Formula::atom("p");
  auto subs = subformulas(p);
  REQUIRE(subs.size() == 1);
  CHECK(subs[0] == p);

  Formula imp = parse("p -> q");
  subs = subformulas(imp);
  REQUIRE(subs.size() == 3);
  CHECK(subs[0] == p);
  CHECK(subs[1] == Formula::atom("q"));
  CHECK(subs[2] == imp);

  Formula pr = Formula::proven(Term::var("t"), p);
  subs = subformulas(pr);
  REQUIRE(subs.size() == 2);
  CHECK(subs[0] == p);
  CHECK(subs[1] == pr);
}

TEST_CASE("round-trip property over random formulas and terms") {
  AstGen gen(20240517);
  for (int k = 0; k < 500; ++k) {
    Term t = gen.term(4);
    CHECK(parse_term(print_term(t)) == t);
    Formula f = gen.formula(4, true);
    ParseOptions opts{true};
    Formula back = parse_formula(print_formula(f), kAgents, opts);
    CHECK(back == f);
    // precedence soundness: fully parenthesized text parses to the same tree
    CHECK(parse_formula(print_full(f), kAgents, opts) == f);
  }
}

TEST_CASE("subformula closure property") {
  AstGen gen(7);
  for (int k = 0; k < 200; ++k) {
    Formula f = gen.formula(4, false);
    auto subs = subformulas(f);
    CHECK(subs.size() <= node_count(f));
    std::set<Formula> all(subs.begin(), subs.end());
    CHECK(all.count(f) == 1);
    for (const auto& g : subs)
      for (const auto& h : subformulas(g)) CHECK(all.count(h) == 1);
  }
}

TEST_CASE("agent and atom collectors") {
  Formula f = parse("Prove(j,x,p) & [i]q");
  CHECK(formula_agents(f) == std::vector<std::string>{"j", "i"});
  CHECK(formula_atoms(f) == std::vector<std::string>{"p", "q"});
}

TEST_CASE("agent set validation") {
  CHECK_THROWS_AS(AgentSet({}), std::invalid_argument);
  CHECK_THROWS_AS(AgentSet({"i", "i"}), std::invalid_argument);
  CHECK_THROWS_AS(AgentSet({"x1"}), std::invalid_argument);  // term-variable class
  CHECK(AgentSet({"i", "j"}).contains("j"));
}
