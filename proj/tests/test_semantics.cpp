#include <doctest.h>

#include "jstit/semantics.hpp"
#include "support/naive_eval.hpp"

using namespace jstit;

namespace {

const AgentSet kAgents({"j"});

const char* kQuotient = R"(
agents: j
moments: -1 0 mid a
order: -1<0 0<mid 0<a
choice: 0 j : {a} {mid}
act: 0/mid = x
act: mid/mid = x y
evidence: * * = ALL
val: p @ ALL
val: q @ ALL
)";

const char* kFork = R"(
agents: j
moments: root l1 l2
order: root<l1 root<l2
evidence: * * = ALL
val: p @ root/l1 l1/l1
)";

const char* kSingleAllP = R"(
agents: j
moments: m0
val: p @ ALL
)";

// The formula separating discrete time from dense time.
const std::string kSeparation =
    "K(~Proven(x,p) | Proven(y,q)) -> ~Prove(j,x,p) | (y:q -> Proven(y,q) | Prove(j,y,q))";
const std::string kWitnessConj = "Prove(j,x,p) & y:q & ~Prove(j,y,q) & ~Proven(y,q)";

Formula fml(const std::string& s) { return parse_formula(s, kAgents); }

}  // namespace

TEST_CASE("quotient evaluations match the hand evaluation") {
  auto m = FiniteJstitModel::parse(kQuotient);
  EvalOptions waive{false, true};
  Evaluator ev(m, waive);

  CHECK(ev.eval("0", "mid", fml(kWitnessConj)));
  CHECK(ev.eval("0", "mid", fml("K(~Proven(x,p) | Proven(y,q))")));
  CHECK_FALSE(ev.eval("0", "mid", fml(kSeparation)));

  auto witness = ev.counterexample(fml(kSeparation));
  REQUIRE(witness.has_value());
  CHECK(witness->first == "0");
  CHECK(witness->second == "mid");

  // the quotient needs the waiver: it intentionally fails validation
  CHECK_THROWS_AS(Evaluator(m, EvalOptions{}), EvalError);
}

TEST_CASE("box over a single history") {
  auto m = FiniteJstitModel::parse(kSingleAllP);
  CHECK(eval(m, "m0", "m0", fml("[]p")));
  CHECK(valid_in_model(m, fml("p -> p")));
  CHECK_FALSE(valid_in_model(m, fml("~p")));
}

TEST_CASE("moment determinacy") {
  auto fork = FiniteJstitModel::parse(kFork);
  CHECK(is_moment_determinate(fork, "root", fml("Kp")));
  CHECK(is_moment_determinate(fork, "root", fml("Proven(x,p)")));
  CHECK(is_moment_determinate(fork, "root", fml("[]p")));
  CHECK(is_moment_determinate(fork, "root", fml("x:p")));
  CHECK_FALSE(is_moment_determinate(fork, "root", fml("p")));
  CHECK(is_moment_determinate(fork, "l1", fml("p")));
}

TEST_CASE("duals agree with their primitive forms") {
  auto fork = FiniteJstitModel::parse(kFork);
  Evaluator ev(fork);
  for (const std::string& s : {"<>p", "<j>p", "<>~p", "<j>(p & p)"}) {
    Formula f = fml(s);
    Formula prim = normalize(f);
    for (const auto& m : fork.moments())
      for (const auto& h : fork.histories_through(m)) CHECK(ev.eval(m, h, f) == ev.eval(m, h, prim));
  }
}

TEST_CASE("JA-STIT definability of the proving modalities") {
  auto q = FiniteJstitModel::parse(kQuotient);
  EvalOptions opts{true, true};
  Evaluator ev(q, opts);
  ParseOptions pe{true};
  Formula prove = parse_formula("Prove(j,x,p)", kAgents, pe);
  Formula prove_df = parse_formula("[j]Ex & <>~Ex & x:p", kAgents, pe);
  Formula proven = parse_formula("Proven(x,p)", kAgents, pe);
  Formula proven_df = parse_formula("[]Ex & x:p", kAgents, pe);
  for (const auto& m : q.moments())
    for (const auto& h : q.histories_through(m)) {
      CHECK(ev.eval(m, h, prove) == ev.eval(m, h, prove_df));
      CHECK(ev.eval(m, h, proven) == ev.eval(m, h, proven_df));
    }
}

TEST_CASE("Et is gated") {
  auto q = FiniteJstitModel::parse(kQuotient);
  EvalOptions waive{false, true};
  Evaluator ev(q, waive);
  ParseOptions pe{true};
  Formula et = parse_formula("Ex", kAgents, pe);
  CHECK_THROWS_AS(ev.eval("0", "mid", et), EvalError);
  EvalOptions with_et{true, true};
  Evaluator ev2(q, with_et);
  CHECK(ev2.eval("0", "mid", et));
  CHECK_FALSE(ev2.eval("0", "a", et));
}

TEST_CASE("unirelational models collapse the justification clause") {
  auto m = FiniteJstitModel::parse(R"(
agents: j
moments: m0 m1
order: m0<m1
evidence: m0 x = "p"
evidence: m1 x = "p"
val: p @ ALL
)");
  REQUIRE(m.unirelational());
  REQUIRE(validate(m).ok());
  Evaluator ev(m);
  for (const std::string& atom : {"p", "q"}) {
    Formula body = fml(atom);
    Formula just = Formula::just(Term::var("x"), body);
    for (const auto& mo : m.moments())
      for (const auto& h : m.histories_through(mo)) {
        bool lhs = ev.eval(mo, h, just);
        bool rhs = m.evidence_at(mo, Term::var("x")).contains(body) &&
                   ev.eval(mo, h, Formula::knows(body));
        CHECK(lhs == rhs);
      }
  }
}

TEST_CASE("errors: unknown pair and foreign agents") {
  auto m = FiniteJstitModel::parse(kSingleAllP);
  Evaluator ev(m);
  CHECK_THROWS_AS(ev.eval("nowhere", "m0", fml("p")), ModelError);
  AgentSet two({"i", "j"});
  Formula foreign = parse_formula("[i]p", two);
  CHECK_THROWS_AS(ev.eval("m0", "m0", foreign), EvalError);
}

TEST_CASE("memoized evaluator agrees with the naive oracle on fixed models") {
  for (const char* text : {kQuotient, kFork, kSingleAllP}) {
    auto m = FiniteJstitModel::parse(text);
    EvalOptions waive{false, true};
    Evaluator ev(m, waive);
    std::vector<std::string> texts = {
        "p", "Kp", "[]p", "<>p", "[j]p", "x:p", "Proven(x,p)", "Prove(j,x,p)",
        "K(<>p & <>~p)", "Kp -> []p", "Proven(y,q) | ~x:p", kSeparation, kWitnessConj};
    for (const std::string& s : texts) {
      Formula f = fml(s);
      for (const auto& mo : m.moments())
        for (const auto& h : m.histories_through(mo))
          CHECK(ev.eval(mo, h, f) == testsupport::naive_eval(m, mo, h, f));
    }
  }
}

TEST_CASE("local soundness spot checks") {
  auto q = FiniteJstitModel::parse(kFork);
  Evaluator ev(q);
  for (const std::string& s :
       {"[]p -> p", "Kp -> p", "[j]p -> p", "[](p -> q) -> ([]p -> []q)",
        "~[j]~p -> [j]~[j]~p", "[]p -> [j]p"}) {
    CHECK(ev.valid(fml(s)));
  }
}
