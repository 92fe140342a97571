#include <doctest.h>

#include "jstit/harness.hpp"
#include "jstit/model.hpp"
#include "jstit/proofkit.hpp"

using namespace jstit;

namespace {

const AgentSet kAgents({"i", "j"});

Formula fml(const std::string& s) { return parse_formula(s, kAgents); }

Verdict check(const Proof& p, ProofMode mode = ProofMode::Pi) {
  return check_proof(p, ConstantSpecification{}, mode);
}

bool s4_free(const Proof& p) {
  for (const auto& line : p.lines)
    if (line.just.kind == Justification::Kind::S4) return false;
  return true;
}

}  // namespace

TEST_CASE("match_axiom on the frozen examples") {
  CHECK(match_axiom(fml("s:(p->q) -> (t:p -> (s*t):q)"), kAgents) == Scheme::A4);
  CHECK(match_axiom(fml("Prove(j,t,p) -> (~Proven(t,p) & [j]Prove(j,t,p) & "
                        "~[]Prove(j,t,p) & t:p)"),
                    kAgents) == Scheme::B9);
  CHECK_FALSE(match_axiom(fml("p -> p"), kAgents).has_value());
  CHECK(match_axiom(fml("Kp -> p"), kAgents) == Scheme::A7T);
  CHECK(match_axiom(fml("[]p -> [j]p"), kAgents) == Scheme::A2);
  CHECK(match_axiom(fml("Kp -> []K[]p"), kAgents) == Scheme::A8);
  CHECK(match_axiom(fml("(s:p | t:p) -> (s+t):p"), kAgents) == Scheme::A6);
  CHECK(match_axiom(fml("t:p -> (!t:t:p & Kp)"), kAgents) == Scheme::A5);
  CHECK(match_axiom(fml("<>[i]p & <>[j]q -> <>([i]p & [j]q)"), kAgents) == Scheme::A3);
  // pairwise-distinct agents required
  CHECK_FALSE(match_axiom(fml("<>[j]p & <>[j]q -> <>([j]p & [j]q)"), kAgents).has_value());
  // the dual form normalizes before matching
  CHECK(match_axiom(fml("~[j]~p -> [j]~[j]~p"), kAgents) == Scheme::A1Ag5);
  CHECK(match_axiom(fml("<j>p -> [j]<j>p"), kAgents) == Scheme::A1Ag5);
  // B13 needs the canonical agent order i, j
  CHECK(match_axiom(fml("~Prove(j,t,p) -> <j>(~Prove(i,t,p) & ~Prove(j,t,p))"), kAgents) ==
        Scheme::B13);
  CHECK_FALSE(
      match_axiom(fml("~Prove(j,t,p) -> <j>(~Prove(j,t,p) & ~Prove(i,t,p))"), kAgents)
          .has_value());
  // AS4 only in the axiomatic variant
  Formula as4 = schemes::as4({{Term::var("t"), Formula::atom("p")}}, kAgents);
  CHECK_FALSE(match_axiom(as4, kAgents).has_value());
  CHECK(match_axiom(as4, kAgents, true) == Scheme::AS4);
}

TEST_CASE("first-match order resolves overlapping schemes") {
  // A degenerate B10 instance is also an A0-3 instance; the documented
  // order puts the propositional basis first.
  Formula deg = schemes::b10("j", Term::var("t"), Formula::atom("p"), Formula::atom("p"));
  CHECK(matches_scheme(deg, Scheme::B10, kAgents));
  CHECK(matches_scheme(deg, Scheme::A0_3, kAgents));
  CHECK(match_axiom(deg, kAgents) == Scheme::A0_3);
}

TEST_CASE("match_axiom is stable under print/reparse") {
  Rng rng(99);
  FormulaPools pools;
  for (Scheme s : all_schemes()) {
    for (int k = 0; k < 20; ++k) {
      Formula inst = random_scheme_instance(rng, s, pools, kAgents);
      CHECK(matches_scheme(inst, s, kAgents));
      Formula back = parse_formula(print_formula(inst), kAgents);
      CHECK(matches_scheme(back, s, kAgents));
      auto first = match_axiom(inst, kAgents, true);
      auto second = match_axiom(back, kAgents, true);
      REQUIRE(first.has_value());
      CHECK(*first == *second);
    }
  }
}

TEST_CASE("single axiom line is a proof") {
  Proof p(kAgents);
  p.lines.push_back({fml("Kp -> p"), Justification::axiom(Scheme::A7T)});
  Verdict v = check(p);
  CHECK(v.accepted);
}

TEST_CASE("corpus proofs all check out") {
  for (const auto& entry : corpus()) {
    CAPTURE(entry.name);
    Verdict v = check(entry.proof);
    CHECK(v.accepted);
    if (!v.accepted) MESSAGE(entry.name, " line ", v.line, ": ", v.reason);
    CHECK(entry.proof.conclusion() == entry.conclusion);
  }
  REQUIRE(corpus_find("T0"));
  CHECK(corpus_find("T0")->conclusion == normalize(fml("Kp -> []p")));
  REQUIRE(corpus_find("T1"));
  CHECK(corpus_find("T1")->conclusion == normalize(fml("t:p -> Kt:p")));
  REQUIRE(corpus_find("T2"));
  CHECK(corpus_find("T2")->conclusion == normalize(fml("t:p -> []t:p")));
  REQUIRE(corpus_find("T3"));
  CHECK(corpus_find("T3")->conclusion == normalize(fml("Kp -> []Kp")));
  REQUIRE(corpus_find("T4"));
  CHECK(corpus_find("T4")->conclusion == normalize(fml("Proven(t,p) -> []Proven(t,p)")));
  REQUIRE(corpus_find("T5-n1"));
  CHECK(corpus_find("T5-n1")->conclusion == normalize(fml("~[](Prove(i,t,p))")));
  REQUIRE(corpus_find("T5-n2"));
  CHECK(corpus_find("T5-n2")->conclusion ==
        normalize(fml("~[](Prove(i,t,p) | Prove(j,t,p))")));
}

TEST_CASE("checker rejections carry line numbers") {
  Proof p(kAgents);
  p.lines.push_back({fml("Kp -> p"), Justification::axiom(Scheme::A7T)});
  p.lines.push_back({fml("q"), Justification::mp(0, 0)});
  Verdict v = check(p);
  CHECK_FALSE(v.accepted);
  CHECK(v.line == 2);

  Proof fwd(kAgents);
  fwd.lines.push_back({fml("q"), Justification::mp(0, 1)});
  fwd.lines.push_back({fml("Kp -> p"), Justification::axiom(Scheme::A7T)});
  v = check(fwd);
  CHECK_FALSE(v.accepted);
  CHECK(v.line == 1);

  Proof necp(kAgents);
  necp.lines.push_back({fml("Kp -> p"), Justification::axiom(Scheme::A7T)});
  necp.lines.push_back({fml("K(Kq -> q)"), Justification::nec(0)});
  v = check(necp);
  CHECK_FALSE(v.accepted);
  CHECK(v.line == 2);

  // claiming the wrong scheme fails even though some scheme matches
  Proof wrong(kAgents);
  wrong.lines.push_back({fml("Kp -> p"), Justification::axiom(Scheme::A1BoxT)});
  CHECK_FALSE(check(wrong).accepted);
}

TEST_CASE("S4 rule checking enforces the canonical shapes") {
  Term t = Term::var("t");
  Formula p = Formula::atom("p");
  std::vector<std::pair<Term, Formula>> pairs{{t, p}};
  Formula d = schemes::neg_proven_disj(pairs);

  Proof good(kAgents);
  good.lines.push_back({schemes::a7_t(d), Justification::axiom(Scheme::A7T)});
  good.lines.push_back({Formula::imp(Formula::knows(d),
                                     schemes::agents_neg_prove_conj(kAgents, t, p)),
                        Justification::s4(0, pairs)});
  CHECK(check(good).accepted);
  // ...but not in the axiomatic variant
  CHECK_FALSE(check(good, ProofMode::PiPrime).accepted);

  // agents out of canonical order in the conclusion
  Proof bad(kAgents);
  bad.lines.push_back({schemes::a7_t(d), Justification::axiom(Scheme::A7T)});
  Formula wrong_order = Formula::imp(
      Formula::knows(d), Formula::conj(Formula::neg(Formula::prove("j", t, p)),
                                       Formula::neg(Formula::prove("i", t, p))));
  bad.lines.push_back({wrong_order, Justification::s4(0, pairs)});
  Verdict v = check(bad);
  CHECK_FALSE(v.accepted);
  CHECK(v.line == 2);

  // AS4 as an axiom is rejected in the base calculus and accepted in PiPrime
  Proof ax(kAgents);
  ax.lines.push_back({schemes::as4(pairs, kAgents), Justification::axiom(Scheme::AS4)});
  CHECK_FALSE(check(ax).accepted);
  CHECK(check(ax, ProofMode::PiPrime).accepted);
}

TEST_CASE("constant specifications") {
  Formula base = fml("c:(p -> q -> p)");
  auto cs = ConstantSpecification::from_formulas({base}, kAgents);
  CHECK(cs.contains(base));
  CHECK_FALSE(cs.empty());

  // downward closure is enforced
  Formula iterated = fml("d:c:(p -> q -> p)");
  CHECK_THROWS_AS(ConstantSpecification::from_formulas({iterated}, kAgents), ProofError);
  auto closed = ConstantSpecification::from_formulas({iterated, base}, kAgents);
  CHECK(closed.contains(iterated));

  // the innermost formula must be an axiom instance
  CHECK_THROWS_AS(ConstantSpecification::from_formulas({fml("c:(p -> p)")}, kAgents),
                  ProofError);
  // at least one constant layer
  CHECK_THROWS_AS(ConstantSpecification::from_formulas({fml("p -> q -> p")}, kAgents),
                  ProofError);
  // variables are not constants
  CHECK_THROWS_AS(ConstantSpecification::from_formulas({fml("x:(p -> q -> p)")}, kAgents),
                  ProofError);

  // proof lines justified by the specification
  Proof p(kAgents);
  p.lines.push_back({base, Justification::cs()});
  CHECK(check_proof(p, closed, ProofMode::Pi).accepted);
  CHECK_FALSE(check_proof(p, ConstantSpecification{}, ProofMode::Pi).accepted);

  // parsing
  auto parsed = ConstantSpecification::parse("# comment\nc:(p -> q -> p)\n", kAgents);
  CHECK(parsed.contains(base));
}

TEST_CASE("cs-normal models") {
  auto everything = FiniteJstitModel::parse(R"(
agents: i j
moments: m0
evidence: * * = ALL
)");
  auto empty_ev = FiniteJstitModel::parse(R"(
agents: i j
moments: m0
)");
  ConstantSpecification empty_cs;
  auto cs = ConstantSpecification::from_formulas({fml("c:(p -> q -> p)")}, kAgents);
  CHECK(is_cs_normal(everything, empty_cs));
  CHECK(is_cs_normal(empty_ev, empty_cs));
  CHECK(is_cs_normal(everything, cs));
  CHECK_FALSE(is_cs_normal(empty_ev, cs));
}

TEST_CASE("eliminate_s4 expands every S4 step") {
  ConstantSpecification empty_cs;
  for (const char* name : {"AS4-n1", "AS4-n2", "AS4-double"}) {
    CAPTURE(name);
    const CorpusEntry* e = corpus_find(name);
    REQUIRE(e);
    CHECK_FALSE(s4_free(e->proof));
    Proof out = eliminate_s4(e->proof, empty_cs);
    CHECK(s4_free(out));
    CHECK(out.conclusion() == normalize(e->conclusion));
    Verdict v = check_proof(out, empty_cs, ProofMode::PiPrime);
    CHECK(v.accepted);
    if (!v.accepted) MESSAGE("line ", v.line, ": ", v.reason);
    // bounded growth: a constant number of lines per S4 step
    std::size_t s4_steps = 0;
    for (const auto& line : e->proof.lines)
      if (line.just.kind == Justification::Kind::S4) ++s4_steps;
    CHECK(out.lines.size() <= e->proof.lines.size() + 16 * s4_steps);
  }

  // S4-free proofs come back unchanged
  const CorpusEntry* t0 = corpus_find("T0");
  REQUIRE(t0);
  Proof same = eliminate_s4(t0->proof, empty_cs);
  CHECK(same.lines.size() == t0->proof.lines.size());
  CHECK(check_proof(same, empty_cs, ProofMode::PiPrime).accepted);

  // rejected inputs are refused
  Proof broken(kAgents);
  broken.lines.push_back({fml("p -> p"), Justification::axiom(Scheme::A0_1)});
  CHECK_THROWS_AS(eliminate_s4(broken, empty_cs), ProofError);
}

TEST_CASE("proof files round-trip") {
  ConstantSpecification empty_cs;
  for (const auto& entry : corpus()) {
    CAPTURE(entry.name);
    std::string text = print_proof(entry.proof);
    Proof back = parse_proof(text);
    CHECK(check_proof(back, empty_cs, ProofMode::Pi).accepted);
    CHECK(normalize(back.conclusion()) == normalize(entry.conclusion));
  }
}

TEST_CASE("proof file parse errors") {
  CHECK_THROWS_AS(parse_proof("1. Kp -> p ; ax:NOPE\n"), ProofError);
  CHECK_THROWS_AS(parse_proof("2. Kp -> p ; ax:A7-T\n"), ProofError);  // bad numbering
  CHECK_THROWS_AS(parse_proof("1. Kp -> p\n"), ProofError);            // missing rule
  CHECK_THROWS_AS(parse_proof("1. q ; s4:1[]\n"), ProofError);         // empty pairs
}

TEST_CASE("checking is monotone under inserting a justified line") {
  ConstantSpecification empty_cs;
  const CorpusEntry* t5 = corpus_find("T5-n2");
  REQUIRE(t5);
  const Proof& base = t5->proof;
  std::size_t at = base.lines.size() / 2;

  Proof widened(base.agents);
  for (std::size_t i = 0; i < at; ++i) widened.lines.push_back(base.lines[i]);
  widened.lines.push_back({fml("Kq -> q"), Justification::axiom(Scheme::A7T)});
  auto remap = [&](std::size_t idx) { return idx >= at ? idx + 1 : idx; };
  for (std::size_t i = at; i < base.lines.size(); ++i) {
    ProofLine line = base.lines[i];
    switch (line.just.kind) {
      case Justification::Kind::Mp:
        line.just.from = remap(line.just.from);
        line.just.imp = remap(line.just.imp);
        break;
      case Justification::Kind::Nec:
      case Justification::Kind::S4:
        line.just.from = remap(line.just.from);
        break;
      default:
        break;
    }
    widened.lines.push_back(std::move(line));
  }
  Verdict v = check_proof(widened, empty_cs, ProofMode::Pi);
  CHECK(v.accepted);
  CHECK(widened.conclusion() == base.conclusion());
}
