#include "jstit/proofkit.hpp"

// The bundled corpus of derived theorems, constructed with ProofBuilder so
// that every entry is a genuine line-by-line derivation.

namespace jstit {

namespace {

using schemes::a0_10;
using schemes::a0_3;
using schemes::a0_4;
using schemes::a0_9;
using schemes::a1_box_t;
using schemes::a2;
using schemes::a5;
using schemes::a7_4;
using schemes::a7_t;
using schemes::b11;
using schemes::b13;
using schemes::b9;

const AgentSet& corpus_agents() {
  static const AgentSet agents({"i", "j"});
  return agents;
}

CorpusEntry entry(std::string name, ProofBuilder&& pb, std::size_t concl) {
  Proof p = pb.take();
  if (concl + 1 != p.lines.size())
    throw ProofError("corpus: conclusion is not the last line of " + name);
  Formula c = p.conclusion();
  return CorpusEntry{std::move(name), std::move(p), std::move(c)};
}

// T0: Kp -> []p.
CorpusEntry make_t0() {
  ProofBuilder pb(corpus_agents());
  std::size_t last = pb.t0(Formula::atom("p"));
  return entry("T0", std::move(pb), last);
}

// T1: t:p -> Kt:p, via the proof checker axiom applied twice.
std::size_t build_t1(ProofBuilder& pb, const Term& t, const Formula& a) {
  std::size_t a5a = pb.axiom(Scheme::A5, a5(t, a));
  std::size_t c1 = pb.conj_left(a5a);  // t:a -> !t:(t:a)
  std::size_t a5b = pb.axiom(Scheme::A5, a5(Term::check(t), Formula::just(t, a)));
  std::size_t c2 = pb.conj_right(a5b);  // !t:(t:a) -> K(t:a)
  return pb.syll(c1, c2);
}

CorpusEntry make_t1() {
  ProofBuilder pb(corpus_agents());
  std::size_t last = build_t1(pb, Term::var("t"), Formula::atom("p"));
  return entry("T1", std::move(pb), last);
}

// T2: t:p -> []t:p.
CorpusEntry make_t2() {
  ProofBuilder pb(corpus_agents());
  Term t = Term::var("t");
  Formula p = Formula::atom("p");
  std::size_t t1 = build_t1(pb, t, p);
  std::size_t t0 = pb.t0(Formula::just(t, p));
  std::size_t last = pb.syll(t1, t0);
  return entry("T2", std::move(pb), last);
}

// T3: Kp -> []Kp.
CorpusEntry make_t3() {
  ProofBuilder pb(corpus_agents());
  Formula p = Formula::atom("p");
  std::size_t four = pb.axiom(Scheme::A74, a7_4(p));
  std::size_t t0 = pb.t0(Formula::knows(p));
  std::size_t last = pb.syll(four, t0);
  return entry("T3", std::move(pb), last);
}

// T4: Proven(t,p) -> []Proven(t,p).
CorpusEntry make_t4() {
  ProofBuilder pb(corpus_agents());
  Term t = Term::var("t");
  Formula p = Formula::atom("p");
  std::size_t b = pb.axiom(Scheme::B11, b11(t, p));
  std::size_t c = pb.conj_left(b);  // Proven -> KProven
  std::size_t t0 = pb.t0(Formula::proven(t, p));
  std::size_t last = pb.syll(c, t0);
  return entry("T4", std::move(pb), last);
}

// T5 base case for a single agent: ~[]Prove(j0,t,p).
std::size_t build_t5_single(ProofBuilder& pb, const std::string& j0, const Term& t,
                            const Formula& a) {
  Formula pr = Formula::prove(j0, t, a);
  std::size_t ti = pb.axiom(Scheme::A1BoxT, a1_box_t(pr));
  std::size_t c1 = pb.contrapose(ti);  // ~Prove -> ~[]Prove
  std::size_t b = pb.axiom(Scheme::B9, b9(j0, t, a));
  std::size_t e1 = pb.conj_right(b);   // Prove -> ([j]Prove & (~[]Prove & t:a))
  std::size_t e2 = pb.conj_right(e1);  // Prove -> (~[]Prove & t:a)
  std::size_t e3 = pb.conj_left(e2);   // Prove -> ~[]Prove
  std::size_t cases = pb.case_split(e3, c1);
  std::size_t em = pb.excluded_middle(pr);
  return pb.mp(em, cases);
}

CorpusEntry make_t5_n1() {
  ProofBuilder pb(corpus_agents());
  std::size_t last = build_t5_single(pb, "i", Term::var("t"), Formula::atom("p"));
  return entry("T5-n1", std::move(pb), last);
}

// T5 for the full two-agent community: ~[](Prove(i,t,p) | Prove(j,t,p)).
CorpusEntry make_t5_n2() {
  const AgentSet& ag = corpus_agents();
  ProofBuilder pb(ag);
  Term t = Term::var("t");
  Formula p = Formula::atom("p");
  Formula p1 = Formula::prove("i", t, p);
  Formula p2 = Formula::prove("j", t, p);
  Formula disj = Formula::disj(p1, p2);
  Formula x = Formula::conj(Formula::neg(p1), Formula::neg(p2));  // the B13 conjunction

  std::size_t z6 = pb.axiom(Scheme::B13, b13("i", t, p, ag));  // ~P1 -> ~[i]~X

  // (P1 | P2) -> ~X, by a case split over two hypothetical derivations.
  auto lemma = [&](const Formula& picked, Scheme proj, const Formula& proj_inst) {
    ProofBuilder::Hypothetical h = pb.assume(picked);
    std::size_t hh = h.hypothesis();
    std::size_t k1 = h.axiom(Scheme::A0_1, schemes::a0_1(picked, x));
    std::size_t xp = h.mp(hh, k1);          // X -> picked
    std::size_t pr = h.axiom(proj, proj_inst);  // X -> ~picked
    std::size_t e = h.axiom(Scheme::A0_9, a0_9(x, picked));
    std::size_t m1 = h.mp(xp, e);
    std::size_t m2 = h.mp(pr, m1);          // ~X
    return h.discharge(m2);
  };
  std::size_t left = lemma(p1, Scheme::A0_3, a0_3(Formula::neg(p1), Formula::neg(p2)));
  std::size_t right = lemma(p2, Scheme::A0_4, a0_4(Formula::neg(p1), Formula::neg(p2)));
  std::size_t disj_negconj = pb.case_split(left, right);  // (P1|P2) -> ~X

  std::size_t l2 = pb.cstit_mono(disj_negconj, "i");  // [i](P1|P2) -> [i]~X
  std::size_t pre = pb.double_neg_intro(Formula::cstit("i", Formula::neg(x)));
  std::size_t mid = pb.syll(pre, pb.contrapose(z6));  // [i]~X -> ~~P1
  std::size_t post = pb.axiom(Scheme::A0_10, a0_10(p1));
  std::size_t l3 = pb.syll(mid, post);  // [i]~X -> P1
  std::size_t z9 = pb.syll(l2, l3);     // [i](P1|P2) -> P1

  std::size_t z10 = pb.syll(pb.axiom(Scheme::A2, a2("i", disj)), z9);  // [](P1|P2) -> P1
  std::size_t b4 = pb.box_4(disj);
  std::size_t z11 = pb.syll(b4, pb.box_mono(z10));  // [](P1|P2) -> []P1

  std::size_t n1 = build_t5_single(pb, "i", t, p);  // ~[]P1
  std::size_t last = pb.mp(n1, pb.contrapose(z11));
  return entry("T5-n2", std::move(pb), last);
}

// AS4 instances obtained by one application of the S4 rule to an A7-T axiom.
CorpusEntry make_as4(std::string name, const std::vector<std::pair<Term, Formula>>& pairs) {
  ProofBuilder pb(corpus_agents());
  Formula b = schemes::neg_proven_disj(pairs);
  std::size_t prem = pb.axiom(Scheme::A7T, a7_t(b));  // KB -> B
  std::size_t last = pb.s4(prem, pairs);              // KB -> C
  return entry(std::move(name), std::move(pb), last);
}

// A proof with two separate S4 steps, concluding with the second.
CorpusEntry make_as4_double() {
  ProofBuilder pb(corpus_agents());
  std::vector<std::pair<Term, Formula>> first = {{Term::var("t"), Formula::atom("p")}};
  std::vector<std::pair<Term, Formula>> second = {{Term::var("x"), Formula::atom("p")},
                                                  {Term::var("y"), Formula::atom("q")}};
  std::size_t p1 = pb.axiom(Scheme::A7T, a7_t(schemes::neg_proven_disj(first)));
  pb.s4(p1, first);
  std::size_t p2 = pb.axiom(Scheme::A7T, a7_t(schemes::neg_proven_disj(second)));
  std::size_t last = pb.s4(p2, second);
  return entry("AS4-double", std::move(pb), last);
}

}  // namespace

const std::vector<CorpusEntry>& corpus() {
  static const std::vector<CorpusEntry> entries = [] {
    std::vector<CorpusEntry> v;
    v.push_back(make_t0());
    v.push_back(make_t1());
    v.push_back(make_t2());
    v.push_back(make_t3());
    v.push_back(make_t4());
    v.push_back(make_t5_n1());
    v.push_back(make_t5_n2());
    v.push_back(make_as4("AS4-n1", {{Term::var("t"), Formula::atom("p")}}));
    v.push_back(make_as4("AS4-n2", {{Term::var("t"), Formula::atom("p")},
                                    {Term::var("x"), Formula::atom("q")}}));
    v.push_back(make_as4_double());
    return v;
  }();
  return entries;
}

const CorpusEntry* corpus_find(std::string_view name) {
  for (const auto& e : corpus())
    if (e.name == name) return &e;
  return nullptr;
}

}  // namespace jstit
