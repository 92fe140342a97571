#include <doctest.h>

#include "jstit/model.hpp"

using namespace jstit;

namespace {

const char* kSingle = R"(
agents: j
moments: m0
val: p @ ALL
)";

const char* kFork = R"(
# two-leaf fork
agents: i j
moments: root l1 l2
order: root<l1 root<l2
act: root/l1 = x
val: p @ root/l1 l1/l1
)";

const char* kChain = R"(
agents: j
moments: m1 m2 m3
order: m1<m2 m2<m3
)";

// Four-moment quotient of the dense-time countermodel: mid stands for the
// whole open interval between 0 and the end of the second history.
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

FiniteJstitModel load(const char* text) { return FiniteJstitModel::parse(text); }

}  // namespace

TEST_CASE("single-moment model: one history, empty report") {
  auto m = load(kSingle);
  CHECK(m.leaves() == std::vector<std::string>{"m0"});
  CHECK(m.histories_through("m0") == std::vector<std::string>{"m0"});
  CHECK(m.history("m0") == std::vector<std::string>{"m0"});
  CHECK(validate(m).ok());
}

TEST_CASE("fork model: two histories") {
  auto m = load(kFork);
  CHECK(m.leaves().size() == 2);
  CHECK(m.histories_through("root").size() == 2);
  CHECK(m.histories_through("l1") == std::vector<std::string>{"l1"});
  CHECK(m.history("l1") == std::vector<std::string>{"root", "l1"});
  CHECK(m.val("p", "root", "l1"));
  CHECK_FALSE(m.val("p", "root", "l2"));
}

TEST_CASE("chain model: one history with the full chain") {
  auto m = load(kChain);
  CHECK(m.leaves() == std::vector<std::string>{"m3"});
  CHECK(m.history("m3") == std::vector<std::string>{"m1", "m2", "m3"});
  CHECK(validate(m).ok());
}

TEST_CASE("later histories pass through all earlier moments") {
  for (const char* text : {kSingle, kFork, kChain, kQuotient}) {
    auto m = load(text);
    for (const auto& a : m.moments())
      for (const auto& b : m.moments()) {
        if (!m.le(a, b)) continue;
        auto hb = m.histories_through(b);
        for (const auto& h : hb) CHECK(m.history_through(a, h));
      }
  }
}

TEST_CASE("act aggregates") {
  auto chain = load(kChain);
  // single history: Act_m equals Act(m, h)
  auto [settled, in_cell] = act_aggregates(chain, "m1", "m3", "j");
  CHECK(settled.empty());
  CHECK(in_cell.empty());

  auto fork = load(kFork);
  auto [fs, fc] = act_aggregates(fork, "root", "l1", "j");
  CHECK(fs.empty());  // x on l1 only, nothing on l2
  CHECK(fc.empty());  // default choice is the whole H_root

  auto q = load(kQuotient);
  auto [qs, qc] = act_aggregates(q, "0", "mid", "j");
  CHECK(qs.empty());
  CHECK(qc == std::set<Term>{Term::var("x")});
  auto [ms, mc] = act_aggregates(q, "mid", "mid", "j");
  CHECK(ms == std::set<Term>{Term::var("x"), Term::var("y")});
  CHECK(mc == ms);
}

TEST_CASE("quotient model: histories and the single violation") {
  auto m = load(kQuotient);
  CHECK(m.history("a") == std::vector<std::string>{"-1", "0", "a"});
  CHECK(m.history("mid") == std::vector<std::string>{"-1", "0", "mid"});
  CHECK_FALSE(m.undivided_at("0", "a", "mid"));
  CHECK(m.undivided_at("-1", "a", "mid"));

  auto report = validate(m);
  REQUIRE(report.violations.size() == 1);
  CHECK(report.violations[0].constraint == Constraint::NoNewProofsGuaranteed);
  CHECK(report.violations[0].where == "mid");
}

TEST_CASE("missing temporal pair in R violates future-always-matters") {
  auto m = load(kChain);
  ModelData d = m.data();
  d.r.erase({"m1", "m3"});
  auto report = validate(FiniteJstitModel(std::move(d)));
  CHECK(report.mentions(Constraint::FutureMatters));
}

TEST_CASE("choice partitions and undividedness classes") {
  auto q = load(kQuotient);
  auto part = q.choice_partition("0", "j");
  REQUIRE(part.size() == 2);
  CHECK(q.choice_cell("0", "j", "mid") == std::vector<std::string>{"mid"});
  // default partition at -1 is one block with both histories
  CHECK(q.choice_partition("-1", "j").size() == 1);
  auto classes = q.undivided_classes("-1");
  REQUIRE(classes.size() == 1);
  CHECK(classes[0].size() == 2);
  CHECK(q.undivided_classes("0").size() == 2);
}

TEST_CASE("load errors") {
  CHECK_THROWS_AS(load("moments: m0\n"), ModelError);  // missing agents
  CHECK_THROWS_AS(load("agents: j\nmoments: m0 m1\norder: m0<m2\n"), ModelError);
  CHECK_THROWS_AS(load("agents: j\nmoments: m0 m1\norder: m0<m1 m1<m0\n"), ModelError);
  // act keyed on a non-leaf
  CHECK_THROWS_AS(load("agents: j\nmoments: m0 m1\norder: m0<m1\nact: m0/m0 = x\n"), ModelError);
  // act leaf not above the moment
  CHECK_THROWS_AS(
      load("agents: j\nmoments: r a b\norder: r<a r<b\nact: a/b = x\n"), ModelError);
  // choice block not a partition
  CHECK_THROWS_AS(
      load("agents: j\nmoments: r a b\norder: r<a r<b\nchoice: r j : {a}\n"), ModelError);
  CHECK_THROWS_AS(
      load("agents: j\nmoments: r a b\norder: r<a r<b\nchoice: r j : {a b} {b}\n"), ModelError);
  // duplicate moment
  CHECK_THROWS_AS(load("agents: j\nmoments: m0 m0\n"), ModelError);
}

TEST_CASE("evidence lookup: precedence and derivation") {
  auto m = load(R"(
agents: j
moments: m0 m1
order: m0<m1
evidence: m1 * = ALL
evidence: m0 x = "p" "p -> q"
)");
  Term x = Term::var("x");
  CHECK(m.evidence_at("m1", x).everything);
  auto ev = m.evidence_at("m0", x);
  CHECK_FALSE(ev.everything);
  CHECK(ev.formulas.size() == 2);

  // closure-derived values for unlisted compound terms
  Formula p = Formula::atom("p");
  Formula q = Formula::atom("q");
  auto applied = m.evidence_at("m0", Term::app(x, x));
  CHECK(applied.formulas == std::set<Formula>{q});
  auto summed = m.evidence_at("m0", Term::sum(x, x));
  CHECK(summed.formulas == std::set<Formula>{p, Formula::imp(p, q)});
  auto checked = m.evidence_at("m0", Term::check(x));
  CHECK(checked.formulas ==
        std::set<Formula>{Formula::just(x, p), Formula::just(x, Formula::imp(p, q))});
  CHECK(m.evidence_at("m1", Term::check(x)).everything);
}

TEST_CASE("evidence monotonicity and closure violations are reported") {
  auto mono = load(R"(
agents: j
moments: m0 m1
order: m0<m1
evidence: m0 x = "p"
evidence: m1 x =
)");
  CHECK(validate(mono).mentions(Constraint::EvidenceMonotonicity));

  auto closure = load(R"(
agents: j
moments: m0
evidence: m0 x = "p"
evidence: m0 !x =
)");
  CHECK(validate(closure).mentions(Constraint::EvidenceClosure));

  // Same data but with the checker slot unlisted: the derived value closes
  // the gap, so the model is fine.
  auto open = load(R"(
agents: j
moments: m0
evidence: m0 x = "p"
)");
  CHECK(validate(open).ok());
}

TEST_CASE("serialization round-trips") {
  for (const char* text : {kSingle, kFork, kChain, kQuotient}) {
    auto m = load(text);
    std::string once = m.to_text();
    auto again = FiniteJstitModel::parse(once);
    CHECK(again.to_text() == once);
    CHECK(validate(again).violations.size() == validate(m).violations.size());
  }
}
