#pragma once

// Hilbert proof machinery: axiom-scheme recognition, constant
// specifications, proof checking for the base calculus (with the S4 rule)
// and its axiomatic variant (with the AS4 scheme instead), the rule-to-axiom
// proof transformation, and a builder for constructing checked proofs
// programmatically.
//
// Proof file format, one step per line ('#' starts a comment):
//   agents: i j                      # optional, defaults to "i j"
//   1. FORMULA ; ax:SCHEME-ID
//   2. FORMULA ; cs
//   3. FORMULA ; mp:1,2              # 1 holds A, 2 holds A -> B
//   4. FORMULA ; nec:3
//   5. FORMULA ; s4:4[(t1,B1);(t2,B2)]
// Constant-specification files list one formula per line.

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "jstit/syntax.hpp"

namespace jstit {

struct ProofError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Scheme {
  A0_1, A0_2, A0_3, A0_4, A0_5, A0_6, A0_7, A0_8, A0_9, A0_10, A0_11, A0_12,
  A1BoxK, A1BoxT, A1Box5,
  A1AgK, A1AgT, A1Ag5,
  A2, A3, A4, A5, A6,
  A7K, A7T, A74,
  A8,
  B9, B10, B11, B12, B13,
  AS4,
};

std::string_view scheme_id(Scheme s);
std::optional<Scheme> scheme_from_id(std::string_view id);
// All schemes in the documented matching order (AS4 last).
const std::vector<Scheme>& all_schemes();

// Canonical instance constructors. Variadic conjunctions/disjunctions are
// right-associated; agent conjunctions enumerate the agent set in its
// canonical order; duals are built in primitive ~[]~ / ~[j]~ form.
namespace schemes {

Formula rfold_and(const std::vector<Formula>& parts);
Formula rfold_or(const std::vector<Formula>& parts);
Formula neg_proven_disj(const std::vector<std::pair<Term, Formula>>& pairs);
Formula agents_neg_prove_conj(const AgentSet& agents, const Term& t, const Formula& b);

Formula a0_1(const Formula& a, const Formula& b);
Formula a0_2(const Formula& a, const Formula& b, const Formula& c);
Formula a0_3(const Formula& a, const Formula& b);
Formula a0_4(const Formula& a, const Formula& b);
Formula a0_5(const Formula& a, const Formula& b);
Formula a0_6(const Formula& a, const Formula& b);
Formula a0_7(const Formula& a, const Formula& b);
Formula a0_8(const Formula& a, const Formula& b, const Formula& c);
Formula a0_9(const Formula& a, const Formula& b);
Formula a0_10(const Formula& a);
Formula a0_11(const Formula& a);
Formula a0_12(const Formula& a);
Formula a1_box_k(const Formula& a, const Formula& b);
Formula a1_box_t(const Formula& a);
Formula a1_box_5(const Formula& a);
Formula a1_ag_k(const std::string& j, const Formula& a, const Formula& b);
Formula a1_ag_t(const std::string& j, const Formula& a);
Formula a1_ag_5(const std::string& j, const Formula& a);
Formula a2(const std::string& j, const Formula& a);
Formula a3(const std::vector<std::pair<std::string, Formula>>& items);
Formula a4(const Term& s, const Term& t, const Formula& a, const Formula& b);
Formula a5(const Term& t, const Formula& a);
Formula a6(const Term& s, const Term& t, const Formula& a);
Formula a7_k(const Formula& a, const Formula& b);
Formula a7_t(const Formula& a);
Formula a7_4(const Formula& a);
Formula a8(const Formula& a);
Formula b9(const std::string& j, const Term& t, const Formula& a);
Formula b10(const std::string& j, const Term& t, const Formula& a, const Formula& b);
Formula b11(const Term& t, const Formula& a);
Formula b12(const Term& t, const Formula& a, const Formula& b);
Formula b13(const std::string& j, const Term& t, const Formula& a, const AgentSet& agents);
Formula as4(const std::vector<std::pair<Term, Formula>>& pairs, const AgentSet& agents);

}  // namespace schemes

// True iff f (after normalization) is an instance of the named scheme.
bool matches_scheme(const Formula& f, Scheme s, const AgentSet& agents);
// First matching scheme in the documented order; AS4 participates only when
// include_as4 is set (the axiomatic variant of the calculus).
std::optional<Scheme> match_axiom(const Formula& f, const AgentSet& agents,
                                  bool include_as4 = false);

// -----------------------------------------------------------------------
// Constant specifications

class ConstantSpecification {
 public:
  ConstantSpecification() = default;  // the empty specification

  // Validates shape (iterated constants over an axiom instance) and downward
  // closure; throws ProofError otherwise. Members are stored normalized.
  static ConstantSpecification from_formulas(const std::vector<Formula>& members,
                                             const AgentSet& agents);
  static ConstantSpecification parse(std::string_view text, const AgentSet& agents);

  bool contains(const Formula& f) const;
  const std::vector<Formula>& members() const { return members_; }
  bool empty() const { return members_.empty(); }
  std::string to_text() const;

 private:
  std::vector<Formula> members_;
};

// -----------------------------------------------------------------------
// Proofs

struct Justification {
  enum class Kind { Axiom, Cs, Mp, Nec, S4 };
  Kind kind = Kind::Axiom;
  Scheme scheme = Scheme::A0_1;                  // Axiom
  std::size_t from = 0;                          // Mp (premise A), Nec, S4
  std::size_t imp = 0;                           // Mp (premise A -> B)
  std::vector<std::pair<Term, Formula>> pairs;   // S4 annotation

  static Justification axiom(Scheme s);
  static Justification cs();
  static Justification mp(std::size_t a, std::size_t a_imp_b);
  static Justification nec(std::size_t a);
  static Justification s4(std::size_t premise, std::vector<std::pair<Term, Formula>> pairs);
};

struct ProofLine {
  Formula formula;
  Justification just;
};

struct Proof {
  AgentSet agents;
  std::vector<ProofLine> lines;

  explicit Proof(AgentSet ag) : agents(std::move(ag)) {}
  const Formula& conclusion() const;
};

enum class ProofMode { Pi, PiPrime };

struct Verdict {
  bool accepted = false;
  std::size_t line = 0;  // 1-based line of the first failure; 0 when accepted
  std::string reason;
};

// Line-by-line check. In Pi mode the S4 rule is available and AS4 is not an
// axiom; in PiPrime mode it is the other way around.
Verdict check_proof(const Proof& p, const ConstantSpecification& cs, ProofMode mode);

// Replaces every S4 step by its axiomatic expansion (necessitation,
// K-distribution, the AS4 instance, and syllogism glue). The result proves
// the same conclusion and passes check_proof in PiPrime mode. Throws
// ProofError if the input is rejected in Pi mode. S4-free proofs are
// returned unchanged.
Proof eliminate_s4(const Proof& p, const ConstantSpecification& cs);

Proof parse_proof(std::string_view text,
                  const AgentSet& default_agents = AgentSet({"i", "j"}));
std::string print_proof(const Proof& p);

// -----------------------------------------------------------------------
// Bundled proof corpus

// Machine-built proofs of the standard derived theorems over the two-agent
// community {i, j}: T0 (Ka -> []a), T1..T4 (persistence of t:A, KA and
// Proven), T5 at one and two agents (no box over Prove disjunctions), plus
// AS4 instances derived by a single application of the S4 rule to an A7-T
// axiom. Every entry passes check_proof with the empty specification.
struct CorpusEntry {
  std::string name;
  Proof proof;
  Formula conclusion;
};

const std::vector<CorpusEntry>& corpus();
const CorpusEntry* corpus_find(std::string_view name);

// -----------------------------------------------------------------------
// Proof construction

class ProofBuilder {
 public:
  explicit ProofBuilder(AgentSet agents) : proof_(std::move(agents)) {}

  const Proof& proof() const { return proof_; }
  Proof take() { return std::move(proof_); }
  std::size_t size() const { return proof_.lines.size(); }
  const Formula& formula(std::size_t i) const { return proof_.lines.at(i).formula; }

  // Primitive steps; each appends exactly one line and returns its index.
  std::size_t axiom(Scheme s, const Formula& instance);
  std::size_t cs_line(const Formula& member);
  std::size_t mp(std::size_t a, std::size_t a_imp_b);
  std::size_t nec(std::size_t a);
  std::size_t s4(std::size_t premise, std::vector<std::pair<Term, Formula>> pairs);

  // Derived propositional steps (each appends a handful of lines).
  std::size_t imp_refl(const Formula& a);                   // |- a -> a
  std::size_t weaken(std::size_t b, const Formula& a);      // |- b  =>  |- a -> b
  std::size_t syll(std::size_t ab, std::size_t bc);         // transitivity of ->
  std::size_t conj_left(std::size_t x_ab);                  // x->(a&b)  =>  x->a
  std::size_t conj_right(std::size_t x_ab);                 // x->(a&b)  =>  x->b
  std::size_t contrapose(std::size_t ab);                   // a->b  =>  ~b->~a
  std::size_t case_split(std::size_t ac, std::size_t bc);   // (a|b)->c
  std::size_t excluded_middle(const Formula& a);            // |- a | ~a
  std::size_t double_neg_intro(const Formula& a);           // |- a -> ~~a

  // Derived modal steps.
  std::size_t t0(const Formula& a);                         // |- Ka -> []a
  std::size_t box_theorem(std::size_t a);                   // |- a  =>  |- []a
  std::size_t cstit_theorem(std::size_t a, const std::string& j);
  std::size_t k_mono(std::size_t ab);                       // Ka -> Kb
  std::size_t box_mono(std::size_t ab);                     // []a -> []b
  std::size_t cstit_mono(std::size_t ab, const std::string& j);
  std::size_t box_4(const Formula& a);                      // |- []a -> [][]a

  // Hypothetical propositional reasoning, discharged by the deduction
  // theorem. Every sub-step immediately emits main-proof lines proving
  // hypothesis -> step.
  class Hypothetical {
   public:
    std::size_t hypothesis();
    std::size_t use(std::size_t main_line);           // reuse a proven theorem
    std::size_t axiom(Scheme s, const Formula& instance);
    std::size_t mp(std::size_t a, std::size_t a_imp_b);
    // Main-proof line holding hypothesis -> formula(step).
    std::size_t discharge(std::size_t step) const { return main_.at(step); }

   private:
    friend class ProofBuilder;
    Hypothetical(ProofBuilder& pb, Formula hyp) : pb_(pb), hyp_(std::move(hyp)) {}
    ProofBuilder& pb_;
    Formula hyp_;
    std::vector<Formula> body_;  // formula of each sub-step
    std::vector<std::size_t> main_;
  };

  Hypothetical assume(Formula hypothesis) { return Hypothetical(*this, std::move(hypothesis)); }

 private:
  Proof proof_;
};

}  // namespace jstit
