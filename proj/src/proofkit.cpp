#include "jstit/proofkit.hpp"

#include <algorithm>
#include <array>
#include <cassert>
#include <sstream>

#include "jstit/model.hpp"

namespace jstit {

using FK = Formula::Kind;
using TK = Term::Kind;

// ---------------------------------------------------------------------------
// Scheme ids

namespace {

constexpr std::array<std::pair<Scheme, std::string_view>, 32> kSchemeIds{{
    {Scheme::A0_1, "A0-1"},   {Scheme::A0_2, "A0-2"},   {Scheme::A0_3, "A0-3"},
    {Scheme::A0_4, "A0-4"},   {Scheme::A0_5, "A0-5"},   {Scheme::A0_6, "A0-6"},
    {Scheme::A0_7, "A0-7"},   {Scheme::A0_8, "A0-8"},   {Scheme::A0_9, "A0-9"},
    {Scheme::A0_10, "A0-10"}, {Scheme::A0_11, "A0-11"}, {Scheme::A0_12, "A0-12"},
    {Scheme::A1BoxK, "A1-BOX-K"}, {Scheme::A1BoxT, "A1-BOX-T"}, {Scheme::A1Box5, "A1-BOX-5"},
    {Scheme::A1AgK, "A1-AG-K"},   {Scheme::A1AgT, "A1-AG-T"},   {Scheme::A1Ag5, "A1-AG-5"},
    {Scheme::A2, "A2"},       {Scheme::A3, "A3"},       {Scheme::A4, "A4"},
    {Scheme::A5, "A5"},       {Scheme::A6, "A6"},
    {Scheme::A7K, "A7-K"},    {Scheme::A7T, "A7-T"},    {Scheme::A74, "A7-4"},
    {Scheme::A8, "A8"},
    {Scheme::B9, "B9"},       {Scheme::B10, "B10"},     {Scheme::B11, "B11"},
    {Scheme::B12, "B12"},     {Scheme::B13, "B13"},
}};

}  // namespace

std::string_view scheme_id(Scheme s) {
  if (s == Scheme::AS4) return "AS4";
  for (const auto& [sc, id] : kSchemeIds)
    if (sc == s) return id;
  return "?";
}

std::optional<Scheme> scheme_from_id(std::string_view id) {
  if (id == "AS4") return Scheme::AS4;
  for (const auto& [sc, sid] : kSchemeIds)
    if (sid == id) return sc;
  return std::nullopt;
}

const std::vector<Scheme>& all_schemes() {
  static const std::vector<Scheme> order = [] {
    std::vector<Scheme> v;
    for (const auto& [sc, id] : kSchemeIds) v.push_back(sc);
    v.push_back(Scheme::AS4);
    return v;
  }();
  return order;
}

// ---------------------------------------------------------------------------
// Canonical instance constructors

namespace schemes {

Formula rfold_and(const std::vector<Formula>& parts) {
  if (parts.empty()) throw ProofError("empty conjunction");
  Formula f = parts.back();
  for (std::size_t i = parts.size() - 1; i-- > 0;) f = Formula::conj(parts[i], f);
  return f;
}

Formula rfold_or(const std::vector<Formula>& parts) {
  if (parts.empty()) throw ProofError("empty disjunction");
  Formula f = parts.back();
  for (std::size_t i = parts.size() - 1; i-- > 0;) f = Formula::disj(parts[i], f);
  return f;
}

Formula neg_proven_disj(const std::vector<std::pair<Term, Formula>>& pairs) {
  std::vector<Formula> parts;
  for (const auto& [t, b] : pairs) parts.push_back(Formula::neg(Formula::proven(t, b)));
  return rfold_or(parts);
}

Formula agents_neg_prove_conj(const AgentSet& agents, const Term& t, const Formula& b) {
  std::vector<Formula> parts;
  for (const auto& j : agents.list()) parts.push_back(Formula::neg(Formula::prove(j, t, b)));
  return rfold_and(parts);
}

namespace {
Formula imp(Formula a, Formula b) { return Formula::imp(std::move(a), std::move(b)); }
Formula neg(Formula a) { return Formula::neg(std::move(a)); }
Formula box(Formula a) { return Formula::box(std::move(a)); }
Formula knows(Formula a) { return Formula::knows(std::move(a)); }
}  // namespace

Formula a0_1(const Formula& a, const Formula& b) { return imp(a, imp(b, a)); }
Formula a0_2(const Formula& a, const Formula& b, const Formula& c) {
  return imp(imp(a, imp(b, c)), imp(imp(a, b), imp(a, c)));
}
Formula a0_3(const Formula& a, const Formula& b) { return imp(Formula::conj(a, b), a); }
Formula a0_4(const Formula& a, const Formula& b) { return imp(Formula::conj(a, b), b); }
Formula a0_5(const Formula& a, const Formula& b) {
  return imp(a, imp(b, Formula::conj(a, b)));
}
Formula a0_6(const Formula& a, const Formula& b) { return imp(a, Formula::disj(a, b)); }
Formula a0_7(const Formula& a, const Formula& b) { return imp(b, Formula::disj(a, b)); }
Formula a0_8(const Formula& a, const Formula& b, const Formula& c) {
  return imp(imp(a, c), imp(imp(b, c), imp(Formula::disj(a, b), c)));
}
Formula a0_9(const Formula& a, const Formula& b) {
  return imp(imp(a, b), imp(imp(a, neg(b)), neg(a)));
}
Formula a0_10(const Formula& a) { return imp(neg(neg(a)), a); }
Formula a0_11(const Formula& a) { return imp(Formula::falsum(), a); }
Formula a0_12(const Formula& a) { return imp(neg(a), imp(a, Formula::falsum())); }

Formula a1_box_k(const Formula& a, const Formula& b) {
  return imp(box(imp(a, b)), imp(box(a), box(b)));
}
Formula a1_box_t(const Formula& a) { return imp(box(a), a); }
Formula a1_box_5(const Formula& a) {
  Formula dia = neg(box(neg(a)));
  return imp(dia, box(dia));
}
Formula a1_ag_k(const std::string& j, const Formula& a, const Formula& b) {
  return imp(Formula::cstit(j, imp(a, b)), imp(Formula::cstit(j, a), Formula::cstit(j, b)));
}
Formula a1_ag_t(const std::string& j, const Formula& a) { return imp(Formula::cstit(j, a), a); }
Formula a1_ag_5(const std::string& j, const Formula& a) {
  Formula dia = neg(Formula::cstit(j, neg(a)));
  return imp(dia, Formula::cstit(j, dia));
}
Formula a2(const std::string& j, const Formula& a) {
  return imp(box(a), Formula::cstit(j, a));
}
Formula a3(const std::vector<std::pair<std::string, Formula>>& items) {
  std::vector<Formula> dia_parts, stit_parts;
  for (const auto& [j, a] : items) {
    Formula stit = Formula::cstit(j, a);
    stit_parts.push_back(stit);
    dia_parts.push_back(neg(box(neg(stit))));
  }
  return imp(rfold_and(dia_parts), neg(box(neg(rfold_and(stit_parts)))));
}
Formula a4(const Term& s, const Term& t, const Formula& a, const Formula& b) {
  return imp(Formula::just(s, imp(a, b)),
             imp(Formula::just(t, a), Formula::just(Term::app(s, t), b)));
}
Formula a5(const Term& t, const Formula& a) {
  Formula ta = Formula::just(t, a);
  return imp(ta, Formula::conj(Formula::just(Term::check(t), ta), knows(a)));
}
Formula a6(const Term& s, const Term& t, const Formula& a) {
  return imp(Formula::disj(Formula::just(s, a), Formula::just(t, a)),
             Formula::just(Term::sum(s, t), a));
}
Formula a7_k(const Formula& a, const Formula& b) {
  return imp(knows(imp(a, b)), imp(knows(a), knows(b)));
}
Formula a7_t(const Formula& a) { return imp(knows(a), a); }
Formula a7_4(const Formula& a) { return imp(knows(a), knows(knows(a))); }
Formula a8(const Formula& a) { return imp(knows(a), box(knows(box(a)))); }
Formula b9(const std::string& j, const Term& t, const Formula& a) {
  Formula pr = Formula::prove(j, t, a);
  return imp(pr, rfold_and({neg(Formula::proven(t, a)), Formula::cstit(j, pr),
                            neg(box(pr)), Formula::just(t, a)}));
}
Formula b10(const std::string& j, const Term& t, const Formula& a, const Formula& b) {
  return imp(Formula::conj(Formula::prove(j, t, a), Formula::just(t, b)),
             Formula::prove(j, t, b));
}
Formula b11(const Term& t, const Formula& a) {
  Formula pv = Formula::proven(t, a);
  return imp(pv, Formula::conj(knows(pv), Formula::just(t, a)));
}
Formula b12(const Term& t, const Formula& a, const Formula& b) {
  return imp(Formula::conj(Formula::proven(t, a), Formula::just(t, b)),
             Formula::proven(t, b));
}
Formula b13(const std::string& j, const Term& t, const Formula& a, const AgentSet& agents) {
  Formula conj = agents_neg_prove_conj(agents, t, a);
  return imp(neg(Formula::prove(j, t, a)), neg(Formula::cstit(j, neg(conj))));
}
Formula as4(const std::vector<std::pair<Term, Formula>>& pairs, const AgentSet& agents) {
  std::vector<Formula> parts;
  for (const auto& [t, b] : pairs) parts.push_back(agents_neg_prove_conj(agents, t, b));
  return imp(knows(neg_proven_disj(pairs)), rfold_or(parts));
}

}  // namespace schemes

// ---------------------------------------------------------------------------
// Matching

namespace {

// Right-associated peeling: leaves of an &-chain / |-chain.
std::vector<Formula> and_leaves(const Formula& f) {
  std::vector<Formula> out;
  Formula cur = f;
  while (cur.kind() == FK::And) {
    out.push_back(cur.left());
    cur = cur.right();
  }
  out.push_back(cur);
  return out;
}

std::vector<Formula> or_leaves(const Formula& f) {
  std::vector<Formula> out;
  Formula cur = f;
  while (cur.kind() == FK::Or) {
    out.push_back(cur.left());
    cur = cur.right();
  }
  out.push_back(cur);
  return out;
}

bool match_impl(const Formula& n, Scheme s, const AgentSet& agents) {
  if (n.kind() != FK::Imp) return false;
  const Formula& l = n.left();
  const Formula& r = n.right();
  switch (s) {
    case Scheme::A0_1: {
      if (r.kind() != FK::Imp) return false;
      return schemes::a0_1(l, r.left()) == n;
    }
    case Scheme::A0_2: {
      if (l.kind() != FK::Imp || l.right().kind() != FK::Imp) return false;
      return schemes::a0_2(l.left(), l.right().left(), l.right().right()) == n;
    }
    case Scheme::A0_3: {
      if (l.kind() != FK::And) return false;
      return schemes::a0_3(l.left(), l.right()) == n;
    }
    case Scheme::A0_4: {
      if (l.kind() != FK::And) return false;
      return schemes::a0_4(l.left(), l.right()) == n;
    }
    case Scheme::A0_5: {
      if (r.kind() != FK::Imp) return false;
      return schemes::a0_5(l, r.left()) == n;
    }
    case Scheme::A0_6: {
      if (r.kind() != FK::Or) return false;
      return schemes::a0_6(l, r.right()) == n;
    }
    case Scheme::A0_7: {
      if (r.kind() != FK::Or) return false;
      return schemes::a0_7(r.left(), l) == n;
    }
    case Scheme::A0_8: {
      if (l.kind() != FK::Imp || r.kind() != FK::Imp || r.left().kind() != FK::Imp) return false;
      return schemes::a0_8(l.left(), r.left().left(), l.right()) == n;
    }
    case Scheme::A0_9: {
      if (l.kind() != FK::Imp) return false;
      return schemes::a0_9(l.left(), l.right()) == n;
    }
    case Scheme::A0_10:
      return schemes::a0_10(r) == n;
    case Scheme::A0_11:
      return schemes::a0_11(r) == n;
    case Scheme::A0_12: {
      if (l.kind() != FK::Neg) return false;
      return schemes::a0_12(l.child()) == n;
    }
    case Scheme::A1BoxK: {
      if (l.kind() != FK::Box || l.child().kind() != FK::Imp) return false;
      return schemes::a1_box_k(l.child().left(), l.child().right()) == n;
    }
    case Scheme::A1BoxT: {
      if (l.kind() != FK::Box) return false;
      return schemes::a1_box_t(l.child()) == n;
    }
    case Scheme::A1Box5: {
      if (l.kind() != FK::Neg || l.child().kind() != FK::Box ||
          l.child().child().kind() != FK::Neg)
        return false;
      return schemes::a1_box_5(l.child().child().child()) == n;
    }
    case Scheme::A1AgK: {
      if (l.kind() != FK::Cstit || l.child().kind() != FK::Imp) return false;
      if (!agents.contains(l.agent())) return false;
      return schemes::a1_ag_k(l.agent(), l.child().left(), l.child().right()) == n;
    }
    case Scheme::A1AgT: {
      if (l.kind() != FK::Cstit) return false;
      if (!agents.contains(l.agent())) return false;
      return schemes::a1_ag_t(l.agent(), l.child()) == n;
    }
    case Scheme::A1Ag5: {
      if (l.kind() != FK::Neg || l.child().kind() != FK::Cstit ||
          l.child().child().kind() != FK::Neg)
        return false;
      if (!agents.contains(l.child().agent())) return false;
      return schemes::a1_ag_5(l.child().agent(), l.child().child().child()) == n;
    }
    case Scheme::A2: {
      if (l.kind() != FK::Box || r.kind() != FK::Cstit) return false;
      if (!agents.contains(r.agent())) return false;
      return schemes::a2(r.agent(), l.child()) == n;
    }
    case Scheme::A3: {
      std::vector<std::pair<std::string, Formula>> items;
      std::vector<std::string> seen;
      for (const Formula& leaf : and_leaves(l)) {
        if (leaf.kind() != FK::Neg || leaf.child().kind() != FK::Box ||
            leaf.child().child().kind() != FK::Neg ||
            leaf.child().child().child().kind() != FK::Cstit)
          return false;
        const Formula& stit = leaf.child().child().child();
        if (!agents.contains(stit.agent())) return false;
        if (std::find(seen.begin(), seen.end(), stit.agent()) != seen.end()) return false;
        seen.push_back(stit.agent());
        items.emplace_back(stit.agent(), stit.child());
      }
      return schemes::a3(items) == n;
    }
    case Scheme::A4: {
      if (l.kind() != FK::Just || l.child().kind() != FK::Imp) return false;
      if (r.kind() != FK::Imp || r.left().kind() != FK::Just) return false;
      return schemes::a4(l.term(), r.left().term(), l.child().left(), l.child().right()) == n;
    }
    case Scheme::A5: {
      if (l.kind() != FK::Just) return false;
      return schemes::a5(l.term(), l.child()) == n;
    }
    case Scheme::A6: {
      if (l.kind() != FK::Or || l.left().kind() != FK::Just || l.right().kind() != FK::Just)
        return false;
      return schemes::a6(l.left().term(), l.right().term(), l.left().child()) == n;
    }
    case Scheme::A7K: {
      if (l.kind() != FK::Knows || l.child().kind() != FK::Imp) return false;
      return schemes::a7_k(l.child().left(), l.child().right()) == n;
    }
    case Scheme::A7T: {
      if (l.kind() != FK::Knows) return false;
      return schemes::a7_t(l.child()) == n;
    }
    case Scheme::A74: {
      if (l.kind() != FK::Knows) return false;
      return schemes::a7_4(l.child()) == n;
    }
    case Scheme::A8: {
      if (l.kind() != FK::Knows) return false;
      return schemes::a8(l.child()) == n;
    }
    case Scheme::B9: {
      if (l.kind() != FK::Prove) return false;
      if (!agents.contains(l.agent())) return false;
      return schemes::b9(l.agent(), l.term(), l.child()) == n;
    }
    case Scheme::B10: {
      if (l.kind() != FK::And || l.left().kind() != FK::Prove || l.right().kind() != FK::Just)
        return false;
      if (!agents.contains(l.left().agent())) return false;
      return schemes::b10(l.left().agent(), l.left().term(), l.left().child(),
                          l.right().child()) == n;
    }
    case Scheme::B11: {
      if (l.kind() != FK::Proven) return false;
      return schemes::b11(l.term(), l.child()) == n;
    }
    case Scheme::B12: {
      if (l.kind() != FK::And || l.left().kind() != FK::Proven || l.right().kind() != FK::Just)
        return false;
      return schemes::b12(l.left().term(), l.left().child(), l.right().child()) == n;
    }
    case Scheme::B13: {
      if (l.kind() != FK::Neg || l.child().kind() != FK::Prove) return false;
      if (!agents.contains(l.child().agent())) return false;
      return schemes::b13(l.child().agent(), l.child().term(), l.child().child(), agents) == n;
    }
    case Scheme::AS4: {
      if (l.kind() != FK::Knows) return false;
      std::vector<std::pair<Term, Formula>> pairs;
      for (const Formula& leaf : or_leaves(l.child())) {
        if (leaf.kind() != FK::Neg || leaf.child().kind() != FK::Proven) return false;
        pairs.emplace_back(leaf.child().term(), leaf.child().child());
      }
      return schemes::as4(pairs, agents) == n;
    }
  }
  return false;
}

}  // namespace

bool matches_scheme(const Formula& f, Scheme s, const AgentSet& agents) {
  return match_impl(normalize(f), s, agents);
}

std::optional<Scheme> match_axiom(const Formula& f, const AgentSet& agents, bool include_as4) {
  Formula n = normalize(f);
  for (Scheme s : all_schemes()) {
    if (s == Scheme::AS4 && !include_as4) continue;
    if (match_impl(n, s, agents)) return s;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Constant specifications

ConstantSpecification ConstantSpecification::from_formulas(const std::vector<Formula>& members,
                                                           const AgentSet& agents) {
  ConstantSpecification out;
  for (const auto& f : members) {
    Formula n = normalize(f);
    if (std::find(out.members_.begin(), out.members_.end(), n) == out.members_.end())
      out.members_.push_back(n);
  }
  for (const auto& m : out.members_) {
    Formula cur = m;
    int layers = 0;
    while (cur.kind() == FK::Just && cur.term().kind() == TK::Const) {
      cur = cur.child();
      ++layers;
    }
    if (layers == 0)
      throw ProofError("constant specification member must be c:...:A with proof constants: " +
                       print_formula(m));
    if (!match_axiom(cur, agents, false))
      throw ProofError("constant specification body is not an axiom instance: " +
                       print_formula(cur));
    if (layers >= 2 && !out.contains(m.child()))
      throw ProofError("constant specification is not downward closed; missing " +
                       print_formula(m.child()));
  }
  return out;
}

ConstantSpecification ConstantSpecification::parse(std::string_view text, const AgentSet& agents) {
  std::vector<Formula> members;
  std::string line;
  std::istringstream in{std::string(text)};
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::size_t a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos) continue;
    std::size_t b = line.find_last_not_of(" \t\r");
    members.push_back(parse_formula(line.substr(a, b - a + 1), agents));
  }
  return from_formulas(members, agents);
}

bool ConstantSpecification::contains(const Formula& f) const {
  Formula n = normalize(f);
  return std::find(members_.begin(), members_.end(), n) != members_.end();
}

bool is_cs_normal(const FiniteJstitModel& model, const ConstantSpecification& cs) {
  for (const auto& member : cs.members()) {
    if (member.kind() != Formula::Kind::Just) continue;
    const Term& c = member.term();
    for (const auto& m : model.moments())
      if (!model.evidence_at(m, c).contains(member.child())) return false;
  }
  return true;
}

std::string ConstantSpecification::to_text() const {
  std::string out;
  for (const auto& m : members_) out += print_formula(m) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Proofs and checking

Justification Justification::axiom(Scheme s) {
  Justification j;
  j.kind = Kind::Axiom;
  j.scheme = s;
  return j;
}
Justification Justification::cs() {
  Justification j;
  j.kind = Kind::Cs;
  return j;
}
Justification Justification::mp(std::size_t a, std::size_t a_imp_b) {
  Justification j;
  j.kind = Kind::Mp;
  j.from = a;
  j.imp = a_imp_b;
  return j;
}
Justification Justification::nec(std::size_t a) {
  Justification j;
  j.kind = Kind::Nec;
  j.from = a;
  return j;
}
Justification Justification::s4(std::size_t premise, std::vector<std::pair<Term, Formula>> pairs) {
  Justification j;
  j.kind = Kind::S4;
  j.from = premise;
  j.pairs = std::move(pairs);
  return j;
}

const Formula& Proof::conclusion() const {
  if (lines.empty()) throw ProofError("empty proof has no conclusion");
  return lines.back().formula;
}

Verdict check_proof(const Proof& p, const ConstantSpecification& cs, ProofMode mode) {
  if (p.lines.empty()) return Verdict{false, 0, "empty proof"};
  std::vector<Formula> fs;
  fs.reserve(p.lines.size());
  for (const auto& line : p.lines) fs.push_back(normalize(line.formula));

  auto reject = [](std::size_t i, std::string reason) {
    return Verdict{false, i + 1, std::move(reason)};
  };

  for (std::size_t i = 0; i < p.lines.size(); ++i) {
    const Justification& j = p.lines[i].just;
    switch (j.kind) {
      case Justification::Kind::Axiom: {
        if (mode == ProofMode::Pi && j.scheme == Scheme::AS4)
          return reject(i, "AS4 is an axiom only in the axiomatic variant");
        if (!matches_scheme(fs[i], j.scheme, p.agents))
          return reject(i, "formula is not an instance of " + std::string(scheme_id(j.scheme)));
        break;
      }
      case Justification::Kind::Cs: {
        if (!cs.contains(fs[i]))
          return reject(i, "formula is not a member of the constant specification");
        break;
      }
      case Justification::Kind::Mp: {
        if (j.from >= i || j.imp >= i)
          return reject(i, "modus ponens premises must be earlier lines");
        if (!(fs[j.imp] == Formula::imp(fs[j.from], fs[i])))
          return reject(i, "modus ponens premises do not yield this formula");
        break;
      }
      case Justification::Kind::Nec: {
        if (j.from >= i) return reject(i, "necessitation premise must be an earlier line");
        if (!(fs[i] == Formula::knows(fs[j.from])))
          return reject(i, "necessitation premise does not match");
        break;
      }
      case Justification::Kind::S4: {
        if (mode == ProofMode::PiPrime)
          return reject(i, "the S4 rule is not available in the axiomatic variant");
        if (j.from >= i) return reject(i, "S4 premise must be an earlier line");
        if (j.pairs.empty()) return reject(i, "S4 needs at least one (term, formula) pair");
        std::vector<std::pair<Term, Formula>> pairs;
        for (const auto& [t, b] : j.pairs) pairs.emplace_back(t, normalize(b));
        if (fs[i].kind() != FK::Imp || fs[i].left().kind() != FK::Knows)
          return reject(i, "S4 conclusion must have shape K A -> ...");
        Formula ka = fs[i].left();
        if (!(fs[j.from] == Formula::imp(ka, schemes::neg_proven_disj(pairs))))
          return reject(i, "S4 premise does not match the annotated pairs");
        std::vector<Formula> parts;
        for (const auto& [t, b] : pairs)
          parts.push_back(schemes::agents_neg_prove_conj(p.agents, t, b));
        if (!(fs[i] == Formula::imp(ka, schemes::rfold_or(parts))))
          return reject(i, "S4 conclusion does not match the annotated pairs "
                           "(agents must appear in canonical order)");
        break;
      }
    }
  }
  return Verdict{true, 0, "accepted"};
}

// ---------------------------------------------------------------------------
// ProofBuilder

std::size_t ProofBuilder::axiom(Scheme s, const Formula& instance) {
  Formula n = normalize(instance);
  if (!matches_scheme(n, s, proof_.agents))
    throw ProofError("builder: formula is not an instance of " + std::string(scheme_id(s)) +
                     ": " + print_formula(instance));
  proof_.lines.push_back({n, Justification::axiom(s)});
  return proof_.lines.size() - 1;
}

std::size_t ProofBuilder::cs_line(const Formula& member) {
  proof_.lines.push_back({normalize(member), Justification::cs()});
  return proof_.lines.size() - 1;
}

std::size_t ProofBuilder::mp(std::size_t a, std::size_t a_imp_b) {
  const Formula& fa = formula(a);
  const Formula& fab = formula(a_imp_b);
  if (fab.kind() != FK::Imp || !(fab.left() == fa))
    throw ProofError("builder: modus ponens premises do not fit: " + print_formula(fa) +
                     " vs " + print_formula(fab));
  Formula result = fab.right();
  proof_.lines.push_back({std::move(result), Justification::mp(a, a_imp_b)});
  return proof_.lines.size() - 1;
}

std::size_t ProofBuilder::nec(std::size_t a) {
  Formula result = Formula::knows(formula(a));
  proof_.lines.push_back({std::move(result), Justification::nec(a)});
  return proof_.lines.size() - 1;
}

std::size_t ProofBuilder::s4(std::size_t premise, std::vector<std::pair<Term, Formula>> pairs) {
  const Formula& prem = formula(premise);
  std::vector<std::pair<Term, Formula>> npairs;
  for (auto& [t, b] : pairs) npairs.emplace_back(t, normalize(b));
  if (prem.kind() != FK::Imp || prem.left().kind() != FK::Knows ||
      !(prem.right() == schemes::neg_proven_disj(npairs)))
    throw ProofError("builder: S4 premise does not match the pairs: " + print_formula(prem));
  std::vector<Formula> parts;
  for (const auto& [t, b] : npairs)
    parts.push_back(schemes::agents_neg_prove_conj(proof_.agents, t, b));
  Formula conclusion = Formula::imp(prem.left(), schemes::rfold_or(parts));
  proof_.lines.push_back({std::move(conclusion), Justification::s4(premise, std::move(npairs))});
  return proof_.lines.size() - 1;
}

std::size_t ProofBuilder::imp_refl(const Formula& a0) {
  Formula a = normalize(a0);
  Formula aa = Formula::imp(a, a);
  std::size_t s1 = axiom(Scheme::A0_1, schemes::a0_1(a, aa));
  std::size_t s2 = axiom(Scheme::A0_2, schemes::a0_2(a, aa, a));
  std::size_t s3 = mp(s1, s2);
  std::size_t s4 = axiom(Scheme::A0_1, schemes::a0_1(a, a));
  return mp(s4, s3);
}

std::size_t ProofBuilder::weaken(std::size_t b, const Formula& a0) {
  Formula a = normalize(a0);
  std::size_t k = axiom(Scheme::A0_1, schemes::a0_1(formula(b), a));
  return mp(b, k);
}

std::size_t ProofBuilder::syll(std::size_t ab, std::size_t bc) {
  const Formula& fab = formula(ab);
  const Formula& fbc = formula(bc);
  if (fab.kind() != FK::Imp || fbc.kind() != FK::Imp || !(fab.right() == fbc.left()))
    throw ProofError("builder: syllogism premises do not chain");
  Formula a = fab.left(), b = fab.right(), c = fbc.right();
  std::size_t w = weaken(bc, a);  // a -> (b -> c)
  std::size_t e = axiom(Scheme::A0_2, schemes::a0_2(a, b, c));
  std::size_t m = mp(w, e);       // (a -> b) -> (a -> c)
  return mp(ab, m);
}

std::size_t ProofBuilder::conj_left(std::size_t x_ab) {
  const Formula& f = formula(x_ab);
  if (f.kind() != FK::Imp || f.right().kind() != FK::And)
    throw ProofError("builder: expected x -> (a & b)");
  std::size_t e = axiom(Scheme::A0_3, schemes::a0_3(f.right().left(), f.right().right()));
  return syll(x_ab, e);
}

std::size_t ProofBuilder::conj_right(std::size_t x_ab) {
  const Formula& f = formula(x_ab);
  if (f.kind() != FK::Imp || f.right().kind() != FK::And)
    throw ProofError("builder: expected x -> (a & b)");
  std::size_t e = axiom(Scheme::A0_4, schemes::a0_4(f.right().left(), f.right().right()));
  return syll(x_ab, e);
}

std::size_t ProofBuilder::contrapose(std::size_t ab) {
  const Formula& f = formula(ab);
  if (f.kind() != FK::Imp) throw ProofError("builder: contraposition needs an implication");
  Formula a = f.left(), b = f.right();
  Hypothetical h = assume(Formula::neg(b));
  std::size_t hh = h.hypothesis();
  std::size_t thm = h.use(ab);
  std::size_t k1 = h.axiom(Scheme::A0_1, schemes::a0_1(Formula::neg(b), a));
  std::size_t s1 = h.mp(hh, k1);  // a -> ~b
  std::size_t e = h.axiom(Scheme::A0_9, schemes::a0_9(a, b));
  std::size_t m1 = h.mp(thm, e);
  std::size_t m2 = h.mp(s1, m1);  // ~a
  return h.discharge(m2);
}

std::size_t ProofBuilder::case_split(std::size_t ac, std::size_t bc) {
  const Formula& fac = formula(ac);
  const Formula& fbc = formula(bc);
  if (fac.kind() != FK::Imp || fbc.kind() != FK::Imp || !(fac.right() == fbc.right()))
    throw ProofError("builder: case split premises disagree on the conclusion");
  std::size_t e = axiom(Scheme::A0_8, schemes::a0_8(fac.left(), fbc.left(), fac.right()));
  std::size_t m = mp(ac, e);
  return mp(bc, m);
}

std::size_t ProofBuilder::excluded_middle(const Formula& a0) {
  Formula a = normalize(a0);
  Formula disj = Formula::disj(a, Formula::neg(a));
  std::size_t a6i = axiom(Scheme::A0_6, schemes::a0_6(a, Formula::neg(a)));
  std::size_t a7i = axiom(Scheme::A0_7, schemes::a0_7(a, Formula::neg(a)));
  std::size_t c1 = contrapose(a6i);  // ~(a|~a) -> ~a
  std::size_t c2 = contrapose(a7i);  // ~(a|~a) -> ~~a
  std::size_t e = axiom(Scheme::A0_9, schemes::a0_9(Formula::neg(disj), Formula::neg(a)));
  std::size_t m1 = mp(c1, e);
  std::size_t m2 = mp(c2, m1);  // ~~(a|~a)
  std::size_t d = axiom(Scheme::A0_10, schemes::a0_10(disj));
  return mp(m2, d);
}

std::size_t ProofBuilder::double_neg_intro(const Formula& a0) {
  Formula a = normalize(a0);
  Hypothetical h = assume(a);
  std::size_t hh = h.hypothesis();
  std::size_t k1 = h.axiom(Scheme::A0_1, schemes::a0_1(a, Formula::neg(a)));
  std::size_t s1 = h.mp(hh, k1);  // ~a -> a
  std::size_t r = imp_refl(Formula::neg(a));
  std::size_t u = h.use(r);       // ~a -> ~a
  std::size_t e = h.axiom(Scheme::A0_9, schemes::a0_9(Formula::neg(a), a));
  std::size_t m1 = h.mp(s1, e);
  std::size_t m2 = h.mp(u, m1);   // ~~a
  return h.discharge(m2);
}

std::size_t ProofBuilder::t0(const Formula& a0) {
  Formula a = normalize(a0);
  std::size_t z3 = axiom(Scheme::A8, schemes::a8(a));
  std::size_t z4 = axiom(Scheme::A1BoxT, schemes::a1_box_t(Formula::knows(Formula::box(a))));
  std::size_t z5 = axiom(Scheme::A7T, schemes::a7_t(Formula::box(a)));
  std::size_t s1 = syll(z3, z4);  // Ka -> K[]a
  return syll(s1, z5);            // Ka -> []a
}

std::size_t ProofBuilder::box_theorem(std::size_t a) {
  std::size_t ka = nec(a);
  std::size_t t = t0(formula(a));
  return mp(ka, t);
}

std::size_t ProofBuilder::cstit_theorem(std::size_t a, const std::string& j) {
  std::size_t ba = box_theorem(a);
  std::size_t e = axiom(Scheme::A2, schemes::a2(j, formula(a)));
  return mp(ba, e);
}

std::size_t ProofBuilder::k_mono(std::size_t ab) {
  Formula f = formula(ab);  // by value: emitting lines may relocate the vector
  if (f.kind() != FK::Imp) throw ProofError("builder: monotonicity needs an implication");
  std::size_t n1 = nec(ab);
  std::size_t e = axiom(Scheme::A7K, schemes::a7_k(f.left(), f.right()));
  return mp(n1, e);
}

std::size_t ProofBuilder::box_mono(std::size_t ab) {
  Formula f = formula(ab);
  if (f.kind() != FK::Imp) throw ProofError("builder: monotonicity needs an implication");
  std::size_t bt = box_theorem(ab);
  std::size_t e = axiom(Scheme::A1BoxK, schemes::a1_box_k(f.left(), f.right()));
  return mp(bt, e);
}

std::size_t ProofBuilder::cstit_mono(std::size_t ab, const std::string& j) {
  Formula f = formula(ab);
  if (f.kind() != FK::Imp) throw ProofError("builder: monotonicity needs an implication");
  std::size_t bt = box_theorem(ab);
  std::size_t e2 = axiom(Scheme::A2, schemes::a2(j, Formula::imp(f.left(), f.right())));
  std::size_t m = mp(bt, e2);
  std::size_t e3 = axiom(Scheme::A1AgK, schemes::a1_ag_k(j, f.left(), f.right()));
  return mp(m, e3);
}

std::size_t ProofBuilder::box_4(const Formula& a0) {
  Formula a = normalize(a0);
  auto B = [](const Formula& x) { return Formula::box(x); };
  auto N = [](const Formula& x) { return Formula::neg(x); };

  std::size_t d1 = double_neg_intro(a);                      // a -> ~~a
  std::size_t d2 = box_mono(d1);                             // []a -> []~~a
  std::size_t d3 = axiom(Scheme::A0_10, schemes::a0_10(a));  // ~~a -> a
  std::size_t d4 = box_mono(d3);                             // []~~a -> []a

  // []a -> ~[]~[]a
  std::size_t t1 = axiom(Scheme::A1BoxT, schemes::a1_box_t(N(B(a))));
  std::size_t t2 = contrapose(t1);          // ~~[]a -> ~[]~[]a
  std::size_t t3 = double_neg_intro(B(a));  // []a -> ~~[]a
  std::size_t t4 = syll(t3, t2);

  std::size_t f1 = axiom(Scheme::A1Box5, schemes::a1_box_5(B(a)));  // ~[]~[]a -> []~[]~[]a
  std::size_t g1 = axiom(Scheme::A1Box5, schemes::a1_box_5(N(a)));  // ~[]~~a -> []~[]~~a
  std::size_t g2 = contrapose(g1);
  std::size_t g3 = axiom(Scheme::A0_10, schemes::a0_10(B(N(N(a)))));
  std::size_t g4 = syll(g2, g3);    // ~[]~[]~~a -> []~~a
  std::size_t g5 = syll(g4, d4);    // ~[]~[]~~a -> []a

  std::size_t h1 = contrapose(d2);  // ~[]~~a -> ~[]a
  std::size_t h2 = box_mono(h1);    // []~[]~~a -> []~[]a
  std::size_t h3 = contrapose(h2);  // ~[]~[]a -> ~[]~[]~~a
  std::size_t key = syll(h3, g5);   // ~[]~[]a -> []a

  std::size_t k1 = box_mono(key);   // []~[]~[]a -> [][]a
  std::size_t c1 = syll(t4, f1);    // []a -> []~[]~[]a
  return syll(c1, k1);              // []a -> [][]a
}

// Hypothetical sub-derivation: every step eagerly emits main lines proving
// hypothesis -> step.

std::size_t ProofBuilder::Hypothetical::hypothesis() {
  std::size_t m = pb_.imp_refl(hyp_);
  body_.push_back(normalize(hyp_));
  main_.push_back(m);
  return body_.size() - 1;
}

std::size_t ProofBuilder::Hypothetical::use(std::size_t main_line) {
  Formula f = pb_.formula(main_line);
  std::size_t m = pb_.weaken(main_line, hyp_);
  body_.push_back(f);
  main_.push_back(m);
  return body_.size() - 1;
}

std::size_t ProofBuilder::Hypothetical::axiom(Scheme s, const Formula& instance) {
  std::size_t ax = pb_.axiom(s, instance);
  return use(ax);
}

std::size_t ProofBuilder::Hypothetical::mp(std::size_t a, std::size_t a_imp_b) {
  const Formula& fa = body_.at(a);
  const Formula& fab = body_.at(a_imp_b);
  if (fab.kind() != FK::Imp || !(fab.left() == fa))
    throw ProofError("builder: hypothetical modus ponens premises do not fit");
  Formula h = normalize(hyp_);
  Formula target = fab.right();
  std::size_t e = pb_.axiom(Scheme::A0_2, schemes::a0_2(h, fa, target));
  std::size_t m1 = pb_.mp(main_.at(a_imp_b), e);
  std::size_t m2 = pb_.mp(main_.at(a), m1);
  body_.push_back(target);
  main_.push_back(m2);
  return body_.size() - 1;
}

// ---------------------------------------------------------------------------
// S4 elimination

Proof eliminate_s4(const Proof& p, const ConstantSpecification& cs) {
  Verdict in = check_proof(p, cs, ProofMode::Pi);
  if (!in.accepted)
    throw ProofError("eliminate_s4: input proof rejected at line " + std::to_string(in.line) +
                     ": " + in.reason);
  bool any = false;
  for (const auto& line : p.lines)
    if (line.just.kind == Justification::Kind::S4) any = true;
  if (!any) return p;

  ProofBuilder out(p.agents);
  std::vector<std::size_t> map(p.lines.size());
  for (std::size_t i = 0; i < p.lines.size(); ++i) {
    const auto& line = p.lines[i];
    switch (line.just.kind) {
      case Justification::Kind::Axiom:
        map[i] = out.axiom(line.just.scheme, line.formula);
        break;
      case Justification::Kind::Cs:
        map[i] = out.cs_line(line.formula);
        break;
      case Justification::Kind::Mp:
        map[i] = out.mp(map[line.just.from], map[line.just.imp]);
        break;
      case Justification::Kind::Nec:
        map[i] = out.nec(map[line.just.from]);
        break;
      case Justification::Kind::S4: {
        std::size_t prem = map[line.just.from];
        Formula pf = out.formula(prem);  // K D -> B
        Formula kd = pf.left();
        Formula d = kd.child();
        Formula b = pf.right();
        std::size_t n1 = out.nec(prem);  // K(KD -> B)
        std::size_t e1 = out.axiom(Scheme::A7K, schemes::a7_k(kd, b));
        std::size_t m1 = out.mp(n1, e1);                            // KKD -> KB
        std::size_t e2 = out.axiom(Scheme::A74, schemes::a7_4(d));  // KD -> KKD
        std::size_t s1 = out.syll(e2, m1);                          // KD -> KB
        std::vector<std::pair<Term, Formula>> pairs;
        for (const auto& [t, bf] : line.just.pairs) pairs.emplace_back(t, normalize(bf));
        std::size_t e3 = out.axiom(Scheme::AS4, schemes::as4(pairs, p.agents));  // KB -> C
        map[i] = out.syll(s1, e3);  // KD -> C
        if (!(out.formula(map[i]) == normalize(line.formula)))
          throw ProofError("eliminate_s4: expansion produced a different conclusion");
        break;
      }
    }
  }
  return out.take();
}

// ---------------------------------------------------------------------------
// Proof files

namespace {

std::string trim_str(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::size_t parse_index(const std::string& text, int lineno) {
  try {
    long v = std::stol(text);
    if (v < 1) throw std::invalid_argument("index");
    return static_cast<std::size_t>(v - 1);
  } catch (const std::exception&) {
    throw ProofError("proof file line " + std::to_string(lineno) + ": bad line index '" +
                     text + "'");
  }
}

Justification parse_rule(const std::string& raw, const AgentSet& agents, int lineno) {
  std::string text = trim_str(raw);
  if (text == "cs") return Justification::cs();
  if (text.rfind("ax:", 0) == 0) {
    auto s = scheme_from_id(trim_str(text.substr(3)));
    if (!s)
      throw ProofError("proof file line " + std::to_string(lineno) + ": unknown scheme '" +
                       text.substr(3) + "'");
    return Justification::axiom(*s);
  }
  if (text.rfind("mp:", 0) == 0) {
    std::string rest = text.substr(3);
    std::size_t comma = rest.find(',');
    if (comma == std::string::npos)
      throw ProofError("proof file line " + std::to_string(lineno) + ": mp needs two indices");
    return Justification::mp(parse_index(trim_str(rest.substr(0, comma)), lineno),
                             parse_index(trim_str(rest.substr(comma + 1)), lineno));
  }
  if (text.rfind("nec:", 0) == 0)
    return Justification::nec(parse_index(trim_str(text.substr(4)), lineno));
  if (text.rfind("s4:", 0) == 0) {
    std::string rest = text.substr(3);
    std::size_t open = rest.find('[');
    if (open == std::string::npos || rest.back() != ']')
      throw ProofError("proof file line " + std::to_string(lineno) +
                       ": s4 needs 's4:i[(t,B);...]'");
    std::size_t prem = parse_index(trim_str(rest.substr(0, open)), lineno);
    std::string body = rest.substr(open + 1, rest.size() - open - 2);
    std::vector<std::pair<Term, Formula>> pairs;
    std::size_t pos = 0;
    while (pos <= body.size()) {
      std::size_t semi = body.find(';', pos);
      std::string item = trim_str(
          body.substr(pos, semi == std::string::npos ? std::string::npos : semi - pos));
      if (!item.empty()) {
        if (item.front() != '(' || item.back() != ')')
          throw ProofError("proof file line " + std::to_string(lineno) +
                           ": s4 pair must be parenthesized");
        std::string inner = item.substr(1, item.size() - 2);
        std::size_t comma = inner.find(',');
        if (comma == std::string::npos)
          throw ProofError("proof file line " + std::to_string(lineno) +
                           ": s4 pair needs '(term, formula)'");
        pairs.emplace_back(parse_term(trim_str(inner.substr(0, comma))),
                           parse_formula(trim_str(inner.substr(comma + 1)), agents));
      }
      if (semi == std::string::npos) break;
      pos = semi + 1;
    }
    if (pairs.empty())
      throw ProofError("proof file line " + std::to_string(lineno) + ": s4 needs pairs");
    return Justification::s4(prem, std::move(pairs));
  }
  throw ProofError("proof file line " + std::to_string(lineno) + ": unknown rule '" + text + "'");
}

}  // namespace

Proof parse_proof(std::string_view text, const AgentSet& default_agents) {
  std::vector<std::pair<int, std::string>> lines;
  {
    std::istringstream in{std::string(text)};
    std::string line;
    int no = 1;
    while (std::getline(in, line)) {
      auto hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      line = trim_str(line);
      if (!line.empty()) lines.emplace_back(no, line);
      ++no;
    }
  }

  std::optional<AgentSet> agents;
  std::size_t start = 0;
  if (!lines.empty() && lines[0].second.rfind("agents:", 0) == 0) {
    std::istringstream in(lines[0].second.substr(7));
    std::vector<std::string> names;
    std::string tok;
    while (in >> tok) names.push_back(tok);
    agents.emplace(names);
    start = 1;
  }
  Proof p(agents ? *agents : default_agents);

  for (std::size_t k = start; k < lines.size(); ++k) {
    const auto& [no, line] = lines[k];
    std::size_t dot = line.find('.');
    if (dot == std::string::npos)
      throw ProofError("proof file line " + std::to_string(no) +
                       ": expected 'n. FORMULA ; RULE'");
    std::size_t num = parse_index(trim_str(line.substr(0, dot)), no);
    if (num != p.lines.size())
      throw ProofError("proof file line " + std::to_string(no) + ": step numbered " +
                       std::to_string(num + 1) + ", expected " +
                       std::to_string(p.lines.size() + 1));
    std::string rest = line.substr(dot + 1);
    std::size_t semi = rest.find(';');
    if (semi == std::string::npos)
      throw ProofError("proof file line " + std::to_string(no) + ": missing '; RULE'");
    Formula f = parse_formula(trim_str(rest.substr(0, semi)), p.agents);
    Justification j = parse_rule(rest.substr(semi + 1), p.agents, no);
    p.lines.push_back({std::move(f), std::move(j)});
  }
  return p;
}

std::string print_proof(const Proof& p) {
  std::ostringstream out;
  out << "agents:";
  for (const auto& a : p.agents.list()) out << ' ' << a;
  out << "\n";
  for (std::size_t i = 0; i < p.lines.size(); ++i) {
    const auto& line = p.lines[i];
    out << (i + 1) << ". " << print_formula(line.formula) << " ; ";
    switch (line.just.kind) {
      case Justification::Kind::Axiom:
        out << "ax:" << scheme_id(line.just.scheme);
        break;
      case Justification::Kind::Cs:
        out << "cs";
        break;
      case Justification::Kind::Mp:
        out << "mp:" << (line.just.from + 1) << ',' << (line.just.imp + 1);
        break;
      case Justification::Kind::Nec:
        out << "nec:" << (line.just.from + 1);
        break;
      case Justification::Kind::S4: {
        out << "s4:" << (line.just.from + 1) << '[';
        for (std::size_t k = 0; k < line.just.pairs.size(); ++k) {
          if (k) out << ';';
          out << '(' << print_term(line.just.pairs[k].first) << ','
              << print_formula(line.just.pairs[k].second) << ')';
        }
        out << ']';
        break;
      }
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace jstit
