#pragma once

// Proof polynomials and formulas: immutable ASTs, a recursive-descent parser
// for the ASCII surface syntax, a minimal-parentheses printer, and structural
// utilities (subformulas, normalization, collectors).
//
// Surface syntax:
//   formula := imp ; imp := or ("->" imp)? ; or := and ("|" and)* ; and := unary ("&" unary)* ;
//   unary   := "~" unary | "[]" unary | "<>" unary | "[" AGENT "]" unary | "<" AGENT ">" unary
//            | "K" unary | term ":" unary | atom ;
//   atom    := IDENT | "false" | "(" formula ")" | "Prove(" AGENT "," term "," formula ")"
//            | "Proven(" term "," formula ")" | "E" term ;
//   term    := sum ; sum := app ("+" app)* ; app := bang ("*" bang)* ;
//   bang    := "!" bang | TVAR | TCONST | "(" term ")".
//
// Lexical classes: TVAR are lowercase identifiers starting with s,t,x,y,z and
// TCONST those starting with c,d (subscripted forms x1, c2, ... allowed);
// every other lowercase identifier is an IDENT usable as an atom or agent.
// "&" and "|" chains associate to the right (the canonical association for
// the variadic axiom shapes), "+" and "*" to the left, "->" to the right.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace jstit {

struct SyntaxError : std::runtime_error {
  int line;
  int column;
  SyntaxError(const std::string& msg, int line, int column);
};

class Term {
 public:
  enum class Kind : std::uint8_t { Var, Const, Sum, App, Check };

  static Term var(std::string name);
  static Term constant(std::string name);
  static Term sum(Term left, Term right);
  static Term app(Term left, Term right);
  static Term check(Term inner);

  Kind kind() const;
  const std::string& name() const;  // Var, Const
  const Term& left() const;         // Sum, App
  const Term& right() const;        // Sum, App
  const Term& inner() const;        // Check

  std::size_t hash() const;
  bool operator==(const Term& other) const;
  bool operator!=(const Term& other) const { return !(*this == other); }
  bool operator<(const Term& other) const;  // structural order, for std::set

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Term make(Kind kind, std::string name, std::optional<Term> l,
                   std::optional<Term> r);
  std::shared_ptr<const Node> node_;
};

class Formula {
 public:
  enum class Kind : std::uint8_t {
    Atom, Falsum, Neg, And, Or, Imp,
    Box, Diamond, Cstit, CstitDual, Knows,
    Just, Prove, Proven, Et
  };

  static Formula atom(std::string name);
  static Formula falsum();
  static Formula neg(Formula a);
  static Formula conj(Formula a, Formula b);
  static Formula disj(Formula a, Formula b);
  static Formula imp(Formula a, Formula b);
  static Formula box(Formula a);
  static Formula diamond(Formula a);
  static Formula cstit(std::string agent, Formula a);
  static Formula cstit_dual(std::string agent, Formula a);
  static Formula knows(Formula a);
  static Formula just(Term t, Formula a);
  static Formula prove(std::string agent, Term t, Formula a);
  static Formula proven(Term t, Formula a);
  static Formula et(Term t);

  Kind kind() const;
  const std::string& name() const;   // Atom
  const std::string& agent() const;  // Cstit, CstitDual, Prove
  const Term& term() const;          // Just, Prove, Proven, Et
  const Formula& left() const;       // And, Or, Imp
  const Formula& right() const;      // And, Or, Imp
  const Formula& child() const;      // unary connectives and modal bodies

  std::size_t hash() const;
  bool operator==(const Formula& other) const;
  bool operator!=(const Formula& other) const { return !(*this == other); }
  bool operator<(const Formula& other) const;  // structural order, for std::set

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  static Formula make(Kind kind, std::string name, std::optional<Term> t,
                      std::optional<Formula> l, std::optional<Formula> r);
  std::shared_ptr<const Node> node_;
};

// Finite, ordered, duplicate-free agent community. The given order is
// canonical: the variadic axiom shapes enumerate agents in this order.
class AgentSet {
 public:
  explicit AgentSet(std::vector<std::string> agents);
  const std::vector<std::string>& list() const { return agents_; }
  std::size_t size() const { return agents_.size(); }
  bool contains(std::string_view agent) const;

 private:
  std::vector<std::string> agents_;
};

struct ParseOptions {
  bool allow_et = false;  // the Et atom is an extension, off by default
};

Term parse_term(std::string_view text);
Formula parse_formula(std::string_view text, const AgentSet& agents,
                      const ParseOptions& opts = {});

std::string print_term(const Term& t);
std::string print_formula(const Formula& f);

// All subformulas including f itself, each exactly once, children before
// parents. Terms are not formulas and are not traversed.
std::vector<Formula> subformulas(const Formula& f);

// All subterms including t itself, each exactly once, children before parents.
std::vector<Term> subterms(const Term& t);

// Rewrites Diamond into ~[]~ and the cstit dual into ~[j]~. Idempotent.
Formula normalize(const Formula& f);

std::size_t node_count(const Formula& f);

// Agents/atoms occurring in f, in first-occurrence order.
std::vector<std::string> formula_agents(const Formula& f);
std::vector<std::string> formula_atoms(const Formula& f);

// Lexical class checks for identifiers.
bool is_atom_ident(std::string_view s);   // lowercase, not a TVAR/TCONST/keyword
bool is_term_var_ident(std::string_view s);
bool is_term_const_ident(std::string_view s);

}  // namespace jstit
