#include "jstit/syntax.hpp"

#include <algorithm>
#include <cassert>
#include <set>
#include <sstream>
#include <unordered_set>

namespace jstit {

SyntaxError::SyntaxError(const std::string& msg, int line, int column)
    : std::runtime_error(msg + " (line " + std::to_string(line) + ", column " +
                         std::to_string(column) + ")"),
      line(line),
      column(column) {}

namespace {

std::size_t mix(std::size_t h, std::size_t v) {
  // boost-style combine
  return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
}

std::size_t str_hash(const std::string& s) { return std::hash<std::string>{}(s); }

}  // namespace

// ---------------------------------------------------------------------------
// Term

struct Term::Node {
  Kind kind;
  std::string name;            // Var, Const
  std::optional<Term> left;    // Sum, App
  std::optional<Term> right;   // Sum, App; Check stores its child in `left`
  std::size_t hash;
};

Term Term::var(std::string name) { return make(Kind::Var, std::move(name), {}, {}); }
Term Term::constant(std::string name) { return make(Kind::Const, std::move(name), {}, {}); }
Term Term::sum(Term l, Term r) { return make(Kind::Sum, {}, std::move(l), std::move(r)); }
Term Term::app(Term l, Term r) { return make(Kind::App, {}, std::move(l), std::move(r)); }
Term Term::check(Term inner) { return make(Kind::Check, {}, std::move(inner), {}); }

Term::Kind Term::kind() const { return node_->kind; }
const std::string& Term::name() const { return node_->name; }
const Term& Term::left() const { return *node_->left; }
const Term& Term::right() const { return *node_->right; }
const Term& Term::inner() const { return *node_->left; }
std::size_t Term::hash() const { return node_->hash; }

bool Term::operator==(const Term& other) const {
  if (node_ == other.node_) return true;
  if (node_->hash != other.node_->hash || node_->kind != other.node_->kind) return false;
  switch (node_->kind) {
    case Kind::Var:
    case Kind::Const:
      return node_->name == other.node_->name;
    case Kind::Check:
      return inner() == other.inner();
    case Kind::Sum:
    case Kind::App:
      return left() == other.left() && right() == other.right();
  }
  return false;
}

bool Term::operator<(const Term& other) const {
  if (node_ == other.node_) return false;
  if (node_->kind != other.node_->kind) return node_->kind < other.node_->kind;
  switch (node_->kind) {
    case Kind::Var:
    case Kind::Const:
      return node_->name < other.node_->name;
    case Kind::Check:
      return inner() < other.inner();
    case Kind::Sum:
    case Kind::App:
      if (left() < other.left()) return true;
      if (other.left() < left()) return false;
      return right() < other.right();
  }
  return false;
}

Term Term::make(Kind kind, std::string name, std::optional<Term> l,
                std::optional<Term> r) {
  auto node = std::make_shared<Node>();
  node->kind = kind;
  node->name = std::move(name);
  node->left = std::move(l);
  node->right = std::move(r);
  std::size_t h = mix(0x7e3a, static_cast<std::size_t>(kind));
  h = mix(h, str_hash(node->name));
  if (node->left) h = mix(h, node->left->hash());
  if (node->right) h = mix(h, node->right->hash());
  node->hash = h;
  return Term(std::move(node));
}

// ---------------------------------------------------------------------------
// Formula

struct Formula::Node {
  Kind kind;
  std::string name;              // Atom name or agent
  std::optional<Term> term;      // Just, Prove, Proven, Et
  std::optional<Formula> left;   // binary left / unary child / modal body
  std::optional<Formula> right;  // binary right
  std::size_t hash;
};

Formula Formula::make(Kind kind, std::string name, std::optional<Term> t,
                      std::optional<Formula> l, std::optional<Formula> r) {
  auto node = std::make_shared<Node>();
  node->kind = kind;
  node->name = std::move(name);
  node->term = std::move(t);
  node->left = std::move(l);
  node->right = std::move(r);
  std::size_t h = mix(0x51f0, static_cast<std::size_t>(kind));
  h = mix(h, str_hash(node->name));
  if (node->term) h = mix(h, node->term->hash());
  if (node->left) h = mix(h, node->left->hash());
  if (node->right) h = mix(h, node->right->hash());
  node->hash = h;
  return Formula(std::move(node));
}

Formula Formula::atom(std::string name) { return make(Kind::Atom, std::move(name), {}, {}, {}); }
Formula Formula::falsum() { return make(Kind::Falsum, {}, {}, {}, {}); }
Formula Formula::neg(Formula a) { return make(Kind::Neg, {}, {}, std::move(a), {}); }
Formula Formula::conj(Formula a, Formula b) { return make(Kind::And, {}, {}, std::move(a), std::move(b)); }
Formula Formula::disj(Formula a, Formula b) { return make(Kind::Or, {}, {}, std::move(a), std::move(b)); }
Formula Formula::imp(Formula a, Formula b) { return make(Kind::Imp, {}, {}, std::move(a), std::move(b)); }
Formula Formula::box(Formula a) { return make(Kind::Box, {}, {}, std::move(a), {}); }
Formula Formula::diamond(Formula a) { return make(Kind::Diamond, {}, {}, std::move(a), {}); }
Formula Formula::cstit(std::string agent, Formula a) { return make(Kind::Cstit, std::move(agent), {}, std::move(a), {}); }
Formula Formula::cstit_dual(std::string agent, Formula a) { return make(Kind::CstitDual, std::move(agent), {}, std::move(a), {}); }
Formula Formula::knows(Formula a) { return make(Kind::Knows, {}, {}, std::move(a), {}); }
Formula Formula::just(Term t, Formula a) { return make(Kind::Just, {}, std::move(t), std::move(a), {}); }
Formula Formula::prove(std::string agent, Term t, Formula a) { return make(Kind::Prove, std::move(agent), std::move(t), std::move(a), {}); }
Formula Formula::proven(Term t, Formula a) { return make(Kind::Proven, {}, std::move(t), std::move(a), {}); }
Formula Formula::et(Term t) { return make(Kind::Et, {}, std::move(t), {}, {}); }

Formula::Kind Formula::kind() const { return node_->kind; }
const std::string& Formula::name() const { return node_->name; }
const std::string& Formula::agent() const { return node_->name; }
const Term& Formula::term() const { return *node_->term; }
const Formula& Formula::left() const { return *node_->left; }
const Formula& Formula::right() const { return *node_->right; }
const Formula& Formula::child() const { return *node_->left; }
std::size_t Formula::hash() const { return node_->hash; }

bool Formula::operator==(const Formula& other) const {
  if (node_ == other.node_) return true;
  if (node_->hash != other.node_->hash || node_->kind != other.node_->kind) return false;
  if (node_->name != other.node_->name) return false;
  if (node_->term.has_value() != other.node_->term.has_value()) return false;
  if (node_->term && !(*node_->term == *other.node_->term)) return false;
  if (node_->left.has_value() != other.node_->left.has_value()) return false;
  if (node_->left && !(*node_->left == *other.node_->left)) return false;
  if (node_->right.has_value() != other.node_->right.has_value()) return false;
  if (node_->right && !(*node_->right == *other.node_->right)) return false;
  return true;
}

bool Formula::operator<(const Formula& other) const {
  if (node_ == other.node_) return false;
  if (node_->kind != other.node_->kind) return node_->kind < other.node_->kind;
  if (node_->name != other.node_->name) return node_->name < other.node_->name;
  if (node_->term.has_value() != other.node_->term.has_value())
    return !node_->term.has_value();
  if (node_->term) {
    if (*node_->term < *other.node_->term) return true;
    if (*other.node_->term < *node_->term) return false;
  }
  auto cmp_child = [](const std::optional<Formula>& a, const std::optional<Formula>& b,
                      int& out) {
    if (a.has_value() != b.has_value()) { out = a.has_value() ? 1 : -1; return; }
    if (!a) { out = 0; return; }
    if (*a < *b) { out = -1; return; }
    if (*b < *a) { out = 1; return; }
    out = 0;
  };
  int c = 0;
  cmp_child(node_->left, other.node_->left, c);
  if (c != 0) return c < 0;
  cmp_child(node_->right, other.node_->right, c);
  return c < 0;
}

// ---------------------------------------------------------------------------
// AgentSet

AgentSet::AgentSet(std::vector<std::string> agents) : agents_(std::move(agents)) {
  if (agents_.empty()) throw std::invalid_argument("agent set must be non-empty");
  std::set<std::string> seen;
  for (const auto& a : agents_) {
    if (!is_atom_ident(a))
      throw std::invalid_argument("bad agent identifier: '" + a + "'");
    if (!seen.insert(a).second)
      throw std::invalid_argument("duplicate agent: '" + a + "'");
  }
}

bool AgentSet::contains(std::string_view agent) const {
  return std::find(agents_.begin(), agents_.end(), agent) != agents_.end();
}

// ---------------------------------------------------------------------------
// Lexer

namespace {

bool lower_word_start(char c) { return c >= 'a' && c <= 'z'; }
bool word_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
}

}  // namespace

bool is_term_var_ident(std::string_view s) {
  if (s.empty() || !lower_word_start(s[0])) return false;
  if (s[0] != 's' && s[0] != 't' && s[0] != 'x' && s[0] != 'y' && s[0] != 'z') return false;
  return std::all_of(s.begin(), s.end(), word_char);
}

bool is_term_const_ident(std::string_view s) {
  if (s.empty() || (s[0] != 'c' && s[0] != 'd')) return false;
  return std::all_of(s.begin(), s.end(), word_char);
}

bool is_atom_ident(std::string_view s) {
  if (s.empty() || !lower_word_start(s[0])) return false;
  if (!std::all_of(s.begin(), s.end(), word_char)) return false;
  if (is_term_var_ident(s) || is_term_const_ident(s)) return false;
  return s != "false";
}

namespace {

enum class Tok : std::uint8_t {
  Ident, TVar, TConst, False, K, E, Prove, Proven,
  Arrow, Amp, Pipe, Tilde, Bang, Plus, Star, Colon, Comma,
  LParen, RParen, Box, LBrack, RBrack, Diamond, LAngle, RAngle, End
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int column;
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto push = [&](Tok k, std::string text, int l, int c) {
    out.push_back(Token{k, std::move(text), l, c});
  };
  while (i < src.size()) {
    char c = src[i];
    int tl = line, tc = col;
    auto advance = [&](std::size_t n) {
      for (std::size_t k = 0; k < n; ++k) {
        if (src[i + k] == '\n') { ++line; col = 1; } else { ++col; }
      }
      i += n;
    };
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') { advance(1); continue; }
    switch (c) {
      case '&': push(Tok::Amp, "&", tl, tc); advance(1); continue;
      case '|': push(Tok::Pipe, "|", tl, tc); advance(1); continue;
      case '~': push(Tok::Tilde, "~", tl, tc); advance(1); continue;
      case '!': push(Tok::Bang, "!", tl, tc); advance(1); continue;
      case '+': push(Tok::Plus, "+", tl, tc); advance(1); continue;
      case '*': push(Tok::Star, "*", tl, tc); advance(1); continue;
      case ':': push(Tok::Colon, ":", tl, tc); advance(1); continue;
      case ',': push(Tok::Comma, ",", tl, tc); advance(1); continue;
      case '(': push(Tok::LParen, "(", tl, tc); advance(1); continue;
      case ')': push(Tok::RParen, ")", tl, tc); advance(1); continue;
      case ']': push(Tok::RBrack, "]", tl, tc); advance(1); continue;
      case '>': push(Tok::RAngle, ">", tl, tc); advance(1); continue;
      default: break;
    }
    if (c == '-') {
      if (i + 1 < src.size() && src[i + 1] == '>') { push(Tok::Arrow, "->", tl, tc); advance(2); continue; }
      throw SyntaxError("unknown lexeme '-'", tl, tc);
    }
    if (c == '[') {
      if (i + 1 < src.size() && src[i + 1] == ']') { push(Tok::Box, "[]", tl, tc); advance(2); continue; }
      push(Tok::LBrack, "[", tl, tc); advance(1); continue;
    }
    if (c == '<') {
      if (i + 1 < src.size() && src[i + 1] == '>') { push(Tok::Diamond, "<>", tl, tc); advance(2); continue; }
      push(Tok::LAngle, "<", tl, tc); advance(1); continue;
    }
    if (lower_word_start(c)) {
      std::size_t j = i;
      while (j < src.size() && word_char(src[j])) ++j;
      std::string word(src.substr(i, j - i));
      Tok k = Tok::Ident;
      if (word == "false") k = Tok::False;
      else if (is_term_var_ident(word)) k = Tok::TVar;
      else if (is_term_const_ident(word)) k = Tok::TConst;
      push(k, std::move(word), tl, tc);
      advance(j - i);
      continue;
    }
    if (c >= 'A' && c <= 'Z') {
      // Uppercase keywords, longest match first; they glue to their operand,
      // e.g. "Kp" and "Ex".
      auto starts = [&](std::string_view kw) {
        return src.substr(i, kw.size()) == kw;
      };
      if (starts("Proven")) { push(Tok::Proven, "Proven", tl, tc); advance(6); continue; }
      if (starts("Prove")) { push(Tok::Prove, "Prove", tl, tc); advance(5); continue; }
      if (starts("K")) { push(Tok::K, "K", tl, tc); advance(1); continue; }
      if (starts("E")) { push(Tok::E, "E", tl, tc); advance(1); continue; }
      throw SyntaxError(std::string("unknown lexeme '") + c + "'", tl, tc);
    }
    throw SyntaxError(std::string("unknown lexeme '") + c + "'", tl, tc);
  }
  push(Tok::End, "", line, col);
  return out;
}

// ---------------------------------------------------------------------------
// Parser

class Parser {
 public:
  Parser(std::string_view src, const AgentSet* agents, ParseOptions opts)
      : tokens_(lex(src)), agents_(agents), opts_(opts) {}

  Formula formula_all() {
    Formula f = formula();
    expect_end();
    return f;
  }

  Term term_all() {
    Term t = term();
    expect_end();
    return t;
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const AgentSet* agents_;
  ParseOptions opts_;

  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_++]; }
  bool at(Tok k) const { return peek().kind == k; }
  bool eat(Tok k) {
    if (at(k)) { ++pos_; return true; }
    return false;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw SyntaxError(msg, peek().line, peek().column);
  }
  void expect(Tok k, const char* what) {
    if (!eat(k)) fail(std::string("expected ") + what);
  }
  void expect_end() {
    if (!at(Tok::End)) fail("unexpected trailing input");
  }

  std::string agent_name() {
    if (!at(Tok::Ident)) fail("expected agent identifier");
    std::string name = next().text;
    if (agents_ && !agents_->contains(name)) {
      --pos_;
      fail("agent '" + name + "' not in agent set");
    }
    return name;
  }

  Formula formula() {  // imp level, right-associative
    Formula a = or_level();
    if (eat(Tok::Arrow)) return Formula::imp(std::move(a), formula());
    return a;
  }

  Formula or_level() {
    std::vector<Formula> parts;
    parts.push_back(and_level());
    while (eat(Tok::Pipe)) parts.push_back(and_level());
    Formula f = parts.back();
    for (std::size_t i = parts.size() - 1; i-- > 0;) f = Formula::disj(parts[i], f);
    return f;
  }

  Formula and_level() {
    std::vector<Formula> parts;
    parts.push_back(unary());
    while (eat(Tok::Amp)) parts.push_back(unary());
    Formula f = parts.back();
    for (std::size_t i = parts.size() - 1; i-- > 0;) f = Formula::conj(parts[i], f);
    return f;
  }

  Formula unary() {
    switch (peek().kind) {
      case Tok::Tilde: next(); return Formula::neg(unary());
      case Tok::Box: next(); return Formula::box(unary());
      case Tok::Diamond: next(); return Formula::diamond(unary());
      case Tok::K: next(); return Formula::knows(unary());
      case Tok::LBrack: {
        next();
        std::string ag = agent_name();
        expect(Tok::RBrack, "']'");
        return Formula::cstit(std::move(ag), unary());
      }
      case Tok::LAngle: {
        next();
        std::string ag = agent_name();
        expect(Tok::RAngle, "'>'");
        return Formula::cstit_dual(std::move(ag), unary());
      }
      case Tok::TVar:
      case Tok::TConst:
      case Tok::Bang: {
        Term t = term();
        expect(Tok::Colon, "':'");
        return Formula::just(std::move(t), unary());
      }
      case Tok::LParen: {
        // Ambiguous: "(term):A" vs a parenthesized formula. Try the term
        // reading first and fall back on failure.
        std::size_t save = pos_;
        try {
          Term t = term();
          if (eat(Tok::Colon)) return Formula::just(std::move(t), unary());
        } catch (const SyntaxError&) {
        }
        pos_ = save;
        return atom_level();
      }
      default:
        return atom_level();
    }
  }

  Formula atom_level() {
    switch (peek().kind) {
      case Tok::Ident: return Formula::atom(next().text);
      case Tok::False: next(); return Formula::falsum();
      case Tok::LParen: {
        next();
        Formula f = formula();
        expect(Tok::RParen, "')'");
        return f;
      }
      case Tok::Prove: {
        next();
        expect(Tok::LParen, "'('");
        std::string ag = agent_name();
        expect(Tok::Comma, "','");
        Term t = term();
        expect(Tok::Comma, "','");
        Formula a = formula();
        expect(Tok::RParen, "')'");
        return Formula::prove(std::move(ag), std::move(t), std::move(a));
      }
      case Tok::Proven: {
        next();
        expect(Tok::LParen, "'('");
        Term t = term();
        expect(Tok::Comma, "','");
        Formula a = formula();
        expect(Tok::RParen, "')'");
        return Formula::proven(std::move(t), std::move(a));
      }
      case Tok::E: {
        const Token& tok = next();
        if (!opts_.allow_et)
          throw SyntaxError("Et atom is disabled (extension flag off)", tok.line, tok.column);
        return Formula::et(term());
      }
      default:
        fail("expected formula");
    }
  }

  Term term() {  // sum level, left-associative
    Term a = app_level();
    while (eat(Tok::Plus)) a = Term::sum(std::move(a), app_level());
    return a;
  }

  Term app_level() {
    Term a = bang_level();
    while (eat(Tok::Star)) a = Term::app(std::move(a), bang_level());
    return a;
  }

  Term bang_level() {
    switch (peek().kind) {
      case Tok::Bang: next(); return Term::check(bang_level());
      case Tok::TVar: return Term::var(next().text);
      case Tok::TConst: return Term::constant(next().text);
      case Tok::LParen: {
        next();
        Term t = term();
        expect(Tok::RParen, "')'");
        return t;
      }
      default:
        fail("expected proof polynomial");
    }
  }
};

}  // namespace

Term parse_term(std::string_view text) {
  return Parser(text, nullptr, {}).term_all();
}

Formula parse_formula(std::string_view text, const AgentSet& agents,
                      const ParseOptions& opts) {
  return Parser(text, &agents, opts).formula_all();
}

// ---------------------------------------------------------------------------
// Printer

namespace {

// Term precedence: sum 0 < app 1 < check 2 < leaf 3.
void print_term_rec(const Term& t, int min_level, std::string& out) {
  switch (t.kind()) {
    case Term::Kind::Var:
    case Term::Kind::Const:
      out += t.name();
      return;
    case Term::Kind::Check:
      if (min_level > 2) { out += "(!"; print_term_rec(t.inner(), 2, out); out += ')'; }
      else { out += '!'; print_term_rec(t.inner(), 2, out); }
      return;
    case Term::Kind::App: {
      bool paren = min_level > 1;
      if (paren) out += '(';
      print_term_rec(t.left(), 1, out);
      out += '*';
      print_term_rec(t.right(), 2, out);
      if (paren) out += ')';
      return;
    }
    case Term::Kind::Sum: {
      bool paren = min_level > 0;
      if (paren) out += '(';
      print_term_rec(t.left(), 0, out);
      out += " + ";
      print_term_rec(t.right(), 1, out);
      if (paren) out += ')';
      return;
    }
  }
}

// Formula precedence: imp 0 < or 1 < and 2 < unary 3 < atom 4.
void print_formula_rec(const Formula& f, int min_level, std::string& out) {
  auto wrap = [&](int level, auto&& body) {
    bool paren = level < min_level;
    if (paren) out += '(';
    body();
    if (paren) out += ')';
  };
  switch (f.kind()) {
    case Formula::Kind::Atom: out += f.name(); return;
    case Formula::Kind::Falsum: out += "false"; return;
    case Formula::Kind::Neg:
      wrap(3, [&] { out += '~'; print_formula_rec(f.child(), 3, out); });
      return;
    case Formula::Kind::Box:
      wrap(3, [&] { out += "[]"; print_formula_rec(f.child(), 3, out); });
      return;
    case Formula::Kind::Diamond:
      wrap(3, [&] { out += "<>"; print_formula_rec(f.child(), 3, out); });
      return;
    case Formula::Kind::Cstit:
      wrap(3, [&] {
        out += '[';
        out += f.agent();
        out += ']';
        print_formula_rec(f.child(), 3, out);
      });
      return;
    case Formula::Kind::CstitDual:
      wrap(3, [&] {
        out += '<';
        out += f.agent();
        out += '>';
        print_formula_rec(f.child(), 3, out);
      });
      return;
    case Formula::Kind::Knows:
      wrap(3, [&] { out += 'K'; print_formula_rec(f.child(), 3, out); });
      return;
    case Formula::Kind::Just:
      // Terms are self-delimiting before ':', so only a spaced sum gets
      // parentheses, for the reader rather than the grammar.
      wrap(3, [&] {
        print_term_rec(f.term(), 1, out);
        out += ':';
        print_formula_rec(f.child(), 3, out);
      });
      return;
    case Formula::Kind::Et:
      wrap(3, [&] {
        out += 'E';
        print_term_rec(f.term(), 0, out);
      });
      return;
    case Formula::Kind::Prove:
      out += "Prove(";
      out += f.agent();
      out += ',';
      print_term_rec(f.term(), 0, out);
      out += ',';
      print_formula_rec(f.child(), 0, out);
      out += ')';
      return;
    case Formula::Kind::Proven:
      out += "Proven(";
      print_term_rec(f.term(), 0, out);
      out += ',';
      print_formula_rec(f.child(), 0, out);
      out += ')';
      return;
    case Formula::Kind::And:
      wrap(2, [&] {
        print_formula_rec(f.left(), 3, out);
        out += " & ";
        print_formula_rec(f.right(), 2, out);
      });
      return;
    case Formula::Kind::Or:
      wrap(1, [&] {
        print_formula_rec(f.left(), 2, out);
        out += " | ";
        print_formula_rec(f.right(), 1, out);
      });
      return;
    case Formula::Kind::Imp:
      wrap(0, [&] {
        print_formula_rec(f.left(), 1, out);
        out += " -> ";
        print_formula_rec(f.right(), 0, out);
      });
      return;
  }
}

}  // namespace

std::string print_term(const Term& t) {
  std::string out;
  print_term_rec(t, 0, out);
  return out;
}

std::string print_formula(const Formula& f) {
  std::string out;
  print_formula_rec(f, 0, out);
  return out;
}

// ---------------------------------------------------------------------------
// Structural utilities

namespace {

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};
struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

void collect_subformulas(const Formula& f,
                         std::unordered_set<Formula, FormulaHash>& seen,
                         std::vector<Formula>& out) {
  if (seen.count(f)) return;
  switch (f.kind()) {
    case Formula::Kind::Atom:
    case Formula::Kind::Falsum:
    case Formula::Kind::Et:
      break;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Imp:
      collect_subformulas(f.left(), seen, out);
      collect_subformulas(f.right(), seen, out);
      break;
    default:
      collect_subformulas(f.child(), seen, out);
      break;
  }
  if (seen.insert(f).second) out.push_back(f);
}

void collect_subterms(const Term& t, std::unordered_set<Term, TermHash>& seen,
                      std::vector<Term>& out) {
  if (seen.count(t)) return;
  switch (t.kind()) {
    case Term::Kind::Var:
    case Term::Kind::Const:
      break;
    case Term::Kind::Check:
      collect_subterms(t.inner(), seen, out);
      break;
    case Term::Kind::Sum:
    case Term::Kind::App:
      collect_subterms(t.left(), seen, out);
      collect_subterms(t.right(), seen, out);
      break;
  }
  if (seen.insert(t).second) out.push_back(t);
}

}  // namespace

std::vector<Formula> subformulas(const Formula& f) {
  std::unordered_set<Formula, FormulaHash> seen;
  std::vector<Formula> out;
  collect_subformulas(f, seen, out);
  return out;
}

std::vector<Term> subterms(const Term& t) {
  std::unordered_set<Term, TermHash> seen;
  std::vector<Term> out;
  collect_subterms(t, seen, out);
  return out;
}

Formula normalize(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
    case Formula::Kind::Falsum:
    case Formula::Kind::Et:
      return f;
    case Formula::Kind::Neg: return Formula::neg(normalize(f.child()));
    case Formula::Kind::And: return Formula::conj(normalize(f.left()), normalize(f.right()));
    case Formula::Kind::Or: return Formula::disj(normalize(f.left()), normalize(f.right()));
    case Formula::Kind::Imp: return Formula::imp(normalize(f.left()), normalize(f.right()));
    case Formula::Kind::Box: return Formula::box(normalize(f.child()));
    case Formula::Kind::Diamond:
      return Formula::neg(Formula::box(Formula::neg(normalize(f.child()))));
    case Formula::Kind::Cstit: return Formula::cstit(f.agent(), normalize(f.child()));
    case Formula::Kind::CstitDual:
      return Formula::neg(Formula::cstit(f.agent(), Formula::neg(normalize(f.child()))));
    case Formula::Kind::Knows: return Formula::knows(normalize(f.child()));
    case Formula::Kind::Just: return Formula::just(f.term(), normalize(f.child()));
    case Formula::Kind::Prove: return Formula::prove(f.agent(), f.term(), normalize(f.child()));
    case Formula::Kind::Proven: return Formula::proven(f.term(), normalize(f.child()));
  }
  return f;
}

std::size_t node_count(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
    case Formula::Kind::Falsum:
    case Formula::Kind::Et:
      return 1;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Imp:
      return 1 + node_count(f.left()) + node_count(f.right());
    default:
      return 1 + node_count(f.child());
  }
}

namespace {

template <typename Pick>
void collect_names(const Formula& f, Pick pick, std::vector<std::string>& out) {
  pick(f, out);
  switch (f.kind()) {
    case Formula::Kind::Atom:
    case Formula::Kind::Falsum:
    case Formula::Kind::Et:
      break;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Imp:
      collect_names(f.left(), pick, out);
      collect_names(f.right(), pick, out);
      break;
    default:
      collect_names(f.child(), pick, out);
      break;
  }
}

void push_unique(std::vector<std::string>& out, const std::string& s) {
  if (std::find(out.begin(), out.end(), s) == out.end()) out.push_back(s);
}

}  // namespace

std::vector<std::string> formula_agents(const Formula& f) {
  std::vector<std::string> out;
  collect_names(
      f,
      [](const Formula& g, std::vector<std::string>& acc) {
        switch (g.kind()) {
          case Formula::Kind::Cstit:
          case Formula::Kind::CstitDual:
          case Formula::Kind::Prove:
            push_unique(acc, g.agent());
            break;
          default:
            break;
        }
      },
      out);
  return out;
}

std::vector<std::string> formula_atoms(const Formula& f) {
  std::vector<std::string> out;
  collect_names(
      f,
      [](const Formula& g, std::vector<std::string>& acc) {
        if (g.kind() == Formula::Kind::Atom) push_unique(acc, g.name());
      },
      out);
  return out;
}

}  // namespace jstit
