#pragma once

// Finite jstit models: raw data, derived structure (histories, undividedness,
// settled-proof aggregates), the line-oriented model file format, and the
// constraint validator.
//
// Histories of a finite tree are in bijection with its maximal moments, so
// every history-indexed component is keyed by the history's leaf moment.
//
// Model file format (one directive per line, '#' starts a comment):
//   agents: j i
//   moments: m-1 m0 mid ma
//   order: m-1<m0 m0<mid m0<ma        # covering pairs, closed on load
//   choice: m0 j : {ma} {mid}         # blocks list leaves; default one block
//   act: m0/mid = x                   # moment/leaf = terms; default empty
//   evidence: * * = ALL               # wildcards; or quoted formulas
//   evidence: m0 x = "p" "q -> p"
//   R: +order m0>ma                   # "+order" adds the closure of <=
//   Re: =R                            # "=R" copies R (unirelational)
//   val: p @ m-1/mid m-1/ma           # or: val: p @ ALL
// Omitted R defaults to "+order", omitted Re to "=R".

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "jstit/syntax.hpp"

namespace jstit {

struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Evidence assigned to one (moment, term) slot: either every formula or a
// finite set. The finite representation of an admissible evidence function
// lists finitely many slots; unlisted compound terms take the value derived
// from their parts by the closure laws, unlisted atomic terms the empty set.
struct EvidenceValue {
  bool everything = false;
  std::set<Formula> formulas;

  static EvidenceValue all() { return EvidenceValue{true, {}}; }
  static EvidenceValue of(std::set<Formula> fs) { return EvidenceValue{false, std::move(fs)}; }
  static EvidenceValue none() { return EvidenceValue{}; }

  bool contains(const Formula& f) const { return everything || formulas.count(f) > 0; }
  bool empty() const { return !everything && formulas.empty(); }
  bool subset_of(const EvidenceValue& other) const;
  EvidenceValue unite(const EvidenceValue& other) const;
  bool operator==(const EvidenceValue& other) const = default;
};

struct EvidenceRule {
  std::optional<std::string> moment;  // nullopt: any moment
  std::optional<Term> term;           // nullopt: any term
  EvidenceValue value;
};

struct ChoiceEntry {
  std::string moment;
  std::string agent;
  std::vector<std::vector<std::string>> blocks;  // leaf ids
};

struct ValuationEntry {
  bool all = false;
  std::set<std::pair<std::string, std::string>> pairs;  // (moment, leaf)
};

// Raw model data, editable; FiniteJstitModel freezes and derives from it.
struct ModelData {
  std::vector<std::string> agents;
  std::vector<std::string> moments;
  std::vector<std::pair<std::string, std::string>> order;  // a <= b pairs
  std::vector<ChoiceEntry> choice;
  std::map<std::pair<std::string, std::string>, std::set<Term>> act;
  std::vector<EvidenceRule> evidence;
  std::set<std::pair<std::string, std::string>> r;    // explicit pairs
  std::set<std::pair<std::string, std::string>> r_e;  // explicit pairs
  std::map<std::string, ValuationEntry> valuation;
};

class FiniteJstitModel {
 public:
  // Freezes the data, closes the order reflexively-transitively, derives
  // histories and choice structure. Throws ModelError on structural problems
  // (unknown identifiers, order cycles, non-partition choice blocks, act or
  // valuation keyed off a (moment, leaf-above-it) pair).
  explicit FiniteJstitModel(ModelData data);

  // load_model: the file format above.
  static FiniteJstitModel parse(std::string_view text);
  std::string to_text() const;

  const ModelData& data() const { return data_; }
  const AgentSet& agents() const { return agents_; }
  const std::vector<std::string>& moments() const { return data_.moments; }
  bool has_moment(std::string_view m) const;

  // Order and epistemic relations, by moment id.
  bool le(const std::string& a, const std::string& b) const;
  bool lt(const std::string& a, const std::string& b) const;
  bool rel_r(const std::string& a, const std::string& b) const;
  bool rel_re(const std::string& a, const std::string& b) const;
  bool unirelational() const;  // R_e == R as stored

  // Histories, identified by their leaf moment.
  const std::vector<std::string>& leaves() const { return leaf_names_; }
  bool is_leaf(const std::string& m) const;
  // The full chain {m' | m' <= leaf}, in temporal order.
  std::vector<std::string> history(const std::string& leaf) const;
  // H_m, as leaf ids.
  std::vector<std::string> histories_through(const std::string& moment) const;
  bool history_through(const std::string& moment, const std::string& leaf) const;

  // h ~ g at m: some strictly later moment lies on both histories.
  bool undivided_at(const std::string& moment, const std::string& leaf_a,
                    const std::string& leaf_b) const;
  // The partition of H_m into undividedness classes (tree-shaped models only).
  std::vector<std::vector<std::string>> undivided_classes(const std::string& moment) const;

  // Choice partition of H_m for an agent; omitted entries default to {H_m}.
  std::vector<std::vector<std::string>> choice_partition(const std::string& moment,
                                                         const std::string& agent) const;
  std::vector<std::string> choice_cell(const std::string& moment, const std::string& agent,
                                       const std::string& leaf) const;

  const std::set<Term>& act(const std::string& moment, const std::string& leaf) const;
  std::set<Term> act_settled(const std::string& moment) const;  // Act_m
  std::set<Term> act_settled_in_cell(const std::string& moment, const std::string& leaf,
                                     const std::string& agent) const;

  // Admissible evidence at (moment, term); see EvidenceValue for the
  // treatment of unlisted terms.
  EvidenceValue evidence_at(const std::string& moment, const Term& t) const;

  // Evidence forced at (moment, t) by the closure laws from the values of
  // t's immediate parts; none() for atomic t.
  EvidenceValue evidence_closure_demand(const std::string& moment, const Term& t) const;

  bool val(const std::string& atom, const std::string& moment, const std::string& leaf) const;

  // False iff some moment has incomparable predecessors; history-dependent
  // queries are only meaningful when this holds.
  bool tree_shaped() const { return tree_ok_; }

 private:
  friend class Evaluator;

  int midx(const std::string& m) const;          // throws on unknown moment
  int leaf_slot(const std::string& leaf) const;  // throws on non-leaf
  bool le_i(int a, int b) const { return le_[static_cast<std::size_t>(a) * n_ + b]; }
  const std::set<Term>& act_i(int m, int slot) const;
  std::set<Term> act_settled_i(int m) const;
  EvidenceValue evidence_i(int m, const Term& t) const;
  EvidenceValue derived_demand_i(int m, const Term& t) const;
  bool val_i(const std::string& atom, int m, int slot) const;
  int cell_index(int m, int agent, int slot) const;

  ModelData data_;
  AgentSet agents_;
  std::size_t n_ = 0;
  std::map<std::string, int> moment_idx_;
  std::vector<char> le_;                      // n*n closure of the order
  std::vector<char> r_, re_;                  // n*n, as stored (not closed)
  std::vector<std::vector<int>> r_succ_, re_succ_;
  bool tree_ok_ = true;
  std::vector<int> leaf_of_slot_;             // slot -> moment index
  std::vector<std::string> leaf_names_;
  std::vector<int> slot_of_moment_;           // moment index -> slot or -1
  std::vector<std::vector<int>> hm_;          // per moment: slots, ascending
  std::vector<std::vector<int>> chain_;       // per slot: moment indices in order
  std::vector<std::vector<int>> children_;    // immediate successors
  // choice partitions by index: [moment][agent] -> blocks of slots
  std::vector<std::vector<std::vector<std::vector<int>>>> choice_;
  std::vector<std::vector<std::map<int, int>>> cell_of_;
  std::map<std::pair<int, int>, std::set<Term>> act_idx_;
  std::vector<std::set<Term>> act_settled_cache_;
};

// -----------------------------------------------------------------------
// Validation

enum class Constraint {
  HistoricalConnection,
  NoBackwardBranching,
  NoChoiceBetweenUndivided,
  IndependenceOfAgents,
  EvidenceMonotonicity,
  EvidenceClosure,
  ActExpansion,
  NoNewProofsGuaranteed,
  NewProofsDivide,
  FutureMatters,
  ActTransparency,
  // structural laws outside the numbered list
  RPreorder,
  RePreorder,
  RWithinRe,
};

std::string_view constraint_name(Constraint c);  // kebab-case slug

struct Violation {
  Constraint constraint;
  std::string where;
  std::string detail;
};

struct ConstraintReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  bool mentions(Constraint c) const;
  std::string to_text() const;
};

// Checks every semantic constraint plus the relational structural laws.
// Evidence monotonicity and closure are checked over the finite universe of
// terms occurring in act sets and evidence slots (closed under subterms): the
// finite data must be consistent with some fully closed evidence function.
// If the order relation is not tree-shaped, only the relational checks run.
ConstraintReport validate(const FiniteJstitModel& model);

// act_aggregates: (Act_m, Act_{(m,h,j)}) for a history h through m.
std::pair<std::set<Term>, std::set<Term>> act_aggregates(const FiniteJstitModel& model,
                                                         const std::string& moment,
                                                         const std::string& leaf,
                                                         const std::string& agent);

class ConstantSpecification;  // proofkit

// True iff every c:A in the specification has A admitted as evidence for c at
// every moment.
bool is_cs_normal(const FiniteJstitModel& model, const ConstantSpecification& cs);

}  // namespace jstit
