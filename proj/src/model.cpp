#include "jstit/model.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace jstit {

// ---------------------------------------------------------------------------
// EvidenceValue

bool EvidenceValue::subset_of(const EvidenceValue& other) const {
  if (other.everything) return true;
  if (everything) return false;
  return std::includes(other.formulas.begin(), other.formulas.end(),
                       formulas.begin(), formulas.end());
}

EvidenceValue EvidenceValue::unite(const EvidenceValue& other) const {
  if (everything || other.everything) return all();
  std::set<Formula> out = formulas;
  out.insert(other.formulas.begin(), other.formulas.end());
  return of(std::move(out));
}

namespace {

bool valid_moment_token(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
              (c >= '0' && c <= '9') || c == '_' || c == '-' || c == '.' || c == '+';
    if (!ok) return false;
  }
  return true;
}

std::string terms_text(const std::set<Term>& ts) {
  std::string out = "{";
  bool first = true;
  for (const auto& t : ts) {
    if (!first) out += ", ";
    out += print_term(t);
    first = false;
  }
  return out + "}";
}

}  // namespace

// ---------------------------------------------------------------------------
// FiniteJstitModel construction

FiniteJstitModel::FiniteJstitModel(ModelData data)
    : data_(std::move(data)), agents_(data_.agents) {
  n_ = data_.moments.size();
  if (n_ == 0) throw ModelError("model must have at least one moment");
  for (std::size_t i = 0; i < n_; ++i) {
    const std::string& m = data_.moments[i];
    if (!valid_moment_token(m)) throw ModelError("bad moment identifier: '" + m + "'");
    if (!moment_idx_.emplace(m, static_cast<int>(i)).second)
      throw ModelError("duplicate moment: '" + m + "'");
  }

  auto resolve = [&](const std::string& m) {
    auto it = moment_idx_.find(m);
    if (it == moment_idx_.end()) throw ModelError("unknown moment: '" + m + "'");
    return it->second;
  };

  // Reflexive-transitive closure of the order pairs.
  le_.assign(n_ * n_, 0);
  for (std::size_t i = 0; i < n_; ++i) le_[i * n_ + i] = 1;
  for (const auto& [a, b] : data_.order)
    le_[static_cast<std::size_t>(resolve(a)) * n_ + static_cast<std::size_t>(resolve(b))] = 1;
  for (std::size_t k = 0; k < n_; ++k)
    for (std::size_t i = 0; i < n_; ++i)
      if (le_[i * n_ + k])
        for (std::size_t j = 0; j < n_; ++j)
          if (le_[k * n_ + j]) le_[i * n_ + j] = 1;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      if (le_[i * n_ + j] && le_[j * n_ + i])
        throw ModelError("order has a cycle through '" + data_.moments[i] + "' and '" +
                         data_.moments[j] + "'");

  r_.assign(n_ * n_, 0);
  re_.assign(n_ * n_, 0);
  for (const auto& [a, b] : data_.r)
    r_[static_cast<std::size_t>(resolve(a)) * n_ + static_cast<std::size_t>(resolve(b))] = 1;
  for (const auto& [a, b] : data_.r_e)
    re_[static_cast<std::size_t>(resolve(a)) * n_ + static_cast<std::size_t>(resolve(b))] = 1;
  r_succ_.assign(n_, {});
  re_succ_.assign(n_, {});
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) {
      if (r_[i * n_ + j]) r_succ_[i].push_back(static_cast<int>(j));
      if (re_[i * n_ + j]) re_succ_[i].push_back(static_cast<int>(j));
    }

  // Leaves and histories.
  slot_of_moment_.assign(n_, -1);
  for (std::size_t i = 0; i < n_; ++i) {
    bool maximal = true;
    for (std::size_t j = 0; j < n_ && maximal; ++j)
      if (j != i && le_[i * n_ + j]) maximal = false;
    if (maximal) {
      slot_of_moment_[i] = static_cast<int>(leaf_of_slot_.size());
      leaf_of_slot_.push_back(static_cast<int>(i));
      leaf_names_.push_back(data_.moments[i]);
    }
  }

  hm_.assign(n_, {});
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t s = 0; s < leaf_of_slot_.size(); ++s)
      if (le_[i * n_ + static_cast<std::size_t>(leaf_of_slot_[s])])
        hm_[i].push_back(static_cast<int>(s));

  // No backward branching <=> every downset is a chain.
  tree_ok_ = true;
  for (std::size_t m = 0; m < n_ && tree_ok_; ++m)
    for (std::size_t a = 0; a < n_ && tree_ok_; ++a)
      for (std::size_t b = a + 1; b < n_ && tree_ok_; ++b)
        if (le_[a * n_ + m] && le_[b * n_ + m] && !le_[a * n_ + b] && !le_[b * n_ + a])
          tree_ok_ = false;

  chain_.assign(leaf_of_slot_.size(), {});
  for (std::size_t s = 0; s < leaf_of_slot_.size(); ++s) {
    std::size_t l = static_cast<std::size_t>(leaf_of_slot_[s]);
    for (std::size_t i = 0; i < n_; ++i)
      if (le_[i * n_ + l]) chain_[s].push_back(static_cast<int>(i));
    std::sort(chain_[s].begin(), chain_[s].end(), [&](int a, int b) {
      std::size_t da = 0, db = 0;
      for (std::size_t i = 0; i < n_; ++i) {
        if (le_[i * n_ + static_cast<std::size_t>(a)]) ++da;
        if (le_[i * n_ + static_cast<std::size_t>(b)]) ++db;
      }
      if (da != db) return da < db;
      return a < b;
    });
  }

  children_.assign(n_, {});
  for (std::size_t a = 0; a < n_; ++a)
    for (std::size_t b = 0; b < n_; ++b) {
      if (a == b || !le_[a * n_ + b]) continue;
      bool immediate = true;
      for (std::size_t k = 0; k < n_ && immediate; ++k)
        if (k != a && k != b && le_[a * n_ + k] && le_[k * n_ + b]) immediate = false;
      if (immediate) children_[a].push_back(static_cast<int>(b));
    }

  // Choice: default is the one-block partition of H_m.
  choice_.assign(n_, {});
  cell_of_.assign(n_, {});
  for (std::size_t m = 0; m < n_; ++m) {
    choice_[m].assign(agents_.size(), {});
    cell_of_[m].assign(agents_.size(), {});
    for (std::size_t j = 0; j < agents_.size(); ++j) {
      if (!hm_[m].empty()) choice_[m][j].push_back(hm_[m]);
      for (int s : hm_[m]) cell_of_[m][j][s] = 0;
    }
  }
  std::set<std::pair<int, int>> choice_seen;
  for (const auto& entry : data_.choice) {
    int m = resolve(entry.moment);
    auto ait = std::find(agents_.list().begin(), agents_.list().end(), entry.agent);
    if (ait == agents_.list().end())
      throw ModelError("choice entry for unknown agent: '" + entry.agent + "'");
    int j = static_cast<int>(ait - agents_.list().begin());
    if (!choice_seen.insert({m, j}).second)
      throw ModelError("duplicate choice entry for (" + entry.moment + ", " + entry.agent + ")");
    std::vector<std::vector<int>> blocks;
    std::set<int> used;
    for (const auto& block : entry.blocks) {
      if (block.empty()) throw ModelError("empty choice block at " + entry.moment);
      std::vector<int> slots;
      for (const auto& leaf : block) {
        int li = resolve(leaf);
        int s = slot_of_moment_[static_cast<std::size_t>(li)];
        if (s < 0) throw ModelError("choice block member '" + leaf + "' is not a leaf");
        if (!le_[static_cast<std::size_t>(m) * n_ + static_cast<std::size_t>(li)])
          throw ModelError("choice block member '" + leaf + "' is not a history through " +
                           entry.moment);
        if (!used.insert(s).second)
          throw ModelError("choice blocks overlap on '" + leaf + "' at " + entry.moment);
        slots.push_back(s);
      }
      std::sort(slots.begin(), slots.end());
      blocks.push_back(std::move(slots));
    }
    if (used.size() != hm_[static_cast<std::size_t>(m)].size())
      throw ModelError("choice blocks do not cover all histories through " + entry.moment);
    choice_[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)] = blocks;
    auto& cells = cell_of_[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)];
    cells.clear();
    for (std::size_t b = 0; b < blocks.size(); ++b)
      for (int s : blocks[b]) cells[s] = static_cast<int>(b);
  }

  // Act.
  for (const auto& [key, terms] : data_.act) {
    int m = resolve(key.first);
    int li = resolve(key.second);
    int s = slot_of_moment_[static_cast<std::size_t>(li)];
    if (s < 0) throw ModelError("act keyed on non-leaf '" + key.second + "'");
    if (!le_[static_cast<std::size_t>(m) * n_ + static_cast<std::size_t>(li)])
      throw ModelError("act key " + key.first + "/" + key.second +
                       ": history does not pass through the moment");
    act_idx_[{m, s}] = terms;
  }
  act_settled_cache_.assign(n_, {});
  for (std::size_t m = 0; m < n_; ++m) {
    bool first = true;
    std::set<Term> acc;
    for (int s : hm_[m]) {
      const std::set<Term>& a = act_i(static_cast<int>(m), s);
      if (first) {
        acc = a;
        first = false;
      } else {
        std::set<Term> inter;
        std::set_intersection(acc.begin(), acc.end(), a.begin(), a.end(),
                              std::inserter(inter, inter.begin()));
        acc = std::move(inter);
      }
      if (acc.empty()) break;
    }
    act_settled_cache_[m] = std::move(acc);
  }

  // Evidence rule moments must resolve.
  for (const auto& rule : data_.evidence)
    if (rule.moment) resolve(*rule.moment);

  // Valuation.
  for (const auto& [atom, entry] : data_.valuation) {
    if (!is_atom_ident(atom)) throw ModelError("bad valuation atom: '" + atom + "'");
    for (const auto& [m, leaf] : entry.pairs) {
      int mi = resolve(m);
      int li = resolve(leaf);
      if (slot_of_moment_[static_cast<std::size_t>(li)] < 0)
        throw ModelError("valuation pair " + m + "/" + leaf + ": '" + leaf + "' is not a leaf");
      if (!le_[static_cast<std::size_t>(mi) * n_ + static_cast<std::size_t>(li)])
        throw ModelError("valuation pair " + m + "/" + leaf +
                         ": history does not pass through the moment");
    }
  }
}

// ---------------------------------------------------------------------------
// Accessors

int FiniteJstitModel::midx(const std::string& m) const {
  auto it = moment_idx_.find(m);
  if (it == moment_idx_.end()) throw ModelError("unknown moment: '" + m + "'");
  return it->second;
}

int FiniteJstitModel::leaf_slot(const std::string& leaf) const {
  int s = slot_of_moment_[static_cast<std::size_t>(midx(leaf))];
  if (s < 0) throw ModelError("'" + leaf + "' is not a leaf");
  return s;
}

bool FiniteJstitModel::has_moment(std::string_view m) const {
  return moment_idx_.count(std::string(m)) > 0;
}

bool FiniteJstitModel::le(const std::string& a, const std::string& b) const {
  return le_i(midx(a), midx(b));
}

bool FiniteJstitModel::lt(const std::string& a, const std::string& b) const {
  return a != b && le(a, b);
}

bool FiniteJstitModel::rel_r(const std::string& a, const std::string& b) const {
  return r_[static_cast<std::size_t>(midx(a)) * n_ + static_cast<std::size_t>(midx(b))];
}

bool FiniteJstitModel::rel_re(const std::string& a, const std::string& b) const {
  return re_[static_cast<std::size_t>(midx(a)) * n_ + static_cast<std::size_t>(midx(b))];
}

bool FiniteJstitModel::unirelational() const { return r_ == re_; }

bool FiniteJstitModel::is_leaf(const std::string& m) const {
  return slot_of_moment_[static_cast<std::size_t>(midx(m))] >= 0;
}

std::vector<std::string> FiniteJstitModel::history(const std::string& leaf) const {
  std::vector<std::string> out;
  for (int m : chain_[static_cast<std::size_t>(leaf_slot(leaf))])
    out.push_back(data_.moments[static_cast<std::size_t>(m)]);
  return out;
}

std::vector<std::string> FiniteJstitModel::histories_through(const std::string& moment) const {
  std::vector<std::string> out;
  for (int s : hm_[static_cast<std::size_t>(midx(moment))])
    out.push_back(leaf_names_[static_cast<std::size_t>(s)]);
  return out;
}

bool FiniteJstitModel::history_through(const std::string& moment, const std::string& leaf) const {
  return le_i(midx(moment), leaf_of_slot_[static_cast<std::size_t>(leaf_slot(leaf))]);
}

bool FiniteJstitModel::undivided_at(const std::string& moment, const std::string& leaf_a,
                                    const std::string& leaf_b) const {
  int m = midx(moment);
  int la = leaf_of_slot_[static_cast<std::size_t>(leaf_slot(leaf_a))];
  int lb = leaf_of_slot_[static_cast<std::size_t>(leaf_slot(leaf_b))];
  for (std::size_t w = 0; w < n_; ++w) {
    if (static_cast<int>(w) == m || !le_i(m, static_cast<int>(w))) continue;
    if (le_i(static_cast<int>(w), la) && le_i(static_cast<int>(w), lb)) return true;
  }
  return false;
}

std::vector<std::vector<std::string>> FiniteJstitModel::undivided_classes(
    const std::string& moment) const {
  if (!tree_ok_) throw ModelError("undividedness classes need a tree-shaped order");
  int m = midx(moment);
  std::vector<std::vector<std::string>> out;
  if (children_[static_cast<std::size_t>(m)].empty()) {
    // A leaf: the lone history forms its own class.
    out.push_back({data_.moments[static_cast<std::size_t>(m)]});
    return out;
  }
  for (int c : children_[static_cast<std::size_t>(m)]) {
    std::vector<std::string> cls;
    for (int s : hm_[static_cast<std::size_t>(c)])
      cls.push_back(leaf_names_[static_cast<std::size_t>(s)]);
    out.push_back(std::move(cls));
  }
  return out;
}

std::vector<std::vector<std::string>> FiniteJstitModel::choice_partition(
    const std::string& moment, const std::string& agent) const {
  int m = midx(moment);
  auto ait = std::find(agents_.list().begin(), agents_.list().end(), agent);
  if (ait == agents_.list().end()) throw ModelError("unknown agent: '" + agent + "'");
  std::size_t j = static_cast<std::size_t>(ait - agents_.list().begin());
  std::vector<std::vector<std::string>> out;
  for (const auto& block : choice_[static_cast<std::size_t>(m)][j]) {
    std::vector<std::string> b;
    for (int s : block) b.push_back(leaf_names_[static_cast<std::size_t>(s)]);
    out.push_back(std::move(b));
  }
  return out;
}

int FiniteJstitModel::cell_index(int m, int agent, int slot) const {
  const auto& cells = cell_of_[static_cast<std::size_t>(m)][static_cast<std::size_t>(agent)];
  auto it = cells.find(slot);
  if (it == cells.end()) throw ModelError("history does not pass through the moment");
  return it->second;
}

std::vector<std::string> FiniteJstitModel::choice_cell(const std::string& moment,
                                                       const std::string& agent,
                                                       const std::string& leaf) const {
  int m = midx(moment);
  auto ait = std::find(agents_.list().begin(), agents_.list().end(), agent);
  if (ait == agents_.list().end()) throw ModelError("unknown agent: '" + agent + "'");
  int j = static_cast<int>(ait - agents_.list().begin());
  int cell = cell_index(m, j, leaf_slot(leaf));
  std::vector<std::string> out;
  for (int s : choice_[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)]
                      [static_cast<std::size_t>(cell)])
    out.push_back(leaf_names_[static_cast<std::size_t>(s)]);
  return out;
}

const std::set<Term>& FiniteJstitModel::act_i(int m, int slot) const {
  static const std::set<Term> empty;
  auto it = act_idx_.find({m, slot});
  return it == act_idx_.end() ? empty : it->second;
}

const std::set<Term>& FiniteJstitModel::act(const std::string& moment,
                                            const std::string& leaf) const {
  int m = midx(moment);
  int s = leaf_slot(leaf);
  if (!le_i(m, leaf_of_slot_[static_cast<std::size_t>(s)]))
    throw ModelError("history does not pass through the moment");
  return act_i(m, s);
}

std::set<Term> FiniteJstitModel::act_settled_i(int m) const {
  return act_settled_cache_[static_cast<std::size_t>(m)];
}

std::set<Term> FiniteJstitModel::act_settled(const std::string& moment) const {
  return act_settled_cache_[static_cast<std::size_t>(midx(moment))];
}

std::set<Term> FiniteJstitModel::act_settled_in_cell(const std::string& moment,
                                                     const std::string& leaf,
                                                     const std::string& agent) const {
  int m = midx(moment);
  auto ait = std::find(agents_.list().begin(), agents_.list().end(), agent);
  if (ait == agents_.list().end()) throw ModelError("unknown agent: '" + agent + "'");
  int j = static_cast<int>(ait - agents_.list().begin());
  int cell = cell_index(m, j, leaf_slot(leaf));
  std::set<Term> acc;
  bool first = true;
  for (int s : choice_[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)]
                      [static_cast<std::size_t>(cell)]) {
    const auto& a = act_i(m, s);
    if (first) {
      acc = a;
      first = false;
    } else {
      std::set<Term> inter;
      std::set_intersection(acc.begin(), acc.end(), a.begin(), a.end(),
                            std::inserter(inter, inter.begin()));
      acc = std::move(inter);
    }
    if (acc.empty()) break;
  }
  return acc;
}

EvidenceValue FiniteJstitModel::evidence_i(int m, const Term& t) const {
  const std::string& mname = data_.moments[static_cast<std::size_t>(m)];
  int best_score = -1;
  const EvidenceRule* best = nullptr;
  for (const auto& rule : data_.evidence) {
    if (rule.moment && *rule.moment != mname) continue;
    if (rule.term && !(*rule.term == t)) continue;
    int score = (rule.moment ? 2 : 0) + (rule.term ? 1 : 0);
    if (score >= best_score) {  // later rules win ties
      best_score = score;
      best = &rule;
    }
  }
  if (best) return best->value;
  return derived_demand_i(m, t);
}

EvidenceValue FiniteJstitModel::derived_demand_i(int m, const Term& t) const {
  switch (t.kind()) {
    case Term::Kind::Var:
    case Term::Kind::Const:
      return EvidenceValue::none();
    case Term::Kind::Sum:
      return evidence_i(m, t.left()).unite(evidence_i(m, t.right()));
    case Term::Kind::App: {
      EvidenceValue l = evidence_i(m, t.left());
      EvidenceValue r = evidence_i(m, t.right());
      if (l.everything) return r.empty() ? EvidenceValue::none() : EvidenceValue::all();
      std::set<Formula> out;
      for (const auto& f : l.formulas)
        if (f.kind() == Formula::Kind::Imp && r.contains(f.left())) out.insert(f.right());
      return EvidenceValue::of(std::move(out));
    }
    case Term::Kind::Check: {
      EvidenceValue e = evidence_i(m, t.inner());
      if (e.everything) return EvidenceValue::all();
      std::set<Formula> out;
      for (const auto& f : e.formulas) out.insert(Formula::just(t.inner(), f));
      return EvidenceValue::of(std::move(out));
    }
  }
  return EvidenceValue::none();
}

EvidenceValue FiniteJstitModel::evidence_at(const std::string& moment, const Term& t) const {
  return evidence_i(midx(moment), t);
}

EvidenceValue FiniteJstitModel::evidence_closure_demand(const std::string& moment,
                                                        const Term& t) const {
  return derived_demand_i(midx(moment), t);
}

bool FiniteJstitModel::val_i(const std::string& atom, int m, int slot) const {
  auto it = data_.valuation.find(atom);
  if (it == data_.valuation.end()) return false;
  if (it->second.all) return true;
  return it->second.pairs.count({data_.moments[static_cast<std::size_t>(m)],
                                 leaf_names_[static_cast<std::size_t>(slot)]}) > 0;
}

bool FiniteJstitModel::val(const std::string& atom, const std::string& moment,
                           const std::string& leaf) const {
  return val_i(atom, midx(moment), leaf_slot(leaf));
}

// ---------------------------------------------------------------------------
// Validation

std::string_view constraint_name(Constraint c) {
  switch (c) {
    case Constraint::HistoricalConnection: return "historical-connection";
    case Constraint::NoBackwardBranching: return "no-backward-branching";
    case Constraint::NoChoiceBetweenUndivided: return "no-choice-between-undivided-histories";
    case Constraint::IndependenceOfAgents: return "independence-of-agents";
    case Constraint::EvidenceMonotonicity: return "monotonicity-of-evidence";
    case Constraint::EvidenceClosure: return "evidence-closure";
    case Constraint::ActExpansion: return "expansion-of-presented-proofs";
    case Constraint::NoNewProofsGuaranteed: return "no-new-proofs-guaranteed";
    case Constraint::NewProofsDivide: return "presenting-a-new-proof-makes-histories-divide";
    case Constraint::FutureMatters: return "future-always-matters";
    case Constraint::ActTransparency: return "presented-proofs-are-epistemically-transparent";
    case Constraint::RPreorder: return "r-preorder";
    case Constraint::RePreorder: return "r-e-preorder";
    case Constraint::RWithinRe: return "r-within-r-e";
  }
  return "?";
}

bool ConstraintReport::mentions(Constraint c) const {
  for (const auto& v : violations)
    if (v.constraint == c) return true;
  return false;
}

std::string ConstraintReport::to_text() const {
  if (violations.empty()) return "ok: all constraints satisfied\n";
  std::string out;
  for (const auto& v : violations)
    out += std::string(constraint_name(v.constraint)) + " @ " + v.where + ": " + v.detail + "\n";
  return out;
}

ConstraintReport validate(const FiniteJstitModel& model) {
  ConstraintReport rep;
  auto add = [&](Constraint c, std::string where, std::string detail) {
    rep.violations.push_back(Violation{c, std::move(where), std::move(detail)});
  };
  const auto& M = model.moments();

  // Relational structural laws (first witness each).
  auto check_preorder = [&](auto rel, Constraint c, const char* name) {
    for (const auto& a : M)
      if (!rel(a, a)) {
        add(c, a, std::string(name) + " is not reflexive");
        return;
      }
    for (const auto& a : M)
      for (const auto& b : M)
        for (const auto& d : M)
          if (rel(a, b) && rel(b, d) && !rel(a, d)) {
            add(c, "(" + a + "," + d + ")", std::string(name) + " is not transitive");
            return;
          }
  };
  check_preorder([&](const std::string& a, const std::string& b) { return model.rel_r(a, b); },
                 Constraint::RPreorder, "R");
  check_preorder([&](const std::string& a, const std::string& b) { return model.rel_re(a, b); },
                 Constraint::RePreorder, "R_e");

  [&] {
    for (const auto& a : M)
      for (const auto& b : M)
        if (model.rel_r(a, b) && !model.rel_re(a, b)) {
          add(Constraint::RWithinRe, "(" + a + "," + b + ")", "R pair missing from R_e");
          return;
        }
  }();

  // 10: future always matters.
  [&] {
    for (const auto& a : M)
      for (const auto& b : M)
        if (model.le(a, b) && !model.rel_r(a, b)) {
          add(Constraint::FutureMatters, "(" + a + "," + b + ")", "temporal pair missing from R");
          return;
        }
  }();

  // 1: historical connection.
  [&] {
    for (const auto& a : M)
      for (const auto& b : M) {
        bool connected = false;
        for (const auto& c : M)
          if (model.le(c, a) && model.le(c, b)) {
            connected = true;
            break;
          }
        if (!connected) {
          add(Constraint::HistoricalConnection, "(" + a + "," + b + ")",
              "moments have no common temporal predecessor");
          return;
        }
      }
  }();

  // 2: no backward branching.
  [&] {
    for (const auto& m : M)
      for (const auto& a : M)
        for (const auto& b : M) {
          if (a >= b) continue;
          if (model.le(a, m) && model.le(b, m) && !model.le(a, b) && !model.le(b, a)) {
            add(Constraint::NoBackwardBranching, m,
                "incomparable predecessors " + a + " and " + b);
            return;
          }
        }
  }();

  // History-dependent checks need a tree-shaped order.
  if (!model.tree_shaped()) return rep;

  for (const auto& m : M) {
    auto hm = model.histories_through(m);

    // 3 and 9: undivided histories share choice cells and act sets.
    for (std::size_t x = 0; x < hm.size(); ++x)
      for (std::size_t y = x + 1; y < hm.size(); ++y) {
        if (!model.undivided_at(m, hm[x], hm[y])) continue;
        for (const auto& j : model.agents().list())
          if (model.choice_cell(m, j, hm[x]) != model.choice_cell(m, j, hm[y]))
            add(Constraint::NoChoiceBetweenUndivided, m,
                "agent " + j + " separates undivided histories " + hm[x] + " and " + hm[y]);
        if (model.act(m, hm[x]) != model.act(m, hm[y]))
          add(Constraint::NewProofsDivide, m,
              "act differs on undivided histories " + hm[x] + " (" +
                  terms_text(model.act(m, hm[x])) + ") and " + hm[y] + " (" +
                  terms_text(model.act(m, hm[y])) + ")");
      }

    // 4: independence of agents, brute force over all selector products.
    {
      std::vector<std::vector<std::vector<std::string>>> parts;
      for (const auto& j : model.agents().list()) parts.push_back(model.choice_partition(m, j));
      bool violated = false;
      std::vector<std::size_t> pick(parts.size(), 0);
      while (true) {
        std::set<std::string> acc(parts[0][pick[0]].begin(), parts[0][pick[0]].end());
        for (std::size_t j = 1; j < parts.size() && !acc.empty(); ++j) {
          std::set<std::string> next;
          for (const auto& h : parts[j][pick[j]])
            if (acc.count(h)) next.insert(h);
          acc = std::move(next);
        }
        if (acc.empty()) {
          violated = true;
          break;
        }
        std::size_t j = 0;
        while (j < parts.size() && ++pick[j] == parts[j].size()) {
          pick[j] = 0;
          ++j;
        }
        if (j == parts.size()) break;
      }
      if (violated)
        add(Constraint::IndependenceOfAgents, m, "some joint selection of choice cells is empty");
    }

    // 8: no new proofs guaranteed.
    {
      std::set<Term> settled = model.act_settled(m);
      if (!settled.empty()) {
        std::set<Term> earlier;
        for (const auto& prev : M) {
          if (!model.lt(prev, m)) continue;
          for (const auto& h : hm) {
            const auto& a = model.act(prev, h);
            earlier.insert(a.begin(), a.end());
          }
        }
        if (!std::includes(earlier.begin(), earlier.end(), settled.begin(), settled.end()))
          add(Constraint::NoNewProofsGuaranteed, m,
              "settled proofs " + terms_text(settled) + " not all presented earlier (" +
                  terms_text(earlier) + ")");
      }
    }
  }

  // 7: expansion of presented proofs.
  for (const auto& a : M)
    for (const auto& b : M) {
      if (!model.lt(a, b)) continue;
      for (const auto& h : model.histories_through(b)) {
        const auto& before = model.act(a, h);
        const auto& after = model.act(b, h);
        if (!std::includes(after.begin(), after.end(), before.begin(), before.end()))
          add(Constraint::ActExpansion, "(" + a + "," + b + ")",
              "act shrinks along history " + h + ": " + terms_text(before) + " to " +
                  terms_text(after));
      }
    }

  // 11: presented proofs are epistemically transparent.
  for (const auto& a : M)
    for (const auto& b : M) {
      if (a == b || !model.rel_re(a, b)) continue;
      std::set<Term> sa = model.act_settled(a);
      std::set<Term> sb = model.act_settled(b);
      if (!std::includes(sb.begin(), sb.end(), sa.begin(), sa.end()))
        add(Constraint::ActTransparency, "(" + a + "," + b + ")",
            "settled proofs " + terms_text(sa) + " not settled at epistemic successor (" +
                terms_text(sb) + ")");
    }

  // Finite evidence universe: terms in act sets and evidence slots, closed
  // under subterms.
  std::set<Term> universe;
  for (const auto& [key, terms] : model.data().act)
    for (const auto& t : terms)
      for (const auto& s : subterms(t)) universe.insert(s);
  for (const auto& rule : model.data().evidence)
    if (rule.term)
      for (const auto& s : subterms(*rule.term)) universe.insert(s);

  // 5: monotonicity of evidence along R_e.
  for (const auto& a : M)
    for (const auto& b : M) {
      if (a == b || !model.rel_re(a, b)) continue;
      for (const auto& t : universe)
        if (!model.evidence_at(a, t).subset_of(model.evidence_at(b, t)))
          add(Constraint::EvidenceMonotonicity, "(" + a + "," + b + ")",
              "evidence for " + print_term(t) + " shrinks along R_e");
    }

  // 6: closure properties, on slots pinned by the finite data. For an
  // unlisted compound slot the stored value IS the derived demand, so only
  // explicitly listed slots can fail here.
  for (const auto& m : M)
    for (const auto& t : universe) {
      if (t.kind() == Term::Kind::Var || t.kind() == Term::Kind::Const) continue;
      EvidenceValue demand = model.evidence_closure_demand(m, t);
      if (!demand.subset_of(model.evidence_at(m, t)))
        add(Constraint::EvidenceClosure, m,
            "evidence for " + print_term(t) + " misses formulas required by closure");
    }

  return rep;
}

std::pair<std::set<Term>, std::set<Term>> act_aggregates(const FiniteJstitModel& model,
                                                         const std::string& moment,
                                                         const std::string& leaf,
                                                         const std::string& agent) {
  if (!model.history_through(moment, leaf))
    throw ModelError("history does not pass through the moment");
  return {model.act_settled(moment), model.act_settled_in_cell(moment, leaf, agent)};
}

// ---------------------------------------------------------------------------
// File format

namespace {

std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

[[noreturn]] void bad_line(int lineno, const std::string& msg) {
  throw ModelError("model file line " + std::to_string(lineno) + ": " + msg);
}

}  // namespace

FiniteJstitModel FiniteJstitModel::parse(std::string_view text) {
  ModelData d;
  std::vector<std::pair<int, std::string>> lines;
  {
    std::string cur;
    int no = 1;
    for (char c : text) {
      if (c == '\n') {
        lines.emplace_back(no++, cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    lines.emplace_back(no, cur);
  }

  struct Section {
    int lineno;
    std::string key;
    std::string rest;
  };
  std::vector<Section> sections;
  for (auto& [no, raw] : lines) {
    std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    std::size_t colon = line.find(':');
    if (colon == std::string::npos) bad_line(no, "expected 'key: ...'");
    sections.push_back({no, trim(line.substr(0, colon)), trim(line.substr(colon + 1))});
  }

  bool saw_agents = false, saw_moments = false;
  for (const auto& s : sections) {
    if (s.key == "agents") {
      if (saw_agents) bad_line(s.lineno, "duplicate agents line");
      saw_agents = true;
      d.agents = split_ws(s.rest);
    } else if (s.key == "moments") {
      if (saw_moments) bad_line(s.lineno, "duplicate moments line");
      saw_moments = true;
      d.moments = split_ws(s.rest);
    } else if (s.key == "order") {
      for (const auto& tok : split_ws(s.rest)) {
        std::size_t lt = tok.find('<');
        if (lt == std::string::npos || lt == 0 || lt + 1 == tok.size())
          bad_line(s.lineno, "bad order pair '" + tok + "' (expected a<b)");
        d.order.emplace_back(tok.substr(0, lt), tok.substr(lt + 1));
      }
    }
  }
  if (!saw_agents) throw ModelError("model file: missing agents line");
  if (!saw_moments) throw ModelError("model file: missing moments line");
  AgentSet agents(d.agents);

  std::map<std::string, int> mi;
  for (std::size_t i = 0; i < d.moments.size(); ++i)
    if (!mi.emplace(d.moments[i], static_cast<int>(i)).second)
      throw ModelError("duplicate moment: '" + d.moments[i] + "'");
  auto known = [&](const std::string& m, int lineno) {
    if (!mi.count(m)) bad_line(lineno, "unknown moment '" + m + "'");
  };

  // Local order closure, for "+order" in R/Re lines.
  std::size_t nm = d.moments.size();
  std::vector<char> closure(nm * nm, 0);
  for (std::size_t i = 0; i < nm; ++i) closure[i * nm + i] = 1;
  for (const auto& [a, b] : d.order) {
    if (!mi.count(a) || !mi.count(b))
      throw ModelError("order references unknown moment: " + a + "<" + b);
    closure[static_cast<std::size_t>(mi[a]) * nm + static_cast<std::size_t>(mi[b])] = 1;
  }
  for (std::size_t k = 0; k < nm; ++k)
    for (std::size_t i = 0; i < nm; ++i)
      if (closure[i * nm + k])
        for (std::size_t j = 0; j < nm; ++j)
          if (closure[k * nm + j]) closure[i * nm + j] = 1;
  auto closure_pairs = [&]() {
    std::set<std::pair<std::string, std::string>> out;
    for (std::size_t i = 0; i < nm; ++i)
      for (std::size_t j = 0; j < nm; ++j)
        if (closure[i * nm + j]) out.insert({d.moments[i], d.moments[j]});
    return out;
  };

  auto parse_rel_tokens = [&](const Section& s, std::set<std::pair<std::string, std::string>>& out,
                              bool allow_copy_r) {
    for (const auto& tok : split_ws(s.rest)) {
      if (tok == "+order") {
        auto cp = closure_pairs();
        out.insert(cp.begin(), cp.end());
      } else if (tok == "=R" && allow_copy_r) {
        out.insert(d.r.begin(), d.r.end());
      } else {
        std::size_t gt = tok.find('>');
        if (gt == std::string::npos || gt == 0 || gt + 1 == tok.size())
          bad_line(s.lineno, "bad relation token '" + tok + "'");
        std::string a = tok.substr(0, gt), b = tok.substr(gt + 1);
        known(a, s.lineno);
        known(b, s.lineno);
        out.insert({a, b});
      }
    }
  };

  bool saw_r = false, saw_re = false;
  for (const auto& s : sections) {
    if (s.key == "agents" || s.key == "moments" || s.key == "order") continue;
    if (s.key == "choice") {
      std::size_t colon = s.rest.find(':');
      if (colon == std::string::npos) bad_line(s.lineno, "choice needs 'moment agent : blocks'");
      auto head = split_ws(s.rest.substr(0, colon));
      if (head.size() != 2) bad_line(s.lineno, "choice needs 'moment agent : blocks'");
      ChoiceEntry entry;
      entry.moment = head[0];
      entry.agent = head[1];
      known(entry.moment, s.lineno);
      std::string blocks = s.rest.substr(colon + 1);
      std::size_t i = 0;
      while (i < blocks.size()) {
        if (std::isspace(static_cast<unsigned char>(blocks[i]))) {
          ++i;
          continue;
        }
        if (blocks[i] != '{') bad_line(s.lineno, "expected '{' in choice blocks");
        std::size_t close = blocks.find('}', i);
        if (close == std::string::npos) bad_line(s.lineno, "unterminated choice block");
        auto members = split_ws(blocks.substr(i + 1, close - i - 1));
        if (members.empty()) bad_line(s.lineno, "empty choice block");
        for (const auto& mref : members) known(mref, s.lineno);
        entry.blocks.push_back(members);
        i = close + 1;
      }
      if (entry.blocks.empty()) bad_line(s.lineno, "choice line with no blocks");
      d.choice.push_back(std::move(entry));
    } else if (s.key == "act") {
      std::size_t eq = s.rest.find('=');
      if (eq == std::string::npos) bad_line(s.lineno, "act needs 'moment/leaf = terms'");
      std::string key = trim(s.rest.substr(0, eq));
      std::size_t slash = key.find('/');
      if (slash == std::string::npos) bad_line(s.lineno, "act key needs 'moment/leaf'");
      std::string m = trim(key.substr(0, slash));
      std::string leaf = trim(key.substr(slash + 1));
      known(m, s.lineno);
      known(leaf, s.lineno);
      std::set<Term>& slot = d.act[{m, leaf}];
      for (const auto& tok : split_ws(s.rest.substr(eq + 1))) {
        try {
          slot.insert(parse_term(tok));
        } catch (const SyntaxError& e) {
          bad_line(s.lineno, "bad term '" + tok + "': " + e.what());
        }
      }
    } else if (s.key == "evidence") {
      std::size_t eq = s.rest.find('=');
      if (eq == std::string::npos) bad_line(s.lineno, "evidence needs 'moment term = value'");
      auto head = split_ws(s.rest.substr(0, eq));
      if (head.size() != 2) bad_line(s.lineno, "evidence needs 'moment term = value'");
      EvidenceRule rule;
      if (head[0] != "*") {
        known(head[0], s.lineno);
        rule.moment = head[0];
      }
      if (head[1] != "*") {
        try {
          rule.term = parse_term(head[1]);
        } catch (const SyntaxError& e) {
          bad_line(s.lineno, "bad term '" + head[1] + "': " + e.what());
        }
      }
      std::string value = trim(s.rest.substr(eq + 1));
      if (value == "ALL") {
        rule.value = EvidenceValue::all();
      } else {
        std::set<Formula> fs;
        std::size_t i = 0;
        while (i < value.size()) {
          if (std::isspace(static_cast<unsigned char>(value[i]))) {
            ++i;
            continue;
          }
          if (value[i] != '"') bad_line(s.lineno, "evidence formulas must be quoted");
          std::size_t close = value.find('"', i + 1);
          if (close == std::string::npos) bad_line(s.lineno, "unterminated formula quote");
          std::string ftext = value.substr(i + 1, close - i - 1);
          try {
            fs.insert(parse_formula(ftext, agents));
          } catch (const SyntaxError& e) {
            bad_line(s.lineno, "bad formula '" + ftext + "': " + e.what());
          }
          i = close + 1;
        }
        rule.value = EvidenceValue::of(std::move(fs));
      }
      d.evidence.push_back(std::move(rule));
    } else if (s.key == "R") {
      saw_r = true;
      parse_rel_tokens(s, d.r, false);
    } else if (s.key == "Re") {
      saw_re = true;
      parse_rel_tokens(s, d.r_e, true);
    } else if (s.key == "val") {
      std::size_t at = s.rest.find('@');
      if (at == std::string::npos) bad_line(s.lineno, "val needs 'atom @ pairs'");
      std::string atom = trim(s.rest.substr(0, at));
      ValuationEntry& entry = d.valuation[atom];
      std::string rhs = trim(s.rest.substr(at + 1));
      if (rhs == "ALL") {
        entry.all = true;
      } else {
        for (const auto& tok : split_ws(rhs)) {
          std::size_t slash = tok.find('/');
          if (slash == std::string::npos) bad_line(s.lineno, "val pair needs 'moment/leaf'");
          std::string m = tok.substr(0, slash), leaf = tok.substr(slash + 1);
          known(m, s.lineno);
          known(leaf, s.lineno);
          entry.pairs.insert({m, leaf});
        }
      }
    } else {
      bad_line(s.lineno, "unknown section '" + s.key + "'");
    }
  }

  if (!saw_r) d.r = closure_pairs();
  if (!saw_re) d.r_e = d.r;

  return FiniteJstitModel(std::move(d));
}

std::string FiniteJstitModel::to_text() const {
  std::ostringstream out;
  out << "agents:";
  for (const auto& a : data_.agents) out << ' ' << a;
  out << "\nmoments:";
  for (const auto& m : data_.moments) out << ' ' << m;
  out << "\n";
  if (!data_.order.empty()) {
    out << "order:";
    for (const auto& [a, b] : data_.order) out << ' ' << a << '<' << b;
    out << "\n";
  }
  for (const auto& entry : data_.choice) {
    out << "choice: " << entry.moment << ' ' << entry.agent << " :";
    for (const auto& block : entry.blocks) {
      out << " {";
      for (std::size_t i = 0; i < block.size(); ++i) out << (i ? " " : "") << block[i];
      out << '}';
    }
    out << "\n";
  }
  for (const auto& [key, terms] : data_.act) {
    out << "act: " << key.first << '/' << key.second << " =";
    for (const auto& t : terms) out << ' ' << print_term(t);
    out << "\n";
  }
  for (const auto& rule : data_.evidence) {
    out << "evidence: " << (rule.moment ? *rule.moment : "*") << ' '
        << (rule.term ? print_term(*rule.term) : "*") << " =";
    if (rule.value.everything) {
      out << " ALL";
    } else {
      for (const auto& f : rule.value.formulas) out << " \"" << print_formula(f) << '"';
    }
    out << "\n";
  }

  std::set<std::pair<std::string, std::string>> closure;
  for (const auto& a : data_.moments)
    for (const auto& b : data_.moments)
      if (le(a, b)) closure.insert({a, b});
  auto emit_rel = [&](const char* name, const std::set<std::pair<std::string, std::string>>& rel) {
    out << name << ':';
    bool covered = std::includes(rel.begin(), rel.end(), closure.begin(), closure.end());
    if (covered) {
      out << " +order";
      for (const auto& p : rel)
        if (!closure.count(p)) out << ' ' << p.first << '>' << p.second;
    } else {
      for (const auto& p : rel) out << ' ' << p.first << '>' << p.second;
    }
    out << "\n";
  };
  emit_rel("R", data_.r);
  if (data_.r_e == data_.r) {
    out << "Re: =R\n";
  } else {
    emit_rel("Re", data_.r_e);
  }

  for (const auto& [atom, entry] : data_.valuation) {
    out << "val: " << atom << " @";
    if (entry.all) {
      out << " ALL";
    } else {
      for (const auto& [m, leaf] : entry.pairs) out << ' ' << m << '/' << leaf;
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace jstit
