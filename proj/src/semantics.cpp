#include "jstit/semantics.hpp"

namespace jstit {

namespace {

bool determinate_shape(Formula::Kind k) {
  switch (k) {
    case Formula::Kind::Box:
    case Formula::Kind::Knows:
    case Formula::Kind::Just:
    case Formula::Kind::Proven:
      return true;
    default:
      return false;
  }
}

}  // namespace

Evaluator::Evaluator(const FiniteJstitModel& model, EvalOptions opts)
    : model_(model), opts_(opts) {
  if (!opts_.waive_validation) {
    ConstraintReport report = validate(model_);
    if (!report.ok())
      throw EvalError("model fails validation (pass the waiver to evaluate anyway):\n" +
                      report.to_text());
  } else if (!model_.tree_shaped()) {
    throw EvalError("cannot evaluate: order is not tree-shaped");
  }
}

void Evaluator::check_formula(const Formula& f) const {
  for (const auto& ag : formula_agents(f))
    if (!model_.agents().contains(ag))
      throw EvalError("formula mentions agent '" + ag + "' outside the model's agent set");
}

int Evaluator::agent_index(const std::string& agent) const {
  const auto& list = model_.agents().list();
  for (std::size_t i = 0; i < list.size(); ++i)
    if (list[i] == agent) return static_cast<int>(i);
  throw EvalError("formula mentions agent '" + agent + "' outside the model's agent set");
}

bool Evaluator::eval(const std::string& moment, const std::string& leaf, const Formula& f) {
  check_formula(f);
  int m = model_.midx(moment);
  int slot = model_.leaf_slot(leaf);
  if (!model_.le_i(m, model_.leaf_of_slot_[static_cast<std::size_t>(slot)]))
    throw EvalError("history '" + leaf + "' does not pass through moment '" + moment + "'");
  return go(m, slot, f);
}

bool Evaluator::valid(const Formula& f) { return !counterexample(f).has_value(); }

std::optional<std::pair<std::string, std::string>> Evaluator::counterexample(const Formula& f) {
  check_formula(f);
  for (std::size_t m = 0; m < model_.n_; ++m)
    for (int slot : model_.hm_[m])
      if (!go(static_cast<int>(m), slot, f))
        return std::make_pair(model_.moments()[m],
                              model_.leaf_names_[static_cast<std::size_t>(slot)]);
  return std::nullopt;
}

bool Evaluator::moment_determinate(const std::string& moment, const Formula& f) {
  check_formula(f);
  int m = model_.midx(moment);
  const auto& hm = model_.hm_[static_cast<std::size_t>(m)];
  if (hm.empty()) return true;
  bool first = go(m, hm[0], f);
  for (std::size_t i = 1; i < hm.size(); ++i)
    if (go(m, hm[i], f) != first) return false;
  return true;
}

bool Evaluator::go(int m, int slot, const Formula& f) {
  bool determinate = determinate_shape(f.kind());
  Key key{f.hash(), f, m, determinate ? -1 : slot};
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;

  bool result = false;
  switch (f.kind()) {
    case Formula::Kind::Atom:
      result = model_.val_i(f.name(), m, slot);
      break;
    case Formula::Kind::Falsum:
      result = false;
      break;
    case Formula::Kind::Neg:
      result = !go(m, slot, f.child());
      break;
    case Formula::Kind::And:
      result = go(m, slot, f.left()) && go(m, slot, f.right());
      break;
    case Formula::Kind::Or:
      result = go(m, slot, f.left()) || go(m, slot, f.right());
      break;
    case Formula::Kind::Imp:
      result = !go(m, slot, f.left()) || go(m, slot, f.right());
      break;
    case Formula::Kind::Box: {
      result = true;
      for (int s : model_.hm_[static_cast<std::size_t>(m)])
        if (!go(m, s, f.child())) {
          result = false;
          break;
        }
      break;
    }
    case Formula::Kind::Diamond: {
      result = false;
      for (int s : model_.hm_[static_cast<std::size_t>(m)])
        if (go(m, s, f.child())) {
          result = true;
          break;
        }
      break;
    }
    case Formula::Kind::Cstit: {
      int j = agent_index(f.agent());
      int cell = model_.cell_index(m, j, slot);
      result = true;
      for (int s : model_.choice_[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)]
                                 [static_cast<std::size_t>(cell)])
        if (!go(m, s, f.child())) {
          result = false;
          break;
        }
      break;
    }
    case Formula::Kind::CstitDual: {
      int j = agent_index(f.agent());
      int cell = model_.cell_index(m, j, slot);
      result = false;
      for (int s : model_.choice_[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)]
                                 [static_cast<std::size_t>(cell)])
        if (go(m, s, f.child())) {
          result = true;
          break;
        }
      break;
    }
    case Formula::Kind::Knows: {
      result = true;
      for (int m2 : model_.r_succ_[static_cast<std::size_t>(m)]) {
        for (int s : model_.hm_[static_cast<std::size_t>(m2)])
          if (!go(m2, s, f.child())) {
            result = false;
            break;
          }
        if (!result) break;
      }
      break;
    }
    case Formula::Kind::Just: {
      result = model_.evidence_i(m, f.term()).contains(f.child());
      if (result) {
        for (int m2 : model_.re_succ_[static_cast<std::size_t>(m)]) {
          for (int s : model_.hm_[static_cast<std::size_t>(m2)])
            if (!go(m2, s, f.child())) {
              result = false;
              break;
            }
          if (!result) break;
        }
      }
      break;
    }
    case Formula::Kind::Prove: {
      int j = agent_index(f.agent());
      int cell = model_.cell_index(m, j, slot);
      bool in_cell = true;
      for (int s : model_.choice_[static_cast<std::size_t>(m)][static_cast<std::size_t>(j)]
                                 [static_cast<std::size_t>(cell)])
        if (!model_.act_i(m, s).count(f.term())) {
          in_cell = false;
          break;
        }
      result = in_cell && !model_.act_settled_cache_[static_cast<std::size_t>(m)].count(f.term()) &&
               go(m, slot, Formula::just(f.term(), f.child()));
      break;
    }
    case Formula::Kind::Proven: {
      result = model_.act_settled_cache_[static_cast<std::size_t>(m)].count(f.term()) > 0 &&
               go(m, slot, Formula::just(f.term(), f.child()));
      break;
    }
    case Formula::Kind::Et: {
      if (!opts_.enable_et) throw EvalError("Et is disabled (extension flag off)");
      result = model_.act_i(m, slot).count(f.term()) > 0;
      break;
    }
  }

  memo_.emplace(std::move(key), result);
  return result;
}

// ---------------------------------------------------------------------------

bool eval(const FiniteJstitModel& model, const std::string& moment, const std::string& leaf,
          const Formula& f, EvalOptions opts) {
  Evaluator ev(model, opts);
  return ev.eval(moment, leaf, f);
}

bool valid_in_model(const FiniteJstitModel& model, const Formula& f, EvalOptions opts) {
  Evaluator ev(model, opts);
  return ev.valid(f);
}

std::optional<std::pair<std::string, std::string>> find_counterexample(
    const FiniteJstitModel& model, const Formula& f, EvalOptions opts) {
  Evaluator ev(model, opts);
  return ev.counterexample(f);
}

bool is_moment_determinate(const FiniteJstitModel& model, const std::string& moment,
                           const Formula& f, EvalOptions opts) {
  Evaluator ev(model, opts);
  return ev.moment_determinate(moment, f);
}

}  // namespace jstit
