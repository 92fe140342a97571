#pragma once

// The satisfaction relation over finite jstit models. Truth values of
// moment-determinate shapes ([]A, KA, t:A, Proven(t,A)) are memoized per
// (formula, moment); everything else per (formula, moment, history). The
// memo lives inside an Evaluator instance, so separate instances can run
// concurrently on the same model.

#include <optional>
#include <string>
#include <unordered_map>
#include <utility>

#include "jstit/model.hpp"

namespace jstit {

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EvalOptions {
  bool enable_et = false;
  // Evaluate even when the model violates constraints. Needed for structures
  // that stand in for non-discrete models and fail validation on purpose.
  bool waive_validation = false;
};

class Evaluator {
 public:
  explicit Evaluator(const FiniteJstitModel& model, EvalOptions opts = {});

  bool eval(const std::string& moment, const std::string& leaf, const Formula& f);
  bool valid(const Formula& f);
  // First (moment, history-leaf) pair falsifying f, if any.
  std::optional<std::pair<std::string, std::string>> counterexample(const Formula& f);
  bool moment_determinate(const std::string& moment, const Formula& f);

 private:
  struct Key {
    std::size_t fhash;
    Formula formula;
    int moment;
    int slot;  // -1 for moment-determinate entries
    bool operator==(const Key& other) const {
      return moment == other.moment && slot == other.slot && formula == other.formula;
    }
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return k.fhash ^ (static_cast<std::size_t>(k.moment) * 0x9e3779b9u) ^
             (static_cast<std::size_t>(k.slot + 1) * 0x85ebca6bu);
    }
  };

  bool go(int m, int slot, const Formula& f);
  void check_formula(const Formula& f) const;
  int agent_index(const std::string& agent) const;

  const FiniteJstitModel& model_;
  EvalOptions opts_;
  std::unordered_map<Key, bool, KeyHash> memo_;
};

// Convenience wrappers matching the module operations.
bool eval(const FiniteJstitModel& model, const std::string& moment, const std::string& leaf,
          const Formula& f, EvalOptions opts = {});
bool valid_in_model(const FiniteJstitModel& model, const Formula& f, EvalOptions opts = {});
std::optional<std::pair<std::string, std::string>> find_counterexample(
    const FiniteJstitModel& model, const Formula& f, EvalOptions opts = {});
bool is_moment_determinate(const FiniteJstitModel& model, const std::string& moment,
                           const Formula& f, EvalOptions opts = {});

}  // namespace jstit
