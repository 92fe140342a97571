#pragma once

// Constraint-respecting random model generation, soundness fuzzing over the
// axiom schemes, and the two executable demonstrations: the dense-time
// quotient that separates discrete from dense time, and the failure of the
// finite model property.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "jstit/model.hpp"
#include "jstit/proofkit.hpp"
#include "jstit/semantics.hpp"

namespace jstit {

// Thin deterministic RNG. mt19937_64 output is bit-exact across platforms,
// and the helpers below avoid the library distributions, whose streams are
// not portable.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  std::uint64_t next() { return eng_(); }
  std::size_t below(std::size_t n);          // uniform in [0, n)
  int range(int lo, int hi);                 // uniform in [lo, hi]
  bool chance(unsigned num, unsigned den);   // true with probability num/den
  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[below(v.size())];
  }

 private:
  std::mt19937_64 eng_;
};

struct GenParams {
  std::uint64_t seed = 1;
  int max_depth = 3;      // >= 1; 1 yields a single moment
  int max_branching = 2;  // children per moment
  std::vector<std::string> agents = {"i", "j"};
  std::vector<Term> term_pool = default_term_pool();
  std::vector<std::string> atom_pool = {"p", "q"};
  enum class EvidenceMode { Everything, SparseClosed };
  EvidenceMode evidence_mode = EvidenceMode::Everything;

  static std::vector<Term> default_term_pool();
};

// Deterministic in the seed; the result always passes validate with an empty
// report. Construction: random rooted tree; choices are coarsenings of the
// undividedness classes (rechecked for joint independence); presented proofs
// are added top-down only to proper subsets of the classes unless presented
// earlier; R = R_e = the closure of the order; evidence either Everything or
// accumulated monotonically along the order.
FiniteJstitModel gen_model(const GenParams& params);

// Random formulas over fixed pools (fuzz instances, oracle sweeps).
struct FormulaPools {
  std::vector<std::string> atoms = {"p", "q"};
  std::vector<Term> terms = GenParams::default_term_pool();
  std::vector<std::string> agents = {"i", "j"};
  bool allow_et = false;
};

Formula random_formula(Rng& rng, const FormulaPools& pools, int depth);
Formula random_scheme_instance(Rng& rng, Scheme s, const FormulaPools& pools,
                               const AgentSet& agents);

struct FuzzFinding {
  int model_index = 0;
  std::uint64_t model_seed = 0;
  std::string scheme;
  std::string instance;
  std::string moment, leaf;
  std::string model_text;
};

struct FuzzReport {
  int models = 0;
  long long checks = 0;
  std::vector<FuzzFinding> findings;
  bool ok() const { return findings.empty(); }
  std::string to_text() const;
};

// For every generated CS-normal model and every scheme, checks n_instances
// random instances with valid_in_model; also re-checks the corpus
// conclusions and closure under the inference rules on already-verified
// validities. Deterministic in (n_models, n_instances, seed, cs).
FuzzReport soundness_fuzz(int n_models, int n_instances, std::uint64_t seed,
                          const ConstantSpecification& cs);

// -----------------------------------------------------------------------
// Demonstrations

// Four-moment quotient of the dense-time countermodel (moments -1, 0, mid, a
// with mid standing for the whole dense interval). Evaluation-faithful for
// the separation formula, but intentionally fails the
// no-new-proofs-guaranteed constraint at mid.
FiniteJstitModel dense_time_quotient();

Formula separation_formula();             // valid exactly over discrete time
Formula separation_antecedent();          // K(~Proven(x,p) | Proven(y,q))
Formula separation_witness_conjunction();
Formula fmp_witness();                    // K(<>p & <>~p)

struct QuotientDemoResult {
  bool formula_false_at_witness = false;
  bool antecedent_true = false;
  bool conjunction_true = false;
  bool exactly_one_violation = false;
  ConstraintReport report;
  bool ok() const {
    return formula_false_at_witness && antecedent_true && conjunction_true &&
           exactly_one_violation;
  }
  std::string to_text() const;
};

// Evaluates the separation formula on the quotient (under the validation
// waiver) and validates the quotient.
QuotientDemoResult quotient_demo();

struct FmpReport {
  int models = 0;
  long long pairs = 0;
  long long fmp_witness_true = 0;      // expected 0
  int separation_valid_models = 0;     // expected == models
  std::vector<std::string> notes;
  bool ok() const { return fmp_witness_true == 0 && separation_valid_models == models; }
  std::string to_text() const;
};

// On generated (finite, hence discrete-time) models: the finite-model-
// property witness K(<>p & <>~p) must be false at every pair, and the
// separation formula valid everywhere.
FmpReport fmp_demo(int n_models, std::uint64_t seed);

}  // namespace jstit
