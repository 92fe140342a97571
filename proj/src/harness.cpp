#include "jstit/harness.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace jstit {

// ---------------------------------------------------------------------------
// Rng

std::size_t Rng::below(std::size_t n) {
  if (n == 0) throw std::invalid_argument("Rng::below(0)");
  // modulo rejection keeps the stream portable and unbiased
  std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t v;
  do {
    v = eng_();
  } while (v >= limit);
  return static_cast<std::size_t>(v % n);
}

int Rng::range(int lo, int hi) {
  return lo + static_cast<int>(below(static_cast<std::size_t>(hi - lo + 1)));
}

bool Rng::chance(unsigned num, unsigned den) { return below(den) < num; }

// ---------------------------------------------------------------------------
// Model generation

std::vector<Term> GenParams::default_term_pool() {
  return {Term::var("x"), Term::var("y"), Term::constant("c")};
}

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

struct TreeShape {
  std::vector<int> parent;                 // -1 for the root
  std::vector<std::vector<int>> children;
  std::vector<std::string> names;
  std::vector<int> leaves;                         // node ids
  std::vector<std::vector<int>> hm;                // node -> leaf node ids above it
  std::vector<std::vector<std::vector<int>>> classes;  // node -> undividedness classes
};

TreeShape grow_tree(Rng& rng, const GenParams& p) {
  TreeShape t;
  t.parent = {-1};
  std::vector<int> frontier = {0};
  for (int depth = 2; depth <= p.max_depth; ++depth) {
    std::vector<int> next;
    for (int node : frontier) {
      // the root always branches when the depth allows it, so that deeper
      // parameters reliably yield non-degenerate trees
      int lo = (node == 0 && p.max_branching > 0) ? 1 : 0;
      int kids = rng.range(lo, p.max_branching);
      for (int c = 0; c < kids; ++c) {
        int id = static_cast<int>(t.parent.size());
        t.parent.push_back(node);
        next.push_back(id);
      }
    }
    frontier = std::move(next);
    if (frontier.empty()) break;
  }
  int n = static_cast<int>(t.parent.size());
  t.children.assign(n, {});
  for (int i = 1; i < n; ++i) t.children[t.parent[i]].push_back(i);
  for (int i = 0; i < n; ++i) t.names.push_back("m" + std::to_string(i));
  for (int i = 0; i < n; ++i)
    if (t.children[i].empty()) t.leaves.push_back(i);

  t.hm.assign(n, {});
  for (int leaf : t.leaves)
    for (int cur = leaf; cur != -1; cur = t.parent[cur]) t.hm[cur].push_back(leaf);
  for (auto& v : t.hm) std::sort(v.begin(), v.end());

  t.classes.assign(n, {});
  for (int i = 0; i < n; ++i) {
    if (t.children[i].empty()) {
      t.classes[i].push_back({i});
    } else {
      for (int c : t.children[i]) t.classes[i].push_back(t.hm[c]);
    }
  }
  return t;
}

// A random coarsening of the undividedness classes into choice blocks.
std::vector<std::vector<int>> coarsen(Rng& rng, const std::vector<std::vector<int>>& classes) {
  std::size_t buckets = 1 + rng.below(classes.size());
  std::vector<std::vector<int>> out(buckets);
  for (const auto& cls : classes) {
    auto& b = out[rng.below(buckets)];
    b.insert(b.end(), cls.begin(), cls.end());
  }
  out.erase(std::remove_if(out.begin(), out.end(),
                           [](const std::vector<int>& b) { return b.empty(); }),
            out.end());
  for (auto& b : out) std::sort(b.begin(), b.end());
  return out;
}

bool independent(const std::vector<std::vector<std::vector<int>>>& parts) {
  std::vector<std::size_t> pick(parts.size(), 0);
  while (true) {
    std::set<int> acc(parts[0][pick[0]].begin(), parts[0][pick[0]].end());
    for (std::size_t j = 1; j < parts.size() && !acc.empty(); ++j) {
      std::set<int> nxt;
      for (int h : parts[j][pick[j]])
        if (acc.count(h)) nxt.insert(h);
      acc = std::move(nxt);
    }
    if (acc.empty()) return false;
    std::size_t j = 0;
    while (j < parts.size() && ++pick[j] == parts[j].size()) {
      pick[j] = 0;
      ++j;
    }
    if (j == parts.size()) return true;
  }
}

FiniteJstitModel gen_model_impl(const GenParams& p,
                                const std::map<std::string, std::set<Formula>>& cs_preload) {
  if (p.max_depth < 1) throw std::invalid_argument("gen_model: max_depth must be >= 1");
  if (p.max_branching < 0) throw std::invalid_argument("gen_model: negative branching");
  if (p.term_pool.empty() || p.atom_pool.empty())
    throw std::invalid_argument("gen_model: pools must be non-empty");

  Rng rng(mix_seed(p.seed, 0));
  TreeShape tree = grow_tree(rng, p);
  int n = static_cast<int>(tree.parent.size());

  ModelData d;
  d.agents = p.agents;
  d.moments = tree.names;
  for (int i = 1; i < n; ++i) d.order.emplace_back(tree.names[tree.parent[i]], tree.names[i]);

  // R = R_e = reflexive-transitive closure of the order.
  for (int i = 0; i < n; ++i)
    for (int cur = i; cur != -1; cur = tree.parent[cur]) d.r.insert({tree.names[cur], tree.names[i]});
  d.r_e = d.r;

  // Choice: per-agent random coarsenings, kept only if jointly independent.
  for (int m = 0; m < n; ++m) {
    if (tree.hm[m].size() < 2) continue;
    std::vector<std::vector<std::vector<int>>> parts;
    bool ok = false;
    for (int attempt = 0; attempt < 10 && !ok; ++attempt) {
      parts.clear();
      for (std::size_t j = 0; j < p.agents.size(); ++j)
        parts.push_back(coarsen(rng, tree.classes[m]));
      ok = independent(parts);
    }
    if (!ok) {
      // Only the first agent keeps a non-trivial partition.
      parts.assign(p.agents.size(), {tree.hm[m]});
      parts[0] = coarsen(rng, tree.classes[m]);
    }
    for (std::size_t j = 0; j < p.agents.size(); ++j) {
      if (parts[j].size() < 2) continue;
      ChoiceEntry entry;
      entry.moment = tree.names[m];
      entry.agent = p.agents[j];
      for (const auto& block : parts[j]) {
        std::vector<std::string> names;
        for (int leaf : block) names.push_back(tree.names[leaf]);
        entry.blocks.push_back(std::move(names));
      }
      d.choice.push_back(std::move(entry));
    }
  }

  // Act, top-down. New proofs go to proper subsets of the undividedness
  // classes; once presented somewhere they may settle downstream for free.
  std::map<std::pair<int, int>, std::set<Term>> act;
  for (int m = 0; m < n; ++m) {
    for (int leaf : tree.hm[m])
      if (tree.parent[m] != -1) act[{m, leaf}] = act[{tree.parent[m], leaf}];
    const auto& classes = tree.classes[m];
    if (classes.size() < 2) continue;
    for (const Term& t : p.term_pool) {
      if (!rng.chance(1, 2)) continue;
      std::vector<std::size_t> receivers;
      for (std::size_t c = 0; c < classes.size(); ++c)
        if (rng.chance(1, 2)) receivers.push_back(c);
      bool presented_earlier = false;
      for (int leaf : tree.hm[m])
        if (act[{m, leaf}].count(t)) presented_earlier = true;
      if (!presented_earlier && receivers.size() == classes.size())
        receivers.erase(receivers.begin() + static_cast<long>(rng.below(receivers.size())));
      for (std::size_t c : receivers)
        for (int leaf : classes[c]) act[{m, leaf}].insert(t);
    }
  }
  for (const auto& [key, terms] : act)
    if (!terms.empty()) d.act[{tree.names[key.first], tree.names[key.second]}] = terms;

  // Evidence.
  if (p.evidence_mode == GenParams::EvidenceMode::Everything) {
    d.evidence.push_back(EvidenceRule{std::nullopt, std::nullopt, EvidenceValue::all()});
  } else {
    std::set<Term> atoms;
    for (const Term& t : p.term_pool)
      for (const Term& s : subterms(t))
        if (s.kind() == Term::Kind::Var || s.kind() == Term::Kind::Const) atoms.insert(s);
    for (const auto& [cname, extra] : cs_preload) atoms.insert(Term::constant(cname));

    std::vector<Formula> candidates;
    for (const auto& a : p.atom_pool) candidates.push_back(Formula::atom(a));
    for (const auto& a : p.atom_pool)
      for (const auto& b : p.atom_pool)
        candidates.push_back(Formula::imp(Formula::atom(a), Formula::atom(b)));

    std::map<std::pair<int, Term>, std::set<Formula>> ev;
    for (int m = 0; m < n; ++m) {
      for (const Term& t : atoms) {
        std::set<Formula> cur;
        if (tree.parent[m] != -1) cur = ev[{tree.parent[m], t}];
        if (tree.parent[m] == -1 && t.kind() == Term::Kind::Const) {
          auto it = cs_preload.find(t.name());
          if (it != cs_preload.end()) cur.insert(it->second.begin(), it->second.end());
        }
        for (const auto& f : candidates)
          if (rng.chance(1, 3)) cur.insert(f);
        ev[{m, t}] = std::move(cur);
      }
    }
    for (const auto& [key, fs] : ev)
      d.evidence.push_back(
          EvidenceRule{tree.names[key.first], key.second, EvidenceValue::of(fs)});
  }

  // Valuation.
  for (const auto& atom : p.atom_pool) {
    ValuationEntry entry;
    if (rng.chance(1, 4)) {
      entry.all = true;
    } else {
      for (int m = 0; m < n; ++m)
        for (int leaf : tree.hm[m])
          if (rng.chance(1, 2)) entry.pairs.insert({tree.names[m], tree.names[leaf]});
    }
    d.valuation[atom] = std::move(entry);
  }

  return FiniteJstitModel(std::move(d));
}

}  // namespace

FiniteJstitModel gen_model(const GenParams& params) { return gen_model_impl(params, {}); }

// ---------------------------------------------------------------------------
// Random formulas and scheme instances

Formula random_formula(Rng& rng, const FormulaPools& pools, int depth) {
  if (depth <= 0 || rng.chance(1, 4)) {
    if (rng.chance(1, 8)) return Formula::falsum();
    return Formula::atom(rng.pick(pools.atoms));
  }
  int top = rng.range(0, pools.allow_et ? 12 : 11);
  switch (top) {
    case 0: return Formula::neg(random_formula(rng, pools, depth - 1));
    case 1:
      return Formula::conj(random_formula(rng, pools, depth - 1),
                           random_formula(rng, pools, depth - 1));
    case 2:
      return Formula::disj(random_formula(rng, pools, depth - 1),
                           random_formula(rng, pools, depth - 1));
    case 3:
      return Formula::imp(random_formula(rng, pools, depth - 1),
                          random_formula(rng, pools, depth - 1));
    case 4: return Formula::box(random_formula(rng, pools, depth - 1));
    case 5: return Formula::diamond(random_formula(rng, pools, depth - 1));
    case 6:
      return Formula::cstit(rng.pick(pools.agents), random_formula(rng, pools, depth - 1));
    case 7:
      return Formula::cstit_dual(rng.pick(pools.agents), random_formula(rng, pools, depth - 1));
    case 8: return Formula::knows(random_formula(rng, pools, depth - 1));
    case 9:
      return Formula::just(rng.pick(pools.terms), random_formula(rng, pools, depth - 1));
    case 10:
      return Formula::prove(rng.pick(pools.agents), rng.pick(pools.terms),
                            random_formula(rng, pools, depth - 1));
    case 11:
      return Formula::proven(rng.pick(pools.terms), random_formula(rng, pools, depth - 1));
    default: return Formula::et(rng.pick(pools.terms));
  }
}

Formula random_scheme_instance(Rng& rng, Scheme s, const FormulaPools& pools,
                               const AgentSet& agents) {
  auto f = [&](int d = 2) { return random_formula(rng, pools, d); };
  auto t = [&]() { return rng.pick(pools.terms); };
  auto ag = [&]() -> const std::string& { return rng.pick(agents.list()); };
  using namespace schemes;
  switch (s) {
    case Scheme::A0_1: return a0_1(f(), f());
    case Scheme::A0_2: return a0_2(f(), f(), f());
    case Scheme::A0_3: return a0_3(f(), f());
    case Scheme::A0_4: return a0_4(f(), f());
    case Scheme::A0_5: return a0_5(f(), f());
    case Scheme::A0_6: return a0_6(f(), f());
    case Scheme::A0_7: return a0_7(f(), f());
    case Scheme::A0_8: return a0_8(f(), f(), f());
    case Scheme::A0_9: return a0_9(f(), f());
    case Scheme::A0_10: return a0_10(f());
    case Scheme::A0_11: return a0_11(f());
    case Scheme::A0_12: return a0_12(f());
    case Scheme::A1BoxK: return a1_box_k(f(), f());
    case Scheme::A1BoxT: return a1_box_t(f());
    case Scheme::A1Box5: return a1_box_5(f());
    case Scheme::A1AgK: return a1_ag_k(ag(), f(), f());
    case Scheme::A1AgT: return a1_ag_t(ag(), f());
    case Scheme::A1Ag5: return a1_ag_5(ag(), f());
    case Scheme::A2: return a2(ag(), f());
    case Scheme::A3: {
      std::vector<std::string> names = agents.list();
      // deterministic shuffle
      for (std::size_t i = names.size(); i > 1; --i)
        std::swap(names[i - 1], names[rng.below(i)]);
      std::size_t cnt = 1 + rng.below(names.size());
      std::vector<std::pair<std::string, Formula>> items;
      for (std::size_t k = 0; k < cnt; ++k) items.emplace_back(names[k], f());
      return a3(items);
    }
    case Scheme::A4: return a4(t(), t(), f(), f());
    case Scheme::A5: return a5(t(), f());
    case Scheme::A6: return a6(t(), t(), f());
    case Scheme::A7K: return a7_k(f(), f());
    case Scheme::A7T: return a7_t(f());
    case Scheme::A74: return a7_4(f());
    case Scheme::A8: return a8(f());
    case Scheme::B9: return b9(ag(), t(), f());
    case Scheme::B10: return b10(ag(), t(), f(), f());
    case Scheme::B11: return b11(t(), f());
    case Scheme::B12: return b12(t(), f(), f());
    case Scheme::B13: return b13(ag(), t(), f(), agents);
    case Scheme::AS4: {
      std::size_t cnt = 1 + rng.below(2);
      std::vector<std::pair<Term, Formula>> pairs;
      for (std::size_t k = 0; k < cnt; ++k) pairs.emplace_back(t(), f(1));
      return as4(pairs, agents);
    }
  }
  throw std::logic_error("unreachable");
}

// ---------------------------------------------------------------------------
// Soundness fuzz

std::string FuzzReport::to_text() const {
  std::ostringstream out;
  for (const auto& f : findings)
    out << "counterexample: model=" << f.model_index << " seed=" << f.model_seed
        << " scheme=" << f.scheme << " witness=(" << f.moment << "," << f.leaf
        << ") instance=" << f.instance << "\n";
  out << "soundness fuzz: " << checks << " validity checks on " << models << " models, "
      << findings.size() << " counterexamples\n";
  return out.str();
}

FuzzReport soundness_fuzz(int n_models, int n_instances, std::uint64_t seed,
                          const ConstantSpecification& cs) {
  FuzzReport rep;
  rep.models = n_models;

  std::map<std::string, std::set<Formula>> preload;
  for (const auto& m : cs.members())
    if (m.kind() == Formula::Kind::Just) preload[m.term().name()].insert(m.child());

  for (int k = 0; k < n_models; ++k) {
    GenParams gp;
    gp.seed = mix_seed(seed, static_cast<std::uint64_t>(k));
    gp.max_depth = 1 + (k % 3);
    gp.max_branching = 2 + (k % 2);
    gp.agents = (k % 2 == 0) ? std::vector<std::string>{"i", "j"}
                             : std::vector<std::string>{"j"};
    gp.evidence_mode = (k % 4 == 3) ? GenParams::EvidenceMode::SparseClosed
                                    : GenParams::EvidenceMode::Everything;
    FiniteJstitModel model = gen_model_impl(gp, preload);

    auto report_finding = [&](const std::string& scheme, const Formula& inst,
                              const std::pair<std::string, std::string>& w) {
      rep.findings.push_back(FuzzFinding{k, gp.seed, scheme, print_formula(inst), w.first,
                                         w.second, model.to_text()});
    };

    if (!validate(model).ok()) {
      report_finding("generator", Formula::falsum(), {"-", "-"});
      continue;
    }
    if (!is_cs_normal(model, cs)) {
      report_finding("cs-normality", Formula::falsum(), {"-", "-"});
      continue;
    }

    Evaluator ev(model);
    AgentSet agents(gp.agents);
    FormulaPools pools{gp.atom_pool, gp.term_pool, gp.agents, false};
    Rng rng(mix_seed(seed, 0x5eedULL + static_cast<std::uint64_t>(k)));

    for (Scheme s : all_schemes()) {
      for (int i = 0; i < n_instances; ++i) {
        Formula inst = random_scheme_instance(rng, s, pools, agents);
        ++rep.checks;
        if (auto w = ev.counterexample(inst))
          report_finding(std::string(scheme_id(s)), inst, *w);
      }
    }

    // Corpus conclusions are theorems of the empty specification, hence
    // valid on every model whose community contains their agents.
    for (const auto& entry : corpus()) {
      bool applicable = true;
      for (const auto& a : formula_agents(entry.conclusion))
        if (!agents.contains(a)) applicable = false;
      if (!applicable) continue;
      ++rep.checks;
      if (auto w = ev.counterexample(entry.conclusion))
        report_finding("corpus:" + entry.name, entry.conclusion, *w);
    }

    // Rule closure on verified validities.
    {
      Formula v1 = random_scheme_instance(rng, Scheme::A0_1, pools, agents);
      Formula v2 = random_scheme_instance(rng, Scheme::A5, pools, agents);
      // R2: from a validity infer K of it.
      ++rep.checks;
      if (auto w = ev.counterexample(Formula::knows(v1))) report_finding("rule:R2", v1, *w);
      // R1: v2 -> (v1 -> v2) is an A0-1 instance; modus ponens yields v1 -> v2.
      ++rep.checks;
      if (auto w = ev.counterexample(Formula::imp(v1, v2)))
        report_finding("rule:R1", Formula::imp(v1, v2), *w);
      // S4: from the A7-T validity K D -> D with D a ~Proven disjunction.
      std::vector<std::pair<Term, Formula>> pairs{
          {rng.pick(pools.terms), random_formula(rng, pools, 1)}};
      Formula d = schemes::neg_proven_disj(pairs);
      Formula conclusion = Formula::imp(
          Formula::knows(d), schemes::agents_neg_prove_conj(agents, pairs[0].first,
                                                            pairs[0].second));
      ++rep.checks;
      if (auto w = ev.counterexample(conclusion)) report_finding("rule:S4", conclusion, *w);
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Demonstrations

namespace {

const AgentSet& demo_agents() {
  static const AgentSet agents({"j"});
  return agents;
}

}  // namespace

FiniteJstitModel dense_time_quotient() {
  ModelData d;
  d.agents = {"j"};
  d.moments = {"-1", "0", "mid", "a"};
  d.order = {{"-1", "0"}, {"0", "mid"}, {"0", "a"}};
  d.choice.push_back(ChoiceEntry{"0", "j", {{"a"}, {"mid"}}});
  d.act[{"0", "mid"}] = {Term::var("x")};
  d.act[{"mid", "mid"}] = {Term::var("x"), Term::var("y")};
  d.evidence.push_back(EvidenceRule{std::nullopt, std::nullopt, EvidenceValue::all()});
  for (const auto& m : d.moments) {
    d.r.insert({m, m});
    d.r.insert({"-1", m});
  }
  d.r.insert({"0", "mid"});
  d.r.insert({"0", "a"});
  d.r_e = d.r;
  d.valuation["p"] = ValuationEntry{true, {}};
  d.valuation["q"] = ValuationEntry{true, {}};
  return FiniteJstitModel(std::move(d));
}

Formula separation_formula() {
  return parse_formula(
      "K(~Proven(x,p) | Proven(y,q)) -> "
      "~Prove(j,x,p) | (y:q -> Proven(y,q) | Prove(j,y,q))",
      demo_agents());
}

Formula separation_antecedent() {
  return parse_formula("K(~Proven(x,p) | Proven(y,q))", demo_agents());
}

Formula separation_witness_conjunction() {
  return parse_formula("Prove(j,x,p) & y:q & ~Prove(j,y,q) & ~Proven(y,q)", demo_agents());
}

Formula fmp_witness() {
  return parse_formula("K(<>p & <>~p)", demo_agents());
}

QuotientDemoResult quotient_demo() {
  QuotientDemoResult r;
  FiniteJstitModel model = dense_time_quotient();
  r.report = validate(model);
  r.exactly_one_violation = r.report.violations.size() == 1 &&
                            r.report.violations[0].constraint ==
                                Constraint::NoNewProofsGuaranteed &&
                            r.report.violations[0].where == "mid";
  EvalOptions waive;
  waive.waive_validation = true;
  Evaluator ev(model, waive);
  r.formula_false_at_witness = !ev.eval("0", "mid", separation_formula());
  r.antecedent_true = ev.eval("0", "mid", separation_antecedent());
  r.conjunction_true = ev.eval("0", "mid", separation_witness_conjunction());
  return r;
}

std::string QuotientDemoResult::to_text() const {
  std::ostringstream out;
  out << "dense-time quotient: moments -1 0 mid a; h1 = leaf a, h2 = leaf mid\n";
  out << "A = " << print_formula(separation_formula()) << "\n";
  out << (formula_false_at_witness ? "A falsified at (0,h2)\n"
                                   : "FAIL: A not falsified at (0,h2)\n");
  out << (antecedent_true
              ? "antecedent " + print_formula(separation_antecedent()) + " true at (0,h2)\n"
              : "FAIL: antecedent not true at (0,h2)\n");
  out << (conjunction_true ? "witness conjunction " +
                                 print_formula(separation_witness_conjunction()) +
                                 " true at (0,h2)\n"
                           : "FAIL: witness conjunction not true at (0,h2)\n");
  if (exactly_one_violation) {
    out << "constraint violated: " << constraint_name(report.violations[0].constraint) << " @ "
        << report.violations[0].where << "\n";
  } else {
    out << "FAIL: expected exactly one violation, report follows\n" << report.to_text();
  }
  return out.str();
}

FmpReport fmp_demo(int n_models, std::uint64_t seed) {
  FmpReport rep;
  rep.models = n_models;
  Formula witness = fmp_witness();
  Formula separation = separation_formula();
  for (int k = 0; k < n_models; ++k) {
    GenParams gp;
    gp.seed = mix_seed(seed, 0xf00dULL + static_cast<std::uint64_t>(k));
    gp.max_depth = 1 + (k % 3);
    gp.max_branching = 2 + (k % 2);
    gp.agents = (k % 2 == 0) ? std::vector<std::string>{"i", "j"}
                             : std::vector<std::string>{"j"};
    gp.evidence_mode = (k % 4 == 3) ? GenParams::EvidenceMode::SparseClosed
                                    : GenParams::EvidenceMode::Everything;
    FiniteJstitModel model = gen_model(gp);
    Evaluator ev(model);
    for (const auto& m : model.moments())
      for (const auto& h : model.histories_through(m)) {
        ++rep.pairs;
        if (ev.eval(m, h, witness)) {
          ++rep.fmp_witness_true;
          rep.notes.push_back("model " + std::to_string(k) + ": witness true at (" + m + "," +
                              h + ")");
        }
      }
    if (auto w = ev.counterexample(separation)) {
      rep.notes.push_back("model " + std::to_string(k) + ": separation formula false at (" +
                          w->first + "," + w->second + ")");
    } else {
      ++rep.separation_valid_models;
    }
  }
  return rep;
}

std::string FmpReport::to_text() const {
  std::ostringstream out;
  for (const auto& n : notes) out << "unexpected: " << n << "\n";
  out << "finite-history models: " << print_formula(fmp_witness()) << " true at "
      << fmp_witness_true << " of " << pairs << " pairs across " << models << " models\n";
  out << "separation formula valid in " << separation_valid_models << " of " << models
      << " models\n";
  return out.str();
}

}  // namespace jstit
