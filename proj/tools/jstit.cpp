// Command-line front end: parsing, model validation, evaluation, proof
// checking, soundness fuzzing, and the bundled demonstrations.
//
// Exit codes: 0 success, 1 negative verdict (invalid model, rejected proof,
// falsified formula, fuzz counterexample), 2 usage error.

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "jstit/harness.hpp"
#include "jstit/model.hpp"
#include "jstit/proofkit.hpp"
#include "jstit/semantics.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kUsage = 2;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CLI::ValidationError("cannot read file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> split_agents(const std::string& csv) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : csv) {
    if (c == ',' || c == ' ') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

struct Failure {
  int code;
  std::string message;
};

}  // namespace

int main(int argc, char** argv) {
  using namespace jstit;

  CLI::App app{"toolkit for the explicit justification stit logic"};
  app.require_subcommand(1);

  std::string expr, file, model_path, moment, leaf, cs_path, out_path, agents_csv = "i,j";
  bool enable_et = false, waive = false, pi_prime = false;
  int n_models = 50, n_instances = 10;
  std::uint64_t seed = 1;
  std::string emit_model;

  auto* cmd_parse = app.add_subcommand("parse", "parse a formula and print its canonical form");
  cmd_parse->add_option("-e,--expr", expr, "formula text");
  cmd_parse->add_option("-f,--file", file, "file with one formula per line");
  cmd_parse->add_option("--agents", agents_csv, "agent community (comma separated)");
  cmd_parse->add_flag("--enable-et", enable_et, "allow the Et extension atom");

  auto* cmd_validate = app.add_subcommand("validate", "check every model constraint");
  cmd_validate->add_option("model", model_path, "model file")->required();

  auto* cmd_eval = app.add_subcommand("eval", "evaluate a formula at a moment-history pair");
  cmd_eval->add_option("model", model_path, "model file")->required();
  cmd_eval->add_option("-m,--moment", moment, "moment id")->required();
  cmd_eval->add_option("-l,--leaf", leaf, "history, by its leaf moment")->required();
  cmd_eval->add_option("-e,--expr", expr, "formula text")->required();
  cmd_eval->add_flag("--waive-validation", waive, "evaluate even on an invalid model");
  cmd_eval->add_flag("--enable-et", enable_et, "allow the Et extension atom");

  auto* cmd_valid = app.add_subcommand("valid", "check a formula at every moment-history pair");
  cmd_valid->add_option("model", model_path, "model file")->required();
  cmd_valid->add_option("-e,--expr", expr, "formula text")->required();
  cmd_valid->add_flag("--waive-validation", waive, "evaluate even on an invalid model");
  cmd_valid->add_flag("--enable-et", enable_et, "allow the Et extension atom");

  auto* cmd_prove = app.add_subcommand("prove", "proof utilities");
  cmd_prove->require_subcommand(1);
  auto* cmd_check = cmd_prove->add_subcommand("check", "check a proof file");
  cmd_check->add_option("proof", file, "proof file")->required();
  cmd_check->add_option("--cs", cs_path, "constant specification file");
  cmd_check->add_flag("--pi-prime", pi_prime, "use the axiomatic variant (AS4, no S4 rule)");
  cmd_check->add_option("--agents", agents_csv, "default agents when the file has no header");
  auto* cmd_elim = cmd_prove->add_subcommand("eliminate-s4", "expand S4 steps into AS4 axioms");
  cmd_elim->add_option("proof", file, "proof file")->required();
  cmd_elim->add_option("-o,--out", out_path, "output proof file")->required();
  cmd_elim->add_option("--cs", cs_path, "constant specification file");
  cmd_elim->add_option("--agents", agents_csv, "default agents when the file has no header");
  auto* cmd_corpus = cmd_prove->add_subcommand("corpus", "write the bundled proof corpus");
  cmd_corpus->add_option("-o,--out", out_path, "output directory")->required();

  auto* cmd_fuzz = app.add_subcommand("fuzz", "soundness fuzzing over generated models");
  cmd_fuzz->add_option("--models", n_models, "number of generated models");
  cmd_fuzz->add_option("--instances", n_instances, "instances per scheme per model");
  cmd_fuzz->add_option("--seed", seed, "fuzz seed");
  cmd_fuzz->add_option("--cs", cs_path, "constant specification file");
  cmd_fuzz->add_option("--emit-model", emit_model, "dump the first counterexample model here");

  auto* cmd_demo = app.add_subcommand("demo", "bundled demonstrations");
  cmd_demo->require_subcommand(1);
  auto* cmd_prop1 = cmd_demo->add_subcommand(
      "prop1", "dense-time countermodel quotient for the separation formula");
  auto* cmd_fmp = cmd_demo->add_subcommand(
      "fmp", "failure of the finite model property, at finite scale");
  cmd_fmp->add_option("--models", n_models, "number of generated models");
  cmd_fmp->add_option("--seed", seed, "seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kUsage;
  }

  try {
    AgentSet agents(split_agents(agents_csv));
    ParseOptions popts;
    popts.allow_et = enable_et;

    if (*cmd_parse) {
      if (expr.empty() == file.empty())
        throw Failure{kUsage, "parse: give exactly one of -e or -f"};
      std::vector<std::string> inputs;
      if (!expr.empty()) {
        inputs.push_back(expr);
      } else {
        std::istringstream in(slurp(file));
        std::string line;
        while (std::getline(in, line))
          if (!line.empty()) inputs.push_back(line);
      }
      for (const auto& text : inputs)
        std::cout << print_formula(parse_formula(text, agents, popts)) << "\n";
      return kOk;
    }

    if (*cmd_validate) {
      FiniteJstitModel model = FiniteJstitModel::parse(slurp(model_path));
      ConstraintReport report = validate(model);
      std::cout << report.to_text();
      return report.ok() ? kOk : kNegative;
    }

    if (*cmd_eval) {
      FiniteJstitModel model = FiniteJstitModel::parse(slurp(model_path));
      Formula f = parse_formula(expr, model.agents(), popts);
      EvalOptions opts;
      opts.enable_et = enable_et;
      opts.waive_validation = waive;
      Evaluator ev(model, opts);
      bool value = ev.eval(moment, leaf, f);
      std::cout << (value ? "true" : "false") << "\n";
      return value ? kOk : kNegative;
    }

    if (*cmd_valid) {
      FiniteJstitModel model = FiniteJstitModel::parse(slurp(model_path));
      Formula f = parse_formula(expr, model.agents(), popts);
      EvalOptions opts;
      opts.enable_et = enable_et;
      opts.waive_validation = waive;
      Evaluator ev(model, opts);
      if (auto w = ev.counterexample(f)) {
        std::cout << "falsified at (" << w->first << "," << w->second << ")\n";
        return kNegative;
      }
      std::cout << "valid in the model\n";
      return kOk;
    }

    if (*cmd_prove) {
      ConstantSpecification cs;
      if (!cs_path.empty()) cs = ConstantSpecification::parse(slurp(cs_path), agents);
      if (*cmd_check) {
        Proof p = parse_proof(slurp(file), agents);
        Verdict v = check_proof(p, cs, pi_prime ? ProofMode::PiPrime : ProofMode::Pi);
        if (v.accepted) {
          std::cout << "accepted: " << print_formula(p.conclusion()) << "\n";
          return kOk;
        }
        std::cout << "rejected at line " << v.line << ": " << v.reason << "\n";
        return kNegative;
      }
      if (*cmd_elim) {
        Proof p = parse_proof(slurp(file), agents);
        Proof out = eliminate_s4(p, cs);
        std::ofstream os(out_path, std::ios::binary);
        if (!os) throw Failure{kUsage, "cannot write " + out_path};
        os << print_proof(out);
        std::cout << "wrote " << out.lines.size() << " lines proving "
                  << print_formula(out.conclusion()) << "\n";
        return kOk;
      }
      if (*cmd_corpus) {
        std::filesystem::create_directories(out_path);
        for (const auto& entry : corpus()) {
          std::string name = entry.name;
          for (auto& c : name) c = (c == '-') ? '_' : static_cast<char>(std::tolower(c));
          std::ofstream os(std::filesystem::path(out_path) / (name + ".proof"),
                           std::ios::binary);
          os << print_proof(entry.proof);
        }
        std::cout << "wrote " << corpus().size() << " proofs to " << out_path << "\n";
        return kOk;
      }
    }

    if (*cmd_fuzz) {
      ConstantSpecification cs;
      if (!cs_path.empty()) cs = ConstantSpecification::parse(slurp(cs_path), agents);
      FuzzReport rep = soundness_fuzz(n_models, n_instances, seed, cs);
      std::cout << rep.to_text();
      if (!rep.ok() && !emit_model.empty()) {
        std::ofstream os(emit_model, std::ios::binary);
        os << rep.findings.front().model_text;
        std::cout << "counterexample model written to " << emit_model << "\n";
      }
      return rep.ok() ? kOk : kNegative;
    }

    if (*cmd_demo) {
      if (*cmd_prop1) {
        QuotientDemoResult r = quotient_demo();
        std::cout << r.to_text();
        return r.ok() ? kOk : kNegative;
      }
      if (*cmd_fmp) {
        FmpReport rep = fmp_demo(n_models, seed);
        std::cout << rep.to_text();
        return rep.ok() ? kOk : kNegative;
      }
    }
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  } catch (const SyntaxError& e) {
    std::cerr << "syntax error: " << e.what() << "\n";
    return kNegative;
  } catch (const ModelError& e) {
    std::cerr << "model error: " << e.what() << "\n";
    return kNegative;
  } catch (const ProofError& e) {
    std::cerr << "proof error: " << e.what() << "\n";
    return kNegative;
  } catch (const EvalError& e) {
    std::cerr << "evaluation error: " << e.what() << "\n";
    return kNegative;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }

  return kUsage;
}
