#include "foasl/cli.hpp"

#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "foasl/models.hpp"
#include "foasl/proof_io.hpp"
#include "foasl/prover.hpp"
#include "foasl/theories.hpp"

namespace foasl {

namespace {

struct Invocation {
  std::string input;
  std::string theory = "none";
  std::string axioms;
  std::uint64_t budget = 10000;
  int depth = 200;
  double timeout = 60.0;
  std::string emit_proof;
  bool check = false;
  bool no_derived = false;
  std::size_t models = 100;
  std::uint64_t seed = 0;
  int max_worlds = 4;
  int max_domain = 3;
  std::string emit_model;
};

struct UserError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UserError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Formula parse_file(const std::string& path, const std::string& text) {
  try {
    return parse_formula(text);
  } catch (const ParseError& e) {
    std::string msg = path + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) + ": " +
                      e.what();
    if (!e.expected().empty()) {
      msg += " (expected";
      for (const auto& x : e.expected()) msg += " " + x;
      msg += ")";
    }
    throw UserError(msg);
  }
}

// Formulas separated by ';'. Comments run to the end of the line.
std::vector<Formula> read_axioms(const std::string& path) {
  std::string text;
  std::istringstream lines(slurp(path));
  for (std::string line; std::getline(lines, line);) {
    if (auto p = line.find('#'); p != std::string::npos) line.erase(p);
    text += line + "\n";
  }
  std::vector<Formula> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find(';', start);
    if (end == std::string::npos) end = text.size();
    std::string piece = text.substr(start, end - start);
    if (piece.find_first_not_of(" \t\r\n") != std::string::npos)
      out.push_back(universal_closure(parse_file(path, piece)));
    start = end + 1;
  }
  return out;
}

TheorySet make_theory(const Invocation& inv, const Formula& goal) {
  TheoryId id;
  try {
    id = parse_theory_id(inv.theory);
  } catch (const std::invalid_argument& e) {
    throw UserError(e.what());
  }
  std::vector<Formula> extra;
  if (!inv.axioms.empty()) extra = read_axioms(inv.axioms);
  Signature sig = signature_of(goal);
  for (const auto& f : extra) sig.merge(signature_of(f));
  std::set<std::size_t> arities(sig.pointsto_arities.begin(), sig.pointsto_arities.end());
  if (arities.empty()) arities.insert(2);
  TheorySet t = theory_formulas(id, arities);
  for (const auto& f : extra) t.add(f, {});
  return t;
}

void validate(const Invocation& inv) {
  if (inv.budget < 1 || inv.depth < 1 || !(inv.timeout > 0))
    throw UserError("budget, depth and timeout must be positive");
  if (inv.models < 1) throw UserError("--models must be positive");
  if (inv.max_worlds < 1 || inv.max_worlds > 32) throw UserError("--max-worlds must be in 1..32");
  if (inv.max_domain < 1 || inv.max_domain > 16) throw UserError("--max-domain must be in 1..16");
}

int do_prove(const Invocation& inv, std::ostream& out, std::ostream& err) {
  const Formula goal = universal_closure(parse_file(inv.input, slurp(inv.input)));
  const TheorySet theory = make_theory(inv, goal);
  SearchBudget budget{inv.budget, inv.depth, inv.timeout};
  ProverOptions opts;
  opts.derived_rules = !inv.no_derived;
  const ProofResult r = prove(goal, theory, budget, opts);
  const auto& st = r.stats;
  if (!r.proved) {
    out << "NotProved" << (r.budget_exhausted ? " (budget exhausted)" : "") << " in " << st.seconds
        << " s, generative steps " << st.generative_steps << '\n';
    return kExitNegative;
  }
  const Derivation& d = *r.derivation;
  out << "Proved in " << st.seconds << " s, generative steps " << st.generative_steps
      << ", saturation steps " << st.saturation_steps << ", proof size " << d.size() << ", height "
      << d.height() << '\n';
  if (!inv.emit_proof.empty()) {
    emit_proof(d, inv.emit_proof);
    out << "proof written to " << inv.emit_proof << " and " << inv.emit_proof << ".json\n";
  }
  if (inv.check) {
    CheckResult c = check_derivation(d, theory, goal);
    if (!inv.emit_proof.empty() && c) {
      // the emitted file must reload to a derivation that checks as well
      c = check_derivation(proof_from_json(slurp(inv.emit_proof + ".json")), theory, goal);
    }
    if (!c) {
      err << "proof check failed: " << c.reason << '\n';
      return kExitError;
    }
    out << "check: ok\n";
  }
  return kExitOk;
}

int do_model_check(const Invocation& inv, std::ostream& out) {
  const Formula goal = universal_closure(parse_file(inv.input, slurp(inv.input)));
  const TheorySet theory = make_theory(inv, goal);
  RefuteStats stats;
  auto cex = refute(goal, theory, inv.seed, inv.models, {inv.max_worlds, inv.max_domain}, &stats);
  if (!cex) {
    out << "no counterexample among " << stats.samples << " samples (" << stats.theory_models
        << " satisfy the theory)\n";
    return kExitOk;
  }
  const std::string path = inv.emit_model.empty() ? inv.input + ".model" : inv.emit_model;
  std::ofstream file(path);
  if (!file) throw UserError("cannot write " + path);
  write_model(file, cex->model, cex->world);
  out << "counterexample: sample " << cex->index << ", world " << cex->world << ", written to " << path
      << '\n';
  return kExitNegative;
}

int do_parse(const Invocation& inv, std::ostream& out) {
  out << to_string(parse_file(inv.input, slurp(inv.input))) << '\n';
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Prover for first-order abstract separation logic", "foasl"};
  app.require_subcommand(1);
  Invocation inv;

  auto common = [&](CLI::App* sub) {
    sub->add_option("input", inv.input, "formula file")->required();
    sub->add_option("--theory", inv.theory, "none|reynolds|vp|lee|thakur:<d>");
    sub->add_option("--axioms", inv.axioms, "file of extra closed formulas separated by ';'");
  };
  auto search = [&](CLI::App* sub) {
    sub->add_option("--budget", inv.budget, "generative steps");
    sub->add_option("--depth", inv.depth, "maximum iterative-deepening bound");
    sub->add_option("--timeout", inv.timeout, "seconds");
  };

  CLI::App* prove_cmd = app.add_subcommand("prove", "search for a derivation");
  common(prove_cmd);
  search(prove_cmd);
  prove_cmd->add_option("--emit-proof", inv.emit_proof, "write the proof tree to PATH and PATH.json");
  prove_cmd->add_flag("--check", inv.check, "re-validate the derivation");
  prove_cmd->add_flag("--no-derived-rules", inv.no_derived, "disable the points-to macros");

  CLI::App* model_cmd = app.add_subcommand("model-check", "look for a finite counter-model");
  common(model_cmd);
  model_cmd->add_option("--models", inv.models, "number of sampled models");
  model_cmd->add_option("--seed", inv.seed, "sampling seed");
  model_cmd->add_option("--max-worlds", inv.max_worlds, "largest algebra");
  model_cmd->add_option("--max-domain", inv.max_domain, "largest domain");
  model_cmd->add_option("--emit-model", inv.emit_model, "counterexample file (default INPUT.model)");

  CLI::App* parse_cmd = app.add_subcommand("parse", "print the normalized formula");
  parse_cmd->add_option("input", inv.input, "formula file")->required();

  std::vector<std::string> argv_store{"foasl"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& a : argv_store) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    if (code == 0) return kExitOk;
    err << app.help();
    return kExitError;
  }

  try {
    validate(inv);
    if (prove_cmd->parsed()) return do_prove(inv, out, err);
    if (model_cmd->parsed()) return do_model_check(inv, out);
    return do_parse(inv, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kExitError;
}

}  // namespace foasl
