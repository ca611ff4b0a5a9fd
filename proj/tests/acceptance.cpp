// Acceptance report: one PASS/FAIL line per criterion. Exit status is the
// number of failures.
#include <algorithm>
#include <array>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "foasl/models.hpp"
#include "foasl/prover.hpp"
#include "gen.hpp"
#include "mutants.hpp"
#include "suite.hpp"

using namespace foasl;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;

  void fail(const std::string& why) {
    pass = false;
    if (!detail.empty()) detail += "; ";
    detail += why;
  }
  void note(const std::string& s) {
    if (!detail.empty()) detail += "; ";
    detail += s;
  }
};

std::string fmt(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3fs", s);
  return buf;
}

Outcome table2_rows() {
  Outcome o;
  std::string times;
  for (int row = 1; row <= 12; ++row) {
    auto g = suite::table2(row);
    auto t0 = Clock::now();
    auto r = prove(g, suite::theory("reynolds", g));
    double s = since(t0);
    times += (row > 1 ? " " : "") + std::to_string(row) + ":" + fmt(s);
    if (!r.proved) o.fail("row " + std::to_string(row) + " not proved");
    else if (!check_derivation(*r.derivation, suite::theory("reynolds", g), g))
      o.fail("row " + std::to_string(row) + " derivation rejected");
    if (s > 60.0) o.fail("row " + std::to_string(row) + " over 60s");
  }
  o.note(times);
  return o;
}

Outcome row7_regression() {
  Outcome o;
  auto g = suite::table2(7);
  auto t = suite::theory("reynolds", g);
  auto r = prove(g, t);
  if (!r.proved) {
    o.fail("row 7 not proved");
    return o;
  }
  auto c = check_derivation(*r.derivation, t, g);
  if (!c) o.fail("check: " + c.reason);
  auto leaves = leaf_rules(*r.derivation);
  for (RuleId want : {RuleId::MTrueR, RuleId::Id, RuleId::BotL})
    if (std::find(leaves.begin(), leaves.end(), want) == leaves.end())
      o.fail(std::string("no ") + std::string(rule_name(want)) + " leaf");
  o.note("size " + std::to_string(r.derivation->size()) + ", " + std::to_string(leaves.size()) + " leaves");
  return o;
}

Outcome soundness_gate() {
  Outcome o;
  std::size_t cases = 0, theory_models = 0, live = 0;
  for (const auto& c : suite::provable()) {
    ProverOptions opts;
    opts.derived_rules = c.derived_rules;
    auto r = prove(c.goal, c.theory, {}, opts);
    if (!r.proved) {
      o.fail(c.name + " not proved");
      continue;
    }
    ++cases;
    RefuteStats st;
    auto cx = refute(c.goal, c.theory, 20241, 300, {4, 3}, &st);
    theory_models += st.theory_models;
    if (st.theory_models) ++live;
    if (cx) o.fail(c.name + " refuted by sample " + std::to_string(cx->index));
  }
  o.note(std::to_string(cases) + " proved cases x 300 samples, " + std::to_string(live) +
         " cases with theory models, " + std::to_string(theory_models) + " model checks in total");
  return o;
}

Outcome non_theorems() {
  Outcome o;
  std::string times;
  for (const auto& s : suite::non_theorems()) {
    auto g = parse_formula(s);
    auto t0 = Clock::now();
    auto r = prove(g, TheorySet{});
    times += (times.empty() ? "" : " ") + fmt(since(t0));
    if (r.proved) o.fail(s + " proved");
    if (!refute(g, TheorySet{}, 20241, 300, {4, 3})) o.fail(s + " has no counterexample");
  }
  auto nil = parse_formula(suite::non_theorems()[2]);
  if (!prove(nil, suite::theory("reynolds", nil)).proved) o.fail("formula 10 not proved under reynolds");
  o.note("NotProved in " + times);
  return o;
}

Outcome admissibility() {
  Outcome o;
  for (const auto& s : suite::admissibility()) {
    auto g = parse_formula(s);
    auto t = suite::theory("reynolds", g);
    ProverOptions off;
    off.derived_rules = false;
    bool on = prove(g, t).proved;
    bool plain = prove(g, t, {}, off).proved;
    if (!on || !plain) o.fail(s + (on ? " not proved without derived rules" : " not proved"));
    if (on != plain) o.fail(s + " verdicts differ");
  }
  return o;
}

Outcome acyclicity() {
  Outcome o;
  for (const auto& s : suite::acyclicity()) {
    auto g = parse_formula(s);
    auto t = suite::theory("thakur:2", g);
    auto r = prove(g, t);
    if (!r.proved || !check_derivation(*r.derivation, t, g)) o.fail(s + " not proved");
  }
  return o;
}

std::pair<int, std::string> capture(const std::string& cmd) {
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return {-1, ""};
  std::array<char, 4096> buf;
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), p)) out.append(buf.data(), n);
  return {pclose(p), out};
}

Outcome calculus_tests() {
  Outcome o;
  const std::string bin = FOASL_CALCULUS_TESTS;
  auto [rc, listing] = capture(bin + " --gtest_list_tests --gtest_filter='Calculus.*'");
  if (rc != 0) {
    o.fail("cannot list " + bin);
    return o;
  }
  std::vector<std::string> names;
  std::istringstream in(listing);
  for (std::string line; std::getline(in, line);)
    if (line.rfind("  ", 0) == 0) names.push_back(line.substr(2));
  int rules = 0;
  for (int i = 0; i <= static_cast<int>(RuleId::ForallR); ++i, ++rules) {
    std::string n(rule_name(static_cast<RuleId>(i)));
    auto same = [&](const std::string& t) {
      return std::equal(t.begin(), t.end(), n.begin(), n.end(),
                        [](char a, char b) { return std::tolower(a) == std::tolower(b); });
    };
    if (std::none_of(names.begin(), names.end(), same)) o.fail("no apply test for " + n);
  }
  auto [run_rc, log] = capture(bin + " --gtest_filter='Calculus.*:Checker.*' 2>&1");
  if (run_rc != 0) o.fail("calculus tests failed");
  o.note(std::to_string(rules) + " rules, " + std::to_string(names.size()) + " apply tests");
  return o;
}

Outcome algebra_axioms() {
  Outcome o;
  if (!validate_algebra(PartialMonoid(1)).empty()) o.fail("trivial algebra rejected");
  if (!validate_algebra(PartialMonoid(2)).empty()) o.fail("{eps,a} rejected");
  int caught = 0;
  for (const auto& m : mutants::mutants()) {
    auto vs = validate_algebra(m.m);
    if (std::any_of(vs.begin(), vs.end(), [&](const Violation& v) { return v.axiom == m.axiom; })) ++caught;
    else o.fail(to_string(m.axiom) + " mutant missed");
  }
  o.note(std::to_string(caught) + "/8 mutants caught");
  return o;
}

Outcome parser_round_trip() {
  Outcome o;
  gen::Gen g(20240607);
  int ok = 0;
  const int n = 1500;
  for (int i = 0; i < n; ++i) {
    Formula f = g.formula(1 + i % 5);
    std::string text = to_string(f);
    try {
      if (parse_formula(text) == f) ++ok;
      else o.fail("mismatch: " + text);
    } catch (const std::exception& e) {
      o.fail("parse error on " + text);
    }
    if (!o.pass) break;
  }
  o.note(std::to_string(ok) + "/" + std::to_string(n) + " formulas");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"Benchmark formulas (rows 1-12)", table2_rows},
      {"Row 7 derivation regression", row7_regression},
      {"Soundness sampling gate", soundness_gate},
      {"Non-theorem suite", non_theorems},
      {"Points-to admissibility suite", admissibility},
      {"Acyclicity under thakur:2", acyclicity},
      {"Calculus unit tests", calculus_tests},
      {"Algebra axioms", algebra_axioms},
      {"Parser round trip", parser_round_trip},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    auto t0 = Clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << name << " (" << fmt(since(t0)) << ")"
              << (o.detail.empty() ? "" : ": " + o.detail) << std::endl;
  }
  return failures;
}
