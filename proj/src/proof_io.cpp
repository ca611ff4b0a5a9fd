#include "foasl/proof_io.hpp"

#include <fstream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace foasl {

using nlohmann::json;

namespace {

void text_node(std::ostream& out, const Derivation& d, int depth) {
  out << std::string(2 * depth, ' ') << '[' << rule_name(d.applied.rule) << "] " << to_string(d.node)
      << '\n';
  for (const auto& c : d.children) text_node(out, c, depth + 1);
}

json term_json(const Term& t) { return {{"kind", t.is_var() ? "var" : "const"}, {"name", t.name}}; }

Term term_of(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  const auto name = j.at("name").get<std::string>();
  if (name.empty()) throw std::runtime_error("empty term name");
  if (kind == "var") return Term::var(name);
  if (kind == "const") return Term::constant(name);
  throw std::runtime_error("bad term kind '" + kind + "'");
}

json atom_json(const RelAtom& a) { return {to_string(a.left), to_string(a.right), to_string(a.result)}; }

RelAtom atom_of(const json& j) {
  if (!j.is_array() || j.size() != 3) throw std::runtime_error("relational atom needs three labels");
  return {parse_label(j[0].get<std::string>()), parse_label(j[1].get<std::string>()),
          parse_label(j[2].get<std::string>())};
}

json lf_json(const LabelledFormula& lf) { return {to_string(lf.label), to_string(lf.formula)}; }

LabelledFormula lf_of(const json& j) {
  if (!j.is_array() || j.size() != 2) throw std::runtime_error("labelled formula needs label and formula");
  return {parse_label(j[0].get<std::string>()), parse_formula(j[1].get<std::string>())};
}

json sequent_json(const Sequent& s) {
  json g = json::array(), gamma = json::array(), delta = json::array();
  for (const auto& a : s.atoms()) g.push_back(atom_json(a));
  for (const auto& lf : s.gamma()) gamma.push_back(lf_json(lf));
  for (const auto& lf : s.delta()) delta.push_back(lf_json(lf));
  return {{"atoms", g}, {"gamma", gamma}, {"delta", delta}};
}

Sequent sequent_of(const json& j) {
  std::vector<RelAtom> g;
  std::vector<LabelledFormula> gamma, delta;
  for (const auto& a : j.at("atoms")) g.push_back(atom_of(a));
  for (const auto& lf : j.at("gamma")) gamma.push_back(lf_of(lf));
  for (const auto& lf : j.at("delta")) delta.push_back(lf_of(lf));
  return Sequent(std::move(g), std::move(gamma), std::move(delta));
}

int add_nodes(const Derivation& d, json& nodes) {
  const int id = static_cast<int>(nodes.size());
  nodes.push_back(json::object());
  const auto& r = d.applied;
  json rec{{"id", id}, {"rule", std::string(rule_name(r.rule))}, {"sequent", sequent_json(d.node)}};
  json formulas = json::array(), atoms = json::array(), terms = json::array(), fresh = json::array();
  for (const auto& lf : r.formulas) formulas.push_back(lf_json(lf));
  for (const auto& a : r.atoms) atoms.push_back(atom_json(a));
  for (const auto& t : r.terms) terms.push_back(term_json(t));
  for (Label l : r.fresh_labels) fresh.push_back(to_string(l));
  rec["principal"] = {{"formulas", formulas}, {"atoms", atoms}};
  rec["terms"] = terms;
  rec["fresh_labels"] = fresh;
  if (r.label) rec["label"] = to_string(*r.label);
  if (r.fresh_var) rec["fresh_var"] = term_json(*r.fresh_var);
  json kids = json::array();
  for (const auto& c : d.children) kids.push_back(add_nodes(c, nodes));
  rec["children"] = kids;
  nodes[id] = std::move(rec);
  return id;
}

Derivation build(const json& nodes, int id, std::vector<bool>& used) {
  if (id < 0 || id >= static_cast<int>(nodes.size())) throw std::runtime_error("child id out of range");
  if (used[id]) throw std::runtime_error("node " + std::to_string(id) + " used twice");
  used[id] = true;
  const json& rec = nodes[id];
  if (rec.at("id").get<int>() != id) throw std::runtime_error("node ids must match their position");
  Derivation d;
  d.node = sequent_of(rec.at("sequent"));
  auto& r = d.applied;
  const auto name = rec.at("rule").get<std::string>();
  auto rule = parse_rule_name(name);
  if (!rule) throw std::runtime_error("unknown rule '" + name + "'");
  r.rule = *rule;
  for (const auto& lf : rec.at("principal").at("formulas")) r.formulas.push_back(lf_of(lf));
  for (const auto& a : rec.at("principal").at("atoms")) r.atoms.push_back(atom_of(a));
  for (const auto& t : rec.at("terms")) r.terms.push_back(term_of(t));
  for (const auto& l : rec.at("fresh_labels")) r.fresh_labels.push_back(parse_label(l.get<std::string>()));
  if (rec.contains("label")) r.label = parse_label(rec["label"].get<std::string>());
  if (rec.contains("fresh_var")) r.fresh_var = term_of(rec["fresh_var"]);
  for (const auto& c : rec.at("children")) d.children.push_back(build(nodes, c.get<int>(), used));
  return d;
}

}  // namespace

void write_proof_text(std::ostream& out, const Derivation& d) { text_node(out, d, 0); }

std::string proof_to_json(const Derivation& d) {
  json nodes = json::array();
  add_nodes(d, nodes);
  return json{{"format", "foasl-derivation"}, {"version", 1}, {"nodes", nodes}}.dump(1);
}

Derivation proof_from_json(const std::string& text) {
  try {
    json j = json::parse(text);
    const json& nodes = j.at("nodes");
    if (!nodes.is_array() || nodes.empty()) throw std::runtime_error("no nodes");
    std::vector<bool> used(nodes.size(), false);
    Derivation d = build(nodes, 0, used);
    for (bool u : used)
      if (!u) throw std::runtime_error("unreachable node");
    return d;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("bad proof file: ") + e.what());
  } catch (const ParseError& e) {
    throw std::runtime_error(std::string("bad formula in proof file: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("bad proof file: ") + e.what());
  }
}

void emit_proof(const Derivation& d, const std::string& path) {
  std::ofstream text(path);
  if (!text) throw std::runtime_error("cannot write " + path);
  write_proof_text(text, d);
  std::ofstream js(path + ".json");
  if (!js) throw std::runtime_error("cannot write " + path + ".json");
  js << proof_to_json(d) << '\n';
  if (!text || !js) throw std::runtime_error("write failed for " + path);
}

}  // namespace foasl
