#pragma once

#include <string>

#include "json.hpp"
#include "tagforge/dependency.hpp"
#include "tagforge/derivation.hpp"
#include "tagforge/grammar.hpp"
#include "tagforge/parser.hpp"

namespace tagforge {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// JSON

namespace detail {

inline TagError json_error(const std::string& what) { return TagError(ErrorKind::syntax, "json: " + what); }

template <class T>
T json_get(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw json_error(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw json_error(std::string("field '") + key + "' has the wrong type");
  }
}

}  // namespace detail

inline Json to_json(const TreeNode& n) {
  Json j{{"kind", std::string(to_string(n.kind))}, {"label", n.label}};
  if (!n.origin.empty()) j["origin"] = {{"tree", n.origin.tree}, {"address", n.origin.address.str()}};
  if (n.adjoined) j["adjoined"] = true;
  if (!n.children.empty()) {
    j["children"] = Json::array();
    for (const auto& c : n.children) j["children"].push_back(to_json(c));
  }
  return j;
}

inline TreeNode tree_node_from_json(const Json& j) {
  auto kind = node_kind_from_string(detail::json_get<std::string>(j, "kind"));
  if (!kind) throw detail::json_error("unknown node kind");
  TreeNode n = TreeNode::leaf(*kind, detail::json_get<std::string>(j, "label"));
  if (j.contains("origin"))
    n.origin = {detail::json_get<std::string>(j["origin"], "tree"),
                NodeAddress::parse(detail::json_get<std::string>(j["origin"], "address"))};
  if (j.contains("adjoined")) n.adjoined = detail::json_get<bool>(j, "adjoined");
  if (j.contains("children"))
    for (const auto& c : j["children"]) n.children.push_back(tree_node_from_json(c));
  return n;
}

inline Json to_json(const PhraseTree& t) { return {{"type", "derived"}, {"yield", t.yield()}, {"tree", to_json(t.root())}}; }

inline PhraseTree phrase_tree_from_json(const Json& j) {
  return PhraseTree(tree_node_from_json(detail::json_get<Json>(j, "tree")));
}

inline Json to_json(const ElementaryTree& t) {
  return {{"id", t.id}, {"shape", std::string(to_string(t.shape))}, {"root", to_json(t.root)}};
}

inline ElementaryTree elementary_from_json(const Json& j) {
  auto shape = detail::json_get<std::string>(j, "shape");
  if (shape != "initial" && shape != "aux") throw detail::json_error("shape must be initial or aux");
  return {detail::json_get<std::string>(j, "id"), shape == "aux" ? TreeShape::auxiliary : TreeShape::initial,
          tree_node_from_json(detail::json_get<Json>(j, "root"))};
}

inline Json to_json(const Grammar& g) {
  Json j{{"type", "grammar"}, {"start", g.start_symbol}};
  if (g.declares_nonterminals()) j["categories"] = g.nonterminals;
  j["trees"] = Json::array();
  for (const auto& [_, t] : g.trees) j["trees"].push_back(to_json(t));
  j["sets"] = Json::array();
  for (const auto& [id, s] : g.tree_sets) {
    Json members = Json::array();
    for (const auto& m : s.members) members.push_back(to_json(m));
    j["sets"].push_back({{"id", id}, {"members", members}});
  }
  return j;
}

inline Grammar grammar_from_json(const Json& j) {
  Grammar g;
  if (j.contains("start")) g.start_symbol = detail::json_get<std::string>(j, "start");
  if (j.contains("categories")) g.nonterminals = detail::json_get<std::set<std::string>>(j, "categories");
  for (const auto& t : detail::json_get<Json>(j, "trees")) g.add_tree(elementary_from_json(t));
  if (j.contains("sets"))
    for (const auto& s : j["sets"]) {
      TreeSet set{detail::json_get<std::string>(s, "id"), {}};
      for (const auto& m : detail::json_get<Json>(s, "members")) set.members.push_back(elementary_from_json(m));
      g.add_set(std::move(set));
    }
  return g;
}

inline Json to_json(const DerivationTree& d) {
  Json j{{"type", "derivation"}, {"root", d.root()}, {"steps", Json::array()}};
  for (const auto& s : d.steps()) {
    Json step{{"op", std::string(to_string(s.op))}, {"child", s.child}, {"parent", s.parent}};
    if (!s.parent_member.empty()) step["member"] = s.parent_member;
    Json sites = Json::array();
    for (const auto& a : s.sites) sites.push_back(a.str());
    step["sites"] = sites;
    step["label"] = s.label.str();
    j["steps"].push_back(step);
  }
  return j;
}

inline DerivationTree derivation_from_json(const Json& j) {
  DerivationTree d(detail::json_get<std::string>(j, "root"));
  for (const auto& s : detail::json_get<Json>(j, "steps")) {
    DerivationStep step;
    auto op = operation_from_string(detail::json_get<std::string>(s, "op"));
    if (!op) throw detail::json_error("unknown operation");
    step.op = *op;
    step.child = detail::json_get<std::string>(s, "child");
    step.parent = detail::json_get<std::string>(s, "parent");
    if (s.contains("member")) step.parent_member = detail::json_get<std::string>(s, "member");
    for (const auto& a : detail::json_get<std::vector<std::string>>(s, "sites")) step.sites.push_back(NodeAddress::parse(a));
    step.label = ArcLabel::parse(detail::json_get<std::string>(s, "label"));
    d.add_step(std::move(step));
  }
  return d;
}

inline Json to_json(const DependencyTree& t) {
  Json j{{"type", "dependency"}, {"nodes", Json::array()}, {"arcs", Json::array()}};
  for (const auto& n : t.nodes()) {
    Json node{{"lexeme", n.lexeme}};
    if (n.covert) node["covert"] = true;
    if (!n.name.empty()) node["name"] = n.name;
    j["nodes"].push_back(node);
  }
  for (const auto& a : t.arcs()) j["arcs"].push_back({{"head", a.head}, {"dependent", a.dependent}, {"label", a.label.str()}});
  if (t.order()) j["order"] = *t.order();
  return j;
}

inline DependencyTree dependency_from_json(const Json& j) {
  DependencyTree t;
  for (const auto& n : detail::json_get<Json>(j, "nodes"))
    t.add_node(detail::json_get<std::string>(n, "lexeme"), n.value("covert", false), n.value("name", std::string()));
  for (const auto& a : detail::json_get<Json>(j, "arcs")) {
    auto h = detail::json_get<std::size_t>(a, "head"), d = detail::json_get<std::size_t>(a, "dependent");
    t.add_arc(h, d, ArcLabel::parse(detail::json_get<std::string>(a, "label")));
  }
  if (j.contains("order")) t.set_order(detail::json_get<std::vector<std::size_t>>(j, "order"));
  t.check();
  return t;
}

inline Json to_json(const ProjectivityReport& r, const DependencyTree& t) {
  Json j{{"projective", r.projective}, {"violations", Json::array()}};
  for (const auto& v : r.violations)
    j["violations"].push_back({{"kind", v.kind == ProjectivityViolation::Kind::covered_root ? "covered_root" : "covered_word"},
                               {"head", t.node(v.head).lexeme},
                               {"dependent", t.node(v.dependent).lexeme},
                               {"witness", t.node(v.witness).lexeme},
                               {"message", describe(t, v)}});
  return j;
}

inline Json to_json(const ParseResult& r) {
  Json j{{"recognized", r.recognized}, {"derivations", Json::array()}};
  for (const auto& d : r.derivations) j["derivations"].push_back(to_json(d));
  j["stats"] = {{"chart_size", r.stats.chart_size}, {"item_count", r.stats.item_count}, {"wall_ms", r.stats.wall_ms}};
  j["warnings"] = r.warnings;
  return j;
}

// ---------------------------------------------------------------------------
// Graphviz

namespace detail {

inline std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

inline void dot_tree(std::string& out, const TreeNode& n, int& next) {
  int me = next++;
  std::string label = n.label;
  if (n.kind == NodeKind::substitution) label += "↓";
  if (n.kind == NodeKind::foot) label += "*";
  out += "  n" + std::to_string(me) + " [label=" + dot_quote(label) + (is_lexical(n.kind) ? ", shape=plaintext" : "") + "];\n";
  for (const auto& c : n.children) {
    int child = next;
    dot_tree(out, c, next);
    out += "  n" + std::to_string(me) + " -> n" + std::to_string(child) + ";\n";
  }
}

}  // namespace detail

inline std::string to_dot(const PhraseTree& t, const std::string& name = "derived") {
  std::string out = "digraph " + detail::dot_quote(name) + " {\n  node [shape=none];\n  edge [arrowhead=none];\n";
  int next = 0;
  detail::dot_tree(out, t.root(), next);
  return out + "}\n";
}

/// Derivation tree: nodes are occurrences labeled with their anchor when the
/// derivation is bound to a grammar; arcs carry 1, 2, ..., ATTR or S.
inline std::string to_dot(const DerivationTree& d, const std::string& name = "derivation") {
  std::string out = "digraph " + detail::dot_quote(name) + " {\n  node [shape=plaintext];\n";
  for (const auto& n : d.nodes()) {
    std::string label = n.lexeme.empty() ? n.name : n.lexeme + " (" + n.name + ")";
    out += "  " + detail::dot_quote(n.name) + " [label=" + detail::dot_quote(label) + "];\n";
  }
  for (const auto& s : d.steps())
    out += "  " + detail::dot_quote(s.parent) + " -> " + detail::dot_quote(s.child) + " [label=" +
           detail::dot_quote(s.label.str()) + "];\n";
  return out + "}\n";
}

inline std::string to_dot(const DependencyTree& t, const std::string& name = "dependency") {
  std::string out = "digraph " + detail::dot_quote(name) + " {\n  node [shape=plaintext];\n";
  for (std::size_t i = 0; i < t.size(); ++i) {
    const auto& n = t.node(i);
    out += "  d" + std::to_string(i) + " [label=" + detail::dot_quote(n.covert ? "(" + n.lexeme + ")" : n.lexeme) + "];\n";
  }
  for (const auto& a : t.arcs())
    out += "  d" + std::to_string(a.head) + " -> d" + std::to_string(a.dependent) + " [label=" +
           detail::dot_quote(a.label.str()) + "];\n";
  return out + "}\n";
}

}  // namespace tagforge
