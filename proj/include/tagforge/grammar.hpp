#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "tagforge/address.hpp"
#include "tagforge/error.hpp"
#include "tagforge/tree.hpp"

namespace tagforge {

enum class TreeShape { initial, auxiliary };

inline std::string_view to_string(TreeShape shape) {
  return shape == TreeShape::initial ? "initial" : "aux";
}

struct ElementaryTree {
  std::string id;
  TreeShape shape = TreeShape::initial;
  TreeNode root;

  bool is_auxiliary() const { return shape == TreeShape::auxiliary; }

  std::vector<std::string> anchors() const {
    std::vector<std::string> out;
    visit(root, [&](const TreeNode& n, const NodeAddress&) {
      if (n.kind == NodeKind::anchor) out.push_back(n.label);
    });
    return out;
  }

  /// The anchor word, or "" for an anchorless tree.
  std::string anchor() const {
    auto all = anchors();
    return all.empty() ? std::string() : all.front();
  }

  std::optional<NodeAddress> foot() const {
    auto feet = find_all(root, NodeKind::foot);
    if (feet.size() != 1) return std::nullopt;
    return feet.front();
  }
};

/// Multi-component tree set: members adjoin simultaneously.
struct TreeSet {
  std::string id;
  std::vector<ElementaryTree> members;

  std::string anchor() const {
    for (const auto& m : members)
      if (auto a = m.anchor(); !a.empty()) return a;
    return {};
  }

  const ElementaryTree* member(std::string_view member_id) const {
    for (const auto& m : members)
      if (m.id == member_id) return &m;
    return nullptr;
  }
};

struct Grammar {
  std::set<std::string> nonterminals;  // empty = inferred from the trees
  std::map<std::string, ElementaryTree> trees;
  std::map<std::string, TreeSet> tree_sets;
  std::string start_symbol = "S";

  bool declares_nonterminals() const { return !nonterminals.empty(); }

  bool has_id(const std::string& id) const {
    if (trees.count(id) || tree_sets.count(id)) return true;
    for (const auto& [_, set] : tree_sets)
      if (set.member(id)) return true;
    return false;
  }

  void add_tree(ElementaryTree tree) {
    if (has_id(tree.id)) throw TagError(ErrorKind::syntax, "duplicate id '" + tree.id + "'");
    auto id = tree.id;
    trees.emplace(std::move(id), std::move(tree));
  }

  void add_set(TreeSet set) {
    if (set.members.empty()) throw TagError(ErrorKind::syntax, "tree set '" + set.id + "' is empty");
    if (has_id(set.id)) throw TagError(ErrorKind::syntax, "duplicate id '" + set.id + "'");
    std::set<std::string> seen;
    for (const auto& m : set.members) {
      if (!seen.insert(m.id).second)
        throw TagError(ErrorKind::syntax, "tree set '" + set.id + "' lists '" + m.id + "' twice");
      if (has_id(m.id)) throw TagError(ErrorKind::syntax, "duplicate id '" + m.id + "'");
    }
    auto id = set.id;
    tree_sets.emplace(std::move(id), std::move(set));
  }

  const ElementaryTree& tree(const std::string& id) const {
    auto it = trees.find(id);
    if (it == trees.end()) throw TagError(ErrorKind::unknown_id, "no elementary tree '" + id + "'");
    return it->second;
  }

  const TreeSet& tree_set(const std::string& id) const {
    auto it = tree_sets.find(id);
    if (it == tree_sets.end()) throw TagError(ErrorKind::unknown_id, "no tree set '" + id + "'");
    return it->second;
  }

  /// Category labels used anywhere in the grammar.
  std::set<std::string> used_categories() const {
    std::set<std::string> out;
    auto collect = [&](const ElementaryTree& t) {
      visit(t.root, [&](const TreeNode& n, const NodeAddress&) {
        if (!is_lexical(n.kind)) out.insert(n.label);
      });
    };
    for (const auto& [_, t] : trees) collect(t);
    for (const auto& [_, s] : tree_sets)
      for (const auto& m : s.members) collect(m);
    return out;
  }

  std::set<std::string> vocabulary() const {
    std::set<std::string> out;
    for (const auto& [_, t] : trees)
      for (auto& w : yield_words(t.root)) out.insert(w);
    return out;
  }
};

/// Sets become plain trees; used to parse set members one by one.
inline Grammar flatten_sets(const Grammar& g) {
  Grammar out;
  out.nonterminals = g.nonterminals;
  out.start_symbol = g.start_symbol;
  out.trees = g.trees;
  for (const auto& [_, s] : g.tree_sets)
    for (const auto& m : s.members) out.trees.emplace(m.id, m);
  return out;
}

// ---------------------------------------------------------------------------
// Validation

struct Violation {
  NodeAddress address;
  std::string rule;
  friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidationReport {
  std::string tree_id;
  std::vector<Violation> violations;
  std::vector<Violation> warnings;

  bool ok() const { return violations.empty(); }
  bool has(std::string_view rule) const {
    return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.rule == rule; });
  }
};

namespace detail {

inline void structural_checks(const ElementaryTree& tree, ValidationReport& report) {
  auto& out = report.violations;
  if (tree.root.kind != NodeKind::interior) out.push_back({{}, "root is not an interior node"});
  visit(tree.root, [&](const TreeNode& n, const NodeAddress& a) {
    if (n.label.empty()) out.push_back({a, "empty label"});
    if (n.kind == NodeKind::interior && n.children.empty()) out.push_back({a, "interior node without children"});
    if (is_frontier_kind(n.kind) && !n.children.empty()) out.push_back({a, "frontier node with children"});
  });
  auto feet = find_all(tree.root, NodeKind::foot);
  if (tree.shape == TreeShape::initial) {
    for (const auto& f : feet) out.push_back({f, "foot node in initial tree"});
  } else if (feet.empty()) {
    out.push_back({{}, "auxiliary tree without foot node"});
  } else if (feet.size() > 1) {
    for (std::size_t i = 1; i < feet.size(); ++i) out.push_back({feet[i], "several foot nodes"});
  } else if (node_at(tree.root, feet.front()).label != tree.root.label) {
    out.push_back({feet.front(), "foot/root label mismatch"});
  }
}

inline void anchor_checks(const std::vector<NodeAddress>& anchors, ValidationReport& report) {
  if (anchors.empty()) report.violations.push_back({{}, "no anchor"});
  for (std::size_t i = 1; i < anchors.size(); ++i) report.warnings.push_back({anchors[i], "multiple anchors"});
}

}  // namespace detail

/// Checks the shape invariants of one elementary tree. Several anchors are
/// reported as a warning only.
inline ValidationReport validate_tree(const ElementaryTree& tree) {
  ValidationReport report{tree.id, {}, {}};
  detail::structural_checks(tree, report);
  detail::anchor_checks(find_all(tree.root, NodeKind::anchor), report);
  return report;
}

struct GrammarReport {
  std::vector<ValidationReport> trees;
  std::vector<std::string> errors;  // grammar-level problems

  bool ok() const {
    return errors.empty() &&
           std::all_of(trees.begin(), trees.end(), [](const ValidationReport& r) { return r.ok(); });
  }
};

/// Validates every tree. Members of a tree set are anchored as a group: the
/// set as a whole carries the lexical item, so a member may be anchorless.
inline GrammarReport validate_grammar(const Grammar& g) {
  GrammarReport report;
  auto check_labels = [&](const ElementaryTree& t) {
    if (!g.declares_nonterminals()) return;
    visit(t.root, [&](const TreeNode& n, const NodeAddress& a) {
      if (!is_lexical(n.kind) && !g.nonterminals.count(n.label))
        report.errors.push_back(t.id + " @ " + a.str() + ": undeclared category '" + n.label + "'");
    });
  };
  for (const auto& [_, t] : g.trees) {
    report.trees.push_back(validate_tree(t));
    check_labels(t);
  }
  for (const auto& [_, s] : g.tree_sets) {
    std::size_t anchors = 0;
    for (const auto& m : s.members) {
      ValidationReport r{m.id, {}, {}};
      detail::structural_checks(m, r);
      anchors += find_all(m.root, NodeKind::anchor).size();
      report.trees.push_back(std::move(r));
      check_labels(m);
    }
    if (anchors == 0) report.errors.push_back("tree set " + s.id + ": no anchor");
  }
  if (g.declares_nonterminals() && !g.nonterminals.count(g.start_symbol))
    report.errors.push_back("start symbol '" + g.start_symbol + "' is not a declared category");
  return report;
}

// ---------------------------------------------------------------------------
// Lexicalization

struct AnchorCensus {
  std::string tree_id;
  std::string set_id;  // empty for standalone trees
  std::vector<std::string> anchors;
};

struct LexicalizationReport {
  bool lexicalized = true;
  std::vector<AnchorCensus> census;
  std::vector<std::string> offending;  // tree ids (or set ids) without exactly one anchor
};

/// A grammar is lexicalized when every elementary structure carries exactly
/// one lexical anchor. A tree set counts as one structure.
inline LexicalizationReport check_lexicalized(const Grammar& g) {
  LexicalizationReport report;
  for (const auto& [id, t] : g.trees) {
    auto anchors = t.anchors();
    if (anchors.size() != 1) report.offending.push_back(id);
    report.census.push_back({id, {}, std::move(anchors)});
  }
  for (const auto& [id, s] : g.tree_sets) {
    std::size_t total = 0;
    for (const auto& m : s.members) {
      auto anchors = m.anchors();
      total += anchors.size();
      report.census.push_back({m.id, id, std::move(anchors)});
    }
    if (total != 1) report.offending.push_back(id);
  }
  report.lexicalized = report.offending.empty();
  return report;
}

// ---------------------------------------------------------------------------
// Context-free rules and their composition into elementary trees

struct CfgSymbol {
  std::string text;
  bool terminal = false;
  friend bool operator==(const CfgSymbol&, const CfgSymbol&) = default;
};

struct CfgRule {
  std::string lhs;
  std::vector<CfgSymbol> rhs;

  /// `S -> NP VP`, `VP -> "really" VP`; quoted symbols are terminals.
  static CfgRule parse(std::string_view text) {
    auto arrow = text.find("->");
    if (arrow == std::string_view::npos) throw TagError(ErrorKind::syntax, "rule without '->': " + std::string(text));
    auto lhs = split_words(text.substr(0, arrow));
    if (lhs.size() != 1) throw TagError(ErrorKind::syntax, "rule needs one left-hand symbol: " + std::string(text));
    CfgRule rule{lhs.front(), {}};
    for (auto& tok : split_words(text.substr(arrow + 2))) {
      if (tok.size() >= 2 && tok.front() == '"' && tok.back() == '"')
        rule.rhs.push_back({tok.substr(1, tok.size() - 2), true});
      else
        rule.rhs.push_back({tok, false});
    }
    if (rule.rhs.empty()) throw TagError(ErrorKind::syntax, "empty right-hand side: " + std::string(text));
    return rule;
  }

  std::string str() const {
    std::string out = lhs + " ->";
    for (const auto& s : rhs) out += s.terminal ? " \"" + s.text + "\"" : " " + s.text;
    return out;
  }

  friend bool operator==(const CfgRule&, const CfgRule&) = default;
};

/// One link of a composition spine: `rule` indexes the rule list;
/// `position` (1-based, into the predecessor's right-hand side) selects which
/// occurrence of the rule's left-hand symbol it rewrites. Without a position
/// the first unexpanded occurrence is used. Ignored for the first link.
struct SpineLink {
  std::size_t rule = 0;
  std::optional<std::size_t> position;
};

/// Glues the spine's rules into a single tree fragment. Unexpanded
/// nonterminals become substitution nodes and the first terminal of the last
/// rule becomes the anchor.
inline ElementaryTree compose_rules(std::span<const CfgRule> rules, std::span<const SpineLink> spine,
                                    std::string id = {}) {
  if (spine.empty()) throw TagError(ErrorKind::composition, "empty spine");
  auto rule_at = [&](std::size_t step) -> const CfgRule& {
    if (spine[step].rule >= rules.size())
      throw TagError(ErrorKind::composition, "spine step " + std::to_string(step + 1) + " names rule " +
                                                 std::to_string(spine[step].rule + 1) + " which does not exist");
    return rules[spine[step].rule];
  };
  auto expand = [](const CfgRule& r) {
    auto node = TreeNode::interior(r.lhs);
    for (const auto& s : r.rhs)
      node.children.push_back(TreeNode::leaf(s.terminal ? NodeKind::terminal : NodeKind::substitution, s.text));
    return node;
  };

  TreeNode root = expand(rule_at(0));
  NodeAddress last;  // address of the node the previous rule expanded
  for (std::size_t step = 1; step < spine.size(); ++step) {
    const CfgRule& rule = rule_at(step);
    TreeNode& prev = node_at(root, last);
    std::optional<std::size_t> slot;
    if (auto pos = spine[step].position) {
      if (*pos == 0 || *pos > prev.children.size())
        throw TagError(ErrorKind::composition, "step " + std::to_string(step + 1) + ": position " +
                                                   std::to_string(*pos) + " is outside rule " + prev.label);
      slot = *pos - 1;
    } else {
      for (std::size_t i = 0; i < prev.children.size(); ++i)
        if (prev.children[i].kind == NodeKind::substitution && prev.children[i].label == rule.lhs) {
          slot = i;
          break;
        }
    }
    if (!slot || prev.children[*slot].kind != NodeKind::substitution || prev.children[*slot].label != rule.lhs)
      throw TagError(ErrorKind::composition, "step " + std::to_string(step + 1) + ": rule " + rule.str() +
                                                 " does not rewrite a nonterminal of " + rule_at(step - 1).str());
    prev.children[*slot] = expand(rule);
    last = last.child(*slot);
  }

  TreeNode& final_node = node_at(root, last);
  auto lexical = std::find_if(final_node.children.begin(), final_node.children.end(),
                              [](const TreeNode& c) { return c.kind == NodeKind::terminal; });
  if (lexical == final_node.children.end())
    throw TagError(ErrorKind::composition, "last rule " + rule_at(spine.size() - 1).str() + " introduces no terminal");
  lexical->kind = NodeKind::anchor;
  return ElementaryTree{std::move(id), TreeShape::initial, std::move(root)};
}

/// Merging variant: the composed fragment read back as one flat rule.
inline CfgRule flatten_rules(std::span<const CfgRule> rules, std::span<const SpineLink> spine) {
  auto tree = compose_rules(rules, spine);
  CfgRule out{tree.root.label, {}};
  for (const auto& sym : frontier(tree.root)) out.rhs.push_back({sym.label, is_lexical(sym.kind)});
  return out;
}

}  // namespace tagforge
