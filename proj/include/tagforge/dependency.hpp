#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tagforge/arc_label.hpp"
#include "tagforge/derivation.hpp"
#include "tagforge/grammar_io.hpp"
#include "tagforge/lexer.hpp"

namespace tagforge {

struct DepNode {
  std::string lexeme;
  bool covert = false;  // deleted actant: kept in the tree, absent from the surface
  std::string name;     // derivation occurrence it came from, if any
};

struct DepArc {
  std::size_t head = 0;
  std::size_t dependent = 0;
  ArcLabel label;
  friend bool operator==(const DepArc&, const DepArc&) = default;
};

/// Unordered tree of lexemes with labeled arcs, plus an optional surface
/// order (node indices of the overt nodes, left to right).
class DependencyTree {
 public:
  std::size_t add_node(std::string lexeme, bool covert = false, std::string name = {}) {
    nodes_.push_back({std::move(lexeme), covert, std::move(name)});
    return nodes_.size() - 1;
  }

  void add_arc(std::size_t head, std::size_t dependent, ArcLabel label) {
    arcs_.push_back({head, dependent, label});
  }

  const std::vector<DepNode>& nodes() const { return nodes_; }
  const std::vector<DepArc>& arcs() const { return arcs_; }
  std::size_t size() const { return nodes_.size(); }
  const DepNode& node(std::size_t i) const { return nodes_.at(i); }

  const std::optional<std::vector<std::size_t>>& order() const { return order_; }
  void set_order(std::vector<std::size_t> order) { order_ = std::move(order); }
  void clear_order() { order_.reset(); }

  std::optional<std::size_t> head_of(std::size_t node) const {
    for (const auto& a : arcs_)
      if (a.dependent == node) return a.head;
    return std::nullopt;
  }

  const DepArc* arc_into(std::size_t node) const {
    for (const auto& a : arcs_)
      if (a.dependent == node) return &a;
    return nullptr;
  }

  /// Outgoing arcs of `head` in insertion order.
  std::vector<const DepArc*> arcs_from(std::size_t head) const {
    std::vector<const DepArc*> out;
    for (const auto& a : arcs_)
      if (a.head == head) out.push_back(&a);
    return out;
  }

  std::size_t root() const {
    std::optional<std::size_t> root;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      if (!head_of(i)) {
        if (root) throw TagError(ErrorKind::malformed_tree, "dependency tree has several roots");
        root = i;
      }
    if (!root) throw TagError(ErrorKind::malformed_tree, "dependency tree has no root");
    return *root;
  }

  /// True if `node` is `ancestor` or lies (transitively) below it.
  bool dominates(std::size_t ancestor, std::size_t node) const {
    std::size_t steps = 0;
    std::optional<std::size_t> cur = node;
    while (cur && steps++ <= nodes_.size()) {
      if (*cur == ancestor) return true;
      cur = head_of(*cur);
    }
    return false;
  }

  /// Throws MalformedTree unless single-rooted, connected and acyclic with
  /// distinct actant numbers under every head.
  void check() const {
    if (nodes_.empty()) throw TagError(ErrorKind::malformed_tree, "empty dependency tree");
    std::vector<int> heads(nodes_.size(), 0);
    for (const auto& a : arcs_) {
      if (a.head >= nodes_.size() || a.dependent >= nodes_.size())
        throw TagError(ErrorKind::malformed_tree, "arc refers to a missing node");
      if (++heads[a.dependent] > 1)
        throw TagError(ErrorKind::malformed_tree, "'" + nodes_[a.dependent].lexeme + "' has two heads");
    }
    std::size_t r = root();
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      if (!dominates(r, i)) throw TagError(ErrorKind::malformed_tree, "'" + nodes_[i].lexeme + "' is not connected to the root");
    for (std::size_t h = 0; h < nodes_.size(); ++h) {
      std::set<int> seen;
      for (const auto* a : arcs_from(h))
        if (a->label.is_actant() && !seen.insert(a->label.index).second)
          throw TagError(ErrorKind::malformed_tree, "'" + nodes_[h].lexeme + "' has two dependents labeled " + a->label.str());
    }
  }

  /// Order-insensitive structural form (lexemes, labels, covert marks).
  std::string canonical() const { return canonical_from(root()); }

 private:
  std::string canonical_from(std::size_t n) const {
    std::vector<std::string> parts;
    for (const auto* a : arcs_from(n)) parts.push_back(a->label.str() + ":" + canonical_from(a->dependent));
    std::sort(parts.begin(), parts.end());
    std::string out = nodes_[n].covert ? "(" + nodes_[n].lexeme + ")" : nodes_[n].lexeme;
    out += "{";
    for (const auto& p : parts) out += p + " ";
    return out + "}";
  }

  std::vector<DepNode> nodes_;
  std::vector<DepArc> arcs_;
  std::optional<std::vector<std::size_t>> order_;
};

// ---------------------------------------------------------------------------
// Derivation tree -> dependency tree

/// One dependency node per derivation node; arcs copied head to dependent,
/// except S arcs, which are reversed.
inline DependencyTree derivation_to_dependency(const DerivationTree& d) {
  d.check_well_formed();
  DependencyTree t;
  std::map<std::string, std::size_t> index;
  for (const auto& n : d.nodes()) index[n.name] = t.add_node(n.lexeme.empty() ? n.elementary : n.lexeme, false, n.name);
  for (const auto& s : d.steps()) {
    auto parent = index.at(s.parent);
    auto child = index.at(s.child);
    if (s.label.kind == ArcLabel::Kind::s) t.add_arc(child, parent, s.label);
    else t.add_arc(parent, child, s.label);
  }

  auto describe = [&](const DepArc& a) {
    std::string inv = a.label.kind == ArcLabel::Kind::s ? " (inverted)" : "";
    return t.node(a.head).name + " -" + a.label.str() + "-> " + t.node(a.dependent).name + inv;
  };
  std::vector<std::string> problems;
  for (std::size_t i = 0; i < t.size(); ++i) {
    std::vector<std::string> incoming;
    for (const auto& a : t.arcs())
      if (a.dependent == i) incoming.push_back(describe(a));
    if (incoming.size() > 1) problems.push_back(join_words(incoming, ", "));
  }
  for (std::size_t i = 0; problems.empty() && i < t.size(); ++i) {
    std::set<std::size_t> seen;
    std::vector<std::string> path;
    std::size_t cur = i;
    while (const DepArc* a = t.arc_into(cur)) {
      if (!seen.insert(cur).second) {
        problems.push_back("cycle: " + join_words(path, ", "));
        break;
      }
      path.push_back(describe(*a));
      cur = a->head;
    }
  }
  if (!problems.empty()) throw TagError(ErrorKind::inversion, "result is not a tree: " + join_words(problems, "; "));
  return t;
}

/// Surface order read off a derived tree: each anchor leaf, left to right,
/// mapped to the dependency node of the occurrence it came from.
inline std::vector<std::size_t> surface_order(const DependencyTree& t, const PhraseTree& derived) {
  std::vector<std::size_t> order;
  std::set<std::size_t> used;
  visit(derived.root(), [&](const TreeNode& n, const NodeAddress&) {
    if (n.kind != NodeKind::anchor) return;
    auto occurrence = n.origin.tree.substr(0, n.origin.tree.find(':'));
    for (std::size_t i = 0; i < t.size(); ++i)
      if (t.node(i).name == occurrence && used.insert(i).second) {
        order.push_back(i);
        return;
      }
  });
  return order;
}

/// Maps a word list onto overt nodes: each word takes the first unused node
/// with that lexeme; words with no such node (function words) are skipped.
inline std::vector<std::size_t> order_from_words(const DependencyTree& t, const std::vector<std::string>& words) {
  std::vector<std::size_t> order;
  std::vector<bool> used(t.size(), false);
  for (const auto& w : words)
    for (std::size_t i = 0; i < t.size(); ++i)
      if (!used[i] && !t.node(i).covert && t.node(i).lexeme == w) {
        used[i] = true;
        order.push_back(i);
        break;
      }
  return order;
}

// ---------------------------------------------------------------------------
// Projectivity

struct ProjectivityViolation {
  enum class Kind { covered_word, covered_root };
  Kind kind = Kind::covered_word;
  std::size_t head = 0;
  std::size_t dependent = 0;
  std::size_t witness = 0;  // the word lying between head and dependent
  friend bool operator==(const ProjectivityViolation&, const ProjectivityViolation&) = default;
};

struct ProjectivityReport {
  bool projective = true;
  std::vector<ProjectivityViolation> violations;
};

/// An arc (h, d) is projective when every word strictly between h and d is
/// dominated by h; a tree is projective when all its arcs are and no arc
/// covers the root. Covert nodes take no surface position and are skipped.
inline ProjectivityReport is_projective(const DependencyTree& t) {
  t.check();
  if (!t.order()) throw TagError(ErrorKind::incomplete_order, "no surface order given");
  const auto& order = *t.order();
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::size_t> position(t.size(), none);
  for (std::size_t p = 0; p < order.size(); ++p) {
    auto n = order[p];
    if (n >= t.size()) throw TagError(ErrorKind::incomplete_order, "order refers to a missing node");
    if (t.node(n).covert) throw TagError(ErrorKind::incomplete_order, "covert node '" + t.node(n).lexeme + "' has no surface position");
    if (position[n] != none) throw TagError(ErrorKind::incomplete_order, "'" + t.node(n).lexeme + "' occurs twice in the order");
    position[n] = p;
  }
  for (std::size_t i = 0; i < t.size(); ++i)
    if (!t.node(i).covert && position[i] == none)
      throw TagError(ErrorKind::incomplete_order, "'" + t.node(i).lexeme + "' is missing from the order");

  ProjectivityReport report;
  const std::size_t root = t.root();
  for (const auto& a : t.arcs()) {
    if (t.node(a.head).covert || t.node(a.dependent).covert) continue;
    auto lo = std::min(position[a.head], position[a.dependent]);
    auto hi = std::max(position[a.head], position[a.dependent]);
    for (auto p = lo + 1; p < hi; ++p) {
      auto w = order[p];
      if (w == root) report.violations.push_back({ProjectivityViolation::Kind::covered_root, a.head, a.dependent, w});
      else if (!t.dominates(a.head, w))
        report.violations.push_back({ProjectivityViolation::Kind::covered_word, a.head, a.dependent, w});
    }
  }
  report.projective = report.violations.empty();
  return report;
}

inline std::string describe(const DependencyTree& t, const ProjectivityViolation& v) {
  std::string arc = t.node(v.head).lexeme + " -> " + t.node(v.dependent).lexeme;
  if (v.kind == ProjectivityViolation::Kind::covered_root) return "arc " + arc + " covers the root " + t.node(v.witness).lexeme;
  return "arc " + arc + " covers " + t.node(v.witness).lexeme + ", which " + t.node(v.head).lexeme + " does not dominate";
}

// ---------------------------------------------------------------------------
// Text format:  dep omdat { zien:1 { Wim:1 helpen:2 { ... } } }  [order { ... }]
// `(PRO):1` marks a covert node.

namespace detail {

inline std::pair<std::string, bool> dep_lexeme(std::string text) {
  if (text.size() > 2 && text.front() == '(' && text.back() == ')') return {text.substr(1, text.size() - 2), true};
  return {std::move(text), false};
}

inline void parse_dep_children(text::Lexer& lex, DependencyTree& t, std::size_t head) {
  if (!lex.accept("{")) return;
  while (!lex.accept("}")) {
    auto tok = lex.word("a dependent 'lexeme:label'");
    auto colon = tok.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == tok.size()) lex.fail("dependent needs 'lexeme:label', got '" + tok + "'");
    ArcLabel label;
    try {
      label = ArcLabel::parse(tok.substr(colon + 1));
    } catch (const TagError&) {
      lex.fail("bad arc label in '" + tok + "'");
    }
    auto [lexeme, covert] = dep_lexeme(tok.substr(0, colon));
    auto child = t.add_node(lexeme, covert);
    t.add_arc(head, child, label);
    parse_dep_children(lex, t, child);
  }
}

inline void write_dep(std::string& out, const DependencyTree& t, std::size_t n) {
  auto deps = t.arcs_from(n);
  if (deps.empty()) return;
  out += " {";
  for (const auto* a : deps) {
    const auto& node = t.node(a->dependent);
    out += " " + (node.covert ? "(" + node.lexeme + ")" : node.lexeme) + ":" + a->label.str();
    write_dep(out, t, a->dependent);
  }
  out += " }";
}

}  // namespace detail

inline DependencyTree parse_dependency(std::string_view source, const std::string& origin = "<dep>") {
  static const std::vector<std::string> puncts{"{", "}"};
  text::Lexer lex(source, puncts, origin);
  lex.expect_word("dep");
  DependencyTree t;
  auto [lexeme, covert] = detail::dep_lexeme(lex.word("a root lexeme"));
  auto root = t.add_node(lexeme, covert);
  detail::parse_dep_children(lex, t, root);
  if (lex.accept_word("order")) {
    lex.expect("{");
    std::vector<std::string> words;
    while (!lex.accept("}")) words.push_back(lex.word("a word"));
    t.set_order(order_from_words(t, words));
  }
  if (!lex.at_end()) lex.fail("trailing input after dependency tree");
  try {
    t.check();
  } catch (const TagError& e) {
    throw e.with_context(origin);
  }
  return t;
}

inline DependencyTree load_dependency(const std::string& path) { return parse_dependency(read_file(path), path); }

inline std::string dependency_to_string(const DependencyTree& t) {
  auto r = t.root();
  const auto& node = t.node(r);
  std::string out = "dep " + (node.covert ? "(" + node.lexeme + ")" : node.lexeme);
  detail::write_dep(out, t, r);
  if (t.order()) {
    out += " order {";
    for (auto i : *t.order()) out += " " + t.node(i).lexeme;
    out += " }";
  }
  return out;
}

}  // namespace tagforge
