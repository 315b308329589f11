#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tagforge/address.hpp"
#include "tagforge/error.hpp"

namespace tagforge {

enum class NodeKind { interior, substitution, foot, anchor, terminal };

inline std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::interior: return "interior";
    case NodeKind::substitution: return "substitution";
    case NodeKind::foot: return "foot";
    case NodeKind::anchor: return "anchor";
    case NodeKind::terminal: return "terminal";
  }
  return "?";
}

inline std::optional<NodeKind> node_kind_from_string(std::string_view s) {
  if (s == "interior") return NodeKind::interior;
  if (s == "substitution") return NodeKind::substitution;
  if (s == "foot") return NodeKind::foot;
  if (s == "anchor") return NodeKind::anchor;
  if (s == "terminal") return NodeKind::terminal;
  return std::nullopt;
}

inline bool is_lexical(NodeKind kind) { return kind == NodeKind::anchor || kind == NodeKind::terminal; }
inline bool is_frontier_kind(NodeKind kind) { return kind != NodeKind::interior; }

/// Which elementary-tree occurrence a derived-tree node came from.
struct Origin {
  std::string tree;  // occurrence name (a derivation-tree node, or "set:member")
  NodeAddress address;

  bool empty() const { return tree.empty(); }
  friend bool operator==(const Origin&, const Origin&) = default;
};

/// A node of an elementary or derived tree. `label` is the category for
/// interior/substitution/foot nodes and the surface word for anchors and
/// terminals.
struct TreeNode {
  NodeKind kind = NodeKind::interior;
  std::string label;
  std::vector<TreeNode> children;
  Origin origin;
  bool adjoined = false;  // an adjunction already happened at this node

  static TreeNode interior(std::string label, std::vector<TreeNode> children = {}) {
    return TreeNode{NodeKind::interior, std::move(label), std::move(children), {}, false};
  }
  static TreeNode leaf(NodeKind kind, std::string label) {
    return TreeNode{kind, std::move(label), {}, {}, false};
  }
};

inline const TreeNode* find_node(const TreeNode& root, const NodeAddress& address) {
  const TreeNode* cur = &root;
  for (auto index : address.path()) {
    if (index >= cur->children.size()) return nullptr;
    cur = &cur->children[index];
  }
  return cur;
}

inline TreeNode* find_node(TreeNode& root, const NodeAddress& address) {
  return const_cast<TreeNode*>(find_node(static_cast<const TreeNode&>(root), address));
}

inline const TreeNode& node_at(const TreeNode& root, const NodeAddress& address) {
  const TreeNode* node = find_node(root, address);
  if (!node) throw TagError(ErrorKind::illegal_site, "no node at address " + address.str());
  return *node;
}

inline TreeNode& node_at(TreeNode& root, const NodeAddress& address) {
  TreeNode* node = find_node(root, address);
  if (!node) throw TagError(ErrorKind::illegal_site, "no node at address " + address.str());
  return *node;
}

/// Preorder walk; `fn(node, address)`.
template <class Fn>
void visit(const TreeNode& root, Fn&& fn, NodeAddress address = {}) {
  fn(root, address);
  for (std::size_t i = 0; i < root.children.size(); ++i)
    visit(root.children[i], fn, address.child(i));
}

inline std::size_t count_nodes(const TreeNode& root) {
  std::size_t n = 1;
  for (const auto& c : root.children) n += count_nodes(c);
  return n;
}

inline std::vector<NodeAddress> find_all(const TreeNode& root, NodeKind kind) {
  std::vector<NodeAddress> out;
  visit(root, [&](const TreeNode& n, const NodeAddress& a) {
    if (n.kind == kind) out.push_back(a);
  });
  return out;
}

inline std::optional<NodeAddress> find_origin(const TreeNode& root, const Origin& origin) {
  std::optional<NodeAddress> hit;
  visit(root, [&](const TreeNode& n, const NodeAddress& a) {
    if (!hit && n.origin == origin) hit = a;
  });
  return hit;
}

/// Surface words of the frontier, left to right.
inline std::vector<std::string> yield_words(const TreeNode& root) {
  std::vector<std::string> out;
  visit(root, [&](const TreeNode& n, const NodeAddress&) {
    if (is_lexical(n.kind)) out.push_back(n.label);
  });
  return out;
}

struct FrontierSymbol {
  NodeKind kind;
  std::string label;
  friend bool operator==(const FrontierSymbol&, const FrontierSymbol&) = default;
};

/// Every leaf, including substitution and foot nodes.
inline std::vector<FrontierSymbol> frontier(const TreeNode& root) {
  std::vector<FrontierSymbol> out;
  visit(root, [&](const TreeNode& n, const NodeAddress&) {
    if (n.children.empty()) out.push_back({n.kind, n.label});
  });
  return out;
}

inline std::string join_words(const std::vector<std::string>& words, std::string_view sep = " ") {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i) out += sep;
    out += words[i];
  }
  return out;
}

inline std::vector<std::string> split_words(std::string_view text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t' || text[i] == '\n' || text[i] == '\r')) ++i;
    std::size_t start = i;
    while (i < text.size() && !(text[i] == ' ' || text[i] == '\t' || text[i] == '\n' || text[i] == '\r')) ++i;
    if (i > start) out.emplace_back(text.substr(start, i - start));
  }
  return out;
}

/// Kind/label/children equality, ignoring origins and adjunction marks.
inline bool same_structure(const TreeNode& a, const TreeNode& b) {
  if (a.kind != b.kind || a.label != b.label || a.children.size() != b.children.size()) return false;
  for (std::size_t i = 0; i < a.children.size(); ++i)
    if (!same_structure(a.children[i], b.children[i])) return false;
  return true;
}

}  // namespace tagforge
