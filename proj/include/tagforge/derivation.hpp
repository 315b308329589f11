#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tagforge/arc_label.hpp"
#include "tagforge/grammar.hpp"
#include "tagforge/tree.hpp"

namespace tagforge {

// ---------------------------------------------------------------------------
// Derived trees

/// A (possibly partial) derived phrase-structure tree. Every node remembers
/// the elementary-tree occurrence and address it came from. Operations never
/// modify their inputs.
class PhraseTree {
 public:
  PhraseTree() = default;
  explicit PhraseTree(TreeNode root) : root_(std::move(root)) {}

  /// Lifts an elementary tree; `occurrence` names it in provenance records
  /// (defaults to the tree id).
  static PhraseTree from_elementary(const ElementaryTree& tree, std::string occurrence = {}) {
    if (occurrence.empty()) occurrence = tree.id;
    TreeNode root = tree.root;
    stamp(root, occurrence, {});
    return PhraseTree(std::move(root));
  }

  const TreeNode& root() const { return root_; }
  std::size_t size() const { return count_nodes(root_); }
  std::vector<std::string> words() const { return yield_words(root_); }
  std::string yield() const { return join_words(words()); }

  bool has_foot() const { return !find_all(root_, NodeKind::foot).empty(); }

  /// No open substitution or foot nodes remain.
  bool complete() const {
    return find_all(root_, NodeKind::substitution).empty() && find_all(root_, NodeKind::foot).empty();
  }

  std::map<NodeAddress, Origin> provenance() const {
    std::map<NodeAddress, Origin> out;
    visit(root_, [&](const TreeNode& n, const NodeAddress& a) {
      if (!n.origin.empty()) out.emplace(a, n.origin);
    });
    return out;
  }

 private:
  static void stamp(TreeNode& n, const std::string& occurrence, const NodeAddress& a) {
    n.origin = Origin{occurrence, a};
    for (std::size_t i = 0; i < n.children.size(); ++i) stamp(n.children[i], occurrence, a.child(i));
  }

  TreeNode root_;
};

namespace detail {

inline TreeNode* replace_foot(TreeNode& n, TreeNode& filler) {
  if (n.kind == NodeKind::foot) {
    n = std::move(filler);
    return &n;
  }
  for (auto& c : n.children)
    if (auto* hit = replace_foot(c, filler)) return hit;
  return nullptr;
}

}  // namespace detail

/// Appends `tree` at the substitution node `site` of `target`.
inline PhraseTree substitute(const PhraseTree& target, const NodeAddress& site, const PhraseTree& tree) {
  const TreeNode* node = find_node(target.root(), site);
  if (!node) throw TagError(ErrorKind::illegal_site, "no node at address " + site.str());
  if (node->kind != NodeKind::substitution)
    throw TagError(ErrorKind::illegal_site, "node " + site.str() + " (" + node->label + ", " +
                                                std::string(to_string(node->kind)) + ") is not a substitution node");
  if (tree.has_foot()) throw TagError(ErrorKind::wrong_shape, "only initial trees can be substituted");
  if (tree.root().label != node->label)
    throw TagError(ErrorKind::label_mismatch, "substitution node " + site.str() + " is " + node->label +
                                                  " but the tree is rooted in " + tree.root().label);
  TreeNode root = target.root();
  node_at(root, site) = tree.root();
  return PhraseTree(std::move(root));
}

inline PhraseTree substitute(const PhraseTree& target, const NodeAddress& site, const ElementaryTree& tree) {
  if (tree.is_auxiliary()) throw TagError(ErrorKind::wrong_shape, "'" + tree.id + "' is auxiliary; only initial trees substitute");
  return substitute(target, site, PhraseTree::from_elementary(tree));
}

/// Excises the subtree at `site`, splices `aux` in its place and re-attaches
/// the excised subtree at the foot of `aux`.
inline PhraseTree adjoin(const PhraseTree& target, const NodeAddress& site, const PhraseTree& aux) {
  auto feet = find_all(aux.root(), NodeKind::foot);
  if (feet.size() != 1) throw TagError(ErrorKind::wrong_shape, "adjoined tree must have exactly one foot node");
  const TreeNode* node = find_node(target.root(), site);
  if (!node) throw TagError(ErrorKind::illegal_site, "no node at address " + site.str());
  if (node->kind != NodeKind::interior)
    throw TagError(ErrorKind::illegal_site, "node " + site.str() + " is a " + std::string(to_string(node->kind)) +
                                                " leaf; adjunction needs an interior node");
  const std::string& foot_label = node_at(aux.root(), feet.front()).label;
  if (aux.root().label != node->label || foot_label != node->label)
    throw TagError(ErrorKind::label_mismatch, "node " + site.str() + " is " + node->label +
                                                  " but the auxiliary tree is rooted in " + aux.root().label);
  TreeNode root = target.root();
  TreeNode& slot = node_at(root, site);
  TreeNode excised = std::move(slot);
  excised.adjoined = true;
  slot = aux.root();
  detail::replace_foot(slot, excised);
  return PhraseTree(std::move(root));
}

inline PhraseTree adjoin(const PhraseTree& target, const NodeAddress& site, const ElementaryTree& aux) {
  if (!aux.is_auxiliary()) throw TagError(ErrorKind::wrong_shape, "'" + aux.id + "' is an initial tree; only auxiliary trees adjoin");
  return adjoin(target, site, PhraseTree::from_elementary(aux));
}

/// Adjoins all members at once. Every site is an address of `target` as it
/// was before the step; member k goes to sites[k].
inline PhraseTree adjoin_set(const PhraseTree& target, const std::vector<NodeAddress>& sites,
                             const std::vector<PhraseTree>& members) {
  if (sites.size() != members.size())
    throw TagError(ErrorKind::set_arity, std::to_string(members.size()) + " trees but " + std::to_string(sites.size()) +
                                             " sites");
  std::set<NodeAddress> distinct(sites.begin(), sites.end());
  if (distinct.size() != sites.size()) throw TagError(ErrorKind::illegal_site, "set members need pairwise distinct sites");

  // Descendants before ancestors: a splice only renumbers nodes below its
  // own site, so every remaining site still has its original address.
  std::vector<std::size_t> order(sites.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sites[a] > sites[b]; });

  PhraseTree out = target;
  for (auto k : order) {
    try {
      out = adjoin(out, sites[k], members[k]);
    } catch (const TagError& e) {
      throw e.with_context("member " + std::to_string(k + 1) + " at " + sites[k].str());
    }
  }
  return out;
}

inline PhraseTree adjoin_set(const PhraseTree& target, const std::vector<NodeAddress>& sites, const TreeSet& set) {
  std::vector<PhraseTree> members;
  for (const auto& m : set.members) {
    if (!m.is_auxiliary()) throw TagError(ErrorKind::wrong_shape, "set member '" + m.id + "' is not auxiliary");
    members.push_back(PhraseTree::from_elementary(m));
  }
  return adjoin_set(target, sites, members);
}

// ---------------------------------------------------------------------------
// Derivation trees

enum class Operation { substitute, adjoin, adjoin_set };

inline std::string_view to_string(Operation op) {
  switch (op) {
    case Operation::substitute: return "subst";
    case Operation::adjoin: return "adjoin";
    case Operation::adjoin_set: return "adjoin_set";
  }
  return "?";
}

inline std::optional<Operation> operation_from_string(std::string_view s) {
  if (s == "subst" || s == "substitute") return Operation::substitute;
  if (s == "adjoin") return Operation::adjoin;
  if (s == "adjoin_set") return Operation::adjoin_set;
  return std::nullopt;
}

/// One elementary tree (or tree set) occurrence. `name` is unique within a
/// derivation: the tree id, or `id[k]` for the k-th use of the same tree.
struct DerivationNode {
  std::string name;
  std::string elementary;
  bool is_set = false;
  std::string lexeme;
};

struct DerivationStep {
  Operation op = Operation::substitute;
  std::string child;
  std::string parent;
  std::string parent_member;  // member tree id when the parent is a set
  std::vector<NodeAddress> sites;
  ArcLabel label;
};

/// Tree id part of an occurrence name (`α2[2]` -> `α2`).
inline std::string elementary_of(const std::string& name) {
  if (name.empty() || name.back() != ']') return name;
  auto open = name.rfind('[');
  if (open == std::string::npos || open == 0 || open + 3 > name.size()) return name;
  for (std::size_t i = open + 1; i + 1 < name.size(); ++i)
    if (name[i] < '0' || name[i] > '9') return name;
  return name.substr(0, open);
}

class DerivationTree {
 public:
  DerivationTree() = default;
  explicit DerivationTree(std::string root) : root_(std::move(root)) { ensure_node(root_); }

  const std::string& root() const { return root_; }
  const std::vector<DerivationNode>& nodes() const { return nodes_; }
  const std::vector<DerivationStep>& steps() const { return steps_; }

  void set_root(std::string root) {
    root_ = std::move(root);
    ensure_node(root_);
  }

  void add_step(DerivationStep step) {
    ensure_node(step.parent);
    ensure_node(step.child);
    steps_.push_back(std::move(step));
  }

  const DerivationNode* find(const std::string& name) const {
    for (const auto& n : nodes_)
      if (n.name == name) return &n;
    return nullptr;
  }

  const DerivationNode& node(const std::string& name) const {
    if (auto* n = find(name)) return *n;
    throw TagError(ErrorKind::unknown_id, "no derivation node '" + name + "'");
  }

  /// Steps whose parent is `name`, in script order.
  std::vector<const DerivationStep*> steps_under(const std::string& name) const {
    std::vector<const DerivationStep*> out;
    for (const auto& s : steps_)
      if (s.parent == name) out.push_back(&s);
    return out;
  }

  const DerivationStep* step_into(const std::string& child) const {
    for (const auto& s : steps_)
      if (s.child == child) return &s;
    return nullptr;
  }

  /// Throws MalformedTree unless the steps form a single rooted tree.
  void check_well_formed() const {
    if (root_.empty()) throw TagError(ErrorKind::malformed_tree, "derivation has no root");
    std::map<std::string, int> parents;
    for (const auto& s : steps_) {
      if (s.child == root_) throw TagError(ErrorKind::malformed_tree, "root '" + root_ + "' has a parent");
      if (++parents[s.child] > 1)
        throw TagError(ErrorKind::malformed_tree, "'" + s.child + "' is attached more than once");
    }
    std::set<std::string> seen;
    std::function<void(const std::string&)> walk = [&](const std::string& n) {
      if (!seen.insert(n).second) throw TagError(ErrorKind::malformed_tree, "cycle through '" + n + "'");
      for (const auto* s : steps_under(n)) walk(s->child);
    };
    walk(root_);
    for (const auto& n : nodes_)
      if (!seen.count(n.name)) throw TagError(ErrorKind::malformed_tree, "'" + n.name + "' is not connected to the root");
  }

  /// Fills in tree ids, set flags and anchor lexemes from `g`.
  void bind(const Grammar& g) {
    for (auto& n : nodes_) {
      n.elementary = elementary_of(n.name);
      if (auto it = g.trees.find(n.elementary); it != g.trees.end()) {
        n.is_set = false;
        n.lexeme = it->second.anchor();
      } else if (auto st = g.tree_sets.find(n.elementary); st != g.tree_sets.end()) {
        n.is_set = true;
        n.lexeme = st->second.anchor();
      } else {
        throw TagError(ErrorKind::unknown_id, "derivation names unknown tree or set '" + n.elementary + "'");
      }
    }
  }

  /// Order-insensitive structural form: two derivations are the same iff
  /// their canonical strings are equal (occurrence names are ignored).
  std::string canonical() const { return canonical_from(root_); }

  friend bool same_derivation(const DerivationTree& a, const DerivationTree& b) {
    return a.canonical() == b.canonical();
  }

 private:
  void ensure_node(const std::string& name) {
    if (!find(name)) nodes_.push_back({name, elementary_of(name), false, {}});
  }

  std::string canonical_from(const std::string& name) const {
    std::vector<std::string> parts;
    for (const auto* s : steps_under(name)) {
      std::string p = std::string(to_string(s->op)) + "|" + s->parent_member + "|";
      for (const auto& a : s->sites) p += a.str() + ",";
      p += "|" + s->label.str() + "|" + canonical_from(s->child);
      parts.push_back(std::move(p));
    }
    std::sort(parts.begin(), parts.end());
    std::string out = node(name).elementary + "{";
    for (const auto& p : parts) out += p + ";";
    return out + "}";
  }

  std::string root_;
  std::vector<DerivationNode> nodes_;
  std::vector<DerivationStep> steps_;
};

struct DerivationResult {
  PhraseTree derived;
  std::string yield;
};

namespace detail {

class DerivationRunner {
 public:
  DerivationRunner(const Grammar& g, const DerivationTree& d) : g_(g), d_(d) {}

  PhraseTree build_tree(const std::string& name) {
    const auto& node = d_.node(name);
    if (node.is_set) throw TagError(ErrorKind::wrong_shape, "tree set '" + name + "' can only be used by adjoin_set");
    PhraseTree t = PhraseTree::from_elementary(g_.tree(node.elementary), name);
    attach(t, name, {}, g_.tree(node.elementary));
    return t;
  }

 private:
  void attach(PhraseTree& t, const std::string& name, const std::string& member, const ElementaryTree& elem) {
    for (const auto* step : d_.steps_under(name)) {
      if (step->parent_member != member) continue;
      try {
        apply(t, name, member, elem, *step);
      } catch (const TagError& e) {
        throw e.with_context("step " + std::to_string(index_of(step)) + " (" + std::string(to_string(step->op)) + " " +
                             step->child + " -> " + step->parent + ")");
      }
    }
  }

  void apply(PhraseTree& t, const std::string& name, const std::string& member, const ElementaryTree& elem,
             const DerivationStep& step) {
    const std::string occurrence = member.empty() ? name : name + ":" + member;
    std::vector<NodeAddress> current;
    for (const auto& site : step.sites) {
      if (!find_node(elem.root, site))
        throw TagError(ErrorKind::illegal_site, "'" + elem.id + "' has no node at " + site.str());
      auto at = find_origin(t.root(), Origin{occurrence, site});
      if (!at) throw TagError(ErrorKind::illegal_site, "site " + site.str() + " of " + occurrence + " is already filled");
      if (step.op != Operation::substitute && node_at(t.root(), *at).adjoined)
        throw TagError(ErrorKind::illegal_site, "site " + site.str() + " of " + occurrence + " already took an adjunction");
      current.push_back(*at);
    }
    const auto& child = d_.node(step.child);
    if (step.op == Operation::adjoin_set) {
      if (!child.is_set) throw TagError(ErrorKind::wrong_shape, "'" + step.child + "' is not a tree set");
      const TreeSet& set = g_.tree_set(child.elementary);
      std::vector<PhraseTree> members;
      for (const auto& m : set.members) {
        if (!m.is_auxiliary()) throw TagError(ErrorKind::wrong_shape, "set member '" + m.id + "' is not auxiliary");
        PhraseTree pm = PhraseTree::from_elementary(m, step.child + ":" + m.id);
        attach(pm, step.child, m.id, m);
        members.push_back(std::move(pm));
      }
      t = adjoin_set(t, current, members);
      return;
    }
    if (current.size() != 1) throw TagError(ErrorKind::syntax, "expected exactly one site");
    PhraseTree sub = build_tree(step.child);
    const auto& sub_elem = g_.tree(child.elementary);
    if (step.op == Operation::substitute) {
      if (sub_elem.is_auxiliary()) throw TagError(ErrorKind::wrong_shape, "'" + sub_elem.id + "' is auxiliary; it cannot substitute");
      t = substitute(t, current.front(), sub);
    } else {
      if (!sub_elem.is_auxiliary()) throw TagError(ErrorKind::wrong_shape, "'" + sub_elem.id + "' is initial; it cannot adjoin");
      t = adjoin(t, current.front(), sub);
    }
  }

  std::size_t index_of(const DerivationStep* step) const {
    return static_cast<std::size_t>(step - d_.steps().data()) + 1;
  }

  const Grammar& g_;
  const DerivationTree& d_;
};

}  // namespace detail

/// Replays a derivation script. Sites are addresses inside the parent
/// elementary tree, so the result does not depend on step order.
inline DerivationResult run_derivation(const Grammar& g, const DerivationTree& script) {
  DerivationTree d = script;
  d.check_well_formed();
  d.bind(g);
  if (d.node(d.root()).is_set || g.tree(d.node(d.root()).elementary).is_auxiliary())
    throw TagError(ErrorKind::wrong_shape, "derivation root '" + d.root() + "' must be an initial tree");
  PhraseTree derived = detail::DerivationRunner(g, d).build_tree(d.root());
  std::optional<std::string> open;
  visit(derived.root(), [&](const TreeNode& n, const NodeAddress&) {
    if (!open && (n.kind == NodeKind::substitution || n.kind == NodeKind::foot))
      open = std::string(to_string(n.kind)) + " node " + n.label + " at " + n.origin.address.str() + " of " + n.origin.tree;
  });
  if (open) throw TagError(ErrorKind::incomplete_derivation, "unfilled " + *open);
  auto y = derived.yield();
  return {std::move(derived), std::move(y)};
}

}  // namespace tagforge
