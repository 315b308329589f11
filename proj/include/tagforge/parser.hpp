#pragma once

#include <algorithm>
#include <cassert>
#include <chrono>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "tagforge/derivation.hpp"
#include "tagforge/grammar.hpp"
#include "tagforge/grammar_io.hpp"

namespace tagforge {

struct ParseStats {
  std::size_t chart_size = 0;  // chart entries examined
  std::size_t item_count = 0;  // entries found derivable
  double wall_ms = 0.0;
};

struct ParseResult {
  bool recognized = false;
  std::vector<DerivationTree> derivations;
  ParseStats stats;
  std::vector<std::string> warnings;
};

constexpr std::size_t default_derivation_cap = 100;

namespace detail {

/// Chart recognizer for lexicalized TAG. A chart entry is
///   (kind, node, child index, i, j, p, q)
/// where [i, j) is the span of the node (or of the children from `child` on)
/// and [p, q) the span below the foot when the node dominates one. `top`
/// entries allow one adjunction at the node, `bottom` entries do not.
/// Entries are proved on demand and memoized; the adjunction case ranges over
/// i, r, s, j, p, q which gives the O(n^6) bound.
class TagChart {
 public:
  static constexpr std::uint32_t none = 0xff;

  TagChart(const Grammar& g, const std::vector<std::string>& words) : words_(words) {
    if (words.size() >= none - 1) throw TagError(ErrorKind::refuse_unbounded, "input longer than 253 words");
    start_ = g.start_symbol;
    for (const auto& [id, tree] : g.trees) add_tree(tree);
    for (std::size_t t = 0; t < trees_.size(); ++t) {
      const auto& label = nodes_[trees_[t].root].label;
      (trees_[t].aux ? aux_by_label_ : initial_by_label_)[label].push_back(t);
    }
  }

  bool recognized() {
    const std::uint32_t n = static_cast<std::uint32_t>(words_.size());
    if (n == 0) return false;
    for (auto t : initials_with(start_))
      if (prove(Kind::top, trees_[t].root, 0, 0, n, none, none)) return true;
    return false;
  }

  std::size_t chart_size() const { return memo_.size(); }
  std::size_t item_count() const {
    return static_cast<std::size_t>(std::count_if(memo_.begin(), memo_.end(), [](const auto& kv) { return kv.second == State::yes; }));
  }

  /// Derivations of the whole input, at most `cap`.
  std::vector<DerivationTree> derivations(std::size_t cap) {
    std::vector<DerivationTree> out;
    const std::uint32_t n = static_cast<std::uint32_t>(words_.size());
    cap_ = cap;
    if (n == 0 || cap == 0) return out;
    for (auto t : initials_with(start_)) {
      if (!prove(Kind::top, trees_[t].root, 0, 0, n, none, none)) continue;
      for (const auto& part : analyses(Kind::top, trees_[t].root, 0, 0, n, none, none)) {
        if (out.size() >= cap) return out;
        out.push_back(to_derivation(t, part));
      }
    }
    return out;
  }

 private:
  enum class Kind : std::uint8_t { top, bottom, seq };
  enum class State : std::uint8_t { busy, yes, no };

  struct PNode {
    NodeKind kind;
    std::string label;
    std::size_t tree;
    NodeAddress address;
    std::vector<std::size_t> children;
    int foot_child = -1;  // index of the child on the path to the foot
    bool dominates_foot = false;
  };

  struct PTree {
    std::string id;
    bool aux = false;
    std::size_t root = 0;
    std::vector<std::size_t> substitution_nodes;  // preorder
  };

  // Partial analyses: ropes of attachments made into one tree instance.
  struct Attachment;
  struct PartNode;
  using Part = std::shared_ptr<const PartNode>;
  struct Attachment {
    Operation op;
    std::size_t site;        // node index
    std::size_t child_tree;  // tree index
    Part child;
  };
  struct PartNode {
    Part left, right;
    std::optional<Attachment> att;
  };

  void add_tree(const ElementaryTree& tree) {
    PTree pt{tree.id, tree.is_auxiliary(), 0, {}};
    std::size_t t = trees_.size();
    trees_.push_back(pt);
    trees_[t].root = add_node(tree.root, t, {});
    for (std::size_t i = 0; i < nodes_.size(); ++i)
      if (nodes_[i].tree == t && nodes_[i].kind == NodeKind::substitution) trees_[t].substitution_nodes.push_back(i);
  }

  std::size_t add_node(const TreeNode& n, std::size_t tree, const NodeAddress& a) {
    std::size_t idx = nodes_.size();
    nodes_.push_back({n.kind, n.label, tree, a, {}, -1, n.kind == NodeKind::foot});
    std::vector<std::size_t> kids;
    for (std::size_t i = 0; i < n.children.size(); ++i) kids.push_back(add_node(n.children[i], tree, a.child(i)));
    for (std::size_t i = 0; i < kids.size(); ++i)
      if (nodes_[kids[i]].dominates_foot) {
        nodes_[idx].foot_child = static_cast<int>(i);
        nodes_[idx].dominates_foot = true;
      }
    nodes_[idx].children = std::move(kids);
    return idx;
  }

  const std::vector<std::size_t>& initials_with(const std::string& label) const {
    static const std::vector<std::size_t> empty;
    auto it = initial_by_label_.find(label);
    return it == initial_by_label_.end() ? empty : it->second;
  }

  const std::vector<std::size_t>& aux_with(const std::string& label) const {
    static const std::vector<std::size_t> empty;
    auto it = aux_by_label_.find(label);
    return it == aux_by_label_.end() ? empty : it->second;
  }

  static std::uint64_t key(Kind k, std::size_t node, std::uint32_t child, std::uint32_t i, std::uint32_t j,
                           std::uint32_t p, std::uint32_t q) {
    return (static_cast<std::uint64_t>(k) << 56) | (static_cast<std::uint64_t>(node) << 40) |
           (static_cast<std::uint64_t>(child) << 32) | (static_cast<std::uint64_t>(i) << 24) |
           (static_cast<std::uint64_t>(j) << 16) | (static_cast<std::uint64_t>(p) << 8) | q;
  }

  bool prove(Kind k, std::size_t node, std::uint32_t child, std::uint32_t i, std::uint32_t j, std::uint32_t p,
             std::uint32_t q) {
    assert(i < j && j <= words_.size());
    assert(p == none ? q == none : (i <= p && p < q && q <= j));
    auto id = key(k, node, child, i, j, p, q);
    if (auto it = memo_.find(id); it != memo_.end()) return it->second == State::yes;
    memo_[id] = State::busy;
    bool ok = compute(k, node, child, i, j, p, q);
    memo_[id] = ok ? State::yes : State::no;
    return ok;
  }

  bool known(Kind k, std::size_t node, std::uint32_t child, std::uint32_t i, std::uint32_t j, std::uint32_t p,
             std::uint32_t q) const {
    auto it = memo_.find(key(k, node, child, i, j, p, q));
    return it != memo_.end() && it->second == State::yes;
  }

  bool compute(Kind k, std::size_t node, std::uint32_t child, std::uint32_t i, std::uint32_t j, std::uint32_t p,
               std::uint32_t q) {
    const PNode& nd = nodes_[node];
    if (k == Kind::top) {
      switch (nd.kind) {
        case NodeKind::anchor:
        case NodeKind::terminal: return j == i + 1 && p == none && words_[i] == nd.label;
        case NodeKind::foot: return p == i && q == j;
        case NodeKind::substitution:
          if (p != none) return false;
          for (auto t : initials_with(nd.label))
            if (prove(Kind::top, trees_[t].root, 0, i, j, none, none)) return true;
          return false;
        case NodeKind::interior: break;
      }
      if (prove(Kind::bottom, node, 0, i, j, p, q)) return true;
      return for_each_adjunction(node, i, j, p, q, [](std::size_t, std::uint32_t, std::uint32_t) { return true; });
    }
    if (k == Kind::bottom) return prove(Kind::seq, node, 0, i, j, p, q);

    // seq: children child.. cover [i, j)
    const std::size_t c = nd.children[child];
    const bool last = child + 1 == nd.children.size();
    const bool carries_foot = nd.foot_child == static_cast<int>(child);
    const bool foot_later = nd.foot_child > static_cast<int>(child);
    if (last) {
      if (carries_foot != (p != none)) return false;
      return prove(Kind::top, c, 0, i, j, p, q);
    }
    if ((p != none) != (carries_foot || foot_later)) return false;
    for (std::uint32_t m = i + 1; m < j; ++m) {
      if (carries_foot && q > m) continue;
      if (foot_later && p < m) break;
      std::uint32_t cp = carries_foot ? p : none, cq = carries_foot ? q : none;
      std::uint32_t rp = carries_foot ? none : p, rq = carries_foot ? none : q;
      if (prove(Kind::top, c, 0, i, m, cp, cq) && prove(Kind::seq, node, child + 1, m, j, rp, rq)) return true;
    }
    return false;
  }

  /// Tries every auxiliary tree and inner span [r, s) for an adjunction at
  /// `node`; `fn` returns true to stop. Returns whether any was found.
  template <class Fn>
  bool for_each_adjunction(std::size_t node, std::uint32_t i, std::uint32_t j, std::uint32_t p, std::uint32_t q, Fn&& fn) {
    bool found = false;
    const PNode& nd = nodes_[node];
    for (auto b : aux_with(nd.label)) {
      std::uint32_t r_max = p == none ? j - 1 : p;
      for (std::uint32_t r = i; r <= r_max; ++r) {
        std::uint32_t s_min = p == none ? r + 1 : q;
        for (std::uint32_t s = std::max(s_min, r + 1); s <= j; ++s) {
          if (r == i && s == j) continue;
          if (prove(Kind::bottom, node, 0, r, s, p, q) && prove(Kind::top, trees_[b].root, 0, i, j, r, s)) {
            found = true;
            if (fn(b, r, s)) return true;
          }
        }
      }
    }
    return found;
  }

  static Part join(const Part& a, const Part& b) {
    if (!a) return b;
    if (!b) return a;
    return std::make_shared<PartNode>(PartNode{a, b, std::nullopt});
  }

  static Part attach(const Part& rest, Attachment att) {
    return std::make_shared<PartNode>(PartNode{rest, nullptr, std::move(att)});
  }

  const std::vector<Part>& analyses(Kind k, std::size_t node, std::uint32_t child, std::uint32_t i, std::uint32_t j,
                                    std::uint32_t p, std::uint32_t q) {
    auto id = key(k, node, child, i, j, p, q);
    if (auto it = parts_.find(id); it != parts_.end()) return it->second;
    std::vector<Part> out;
    const PNode& nd = nodes_[node];
    auto full = [&] { return out.size() >= cap_; };
    if (k == Kind::top) {
      switch (nd.kind) {
        case NodeKind::anchor:
        case NodeKind::terminal:
        case NodeKind::foot: out.push_back(nullptr); break;
        case NodeKind::substitution:
          for (auto t : initials_with(nd.label)) {
            if (full()) break;
            if (!known(Kind::top, trees_[t].root, 0, i, j, none, none)) continue;
            for (const auto& sub : analyses(Kind::top, trees_[t].root, 0, i, j, none, none)) {
              if (full()) break;
              out.push_back(attach(nullptr, {Operation::substitute, node, t, sub}));
            }
          }
          break;
        case NodeKind::interior: {
          if (known(Kind::bottom, node, 0, i, j, p, q))
            for (const auto& b : analyses(Kind::bottom, node, 0, i, j, p, q)) {
              if (full()) break;
              out.push_back(b);
            }
          std::vector<std::tuple<std::size_t, std::uint32_t, std::uint32_t>> adjunctions;
          for_each_adjunction(node, i, j, p, q, [&](std::size_t b, std::uint32_t r, std::uint32_t s) {
            adjunctions.emplace_back(b, r, s);
            return false;
          });
          for (auto [b, r, s] : adjunctions) {
            const auto& inner = analyses(Kind::bottom, node, 0, r, s, p, q);
            const auto& aux = analyses(Kind::top, trees_[b].root, 0, i, j, r, s);
            for (const auto& a : aux)
              for (const auto& in : inner) {
                if (full()) break;
                out.push_back(attach(in, {Operation::adjoin, node, b, a}));
              }
          }
          break;
        }
      }
    } else if (k == Kind::bottom) {
      out = analyses(Kind::seq, node, 0, i, j, p, q);
    } else {
      const std::size_t c = nd.children[child];
      const bool last = child + 1 == nd.children.size();
      const bool carries_foot = nd.foot_child == static_cast<int>(child);
      const bool foot_later = nd.foot_child > static_cast<int>(child);
      if (last) {
        out = analyses(Kind::top, c, 0, i, j, p, q);
      } else {
        for (std::uint32_t m = i + 1; m < j && !full(); ++m) {
          if (carries_foot && q > m) continue;
          if (foot_later && p < m) break;
          std::uint32_t cp = carries_foot ? p : none, cq = carries_foot ? q : none;
          std::uint32_t rp = carries_foot ? none : p, rq = carries_foot ? none : q;
          if (!known(Kind::top, c, 0, i, m, cp, cq) || !known(Kind::seq, node, child + 1, m, j, rp, rq)) continue;
          const auto& left = analyses(Kind::top, c, 0, i, m, cp, cq);
          const auto& right = analyses(Kind::seq, node, child + 1, m, j, rp, rq);
          for (const auto& l : left)
            for (const auto& r : right) {
              if (full()) break;
              out.push_back(join(l, r));
            }
        }
      }
    }
    if (out.size() > cap_) out.resize(cap_);
    return parts_.emplace(id, std::move(out)).first->second;
  }

  static void flatten(const Part& part, std::vector<const Attachment*>& out) {
    if (!part) return;
    flatten(part->left, out);
    if (part->att) out.push_back(&*part->att);
    flatten(part->right, out);
  }

  DerivationTree to_derivation(std::size_t root_tree, const Part& part) {
    std::map<std::string, int> uses;
    auto name_for = [&](std::size_t t) {
      int k = ++uses[trees_[t].id];
      return k == 1 ? trees_[t].id : trees_[t].id + "[" + std::to_string(k) + "]";
    };
    DerivationTree d(name_for(root_tree));
    auto rec = [&](auto& self, const std::string& parent, std::size_t tree, const Part& p) -> void {
      std::vector<const Attachment*> atts;
      flatten(p, atts);
      std::sort(atts.begin(), atts.end(), [&](const Attachment* a, const Attachment* b) {
        return nodes_[a->site].address < nodes_[b->site].address;
      });
      for (const auto* a : atts) {
        std::string child = name_for(a->child_tree);
        DerivationStep step;
        step.op = a->op;
        step.child = child;
        step.parent = parent;
        step.sites = {nodes_[a->site].address};
        if (a->op == Operation::substitute) {
          const auto& subs = trees_[tree].substitution_nodes;
          auto pos = std::find(subs.begin(), subs.end(), a->site) - subs.begin();
          step.label = ArcLabel::actant(static_cast<int>(pos) + 1);
        } else {
          step.label = nodes_[trees_[a->child_tree].root].label == start_ ? ArcLabel::s() : ArcLabel::attr();
        }
        d.add_step(std::move(step));
        self(self, child, a->child_tree, a->child);
      }
    };
    rec(rec, d.root(), root_tree, part);
    return d;
  }

  const std::vector<std::string>& words_;
  std::string start_;
  std::vector<PNode> nodes_;
  std::vector<PTree> trees_;
  std::map<std::string, std::vector<std::size_t>> initial_by_label_;
  std::map<std::string, std::vector<std::size_t>> aux_by_label_;
  std::unordered_map<std::uint64_t, State> memo_;
  std::unordered_map<std::uint64_t, std::vector<Part>> parts_;
  std::size_t cap_ = default_derivation_cap;
};

inline void check_parsable(const Grammar& g) {
  for (const auto& [id, t] : g.trees) {
    ValidationReport r{id, {}, {}};
    structural_checks(t, r);
    if (!r.ok()) throw TagError(ErrorKind::malformed_tree, "tree " + id + ": " + r.violations.front().rule);
    if (t.anchors().size() != 1) throw TagError(ErrorKind::not_lexicalized, "tree " + id + " needs exactly one anchor");
  }
}

inline std::vector<std::string> set_warnings(const Grammar& g) {
  std::vector<std::string> out;
  for (const auto& [id, _] : g.tree_sets) out.push_back("UnparsedSets: tree set " + id + " skipped");
  return out;
}

}  // namespace detail

/// True iff some derivation rooted in an initial tree labeled with the start
/// symbol yields exactly `words`. Tree sets are skipped.
inline bool recognize(const Grammar& g, const std::vector<std::string>& words) {
  detail::check_parsable(g);
  detail::TagChart chart(g, words);
  return chart.recognized();
}

/// Recognizes and returns up to `cap` derivations. Derivations are sorted by
/// their (tree id, site address) step sequence and each one is replayed
/// through run_derivation to confirm it yields `words`.
inline ParseResult parse(const Grammar& g, const std::vector<std::string>& words,
                         std::size_t cap = default_derivation_cap) {
  detail::check_parsable(g);
  auto started = std::chrono::steady_clock::now();
  ParseResult result;
  result.warnings = detail::set_warnings(g);
  detail::TagChart chart(g, words);
  result.recognized = chart.recognized();
  if (result.recognized) result.derivations = chart.derivations(cap);
  auto sort_key = [](const DerivationTree& d) {
    std::vector<std::pair<std::string, NodeAddress>> k{{d.node(d.root()).elementary, {}}};
    for (const auto& s : d.steps()) k.emplace_back(elementary_of(s.child), s.sites.front());
    return k;
  };
  std::stable_sort(result.derivations.begin(), result.derivations.end(),
                   [&](const DerivationTree& a, const DerivationTree& b) { return sort_key(a) < sort_key(b); });
  for (auto& d : result.derivations) {
    d.bind(g);
    auto replay = run_derivation(g, d);
    if (replay.derived.words() != words)
      throw std::logic_error("parser produced a derivation yielding '" + replay.yield + "'");
  }
  result.stats.chart_size = chart.chart_size();
  result.stats.item_count = chart.item_count();
  result.stats.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return result;
}

// ---------------------------------------------------------------------------
// Bounded language enumeration (brute force over derived trees)

namespace detail {

inline void state_key(std::string& out, const TreeNode& n) {
  out += static_cast<char>('0' + static_cast<int>(n.kind));
  out += n.adjoined ? '^' : ' ';
  out += n.label;
  if (n.children.empty()) {
    out += '\x1f';
    return;
  }
  out += '(';
  for (const auto& c : n.children) state_key(out, c);
  out += ')';
}

}  // namespace detail

/// Every yield of a complete derivation using at most `max_trees` elementary
/// trees. Works directly on derived trees with substitute/adjoin, so it is
/// independent of the chart parser.
inline std::set<std::string> enumerate_language(const Grammar& g, std::size_t max_trees) {
  for (const auto& [id, t] : g.trees)
    if (t.anchors().size() != 1)
      throw TagError(ErrorKind::refuse_unbounded, "tree " + id + " is not lexicalized; enumeration could be unbounded");
  std::set<std::string> language;
  if (max_trees == 0) return language;

  std::vector<const ElementaryTree*> initials, auxes;
  for (const auto& [_, t] : g.trees) (t.is_auxiliary() ? auxes : initials).push_back(&t);

  std::set<std::string> visited;
  std::vector<std::pair<PhraseTree, std::size_t>> stack;
  for (const auto* t : initials)
    if (t->root.label == g.start_symbol) stack.emplace_back(PhraseTree::from_elementary(*t), 1);

  while (!stack.empty()) {
    auto [tree, used] = std::move(stack.back());
    stack.pop_back();
    std::string key;
    detail::state_key(key, tree.root());
    if (!visited.insert(key).second) continue;
    auto open = find_all(tree.root(), NodeKind::substitution);
    if (open.empty()) language.insert(tree.yield());
    if (used >= max_trees) continue;
    if (!open.empty()) {
      const auto& label = node_at(tree.root(), open.front()).label;
      for (const auto* t : initials)
        if (t->root.label == label) stack.emplace_back(substitute(tree, open.front(), *t), used + 1);
    }
    visit(tree.root(), [&](const TreeNode& n, const NodeAddress& a) {
      if (n.kind != NodeKind::interior || n.adjoined) return;
      for (const auto* t : auxes)
        if (t->root.label == n.label) stack.emplace_back(adjoin(tree, a, *t), used + 1);
    });
  }
  return language;
}

}  // namespace tagforge
