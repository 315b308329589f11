#pragma once

// Oracles and generators shared by the unit suites and the acceptance run.

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "tagforge.hpp"

namespace support {

using namespace tagforge;

inline std::string corpus(const std::string& name) { return std::string(TAGFORGE_CORPUS) + "/" + name; }

// ---------------------------------------------------------------------------
// Projectivity oracle: an ordered tree is projective iff every subtree
// occupies a contiguous block of positions.

inline bool contiguous_subtrees(const std::vector<int>& parent, const std::vector<std::size_t>& position) {
  const std::size_t n = parent.size();
  for (std::size_t v = 0; v < n; ++v) {
    std::size_t lo = n, hi = 0, count = 0;
    for (std::size_t u = 0; u < n; ++u) {
      int w = static_cast<int>(u);
      while (w != -1 && w != static_cast<int>(v)) w = parent[w];
      if (w == -1) continue;
      lo = std::min(lo, position[u]);
      hi = std::max(hi, position[u]);
      ++count;
    }
    if (hi - lo + 1 != count) return false;
  }
  return true;
}

/// One representative parent array (parent[i] < i, parent[0] = -1) for each
/// unlabeled rooted tree with `n` nodes.
inline std::vector<std::vector<int>> rooted_tree_shapes(std::size_t n) {
  std::vector<std::vector<int>> out;
  std::set<std::string> seen;
  std::vector<int> parent(n, -1);
  std::function<std::string(std::size_t)> shape = [&](std::size_t v) {
    std::vector<std::string> kids;
    for (std::size_t u = 0; u < n; ++u)
      if (parent[u] == static_cast<int>(v)) kids.push_back(shape(u));
    std::sort(kids.begin(), kids.end());
    std::string s = "(";
    for (auto& k : kids) s += k;
    return s + ")";
  };
  std::function<void(std::size_t)> fill = [&](std::size_t i) {
    if (i == n) {
      if (seen.insert(shape(0)).second) out.push_back(parent);
      return;
    }
    for (std::size_t p = 0; p < i; ++p) {
      parent[i] = static_cast<int>(p);
      fill(i + 1);
    }
  };
  if (n > 0) fill(1);
  return out;
}

inline DependencyTree tree_from_parents(const std::vector<int>& parent) {
  DependencyTree t;
  for (std::size_t i = 0; i < parent.size(); ++i) t.add_node("w" + std::to_string(i));
  std::vector<int> next(parent.size(), 1);
  for (std::size_t i = 1; i < parent.size(); ++i) t.add_arc(parent[i], i, ArcLabel::actant(next[parent[i]]++));
  return t;
}

struct ProjectivityTally {
  std::size_t cases = 0;
  std::size_t disagreements = 0;
};

/// Every tree shape with up to `max_nodes` nodes in every surface order.
inline ProjectivityTally exhaustive_projectivity(std::size_t max_nodes) {
  ProjectivityTally tally;
  for (std::size_t n = 1; n <= max_nodes; ++n)
    for (const auto& parent : rooted_tree_shapes(n)) {
      auto t = tree_from_parents(parent);
      std::vector<std::size_t> order(n);
      std::iota(order.begin(), order.end(), 0);
      std::vector<std::size_t> position(n);
      do {
        for (std::size_t k = 0; k < n; ++k) position[order[k]] = k;
        t.set_order(order);
        bool fast = is_projective(t).projective;
        if (fast != contiguous_subtrees(parent, position)) ++tally.disagreements;
        ++tally.cases;
      } while (std::next_permutation(order.begin(), order.end()));
    }
  return tally;
}

// ---------------------------------------------------------------------------
// Non-member sampling for the parser oracle

/// Up to `count` distinct word strings of length 1..max_len over the
/// grammar's vocabulary that are not in `language`.
inline std::vector<std::vector<std::string>> sample_non_members(const Grammar& g, const std::set<std::string>& language,
                                                                std::size_t count, std::size_t max_len,
                                                                std::mt19937& rng) {
  auto vocab_set = g.vocabulary();
  std::vector<std::string> vocab(vocab_set.begin(), vocab_set.end());
  std::set<std::string> seen;
  std::vector<std::vector<std::string>> out;
  std::uniform_int_distribution<std::size_t> len(1, max_len), word(0, vocab.size() - 1);
  for (std::size_t attempt = 0; out.size() < count && attempt < 2000000; ++attempt) {
    std::vector<std::string> s(len(rng));
    // half the samples perturb a member so that near misses are covered
    if (attempt % 2 == 0 && !language.empty()) {
      auto it = language.begin();
      std::advance(it, std::uniform_int_distribution<std::size_t>(0, language.size() - 1)(rng));
      s = split_words(*it);
      auto pos = std::uniform_int_distribution<std::size_t>(0, s.size() - 1)(rng);
      switch (rng() % 3) {
        case 0: s[pos] = vocab[word(rng)]; break;
        case 1: std::swap(s[pos], s[std::uniform_int_distribution<std::size_t>(0, s.size() - 1)(rng)]); break;
        default: s.erase(s.begin() + static_cast<std::ptrdiff_t>(pos)); break;
      }
      if (s.empty() || s.size() > max_len) continue;
    } else {
      for (auto& w : s) w = vocab[word(rng)];
    }
    auto text = join_words(s);
    if (language.count(text) || !seen.insert(text).second) continue;
    out.push_back(std::move(s));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Random elementary trees for the splice laws

class RandomTrees {
 public:
  explicit RandomTrees(unsigned seed) : rng_(seed) {}

  std::mt19937& rng() { return rng_; }

  TreeNode random_node(const std::string& label, int depth) {
    auto n = TreeNode::interior(label);
    std::size_t kids = 1 + rng_() % 3;
    for (std::size_t i = 0; i < kids; ++i) {
      int roll = static_cast<int>(rng_() % 10);
      if (depth > 0 && roll < 4) n.children.push_back(random_node(pick_label(), depth - 1));
      else if (roll < 7) n.children.push_back(TreeNode::leaf(NodeKind::substitution, pick_label()));
      else n.children.push_back(TreeNode::leaf(NodeKind::terminal, pick_word()));
    }
    return n;
  }

  ElementaryTree initial(const std::string& label) {
    auto root = random_node(label, 2);
    return {"a" + std::to_string(counter_++), TreeShape::initial, std::move(root)};
  }

  /// Auxiliary tree: a random tree where one leaf is turned into the foot.
  ElementaryTree auxiliary(const std::string& label) {
    auto root = random_node(label, 2);
    std::vector<NodeAddress> leaves;
    visit(root, [&](const TreeNode& n, const NodeAddress& a) {
      if (n.children.empty()) leaves.push_back(a);
    });
    auto& foot = node_at(root, leaves[rng_() % leaves.size()]);
    foot = TreeNode::leaf(NodeKind::foot, label);
    return {"b" + std::to_string(counter_++), TreeShape::auxiliary, std::move(root)};
  }

  std::string pick_label() { return labels_[rng_() % labels_.size()]; }

 private:
  std::string pick_word() { return "w" + std::to_string(rng_() % 9); }

  std::mt19937 rng_;
  std::vector<std::string> labels_{"A", "B", "C"};
  int counter_ = 0;
};

struct LeafRef {
  NodeAddress address;
  FrontierSymbol symbol;
};

inline std::vector<LeafRef> leaves_of(const TreeNode& root) {
  std::vector<LeafRef> out;
  visit(root, [&](const TreeNode& n, const NodeAddress& a) {
    if (n.children.empty()) out.push_back({a, {n.kind, n.label}});
  });
  return out;
}

struct SpliceTally {
  std::size_t steps = 0;
  std::size_t substitutions = 0;
  std::size_t adjunctions = 0;
  std::size_t violations = 0;
};

/// Random walk of substitution and adjunction steps. After each step the
/// result's frontier must equal the target's frontier with the site's leaf
/// (substitution) or the site's leaf block (adjunction) spliced, and the node
/// count must be |target| + |elementary| - 1.
inline SpliceTally splice_laws(std::size_t steps, unsigned seed) {
  RandomTrees gen(seed);
  auto& rng = gen.rng();
  SpliceTally tally;
  PhraseTree current = PhraseTree::from_elementary(gen.initial("A"));
  while (tally.steps < steps) {
    if (current.size() > 120) current = PhraseTree::from_elementary(gen.initial(gen.pick_label()));
    auto leaves = leaves_of(current.root());
    std::vector<NodeAddress> open, interior;
    for (const auto& l : leaves)
      if (l.symbol.kind == NodeKind::substitution) open.push_back(l.address);
    visit(current.root(), [&](const TreeNode& n, const NodeAddress& a) {
      if (n.kind == NodeKind::interior && !n.adjoined) interior.push_back(a);
    });
    bool do_subst = !open.empty() && (interior.empty() || rng() % 2 == 0);
    std::vector<FrontierSymbol> expected;
    PhraseTree next;
    std::size_t elementary_size = 0;
    if (do_subst) {
      auto site = open[rng() % open.size()];
      auto tree = gen.initial(node_at(current.root(), site).label);
      elementary_size = count_nodes(tree.root);
      for (const auto& l : leaves) {
        if (l.address == site)
          for (auto& s : frontier(tree.root)) expected.push_back(s);
        else
          expected.push_back(l.symbol);
      }
      next = substitute(current, site, tree);
      ++tally.substitutions;
    } else if (!interior.empty()) {
      auto site = interior[rng() % interior.size()];
      auto tree = gen.auxiliary(node_at(current.root(), site).label);
      elementary_size = count_nodes(tree.root);
      std::vector<FrontierSymbol> block;
      bool emitted = false;
      for (const auto& l : leaves) {
        if (l.address.within(site)) {
          block.push_back(l.symbol);
          continue;
        }
        if (!block.empty() && !emitted) {
          for (auto& s : frontier(tree.root)) {
            if (s.kind == NodeKind::foot) expected.insert(expected.end(), block.begin(), block.end());
            else expected.push_back(s);
          }
          emitted = true;
        }
        expected.push_back(l.symbol);
      }
      if (!emitted)
        for (auto& s : frontier(tree.root)) {
          if (s.kind == NodeKind::foot) expected.insert(expected.end(), block.begin(), block.end());
          else expected.push_back(s);
        }
      next = adjoin(current, site, tree);
      ++tally.adjunctions;
    } else {
      current = PhraseTree::from_elementary(gen.initial(gen.pick_label()));
      continue;
    }
    ++tally.steps;
    if (frontier(next.root()) != expected || next.size() != current.size() + elementary_size - 1) ++tally.violations;
    current = std::move(next);
  }
  return tally;
}

// ---------------------------------------------------------------------------
// Cross-serial family: k verbs raised over k+1 nominals

inline Grammar cross_serial_grammar() {
  return parse_grammar(R"(
    tree zwemmen initial (S (S NP!) (V "zwemmen"@))
    tree leren   aux     (S (S NP! S*) (V "leren"@))
    tree Jan     initial (NP "Jan"@)
  )");
}

inline std::vector<std::string> cross_serial_sentence(std::size_t k) {
  std::vector<std::string> words(k + 1, "Jan");
  for (std::size_t i = 0; i < k; ++i) words.push_back("leren");
  words.push_back("zwemmen");
  return words;
}

/// Least-squares slope of log(y) against log(x).
inline double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double n = static_cast<double>(x.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace support
