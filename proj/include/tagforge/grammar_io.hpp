#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "tagforge/grammar.hpp"
#include "tagforge/lexer.hpp"

namespace tagforge {

// Grammar text format:
//
//   tree α1 initial (S NP! (VP (V "likes"@) NP!))
//   tree β1 aux     (VP "really"@ VP*)
//   set  σ1 { β2a β2b }
//   start S                       # optional, default S
//   categories { S NP VP V }      # optional declared alphabet
//
// `X!` substitution node, `X*` foot node, `"w"` terminal, `"w"@` anchor.
// Trees named in a `set` become members of that set and are no longer
// standalone trees.

namespace detail {

inline TreeNode parse_tree_node(text::Lexer& lex) {
  if (lex.accept("(")) {
    auto label = lex.word("a category label");
    auto node = TreeNode::interior(std::move(label));
    while (!lex.peek().is(")")) {
      if (lex.at_end()) lex.fail("unbalanced parenthesis");
      node.children.push_back(parse_tree_node(lex));
    }
    lex.expect(")");
    return node;
  }
  const auto& t = lex.peek();
  if (t.type == text::TokenType::quoted) {
    auto tok = lex.next();
    return TreeNode::leaf(tok.marked ? NodeKind::anchor : NodeKind::terminal, tok.text);
  }
  if (t.type != text::TokenType::word) lex.fail("expected a tree node");
  auto w = lex.next().text;
  if (w.size() > 1 && w.back() == '!') return TreeNode::leaf(NodeKind::substitution, w.substr(0, w.size() - 1));
  if (w.size() > 1 && w.back() == '*') return TreeNode::leaf(NodeKind::foot, w.substr(0, w.size() - 1));
  return TreeNode::interior(w);  // bare leaf category; validation reports it
}

inline const std::vector<std::string>& grammar_puncts() {
  static const std::vector<std::string> p{"(", ")", "{", "}"};
  return p;
}

inline void write_node(std::string& out, const TreeNode& n) {
  switch (n.kind) {
    case NodeKind::substitution: out += n.label + "!"; return;
    case NodeKind::foot: out += n.label + "*"; return;
    case NodeKind::terminal: out += text::quote(n.label); return;
    case NodeKind::anchor: out += text::quote(n.label) + "@"; return;
    case NodeKind::interior:
      if (n.children.empty()) {
        out += "(" + n.label + ")";
        return;
      }
      out += "(" + n.label;
      for (const auto& c : n.children) {
        out += ' ';
        write_node(out, c);
      }
      out += ")";
      return;
  }
}

}  // namespace detail

/// Parses a single bracketed tree term such as `(VP "really"@ VP*)`.
inline TreeNode parse_tree(std::string_view source) {
  text::Lexer lex(source, detail::grammar_puncts(), "<tree>");
  auto node = detail::parse_tree_node(lex);
  if (!lex.at_end()) lex.fail("trailing input after tree");
  return node;
}

inline std::string tree_to_string(const TreeNode& root) {
  std::string out;
  detail::write_node(out, root);
  return out;
}

inline ElementaryTree make_tree(std::string id, TreeShape shape, std::string_view term) {
  return ElementaryTree{std::move(id), shape, parse_tree(term)};
}

inline Grammar parse_grammar(std::string_view source, const std::string& origin = "<grammar>") {
  text::Lexer lex(source, detail::grammar_puncts(), origin);
  Grammar g;
  std::vector<std::pair<std::string, std::vector<std::string>>> sets;
  std::map<std::string, ElementaryTree> declared;
  std::vector<std::string> order;
  while (!lex.at_end()) {
    if (lex.accept_word("tree")) {
      auto id = lex.word("a tree id");
      auto shape_word = lex.word("'initial' or 'aux'");
      TreeShape shape;
      if (shape_word == "initial") shape = TreeShape::initial;
      else if (shape_word == "aux" || shape_word == "auxiliary") shape = TreeShape::auxiliary;
      else lex.fail("tree shape must be 'initial' or 'aux'");
      auto root = detail::parse_tree_node(lex);
      if (declared.count(id)) lex.fail("duplicate tree id '" + id + "'");
      declared.emplace(id, ElementaryTree{id, shape, std::move(root)});
      order.push_back(id);
    } else if (lex.accept_word("set")) {
      auto id = lex.word("a set id");
      lex.expect("{");
      std::vector<std::string> members;
      while (!lex.accept("}")) members.push_back(lex.word("a member tree id"));
      sets.emplace_back(std::move(id), std::move(members));
    } else if (lex.accept_word("start")) {
      g.start_symbol = lex.word("a start category");
    } else if (lex.accept_word("categories")) {
      lex.expect("{");
      while (!lex.accept("}")) g.nonterminals.insert(lex.word("a category"));
    } else {
      lex.fail("expected 'tree', 'set', 'start' or 'categories'");
    }
  }
  for (auto& [set_id, member_ids] : sets) {
    TreeSet set{set_id, {}};
    for (const auto& m : member_ids) {
      auto it = declared.find(m);
      if (it == declared.end())
        throw TagError(ErrorKind::unknown_id, origin + ": set '" + set_id + "' names unknown or reused tree '" + m + "'");
      set.members.push_back(std::move(it->second));
      declared.erase(it);
    }
    g.add_set(std::move(set));
  }
  for (const auto& id : order)
    if (auto it = declared.find(id); it != declared.end()) g.add_tree(std::move(it->second));
  return g;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TagError(ErrorKind::io, "cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Grammar load_grammar(const std::string& path) { return parse_grammar(read_file(path), path); }

inline std::string grammar_to_string(const Grammar& g) {
  std::string out;
  if (g.start_symbol != "S") out += "start " + g.start_symbol + "\n";
  if (g.declares_nonterminals()) {
    out += "categories {";
    for (const auto& c : g.nonterminals) out += " " + c;
    out += " }\n";
  }
  auto write = [&](const ElementaryTree& t) {
    out += "tree " + t.id + " " + std::string(to_string(t.shape)) + " " + tree_to_string(t.root) + "\n";
  };
  for (const auto& [_, t] : g.trees) write(t);
  for (const auto& [id, s] : g.tree_sets) {
    for (const auto& m : s.members) write(m);
    out += "set " + id + " {";
    for (const auto& m : s.members) out += " " + m.id;
    out += " }\n";
  }
  return out;
}

}  // namespace tagforge
