#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tagforge/dependency.hpp"
#include "tagforge/lexer.hpp"

namespace tagforge {

/// Two-segment yield of a dependency subtree. Segments are composed as
/// units and never broken up.
struct SegmentPair {
  std::vector<std::string> y1;
  std::vector<std::string> y2;

  std::vector<std::string> joined() const {
    auto out = y1;
    out.insert(out.end(), y2.begin(), y2.end());
    return out;
  }

  std::string str() const {
    auto seg = [](const std::vector<std::string>& s) { return s.empty() ? std::string("-") : join_words(s); };
    return seg(y1) + ", " + seg(y2);
  }

  friend bool operator==(const SegmentPair&, const SegmentPair&) = default;
};

// ---------------------------------------------------------------------------
// Rule model

enum class DepField { rel, cat, word };

struct DepAtom {
  DepField field = DepField::cat;
  bool negate = false;
  std::string value;
};

/// Conjunction of atoms over one dependent; empty matches every dependent.
struct DepFilter {
  std::vector<DepAtom> atoms;
};

struct Condition {
  enum class Type { head_cat, head_word, exists, none, always };
  Type type = Type::always;
  bool negate = false;  // for head_cat / head_word
  std::string value;
  DepFilter filter;     // for exists / none
};

enum class Segment { whole, y1, y2 };
enum class DepOrder { by_tree, by_actant };

struct Term {
  enum class Type { head, bound, group };
  Type type = Type::head;
  Segment segment = Segment::whole;
  DepFilter filter;  // group only
  DepOrder order = DepOrder::by_tree;
};

struct SyntagmRule {
  std::string id;
  std::vector<Condition> guard;
  std::vector<Term> y1;
  std::vector<Term> y2;
};

struct RuleSet {
  std::map<std::string, std::string> categories;  // word -> category
  std::vector<SyntagmRule> rules;

  std::string category_of(const std::string& word) const {
    auto it = categories.find(word);
    return it == categories.end() ? std::string() : it->second;
  }
};

// ---------------------------------------------------------------------------
// Evaluation

struct NodeLinearization {
  std::string rule;
  SegmentPair pair;
};

struct LinearizationStep {
  std::size_t node = 0;
  std::string rule;
  SegmentPair pair;
};

struct Linearization {
  std::vector<std::string> words;
  std::vector<LinearizationStep> trace;  // bottom-up, one per overt node

  std::string str() const { return join_words(words); }
  const LinearizationStep* step_for(const DependencyTree& t, const std::string& lexeme) const {
    for (const auto& s : trace)
      if (t.node(s.node).lexeme == lexeme) return &s;
    return nullptr;
  }
};

namespace detail {

struct DepView {
  std::size_t node;
  std::string rel;
  std::string cat;
  std::string word;
  ArcLabel label;
  std::size_t rank;  // position among the head's arcs
};

inline bool atom_matches(const DepAtom& a, const DepView& d) {
  const std::string& field = a.field == DepField::rel ? d.rel : a.field == DepField::cat ? d.cat : d.word;
  return (field == a.value) != a.negate;
}

inline bool filter_matches(const DepFilter& f, const DepView& d) {
  return std::all_of(f.atoms.begin(), f.atoms.end(), [&](const DepAtom& a) { return atom_matches(a, d); });
}

inline std::vector<const DepView*> matching(const DepFilter& f, const std::vector<DepView>& deps) {
  std::vector<const DepView*> out;
  for (const auto& d : deps)
    if (filter_matches(f, d)) out.push_back(&d);
  return out;
}

inline bool guard_holds(const SyntagmRule& r, const std::string& head_cat, const std::string& head_word,
                        const std::vector<DepView>& deps) {
  for (const auto& c : r.guard) {
    bool ok = true;
    switch (c.type) {
      case Condition::Type::head_cat: ok = (head_cat == c.value) != c.negate; break;
      case Condition::Type::head_word: ok = (head_word == c.value) != c.negate; break;
      case Condition::Type::exists: ok = !matching(c.filter, deps).empty(); break;
      case Condition::Type::none: ok = matching(c.filter, deps).empty(); break;
      case Condition::Type::always: ok = true; break;
    }
    if (!ok) return false;
  }
  return true;
}

inline int actant_key(const ArcLabel& l) {
  switch (l.kind) {
    case ArcLabel::Kind::actant: return l.index;
    case ArcLabel::Kind::attr: return 1 << 20;
    case ArcLabel::Kind::s: return (1 << 20) + 1;
  }
  return 0;
}

}  // namespace detail

/// Builds the SegmentPair of `node` from its dependents' pairs using the one
/// rule whose guard holds.
inline NodeLinearization linearize_node(const DependencyTree& t, std::size_t node,
                                        const std::map<std::size_t, SegmentPair>& dependent_pairs,
                                        const RuleSet& rules) {
  const std::string& head_word = t.node(node).lexeme;
  const std::string head_cat = rules.category_of(head_word);
  std::vector<detail::DepView> deps;
  for (const auto* a : t.arcs_from(node)) {
    if (t.node(a->dependent).covert) continue;
    const auto& w = t.node(a->dependent).lexeme;
    deps.push_back({a->dependent, a->label.str(), rules.category_of(w), w, a->label, deps.size()});
  }

  std::vector<const SyntagmRule*> hits;
  for (const auto& r : rules.rules)
    if (detail::guard_holds(r, head_cat, head_word, deps)) hits.push_back(&r);
  if (hits.empty()) throw TagError(ErrorKind::no_rule, "no syntagm applies to '" + head_word + "'");
  if (hits.size() > 1) {
    std::vector<std::string> ids;
    for (const auto* r : hits) ids.push_back(r->id);
    throw TagError(ErrorKind::ambiguous_rule, "'" + head_word + "' matches " + join_words(ids, ", "));
  }
  const SyntagmRule& rule = *hits.front();

  auto pair_of = [&](std::size_t n) -> const SegmentPair& {
    auto it = dependent_pairs.find(n);
    if (it == dependent_pairs.end()) throw TagError(ErrorKind::segment_use, "no yield computed for '" + t.node(n).lexeme + "'");
    return it->second;
  };

  std::optional<std::size_t> bound;
  auto resolve_bound = [&]() -> std::size_t {
    if (bound) return *bound;
    for (const auto& c : rule.guard)
      if (c.type == Condition::Type::exists) {
        auto m = detail::matching(c.filter, deps);
        if (m.size() != 1)
          throw TagError(ErrorKind::segment_use, "rule " + rule.id + ": 'dep' matches " + std::to_string(m.size()) +
                                                     " dependents of '" + head_word + "'");
        bound = m.front()->node;
        return *bound;
      }
    throw TagError(ErrorKind::segment_use, "rule " + rule.id + " uses 'dep' without an 'exists' condition");
  };

  std::map<std::size_t, std::pair<int, int>> uses;  // node -> (y1 uses, y2 uses)
  std::vector<bool> claimed(deps.size(), false);
  int head_uses = 0;
  // The bound dependent is claimed before any group is evaluated.
  for (const auto* seg : {&rule.y1, &rule.y2})
    for (const auto& term : *seg)
      if (term.type == Term::Type::bound) {
        auto b = resolve_bound();
        for (std::size_t i = 0; i < deps.size(); ++i)
          if (deps[i].node == b) claimed[i] = true;
      }

  auto emit = [&](std::vector<std::string>& out, std::size_t n, Segment s) {
    const auto& p = pair_of(n);
    auto& u = uses[n];
    if (s != Segment::y2) {
      out.insert(out.end(), p.y1.begin(), p.y1.end());
      ++u.first;
    }
    if (s != Segment::y1) {
      out.insert(out.end(), p.y2.begin(), p.y2.end());
      ++u.second;
    }
  };

  auto build = [&](const std::vector<Term>& terms) {
    std::vector<std::string> out;
    for (const auto& term : terms) {
      switch (term.type) {
        case Term::Type::head:
          out.push_back(head_word);
          ++head_uses;
          break;
        case Term::Type::bound:
          emit(out, resolve_bound(), term.segment);
          break;
        case Term::Type::group: {
          std::vector<std::size_t> picked;
          for (std::size_t i = 0; i < deps.size(); ++i)
            if (!claimed[i] && detail::filter_matches(term.filter, deps[i])) {
              claimed[i] = true;
              picked.push_back(i);
            }
          if (term.order == DepOrder::by_actant)
            std::stable_sort(picked.begin(), picked.end(), [&](std::size_t a, std::size_t b) {
              return detail::actant_key(deps[a].label) < detail::actant_key(deps[b].label);
            });
          for (auto i : picked) emit(out, deps[i].node, term.segment);
          break;
        }
      }
    }
    return out;
  };

  NodeLinearization result{rule.id, {}};
  result.pair.y1 = build(rule.y1);
  result.pair.y2 = build(rule.y2);

  if (head_uses != 1)
    throw TagError(ErrorKind::segment_use, "rule " + rule.id + " places '" + head_word + "' " + std::to_string(head_uses) + " times");
  for (const auto& d : deps) {
    const auto& p = pair_of(d.node);
    auto u = uses[d.node];
    bool y1_ok = u.first == 1 || (u.first == 0 && p.y1.empty());
    bool y2_ok = u.second == 1 || (u.second == 0 && p.y2.empty());
    if (!y1_ok || !y2_ok)
      throw TagError(ErrorKind::segment_use, "rule " + rule.id + " at '" + head_word + "' does not use each segment of '" +
                                                 d.word + "' exactly once");
  }
  return result;
}

/// Bottom-up fold over the tree; the result is the root's y1 followed by y2.
inline Linearization linearize(const DependencyTree& t, const RuleSet& rules) {
  t.check();
  Linearization out;
  std::map<std::size_t, SegmentPair> pairs;
  auto rec = [&](auto& self, std::size_t n, const std::string& path) -> void {
    for (const auto* a : t.arcs_from(n))
      if (!t.node(a->dependent).covert) self(self, a->dependent, path + "/" + t.node(a->dependent).lexeme);
    try {
      auto r = linearize_node(t, n, pairs, rules);
      out.trace.push_back({n, r.rule, r.pair});
      pairs[n] = std::move(r.pair);
    } catch (const TagError& e) {
      throw e.with_context(path);
    }
  };
  auto root = t.root();
  rec(rec, root, t.node(root).lexeme);
  out.words = pairs[root].joined();
  return out;
}

// ---------------------------------------------------------------------------
// Rule file parser; the grammar is documented in docs/syntagm-rules.md.

namespace detail {

inline bool parse_op(text::Lexer& lex) {
  if (lex.accept("=")) return false;
  if (lex.accept("!=")) return true;
  lex.fail("expected '=' or '!='");
}

inline std::string rule_value(text::Lexer& lex) {
  if (lex.peek().type == text::TokenType::quoted) return lex.next().text;
  return lex.word("a value");
}

inline DepAtom parse_dep_atom(text::Lexer& lex, bool prefixed) {
  auto w = lex.word("a dependent attribute");
  std::string key = w;
  if (prefixed) {
    if (w.rfind("dep.", 0) != 0) lex.fail("expected dep.rel, dep.cat or dep.word");
    key = w.substr(4);
  }
  DepAtom atom;
  if (key == "rel") atom.field = DepField::rel;
  else if (key == "cat") atom.field = DepField::cat;
  else if (key == "word") atom.field = DepField::word;
  else lex.fail("unknown dependent attribute '" + w + "'");
  atom.negate = parse_op(lex);
  atom.value = rule_value(lex);
  return atom;
}

inline DepFilter parse_guard_filter(text::Lexer& lex) {
  DepFilter f;
  if (lex.accept_word("dep")) return f;
  f.atoms.push_back(parse_dep_atom(lex, true));
  while (lex.accept_word("with")) f.atoms.push_back(parse_dep_atom(lex, true));
  return f;
}

inline Condition parse_condition(text::Lexer& lex) {
  Condition c;
  if (lex.accept_word("true")) return c;
  if (lex.accept_word("exists")) {
    c.type = Condition::Type::exists;
    c.filter = parse_guard_filter(lex);
    return c;
  }
  if (lex.accept_word("no")) {
    c.type = Condition::Type::none;
    c.filter = parse_guard_filter(lex);
    return c;
  }
  if (lex.accept_word("head.cat")) c.type = Condition::Type::head_cat;
  else if (lex.accept_word("head.word")) c.type = Condition::Type::head_word;
  else lex.fail("expected a condition");
  c.negate = parse_op(lex);
  c.value = rule_value(lex);
  return c;
}

inline Segment parse_segment_suffix(text::Lexer& lex, std::string& word) {
  auto strip = [&](std::string_view suffix) {
    if (word.size() > suffix.size() && word.compare(word.size() - suffix.size(), suffix.size(), suffix) == 0) {
      word.resize(word.size() - suffix.size());
      return true;
    }
    return false;
  };
  (void)lex;
  if (strip(".y1")) return Segment::y1;
  if (strip(".y2")) return Segment::y2;
  return Segment::whole;
}

inline Term parse_group(text::Lexer& lex, bool nominals) {
  Term t;
  t.type = Term::Type::group;
  lex.expect("(");
  if (nominals) t.filter.atoms.push_back({DepField::cat, false, "N"});
  bool need_filter = !nominals;
  while (!lex.peek().is(")")) {
    if (lex.accept_word("byActant")) t.order = DepOrder::by_actant;
    else if (lex.accept_word("byTree")) t.order = DepOrder::by_tree;
    else if (need_filter && lex.accept_word("*")) need_filter = false;
    else if (need_filter) {
      t.filter.atoms.push_back(parse_dep_atom(lex, false));
      while (lex.accept_word("and")) t.filter.atoms.push_back(parse_dep_atom(lex, false));
      need_filter = false;
    } else {
      lex.fail("expected byActant or byTree");
    }
    if (!lex.accept(",")) break;
  }
  lex.expect(")");
  if (lex.peek().type == text::TokenType::word && (lex.peek().text == ".y1" || lex.peek().text == ".y2"))
    t.segment = lex.next().text == ".y1" ? Segment::y1 : Segment::y2;
  return t;
}

inline std::vector<Term> parse_expr(text::Lexer& lex) {
  std::vector<Term> out;
  if (lex.accept_word("-")) return out;
  do {
    auto w = lex.word("a term");
    if (w == "deps" || w == "nominals") {
      out.push_back(parse_group(lex, w == "nominals"));
      continue;
    }
    auto seg = parse_segment_suffix(lex, w);
    Term t;
    t.segment = seg;
    if (w == "head" && seg == Segment::whole) t.type = Term::Type::head;
    else if (w == "dep") t.type = Term::Type::bound;
    else lex.fail("unknown term '" + w + "'");
    out.push_back(t);
  } while (lex.accept("++"));
  return out;
}

}  // namespace detail

inline RuleSet parse_rules(std::string_view source, const std::string& origin = "<rules>") {
  static const std::vector<std::string> puncts{"{", "}", "(", ")", ";", ",", "=", "!=", "++"};
  text::Lexer lex(source, puncts, origin);
  RuleSet rs;
  while (!lex.at_end()) {
    if (lex.accept_word("category")) {
      auto cat = lex.word("a category name");
      lex.expect("=");
      while (!lex.accept(";")) {
        auto w = lex.peek().type == text::TokenType::quoted ? lex.next().text : lex.word("a word");
        rs.categories[w] = cat;
      }
      continue;
    }
    lex.expect_word("rule");
    SyntagmRule r;
    r.id = lex.word("a rule name");
    lex.expect_word("when");
    r.guard.push_back(detail::parse_condition(lex));
    while (lex.accept_word("and")) r.guard.push_back(detail::parse_condition(lex));
    lex.expect("{");
    lex.expect_word("y1");
    lex.expect("=");
    r.y1 = detail::parse_expr(lex);
    lex.expect(";");
    lex.expect_word("y2");
    lex.expect("=");
    r.y2 = detail::parse_expr(lex);
    lex.accept(";");
    lex.expect("}");
    rs.rules.push_back(std::move(r));
  }
  return rs;
}

inline RuleSet load_rules(const std::string& path) { return parse_rules(read_file(path), path); }

}  // namespace tagforge
