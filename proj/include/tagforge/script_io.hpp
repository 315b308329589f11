#pragma once

#include <string>
#include <string_view>

#include "tagforge/derivation.hpp"
#include "tagforge/grammar_io.hpp"
#include "tagforge/lexer.hpp"

namespace tagforge {

// Derivation script format:
//
//   use α1;
//   subst α2 -> α1 @ 1 label 1;
//   subst α3 -> α1 @ 2.2 label 2;
//   adjoin β1 -> α1 @ 2 label ATTR;
//   adjoin_set σ1 -> α1 @ 2, 2.2 label S;
//   subst α4 -> σ1:β2a @ 1 label 1;      # into a member of a set occurrence
//
// Addresses are 1-based, dot separated, "0" is the root. A tree used more
// than once is named `id[2]`, `id[3]`, ...

inline DerivationTree parse_script(std::string_view source, const std::string& origin = "<script>") {
  static const std::vector<std::string> puncts{";", ","};
  text::Lexer lex(source, puncts, origin);
  DerivationTree d;
  bool have_root = false;
  while (!lex.at_end()) {
    if (lex.accept_word("use")) {
      if (have_root) lex.fail("second 'use' statement");
      d.set_root(lex.word("a tree name"));
      have_root = true;
      lex.expect(";");
      continue;
    }
    auto op_word = lex.word("an operation");
    auto op = operation_from_string(op_word);
    if (!op) lex.fail("unknown operation '" + op_word + "'");
    DerivationStep step;
    step.op = *op;
    step.child = lex.word("a tree name");
    lex.expect_word("->");
    auto parent = lex.word("a parent name");
    if (auto colon = parent.find(':'); colon != std::string::npos) {
      step.parent = parent.substr(0, colon);
      step.parent_member = parent.substr(colon + 1);
    } else {
      step.parent = parent;
    }
    lex.expect_word("@");
    do {
      auto addr = lex.word("an address");
      try {
        step.sites.push_back(NodeAddress::parse(addr));
      } catch (const TagError&) {
        lex.fail("bad address '" + addr + "'");
      }
    } while (lex.accept(","));
    lex.expect_word("label");
    auto label = lex.word("an arc label");
    try {
      step.label = ArcLabel::parse(label);
    } catch (const TagError&) {
      lex.fail("bad arc label '" + label + "'");
    }
    lex.expect(";");
    if (step.op != Operation::adjoin_set && step.sites.size() != 1) lex.fail("this operation takes exactly one site");
    d.add_step(std::move(step));
  }
  if (!have_root) throw TagError(ErrorKind::syntax, origin + ": script has no 'use' statement");
  return d;
}

inline DerivationTree load_script(const std::string& path) { return parse_script(read_file(path), path); }

inline std::string script_to_string(const DerivationTree& d) {
  std::string out = "use " + d.root() + ";\n";
  for (const auto& s : d.steps()) {
    out += std::string(to_string(s.op)) + " " + s.child + " -> " + s.parent;
    if (!s.parent_member.empty()) out += ":" + s.parent_member;
    out += " @ ";
    for (std::size_t i = 0; i < s.sites.size(); ++i) out += (i ? ", " : "") + s.sites[i].str();
    out += " label " + s.label.str() + ";\n";
  }
  return out;
}

}  // namespace tagforge
