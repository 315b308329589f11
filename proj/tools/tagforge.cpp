#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "tagforge.hpp"

using namespace tagforge;

namespace {

struct Options {
  std::string grammar, script, tree, rules, order, sentence, format = "text", out;
  std::size_t cap = default_derivation_cap;
  std::size_t max_trees = 4;
  bool trace = false;
};

bool looks_like_json(const std::string& text) {
  auto pos = text.find_first_not_of(" \t\r\n");
  return pos != std::string::npos && text[pos] == '{';
}

Json parse_json(const std::string& text, const std::string& path) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw TagError(ErrorKind::syntax, path + ": " + e.what());
  }
}

std::string need(const std::string& value, const char* flag) {
  if (value.empty()) throw CLI::ValidationError(std::string(flag) + " is required for this command");
  return value;
}

Grammar grammar_input(const Options& o) {
  auto path = need(o.grammar, "--grammar");
  auto text = read_file(path);
  return looks_like_json(text) ? grammar_from_json(parse_json(text, path)) : parse_grammar(text, path);
}

DerivationTree script_input(const Options& o) {
  auto path = need(o.script, "--script");
  auto text = read_file(path);
  return looks_like_json(text) ? derivation_from_json(parse_json(text, path)) : parse_script(text, path);
}

DependencyTree tree_input(const Options& o) {
  auto path = need(o.tree, "--tree");
  auto text = read_file(path);
  return looks_like_json(text) ? dependency_from_json(parse_json(text, path)) : parse_dependency(text, path);
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw TagError(ErrorKind::io, "cannot write '" + o.out + "'");
  f << text;
}

std::string line(const std::string& s) { return s + "\n"; }

void check_format(const Options& o, std::initializer_list<const char*> allowed) {
  for (const char* f : allowed)
    if (o.format == f) return;
  throw CLI::ValidationError("--format " + o.format + " is not available for this command");
}

int cmd_validate(const Options& o) {
  check_format(o, {"text", "json"});
  auto g = grammar_input(o);
  auto report = validate_grammar(g);
  auto lex = check_lexicalized(g);
  bool ok = report.ok();
  if (o.format == "json") {
    Json j{{"valid", ok}, {"lexicalized", lex.lexicalized}, {"trees", Json::array()}, {"offending", lex.offending}};
    for (const auto& r : report.trees) {
      Json t{{"id", r.tree_id}, {"violations", Json::array()}, {"warnings", Json::array()}};
      for (const auto& v : r.violations) t["violations"].push_back({{"address", v.address.str()}, {"rule", v.rule}});
      for (const auto& v : r.warnings) t["warnings"].push_back({{"address", v.address.str()}, {"rule", v.rule}});
      j["trees"].push_back(t);
    }
    emit(o, j.dump(2) + "\n");
  } else {
    std::string out;
    for (const auto& r : report.trees) {
      for (const auto& v : r.violations) out += line(r.tree_id + " @ " + v.address.str() + ": " + v.rule);
      for (const auto& v : r.warnings) out += line(r.tree_id + " @ " + v.address.str() + ": warning: " + v.rule);
    }
    for (const auto& e : report.errors) out += line(e);
    out += line(ok ? "valid" : "invalid");
    if (lex.lexicalized) {
      out += line("lexicalized");
    } else {
      std::string names;
      for (const auto& id : lex.offending) names += (names.empty() ? "" : ", ") + id;
      out += line("not lexicalized: " + names);
    }
    emit(o, out);
  }
  return ok ? 0 : 1;
}

int cmd_derive(const Options& o) {
  check_format(o, {"text", "json", "dot"});
  auto g = grammar_input(o);
  auto d = script_input(o);
  auto result = run_derivation(g, d);
  d.bind(g);
  if (o.format == "json")
    emit(o, Json{{"yield", result.yield}, {"derivation", to_json(d)}, {"derived", to_json(result.derived)}}.dump(2) + "\n");
  else if (o.format == "dot")
    emit(o, to_dot(d));
  else
    emit(o, line(result.yield));
  return 0;
}

int cmd_parse(const Options& o) {
  check_format(o, {"text", "json", "dot"});
  auto g = grammar_input(o);
  auto result = parse(g, split_words(o.sentence), o.cap);
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
  if (o.format == "json") {
    emit(o, to_json(result).dump(2) + "\n");
  } else if (o.format == "dot") {
    std::string out;
    for (std::size_t i = 0; i < result.derivations.size(); ++i)
      out += to_dot(result.derivations[i], "derivation" + std::to_string(i + 1));
    emit(o, out);
  } else {
    std::string out = line(result.recognized ? "recognized" : "not recognized");
    for (std::size_t i = 0; i < result.derivations.size(); ++i)
      out += line("# derivation " + std::to_string(i + 1)) + script_to_string(result.derivations[i]);
    emit(o, out);
    std::cerr << "chart entries " << result.stats.chart_size << ", derivable " << result.stats.item_count << ", "
              << result.stats.wall_ms << " ms\n";
  }
  return 0;
}

int cmd_enumerate(const Options& o) {
  check_format(o, {"text", "json"});
  auto g = grammar_input(o);
  auto language = enumerate_language(g, o.max_trees);
  if (o.format == "json") {
    emit(o, Json(language).dump(2) + "\n");
  } else {
    std::string out;
    for (const auto& s : language) out += line(s);
    emit(o, out);
  }
  return 0;
}

int cmd_dep(const Options& o) {
  check_format(o, {"text", "json", "dot"});
  auto g = grammar_input(o);
  auto d = script_input(o);
  auto result = run_derivation(g, d);
  d.bind(g);
  auto t = derivation_to_dependency(d);
  t.set_order(surface_order(t, result.derived));
  if (o.format == "json") emit(o, to_json(t).dump(2) + "\n");
  else if (o.format == "dot") emit(o, to_dot(t));
  else emit(o, line(dependency_to_string(t)));
  return 0;
}

int cmd_projective(const Options& o) {
  check_format(o, {"text", "json"});
  auto t = tree_input(o);
  if (!o.order.empty()) t.set_order(order_from_words(t, split_words(o.order)));
  auto report = is_projective(t);
  if (o.format == "json") {
    emit(o, to_json(report, t).dump(2) + "\n");
  } else {
    std::string out = line(report.projective ? "projective" : "non-projective");
    for (const auto& v : report.violations) out += line("  " + describe(t, v));
    emit(o, out);
  }
  return 0;
}

int cmd_linearize(const Options& o) {
  check_format(o, {"text", "json"});
  auto t = tree_input(o);
  auto rules = load_rules(need(o.rules, "--rules"));
  auto lin = linearize(t, rules);
  if (o.format == "json") {
    Json j{{"words", join_words(lin.words)}, {"trace", Json::array()}};
    for (const auto& s : lin.trace)
      j["trace"].push_back({{"node", t.node(s.node).lexeme}, {"rule", s.rule}, {"y1", join_words(s.pair.y1)}, {"y2", join_words(s.pair.y2)}});
    emit(o, j.dump(2) + "\n");
  } else {
    std::string out;
    if (o.trace)
      for (const auto& s : lin.trace) out += line(t.node(s.node).lexeme + " [" + s.rule + "] " + s.pair.str());
    out += line(join_words(lin.words));
    emit(o, out);
  }
  return 0;
}

int cmd_export(const Options& o) {
  check_format(o, {"text", "json", "dot"});
  int inputs = !o.grammar.empty() + !o.script.empty() + !o.tree.empty();
  if (!o.script.empty() && !o.grammar.empty()) inputs = 1;  // derivation bound to a grammar
  if (inputs != 1) throw CLI::ValidationError("export takes one of --grammar, --script (optionally with --grammar) or --tree");
  if (!o.tree.empty()) {
    auto t = tree_input(o);
    emit(o, o.format == "json" ? to_json(t).dump(2) + "\n" : o.format == "dot" ? to_dot(t) : line(dependency_to_string(t)));
  } else if (!o.script.empty()) {
    auto d = script_input(o);
    if (!o.grammar.empty()) d.bind(grammar_input(o));
    emit(o, o.format == "json" ? to_json(d).dump(2) + "\n" : o.format == "dot" ? to_dot(d) : script_to_string(d));
  } else {
    auto g = grammar_input(o);
    if (o.format == "dot") throw CLI::ValidationError("grammars have no dot rendering");
    emit(o, o.format == "json" ? to_json(g).dump(2) + "\n" : grammar_to_string(g));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tagforge: tree adjoining grammars, derivations and dependency linearization"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"text", "json", "dot"}));
    sub->add_option("-o,--out", o.out, "write output to a file");
  };
  auto grammar = [&](CLI::App* sub) { sub->add_option("-g,--grammar", o.grammar, "grammar file"); };
  auto script = [&](CLI::App* sub) { sub->add_option("-s,--script", o.script, "derivation script"); };
  auto tree = [&](CLI::App* sub) { sub->add_option("-t,--tree", o.tree, "dependency tree file"); };

  std::map<CLI::App*, int (*)(const Options&)> handlers;
  auto verb = [&](const char* name, const char* help, int (*fn)(const Options&)) {
    auto* sub = app.add_subcommand(name, help);
    common(sub);
    handlers[sub] = fn;
    return sub;
  };

  auto* validate = verb("validate", "check well-formedness and lexicalization", cmd_validate);
  grammar(validate);
  auto* derive = verb("derive", "run a derivation script", cmd_derive);
  grammar(derive);
  script(derive);
  auto* parse_cmd = verb("parse", "recognize a sentence and list derivations", cmd_parse);
  grammar(parse_cmd);
  parse_cmd->add_option("sentence", o.sentence, "space separated words")->required();
  parse_cmd->add_option("--cap", o.cap, "maximum number of derivations");
  auto* enumerate = verb("enumerate", "list the strings of derivations up to a size", cmd_enumerate);
  grammar(enumerate);
  enumerate->add_option("--max-trees", o.max_trees, "maximum elementary trees per derivation");
  auto* dep = verb("dep", "dependency tree of a derivation", cmd_dep);
  grammar(dep);
  script(dep);
  auto* projective = verb("projective", "check projectivity of an ordered dependency tree", cmd_projective);
  tree(projective);
  projective->add_option("--order", o.order, "surface word order");
  auto* linearize_cmd = verb("linearize", "order a dependency tree with syntagm rules", cmd_linearize);
  tree(linearize_cmd);
  linearize_cmd->add_option("-r,--rules", o.rules, "syntagm rule file");
  linearize_cmd->add_flag("--trace", o.trace, "print the segment pair of every node");
  auto* export_cmd = verb("export", "convert a grammar, script or tree", cmd_export);
  grammar(export_cmd);
  script(export_cmd);
  tree(export_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  try {
    for (auto& [sub, fn] : handlers)
      if (sub->parsed()) return fn(o);
  } catch (const CLI::Error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const TagError& e) {
    std::cerr << e.what() << "\n";
    return e.kind() == ErrorKind::syntax || e.kind() == ErrorKind::io ? 2 : 1;
  }
  return 2;
}
