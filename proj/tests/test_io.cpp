#include <gtest/gtest.h>

#include "support.hpp"

using namespace tagforge;
using support::corpus;

TEST(Json, GrammarRoundTrip) {
  for (const char* name : {"english.tag", "english_wh.tag", "dutch.tag", "german_mc.tag"}) {
    auto g = load_grammar(corpus(name));
    auto j = to_json(g);
    auto back = grammar_from_json(Json::parse(j.dump()));
    EXPECT_EQ(grammar_to_string(back), grammar_to_string(g)) << name;
    EXPECT_EQ(to_json(back), j);
  }
}

TEST(Json, DerivationRoundTrip) {
  for (const char* name : {"fig7.drv", "fig10.drv", "fig13.drv", "fig15.drv"}) {
    auto d = load_script(corpus(name));
    auto back = derivation_from_json(Json::parse(to_json(d).dump()));
    EXPECT_EQ(script_to_string(back), script_to_string(d)) << name;
  }
}

TEST(Json, DependencyRoundTrip) {
  for (const char* name : {"fig7.dep", "fig8.dep", "fig12.dep", "fig18.dep"}) {
    auto t = load_dependency(corpus(name));
    auto back = dependency_from_json(Json::parse(to_json(t).dump()));
    EXPECT_EQ(dependency_to_string(back), dependency_to_string(t)) << name;
  }
  auto covert = parse_dependency("dep v { (PRO):1 x:2 }");
  EXPECT_EQ(dependency_to_string(dependency_from_json(to_json(covert))), "dep v { (PRO):1 x:2 }");
}

TEST(Json, DerivedTreeRoundTrip) {
  auto g = load_grammar(corpus("english.tag"));
  auto r = run_derivation(g, load_script(corpus("fig7.drv")));
  auto back = phrase_tree_from_json(to_json(r.derived));
  EXPECT_EQ(tree_to_string(back.root()), tree_to_string(r.derived.root()));
  EXPECT_EQ(back.provenance(), r.derived.provenance());
  EXPECT_EQ(to_json(back), to_json(r.derived));
}

TEST(Json, MalformedInputIsASyntaxError) {
  try {
    derivation_from_json(Json::parse(R"({"root": "a", "steps": [{"op": "glue"}]})"));
    FAIL();
  } catch (const TagError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::syntax);
  }
}

TEST(Dot, DerivationArcsCarryLabels) {
  auto g = load_grammar(corpus("english.tag"));
  auto d = load_script(corpus("fig7.drv"));
  d.bind(g);
  auto dot = to_dot(d);
  EXPECT_NE(dot.find("\"α1\" -> \"α2\" [label=\"1\"]"), std::string::npos) << dot;
  EXPECT_NE(dot.find("\"α1\" -> \"α3\" [label=\"2\"]"), std::string::npos) << dot;
  EXPECT_NE(dot.find("\"α1\" -> \"β1\" [label=\"ATTR\"]"), std::string::npos) << dot;
  EXPECT_NE(dot.find("likes (α1)"), std::string::npos) << dot;
}

TEST(Dot, ClauseArcsAndTrees) {
  auto d = load_script(corpus("fig10.drv"));
  EXPECT_NE(to_dot(d).find("[label=\"S\"]"), std::string::npos);
  auto g = load_grammar(corpus("english.tag"));
  auto dot = to_dot(run_derivation(g, load_script(corpus("fig7.drv"))).derived);
  EXPECT_EQ(dot.rfind("digraph", 0), 0u);
  EXPECT_NE(dot.find("\"really\""), std::string::npos);
}
