#include <gtest/gtest.h>

#include "support.hpp"

using namespace tagforge;
using support::corpus;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const TagError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no TagError thrown";
  return ErrorKind::syntax;
}

const Grammar& english() {
  static const Grammar g = load_grammar(corpus("english.tag"));
  return g;
}

NodeAddress at(const char* s) { return NodeAddress::parse(s); }

}  // namespace

TEST(Substitute, FillsArgumentSlots) {
  const auto& g = english();
  auto t = PhraseTree::from_elementary(g.tree("α1"));
  t = substitute(t, at("1"), g.tree("α2"));
  t = substitute(t, at("2.2"), g.tree("α3"));
  EXPECT_EQ(t.yield(), "John likes Lyn");
  EXPECT_TRUE(t.complete());
  EXPECT_EQ(t.size(), 8u);  // 6 + (2 - 1) + (2 - 1)
}

TEST(Substitute, Errors) {
  const auto& g = english();
  auto t = PhraseTree::from_elementary(g.tree("α1"));
  EXPECT_EQ(kind_of([&] { substitute(t, at("2"), g.tree("α2")); }), ErrorKind::illegal_site);
  EXPECT_EQ(kind_of([&] { substitute(t, at("7"), g.tree("α2")); }), ErrorKind::illegal_site);
  EXPECT_EQ(kind_of([&] { substitute(t, at("1"), g.tree("β1")); }), ErrorKind::wrong_shape);
  auto vp = make_tree("vp", TreeShape::initial, "(VP \"sleeps\"@)");
  EXPECT_EQ(kind_of([&] { substitute(t, at("1"), vp); }), ErrorKind::label_mismatch);
}

TEST(Adjoin, InsertsAdverbAndKeepsExcisedSubtreeAtFoot) {
  const auto& g = english();
  auto t = PhraseTree::from_elementary(g.tree("α1"));
  t = substitute(t, at("1"), g.tree("α2"));
  t = substitute(t, at("2.2"), g.tree("α3"));
  auto before = t.size();
  t = adjoin(t, at("2"), g.tree("β1"));
  EXPECT_EQ(t.yield(), "John really likes Lyn");
  EXPECT_EQ(t.size(), before + count_nodes(g.tree("β1").root) - 1);
  EXPECT_TRUE(node_at(t.root(), at("2.2")).adjoined);
  EXPECT_FALSE(node_at(t.root(), at("2")).adjoined);
  EXPECT_EQ(tree_to_string(t.root()), "(S (NP \"John\"@) (VP \"really\"@ (VP (V \"likes\"@) (NP \"Lyn\"@))))");
}

TEST(Adjoin, RepeatedAdjunctionStacks) {
  const auto& g = english();
  auto t = PhraseTree::from_elementary(g.tree("α1"));
  t = adjoin(t, at("2"), g.tree("β1"));
  t = adjoin(t, at("2"), g.tree("β1"));
  EXPECT_EQ(join_words(t.words()), "really really likes");
}

TEST(Adjoin, Errors) {
  const auto& g = english();
  auto t = PhraseTree::from_elementary(g.tree("α1"));
  EXPECT_EQ(kind_of([&] { adjoin(t, at("1"), g.tree("β1")); }), ErrorKind::illegal_site);
  EXPECT_EQ(kind_of([&] { adjoin(t, at("0"), g.tree("β1")); }), ErrorKind::label_mismatch);
  EXPECT_EQ(kind_of([&] { adjoin(t, at("2"), g.tree("α2")); }), ErrorKind::wrong_shape);
}

TEST(AdjoinSet, ArityAndDistinctSites) {
  auto g = load_grammar(corpus("german_mc.tag"));
  const auto& set = g.tree_set("versprechen");
  auto t = PhraseTree::from_elementary(g.tree("ueberfuehren"));
  EXPECT_EQ(kind_of([&] { adjoin_set(t, {at("2")}, set); }), ErrorKind::set_arity);
  EXPECT_EQ(kind_of([&] { adjoin_set(t, {at("2"), at("2")}, set); }), ErrorKind::illegal_site);
  auto done = adjoin_set(t, {at("2"), at("2.2")}, set);
  EXPECT_EQ(join_words(done.words()), "zu überführen verspricht");
  std::size_t members = 0;
  for (const auto& m : set.members) members += count_nodes(m.root) - 1;
  EXPECT_EQ(done.size(), t.size() + members);
}

TEST(RunDerivation, ReproducesTheCorpusSentences) {
  struct Case {
    const char *grammar, *script, *yield;
  };
  for (auto c : {Case{"english.tag", "fig7.drv", "John really likes Lyn"},
                 Case{"english_wh.tag", "fig10.drv", "Who do you think that Mary claimed that Sarah liked"},
                 Case{"dutch.tag", "fig13.drv", "omdat Wim Jan Marie de kinderen zag helpen leren zwemmen"},
                 Case{"german_mc.tag", "fig15.drv",
                      "daß des Verbrechens der Detektiv den Verdächtigen niemandem zu überführen verspricht"}}) {
    auto g = load_grammar(corpus(c.grammar));
    EXPECT_EQ(run_derivation(g, load_script(corpus(c.script))).yield, c.yield) << c.script;
  }
}

TEST(RunDerivation, StepOrderDoesNotMatter) {
  const auto& g = english();
  auto a = parse_script("use α1; subst α2 -> α1 @ 1 label 1; subst α3 -> α1 @ 2.2 label 2; adjoin β1 -> α1 @ 2 label ATTR;");
  auto b = parse_script("use α1; adjoin β1 -> α1 @ 2 label ATTR; subst α3 -> α1 @ 2.2 label 2; subst α2 -> α1 @ 1 label 1;");
  EXPECT_EQ(run_derivation(g, a).yield, run_derivation(g, b).yield);
  EXPECT_TRUE(same_derivation(a, b));
}

TEST(RunDerivation, ProvenanceRecordsOccurrences) {
  const auto& g = english();
  auto r = run_derivation(g, load_script(corpus("fig7.drv")));
  auto prov = r.derived.provenance();
  EXPECT_EQ(prov.at(at("0")).tree, "α1");
  EXPECT_EQ(prov.at(at("2")).tree, "β1");
  EXPECT_EQ(prov.at(at("2.2")).tree, "α1");
  EXPECT_EQ(prov.at(at("2.2")).address.str(), "2");
}

TEST(RunDerivation, Errors) {
  const auto& g = english();
  EXPECT_EQ(kind_of([&] { run_derivation(g, parse_script("use α1; subst α2 -> α1 @ 1 label 1;")); }),
            ErrorKind::incomplete_derivation);
  EXPECT_EQ(kind_of([&] { run_derivation(g, parse_script("use β1;")); }), ErrorKind::wrong_shape);
  EXPECT_EQ(kind_of([&] {
              run_derivation(g, parse_script("use α1; subst α2 -> α1 @ 1 label 1; subst α3 -> α1 @ 1 label 1;"));
            }),
            ErrorKind::illegal_site);
  EXPECT_EQ(kind_of([&] { run_derivation(g, parse_script("use α1; subst zz -> α1 @ 1 label 1;")); }), ErrorKind::unknown_id);
  EXPECT_EQ(kind_of([&] {
              run_derivation(g, parse_script("use α1; subst α2 -> α1 @ 1 label 1; subst α1 -> α2 @ 1 label 1;"));
            }),
            ErrorKind::malformed_tree);
}

TEST(RunDerivation, ErrorsNameTheStep) {
  try {
    run_derivation(english(), parse_script("use α1; subst α2 -> α1 @ 2 label 1;"));
    FAIL();
  } catch (const TagError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::illegal_site);
    EXPECT_NE(std::string(e.what()).find("step 1"), std::string::npos) << e.what();
  }
}

TEST(RunDerivation, RepeatedTreesUseIndexedNames) {
  auto script = parse_script(
      "use α1; subst α2 -> α1 @ 1 label 1; subst α2[2] -> α1 @ 2.2 label 2; adjoin β1 -> α1 @ 2 label ATTR; "
      "adjoin β1[2] -> β1 @ 0 label ATTR;");
  EXPECT_EQ(run_derivation(english(), script).yield, "John really really likes John");
  EXPECT_EQ(elementary_of("β1[2]"), "β1");
  EXPECT_EQ(elementary_of("x[]"), "x[]");
  EXPECT_EQ(elementary_of("a[b]"), "a[b]");
}

TEST(Script, RoundTrips) {
  for (const char* name : {"fig7.drv", "fig10.drv", "fig13.drv", "fig15.drv"}) {
    auto d = load_script(corpus(name));
    auto again = parse_script(script_to_string(d));
    EXPECT_EQ(script_to_string(again), script_to_string(d)) << name;
  }
}

TEST(Script, LabelIsRequired) {
  EXPECT_EQ(kind_of([] { parse_script("use α1; subst α2 -> α1 @ 1;"); }), ErrorKind::syntax);
}

TEST(SpliceLaws, HoldOnRandomSteps) {
  auto tally = support::splice_laws(2000, 99);
  EXPECT_EQ(tally.violations, 0u);
  EXPECT_GT(tally.substitutions, 0u);
  EXPECT_GT(tally.adjunctions, 0u);
}
