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

DependencyTree ordered(const char* tree, const char* order) {
  auto t = parse_dependency(tree);
  t.set_order(order_from_words(t, split_words(order)));
  return t;
}

}  // namespace

TEST(Inversion, AdverbDerivationIsAlreadyADependencyTree) {
  auto g = load_grammar(corpus("english.tag"));
  auto d = load_script(corpus("fig7.drv"));
  d.bind(g);
  auto t = derivation_to_dependency(d);
  EXPECT_EQ(dependency_to_string(t), "dep likes { John:1 Lyn:2 really:ATTR }");
}

TEST(Inversion, ReversesClauseArcs) {
  auto g = load_grammar(corpus("dutch.tag"));
  auto d = load_script(corpus("fig13.drv"));
  d.bind(g);
  auto t = derivation_to_dependency(d);
  EXPECT_EQ(t.node(t.root()).lexeme, "omdat");
  // verbs nest omdat > zag > helpen > leren > zwemmen with one nominal each
  EXPECT_EQ(t.canonical(),
            parse_dependency("dep omdat { zag:S { Wim:1 helpen:S { Jan:1 leren:S { Marie:1 zwemmen:S { kinderen:1 { de:ATTR } } } } } }")
                .canonical());
}

TEST(Inversion, TwoHeadsAreReported) {
  auto g = load_grammar(corpus("german_mc.tag"));
  auto d = load_script(corpus("fig15.drv"));
  // marking daß as a clause arc too gives überführen two inverted heads
  auto text = script_to_string(d);
  auto pos = text.find("adjoin dass -> ueberfuehren @ 0 label ATTR");
  ASSERT_NE(pos, std::string::npos);
  text.replace(text.find("ATTR", pos), 4, "S");
  auto bad = parse_script(text);
  bad.bind(g);
  try {
    derivation_to_dependency(bad);
    FAIL();
  } catch (const TagError& e) {
    EXPECT_EQ(e.kind(), ErrorKind::inversion);
    EXPECT_NE(std::string(e.what()).find("dass -S-> ueberfuehren"), std::string::npos) << e.what();
  }
}

TEST(Projectivity, WhExtractionIsNonProjective) {
  auto t = load_dependency(corpus("fig8.dep"));
  t.set_order(order_from_words(t, split_words("who do you think that Mary claimed that Sarah liked")));
  auto r = is_projective(t);
  EXPECT_FALSE(r.projective);
  bool root_covered = false;
  for (const auto& v : r.violations) {
    EXPECT_EQ(t.node(v.head).lexeme, "liked");
    EXPECT_EQ(t.node(v.dependent).lexeme, "who");
    if (v.kind == ProjectivityViolation::Kind::covered_root) root_covered = true;
  }
  EXPECT_TRUE(root_covered);
}

TEST(Projectivity, CrossSerialIsNonProjective) {
  auto r = is_projective(load_dependency(corpus("fig12.dep")));
  EXPECT_FALSE(r.projective);
  EXPECT_FALSE(r.violations.empty());
}

TEST(Projectivity, SimpleClauseIsProjective) {
  EXPECT_TRUE(is_projective(load_dependency(corpus("fig7.dep"))).projective);
  EXPECT_TRUE(is_projective(ordered("dep likes { John:1 Lyn:2 really:ATTR }", "really Lyn John likes")).projective);
  EXPECT_FALSE(is_projective(ordered("dep likes { John:1 { big:ATTR } Lyn:2 }", "big likes John Lyn")).projective);
}

TEST(Projectivity, SurfaceOrderFromDerivedTree) {
  auto g = load_grammar(corpus("english_wh.tag"));
  auto d = load_script(corpus("fig10.drv"));
  d.bind(g);
  auto result = run_derivation(g, d);
  auto t = derivation_to_dependency(d);
  t.set_order(surface_order(t, result.derived));
  std::vector<std::string> words;
  for (auto i : *t.order()) words.push_back(t.node(i).lexeme);
  EXPECT_EQ(join_words(words), "Who you think Mary claimed Sarah liked");
  EXPECT_FALSE(is_projective(t).projective);
}

TEST(Projectivity, OrderErrors) {
  auto t = parse_dependency("dep a { b:1 c:2 }");
  EXPECT_EQ(kind_of([&] { is_projective(t); }), ErrorKind::incomplete_order);
  t.set_order({0, 1});
  EXPECT_EQ(kind_of([&] { is_projective(t); }), ErrorKind::incomplete_order);
  t.set_order({0, 1, 1});
  EXPECT_EQ(kind_of([&] { is_projective(t); }), ErrorKind::incomplete_order);
}

TEST(Projectivity, CovertNodesAreIgnored) {
  auto t = parse_dependency("dep verspricht { Detektiv:1 überführen:2 { (PRO):1 Verdächtigen:2 } }");
  t.set_order(order_from_words(t, split_words("Detektiv Verdächtigen überführen verspricht")));
  EXPECT_EQ(t.order()->size(), 4u);
  EXPECT_TRUE(is_projective(t).projective);
  auto bad = t;
  std::vector<std::size_t> with_pro{0, 1, 2, 3, 4};
  bad.set_order(with_pro);
  EXPECT_EQ(kind_of([&] { is_projective(bad); }), ErrorKind::incomplete_order);
}

TEST(Projectivity, MatchesSubtreeContiguityExhaustively) {
  auto tally = support::exhaustive_projectivity(6);
  EXPECT_EQ(tally.disagreements, 0u);
  EXPECT_GT(tally.cases, 10000u);
}

TEST(Projectivity, TreeShapeCountsMatchKnownSequence) {
  // unlabeled rooted trees: 1, 1, 2, 4, 9, 20, 48
  std::vector<std::size_t> want{1, 1, 2, 4, 9, 20, 48};
  for (std::size_t n = 1; n <= 7; ++n) EXPECT_EQ(support::rooted_tree_shapes(n).size(), want[n - 1]) << n;
}

TEST(DependencyText, RoundTripsAndChecksShape) {
  for (const char* name : {"fig8.dep", "fig12.dep", "fig18.dep", "fig7.dep"}) {
    auto t = load_dependency(corpus(name));
    EXPECT_EQ(dependency_to_string(parse_dependency(dependency_to_string(t))), dependency_to_string(t)) << name;
  }
  EXPECT_EQ(kind_of([] { parse_dependency("dep a { b:1 c:1 }"); }), ErrorKind::malformed_tree);
  EXPECT_EQ(kind_of([] { parse_dependency("dep a { b:x }"); }), ErrorKind::syntax);
}
