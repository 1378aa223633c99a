#include <gtest/gtest.h>

#include <functional>
#include <map>

#include "test_support.hpp"

using namespace discodep;
using testing_support::data_path;
using testing_support::enumerate_trees;

namespace {

const char* kTwoLeaf =
    "( Root (span 1 2) ( Satellite (leaf 1) (rel2par condition) (text _!If it rains,!_) ) "
    "( Nucleus (leaf 2) (rel2par span) (text _!we stay in.!_) ) )";

struct Row {
  int dep, head;
  std::optional<int> dist;
  const char* relation;
  const char* cls;
};

const DependencyArc* arc_of(const DependencyGraph& g, int dep) {
  for (const auto& a : g.arcs)
    if (a.dependent == dep) return &a;
  return nullptr;
}

std::map<int, int> heads_of(const DependencyGraph& g) {
  std::map<int, int> out;
  for (const auto& a : g.arcs) out[a.dependent] = a.head;
  return out;
}

}  // namespace

TEST(ParseDis, TwoLeafTree) {
  auto t = parse_dis(kTwoLeaf, "x");
  EXPECT_EQ(t.doc_id, "x");
  EXPECT_EQ(t.leaf_count(), 2);
  ASSERT_EQ(t.root.children.size(), 2u);
  EXPECT_EQ(t.root.children[0].nuclearity, Nuclearity::Satellite);
  EXPECT_EQ(t.root.children[0].relation, "condition");
  EXPECT_EQ(t.root.children[0].node.text, "If it rains,");
  EXPECT_EQ(t.root.children[1].nuclearity, Nuclearity::Nucleus);
  EXPECT_EQ(t.root.children[1].relation, "span");
}

TEST(ParseDis, MultiNuclearList) {
  auto t = parse_dis(
      "( Root (span 1 3)\n"
      "  ( Nucleus (span 1 2) (rel2par List)\n"
      "    ( Nucleus (leaf 1) (rel2par List) (text _!a!_) )\n"
      "    ( Nucleus (leaf 2) (rel2par List) (text _!b!_) ) )\n"
      "  ( Satellite (leaf 3) (rel2par elaboration-additional) (text _!c!_) ) )");
  EXPECT_EQ(t.leaf_count(), 3);
  const auto& list = t.root.children[0].node;
  EXPECT_EQ(list.children[0].nuclearity, Nuclearity::Nucleus);
  EXPECT_EQ(list.children[1].nuclearity, Nuclearity::Nucleus);
}

TEST(ParseDis, Sample11Fixture) {
  auto t = testing_support::sample11_tree();
  EXPECT_EQ(t.leaf_count(), 11);
}

TEST(ParseDis, SingleLeafRoot) {
  auto t = parse_dis("( Root (leaf 1) (text _!Alone.!_) )");
  EXPECT_EQ(t.leaf_count(), 1);
  ASSERT_EQ(t.root.children.size(), 1u);
  EXPECT_EQ(t.root.children[0].nuclearity, Nuclearity::Nucleus);
}

TEST(ParseDis, EscapesAndParagraphMarks) {
  auto t = parse_dis(
      "( Root (span 1 2) ( Nucleus (leaf 1) (rel2par span) (text _!He said \\\"no\\\".<P>!_) ) "
      "( Satellite (leaf 2) (rel2par elaboration) (text plain words here) ) )");
  EXPECT_EQ(t.root.children[0].node.text, "He said \"no\".");
  EXPECT_EQ(t.root.children[1].node.text, "plain words here");
}

TEST(ParseDis, Errors) {
  auto expect_code = [](std::string_view src, ErrorCode code) {
    try {
      parse_dis(src);
      ADD_FAILURE() << src;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), code) << e.what();
    }
  };
  expect_code("( Root (span 1 2) ( Nucleus (leaf 1) (rel2par span) (text _!a!_) )", ErrorCode::UnbalancedParens);
  expect_code("( Root (span 1 2) ( Satellite (leaf 1) (rel2par a) (text _!a!_) ) "
              "( Satellite (leaf 2) (rel2par b) (text _!b!_) ) )",
              ErrorCode::MissingNuclearity);
  expect_code("( Root (span 1 3) ( Nucleus (leaf 1) (rel2par span) (text _!a!_) ) "
              "( Satellite (leaf 3) (rel2par b) (text _!b!_) ) )",
              ErrorCode::NonContiguousLeaves);
  expect_code("( Root (span 1 3) ( Nucleus (leaf 1) (rel2par span) (text _!a!_) ) "
              "( Satellite (leaf 2) (rel2par b) (text _!b!_) ) )",
              ErrorCode::NonContiguousLeaves);
  expect_code("( Root (span 1 2) ( Nucleus (leaf 1) (rel2par span) (text _!a!_) ) "
              "( Satellite (leaf 2) (rel2par b) (text _!b!_) ) ) )",
              ErrorCode::UnbalancedParens);
}

TEST(ToDis, RoundTripsEnumeratedTrees) {
  for (int n = 1; n <= 4; ++n)
    for (const auto& t : enumerate_trees(n, false)) {
      auto back = parse_dis(to_dis(t), t.doc_id);
      ASSERT_EQ(back, t) << to_dis(t);
    }
}

TEST(ToDis, RoundTripsAwkwardText) {
  RstTree t{"t", make_internal({nucleus(make_leaf(1, "back\\slash and !_ marker")),
                                satellite(make_leaf(2, "(parens) _!quoted!_"), "elaboration")})};
  EXPECT_EQ(parse_dis(to_dis(t), "t"), t);
  auto fig = testing_support::sample11_tree();
  EXPECT_EQ(parse_dis(to_dis(fig), "sample11"), fig);
}

TEST(EduInventory, PartitionsConcatenatedText) {
  auto t = parse_dis(kTwoLeaf);
  auto doc = edu_inventory_of(t, "If it rains, we stay in.");
  ASSERT_EQ(doc.edus.size(), 2u);
  EXPECT_EQ(doc.edus[0].span, (Span{0, 12}));
  EXPECT_EQ(doc.edus[1].span, (Span{13, 24}));
}

TEST(EduInventory, WhitespaceInsensitiveAndEscaped) {
  auto t = parse_dis(
      "( Root (span 1 2) ( Nucleus (leaf 1) (rel2par span) (text _!He said \\\"no\\\"!_) ) "
      "( Satellite (leaf 2) (rel2par elaboration) (text _!and   left.!_) ) )");
  auto doc = edu_inventory_of(t, "He said\n\"no\" and left.");
  EXPECT_EQ(doc.edus[0].span, (Span{0, 12}));
  EXPECT_EQ(doc.edus[1].span, (Span{13, 22}));
}

TEST(EduInventory, Sample11FixtureText) {
  auto doc = edu_inventory_of(testing_support::sample11_tree(),
                              text::read_file(data_path("sample11/sample11.txt")));
  EXPECT_EQ(doc.unit_count(), 11);
  EXPECT_NO_THROW(check_edu_inventory(doc.edus));
}

TEST(EduInventory, MissingFragment) {
  auto t = parse_dis(kTwoLeaf);
  try {
    edu_inventory_of(t, "If it rains, we go out.");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::FragmentNotFound);
  }
  EXPECT_THROW(edu_inventory_of(t, "we stay in. If it rains,"), Error);
}

TEST(LabelMap, LookupIgnoresCaseAndSuffixes) {
  auto m = parse_label_map("# comment\nelaboration-additional\tELABORATION\nresult\tCAUSE\n");
  EXPECT_EQ(relation_class(m, "Elaboration-Additional"), "ELABORATION");
  EXPECT_EQ(relation_class(m, "result-e"), "CAUSE");
  EXPECT_EQ(relation_class(m, "Result"), "CAUSE");
  EXPECT_FALSE(relation_class(m, "contrast"));
  EXPECT_THROW(parse_label_map("just-one-column\n"), Error);
}

TEST(TreeHeads, Examples) {
  auto t = parse_dis(kTwoLeaf);
  EXPECT_EQ(tree_heads(t).front(), 2);
  RstTree multi{"m", make_internal({nucleus(make_leaf(1)),
                                    nucleus(make_internal({nucleus(make_leaf(2), "list"),
                                                           nucleus(make_leaf(3), "list")}),
                                            "span")})};
  EXPECT_EQ(tree_heads(multi), (std::vector<UnitIndex>{1, 1, 2, 2, 3}));
  EXPECT_EQ(tree_heads(testing_support::sample11_tree()).front(), 3);
}

TEST(HiraoConvert, TwoLeaf) {
  auto g = hirao_convert(parse_dis(kTwoLeaf));
  EXPECT_EQ(g.flavor, GraphFlavor::RootedTree);
  ASSERT_EQ(g.arcs.size(), 2u);
  EXPECT_EQ(g.arcs[0], make_arc(1, 2, SenseTag{"condition", {}, {}}));
  EXPECT_EQ(g.arcs[1], make_arc(2, 0, root_sense()));
}

TEST(HiraoConvert, ThreeLeafNestedNucleus) {
  RstTree t{"t", make_internal({nucleus(make_internal({nucleus(make_leaf(1)),
                                                       satellite(make_leaf(2), "elaboration")})),
                                satellite(make_leaf(3), "result")})};
  auto h = heads_of(hirao_convert(t));
  EXPECT_EQ(h, (std::map<int, int>{{1, 0}, {2, 1}, {3, 1}}));
}

TEST(HiraoConvert, Sample11ReferenceRows) {
  auto labels = parse_label_map(text::read_file(data_path("sample11/labels.tsv")));
  auto g = apply_label_map(hirao_convert(testing_support::sample11_tree()), labels);
  std::vector<Row> rows{{1, 3, 2, "preparation", "ELABORATION"}, {2, 3, 1, "circumstance", "BACKGROUND"},
                        {3, 0, std::nullopt, "ROOT", "NONE"},    {4, 3, 1, "background", "BACKGROUND"},
                        {5, 4, 1, "result", "CAUSE"},            {6, 3, 3, "background", "BACKGROUND"},
                        {7, 3, 4, "background", "BACKGROUND"},   {8, 3, 5, "background", "BACKGROUND"},
                        {9, 3, 6, "background", "BACKGROUND"},   {10, 3, 7, "background", "BACKGROUND"},
                        {11, 10, 1, "concession", "CONTRAST"}};
  ASSERT_EQ(g.arcs.size(), 11u);
  for (const auto& r : rows) {
    auto* a = arc_of(g, r.dep);
    ASSERT_TRUE(a) << r.dep;
    EXPECT_EQ(a->head, r.head) << r.dep;
    EXPECT_EQ(a->distance, r.dist) << r.dep;
    EXPECT_EQ(a->sense.level1, r.relation) << r.dep;
    EXPECT_EQ(a->sense.level2, r.cls) << r.dep;
  }
  EXPECT_TRUE(validate_graph(g).empty());
}

TEST(LiConvert, SingleLeaf) {
  auto g = li_convert(parse_dis("( Root (leaf 1) (text _!x!_) )"));
  ASSERT_EQ(g.arcs.size(), 1u);
  EXPECT_TRUE(g.arcs[0].is_root());
  EXPECT_EQ(g.arcs[0].dependent, 1);
}

TEST(LiConvert, ThreeNucleusList) {
  RstTree t{"l", make_internal({nucleus(make_leaf(1), "list"), nucleus(make_leaf(2), "list"),
                                nucleus(make_leaf(3), "list")})};
  EXPECT_EQ(heads_of(hirao_convert(t)), (std::map<int, int>{{1, 0}, {2, 1}, {3, 1}}));
  EXPECT_EQ(heads_of(li_convert(t)), (std::map<int, int>{{1, 0}, {2, 1}, {3, 2}}));
}

TEST(LiConvert, DistinguishingFixture) {
  auto t = read_dis_file(data_path("rst/distinguish.dis"), "d");
  auto h = hirao_convert(t), l = li_convert(t);
  EXPECT_NE(h.arcs, l.arcs);
  EXPECT_EQ(heads_of(h), (std::map<int, int>{{1, 0}, {2, 1}, {3, 1}, {4, 3}}));
  EXPECT_EQ(heads_of(l), (std::map<int, int>{{1, 0}, {2, 3}, {3, 1}, {4, 3}}));
  EXPECT_TRUE(validate_graph(l).empty());
}

TEST(LiConvert, Sample11MatchesHirao) {
  auto t = testing_support::sample11_tree();
  EXPECT_EQ(li_convert(t), hirao_convert(t));
}

TEST(Binarize, KeepsLeavesAndNuclei) {
  for (int n = 1; n <= 5; ++n)
    for (const auto& t : enumerate_trees(n, false)) {
      auto b = binarize_right_heavy(t);
      EXPECT_NO_THROW(check_rst_tree(b));
      EXPECT_EQ(b.leaf_count(), n);
      std::function<void(const RstNode&)> binary = [&](const RstNode& node) {
        if (node.is_leaf()) return;
        EXPECT_LE(node.children.size(), 2u);
        for (const auto& c : node.children) binary(c.node);
      };
      binary(b.root);
      EXPECT_EQ(tree_heads(b).front(), tree_heads(t).front());
    }
}

TEST(RstProperty, BinaryTreesAgreeExhaustively) {
  for (int n = 1; n <= 5; ++n)
    for (const auto& t : enumerate_trees(n, true)) {
      EXPECT_EQ(binarize_right_heavy(t), t);
      ASSERT_EQ(hirao_convert(t), li_convert(t)) << to_dis(t);
    }
}

TEST(RstProperty, OutputIsValidRootedTree) {
  for (int n = 1; n <= 5; ++n)
    for (const auto& t : enumerate_trees(n, false)) {
      for (const auto& g : {hirao_convert(t), li_convert(t)}) {
        ASSERT_EQ(g.arcs.size(), static_cast<std::size_t>(n));
        ASSERT_TRUE(validate_graph(g).empty()) << to_dis(t);
        auto root = std::find_if(g.arcs.begin(), g.arcs.end(), [](const auto& a) { return a.is_root(); });
        ASSERT_EQ(root->dependent, tree_heads(t).front());
      }
    }
}

// Brute force: every arc's head must head some ancestor subtree of the
// dependent's leaf.
TEST(RstProperty, PercolationSoundness) {
  auto ancestor_heads = [](const RstTree& t) {
    std::map<int, std::set<int>> out;
    std::vector<int> stack;
    std::function<void(const RstNode&)> walk = [&](const RstNode& n) {
      if (n.is_leaf()) {
        out[n.leaf] = {stack.begin(), stack.end()};
        return;
      }
      stack.push_back(node_head(n));
      for (const auto& c : n.children) walk(c.node);
      stack.pop_back();
    };
    walk(t.root);
    return out;
  };
  std::size_t checked = 0;
  for (int n = 1; n <= 6; ++n)
    for (const auto& t : enumerate_trees(n, false)) {
      auto hirao_anc = ancestor_heads(t);
      for (const auto& a : hirao_convert(t).arcs)
        ASSERT_TRUE(a.is_root() || hirao_anc[a.dependent].count(a.head)) << to_dis(t);
      auto bin = binarize_right_heavy(t);
      auto li_anc = ancestor_heads(bin);
      for (const auto& a : li_convert(t).arcs)
        ASSERT_TRUE(a.is_root() || li_anc[a.dependent].count(a.head)) << to_dis(t);
      ++checked;
    }
  EXPECT_GT(checked, 1000u);
}
