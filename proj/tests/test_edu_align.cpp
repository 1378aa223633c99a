#include <gtest/gtest.h>

#include <random>

#include "test_support.hpp"

using namespace discodep;

namespace {

Document hundred_char_edus(int n) {
  Document d{"d", {}, {}};
  for (int i = 0; i < n; ++i)
    d.edus.push_back(Edu{i + 1, Span{static_cast<std::size_t>(i) * 100, static_cast<std::size_t>(i + 1) * 100}});
  return d;
}

std::vector<UnitIndex> map1(Span s, const Document& d, double theta = kDefaultTheta) {
  std::vector<Span> v{s};
  return map_span_set(v, d, theta);
}

}  // namespace

TEST(MapSpanSet, ExactEduSpan) {
  auto doc = testing_support::wsj_document();
  EXPECT_EQ(map1(doc.edus[1].span, doc), (std::vector<UnitIndex>{2}));
}

TEST(MapSpanSet, CoversSeveralEdus) {
  auto doc = testing_support::wsj_document();
  EXPECT_EQ(map1(Span{1279, 1414}, doc), (std::vector<UnitIndex>{15, 16, 17}));
}

TEST(MapSpanSet, TenPercentOverlapIsRejected) {
  auto doc = hundred_char_edus(5);
  EXPECT_TRUE(map1(Span{390, 400}, doc).empty());
  auto a = align_argument(std::vector<Span>{Span{390, 400}}, doc);
  EXPECT_TRUE(a.fallback);
  EXPECT_EQ(a.units, (std::vector<UnitIndex>{4}));
}

TEST(MapSpanSet, ThetaBounds) {
  auto doc = hundred_char_edus(3);
  EXPECT_EQ(map1(Span{50, 300}, doc, 1.0), (std::vector<UnitIndex>{2, 3}));
  EXPECT_EQ(map1(Span{99, 201}, doc, 1e-9), (std::vector<UnitIndex>{1, 2, 3}));
  EXPECT_THROW(map1(Span{0, 1}, doc, 0.0), Error);
  EXPECT_THROW(map1(Span{0, 1}, doc, 1.5), Error);
}

TEST(MapSpanSet, UnionOfDiscontinuousSpans) {
  auto doc = hundred_char_edus(3);
  std::vector<Span> parts{{100, 130}, {130, 160}};
  EXPECT_EQ(map_span_set(parts, doc), (std::vector<UnitIndex>{2}));
  std::vector<Span> overlapping{{100, 140}, {120, 150}};
  EXPECT_EQ(map_span_set(overlapping, doc), (std::vector<UnitIndex>{2}));
}

TEST(MapSpanSet, MonotoneUnderEnlargement) {
  std::mt19937_64 rng(11);
  auto doc = hundred_char_edus(8);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Span> spans;
    for (int k = 0; k < 3; ++k) {
      auto a = rng() % 790;
      spans.push_back(Span{a, a + 1 + rng() % 60});
    }
    auto before = map_span_set(spans, doc);
    auto a = rng() % 790;
    spans.push_back(Span{a, a + 1 + rng() % 120});
    auto after = map_span_set(spans, doc);
    EXPECT_TRUE(std::includes(after.begin(), after.end(), before.begin(), before.end()));
  }
}

TEST(BestOverlapUnit, TiesGoToEarlierEdu) {
  auto doc = hundred_char_edus(3);
  EXPECT_EQ(best_overlap_unit(std::vector<Span>{Span{180, 220}}, doc), 2);
}

TEST(BestOverlapUnit, NearestWhenNothingOverlaps) {
  Document doc{"d", {}, {{1, {0, 10}}, {2, {20, 30}}, {3, {50, 60}}}};
  EXPECT_EQ(best_overlap_unit(std::vector<Span>{Span{33, 36}}, doc), 2);
  EXPECT_EQ(best_overlap_unit(std::vector<Span>{Span{45, 48}}, doc), 3);
  EXPECT_EQ(best_overlap_unit(std::vector<Span>{Span{70, 80}}, doc), 3);
  Document empty{"e", {}, {}};
  EXPECT_FALSE(best_overlap_unit(std::vector<Span>{Span{0, 1}}, empty));
  EXPECT_THROW(align_argument(std::vector<Span>{Span{0, 1}}, empty), Error);
}

TEST(Segmentation, ParseAndWrite) {
  auto seg = parse_segmentation("# comment\nd1\t1\t0\t5\nd1\t2\t6\t9\n\nd2\t1\t0\t3\n");
  ASSERT_EQ(seg.size(), 2u);
  EXPECT_EQ(seg["d1"].size(), 2u);
  EXPECT_EQ(seg["d1"][1].span, (Span{6, 9}));
  EXPECT_EQ(write_segmentation(seg), "d1\t1\t0\t5\nd1\t2\t6\t9\nd2\t1\t0\t3\n");
}

TEST(Segmentation, Errors) {
  auto expect_col = [](std::string_view content, std::size_t line, std::size_t col) {
    try {
      parse_segmentation(content);
      ADD_FAILURE() << content;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::FormatError);
      EXPECT_EQ(e.line(), line);
      EXPECT_EQ(e.column(), col);
    }
  };
  expect_col("d\t1\t0\n", 1, 1);
  expect_col("d\t1\t0\t5\nd\t3\t6\t9\n", 2, 2);
  expect_col("d\t1\tx\t5\n", 1, 3);
  expect_col("d\t1\t5\t5\n", 1, 3);
  expect_col("d\t1\t0\t5\nd\t2\t4\t9\n", 2, 3);
}

TEST(Segmentation, WsjFixtureIsConsistent) {
  auto doc = testing_support::wsj_document();
  EXPECT_EQ(doc.unit_count(), 17);
  EXPECT_NO_THROW(check_edu_inventory(doc.edus, doc.doc_id));
  EXPECT_LE(doc.edus.back().span.end, doc.text.size());
}
