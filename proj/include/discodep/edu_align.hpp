#pragma once

// Maps PDTB argument spans onto a document's EDU inventory, and reads/writes
// segmentation files (`doc_id<TAB>edu_index<TAB>start<TAB>end`).

#include <algorithm>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "discodep/error.hpp"
#include "discodep/model.hpp"
#include "discodep/text.hpp"

namespace discodep {

inline constexpr double kDefaultTheta = 0.5;

namespace detail {

inline std::vector<Span> merge_spans(std::span<const Span> spans) {
  std::vector<Span> sorted(spans.begin(), spans.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<Span> merged;
  for (const auto& s : sorted) {
    if (!merged.empty() && s.start <= merged.back().end)
      merged.back().end = std::max(merged.back().end, s.end);
    else
      merged.push_back(s);
  }
  return merged;
}

inline std::size_t union_overlap(const std::vector<Span>& merged, const Span& edu) {
  std::size_t total = 0;
  for (const auto& s : merged) total += s.overlap(edu);
  return total;
}

inline void check_theta(double theta) {
  if (!(theta > 0.0 && theta <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "overlap threshold must lie in (0, 1]");
}

}  // namespace detail

/// EDUs whose overlap with the union of `spans` covers at least `theta` of
/// the EDU's own length (and at least one character). Ascending order.
inline std::vector<UnitIndex> map_span_set(std::span<const Span> spans, const Document& doc,
                                           double theta = kDefaultTheta) {
  detail::check_theta(theta);
  auto merged = detail::merge_spans(spans);
  std::vector<UnitIndex> out;
  for (const auto& edu : doc.edus) {
    auto ov = detail::union_overlap(merged, edu.span);
    if (ov > 0 && static_cast<double>(ov) >= theta * static_cast<double>(edu.span.length()))
      out.push_back(edu.index);
  }
  return out;
}

/// Single EDU with the largest absolute overlap (ties: earlier EDU). When
/// nothing overlaps, the EDU closest to the spans is used instead. Empty only
/// for an empty inventory.
inline std::optional<UnitIndex> best_overlap_unit(std::span<const Span> spans, const Document& doc) {
  auto merged = detail::merge_spans(spans);
  std::optional<UnitIndex> best;
  std::size_t best_overlap = 0;
  for (const auto& edu : doc.edus) {
    auto ov = detail::union_overlap(merged, edu.span);
    if (ov > best_overlap) {
      best_overlap = ov;
      best = edu.index;
    }
  }
  if (best || merged.empty()) return best;

  std::size_t best_gap = 0;
  for (const auto& edu : doc.edus) {
    std::size_t gap = std::numeric_limits<std::size_t>::max();
    for (const auto& s : merged) {
      auto g = s.end <= edu.span.start ? edu.span.start - s.end : s.start - edu.span.end;
      gap = std::min(gap, g);
    }
    if (!best || gap < best_gap) {
      best_gap = gap;
      best = edu.index;
    }
  }
  return best;
}

struct Alignment {
  std::vector<UnitIndex> units;
  bool fallback = false;
};

/// map_span_set, falling back to best_overlap_unit when the threshold
/// selects nothing. Throws EmptyAlignment only for an empty inventory.
inline Alignment align_argument(std::span<const Span> spans, const Document& doc,
                                double theta = kDefaultTheta) {
  Alignment a{map_span_set(spans, doc, theta), false};
  if (!a.units.empty()) return a;
  auto best = best_overlap_unit(spans, doc);
  if (!best)
    throw Error(ErrorCode::EmptyAlignment,
                "document '" + doc.doc_id + "' has no EDUs to align an argument to");
  a.units = {*best};
  a.fallback = true;
  return a;
}

// ---------------------------------------------------------------------------
// Segmentation files

using Segmentation = std::map<std::string, std::vector<Edu>>;

inline Segmentation parse_segmentation(std::string_view content) {
  Segmentation seg;
  auto all = text::lines(content);
  for (std::size_t i = 0; i < all.size(); ++i) {
    auto line = all[i];
    if (text::trim(line).empty() || line.front() == '#') continue;
    auto f = text::split(line, '\t');
    auto bad = [&](const std::string& why, std::size_t col) {
      return Error(ErrorCode::FormatError, "segmentation: " + why, i + 1, col);
    };
    if (f.size() != 4) throw bad("expected 4 tab-separated fields", 1);
    auto idx = text::parse_int<int>(text::trim(f[1]));
    auto start = text::parse_int<std::size_t>(text::trim(f[2]));
    auto end = text::parse_int<std::size_t>(text::trim(f[3]));
    if (!idx) throw bad("bad EDU index", 2);
    if (!start) throw bad("bad start offset", 3);
    if (!end) throw bad("bad end offset", 4);
    auto& edus = seg[std::string(text::trim(f[0]))];
    if (*idx != static_cast<int>(edus.size()) + 1)
      throw bad("EDU indices must be contiguous from 1 per document", 2);
    if (*start >= *end) throw bad("empty EDU span", 3);
    if (!edus.empty() && edus.back().span.end > *start) throw bad("EDU spans overlap or go backwards", 3);
    edus.push_back(Edu{*idx, Span{*start, *end}});
  }
  return seg;
}

inline Segmentation read_segmentation(const std::string& path) {
  return parse_segmentation(text::read_file(path));
}

inline std::string write_segmentation(const Segmentation& seg) {
  std::string out;
  for (const auto& [doc_id, edus] : seg)
    for (const auto& e : edus)
      out += doc_id + "\t" + std::to_string(e.index) + "\t" + std::to_string(e.span.start) + "\t" +
             std::to_string(e.span.end) + "\n";
  return out;
}

}  // namespace discodep
