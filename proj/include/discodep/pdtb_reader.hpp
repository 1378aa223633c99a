#pragma once

// Reader for PDTB 3.0 pipe-delimited relation files: one relation per line,
// spans written as "start..end" (half-open character offsets) and joined
// with ';' when an argument is discontinuous.

#include <algorithm>
#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "discodep/error.hpp"
#include "discodep/model.hpp"
#include "discodep/text.hpp"

namespace discodep {

/// Field indices of the columns the converter needs. The defaults fit the
/// PDTB 3.0 distribution layout.
struct ColumnMap {
  std::size_t kind = 0;
  std::size_t conn_span = 1;
  std::size_t conn1 = 7;
  std::size_t sense1 = 8;
  std::size_t conn2 = 10;
  std::size_t sense2 = 11;
  std::size_t arg1 = 14;
  std::size_t arg2 = 20;

  std::array<std::size_t, 8> indices() const {
    return {kind, conn_span, conn1, sense1, conn2, sense2, arg1, arg2};
  }

  std::size_t max_index() const {
    auto idx = indices();
    return *std::max_element(idx.begin(), idx.end());
  }

  void check() const {
    auto idx = indices();
    std::sort(idx.begin(), idx.end());
    if (std::adjacent_find(idx.begin(), idx.end()) != idx.end())
      throw Error(ErrorCode::InvalidArgument, "column indices must be distinct");
  }

  /// Parses "kind,conn_span,conn1,sense1,conn2,sense2,arg1,arg2".
  static ColumnMap parse(std::string_view text_) {
    auto parts = text::split(text_, ',');
    if (parts.size() != 8)
      throw Error(ErrorCode::InvalidArgument,
                  "--columns expects 8 comma-separated indices, got '" + std::string(text_) + "'");
    std::array<std::size_t, 8> v{};
    for (std::size_t i = 0; i < 8; ++i) {
      auto n = text::parse_int<std::size_t>(text::trim(parts[i]));
      if (!n)
        throw Error(ErrorCode::InvalidArgument, "bad column index '" + std::string(parts[i]) + "'");
      v[i] = *n;
    }
    ColumnMap m{v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7]};
    m.check();
    return m;
  }

  bool operator==(const ColumnMap&) const = default;
};

namespace detail {

inline Span parse_span_token(std::string_view token, std::size_t line_no) {
  auto t = text::trim(token);
  auto dots = t.find("..");
  std::optional<std::size_t> a, b;
  if (dots != std::string_view::npos) {
    a = text::parse_int<std::size_t>(t.substr(0, dots));
    b = text::parse_int<std::size_t>(t.substr(dots + 2));
  }
  if (!a || !b)
    throw Error(ErrorCode::MalformedSpan, "span token '" + std::string(t) + "' is not start..end",
                line_no);
  if (*a >= *b)
    throw Error(ErrorCode::MalformedSpan, "span " + std::string(t) + " is empty or reversed", line_no);
  return Span{*a, *b};
}

inline std::vector<Span> parse_span_list(std::string_view field, std::size_t line_no) {
  std::vector<Span> out;
  if (text::trim(field).empty()) return out;
  for (auto token : text::split(field, ';')) out.push_back(parse_span_token(token, line_no));
  return out;
}

inline bool is_link_marker(std::string_view s) {
  if (s.size() < 5 || s.substr(0, 4) != "LINK") return false;
  return std::all_of(s.begin() + 4, s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

}  // namespace detail

/// Parses one relation record. Throws Error (ShortLine, UnknownKind,
/// MalformedSpan, MissingArgument) on malformed input.
inline PdtbRelation parse_relation_line(std::string_view line, const ColumnMap& map = {},
                                        std::size_t line_no = 0) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  auto fields = text::split(line, '|');
  if (fields.size() <= map.max_index())
    throw Error(ErrorCode::ShortLine,
                "record has " + std::to_string(fields.size()) + " fields, column map needs " +
                    std::to_string(map.max_index() + 1),
                line_no);

  PdtbRelation rel;
  rel.raw_line_no = line_no;
  auto kind_field = text::trim(fields[map.kind]);
  auto kind = parse_relation_kind(kind_field);
  if (!kind)
    throw Error(ErrorCode::UnknownKind, "unknown relation kind '" + std::string(kind_field) + "'",
                line_no);
  rel.kind = *kind;

  // Connective span: validated, not stored.
  (void)detail::parse_span_list(fields[map.conn_span], line_no);

  if (auto c = text::trim(fields[map.conn1]); !c.empty()) rel.connective = std::string(c);
  if (auto s = text::trim(fields[map.sense1]); !s.empty()) rel.senses.push_back(SenseTag::parse(s));
  if (auto s = text::trim(fields[map.sense2]); !s.empty()) rel.senses.push_back(SenseTag::parse(s));
  if (rel.senses.empty()) rel.senses.push_back(SenseTag{std::string(relation_kind_name(rel.kind)), {}, {}});

  rel.arg1_spans = detail::parse_span_list(fields[map.arg1], line_no);
  rel.arg2_spans = detail::parse_span_list(fields[map.arg2], line_no);
  if (rel.kind != RelationKind::NoRel && (rel.arg1_spans.empty() || rel.arg2_spans.empty()))
    throw Error(ErrorCode::MissingArgument,
                std::string(rel.arg1_spans.empty() ? "Arg1" : "Arg2") + " span list is empty",
                line_no);

  auto last = text::trim(fields.back());
  if (detail::is_link_marker(last)) rel.link_group = std::string(last);
  return rel;
}

struct RelationParseResult {
  std::vector<PdtbRelation> relations;
  std::vector<Diagnostic> diagnostics;
};

/// Parses a whole relation file held in memory. Blank lines are skipped. With
/// `strict` the first bad record throws; otherwise it becomes a diagnostic.
inline RelationParseResult parse_relation_text(std::string_view content, const ColumnMap& map = {},
                                               bool strict = false) {
  RelationParseResult out;
  auto all = text::lines(content);
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (text::trim(all[i]).empty()) continue;
    try {
      out.relations.push_back(parse_relation_line(all[i], map, i + 1));
    } catch (const Error& e) {
      if (strict) throw;
      out.diagnostics.push_back(
          Diagnostic{Severity::Error, std::string(error_code_name(e.code())), e.what(), i + 1, {}});
    }
  }
  return out;
}

inline RelationParseResult parse_relation_file(const std::string& path, const ColumnMap& map = {},
                                               bool strict = false) {
  return parse_relation_text(text::read_file(path), map, strict);
}

}  // namespace discodep
