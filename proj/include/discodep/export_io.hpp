#pragma once

// Dependency graph and metrics serialization.
//
//   conll  unit<TAB>head<TAB>level1<TAB>level2<TAB>level3<TAB>distance
//   csv    dependent,head,distance,sense1,class,type
//   json   {"doc_id", "unit_count", "flavor", "arcs": [...]}
//
// csv and conll start with "# doc_id: ...", "# unit_count: ..." and
// "# flavor: ..." lines. Readers fall back to the largest unit id and to
// RootedTree iff a head-0 arc exists when those lines are missing.

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "discodep/error.hpp"
#include "discodep/metrics.hpp"
#include "discodep/model.hpp"
#include "discodep/text.hpp"

namespace discodep {

enum class DepFormat { Conll, Csv, Json };

inline std::optional<DepFormat> parse_dep_format(std::string_view s) {
  if (text::iequals(s, "conll")) return DepFormat::Conll;
  if (text::iequals(s, "csv")) return DepFormat::Csv;
  if (text::iequals(s, "json")) return DepFormat::Json;
  return std::nullopt;
}

inline std::string_view dep_format_extension(DepFormat f) {
  switch (f) {
    case DepFormat::Conll: return "conll";
    case DepFormat::Csv: return "csv";
    case DepFormat::Json: return "json";
  }
  return "";
}

inline constexpr std::string_view kDepCsvHeader = "dependent,head,distance,sense1,class,type";
inline constexpr std::string_view kMetricsCsvHeader = "doc_id,n_units,n_arcs,mdd,sd";
inline constexpr std::string_view kCorrelationCsvHeader = "pairs,r,t,df";

namespace detail {

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// Splits one CSV record. Returns the fields and, for errors, the 1-based
// column where parsing stopped.
inline std::vector<std::string> split_csv(std::string_view line, std::size_t line_no) {
  std::vector<std::string> out;
  std::string cur;
  std::size_t i = 0;
  bool quoted_field = false;
  while (true) {
    if (i < line.size() && line[i] == '"' && cur.empty() && !quoted_field) {
      quoted_field = true;
      ++i;
      while (true) {
        if (i >= line.size())
          throw Error(ErrorCode::FormatError, "unterminated quoted field", line_no, i + 1);
        if (line[i] == '"') {
          if (i + 1 < line.size() && line[i + 1] == '"') {
            cur += '"';
            i += 2;
            continue;
          }
          ++i;
          break;
        }
        cur += line[i++];
      }
      if (i < line.size() && line[i] != ',')
        throw Error(ErrorCode::FormatError, "text after closing quote", line_no, i + 1);
    }
    if (i >= line.size()) {
      out.push_back(std::move(cur));
      return out;
    }
    if (line[i] == ',') {
      out.push_back(std::move(cur));
      cur.clear();
      quoted_field = false;
      ++i;
      continue;
    }
    cur += line[i++];
  }
}

struct DepMeta {
  std::optional<std::string> doc_id;
  std::optional<int> unit_count;
  std::optional<GraphFlavor> flavor;
};

inline std::string meta_lines(const DependencyGraph& g) {
  return "# doc_id: " + g.doc_id + "\n# unit_count: " + std::to_string(g.unit_count) +
         "\n# flavor: " + std::string(flavor_name(g.flavor)) + "\n";
}

// Returns true when `line` is a comment; metadata keys are recorded.
inline bool read_meta_line(std::string_view line, std::size_t line_no, DepMeta& meta) {
  if (line.empty() || line.front() != '#') return false;
  auto body = text::trim(line.substr(1));
  auto colon = body.find(':');
  if (colon == std::string_view::npos) return true;
  auto key = text::trim(body.substr(0, colon));
  auto value = text::trim(body.substr(colon + 1));
  if (key == "doc_id") {
    meta.doc_id = std::string(value);
  } else if (key == "unit_count") {
    auto n = text::parse_int<int>(value);
    if (!n || *n < 0) throw Error(ErrorCode::FormatError, "bad unit_count", line_no, 1);
    meta.unit_count = *n;
  } else if (key == "flavor") {
    auto f = parse_flavor(value);
    if (!f) throw Error(ErrorCode::FormatError, "unknown flavor '" + std::string(value) + "'", line_no, 1);
    meta.flavor = *f;
  }
  return true;
}

inline DependencyGraph finish_graph(std::vector<DependencyArc> arcs, const DepMeta& meta,
                                    std::string_view default_doc_id) {
  DependencyGraph g;
  g.doc_id = meta.doc_id ? *meta.doc_id : std::string(default_doc_id);
  int max_unit = 0;
  bool rooted = false;
  for (const auto& a : arcs) {
    max_unit = std::max({max_unit, a.dependent, a.head});
    rooted |= a.is_root();
  }
  g.unit_count = meta.unit_count ? *meta.unit_count : max_unit;
  g.flavor = meta.flavor ? *meta.flavor : (rooted ? GraphFlavor::RootedTree : GraphFlavor::LocalForest);
  g.arcs = std::move(arcs);
  return g;
}

inline std::string opt_field(const std::optional<std::string>& s) { return s ? *s : std::string(); }

inline std::string conll_field(std::string_view s) { return s.empty() ? "_" : std::string(s); }

inline std::string write_conll(const DependencyGraph& g) {
  std::string out = meta_lines(g);
  auto line = [&](const DependencyArc& a) {
    out += std::to_string(a.dependent) + "\t" + std::to_string(a.head) + "\t" +
           conll_field(a.sense.level1) + "\t" + conll_field(a.sense.level2) + "\t" +
           conll_field(opt_field(a.sense.level3)) + "\t" +
           (a.distance ? std::to_string(*a.distance) : "_") + "\n";
  };
  for (int u = 1; u <= g.unit_count; ++u) {
    bool any = false;
    for (const auto& a : g.arcs)
      if (a.dependent == u) {
        line(a);
        any = true;
      }
    if (!any) out += std::to_string(u) + "\t_\t_\t_\t_\t_\n";
  }
  for (const auto& a : g.arcs)
    if (a.dependent < 1 || a.dependent > g.unit_count) line(a);
  return out;
}

inline std::string write_csv(const DependencyGraph& g) {
  std::string out = meta_lines(g);
  out += kDepCsvHeader;
  out += "\n";
  for (const auto& a : g.arcs)
    out += std::to_string(a.dependent) + "," + std::to_string(a.head) + "," +
           (a.distance ? std::to_string(*a.distance) : "") + "," + csv_field(a.sense.level1) + "," +
           csv_field(a.sense.level2) + "," + csv_field(opt_field(a.sense.level3)) + "\n";
  return out;
}

inline std::string write_json(const DependencyGraph& g) {
  nlohmann::ordered_json j;
  j["doc_id"] = g.doc_id;
  j["unit_count"] = g.unit_count;
  j["flavor"] = flavor_name(g.flavor);
  j["arcs"] = nlohmann::ordered_json::array();
  for (const auto& a : g.arcs) {
    nlohmann::ordered_json arc;
    arc["dependent"] = a.dependent;
    arc["head"] = a.head;
    arc["distance"] = a.distance ? nlohmann::ordered_json(*a.distance) : nullptr;
    arc["sense1"] = a.sense.level1;
    arc["class"] = a.sense.level2;
    arc["type"] = a.sense.level3 ? nlohmann::ordered_json(*a.sense.level3) : nullptr;
    j["arcs"].push_back(std::move(arc));
  }
  return j.dump(2) + "\n";
}

inline int parse_unit(std::string_view s, std::size_t line_no, std::size_t col, const char* what) {
  auto v = text::parse_int<int>(text::trim(s));
  if (!v || *v < 0)
    throw Error(ErrorCode::FormatError, std::string("bad ") + what + " '" + std::string(s) + "'",
                line_no, col);
  return *v;
}

inline std::optional<int> parse_distance(std::string_view s, std::string_view absent,
                                         std::size_t line_no, std::size_t col) {
  if (s == absent) return std::nullopt;
  return parse_unit(s, line_no, col, "distance");
}

inline DependencyGraph read_csv(std::string_view content, std::string_view default_doc_id) {
  DepMeta meta;
  std::vector<DependencyArc> arcs;
  bool header = false;
  auto all = text::lines(content);
  for (std::size_t i = 0; i < all.size(); ++i) {
    auto line = all[i];
    auto no = i + 1;
    if (!header) {
      if (text::trim(line).empty() || read_meta_line(line, no, meta)) continue;
      if (line != kDepCsvHeader)
        throw Error(ErrorCode::FormatError, "expected header '" + std::string(kDepCsvHeader) + "'", no, 1);
      header = true;
      continue;
    }
    if (line.empty()) continue;
    auto f = split_csv(line, no);
    if (f.size() != 6)
      throw Error(ErrorCode::FormatError,
                  "row has " + std::to_string(f.size()) + " fields, expected 6", no, line.size() + 1);
    DependencyArc a;
    a.dependent = parse_unit(f[0], no, 1, "dependent");
    a.head = parse_unit(f[1], no, 2, "head");
    a.distance = parse_distance(f[2], "", no, 3);
    a.sense.level1 = f[3];
    a.sense.level2 = f[4];
    if (!f[5].empty()) a.sense.level3 = f[5];
    arcs.push_back(std::move(a));
  }
  return finish_graph(std::move(arcs), meta, default_doc_id);
}

inline DependencyGraph read_conll(std::string_view content, std::string_view default_doc_id) {
  DepMeta meta;
  std::vector<DependencyArc> arcs;
  auto all = text::lines(content);
  auto field = [](std::string_view s) { return s == "_" ? std::string() : std::string(s); };
  int max_unit = 0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    auto line = all[i];
    auto no = i + 1;
    if (text::trim(line).empty() || read_meta_line(line, no, meta)) continue;
    auto f = text::split(line, '\t');
    if (f.size() != 6)
      throw Error(ErrorCode::FormatError,
                  "line has " + std::to_string(f.size()) + " columns, expected 6", no, line.size() + 1);
    auto unit = parse_unit(f[0], no, 1, "unit id");
    max_unit = std::max(max_unit, unit);
    if (f[1] == "_") continue;
    DependencyArc a;
    a.dependent = unit;
    a.head = parse_unit(f[1], no, 2, "head");
    a.sense.level1 = field(f[2]);
    a.sense.level2 = field(f[3]);
    if (f[4] != "_") a.sense.level3 = std::string(f[4]);
    a.distance = parse_distance(f[5], "_", no, 6);
    arcs.push_back(std::move(a));
  }
  if (!meta.unit_count) meta.unit_count = max_unit;
  return finish_graph(std::move(arcs), meta, default_doc_id);
}

inline std::pair<std::size_t, std::size_t> line_col_of(std::string_view s, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < s.size(); ++i) {
    if (s[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

inline DependencyGraph read_json(std::string_view content, std::string_view default_doc_id) {
  if (text::trim(content).empty()) return finish_graph({}, {}, default_doc_id);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(content);
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, col] = line_col_of(content, e.byte > 0 ? e.byte - 1 : 0);
    throw Error(ErrorCode::FormatError, "invalid json", line, col);
  }
  auto fail = [](const std::string& why) { return Error(ErrorCode::FormatError, "json: " + why); };
  if (!j.is_object()) throw fail("top level must be an object");
  DepMeta meta;
  try {
    if (j.contains("doc_id")) meta.doc_id = j.at("doc_id").get<std::string>();
    if (j.contains("unit_count")) meta.unit_count = j.at("unit_count").get<int>();
    if (j.contains("flavor")) {
      auto f = parse_flavor(j.at("flavor").get<std::string>());
      if (!f) throw fail("unknown flavor");
      meta.flavor = *f;
    }
    std::vector<DependencyArc> arcs;
    if (j.contains("arcs")) {
      if (!j.at("arcs").is_array()) throw fail("arcs must be an array");
      for (const auto& ja : j.at("arcs")) {
        DependencyArc a;
        a.dependent = ja.at("dependent").get<int>();
        a.head = ja.at("head").get<int>();
        if (ja.contains("distance") && !ja.at("distance").is_null())
          a.distance = ja.at("distance").get<int>();
        if (ja.contains("sense1")) a.sense.level1 = ja.at("sense1").get<std::string>();
        if (ja.contains("class")) a.sense.level2 = ja.at("class").get<std::string>();
        if (ja.contains("type") && !ja.at("type").is_null())
          a.sense.level3 = ja.at("type").get<std::string>();
        arcs.push_back(std::move(a));
      }
    }
    return finish_graph(std::move(arcs), meta, default_doc_id);
  } catch (const nlohmann::json::exception& e) {
    throw fail(e.what());
  }
}

}  // namespace detail

inline std::string write_dep(const DependencyGraph& g, DepFormat format) {
  switch (format) {
    case DepFormat::Conll: return detail::write_conll(g);
    case DepFormat::Csv: return detail::write_csv(g);
    case DepFormat::Json: return detail::write_json(g);
  }
  return {};
}

/// Inverse of write_dep. Empty input gives an empty graph named
/// `default_doc_id`. Throws FormatError with line and column.
inline DependencyGraph read_dep(std::string_view content, DepFormat format,
                                std::string_view default_doc_id = {}) {
  switch (format) {
    case DepFormat::Conll: return detail::read_conll(content, default_doc_id);
    case DepFormat::Csv: return detail::read_csv(content, default_doc_id);
    case DepFormat::Json: return detail::read_json(content, default_doc_id);
  }
  return {};
}

// ---------------------------------------------------------------------------
// Metrics and correlation files

inline std::string write_metrics(std::span<const MetricsRecord> records) {
  std::vector<const MetricsRecord*> sorted;
  for (const auto& r : records) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](auto* a, auto* b) { return a->doc_id < b->doc_id; });
  auto real = [](const std::optional<double>& v) { return v ? text::format_real(*v) : std::string(); };
  std::string out(kMetricsCsvHeader);
  out += "\n";
  for (auto* r : sorted)
    out += detail::csv_field(r->doc_id) + "," + std::to_string(r->unit_count) + "," +
           std::to_string(r->arc_count) + "," + real(r->mdd) + "," + real(r->sd) + "\n";
  return out;
}

inline std::vector<MetricsRecord> read_metrics(std::string_view content) {
  std::vector<MetricsRecord> out;
  auto all = text::lines(content);
  bool header = false;
  for (std::size_t i = 0; i < all.size(); ++i) {
    auto line = all[i];
    auto no = i + 1;
    if (text::trim(line).empty()) continue;
    if (!header) {
      if (line != kMetricsCsvHeader)
        throw Error(ErrorCode::FormatError, "expected header '" + std::string(kMetricsCsvHeader) + "'", no, 1);
      header = true;
      continue;
    }
    auto f = detail::split_csv(line, no);
    if (f.size() != 5)
      throw Error(ErrorCode::FormatError,
                  "row has " + std::to_string(f.size()) + " fields, expected 5", no, line.size() + 1);
    MetricsRecord r;
    r.doc_id = f[0];
    r.unit_count = detail::parse_unit(f[1], no, 2, "n_units");
    r.arc_count = detail::parse_unit(f[2], no, 3, "n_arcs");
    for (std::size_t k : {3u, 4u}) {
      if (f[k].empty()) continue;
      auto v = text::parse_real(f[k]);
      if (!v) throw Error(ErrorCode::FormatError, "bad number '" + f[k] + "'", no, k + 1);
      (k == 3 ? r.mdd : r.sd) = *v;
    }
    out.push_back(std::move(r));
  }
  return out;
}

inline std::string write_correlation(const CorrelationResult& c) {
  return std::string(kCorrelationCsvHeader) + "\n" + std::to_string(c.pairs) + "," +
         text::format_real(c.r) + "," + text::format_real(c.t) + "," + std::to_string(c.df) + "\n";
}

}  // namespace discodep
