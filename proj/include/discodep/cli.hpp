#pragma once

// Batch commands behind the discodep executable. Each returns the process
// exit code: 0 success, 1 data diagnostics in strict mode. IO and usage
// problems throw discodep::Error; the executable maps those to 2.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "discodep/edu_align.hpp"
#include "discodep/error.hpp"
#include "discodep/export_io.hpp"
#include "discodep/metrics.hpp"
#include "discodep/model.hpp"
#include "discodep/parallel.hpp"
#include "discodep/pdtb2dep.hpp"
#include "discodep/pdtb_reader.hpp"
#include "discodep/rst2dep.hpp"
#include "discodep/rst_reader.hpp"
#include "discodep/text.hpp"

namespace discodep::cli {

namespace fs = std::filesystem;

enum class LogLevel { Off, Error, Warning, Info };

/// DISCODEP_LOG=off|error|warning|info; warning when unset or unknown.
inline LogLevel log_level_from_env() {
  const char* v = std::getenv("DISCODEP_LOG");
  if (!v) return LogLevel::Warning;
  if (text::iequals(v, "off")) return LogLevel::Off;
  if (text::iequals(v, "error")) return LogLevel::Error;
  if (text::iequals(v, "info")) return LogLevel::Info;
  return LogLevel::Warning;
}

inline bool should_log(LogLevel level, Severity s) {
  switch (s) {
    case Severity::Error: return level >= LogLevel::Error;
    case Severity::Warning: return level >= LogLevel::Warning;
    case Severity::Info: return level >= LogLevel::Info;
  }
  return false;
}

struct Context {
  std::ostream* out = nullptr;  // used when no output file is given
  std::ostream* err = nullptr;
  LogLevel log = LogLevel::Warning;
};

struct DocDiagnostic {
  std::string doc_id;
  Diagnostic diag;
};

/// Regular files under `path` ending in one of `exts` (sorted), or `path`
/// itself when it is a file.
inline std::vector<fs::path> list_inputs(const fs::path& path, const std::vector<std::string>& exts) {
  std::error_code ec;
  if (fs::is_regular_file(path, ec)) return {path};
  if (!fs::is_directory(path, ec))
    throw Error(ErrorCode::Io, "input '" + path.string() + "' does not exist");
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(path)) {
    if (!e.is_regular_file()) continue;
    auto ext = e.path().extension().string();
    for (const auto& want : exts)
      if (ext == want) out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (!fs::is_directory(dir))
    throw Error(ErrorCode::Io, "cannot create directory '" + dir.string() + "'");
}

inline void emit(const Context& ctx, const std::optional<std::string>& path, const std::string& content) {
  if (path)
    text::write_file(*path, content);
  else if (ctx.out)
    *ctx.out << content;
}

inline std::string render_diagnostics(const std::vector<DocDiagnostic>& diags) {
  std::string out;
  for (const auto& d : diags) out += d.doc_id + ": " + d.diag.str() + "\n";
  return out;
}

inline void log_diagnostics(const Context& ctx, const std::vector<DocDiagnostic>& diags) {
  if (!ctx.err) return;
  for (const auto& d : diags)
    if (should_log(ctx.log, d.diag.severity)) *ctx.err << d.doc_id << ": " << d.diag.str() << "\n";
}

inline bool has_problems(const std::vector<DocDiagnostic>& diags) {
  return std::any_of(diags.begin(), diags.end(),
                     [](const auto& d) { return d.diag.severity != Severity::Info; });
}

struct ConvertedDoc {
  std::string doc_id;
  std::optional<std::string> content;
  std::vector<Diagnostic> diagnostics;
};

inline int write_conversions(const Context& ctx, const std::vector<ConvertedDoc>& docs,
                             const fs::path& out_dir, DepFormat format, bool strict) {
  ensure_dir(out_dir);
  std::vector<DocDiagnostic> all;
  for (const auto& d : docs) {
    if (d.content)
      text::write_file((out_dir / (d.doc_id + "." + std::string(dep_format_extension(format)))).string(),
                       *d.content);
    for (const auto& diag : d.diagnostics) all.push_back({d.doc_id, diag});
  }
  text::write_file((out_dir / "diagnostics.txt").string(), render_diagnostics(all));
  log_diagnostics(ctx, all);
  return strict && has_problems(all) ? 1 : 0;
}

inline Diagnostic error_diagnostic(const Error& e) {
  return Diagnostic{Severity::Error, std::string(error_code_name(e.code())), e.what(), e.line(), {}};
}

// ---------------------------------------------------------------------------

struct ConvertPdtbOptions {
  std::string input;
  std::string edus;
  std::string out;
  DepFormat format = DepFormat::Csv;
  double theta = kDefaultTheta;
  ColumnMap columns;
  std::optional<std::string> head_rules;
  bool strict = false;
  std::size_t workers = 1;
};

inline int convert_pdtb_cmd(const ConvertPdtbOptions& o, const Context& ctx) {
  detail::check_theta(o.theta);
  o.columns.check();
  auto seg = read_segmentation(o.edus);
  PdtbConversionOptions conv;
  conv.theta = o.theta;
  if (o.head_rules) conv.rules = HeadRules::parse(text::read_file(*o.head_rules));
  auto files = list_inputs(o.input, {".pdtb"});
  auto contents = parallel_map(files, 1, [](const fs::path& p) { return text::read_file(p.string()); });

  std::vector<std::size_t> idx(files.size());
  std::iota(idx.begin(), idx.end(), 0);
  auto docs = parallel_map(idx, o.workers, [&](std::size_t i) {
    ConvertedDoc d;
    d.doc_id = files[i].stem().string();
    auto parsed = parse_relation_text(contents[i], o.columns, false);
    d.diagnostics = std::move(parsed.diagnostics);
    auto it = seg.find(d.doc_id);
    if (it == seg.end()) {
      d.diagnostics.push_back(Diagnostic{Severity::Error, "missing-segmentation",
                                         "no EDU segmentation for document; skipped", {}, {}});
      return d;
    }
    Document doc{d.doc_id, {}, it->second};
    try {
      auto result = convert_pdtb(doc, parsed.relations, conv);
      for (auto& diag : result.diagnostics) d.diagnostics.push_back(std::move(diag));
      for (auto& diag : validate_graph(result.graph)) d.diagnostics.push_back(std::move(diag));
      d.content = write_dep(result.graph, o.format);
    } catch (const Error& e) {
      d.diagnostics.push_back(error_diagnostic(e));
    }
    return d;
  });
  return write_conversions(ctx, docs, o.out, o.format, o.strict);
}

// ---------------------------------------------------------------------------

enum class RstAlgo { Hirao, Li };

inline std::optional<RstAlgo> parse_rst_algo(std::string_view s) {
  if (text::iequals(s, "hirao")) return RstAlgo::Hirao;
  if (text::iequals(s, "li")) return RstAlgo::Li;
  return std::nullopt;
}

struct ConvertRstOptions {
  std::string input;
  std::string out;
  RstAlgo algo = RstAlgo::Hirao;
  DepFormat format = DepFormat::Csv;
  std::optional<std::string> labels;
  bool strict = false;
  std::size_t workers = 1;
};

inline int convert_rst_cmd(const ConvertRstOptions& o, const Context& ctx) {
  std::optional<LabelMap> labels;
  if (o.labels) labels = parse_label_map(text::read_file(*o.labels));
  auto files = list_inputs(o.input, {".dis"});
  auto contents = parallel_map(files, 1, [](const fs::path& p) { return text::read_file(p.string()); });

  std::vector<std::size_t> idx(files.size());
  std::iota(idx.begin(), idx.end(), 0);
  auto docs = parallel_map(idx, o.workers, [&](std::size_t i) {
    ConvertedDoc d;
    d.doc_id = files[i].stem().string();
    try {
      auto tree = parse_dis(contents[i], d.doc_id);
      auto g = o.algo == RstAlgo::Hirao ? hirao_convert(tree) : li_convert(tree);
      if (labels) g = apply_label_map(std::move(g), *labels);
      d.diagnostics = validate_graph(g);
      d.content = write_dep(g, o.format);
    } catch (const Error& e) {
      d.diagnostics.push_back(error_diagnostic(e));
    }
    return d;
  });
  return write_conversions(ctx, docs, o.out, o.format, o.strict);
}

// ---------------------------------------------------------------------------

inline std::optional<DepFormat> format_from_extension(const fs::path& p) {
  auto ext = p.extension().string();
  if (ext.empty()) return std::nullopt;
  return parse_dep_format(ext.substr(1));
}

inline std::vector<fs::path> list_dep_inputs(const std::vector<std::string>& inputs,
                                             std::optional<DepFormat> format) {
  std::vector<std::string> exts;
  if (format)
    exts = {"." + std::string(dep_format_extension(*format))};
  else
    exts = {".conll", ".csv", ".json"};
  std::vector<fs::path> out;
  for (const auto& in : inputs)
    for (auto& p : list_inputs(in, exts)) out.push_back(std::move(p));
  return out;
}

inline DependencyGraph load_dep(const fs::path& p, std::optional<DepFormat> format) {
  auto f = format ? format : format_from_extension(p);
  if (!f)
    throw Error(ErrorCode::InvalidArgument,
                "cannot infer format of '" + p.string() + "'; pass --format");
  auto content = text::read_file(p.string());
  try {
    return read_dep(content, *f, p.stem().string());
  } catch (const Error& e) {
    throw Error(e.code(), p.string() + ": " + e.what());
  }
}

struct MetricsOptions {
  std::vector<std::string> inputs;
  std::optional<DepFormat> format;
  MetricsMode mode = MetricsMode::Local;
  std::optional<std::string> out;
  std::size_t workers = 1;
};

inline int metrics_cmd(const MetricsOptions& o, const Context& ctx) {
  auto files = list_dep_inputs(o.inputs, o.format);
  auto records = parallel_map(files, o.workers, [&](const fs::path& p) {
    return compute_metrics(load_dep(p, o.format), o.mode);
  });
  emit(ctx, o.out, write_metrics(records));
  return 0;
}

// ---------------------------------------------------------------------------

struct CorrelateOptions {
  std::string left;
  std::string right;
  std::string key = "doc_id";
  MetricField field = MetricField::Mdd;
  std::optional<std::string> out;
  std::size_t workers = 1;
};

struct PairedSeries {
  std::vector<std::string> doc_ids;
  std::vector<double> xs, ys;
  std::vector<DocDiagnostic> notes;
};

/// Inner join on doc_id in doc_id order. Unmatched ids and pairs with an
/// undefined value are reported in `notes`.
inline PairedSeries pair_records(std::span<const MetricsRecord> left,
                                 std::span<const MetricsRecord> right, MetricField field) {
  std::map<std::string, std::optional<double>> l, r;
  for (const auto& rec : left) l[rec.doc_id] = field_of(rec, field);
  for (const auto& rec : right) r[rec.doc_id] = field_of(rec, field);
  PairedSeries p;
  for (const auto& [id, v] : l) {
    auto it = r.find(id);
    if (it == r.end()) {
      p.notes.push_back({id, {Severity::Info, "unmatched", "only in left input", {}, {}}});
      continue;
    }
    if (!v || !it->second) {
      p.notes.push_back({id, {Severity::Info, "undefined-value", "value undefined; pair skipped", {}, {}}});
      continue;
    }
    p.doc_ids.push_back(id);
    p.xs.push_back(*v);
    p.ys.push_back(*it->second);
  }
  for (const auto& [id, v] : r)
    if (!l.count(id)) p.notes.push_back({id, {Severity::Info, "unmatched", "only in right input", {}, {}}});
  return p;
}

inline int correlate_cmd(const CorrelateOptions& o, const Context& ctx) {
  if (o.key != "doc_id")
    throw Error(ErrorCode::InvalidArgument, "only --key doc_id is supported");
  auto left = read_metrics(text::read_file(o.left));
  auto right = read_metrics(text::read_file(o.right));
  auto p = pair_records(left, right, o.field);
  log_diagnostics(ctx, p.notes);
  if (p.xs.empty()) throw Error(ErrorCode::TooFewPairs, "no paired documents");
  emit(ctx, o.out, write_correlation(pearson(p.xs, p.ys)));
  return 0;
}

// ---------------------------------------------------------------------------

struct ValidateOptions {
  std::vector<std::string> inputs;
  std::optional<DepFormat> format;
  std::optional<std::string> out;
  std::size_t workers = 1;
};

/// Returns 1 when any graph has problems.
inline int validate_cmd(const ValidateOptions& o, const Context& ctx) {
  auto files = list_dep_inputs(o.inputs, o.format);
  auto per_file = parallel_map(files, o.workers, [&](const fs::path& p) {
    auto g = load_dep(p, o.format);
    std::vector<DocDiagnostic> out;
    for (auto& d : validate_graph(g)) out.push_back({g.doc_id, std::move(d)});
    return out;
  });
  std::vector<DocDiagnostic> all;
  for (auto& v : per_file)
    for (auto& d : v) all.push_back(std::move(d));
  emit(ctx, o.out, render_diagnostics(all));
  return all.empty() ? 0 : 1;
}

// ---------------------------------------------------------------------------

struct SplitOptions {
  std::string input;
  std::string out;
  std::size_t train = 0;
  std::size_t dev = 0;
  std::size_t test = 0;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
};

/// Document ids of a directory (file stems) or of a list file (one per line).
inline std::vector<std::string> collect_ids(const fs::path& input) {
  std::set<std::string> ids;
  std::error_code ec;
  if (fs::is_directory(input, ec)) {
    for (const auto& e : fs::directory_iterator(input))
      if (e.is_regular_file() && e.path().filename().string().front() != '.')
        ids.insert(e.path().stem().string());
  } else {
    auto content = text::read_file(input.string());
    for (auto line : text::lines(content)) {
      auto id = text::trim(line);
      if (!id.empty() && id.front() != '#') ids.insert(std::string(id));
    }
  }
  return {ids.begin(), ids.end()};
}

/// Fisher-Yates over the sorted ids with mt19937_64 draws reduced modulo the
/// range, so the permutation is identical on every standard library.
inline std::vector<std::string> seeded_shuffle(std::vector<std::string> ids, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  for (std::size_t i = ids.size(); i > 1; --i) {
    auto j = static_cast<std::size_t>(rng() % i);
    std::swap(ids[i - 1], ids[j]);
  }
  return ids;
}

inline int split_cmd(const SplitOptions& o, const Context&) {
  auto ids = collect_ids(o.input);
  if (o.train + o.dev + o.test != ids.size())
    throw Error(ErrorCode::InvalidArgument,
                "split sizes " + std::to_string(o.train) + "+" + std::to_string(o.dev) + "+" +
                    std::to_string(o.test) + " do not match " + std::to_string(ids.size()) +
                    " documents");
  auto shuffled = seeded_shuffle(std::move(ids), o.seed);
  ensure_dir(o.out);
  std::size_t at = 0;
  for (auto [name, size] : {std::pair{"train", o.train}, {"dev", o.dev}, {"test", o.test}}) {
    std::vector<std::string> part(shuffled.begin() + static_cast<std::ptrdiff_t>(at),
                                  shuffled.begin() + static_cast<std::ptrdiff_t>(at + size));
    at += size;
    std::sort(part.begin(), part.end());
    std::string content = "# " + std::string(name) + ": seeded stand-in split (seed " +
                          std::to_string(o.seed) + "), not an official partition\n";
    for (const auto& id : part) content += id + "\n";
    text::write_file((fs::path(o.out) / (std::string(name) + ".txt")).string(), content);
  }
  return 0;
}

}  // namespace discodep::cli
