#pragma once

// Dependency-distance statistics and Pearson correlation. Undefined values
// are std::nullopt, never zero.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "discodep/error.hpp"
#include "discodep/model.hpp"
#include "discodep/text.hpp"

namespace discodep {

/// Distances of the non-ROOT arcs, in arc order.
inline std::vector<int> distances(const DependencyGraph& g) {
  std::vector<int> out;
  for (const auto& a : g.arcs)
    if (!a.is_root()) out.push_back(a.distance.value_or(std::abs(a.dependent - a.head)));
  return out;
}

inline double sum_of(const std::vector<int>& d) {
  double s = 0;
  for (int x : d) s += x;
  return s;
}

/// Sum of distances over n - 1.
inline std::optional<double> mdd_rooted(const DependencyGraph& g) {
  if (g.unit_count < 2) return std::nullopt;
  return sum_of(distances(g)) / (g.unit_count - 1);
}

/// Sum of distances over the number of non-ROOT arcs.
inline std::optional<double> mdd_local(const DependencyGraph& g) {
  auto d = distances(g);
  if (d.empty()) return std::nullopt;
  return sum_of(d) / static_cast<double>(d.size());
}

/// Sample standard deviation (k - 1 denominator) of the distances.
inline std::optional<double> sd_distances(const DependencyGraph& g) {
  auto d = distances(g);
  if (d.size() < 2) return std::nullopt;
  double mean = sum_of(d) / static_cast<double>(d.size());
  double ss = 0;
  for (int x : d) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(d.size() - 1));
}

enum class MetricsMode { Local, Rooted };

inline std::optional<MetricsMode> parse_metrics_mode(std::string_view s) {
  if (text::iequals(s, "local")) return MetricsMode::Local;
  if (text::iequals(s, "rooted")) return MetricsMode::Rooted;
  return std::nullopt;
}

struct MetricsRecord {
  std::string doc_id;
  int unit_count = 0;
  int arc_count = 0;  // non-ROOT arcs
  std::optional<double> mdd;
  std::optional<double> sd;

  bool operator==(const MetricsRecord&) const = default;
};

inline MetricsRecord compute_metrics(const DependencyGraph& g, MetricsMode mode) {
  MetricsRecord r;
  r.doc_id = g.doc_id;
  r.unit_count = g.unit_count;
  r.arc_count = static_cast<int>(distances(g).size());
  r.mdd = mode == MetricsMode::Rooted ? mdd_rooted(g) : mdd_local(g);
  r.sd = sd_distances(g);
  return r;
}

enum class MetricField { Mdd, Sd };

inline std::optional<MetricField> parse_metric_field(std::string_view s) {
  if (text::iequals(s, "mdd")) return MetricField::Mdd;
  if (text::iequals(s, "sd")) return MetricField::Sd;
  return std::nullopt;
}

inline std::optional<double> field_of(const MetricsRecord& r, MetricField f) {
  return f == MetricField::Mdd ? r.mdd : r.sd;
}

struct CorpusMean {
  std::optional<double> value;
  std::size_t used = 0;
  std::size_t skipped = 0;
};

/// Mean over the defined values of `field`; records are folded in doc_id
/// order so the result does not depend on input order.
inline CorpusMean corpus_mean(std::span<const MetricsRecord> records, MetricField field) {
  std::vector<const MetricsRecord*> sorted;
  for (const auto& r : records) sorted.push_back(&r);
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](auto* a, auto* b) { return a->doc_id < b->doc_id; });
  CorpusMean m;
  double sum = 0;
  for (auto* r : sorted) {
    if (auto v = field_of(*r, field)) {
      sum += *v;
      ++m.used;
    } else {
      ++m.skipped;
    }
  }
  if (m.used) m.value = sum / static_cast<double>(m.used);
  return m;
}

struct CorrelationResult {
  double r = 0;
  double t = 0;
  int df = 0;
  std::size_t pairs = 0;
};

/// Pearson's r with t = r * sqrt(df / (1 - r^2)), df = n - 2.
inline CorrelationResult pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size())
    throw Error(ErrorCode::LengthMismatch, "series have " + std::to_string(xs.size()) + " and " +
                                               std::to_string(ys.size()) + " values");
  auto n = xs.size();
  if (n < 3) throw Error(ErrorCode::TooFewPairs, "need at least 3 pairs, got " + std::to_string(n));
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0, syy = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double dx = xs[i] - mx, dy = ys[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0) throw Error(ErrorCode::ConstantSeries, "first series is constant");
  if (syy == 0) throw Error(ErrorCode::ConstantSeries, "second series is constant");
  CorrelationResult c;
  c.pairs = n;
  c.df = static_cast<int>(n) - 2;
  c.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  double rest = 1 - c.r * c.r;
  c.t = rest <= 0 ? std::copysign(std::numeric_limits<double>::infinity(), c.r)
                  : c.r * std::sqrt(c.df / rest);
  return c;
}

}  // namespace discodep
