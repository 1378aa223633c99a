#pragma once

// PDTB relations -> local discourse dependency forest.
//
// Each kept relation contributes one arc between the head EDUs of its two
// argument constituents. Direction comes from the sense: a level-3 tag
// "ArgN-as-X" marks argument N as subordinate, so the other argument heads;
// every other sense is symmetric and the linearly later head governs.
// Relations are resolved innermost first so that a multi-EDU argument can
// be reduced to a single head through arcs already built inside it.

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "discodep/edu_align.hpp"
#include "discodep/error.hpp"
#include "discodep/model.hpp"
#include "discodep/text.hpp"

namespace discodep {

enum class ArgSide { Arg1, Arg2 };

inline ArgSide other_side(ArgSide s) { return s == ArgSide::Arg1 ? ArgSide::Arg2 : ArgSide::Arg1; }

struct SymmetryVerdict {
  bool symmetric = true;
  ArgSide marked = ArgSide::Arg1;  // meaningful only when !symmetric

  static SymmetryVerdict Symmetric() { return {}; }
  static SymmetryVerdict Asymmetric(ArgSide marked) { return {false, marked}; }

  bool operator==(const SymmetryVerdict&) const = default;
};

/// Prefix rule on the level-3 tag, case-insensitive.
inline SymmetryVerdict sense_symmetry(const SenseTag& tag) {
  if (!tag.level3) return SymmetryVerdict::Symmetric();
  if (text::istarts_with(*tag.level3, "arg1-as-")) return SymmetryVerdict::Asymmetric(ArgSide::Arg1);
  if (text::istarts_with(*tag.level3, "arg2-as-")) return SymmetryVerdict::Asymmetric(ArgSide::Arg2);
  return SymmetryVerdict::Symmetric();
}

/// Which endpoint governs a relation's arc.
enum class HeadChoice { Arg1, Arg2, Later, Earlier };

/// How a level-2 class overrides the prefix rule.
enum class HeadRule {
  Prefix,        // marked argument depends on the unmarked one
  Symmetric,     // linearly later head governs regardless of marking
  MarkedIsHead,  // marked argument governs
};

inline std::optional<HeadRule> parse_head_rule(std::string_view s) {
  if (text::iequals(s, "prefix")) return HeadRule::Prefix;
  if (text::iequals(s, "symmetric")) return HeadRule::Symmetric;
  if (text::iequals(s, "marked-head")) return HeadRule::MarkedIsHead;
  return std::nullopt;
}

/// Prefix rule plus per-class overrides keyed by the level-2 class
/// (case-insensitive).
///
/// The default table treats Purpose as symmetric, so in an Arg2-as-goal pair
/// the goal clause governs. The prefix rule alone would invert that arc.
class HeadRules {
 public:
  static HeadRules prefix_only() { return HeadRules{}; }

  static HeadRules defaults() {
    HeadRules r;
    r.set_override("Purpose", HeadRule::Symmetric);
    return r;
  }

  /// Tab-separated `class<TAB>prefix|symmetric|marked-head`, '#' comments.
  static HeadRules parse(std::string_view content) {
    HeadRules r;
    auto all = text::lines(content);
    for (std::size_t i = 0; i < all.size(); ++i) {
      auto line = text::trim(all[i]);
      if (line.empty() || line.front() == '#') continue;
      auto f = text::split(line, '\t');
      if (f.size() != 2)
        throw Error(ErrorCode::FormatError, "head rules: expected class<TAB>rule", i + 1);
      auto rule = parse_head_rule(text::trim(f[1]));
      if (!rule)
        throw Error(ErrorCode::FormatError, "head rules: unknown rule '" + std::string(f[1]) + "'",
                    i + 1, 2);
      r.set_override(text::trim(f[0]), *rule);
    }
    return r;
  }

  void set_override(std::string_view level2, HeadRule rule) {
    overrides_[text::to_lower(level2)] = rule;
  }

  /// Swaps every decision (Arg1<->Arg2, Later<->Earlier).
  HeadRules flipped() const {
    HeadRules r = *this;
    r.flip_ = !flip_;
    return r;
  }

  HeadRule rule_for(const SenseTag& tag) const {
    auto it = overrides_.find(text::to_lower(tag.level2));
    return it == overrides_.end() ? HeadRule::Prefix : it->second;
  }

  HeadChoice choose(const SenseTag& tag) const {
    auto verdict = sense_symmetry(tag);
    HeadChoice c = HeadChoice::Later;
    if (!verdict.symmetric) {
      switch (rule_for(tag)) {
        case HeadRule::Prefix:
          c = other_side(verdict.marked) == ArgSide::Arg1 ? HeadChoice::Arg1 : HeadChoice::Arg2;
          break;
        case HeadRule::MarkedIsHead:
          c = verdict.marked == ArgSide::Arg1 ? HeadChoice::Arg1 : HeadChoice::Arg2;
          break;
        case HeadRule::Symmetric:
          c = HeadChoice::Later;
          break;
      }
    }
    if (!flip_) return c;
    switch (c) {
      case HeadChoice::Arg1: return HeadChoice::Arg2;
      case HeadChoice::Arg2: return HeadChoice::Arg1;
      case HeadChoice::Later: return HeadChoice::Earlier;
      case HeadChoice::Earlier: return HeadChoice::Later;
    }
    return c;
  }

 private:
  std::map<std::string, HeadRule> overrides_;
  bool flip_ = false;
};

/// The unit of `units` that no other member governs through `arcs`; the
/// linearly last one when several qualify.
inline UnitIndex head_of_constituent(std::span<const UnitIndex> units,
                                     std::span<const DependencyArc> arcs) {
  if (units.empty()) throw Error(ErrorCode::InvalidArgument, "constituent has no units");
  std::set<UnitIndex> members(units.begin(), units.end());
  std::set<UnitIndex> governed;
  for (const auto& a : arcs)
    if (members.count(a.dependent) && members.count(a.head)) governed.insert(a.dependent);
  for (auto it = members.rbegin(); it != members.rend(); ++it)
    if (!governed.count(*it)) return *it;
  // Every member is governed: the span contains a cycle. Fall back to the last.
  return *members.rbegin();
}

struct PdtbConversionOptions {
  double theta = kDefaultTheta;
  HeadRules rules = HeadRules::defaults();
};

struct PdtbConversion {
  DependencyGraph graph;
  std::vector<Diagnostic> diagnostics;
};

/// Converts one document. Arcs appear in processing order (smallest argument
/// union first, file order on ties). NoRel records are ignored; within a link
/// group only the first record is kept.
inline PdtbConversion convert_pdtb(const Document& doc, std::span<const PdtbRelation> relations,
                                   const PdtbConversionOptions& options = {}) {
  PdtbConversion out;
  out.graph.doc_id = doc.doc_id;
  out.graph.unit_count = doc.unit_count();
  out.graph.flavor = GraphFlavor::LocalForest;

  auto diag = [&](Severity sev, std::string code, std::string msg, std::size_t line) {
    out.diagnostics.push_back(Diagnostic{sev, std::move(code), std::move(msg), line, std::nullopt});
  };

  struct Pending {
    const PdtbRelation* rel;
    std::size_t order;
    std::vector<UnitIndex> arg1, arg2;
    std::size_t union_size;
  };
  std::vector<Pending> pending;
  std::set<std::string> seen_links;

  for (std::size_t i = 0; i < relations.size(); ++i) {
    const auto& rel = relations[i];
    if (rel.kind == RelationKind::NoRel) continue;
    if (rel.link_group && !seen_links.insert(*rel.link_group).second) {
      diag(Severity::Info, "link-dropped",
           "relation shares link group " + *rel.link_group + " with an earlier record; dropped",
           rel.raw_line_no);
      continue;
    }
    if (doc.edus.empty())
      throw Error(ErrorCode::EmptyAlignment,
                  "document '" + doc.doc_id + "' has relations but no EDU inventory");
    auto a1 = align_argument(rel.arg1_spans, doc, options.theta);
    auto a2 = align_argument(rel.arg2_spans, doc, options.theta);
    if (a1.fallback)
      diag(Severity::Info, "alignment-fallback",
           "Arg1 below overlap threshold; using EDU " + std::to_string(a1.units.front()),
           rel.raw_line_no);
    if (a2.fallback)
      diag(Severity::Info, "alignment-fallback",
           "Arg2 below overlap threshold; using EDU " + std::to_string(a2.units.front()),
           rel.raw_line_no);
    std::vector<UnitIndex> both;
    std::set_union(a1.units.begin(), a1.units.end(), a2.units.begin(), a2.units.end(),
                   std::back_inserter(both));
    pending.push_back(Pending{&rel, i, std::move(a1.units), std::move(a2.units), both.size()});
  }

  std::stable_sort(pending.begin(), pending.end(), [](const Pending& a, const Pending& b) {
    return a.union_size < b.union_size;
  });

  for (const auto& p : pending) {
    std::vector<UnitIndex> shared;
    std::set_intersection(p.arg1.begin(), p.arg1.end(), p.arg2.begin(), p.arg2.end(),
                          std::back_inserter(shared));
    if (!shared.empty()) {
      diag(Severity::Warning, "overlapping-arguments",
           "Arg1 and Arg2 share EDU " + std::to_string(shared.front()) + "; no arc emitted",
           p.rel->raw_line_no);
      continue;
    }
    auto h1 = head_of_constituent(p.arg1, out.graph.arcs);
    auto h2 = head_of_constituent(p.arg2, out.graph.arcs);
    UnitIndex head = h1, dep = h2;
    switch (options.rules.choose(p.rel->primary_sense())) {
      case HeadChoice::Arg1: head = h1; dep = h2; break;
      case HeadChoice::Arg2: head = h2; dep = h1; break;
      case HeadChoice::Later: head = std::max(h1, h2); dep = std::min(h1, h2); break;
      case HeadChoice::Earlier: head = std::min(h1, h2); dep = std::max(h1, h2); break;
    }
    out.graph.arcs.push_back(make_arc(dep, head, p.rel->primary_sense()));
  }
  return out;
}

}  // namespace discodep
