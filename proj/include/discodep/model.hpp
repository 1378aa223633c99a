#pragma once

// Domain types shared by every converter: documents with their EDU inventory,
// PDTB relation records, RST constituency trees and discourse dependency
// graphs. Values are plain aggregates; nothing here holds hidden state.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "discodep/error.hpp"
#include "discodep/text.hpp"

namespace discodep {

/// 1-based EDU position; 0 is the artificial ROOT.
using UnitIndex = int;
inline constexpr UnitIndex kRootUnit = 0;

/// Half-open character range [start, end) over the raw document text.
struct Span {
  std::size_t start = 0;
  std::size_t end = 0;

  std::size_t length() const { return end - start; }

  std::size_t overlap(const Span& other) const {
    auto lo = std::max(start, other.start);
    auto hi = std::min(end, other.end);
    return hi > lo ? hi - lo : 0;
  }

  auto operator<=>(const Span&) const = default;
};

inline Span make_span(std::size_t start, std::size_t end) {
  if (start >= end)
    throw Error(ErrorCode::MalformedSpan,
                "span " + std::to_string(start) + ".." + std::to_string(end) + " is empty");
  return Span{start, end};
}

struct Edu {
  UnitIndex index = 0;
  Span span;

  bool operator==(const Edu&) const = default;
};

struct Document {
  std::string doc_id;
  std::string text;
  std::vector<Edu> edus;

  int unit_count() const { return static_cast<int>(edus.size()); }
};

/// Throws FormatError unless EDU indices run 1..n and spans ascend without
/// overlapping.
inline void check_edu_inventory(const std::vector<Edu>& edus, std::string_view doc_id = {}) {
  for (std::size_t i = 0; i < edus.size(); ++i) {
    const auto& e = edus[i];
    auto where = std::string(doc_id) + " EDU " + std::to_string(e.index);
    if (e.index != static_cast<UnitIndex>(i + 1))
      throw Error(ErrorCode::FormatError, where + ": indices must be contiguous from 1");
    if (e.span.start >= e.span.end)
      throw Error(ErrorCode::FormatError, where + ": empty span");
    if (i > 0 && edus[i - 1].span.end > e.span.start)
      throw Error(ErrorCode::FormatError, where + ": overlaps or precedes the previous EDU");
  }
}

/// Three-level PDTB sense (sense.class.type). Synthetic tags for EntRel/NoRel
/// carry only level1.
struct SenseTag {
  std::string level1;
  std::string level2;
  std::optional<std::string> level3;

  static SenseTag parse(std::string_view dotted) {
    // Anything after the second dot belongs to level3.
    SenseTag tag;
    auto s = text::trim(dotted);
    auto first = s.find('.');
    tag.level1 = std::string(s.substr(0, first));
    if (first == std::string_view::npos) return tag;
    s.remove_prefix(first + 1);
    auto second = s.find('.');
    tag.level2 = std::string(s.substr(0, second));
    if (second != std::string_view::npos && second + 1 < s.size())
      tag.level3 = std::string(s.substr(second + 1));
    return tag;
  }

  std::string str() const {
    std::string out = level1;
    if (!level2.empty() || level3) out += "." + level2;
    if (level3) out += "." + *level3;
    return out;
  }

  /// Case-insensitive comparison, since PDTB releases mix "arg2-as-denier"
  /// and "Arg2-as-denier".
  bool matches(const SenseTag& other) const {
    return text::iequals(level1, other.level1) && text::iequals(level2, other.level2) &&
           level3.has_value() == other.level3.has_value() &&
           (!level3 || text::iequals(*level3, *other.level3));
  }

  auto operator<=>(const SenseTag&) const = default;
};

enum class RelationKind { Explicit, Implicit, AltLex, AltLexC, EntRel, Hypophora, NoRel };

inline std::string_view relation_kind_name(RelationKind kind) {
  switch (kind) {
    case RelationKind::Explicit: return "Explicit";
    case RelationKind::Implicit: return "Implicit";
    case RelationKind::AltLex: return "AltLex";
    case RelationKind::AltLexC: return "AltLexC";
    case RelationKind::EntRel: return "EntRel";
    case RelationKind::Hypophora: return "Hypophora";
    case RelationKind::NoRel: return "NoRel";
  }
  return "";
}

inline std::optional<RelationKind> parse_relation_kind(std::string_view name) {
  for (auto kind : {RelationKind::Explicit, RelationKind::Implicit, RelationKind::AltLex,
                    RelationKind::AltLexC, RelationKind::EntRel, RelationKind::Hypophora,
                    RelationKind::NoRel}) {
    if (text::iequals(name, relation_kind_name(kind))) return kind;
  }
  return std::nullopt;
}

struct PdtbRelation {
  RelationKind kind = RelationKind::Explicit;
  std::optional<std::string> connective;
  std::vector<SenseTag> senses;  // first entry is the primary sense
  std::vector<Span> arg1_spans;
  std::vector<Span> arg2_spans;
  std::optional<std::string> link_group;
  std::size_t raw_line_no = 0;

  const SenseTag& primary_sense() const { return senses.front(); }

  bool operator==(const PdtbRelation&) const = default;
};

// ---------------------------------------------------------------------------
// RST constituency trees

enum class Nuclearity { Nucleus, Satellite };

struct RstChild;

/// Leaf when `leaf > 0`; otherwise an internal node with ordered children.
struct RstNode {
  UnitIndex leaf = 0;
  std::string text;  // leaf fragment, unescaped
  std::vector<RstChild> children;

  bool is_leaf() const { return leaf > 0; }
  bool operator==(const RstNode&) const;
};

struct RstChild {
  Nuclearity nuclearity = Nuclearity::Nucleus;
  std::string relation;
  RstNode node;

  bool operator==(const RstChild&) const = default;
};

inline bool RstNode::operator==(const RstNode& other) const {
  return leaf == other.leaf && text == other.text && children == other.children;
}

inline RstNode make_leaf(UnitIndex index, std::string text = {}) {
  RstNode n;
  n.leaf = index;
  n.text = std::move(text);
  return n;
}

inline RstNode make_internal(std::vector<RstChild> children) {
  RstNode n;
  n.children = std::move(children);
  return n;
}

inline RstChild nucleus(RstNode node, std::string relation = "span") {
  return RstChild{Nuclearity::Nucleus, std::move(relation), std::move(node)};
}

inline RstChild satellite(RstNode node, std::string relation) {
  return RstChild{Nuclearity::Satellite, std::move(relation), std::move(node)};
}

struct RstTree {
  std::string doc_id;
  RstNode root;

  int leaf_count() const {
    int count = 0;
    visit_leaves(root, [&](const RstNode&) { ++count; });
    return count;
  }

  template <typename Fn>
  static void visit_leaves(const RstNode& node, Fn&& fn) {
    if (node.is_leaf()) {
      fn(node);
      return;
    }
    for (const auto& c : node.children) visit_leaves(c.node, fn);
  }

  bool operator==(const RstTree&) const = default;
};

/// Throws unless the structural invariants hold: leaves 1..n left to right,
/// every internal node has a Nucleus child and at least two children (the root
/// may wrap a single child).
inline void check_rst_tree(const RstTree& tree) {
  UnitIndex expected = 1;
  auto walk = [&](auto&& self, const RstNode& node, bool is_root) -> void {
    if (node.is_leaf()) {
      if (node.leaf != expected)
        throw Error(ErrorCode::NonContiguousLeaves,
                    "expected leaf " + std::to_string(expected) + ", found " +
                        std::to_string(node.leaf));
      ++expected;
      return;
    }
    if (node.children.empty())
      throw Error(ErrorCode::NonContiguousLeaves, "internal node without children");
    if (node.children.size() < 2 && !is_root)
      throw Error(ErrorCode::MissingNuclearity, "non-root internal node with a single child");
    bool has_nucleus = std::any_of(node.children.begin(), node.children.end(), [](const auto& c) {
      return c.nuclearity == Nuclearity::Nucleus;
    });
    if (!has_nucleus)
      throw Error(ErrorCode::MissingNuclearity, "internal node has no Nucleus child");
    for (const auto& c : node.children) self(self, c.node, false);
  };
  if (tree.root.is_leaf())
    throw Error(ErrorCode::NonContiguousLeaves, "tree root must be an internal node");
  walk(walk, tree.root, true);
}

// ---------------------------------------------------------------------------
// Dependency graphs

struct DependencyArc {
  UnitIndex dependent = 0;
  UnitIndex head = kRootUnit;
  SenseTag sense;
  std::optional<int> distance;  // absent for ROOT arcs

  bool is_root() const { return head == kRootUnit; }

  auto operator<=>(const DependencyArc&) const = default;
};

inline SenseTag root_sense() { return SenseTag{"ROOT", "NONE", std::nullopt}; }

inline DependencyArc make_arc(UnitIndex dependent, UnitIndex head, SenseTag sense) {
  DependencyArc arc{dependent, head, std::move(sense), std::nullopt};
  if (head != kRootUnit) arc.distance = dependent > head ? dependent - head : head - dependent;
  return arc;
}

enum class GraphFlavor { RootedTree, LocalForest };

inline std::string_view flavor_name(GraphFlavor f) {
  return f == GraphFlavor::RootedTree ? "RootedTree" : "LocalForest";
}

inline std::optional<GraphFlavor> parse_flavor(std::string_view s) {
  if (text::iequals(s, "RootedTree")) return GraphFlavor::RootedTree;
  if (text::iequals(s, "LocalForest")) return GraphFlavor::LocalForest;
  return std::nullopt;
}

struct DependencyGraph {
  std::string doc_id;
  int unit_count = 0;
  GraphFlavor flavor = GraphFlavor::LocalForest;
  std::vector<DependencyArc> arcs;

  bool operator==(const DependencyGraph&) const = default;
};

/// Equality up to arc order.
inline bool structurally_equal(const DependencyGraph& a, const DependencyGraph& b) {
  if (a.doc_id != b.doc_id || a.unit_count != b.unit_count || a.flavor != b.flavor ||
      a.arcs.size() != b.arcs.size())
    return false;
  auto x = a.arcs;
  auto y = b.arcs;
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  return x == y;
}

enum class Severity { Info, Warning, Error };

inline std::string_view severity_name(Severity s) {
  switch (s) {
    case Severity::Info: return "info";
    case Severity::Warning: return "warning";
    case Severity::Error: return "error";
  }
  return "";
}

struct Diagnostic {
  Severity severity = Severity::Warning;
  std::string code;
  std::string message;
  std::optional<std::size_t> line;
  std::optional<UnitIndex> unit;

  std::string str() const {
    std::string out(severity_name(severity));
    out += " [" + code + "]";
    if (line) out += " line " + std::to_string(*line);
    if (unit) out += " unit " + std::to_string(*unit);
    out += ": " + message;
    return out;
  }

  bool operator==(const Diagnostic&) const = default;
};

namespace detail {

inline std::string arc_label(const DependencyArc& a) {
  return std::to_string(a.dependent) + "->" + std::to_string(a.head);
}

// Reports each cycle among non-ROOT arcs once, as the sorted list of units on
// it. Multi-headed units are followed along every head.
inline std::vector<std::vector<UnitIndex>> find_cycles(const DependencyGraph& g) {
  std::map<UnitIndex, std::vector<UnitIndex>> heads;
  for (const auto& a : g.arcs)
    if (!a.is_root()) heads[a.dependent].push_back(a.head);

  std::map<UnitIndex, int> color;  // 0 unvisited, 1 on stack, 2 done
  std::vector<UnitIndex> stack;
  std::set<std::vector<UnitIndex>> seen;
  std::vector<std::vector<UnitIndex>> cycles;

  auto dfs = [&](auto&& self, UnitIndex u) -> void {
    color[u] = 1;
    stack.push_back(u);
    if (auto it = heads.find(u); it != heads.end()) {
      for (UnitIndex h : it->second) {
        if (color[h] == 1) {
          auto from = std::find(stack.begin(), stack.end(), h);
          std::vector<UnitIndex> cyc(from, stack.end());
          std::sort(cyc.begin(), cyc.end());
          if (seen.insert(cyc).second) cycles.push_back(cyc);
        } else if (color[h] == 0) {
          self(self, h);
        }
      }
    }
    stack.pop_back();
    color[u] = 2;
  };
  for (const auto& [u, _] : heads)
    if (color[u] == 0) dfs(dfs, u);
  return cycles;
}

}  // namespace detail

/// Checks the flavor-specific invariants. An empty result means the graph is
/// well formed; each problem names the offending unit or arc.
inline std::vector<Diagnostic> validate_graph(const DependencyGraph& g) {
  std::vector<Diagnostic> out;
  auto report = [&](std::string code, std::string msg, std::optional<UnitIndex> unit) {
    out.push_back(Diagnostic{Severity::Warning, std::move(code), std::move(msg), std::nullopt, unit});
  };

  std::map<UnitIndex, int> head_count;
  int root_arcs = 0;
  for (const auto& a : g.arcs) {
    if (a.dependent < 1 || a.dependent > g.unit_count)
      report("unit-out-of-range", "arc " + detail::arc_label(a) + " has dependent outside 1.." +
                                      std::to_string(g.unit_count), a.dependent);
    if (a.head < 0 || a.head > g.unit_count)
      report("unit-out-of-range", "arc " + detail::arc_label(a) + " has head outside 0.." +
                                      std::to_string(g.unit_count), a.head);
    if (a.dependent == a.head)
      report("self-loop", "arc " + detail::arc_label(a) + " attaches a unit to itself", a.dependent);
    if (a.is_root()) {
      ++root_arcs;
      if (a.distance)
        report("distance-mismatch", "ROOT arc " + detail::arc_label(a) + " carries a distance",
               a.dependent);
    } else {
      int expected = a.dependent > a.head ? a.dependent - a.head : a.head - a.dependent;
      if (a.distance != expected)
        report("distance-mismatch",
               "arc " + detail::arc_label(a) + " distance should be " + std::to_string(expected),
               a.dependent);
    }
    ++head_count[a.dependent];
  }

  for (const auto& [unit, count] : head_count)
    if (count > 1)
      report("multiple-heads", "multiple heads for unit " + std::to_string(unit), unit);

  if (g.flavor == GraphFlavor::RootedTree) {
    if (root_arcs != 1)
      report("root-count", "rooted tree needs exactly one ROOT arc, found " +
                               std::to_string(root_arcs), std::nullopt);
    for (UnitIndex u = 1; u <= g.unit_count; ++u)
      if (!head_count.count(u))
        report("missing-head", "unit " + std::to_string(u) + " has no head", u);
  } else if (root_arcs > 0) {
    report("root-in-forest", "local forest must not contain ROOT arcs", std::nullopt);
  }

  for (const auto& cyc : detail::find_cycles(g)) {
    std::string units;
    for (auto u : cyc) units += (units.empty() ? "" : ",") + std::to_string(u);
    report("cycle", "cycle through units {" + units + "}", cyc.front());
  }

  // Connectivity only matters once every unit has a single head and there are
  // no cycles; otherwise the diagnostics above already explain the failure.
  if (g.flavor == GraphFlavor::RootedTree && out.empty()) {
    std::map<UnitIndex, UnitIndex> head;
    for (const auto& a : g.arcs) head[a.dependent] = a.head;
    for (UnitIndex u = 1; u <= g.unit_count; ++u) {
      UnitIndex cur = u;
      int steps = 0;
      while (cur != kRootUnit && steps++ <= g.unit_count) cur = head[cur];
      if (cur != kRootUnit) report("disconnected", "unit " + std::to_string(u) + " does not reach ROOT", u);
    }
  }
  return out;
}

}  // namespace discodep
