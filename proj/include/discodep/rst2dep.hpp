#pragma once

// RST constituency trees -> rooted dependency trees by nuclearity head
// percolation. A node's head is the head of its leftmost Nucleus child; every
// other child's head attaches to it, labelled with that child's relation.

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "discodep/error.hpp"
#include "discodep/model.hpp"
#include "discodep/rst_reader.hpp"

namespace discodep {

inline UnitIndex node_head(const RstNode& node) {
  if (node.is_leaf()) return node.leaf;
  for (const auto& c : node.children)
    if (c.nuclearity == Nuclearity::Nucleus) return node_head(c.node);
  throw Error(ErrorCode::MissingNuclearity, "internal node has no Nucleus child");
}

/// Head EDU of every node in preorder (root first).
inline std::vector<UnitIndex> tree_heads(const RstTree& tree) {
  std::vector<UnitIndex> out;
  auto walk = [&](auto&& self, const RstNode& n) -> void {
    out.push_back(node_head(n));
    for (const auto& c : n.children) self(self, c.node);
  };
  walk(walk, tree.root);
  return out;
}

namespace detail {

inline void percolate(const RstNode& node, std::vector<DependencyArc>& arcs) {
  if (node.is_leaf()) return;
  auto h = node_head(node);
  for (const auto& c : node.children) {
    auto ch = node_head(c.node);
    if (ch != h) arcs.push_back(make_arc(ch, h, SenseTag{c.relation, {}, std::nullopt}));
    percolate(c.node, arcs);
  }
}

inline DependencyGraph percolate_tree(const RstTree& tree, const RstNode& root) {
  DependencyGraph g;
  g.doc_id = tree.doc_id;
  g.unit_count = tree.leaf_count();
  g.flavor = GraphFlavor::RootedTree;
  g.arcs.push_back(make_arc(node_head(root), kRootUnit, root_sense()));
  percolate(root, g.arcs);
  std::stable_sort(g.arcs.begin(), g.arcs.end(),
                   [](const auto& a, const auto& b) { return a.dependent < b.dependent; });
  return g;
}

inline bool has_nucleus(const std::vector<RstChild>& children, std::size_t from, std::size_t to) {
  for (auto i = from; i < to; ++i)
    if (children[i].nuclearity == Nuclearity::Nucleus) return true;
  return false;
}

inline const RstChild& head_child(const std::vector<RstChild>& children, std::size_t from,
                                  std::size_t to) {
  for (auto i = from; i < to; ++i)
    if (children[i].nuclearity == Nuclearity::Nucleus) return children[i];
  return children[from];
}

inline RstNode binarize_range(const std::vector<RstChild>& children, std::size_t from,
                              std::size_t to);

inline RstChild binarize_child(const RstChild& c) {
  RstChild out = c;
  if (!c.node.is_leaf()) out.node = binarize_range(c.node.children, 0, c.node.children.size());
  return out;
}

// Children [from, to) as one binary subtree.
inline RstNode binarize_range(const std::vector<RstChild>& children, std::size_t from,
                              std::size_t to) {
  if (to - from <= 2) {
    RstNode n;
    for (auto i = from; i < to; ++i) n.children.push_back(binarize_child(children[i]));
    return n;
  }
  RstNode n;
  if (has_nucleus(children, from + 1, to)) {
    n.children.push_back(binarize_child(children[from]));
    n.children.push_back(RstChild{Nuclearity::Nucleus, head_child(children, from + 1, to).relation,
                                  binarize_range(children, from + 1, to)});
  } else {
    n.children.push_back(RstChild{Nuclearity::Nucleus, head_child(children, from, to - 1).relation,
                                  binarize_range(children, from, to - 1)});
    n.children.push_back(binarize_child(children[to - 1]));
  }
  return n;
}

}  // namespace detail

/// Every EDU attaches to the head of the parent of the highest node it heads;
/// the root head attaches to ROOT. Arcs are sorted by dependent.
inline DependencyGraph hirao_convert(const RstTree& tree) {
  return detail::percolate_tree(tree, tree.root);
}

/// Splits n-ary nodes into binary ones. The first child is peeled off while
/// the remaining children still contain a nucleus, otherwise the last one is.
/// New intermediate nodes are nuclei carrying their head child's relation.
inline RstTree binarize_right_heavy(const RstTree& tree) {
  RstTree out;
  out.doc_id = tree.doc_id;
  out.root = detail::binarize_range(tree.root.children, 0, tree.root.children.size());
  return out;
}

inline DependencyGraph li_convert(const RstTree& tree) {
  auto bin = binarize_right_heavy(tree);
  return detail::percolate_tree(bin, bin.root);
}

/// Fills each non-ROOT arc's class (level2) from the relation in level1.
/// Relations missing from the map keep an empty class.
inline DependencyGraph apply_label_map(DependencyGraph g, const LabelMap& map) {
  for (auto& a : g.arcs) {
    if (a.is_root()) continue;
    if (auto cls = relation_class(map, a.sense.level1)) a.sense.level2 = *cls;
  }
  return g;
}

}  // namespace discodep
