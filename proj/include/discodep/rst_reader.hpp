#pragma once

// RST-DT ".dis" trees:
//
//   ( Root (span 1 2)
//     ( Satellite (leaf 1) (rel2par condition) (text _!If it rains,!_) )
//     ( Nucleus (leaf 2) (rel2par span) (text _!we stay in.!_) )
//   )
//
// Leaf text between _! and !_ may use backslash escapes; "<P>" paragraph
// markers are dropped. Unquoted text runs to the closing parenthesis.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "discodep/error.hpp"
#include "discodep/model.hpp"
#include "discodep/text.hpp"

namespace discodep {

namespace detail {

struct DisToken {
  enum Kind { Open, Close, Atom, Text, End } kind;
  std::string value;
  std::size_t line;
};

class DisLexer {
 public:
  explicit DisLexer(std::string_view src) : src_(src) {}

  DisToken next() {
    skip_space();
    if (pos_ >= src_.size()) return {DisToken::End, {}, line_};
    char c = src_[pos_];
    if (c == '(') { ++pos_; return {DisToken::Open, "(", line_}; }
    if (c == ')') { ++pos_; return {DisToken::Close, ")", line_}; }
    if (src_.substr(pos_, 2) == "_!") return quoted();
    std::string atom;
    while (pos_ < src_.size() && !text::is_space(src_[pos_]) && src_[pos_] != '(' && src_[pos_] != ')') {
      if (src_[pos_] == '\\' && pos_ + 1 < src_.size()) ++pos_;
      atom += src_[pos_++];
    }
    return {DisToken::Atom, atom, line_};
  }

 private:
  void skip_space() {
    while (pos_ < src_.size() && text::is_space(src_[pos_])) {
      if (src_[pos_] == '\n') ++line_;
      ++pos_;
    }
  }

  DisToken quoted() {
    auto line = line_;
    pos_ += 2;
    std::string out;
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '\\' && pos_ + 1 < src_.size()) {
        out += src_[pos_ + 1];
        pos_ += 2;
        continue;
      }
      if (c == '!' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '_') {
        pos_ += 2;
        return {DisToken::Text, out, line};
      }
      if (c == '\n') ++line_;
      out += c;
      ++pos_;
    }
    throw Error(ErrorCode::UnbalancedParens, "unterminated _!text!_ fragment", line);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

struct DisNode {
  std::string header;
  std::optional<std::pair<int, int>> span;
  std::optional<int> leaf;
  std::optional<std::string> relation;
  std::string text;
  std::vector<DisNode> children;
  std::size_t line = 0;
};

inline std::string strip_paragraph_marks(std::string s) {
  for (auto pos = s.find("<P>"); pos != std::string::npos; pos = s.find("<P>"))
    s.erase(pos, 3);
  return std::string(text::trim(s));
}

class DisParser {
 public:
  explicit DisParser(std::string_view src) : lex_(src) {}

  DisNode parse_root() {
    auto node = parse_node();
    if (auto t = lex_.next(); t.kind != DisToken::End)
      throw Error(ErrorCode::UnbalancedParens, "unexpected input after the root node", t.line);
    return node;
  }

 private:
  DisToken expect(DisToken::Kind kind, const char* what) {
    auto t = lex_.next();
    if (t.kind == DisToken::End)
      throw Error(ErrorCode::UnbalancedParens, std::string("input ended, expected ") + what, t.line);
    if (t.kind != kind)
      throw Error(ErrorCode::FormatError, std::string("expected ") + what + ", found '" + t.value + "'",
                  t.line);
    return t;
  }

  int expect_int() {
    auto t = expect(DisToken::Atom, "an integer");
    auto v = text::parse_int<int>(t.value);
    if (!v) throw Error(ErrorCode::FormatError, "expected an integer, found '" + t.value + "'", t.line);
    return *v;
  }

  DisNode parse_node() {
    expect(DisToken::Open, "'('");
    auto head = expect(DisToken::Atom, "a node header");
    if (!text::iequals(head.value, "Root"))
      throw Error(ErrorCode::FormatError, "tree must start with a Root node", head.line);
    return parse_body(head);
  }

  // Attributes and children of a node whose "( <header>" was consumed.
  DisNode parse_body(const DisToken& header) {
    DisNode node;
    node.header = header.value;
    node.line = header.line;
    while (true) {
      auto t = lex_.next();
      if (t.kind == DisToken::Close) return node;
      if (t.kind == DisToken::End)
        throw Error(ErrorCode::UnbalancedParens, "missing ')' for node opened here", header.line);
      if (t.kind != DisToken::Open)
        throw Error(ErrorCode::FormatError, "unexpected token '" + t.value + "'", t.line);
      auto key = expect(DisToken::Atom, "an attribute or node header");
      if (text::iequals(key.value, "span")) {
        int a = expect_int();
        int b = expect_int();
        node.span = {a, b};
        expect(DisToken::Close, "')'");
      } else if (text::iequals(key.value, "leaf")) {
        node.leaf = expect_int();
        expect(DisToken::Close, "')'");
      } else if (text::iequals(key.value, "rel2par")) {
        node.relation = expect(DisToken::Atom, "a relation label").value;
        expect(DisToken::Close, "')'");
      } else if (text::iequals(key.value, "text")) {
        node.text = parse_text();
      } else if (text::iequals(key.value, "Nucleus") || text::iequals(key.value, "Satellite")) {
        node.children.push_back(parse_body(key));
      } else {
        throw Error(ErrorCode::FormatError, "unknown attribute '" + key.value + "'", key.line);
      }
    }
  }

  // After "(text": either a single _!..!_ token or atoms up to ')'.
  std::string parse_text() {
    std::string out;
    while (true) {
      auto t = lex_.next();
      if (t.kind == DisToken::Close) return strip_paragraph_marks(out);
      if (t.kind == DisToken::End)
        throw Error(ErrorCode::UnbalancedParens, "input ended inside (text ...)", t.line);
      if (t.kind == DisToken::Open)
        throw Error(ErrorCode::UnbalancedParens, "'(' inside unquoted text; escape it or use _!..!_",
                    t.line);
      if (!out.empty()) out += ' ';
      out += t.value;
    }
  }

  DisLexer lex_;
};

inline RstNode build_rst_node(const DisNode& dn, int& first_leaf, int& last_leaf) {
  if (dn.leaf) {
    if (!dn.children.empty())
      throw Error(ErrorCode::FormatError, "leaf node with children", dn.line);
    first_leaf = last_leaf = *dn.leaf;
    if (dn.span && (dn.span->first != *dn.leaf || dn.span->second != *dn.leaf))
      throw Error(ErrorCode::NonContiguousLeaves, "leaf declares a span other than itself", dn.line);
    return make_leaf(*dn.leaf, dn.text);
  }
  if (dn.children.empty())
    throw Error(ErrorCode::FormatError, "node has neither a leaf nor children", dn.line);
  RstNode node;
  first_leaf = 0;
  for (const auto& c : dn.children) {
    int lo = 0, hi = 0;
    auto child = build_rst_node(c, lo, hi);
    if (first_leaf == 0) first_leaf = lo;
    else if (lo != last_leaf + 1)
      throw Error(ErrorCode::NonContiguousLeaves,
                  "leaf " + std::to_string(lo) + " follows leaf " + std::to_string(last_leaf), c.line);
    last_leaf = hi;
    auto nuc = text::iequals(c.header, "Nucleus") ? Nuclearity::Nucleus : Nuclearity::Satellite;
    node.children.push_back(RstChild{nuc, c.relation.value_or("span"), std::move(child)});
  }
  if (dn.span && (dn.span->first != first_leaf || dn.span->second != last_leaf))
    throw Error(ErrorCode::NonContiguousLeaves,
                "declared span " + std::to_string(dn.span->first) + "-" +
                    std::to_string(dn.span->second) + " but leaves cover " +
                    std::to_string(first_leaf) + "-" + std::to_string(last_leaf),
                dn.line);
  bool has_nucleus = false;
  for (const auto& c : node.children) has_nucleus |= c.nuclearity == Nuclearity::Nucleus;
  if (!has_nucleus)
    throw Error(ErrorCode::MissingNuclearity, "internal node has no Nucleus child", dn.line);
  return node;
}

inline std::string escape_dis_text(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '\\') out += '\\';
    if (s[i] == '_' && i > 0 && s[i - 1] == '!') out += '\\';
    out += s[i];
  }
  return out;
}

inline void print_dis(const RstNode& node, std::string_view header, const std::string* relation,
                      int depth, std::string& out) {
  std::string indent(static_cast<std::size_t>(depth) * 2, ' ');
  out += indent + "( " + std::string(header);
  if (node.is_leaf()) {
    out += " (leaf " + std::to_string(node.leaf) + ")";
    if (relation) out += " (rel2par " + *relation + ")";
    out += " (text _!" + escape_dis_text(node.text) + "!_) )\n";
    return;
  }
  int lo = 0, hi = 0;
  RstTree::visit_leaves(node, [&](const RstNode& l) {
    if (lo == 0) lo = l.leaf;
    hi = l.leaf;
  });
  out += " (span " + std::to_string(lo) + " " + std::to_string(hi) + ")";
  if (relation) out += " (rel2par " + *relation + ")";
  out += "\n";
  for (const auto& c : node.children)
    print_dis(c.node, c.nuclearity == Nuclearity::Nucleus ? "Nucleus" : "Satellite", &c.relation,
              depth + 1, out);
  out += indent + ")\n";
}

}  // namespace detail

/// Parses a ".dis" tree. Throws UnbalancedParens, MissingNuclearity,
/// NonContiguousLeaves or FormatError.
inline RstTree parse_dis(std::string_view src, std::string doc_id = {}) {
  auto root = detail::DisParser(src).parse_root();
  RstTree tree;
  tree.doc_id = std::move(doc_id);
  int lo = 0, hi = 0;
  auto built = detail::build_rst_node(root, lo, hi);
  if (built.is_leaf())
    tree.root = make_internal({nucleus(std::move(built))});
  else
    tree.root = std::move(built);
  check_rst_tree(tree);
  return tree;
}

inline RstTree read_dis_file(const std::string& path, std::string doc_id = {}) {
  return parse_dis(text::read_file(path), std::move(doc_id));
}

/// Writes the tree back in ".dis" notation; parse_dis(to_dis(t)) == t.
inline std::string to_dis(const RstTree& tree) {
  std::string out;
  detail::print_dis(tree.root, "Root", nullptr, 0, out);
  return out;
}

namespace detail {

// Matches `fragment` at `pos`, letting any whitespace run in the fragment
// match any non-empty whitespace run in the text. Returns the end offset.
inline std::optional<std::size_t> match_fragment(std::string_view text_, std::size_t pos,
                                                 std::string_view fragment) {
  std::size_t i = pos, j = 0;
  while (j < fragment.size()) {
    if (text::is_space(fragment[j])) {
      while (j < fragment.size() && text::is_space(fragment[j])) ++j;
      if (i >= text_.size() || !text::is_space(text_[i])) return std::nullopt;
      while (i < text_.size() && text::is_space(text_[i])) ++i;
      continue;
    }
    if (i >= text_.size() || text_[i] != fragment[j]) return std::nullopt;
    ++i;
    ++j;
  }
  return i;
}

}  // namespace detail

/// Recovers EDU character spans by locating each leaf fragment, in order,
/// within the raw text. Throws FragmentNotFound.
inline Document edu_inventory_of(const RstTree& tree, std::string raw_text) {
  Document doc;
  doc.doc_id = tree.doc_id;
  std::size_t cursor = 0;
  RstTree::visit_leaves(tree.root, [&](const RstNode& leaf) {
    auto frag = text::trim(leaf.text);
    if (frag.empty())
      throw Error(ErrorCode::FragmentNotFound, "leaf " + std::to_string(leaf.leaf) + " has no text");
    for (auto p = cursor; p < raw_text.size(); ++p) {
      if (raw_text[p] != frag.front()) continue;
      if (auto end = detail::match_fragment(raw_text, p, frag)) {
        doc.edus.push_back(Edu{leaf.leaf, Span{p, *end}});
        cursor = *end;
        return;
      }
    }
    throw Error(ErrorCode::FragmentNotFound,
                "text of leaf " + std::to_string(leaf.leaf) + " not found after offset " +
                    std::to_string(cursor));
  });
  doc.text = std::move(raw_text);
  return doc;
}

// ---------------------------------------------------------------------------
// Relation -> class label maps (`relation<TAB>class`)

using LabelMap = std::map<std::string, std::string>;

inline LabelMap parse_label_map(std::string_view content) {
  LabelMap map;
  auto all = text::lines(content);
  for (std::size_t i = 0; i < all.size(); ++i) {
    auto line = text::trim(all[i]);
    if (line.empty() || line.front() == '#') continue;
    auto f = text::split(line, '\t');
    if (f.size() != 2)
      throw Error(ErrorCode::FormatError, "label map: expected relation<TAB>class", i + 1);
    map[text::to_lower(text::trim(f[0]))] = std::string(text::trim(f[1]));
  }
  return map;
}

/// Case-insensitive lookup. RST-DT suffixes ("-e", "-s", "-n") are retried
/// without the suffix.
inline std::optional<std::string> relation_class(const LabelMap& map, std::string_view relation) {
  auto key = text::to_lower(relation);
  if (auto it = map.find(key); it != map.end()) return it->second;
  if (key.size() > 2 && key[key.size() - 2] == '-' &&
      (key.back() == 'e' || key.back() == 's' || key.back() == 'n')) {
    if (auto it = map.find(key.substr(0, key.size() - 2)); it != map.end()) return it->second;
  }
  return std::nullopt;
}

}  // namespace discodep
