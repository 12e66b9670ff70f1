#pragma once

#include <compare>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "xmlsumm/errors.hpp"

namespace xmlsumm {

/// One element of a parsed document. Nodes live in Document::nodes and the
/// node id is the index into that vector; ids are assigned in document
/// (pre-)order, so id comparisons give document order.
struct Node {
  std::string label;
  std::string text;  // leaves only; empty string means "no text"
  int parent = -1;   // -1 for the root
  std::vector<int> children;

  bool is_leaf() const noexcept { return children.empty(); }
  bool has_text() const noexcept { return !text.empty(); }
};

/// An ordered tree of labeled nodes with text at the leaves. Immutable after
/// parsing; safe to share read-only across threads.
struct Document {
  std::string source_id;
  std::vector<Node> nodes;  // index == node id, pre-order

  const Node& node(int id) const { return nodes.at(static_cast<std::size_t>(id)); }
  const Node& root() const { return nodes.front(); }
  int node_count() const noexcept { return static_cast<int>(nodes.size()); }

  /// Labels from the root down to (and including) `id`.
  std::vector<std::string> path_of(int id) const;
};

/// A unique root-to-leaf sequence of tag labels; the unit of structural
/// ranking.
struct TagUnit {
  std::vector<std::string> path;

  auto operator<=>(const TagUnit&) const = default;

  /// Display form "a/b/c". Labels never contain '/' when they come from the
  /// parser, so this is unambiguous for parsed documents.
  std::string joined() const;

  static TagUnit from_joined(std::string_view joined);
};

/// One text value at a leaf, with the leaf's id and the id of its parent
/// element instance (used for sibling co-occurrence).
struct TextOccurrence {
  std::string value;
  int node_id = -1;
  int parent_instance_id = -1;

  bool operator==(const TextOccurrence&) const = default;
};

/// All text values occurring under one tag unit, in document order.
struct TextUnit {
  TagUnit tag_unit;
  std::vector<TextOccurrence> occurrences;

  bool empty() const noexcept { return occurrences.empty(); }
  int size() const noexcept { return static_cast<int>(occurrences.size()); }
};

/// Parse a UTF-8 XML byte stream.
///
/// Attributes become leading child leaves named "@attr" (declaration order);
/// contiguous text runs inside mixed content become "#text" leaves; comments,
/// processing instructions and namespace prefixes are stripped; whitespace-only
/// text is dropped and text values are trimmed. Only the five predefined
/// entities and numeric character references are resolved.
Document parse_document(std::string_view xml, std::string source_id);
Document parse_file(const std::string& path);

/// One TagUnit per distinct root-to-leaf path, ordered by first occurrence.
std::vector<TagUnit> extract_tag_units(const Document& doc);

/// Group the text of every non-empty leaf by its tag unit. Tag units whose
/// leaves are all empty map to a TextUnit with no occurrences.
std::map<TagUnit, TextUnit> extract_text_units(const Document& doc);

/// Serialize with 2-space indentation. "@attr" children are emitted as
/// attributes and "#text" children as text runs, so parse(to_xml(doc)) is
/// isomorphic to doc.
std::string to_xml(const Document& doc);
void write_xml(std::ostream& os, const Document& doc);

}  // namespace xmlsumm
