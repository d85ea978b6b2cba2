#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tgm/report.hpp"
#include "tgm/schema.hpp"
#include "tgm/store.hpp"

namespace tgm {

/// Minimal element tree; attribute and child order follow the document.
struct XmlElement {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<XmlElement> children;
  std::string text;  // trimmed character data
};

/// Well-formed XML 1.0 via Boost.PropertyTree. Throws MalformedInput.
XmlElement parse_xml(std::string_view text);

struct XsdAttribute {
  std::string name;
  TypeLabel type;
  bool required = false;
};

/// Element declaration with occurrence bounds already multiplied through any
/// enclosing sequence.
struct XsdElement {
  std::string name;
  Multiplicity occurs = Multiplicity::exactly(1);
  std::optional<TypeLabel> simple_type;  // set for simple elements
  std::optional<TypeLabel> text_type;    // simple content of a complex element
  std::vector<XsdAttribute> attributes;
  std::vector<XsdElement> children;      // sequence order

  bool is_simple() const noexcept { return simple_type.has_value(); }
};

struct XsdSubset {
  XsdElement root;
  /// Named simple types in declaration order, as registry definitions.
  std::vector<std::pair<TypeLabel, DataTypeDef>> simple_types;
};

/// Supported: one root element, sequences, attributes, simple content
/// extensions, named or inline simple types restricting a base type with at
/// most one bound facet and fractionDigits (<= 2 on decimal gives money),
/// named complex types, minOccurs/maxOccurs. Anything else throws
/// UnsupportedXsdFeature; malformed documents throw MalformedInput.
XsdSubset parse_xsd(std::string_view text);

enum class XmlStrategy { Compact, Expanded };

struct XmlOptions {
  XmlStrategy strategy = XmlStrategy::Compact;
  bool ordinals = true;  // expanded only: containment edges carry their sibling position
};

/// Compact: the root element is a single node type whose payload nests the
/// whole document; attributes become fields "@name", simple content "#text",
/// repeated or optional children lists. Expanded: a node type per element
/// with attributes and text as payload, and a containment edge type
/// `<parent>_<child>` per parent/child pair whose parent side carries the
/// child's occurrence bounds and whose child side is 1..1.
TypedGraphSchema import_xsd(const XsdSubset& xsd, const XmlOptions& options, std::string name = "xml");

struct XmlData {
  MutationBatch batch;
  ViolationReport report;  // DocumentSchemaMismatch per path
};

XmlData import_xml_document(const XmlElement& document, const XsdSubset& xsd, const TypedGraphSchema& schema,
                            const XmlOptions& options);

/// (element path, literal) pairs in document order, e.g.
/// ("bookstore/book/title/@lang", "\"en\"") or ("bookstore/book/year", "2005").
/// The compact form walks the root node's payload; the expanded form follows
/// containment edges by ordinal, reading paths from the node symbols.
std::vector<std::pair<std::string, std::string>> extract_compact(const TypedGraph& graph);
std::vector<std::pair<std::string, std::string>> extract_expanded(const TypedGraph& graph);

}  // namespace tgm
