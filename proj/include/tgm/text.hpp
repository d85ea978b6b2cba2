#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tgm/report.hpp"
#include "tgm/schema.hpp"
#include "tgm/store.hpp"

namespace tgm {

struct SourceLocation {
  std::size_t line = 1;
  std::size_t column = 1;
  bool operator==(const SourceLocation&) const = default;
};

struct ParseDiagnostic {
  Severity severity = Severity::Error;
  SourceLocation location;
  std::string message;
  std::string expected;  // token hint; empty when not applicable
};

template <class T>
struct ParseResult {
  std::optional<T> value;
  std::vector<ParseDiagnostic> diagnostics;

  bool ok() const noexcept { return value.has_value(); }
};

/// "3:14: error: unexpected '}' (expected ':')".
std::string format_diagnostic(const ParseDiagnostic& d);

/// Parses a schema document and validates it. The value is set only when
/// there are neither syntax errors nor semantic errors; semantic problems are
/// reported at the location of the declaration they concern.
ParseResult<TypedGraphSchema> parse_schema(std::string_view text);
/// Syntax only: the schema is returned even if it fails validation.
ParseResult<TypedGraphSchema> parse_schema_unchecked(std::string_view text);

/// Canonical text: kinds in the order types, nodes, edges, constraints,
/// groups; each kind in declaration order; two-space indentation.
std::string print_schema(const TypedGraphSchema& schema);

struct ParsedInstance {
  std::string graph_name;
  std::string schema_name;
  MutationBatch batch;
  std::vector<std::string> symbols;  // symbol of each inserted node, by placeholder index
};

/// Turns an instance document into an uncommitted batch. Node and edge type
/// labels and endpoint counts are checked against the schema here; values
/// are checked only at commit.
ParseResult<ParsedInstance> parse_instance(std::string_view text, const TypedGraphSchema& schema);

/// Nodes in id order, then edges in id order. Nodes without a symbol get a
/// generated one of the form _n<id>.
std::string print_instance(const TypedGraph& graph, std::string_view graph_name = "g");

/// A single value literal, e.g. `{name: "Billy", tags: ["a"]}`.
ParseResult<Value> parse_value(std::string_view text);

/// One line per violation, sorted by code then subject; "OK (0 violations)"
/// for an empty report.
std::string print_violations(const ViolationReport& report);

}  // namespace tgm
