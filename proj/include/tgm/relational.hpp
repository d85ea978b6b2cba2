#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "tgm/report.hpp"
#include "tgm/schema.hpp"
#include "tgm/store.hpp"

namespace tgm {

struct ColumnDef {
  std::string name;
  TypeLabel type;     // int, string, bool, decimal, money or date
  bool list = false;  // multivalued column, cells separated by '|'
  bool nullable = false;
};

struct ForeignKey {
  std::vector<std::string> columns;
  std::string table;  // matched positionally against its primary key
};

struct TableDef {
  std::string name;
  std::vector<ColumnDef> columns;
  std::vector<std::string> primary_key;
  std::vector<ForeignKey> foreign_keys;
  bool join_table = false;

  const ColumnDef* column(std::string_view name) const;
  bool is_fk_column(std::string_view name) const;
};

struct RelationalManifest {
  std::vector<TableDef> tables;

  const TableDef* find(std::string_view name) const;
};

/// Reads the `.rman` format:
///   table NAME { col NAME : TYPE [nullable]; pk (COLS); fk (COLS) -> TABLE; [jointable;] }
/// TYPE is a base type, `date`, or `list<BASE>`. Throws ManifestInvalid.
RelationalManifest parse_manifest(std::string_view text);
/// Structural checks on a manifest built in code. Throws ManifestInvalid.
void validate_manifest(const RelationalManifest& manifest);

/// Plain tables become node types whose payload holds the non-FK columns;
/// nullable scalars become `list<T>[0..1]`. Each FK becomes an edge type
/// `<table>_<cols>` from the local to the referenced table, local side 1..1
/// (0..1 if nullable) and referenced side 0..*. A join table becomes a
/// hyper-edge over its referenced tables carrying the non-FK columns; a
/// table referenced twice fills a head slot the second time.
TypedGraphSchema import_relational_schema(const RelationalManifest& manifest, std::string name = "relational");

struct TableData {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// Delimited text with a header line; double quotes group cells. Blank lines
/// are skipped. Throws MalformedInput on ragged rows.
TableData parse_delimited(std::string_view text, char delimiter = ',');

struct RelationalData {
  MutationBatch batch;
  ViolationReport report;  // FkTargetMissing, DuplicatePrimaryKey, TypeMismatch
};

/// One node per plain row (symbol `<table>_<pk values>`), one edge per
/// non-null FK, one hyper-edge per join row. Empty cells are NULL. Tables
/// without data have no rows. Throws MalformedInput when a header does not
/// list exactly the declared columns.
RelationalData import_relational_data(const RelationalManifest& manifest,
                                      const std::map<std::string, TableData>& tables, const TypedGraphSchema& schema);

}  // namespace tgm
