#include "tgm/relational.hpp"

#include <algorithm>
#include <boost/tokenizer.hpp>
#include <charconv>
#include <set>

#include "syntax.hpp"
#include "tgm/error.hpp"

namespace tgm {

const ColumnDef* TableDef::column(std::string_view col) const {
  const auto it = std::find_if(columns.begin(), columns.end(), [&](const ColumnDef& c) { return c.name == col; });
  return it == columns.end() ? nullptr : &*it;
}

bool TableDef::is_fk_column(std::string_view col) const {
  return std::any_of(foreign_keys.begin(), foreign_keys.end(), [&](const ForeignKey& fk) {
    return std::find(fk.columns.begin(), fk.columns.end(), col) != fk.columns.end();
  });
}

const TableDef* RelationalManifest::find(std::string_view name) const {
  const auto it = std::find_if(tables.begin(), tables.end(), [&](const TableDef& t) { return t.name == name; });
  return it == tables.end() ? nullptr : &*it;
}

namespace {

using namespace syntax;

bool scalar_type(std::string_view t) {
  return t == "int" || t == "string" || t == "bool" || t == "decimal" || t == "money" || t == "date";
}

std::vector<std::string> name_list(Parser& p) {
  std::vector<std::string> out;
  p.expect("(");
  do {
    out.push_back(p.label("column name"));
  } while (p.accept(","));
  p.expect(")");
  return out;
}

TableDef parse_table(Parser& p) {
  p.expect_keyword("table");
  TableDef t;
  t.name = p.label("table name");
  p.expect("{");
  while (!p.accept("}")) {
    const Token& kw = p.peek();
    if (kw.kind != Tok::Ident) p.fail(kw, "'col', 'pk', 'fk' or 'jointable'");
    if (kw.text == "col") {
      p.next();
      ColumnDef c;
      c.name = p.label("column name");
      p.expect(":");
      if (p.is_keyword("list") && p.is_punct("<", 1)) {
        p.next();
        p.next();
        c.list = true;
        c.type = p.label("element type");
        p.expect(">");
      } else {
        c.type = p.label("column type");
      }
      if (p.is_keyword("nullable")) {
        p.next();
        c.nullable = true;
      }
      t.columns.push_back(std::move(c));
    } else if (kw.text == "pk") {
      p.next();
      t.primary_key = name_list(p);
    } else if (kw.text == "fk") {
      p.next();
      ForeignKey fk;
      fk.columns = name_list(p);
      p.expect("->");
      fk.table = p.label("table name");
      t.foreign_keys.push_back(std::move(fk));
    } else if (kw.text == "jointable") {
      p.next();
      t.join_table = true;
    } else {
      p.fail(kw, "'col', 'pk', 'fk' or 'jointable'");
    }
    p.accept(";");
  }
  return t;
}

std::string fk_label(const TableDef& t, const ForeignKey& fk) {
  std::string label = t.name;
  for (const auto& c : fk.columns) label += "_" + c;
  return label;
}

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorCode::ManifestInvalid, msg); }

}  // namespace

RelationalManifest parse_manifest(std::string_view text) {
  RelationalManifest m;
  try {
    Parser p(Lexer(text).run());
    while (!p.at_end()) m.tables.push_back(parse_table(p));
  } catch (const SyntaxError& e) {
    ParseDiagnostic d{Severity::Error, e.loc, e.message, e.expected};
    invalid(format_diagnostic(d));
  }
  validate_manifest(m);
  return m;
}

void validate_manifest(const RelationalManifest& manifest) {
  std::set<std::string> names;
  for (const auto& t : manifest.tables) {
    const std::string where = "table '" + t.name + "': ";
    if (!names.insert(t.name).second) invalid(where + "declared twice");
    std::set<std::string> cols;
    for (const auto& c : t.columns) {
      if (!cols.insert(c.name).second) invalid(where + "column '" + c.name + "' declared twice");
      if (!scalar_type(c.type)) invalid(where + "column '" + c.name + "' has unsupported type '" + c.type + "'");
      if (c.list && c.type == "date") invalid(where + "list<date> columns are not supported");
    }
    if (t.primary_key.empty()) invalid(where + "no primary key");
    for (const auto& k : t.primary_key) {
      const ColumnDef* c = t.column(k);
      if (!c) invalid(where + "primary key column '" + k + "' is not declared");
      if (c->nullable || c->list) invalid(where + "primary key column '" + k + "' must be a non-null scalar");
    }
    for (const auto& fk : t.foreign_keys) {
      const TableDef* target = manifest.find(fk.table);
      if (!target) invalid(where + "foreign key references unknown table '" + fk.table + "'");
      if (target->join_table) invalid(where + "foreign key references join table '" + fk.table + "'");
      if (fk.columns.size() != target->primary_key.size()) {
        invalid(where + "foreign key to '" + fk.table + "' must have " + std::to_string(target->primary_key.size()) +
                " column(s)");
      }
      for (std::size_t i = 0; i < fk.columns.size(); ++i) {
        const ColumnDef* c = t.column(fk.columns[i]);
        if (!c) invalid(where + "foreign key column '" + fk.columns[i] + "' is not declared");
        const ColumnDef* ref = target->column(target->primary_key[i]);
        if (c->list || (ref && c->type != ref->type)) {
          invalid(where + "foreign key column '" + c->name + "' does not match '" + fk.table + "." +
                  target->primary_key[i] + "'");
        }
      }
    }
    if (t.join_table) {
      if (t.foreign_keys.empty()) invalid(where + "join table without foreign keys");
      std::set<std::string> fk_cols;
      for (const auto& fk : t.foreign_keys) fk_cols.insert(fk.columns.begin(), fk.columns.end());
      const std::set<std::string> pk(t.primary_key.begin(), t.primary_key.end());
      if (pk != fk_cols) invalid(where + "join table primary key must be exactly its foreign key columns");
      std::map<std::string, int> uses;
      for (const auto& fk : t.foreign_keys) {
        if (++uses[fk.table] > 2) invalid(where + "join table references '" + fk.table + "' more than twice");
      }
    }
  }
}

TypedGraphSchema import_relational_schema(const RelationalManifest& manifest, std::string name) {
  validate_manifest(manifest);
  TypedGraphSchema s(std::move(name));
  std::set<TypeLabel> defined;
  const auto column_type = [&](const ColumnDef& c) -> TypeLabel {
    if (!c.list && !c.nullable) return c.type;
    const TypeLabel label = (c.list ? "list_" : "opt_") + c.type;
    if (defined.insert(label).second) {
      s.define_type(label, ListType{c.type, c.list ? Multiplicity::at_least(0) : Multiplicity::between(0, 1)});
    }
    return label;
  };
  const auto payload = [&](const TableDef& t) {
    RecordType r;
    for (const auto& c : t.columns) {
      if (!t.is_fk_column(c.name)) r.fields.push_back(FieldDecl{c.name, column_type(c)});
    }
    return r;
  };

  try {
    for (const auto& t : manifest.tables) {
      if (t.join_table) continue;
      s.define_type(t.name, payload(t));
      s.add_node_type(t.name, t.name);
    }
    for (const auto& t : manifest.tables) {
      if (t.join_table) continue;
      for (const auto& fk : t.foreign_keys) {
        const bool nullable = std::any_of(fk.columns.begin(), fk.columns.end(),
                                          [&](const std::string& c) { return t.column(c)->nullable; });
        s.add_edge_type(EdgeType{fk_label(t, fk),
                                 std::nullopt,
                                 {Endpoint{t.name, Multiplicity::between(nullable ? 0 : 1, 1)}},
                                 {Endpoint{fk.table, Multiplicity::at_least(0)}}});
      }
    }
    for (const auto& t : manifest.tables) {
      if (!t.join_table) continue;
      EdgeType e;
      e.label = t.name;
      RecordType prop = payload(t);
      if (!prop.fields.empty()) {
        s.define_type(t.name, std::move(prop));
        e.property = t.name;
      }
      for (const auto& fk : t.foreign_keys) {
        const bool seen = std::any_of(e.tail.begin(), e.tail.end(),
                                      [&](const Endpoint& ep) { return ep.node_type == fk.table; });
        (seen ? e.head : e.tail).push_back(Endpoint{fk.table, Multiplicity::at_least(0)});
      }
      s.add_edge_type(std::move(e));
    }
  } catch (const Error& e) {
    invalid(e.what());
  }
  return s;
}

TableData parse_delimited(std::string_view text, char delimiter) {
  using Sep = boost::escaped_list_separator<char>;
  const Sep sep('\\', delimiter, '"');
  TableData out;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string line(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    try {
      boost::tokenizer<Sep> tok(line, sep);
      cells.assign(tok.begin(), tok.end());
    } catch (const boost::escaped_list_error& e) {
      throw Error(ErrorCode::MalformedInput, "line " + std::to_string(line_no) + ": " + e.what());
    }
    if (out.header.empty()) {
      out.header = std::move(cells);
    } else if (cells.size() != out.header.size()) {
      throw Error(ErrorCode::MalformedInput, "line " + std::to_string(line_no) + ": expected " +
                                                 std::to_string(out.header.size()) + " cells, found " +
                                                 std::to_string(cells.size()));
    } else {
      out.rows.push_back(std::move(cells));
    }
  }
  return out;
}

namespace {

std::optional<Value> parse_scalar(std::string_view type, std::string_view cell) {
  if (type == "string") return Value::text(std::string(cell));
  if (type == "int") {
    std::int64_t v = 0;
    const auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || p != cell.data() + cell.size() || cell.empty()) return std::nullopt;
    return Value::integer(v);
  }
  if (type == "bool") {
    if (cell == "true") return Value::boolean(true);
    if (cell == "false") return Value::boolean(false);
    return std::nullopt;
  }
  if (type == "decimal" || type == "money") {
    const auto d = Decimal::parse(cell);
    if (!d || (type == "money" && !d->fits_money())) return std::nullopt;
    return Value::decimal(*d);
  }
  if (type == "date") {
    int y = 0, m = 0, d = 0;
    if (cell.size() != 10 || cell[4] != '-' || cell[7] != '-') return std::nullopt;
    const auto num = [&](std::size_t at, std::size_t len, int& out) {
      const auto [p, ec] = std::from_chars(cell.data() + at, cell.data() + at + len, out);
      return ec == std::errc() && p == cell.data() + at + len;
    };
    if (!num(0, 4, y) || !num(5, 2, m) || !num(8, 2, d) || m < 1 || m > 12 || d < 1 || d > 31) return std::nullopt;
    return Value::record({{"day", Value::integer(d)}, {"month", Value::integer(m)}, {"year", Value::integer(y)}});
  }
  return std::nullopt;
}

/// Parsed cell, or nullopt for NULL. Reports and returns nullopt on a bad cell.
std::optional<Value> parse_cell(const ColumnDef& c, const std::string& cell, const std::string& where,
                                ViolationReport& report, bool& bad) {
  bad = false;
  const auto mismatch = [&](const std::string& text) {
    report.add(ViolationCode::TypeMismatch, where, "'" + text + "' is not a valid " + c.type);
    bad = true;
    return std::nullopt;
  };
  if (c.list) {
    std::vector<Value> items;
    if (!cell.empty()) {
      std::size_t start = 0;
      for (;;) {
        const std::size_t bar = cell.find('|', start);
        const std::string part = cell.substr(start, bar == std::string::npos ? std::string::npos : bar - start);
        auto v = parse_scalar(c.type, part);
        if (!v) return mismatch(part);
        items.push_back(std::move(*v));
        if (bar == std::string::npos) break;
        start = bar + 1;
      }
    }
    return Value::list(std::move(items));
  }
  if (cell.empty() && (c.nullable || c.type != "string")) {
    if (!c.nullable) {
      report.add(ViolationCode::TypeMismatch, where, "NULL in a non-nullable column");
      bad = true;
    }
    return std::nullopt;
  }
  auto v = parse_scalar(c.type, cell);
  if (!v) return mismatch(cell);
  return v;
}

std::string key_text(const std::vector<Value>& vals) {
  std::string out;
  for (const auto& v : vals) out += to_literal(v) + "\x1f";
  return out;
}

}  // namespace

RelationalData import_relational_data(const RelationalManifest& manifest,
                                      const std::map<std::string, TableData>& tables,
                                      const TypedGraphSchema& schema) {
  RelationalData out;
  ViolationReport& report = out.report;
  static const TableData kEmpty;

  struct Row {
    std::vector<std::optional<Value>> cells;
    std::string where;
  };
  std::map<std::string, std::vector<Row>> parsed;

  for (const auto& t : manifest.tables) {
    const auto it = tables.find(t.name);
    const TableData& data = it == tables.end() ? kEmpty : it->second;
    std::vector<std::size_t> position(t.columns.size());
    if (it != tables.end()) {
      if (data.header.size() != t.columns.size()) {
        throw Error(ErrorCode::MalformedInput, "table '" + t.name + "': header lists " +
                                                   std::to_string(data.header.size()) + " columns, manifest " +
                                                   std::to_string(t.columns.size()));
      }
      for (std::size_t i = 0; i < t.columns.size(); ++i) {
        const auto h = std::find(data.header.begin(), data.header.end(), t.columns[i].name);
        if (h == data.header.end()) {
          throw Error(ErrorCode::MalformedInput, "table '" + t.name + "': header lacks column '" + t.columns[i].name + "'");
        }
        position[i] = static_cast<std::size_t>(h - data.header.begin());
      }
    }
    auto& rows = parsed[t.name];
    for (std::size_t r = 0; r < data.rows.size(); ++r) {
      Row row;
      row.where = t.name + " row " + std::to_string(r + 1);
      bool any_bad = false;
      for (std::size_t i = 0; i < t.columns.size(); ++i) {
        bool bad = false;
        row.cells.push_back(parse_cell(t.columns[i], data.rows[r][position[i]], row.where + " column " +
                                                                                     t.columns[i].name, report, bad));
        any_bad = any_bad || bad;
      }
      if (!any_bad) rows.push_back(std::move(row));
    }
  }

  const auto index_of = [](const TableDef& t, const std::string& col) {
    return static_cast<std::size_t>(std::find_if(t.columns.begin(), t.columns.end(),
                                                 [&](const ColumnDef& c) { return c.name == col; }) -
                                    t.columns.begin());
  };
  const auto row_value = [&](const TableDef& t, const Row& row) {
    std::vector<FieldValue> fields;
    for (std::size_t i = 0; i < t.columns.size(); ++i) {
      const ColumnDef& c = t.columns[i];
      if (t.is_fk_column(c.name)) continue;
      Value v = row.cells[i] ? *row.cells[i] : Value::list({});
      if (c.nullable && !c.list) v = row.cells[i] ? Value::list({*row.cells[i]}) : Value::list({});
      fields.push_back(FieldValue{c.name, std::move(v)});
    }
    return Value::record(std::move(fields));
  };
  const auto pk_symbol_part = [](const std::vector<Value>& vals) {
    std::string out;
    for (const auto& v : vals) {
      std::string lit = v.is_string() ? v.as_string() : to_literal(v);
      if (v.is_record()) {
        lit.clear();
        for (const auto& f : v.as_record().fields) lit += (lit.empty() ? "" : "-") + to_literal(f.value);
      }
      out += "_" + lit;
    }
    return out;
  };

  std::map<std::string, std::map<std::string, Placeholder>> keys;
  for (const auto& t : manifest.tables) {
    if (t.join_table) continue;
    auto& table_keys = keys[t.name];
    for (const Row& row : parsed[t.name]) {
      std::vector<Value> pk;
      for (const auto& k : t.primary_key) pk.push_back(*row.cells[index_of(t, k)]);
      const std::string key = key_text(pk);
      if (table_keys.contains(key)) {
        report.add(ViolationCode::DuplicatePrimaryKey, row.where, "primary key " + pk_symbol_part(pk).substr(1) +
                                                                     " already used in '" + t.name + "'");
        continue;
      }
      table_keys.emplace(key, out.batch.insert_node(t.name, row_value(t, row), t.name + pk_symbol_part(pk)));
    }
  }

  // FK lookup: nullopt means NULL (no edge), a missing target is reported.
  const auto resolve = [&](const TableDef& t, const Row& row, const ForeignKey& fk,
                           bool& missing) -> std::optional<Placeholder> {
    missing = false;
    std::vector<Value> vals;
    std::size_t nulls = 0;
    for (const auto& c : fk.columns) {
      const auto& cell = row.cells[index_of(t, c)];
      if (cell) {
        vals.push_back(*cell);
      } else {
        ++nulls;
      }
    }
    if (nulls == fk.columns.size()) return std::nullopt;
    if (nulls > 0) {
      report.add(ViolationCode::TypeMismatch, row.where, "foreign key to '" + fk.table + "' is partially NULL");
      missing = true;
      return std::nullopt;
    }
    const auto& target = keys[fk.table];
    const auto hit = target.find(key_text(vals));
    if (hit == target.end()) {
      report.add(ViolationCode::FkTargetMissing, row.where,
                 "no row in '" + fk.table + "' with key " + pk_symbol_part(vals).substr(1));
      missing = true;
      return std::nullopt;
    }
    return hit->second;
  };

  for (const auto& t : manifest.tables) {
    if (t.join_table) continue;
    const auto& table_keys = keys[t.name];
    for (const Row& row : parsed[t.name]) {
      std::vector<Value> pk;
      for (const auto& k : t.primary_key) pk.push_back(*row.cells[index_of(t, k)]);
      const auto self = table_keys.find(key_text(pk));
      for (const auto& fk : t.foreign_keys) {
        bool missing = false;
        const auto target = resolve(t, row, fk, missing);
        if (!target || self == table_keys.end()) continue;
        out.batch.insert_edge(fk_label(t, fk), {{t.name, self->second}}, {{fk.table, *target}});
      }
    }
  }

  for (const auto& t : manifest.tables) {
    if (!t.join_table) continue;
    const EdgeType* et = schema.edge_type(t.name);
    std::set<std::string> seen;
    for (const Row& row : parsed[t.name]) {
      std::map<TypeLabel, NodeRef> tail, head;
      bool complete = true;
      std::vector<Value> pk;
      for (const auto& k : t.primary_key) {
        if (row.cells[index_of(t, k)]) pk.push_back(*row.cells[index_of(t, k)]);
      }
      if (!seen.insert(key_text(pk)).second) {
        report.add(ViolationCode::DuplicatePrimaryKey, row.where, "join row repeats an earlier row");
        continue;
      }
      for (const auto& fk : t.foreign_keys) {
        bool missing = false;
        const auto target = resolve(t, row, fk, missing);
        if (!target) {
          if (!missing) report.add(ViolationCode::TypeMismatch, row.where, "join row with NULL reference");
          complete = false;
          continue;
        }
        (tail.contains(fk.table) ? head : tail).emplace(fk.table, *target);
      }
      if (!complete) continue;
      Value prop = row_value(t, row);
      if (et && !et->property) prop = Value::empty_record();
      out.batch.insert_edge(t.name, std::move(tail), std::move(head), std::move(prop));
    }
  }
  return out;
}

}  // namespace tgm
