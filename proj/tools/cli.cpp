#include "cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <memory>
#include <sstream>

#include "tgm/abstraction.hpp"
#include "tgm/dot.hpp"
#include "tgm/error.hpp"
#include "tgm/relational.hpp"
#include "tgm/text.hpp"
#include "tgm/xml.hpp"

namespace tgm::cli {

namespace {

namespace fs = std::filesystem;

constexpr int kOk = 0;
constexpr int kViolations = 1;
constexpr int kUsage = 2;

/// Aborts the current command with exit code 2 and a message on the error stream.
struct Failure {
  std::string message;
};

struct Context {
  std::ostream& out;
  std::ostream& err;
  bool quiet = false;
  char delimiter = ',';
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{path + ": cannot open file"};
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Failure{path + ": read error"};
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Failure{path + ": cannot write file"};
    out << content;
    out.flush();
    if (!out) throw Failure{path + ": write error"};
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw Failure{path + ": cannot replace file"};
  }
}

std::string diagnostics_text(const std::string& path, const std::vector<ParseDiagnostic>& diags) {
  std::string text;
  for (const auto& d : diags) text += path + ":" + format_diagnostic(d) + "\n";
  return text;
}

void report(Context& ctx, const ViolationReport& r) {
  std::istringstream lines(print_violations(r));
  for (std::string line; std::getline(lines, line);) {
    if (ctx.quiet && line.starts_with("OK ")) continue;
    ctx.out << line << "\n";
  }
}

TypedGraphSchema load_schema_unchecked(const std::string& path) {
  auto parsed = parse_schema_unchecked(read_file(path));
  if (!parsed.ok()) throw Failure{diagnostics_text(path, parsed.diagnostics)};
  return std::move(*parsed.value);
}

std::shared_ptr<const TypedGraphSchema> load_schema(Context& ctx, const std::string& path) {
  auto parsed = parse_schema(read_file(path));
  if (!parsed.ok()) throw Failure{diagnostics_text(path, parsed.diagnostics)};
  for (const auto& d : parsed.diagnostics) ctx.err << path << ":" << format_diagnostic(d) << "\n";
  return std::make_shared<const TypedGraphSchema>(std::move(*parsed.value));
}

/// Commits the instance into a fresh graph; nullopt with the report on stdout when rejected.
std::optional<TypedGraph> load_instance(Context& ctx, std::shared_ptr<const TypedGraphSchema> schema,
                                        const std::string& path, std::string* graph_name = nullptr) {
  auto parsed = parse_instance(read_file(path), *schema);
  if (!parsed.ok()) throw Failure{diagnostics_text(path, parsed.diagnostics)};
  for (const auto& d : parsed.diagnostics) ctx.err << path << ":" << format_diagnostic(d) << "\n";
  if (graph_name) *graph_name = parsed.value->graph_name;
  auto result = commit(new_graph(schema), parsed.value->batch);
  if (!result.ok()) {
    report(ctx, result.report);
    return std::nullopt;
  }
  return std::move(*result.graph);
}

void emit(Context& ctx, const std::string& prefix, const std::string& schema_text, const std::string* instance_text) {
  if (prefix.empty()) {
    ctx.out << schema_text;
    if (instance_text) ctx.out << *instance_text;
    return;
  }
  write_file(prefix + ".tgs", schema_text);
  if (instance_text) write_file(prefix + ".tgi", *instance_text);
}

int cmd_validate(Context& ctx, const std::string& schema_path, const std::string& instance_path) {
  const TypedGraphSchema unchecked = load_schema_unchecked(schema_path);
  const ViolationReport schema_report = validate_schema(unchecked);
  if (instance_path.empty() || !schema_report.ok()) {
    report(ctx, schema_report);
    return schema_report.ok() ? kOk : kViolations;
  }
  const auto schema = std::make_shared<const TypedGraphSchema>(unchecked);
  auto parsed = parse_instance(read_file(instance_path), *schema);
  if (!parsed.ok()) throw Failure{diagnostics_text(instance_path, parsed.diagnostics)};
  for (const auto& d : parsed.diagnostics) ctx.err << instance_path << ":" << format_diagnostic(d) << "\n";
  const auto result = commit(new_graph(schema), parsed.value->batch);
  ViolationReport combined = schema_report;
  combined.merge(result.report);
  report(ctx, combined);
  return result.ok() ? kOk : kViolations;
}

std::map<std::string, TableData> read_tables(const RelationalManifest& manifest, const std::string& dir,
                                             char delimiter) {
  std::map<std::string, TableData> tables;
  for (const auto& t : manifest.tables) {
    const fs::path file = fs::path(dir) / (t.name + ".csv");
    if (!fs::exists(file)) continue;
    tables.emplace(t.name, parse_delimited(read_file(file.string()), delimiter));
  }
  return tables;
}

int finish_import(Context& ctx, const TypedGraphSchema& schema, const MutationBatch& batch,
                  const ViolationReport& import_report, const std::string& prefix) {
  const auto shared = std::make_shared<const TypedGraphSchema>(schema);
  const std::string schema_text = print_schema(schema);
  if (!import_report.ok()) {
    report(ctx, import_report);
    if (!prefix.empty()) write_file(prefix + ".tgs", schema_text);
    return kViolations;
  }
  auto result = commit(new_graph(shared), batch);
  if (!result.ok()) {
    report(ctx, result.report);
    if (!prefix.empty()) write_file(prefix + ".tgs", schema_text);
    return kViolations;
  }
  const std::string instance_text = print_instance(*result.graph, "imported");
  emit(ctx, prefix, schema_text, &instance_text);
  if (!prefix.empty()) report(ctx, result.report);
  return kOk;
}

int cmd_import_relational(Context& ctx, const std::string& manifest_path, const std::string& data_dir,
                          const std::string& prefix) {
  const RelationalManifest manifest = parse_manifest(read_file(manifest_path));
  const fs::path stem = fs::path(manifest_path).stem();
  const TypedGraphSchema schema = import_relational_schema(manifest, is_identifier(stem.string()) ? stem.string() : "relational");
  std::map<std::string, TableData> tables;
  if (!data_dir.empty()) {
    if (!fs::is_directory(data_dir)) throw Failure{data_dir + ": not a directory"};
    tables = read_tables(manifest, data_dir, ctx.delimiter);
  }
  RelationalData data = import_relational_data(manifest, tables, schema);
  return finish_import(ctx, schema, data.batch, data.report, prefix);
}

int cmd_import_xml(Context& ctx, const std::string& xsd_path, const std::string& xml_path, const std::string& strategy,
                   bool ordinals, const std::string& prefix) {
  XmlOptions options;
  options.strategy = strategy == "expanded" ? XmlStrategy::Expanded : XmlStrategy::Compact;
  options.ordinals = ordinals;
  const XsdSubset xsd = parse_xsd(read_file(xsd_path));
  const fs::path stem = fs::path(xsd_path).stem();
  const TypedGraphSchema schema = import_xsd(xsd, options, is_identifier(stem.string()) ? stem.string() : "xml");
  if (xml_path.empty()) {
    emit(ctx, prefix, print_schema(schema), nullptr);
    return kOk;
  }
  const XmlData data = import_xml_document(parse_xml(read_file(xml_path)), xsd, schema, options);
  return finish_import(ctx, schema, data.batch, data.report, prefix);
}

int cmd_abstract(Context& ctx, const std::string& schema_path, const std::string& instance_path,
                 const std::string& prefix) {
  const auto schema = load_schema(ctx, schema_path);
  if (schema->groups().empty()) throw Failure{schema_path + ": schema declares no groups"};
  const Partition partition = Partition::from_schema(*schema);
  const TypedGraphSchema abstract = abstract_schema(*schema, partition, schema->aggregates());
  const std::string schema_text = print_schema(abstract);
  if (instance_path.empty()) {
    emit(ctx, prefix, schema_text, nullptr);
    return kOk;
  }
  std::string graph_name;
  const auto graph = load_instance(ctx, schema, instance_path, &graph_name);
  if (!graph) return kViolations;
  const std::string instance_text =
      print_instance(abstract_instance(*graph, partition, schema->aggregates()), graph_name + "_abstract");
  emit(ctx, prefix, schema_text, &instance_text);
  return kOk;
}

int cmd_export_dot(Context& ctx, const std::string& schema_path, const std::string& instance_path,
                   const std::string& out_path) {
  std::string dot;
  if (instance_path.empty()) {
    dot = export_dot(load_schema_unchecked(schema_path));
  } else {
    const auto graph = load_instance(ctx, load_schema(ctx, schema_path), instance_path);
    if (!graph) return kViolations;
    dot = export_dot(*graph);
  }
  if (out_path.empty()) {
    ctx.out << dot;
  } else {
    write_file(out_path, dot);
  }
  return kOk;
}

int cmd_query(Context& ctx, const std::string& schema_path, const std::string& instance_path,
              const std::string& symbol, const std::string& edge_type, const std::string& mode) {
  const auto schema = load_schema(ctx, schema_path);
  if (!schema->edge_type(edge_type)) throw Failure{"unknown edge type '" + edge_type + "'"};
  const auto graph = load_instance(ctx, schema, instance_path);
  if (!graph) return kViolations;
  const auto node = graph->find_symbol(symbol);
  if (!node) throw Failure{"unknown node symbol '" + symbol + "'"};
  std::set<NodeId> found;
  if (mode == "neighbors-along") {
    found = neighbors(*graph, *node, edge_type, Direction::Along);
  } else if (mode == "neighbors-against") {
    found = neighbors(*graph, *node, edge_type, Direction::Against);
  } else {
    found = where_used(*graph, *node, edge_type);
  }
  std::vector<std::string> names;
  for (const NodeId id : found) names.push_back(graph->display(id));
  std::sort(names.begin(), names.end());
  for (const auto& n : names) ctx.out << n << "\n";
  return kOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Context ctx{out, err};
  CLI::App app{"Typed property hypergraph tool", "tgm"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--quiet", ctx.quiet, "Suppress OK lines");
  app.add_option("--delimiter", ctx.delimiter, "Field delimiter of relational data files");

  std::string schema_path, instance_path, out_path, strategy = "compact", kind, in1, in2, symbol, edge_type, mode;
  bool no_ordinals = false;

  auto* validate = app.add_subcommand("validate", "Check a schema, or an instance against its schema");
  validate->add_option("schema", schema_path)->required();
  validate->add_option("instance", instance_path);

  auto* import = app.add_subcommand("import", "Import relational or XML sources");
  import->add_option("kind", kind)->required()->check(CLI::IsMember({"relational", "xml"}));
  import->add_option("source", in1, "Manifest (.rman) or XSD")->required();
  import->add_option("data", in2, "Data directory of <table>.csv files, or XML document");
  import->add_option("--strategy", strategy)->check(CLI::IsMember({"compact", "expanded"}));
  import->add_flag("--no-ordinals", no_ordinals, "Expanded XML: no sibling position on containment edges");
  import->add_option("-o", out_path, "Output prefix for .tgs/.tgi");

  auto* abstract = app.add_subcommand("abstract", "Condense schema groups into hyper-nodes");
  abstract->add_option("schema", schema_path)->required();
  abstract->add_option("instance", instance_path);
  abstract->add_option("-o", out_path, "Output prefix for .tgs/.tgi");

  auto* dot = app.add_subcommand("export-dot", "Graphviz rendering of a schema or an instance");
  dot->add_option("schema", schema_path)->required();
  dot->add_option("instance", instance_path);
  dot->add_option("-o", out_path, "Output file");

  auto* query = app.add_subcommand("query", "Traverse an instance from a node");
  query->add_option("schema", schema_path)->required();
  query->add_option("instance", instance_path)->required();
  query->add_option("node", symbol)->required();
  query->add_option("edge-type", edge_type)->required();
  query->add_option("mode", mode)->required()->check(
      CLI::IsMember({"neighbors-along", "neighbors-against", "where-used"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*validate) return cmd_validate(ctx, schema_path, instance_path);
    if (*import) {
      if (kind == "relational") return cmd_import_relational(ctx, in1, in2, out_path);
      return cmd_import_xml(ctx, in1, in2, strategy, !no_ordinals, out_path);
    }
    if (*abstract) return cmd_abstract(ctx, schema_path, instance_path, out_path);
    if (*dot) return cmd_export_dot(ctx, schema_path, instance_path, out_path);
    if (*query) return cmd_query(ctx, schema_path, instance_path, symbol, edge_type, mode);
  } catch (const Failure& f) {
    err << f.message;
    if (!f.message.ends_with("\n")) err << "\n";
    return kUsage;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace tgm::cli
