#include "tgm/text.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>

#include "syntax.hpp"
#include "tgm/error.hpp"

namespace tgm {

namespace {

using namespace syntax;

bool is_type_keyword(std::string_view s) {
  return base_kind_from(s).has_value() || s == "record" || s == "list" || s == "union" || s == "any";
}

/// Label in type-expression position: keywords must be back-quoted to read
/// back as references.
std::string type_ref(std::string_view label) {
  if (is_type_keyword(label)) {
    std::string out = "`";
    out += label;
    out += "`";
    return out;
  }
  return quote_label(label);
}

class SchemaParser {
 public:
  explicit SchemaParser(Parser& p) : p_(p) {}

  TypedGraphSchema run() {
    schema_location_ = p_.peek().loc;
    p_.expect_keyword("schema");
    TypedGraphSchema schema(p_.label("schema name"));
    p_.expect("{");
    while (!p_.accept("}")) item(schema);
    if (!p_.at_end()) p_.fail(p_.peek(), "end of input");
    return schema;
  }

  SourceLocation locate(const std::string& subject) const {
    if (const auto it = locations_.find(subject); it != locations_.end()) return it->second;
    const auto cut = subject.find_first_of(".[ :(");
    if (cut != std::string::npos) {
      if (const auto it = locations_.find(subject.substr(0, cut)); it != locations_.end()) return it->second;
    }
    return schema_location_;
  }

 private:
  void remember(const std::string& key, SourceLocation loc) { locations_.emplace(key, loc); }

  void item(TypedGraphSchema& schema) {
    const Token& t = p_.peek();
    const SourceLocation loc = t.loc;
    if (t.kind != Tok::Ident) p_.fail(t, "declaration or '}'");
    const std::string kw = t.text;
    try {
      if (kw == "type") {
        p_.next();
        std::string name = p_.label("type name");
        p_.expect("=");
        DataTypeDef def = type_expr();
        remember(name, loc);
        schema.define_type(std::move(name), std::move(def));
      } else if (kw == "node") {
        p_.next();
        std::string name = p_.label("node type name");
        p_.expect(":");
        std::string payload = p_.label("payload type");
        remember(name, loc);
        schema.add_node_type(std::move(name), std::move(payload));
      } else if (kw == "edge") {
        p_.next();
        EdgeType e;
        e.label = p_.label("edge type name");
        if (p_.is_keyword("prop")) {
          p_.next();
          e.property = p_.label("property type");
        }
        p_.expect_keyword("tail");
        e.tail = endpoints();
        p_.expect_keyword("head");
        e.head = endpoints();
        remember(e.label, loc);
        schema.add_edge_type(std::move(e));
      } else if (kw == "constraint") {
        p_.next();
        Constraint c = constraint();
        remember(describe(c), loc);
        schema.add_constraint(std::move(c));
      } else if (kw == "group") {
        p_.next();
        group(schema, loc);
      } else {
        p_.fail(t, "'type', 'node', 'edge', 'constraint' or 'group'");
      }
    } catch (const Error& e) {
      throw SyntaxError{loc, e.what(), ""};
    }
  }

  DataTypeDef type_expr() {
    const Token& t = p_.peek();
    if (t.kind == Tok::QIdent) return TypeRef{p_.next().text};
    if (t.kind != Tok::Ident) p_.fail(t, "type expression");
    if (const auto kind = base_kind_from(t.text)) {
      p_.next();
      const Token& op = p_.peek();
      if (op.kind == Tok::Punct) {
        if (const auto cmp = comparison_from(op.text)) {
          p_.next();
          return ConstrainedBase{*kind, *cmp, p_.value()};
        }
      }
      return BaseType{*kind};
    }
    if (t.text == "record") {
      p_.next();
      p_.expect("(");
      RecordType r;
      if (!p_.accept(")")) {
        do {
          std::string name = p_.label("field name");
          p_.expect(":");
          r.fields.push_back(FieldDecl{std::move(name), p_.label("field type")});
        } while (p_.accept(","));
        p_.expect(")");
      }
      return r;
    }
    if (t.text == "list") {
      p_.next();
      p_.expect("<");
      ListType l;
      l.element = p_.label("element type");
      p_.expect(">");
      p_.expect("[");
      l.count = p_.multiplicity();
      p_.expect("]");
      return l;
    }
    if (t.text == "union") {
      p_.next();
      p_.expect("(");
      UnionType u;
      do {
        u.alternatives.push_back(p_.label("alternative type"));
      } while (p_.accept("|"));
      p_.expect(")");
      return u;
    }
    if (t.text == "any") {
      p_.next();
      return AnyType{};
    }
    return TypeRef{p_.next().text};
  }

  std::vector<Endpoint> endpoints() {
    p_.expect("(");
    std::vector<Endpoint> out;
    if (p_.accept(")")) return out;
    do {
      Endpoint ep;
      ep.node_type = p_.label("node type");
      p_.expect("[");
      ep.multiplicity = p_.multiplicity();
      p_.expect("]");
      out.push_back(std::move(ep));
    } while (p_.accept(","));
    p_.expect(")");
    return out;
  }

  Constraint constraint() {
    const Token& t = p_.peek();
    if (t.kind != Tok::Ident) p_.fail(t, "'uniquePer', 'uniqueProp', 'pred' or 'acyclic'");
    const std::string kind = t.text;
    if (kind == "uniquePer") {
      p_.next();
      p_.expect("(");
      UniquePer c;
      c.target = p_.label("target type");
      p_.expect(";");
      do {
        c.key.push_back(p_.label("key node type"));
      } while (p_.accept(","));
      p_.expect(")");
      return c;
    }
    if (kind == "uniqueProp") {
      p_.next();
      p_.expect("(");
      UniqueProperty c;
      c.node_type = p_.label("node type");
      p_.expect(",");
      c.path = p_.path();
      p_.expect(")");
      return c;
    }
    if (kind == "pred") {
      p_.next();
      p_.expect("(");
      PropertyPredicate c;
      c.target = p_.label("target type");
      p_.expect(",");
      c.path = p_.path();
      const Token& op = p_.peek();
      const auto cmp = op.kind == Tok::Punct ? comparison_from(op.text) : std::nullopt;
      if (!cmp) p_.fail(op, "comparison operator");
      p_.next();
      c.op = *cmp;
      c.literal = p_.value();
      p_.expect(")");
      return c;
    }
    if (kind == "acyclic") {
      p_.next();
      p_.expect("(");
      Acyclic c{p_.label("edge type")};
      p_.expect(")");
      return c;
    }
    p_.fail(t, "'uniquePer', 'uniqueProp', 'pred' or 'acyclic'");
  }

  void group(TypedGraphSchema& schema, SourceLocation loc) {
    GroupDecl g;
    g.label = p_.label("group name");
    p_.expect("{");
    do {
      g.members.push_back(p_.label("member node type"));
    } while (p_.accept(","));
    std::vector<AggregateSpec> aggs;
    if (p_.is_keyword("aggregate")) {
      p_.next();
      while (!p_.is_punct("}")) {
        AggregateSpec a;
        a.group = g.label;
        a.name = p_.label("aggregate name");
        p_.expect("=");
        a.def = aggregate();
        aggs.push_back(std::move(a));
      }
    }
    p_.expect("}");
    remember(g.label, loc);
    schema.add_group(std::move(g));
    for (auto& a : aggs) schema.add_aggregate(std::move(a));
  }

  AggregateDef aggregate() {
    const Token& t = p_.peek();
    if (t.kind != Tok::Ident) p_.fail(t, "'count', 'countEdges' or 'sum'");
    const std::string fn = t.text;
    if (fn != "count" && fn != "countEdges" && fn != "sum") p_.fail(t, "'count', 'countEdges' or 'sum'");
    p_.next();
    p_.expect("(");
    std::string target = p_.label("type");
    AggregateDef def;
    if (fn == "count") {
      def = CountNodes{std::move(target)};
    } else if (fn == "countEdges") {
      def = CountEdges{std::move(target)};
    } else {
      p_.expect(".");
      def = SumField{std::move(target), p_.path()};
    }
    p_.expect(")");
    return def;
  }

  Parser& p_;
  std::map<std::string, SourceLocation> locations_;
  SourceLocation schema_location_;
};

ParseDiagnostic from_syntax(const SyntaxError& e) {
  return ParseDiagnostic{Severity::Error, e.loc, e.message, e.expected};
}

ParseResult<TypedGraphSchema> parse_schema_impl(std::string_view text, bool check) {
  ParseResult<TypedGraphSchema> result;
  try {
    Parser p(Lexer(text).run());
    SchemaParser sp(p);
    TypedGraphSchema schema = sp.run();
    if (check) {
      for (const auto& v : schema.validate().sorted()) {
        result.diagnostics.push_back(ParseDiagnostic{
            v.severity, sp.locate(v.subject),
            std::string(to_string(v.code)) + " " + v.subject + ": " + v.detail, ""});
      }
      const bool bad = std::any_of(result.diagnostics.begin(), result.diagnostics.end(),
                                   [](const ParseDiagnostic& d) { return d.severity == Severity::Error; });
      if (bad) return result;
    }
    result.value = std::move(schema);
  } catch (const SyntaxError& e) {
    result.diagnostics.push_back(from_syntax(e));
  }
  return result;
}

void print_type_expr(std::string& out, const DataTypeDef& def) {
  std::visit(
      [&out](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, BaseType>) {
          out += to_string(x.kind);
        } else if constexpr (std::is_same_v<T, ConstrainedBase>) {
          out += to_string(x.kind);
          out += ' ';
          out += to_string(x.op);
          out += ' ';
          out += to_literal(x.literal);
        } else if constexpr (std::is_same_v<T, RecordType>) {
          out += "record(";
          for (std::size_t i = 0; i < x.fields.size(); ++i) {
            if (i) out += ", ";
            out += quote_label(x.fields[i].name) + ": " + quote_label(x.fields[i].type);
          }
          out += ')';
        } else if constexpr (std::is_same_v<T, ListType>) {
          out += "list<" + quote_label(x.element) + ">[" + x.count.to_string() + "]";
        } else if constexpr (std::is_same_v<T, UnionType>) {
          out += "union(";
          for (std::size_t i = 0; i < x.alternatives.size(); ++i) {
            if (i) out += " | ";
            out += quote_label(x.alternatives[i]);
          }
          out += ')';
        } else if constexpr (std::is_same_v<T, AnyType>) {
          out += "any";
        } else {
          out += type_ref(x.target);
        }
      },
      def);
}

void print_endpoints(std::string& out, const std::vector<Endpoint>& eps) {
  out += '(';
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (i) out += ", ";
    out += quote_label(eps[i].node_type) + "[" + eps[i].multiplicity.to_string() + "]";
  }
  out += ')';
}

std::string print_path(const FieldPath& path) {
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += '.';
    out += quote_label(path[i]);
  }
  return out;
}

std::string print_constraint(const Constraint& c) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, UniquePer>) {
          std::string out = "uniquePer(" + quote_label(x.target) + ";";
          for (std::size_t i = 0; i < x.key.size(); ++i) out += (i ? ", " : " ") + quote_label(x.key[i]);
          return out + ")";
        } else if constexpr (std::is_same_v<T, UniqueProperty>) {
          return "uniqueProp(" + quote_label(x.node_type) + ", " + print_path(x.path) + ")";
        } else if constexpr (std::is_same_v<T, PropertyPredicate>) {
          return "pred(" + quote_label(x.target) + ", " + print_path(x.path) + " " + std::string(to_string(x.op)) +
                 " " + to_literal(x.literal) + ")";
        } else {
          return "acyclic(" + quote_label(x.edge_type) + ")";
        }
      },
      c);
}

std::string print_aggregate(const AggregateDef& def) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, CountNodes>) {
          return "count(" + quote_label(x.node_type) + ")";
        } else if constexpr (std::is_same_v<T, CountEdges>) {
          return "countEdges(" + quote_label(x.edge_type) + ")";
        } else {
          return "sum(" + quote_label(x.node_type) + "." + print_path(x.path) + ")";
        }
      },
      def);
}

}  // namespace

std::string format_diagnostic(const ParseDiagnostic& d) {
  std::string out = std::to_string(d.location.line) + ":" + std::to_string(d.location.column) + ": " +
                    (d.severity == Severity::Error ? "error: " : "warning: ") + d.message;
  if (!d.expected.empty()) out += " (expected " + d.expected + ")";
  return out;
}

ParseResult<TypedGraphSchema> parse_schema(std::string_view text) { return parse_schema_impl(text, true); }

ParseResult<TypedGraphSchema> parse_schema_unchecked(std::string_view text) {
  return parse_schema_impl(text, false);
}

std::string print_schema(const TypedGraphSchema& schema) {
  std::string out = "schema " + quote_label(schema.name()) + " {\n";
  for (const auto& e : schema.registry().entries()) {
    out += "  type " + quote_label(e.label) + " = ";
    print_type_expr(out, e.def);
    out += '\n';
  }
  for (const auto& n : schema.node_types()) {
    out += "  node " + quote_label(n.label) + " : " + quote_label(n.payload) + "\n";
  }
  for (const auto& e : schema.edge_types()) {
    out += "  edge " + quote_label(e.label);
    if (e.property) out += " prop " + quote_label(*e.property);
    out += " tail ";
    print_endpoints(out, e.tail);
    out += " head ";
    print_endpoints(out, e.head);
    out += '\n';
  }
  for (const auto& c : schema.constraints()) out += "  constraint " + print_constraint(c) + "\n";
  for (const auto& g : schema.groups()) {
    out += "  group " + quote_label(g.label) + " {\n    ";
    for (std::size_t i = 0; i < g.members.size(); ++i) out += (i ? ", " : "") + quote_label(g.members[i]);
    out += '\n';
    bool first = true;
    for (const auto& a : schema.aggregates()) {
      if (a.group != g.label) continue;
      if (first) out += "    aggregate\n";
      first = false;
      out += "      " + quote_label(a.name) + " = " + print_aggregate(a.def) + "\n";
    }
    out += "  }\n";
  }
  out += "}\n";
  return out;
}

ParseResult<ParsedInstance> parse_instance(std::string_view text, const TypedGraphSchema& schema) {
  ParseResult<ParsedInstance> result;
  std::vector<ParseDiagnostic> semantic;
  const auto problem = [&](SourceLocation loc, std::string message) {
    semantic.push_back(ParseDiagnostic{Severity::Error, loc, std::move(message), ""});
  };
  try {
    Parser p(Lexer(text).run());
    ParsedInstance inst;
    p.expect_keyword("graph");
    inst.graph_name = p.label("graph name");
    p.expect_keyword("uses");
    const Token& schema_tok = p.peek();
    inst.schema_name = p.label("schema name");
    if (inst.schema_name != schema.name()) {
      semantic.push_back(ParseDiagnostic{Severity::Warning, schema_tok.loc,
                                         "instance names schema '" + inst.schema_name + "' but is read against '" +
                                             schema.name() + "'",
                                         ""});
    }
    p.expect("{");
    std::map<std::string, Placeholder> symbols;
    while (!p.accept("}")) {
      const Token& kw = p.peek();
      const SourceLocation loc = kw.loc;
      if (kw.kind == Tok::Ident && kw.text == "n") {
        p.next();
        std::string sym = p.label("node symbol");
        p.expect(":");
        const Token& type_tok = p.peek();
        std::string type = p.label("node type");
        p.expect("=");
        Value v = p.value();
        if (!schema.node_type(type)) {
          problem(type_tok.loc, "UnknownTypeLabel '" + type + "' is not a node type");
        }
        if (symbols.contains(sym)) {
          problem(loc, "DuplicateSymbol '" + sym + "' already names a node");
          continue;
        }
        symbols.emplace(sym, inst.batch.insert_node(type, std::move(v), sym));
        inst.symbols.push_back(std::move(sym));
      } else if (kw.kind == Tok::Ident && kw.text == "e") {
        p.next();
        p.expect(":");
        const Token& type_tok = p.peek();
        std::string type = p.label("edge type");
        p.expect("(");
        std::vector<std::pair<std::string, SourceLocation>> tail_syms, head_syms;
        if (!p.is_punct("->")) {
          do {
            const SourceLocation sloc = p.peek().loc;
            tail_syms.emplace_back(p.label("node symbol"), sloc);
          } while (p.accept(","));
        }
        if (p.accept("->")) {
          do {
            const SourceLocation sloc = p.peek().loc;
            head_syms.emplace_back(p.label("node symbol"), sloc);
          } while (p.accept(","));
        }
        p.expect(")");
        Value v = Value::empty_record();
        if (p.accept("=")) v = p.value();
        const EdgeType* et = schema.edge_type(type);
        if (!et) {
          problem(type_tok.loc, "UnknownTypeLabel '" + type + "' is not an edge type");
          continue;
        }
        if (tail_syms.size() != et->tail.size() || head_syms.size() != et->head.size()) {
          problem(type_tok.loc, "edge '" + type + "' takes " + std::to_string(et->tail.size()) + " tail and " +
                                    std::to_string(et->head.size()) + " head endpoints, got " +
                                    std::to_string(tail_syms.size()) + " and " + std::to_string(head_syms.size()));
          continue;
        }
        std::map<TypeLabel, NodeRef> tail, head;
        bool resolved = true;
        const auto bind = [&](const auto& syms, const std::vector<Endpoint>& eps, auto& out) {
          for (std::size_t i = 0; i < syms.size(); ++i) {
            const auto it = symbols.find(syms[i].first);
            if (it == symbols.end()) {
              problem(syms[i].second, "undefined node symbol '" + syms[i].first + "'");
              resolved = false;
              continue;
            }
            out.emplace(eps[i].node_type, it->second);
          }
        };
        bind(tail_syms, et->tail, tail);
        bind(head_syms, et->head, head);
        if (resolved) inst.batch.insert_edge(type, std::move(tail), std::move(head), std::move(v));
      } else {
        p.fail(kw, "'n', 'e' or '}'");
      }
    }
    if (!p.at_end()) p.fail(p.peek(), "end of input");
    result.diagnostics = std::move(semantic);
    const bool bad = std::any_of(result.diagnostics.begin(), result.diagnostics.end(),
                                 [](const ParseDiagnostic& d) { return d.severity == Severity::Error; });
    if (!bad) result.value = std::move(inst);
  } catch (const SyntaxError& e) {
    result.diagnostics = std::move(semantic);
    result.diagnostics.push_back(from_syntax(e));
  }
  return result;
}

std::string print_instance(const TypedGraph& graph, std::string_view graph_name) {
  std::set<std::string> taken;
  for (const auto& [id, n] : graph.nodes()) {
    if (!n.symbol.empty()) taken.insert(n.symbol);
  }
  std::map<NodeId, std::string> names;
  for (const auto& [id, n] : graph.nodes()) {
    if (!n.symbol.empty()) {
      names.emplace(id, n.symbol);
      continue;
    }
    std::string sym = "_n" + std::to_string(raw(id));
    while (taken.contains(sym)) sym += "_";
    taken.insert(sym);
    names.emplace(id, std::move(sym));
  }
  const auto name_of = [&](NodeId id) {
    const auto it = names.find(id);
    return it != names.end() ? quote_label(it->second) : quote_label("_n" + std::to_string(raw(id)));
  };

  const auto& schema = graph.schema();
  std::string out = "graph " + quote_label(graph_name) + " uses " + quote_label(schema.name()) + " {\n";
  for (const auto& [id, n] : graph.nodes()) {
    out += "  n " + name_of(id) + " : " + quote_label(n.type_label) + " = " + to_literal(n.value) + "\n";
  }
  for (const auto& [id, e] : graph.edges()) {
    out += "  e : " + quote_label(e.type_label) + "(";
    const EdgeType* et = schema.edge_type(e.type_label);
    const auto side = [&](Side s) {
      std::string part;
      const auto& slots = e.side(s);
      if (et) {
        for (const auto& ep : et->side(s)) {
          const auto it = slots.find(ep.node_type);
          if (it == slots.end()) continue;
          part += (part.empty() ? "" : ", ") + name_of(it->second);
        }
      } else {
        for (const auto& [slot, n] : slots) part += (part.empty() ? "" : ", ") + name_of(n);
      }
      return part;
    };
    out += side(Side::Tail);
    const std::string head = side(Side::Head);
    if (!head.empty()) out += " -> " + head;
    out += ")";
    const bool plain = (!et || !et->property) && e.value == Value::empty_record();
    if (!plain) out += " = " + to_literal(e.value);
    out += '\n';
  }
  out += "}\n";
  return out;
}

ParseResult<Value> parse_value(std::string_view text) {
  ParseResult<Value> result;
  try {
    Parser p(Lexer(text).run());
    Value v = p.value();
    if (!p.at_end()) p.fail(p.peek(), "end of input");
    result.value = std::move(v);
  } catch (const SyntaxError& e) {
    result.diagnostics.push_back(from_syntax(e));
  }
  return result;
}

std::string print_violations(const ViolationReport& report) {
  if (report.empty()) return "OK (0 violations)\n";
  std::string out;
  for (const auto& v : report.sorted()) {
    out += to_string(v.code);
    if (v.severity == Severity::Warning) out += " (warning)";
    out += " " + v.subject + ": " + v.detail + "\n";
  }
  if (report.ok()) out += "OK (" + std::to_string(report.warning_count()) + " warnings)\n";
  return out;
}

}  // namespace tgm
