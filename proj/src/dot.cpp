#include "tgm/dot.hpp"

#include <set>

namespace tgm {

namespace {

std::string quoted(std::string_view s) {
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

/// Text for a label that is wrapped in quotes verbatim and may carry \l.
std::string label_text(std::string_view s, bool record) {
  std::string out;
  for (const char c : s) {
    if (c == '\n') {
      out += "\\n";
      continue;
    }
    if (c == '"' || c == '\\' || (record && std::string_view("{}|<>").find(c) != std::string_view::npos)) {
      out.push_back('\\');
    }
    out.push_back(c);
  }
  return out;
}

std::string record_text(std::string_view s) { return label_text(s, true); }

std::string node_id(std::string_view label) { return quoted("n:" + std::string(label)); }

std::string attributes(const TypeRegistry& registry, const TypeLabel& type) {
  const DataTypeDef* def = registry.resolve(type);
  const auto* rec = def ? std::get_if<RecordType>(def) : nullptr;
  if (!rec) return record_text(": " + type) + "\\l";
  std::string out;
  for (const auto& f : rec->fields) out += record_text(f.name + " : " + f.type) + "\\l";
  return out;
}

std::string record_node(const std::string& id, const std::string& title, const std::string& body,
                        std::string_view extra = {}) {
  std::string out = "  " + id + " [label=\"{" + record_text(title) + "|" + body + "}\"";
  if (!extra.empty()) out += ", " + std::string(extra);
  return out + "];\n";
}

}  // namespace

std::string export_dot(const TypedGraphSchema& schema) {
  const auto& reg = schema.registry();
  std::string out = "digraph " + quoted(schema.name()) + " {\n";
  out += "  rankdir=LR;\n";
  out += "  node [shape=record, fontname=\"Helvetica\", fontsize=10];\n";
  out += "  edge [fontname=\"Helvetica\", fontsize=9];\n";

  std::set<TypeLabel> clustered;
  for (const auto& g : schema.groups()) {
    out += "  subgraph " + quoted("cluster_" + g.label) + " {\n";
    out += "    label=" + quoted(g.label) + ";\n    style=dashed;\n";
    for (const auto& m : g.members) {
      if (const auto* n = schema.node_type(m); n && clustered.insert(m).second) {
        out += "  " + record_node(node_id(m), m, attributes(reg, n->payload));
      }
    }
    out += "  }\n";
  }
  for (const auto& n : schema.node_types()) {
    if (!clustered.contains(n.label)) out += record_node(node_id(n.label), n.label, attributes(reg, n.payload));
  }

  for (const auto& e : schema.edge_types()) {
    const bool binary = e.tail.size() == 1 && e.head.size() == 1;
    if (binary && !e.property) {
      out += "  " + node_id(e.tail[0].node_type) + " -> " + node_id(e.head[0].node_type) +
             " [label=" + quoted(e.label) + ", taillabel=" + quoted(e.head[0].multiplicity.to_string()) +
             ", headlabel=" + quoted(e.tail[0].multiplicity.to_string()) + "];\n";
      continue;
    }
    const std::string junction = quoted("e:" + e.label);
    if (binary) {
      out += "  " + junction + " [shape=point, width=0.05];\n";
      out += "  " + node_id(e.tail[0].node_type) + " -> " + junction + " [arrowhead=none, taillabel=" +
             quoted(e.head[0].multiplicity.to_string()) + "];\n";
      out += "  " + junction + " -> " + node_id(e.head[0].node_type) + " [label=" + quoted(e.label) +
             ", headlabel=" + quoted(e.tail[0].multiplicity.to_string()) + "];\n";
    } else {
      out += "  " + junction + " [shape=diamond, label=" + quoted(e.label) + "];\n";
      for (const auto& ep : e.tail) {
        out += "  " + node_id(ep.node_type) + " -> " + junction + " [arrowhead=none, taillabel=" +
               quoted(ep.multiplicity.to_string()) + "];\n";
      }
      for (const auto& ep : e.head) {
        out += "  " + junction + " -> " + node_id(ep.node_type) + " [headlabel=" +
               quoted(ep.multiplicity.to_string()) + "];\n";
      }
    }
    if (e.property) {
      const std::string sat = quoted("p:" + e.label);
      out += record_node(sat, *e.property, attributes(reg, *e.property), "style=dashed");
      out += "  " + junction + " -> " + sat + " [style=dashed, arrowhead=none];\n";
    }
  }

  if (!schema.constraints().empty()) {
    std::string note;
    for (const auto& c : schema.constraints()) note += label_text(describe(c), false) + "\\l";
    out += "  \"constraints\" [shape=note, label=\"" + note + "\"];\n";
  }
  out += "}\n";
  return out;
}

std::string export_dot(const TypedGraph& graph) {
  std::string out = "digraph " + quoted(graph.schema().name()) + " {\n";
  out += "  node [shape=record, fontname=\"Helvetica\", fontsize=10];\n";
  out += "  edge [fontname=\"Helvetica\", fontsize=9];\n";
  const auto id_of = [](NodeId id) { return quoted("#" + std::to_string(raw(id))); };
  for (const auto& [id, n] : graph.nodes()) {
    std::string body;
    if (n.value.is_record()) {
      for (const auto& f : n.value.as_record().fields) body += record_text(f.name + " = " + to_literal(f.value)) + "\\l";
    } else {
      body = record_text(to_literal(n.value)) + "\\l";
    }
    out += record_node(id_of(id), graph.display(id) + " : " + n.type_label, body);
  }
  for (const auto& [id, e] : graph.edges()) {
    const bool plain = e.value == Value::empty_record();
    if (e.tail.size() == 1 && e.head.size() == 1 && plain) {
      out += "  " + id_of(e.tail.begin()->second) + " -> " + id_of(e.head.begin()->second) +
             " [label=" + quoted(e.type_label) + "];\n";
      continue;
    }
    const std::string junction = quoted("e#" + std::to_string(raw(id)));
    std::string label = e.type_label;
    if (!plain) label += "\n" + to_literal(e.value);
    out += "  " + junction + " [shape=diamond, label=" + quoted(label) + "];\n";
    for (const auto& [slot, n] : e.tail) out += "  " + id_of(n) + " -> " + junction + " [arrowhead=none];\n";
    for (const auto& [slot, n] : e.head) out += "  " + junction + " -> " + id_of(n) + ";\n";
  }
  out += "}\n";
  return out;
}

}  // namespace tgm
