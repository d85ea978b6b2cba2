#include "tgm/abstraction.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "tgm/error.hpp"

namespace tgm {

Partition Partition::from_schema(const TypedGraphSchema& schema) { return Partition{schema.groups()}; }

const GroupDecl* Partition::find(std::string_view group) const {
  const auto it = std::find_if(groups.begin(), groups.end(), [&](const GroupDecl& g) { return g.label == group; });
  return it == groups.end() ? nullptr : &*it;
}

const GroupDecl* Partition::group_of(std::string_view node_type) const {
  for (const auto& g : groups) {
    if (std::find(g.members.begin(), g.members.end(), node_type) != g.members.end()) return &g;
  }
  return nullptr;
}

namespace {

std::optional<BaseKind> numeric_kind(const TypedGraphSchema& schema, const TypeLabel& node_type, const FieldPath& path) {
  const auto t = schema.path_type(node_type, path);
  if (!t) return std::nullopt;
  const DataTypeDef* def = schema.registry().resolve(*t);
  if (!def) return std::nullopt;
  std::optional<BaseKind> kind;
  if (const auto* b = std::get_if<BaseType>(def)) kind = b->kind;
  if (const auto* c = std::get_if<ConstrainedBase>(def)) kind = c->kind;
  if (kind == BaseKind::Int || kind == BaseKind::Decimal || kind == BaseKind::Money) return kind;
  return std::nullopt;
}

TypeLabel aggregate_type(const TypedGraphSchema& schema, const AggregateDef& def) {
  if (const auto* s = std::get_if<SumField>(&def)) {
    return std::string(to_string(*numeric_kind(schema, s->node_type, s->path)));
  }
  return "int";
}

}  // namespace

void validate_partition(const TypedGraphSchema& schema, const Partition& partition,
                        const std::vector<AggregateSpec>& aggregates) {
  if (partition.groups.empty()) throw Error(ErrorCode::InvalidPartition, "partition has no groups");
  std::set<TypeLabel> labels;
  std::map<TypeLabel, TypeLabel> owner;
  for (const auto& g : partition.groups) {
    if (!labels.insert(g.label).second) {
      throw Error(ErrorCode::InvalidPartition, "group '" + g.label + "' declared twice");
    }
    if (g.members.empty()) throw Error(ErrorCode::InvalidPartition, "group '" + g.label + "' is empty");
    for (const auto& m : g.members) {
      if (!schema.node_type(m)) {
        throw Error(ErrorCode::UnknownLabel, "group '" + g.label + "' names unknown node type '" + m + "'");
      }
      const auto [it, fresh] = owner.emplace(m, g.label);
      if (!fresh) {
        throw Error(ErrorCode::InvalidPartition,
                    "node type '" + m + "' is in both '" + it->second + "' and '" + g.label + "'");
      }
    }
  }
  for (const auto& n : schema.node_types()) {
    if (!owner.contains(n.label)) {
      throw Error(ErrorCode::InvalidPartition, "node type '" + n.label + "' belongs to no group");
    }
  }
  std::set<std::pair<TypeLabel, std::string>> names;
  for (const auto& a : aggregates) {
    const GroupDecl* g = partition.find(a.group);
    if (!g) throw Error(ErrorCode::UnknownLabel, "aggregate '" + a.name + "' names unknown group '" + a.group + "'");
    if (a.name.empty() || !names.emplace(a.group, a.name).second) {
      throw Error(ErrorCode::InvalidPartition, "aggregate name '" + a.name + "' empty or repeated in '" + a.group + "'");
    }
    const auto member = [&](const TypeLabel& t) {
      return std::find(g->members.begin(), g->members.end(), t) != g->members.end();
    };
    std::visit(
        [&](const auto& d) {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, CountEdges>) {
            const EdgeType* e = schema.edge_type(d.edge_type);
            const bool inside =
                e && std::any_of(g->members.begin(), g->members.end(), [&](const TypeLabel& m) { return e->touches(m); });
            if (!inside) {
              throw Error(ErrorCode::UnknownLabel,
                          "aggregate '" + a.name + "': '" + d.edge_type + "' is not an edge type of the group");
            }
          } else {
            if (!member(d.node_type)) {
              throw Error(ErrorCode::UnknownLabel,
                          "aggregate '" + a.name + "': '" + d.node_type + "' is not a member of '" + a.group + "'");
            }
            if constexpr (std::is_same_v<T, SumField>) {
              if (!numeric_kind(schema, d.node_type, d.path)) {
                throw Error(ErrorCode::UnknownLabel, "aggregate '" + a.name + "': '" + join_path(d.path) +
                                                         "' is not a numeric field of '" + d.node_type + "'");
              }
            }
          }
        },
        a.def);
  }
}

SchemaAbstraction abstract_schema_detailed(const TypedGraphSchema& schema, const Partition& partition,
                                           const std::vector<AggregateSpec>& aggregates) {
  validate_partition(schema, partition, aggregates);
  SchemaAbstraction out{TypedGraphSchema(schema.name() + "_abstract"), {}};
  TypedGraphSchema& abs = out.schema;

  for (const auto& g : partition.groups) {
    RecordType payload;
    for (const auto& a : aggregates) {
      if (a.group == g.label) payload.fields.push_back(FieldDecl{a.name, aggregate_type(schema, a.def)});
    }
    abs.define_type(g.label, std::move(payload));
    abs.add_node_type(g.label, g.label);
  }

  struct Pending {
    CombinedEdge edge;
    std::vector<Multiplicity> tail, head;
  };
  std::vector<Pending> pending;
  std::map<std::pair<TypeLabel, TypeLabel>, std::size_t> by_pair;
  const auto group_of = [&](const TypeLabel& t) { return partition.group_of(t)->label; };

  for (const auto& e : schema.edge_types()) {
    for (const auto& t : e.tail) {
      for (const auto& h : e.head) {
        const TypeLabel gt = group_of(t.node_type);
        const TypeLabel gh = group_of(h.node_type);
        if (gt == gh) continue;
        const auto key = std::minmax(gt, gh);
        auto [it, fresh] = by_pair.emplace(std::pair{key.first, key.second}, pending.size());
        if (fresh) pending.push_back(Pending{CombinedEdge{{}, gt, gh, {}}, {}, {}});
        Pending& p = pending[it->second];
        if (p.edge.sources.empty() || p.edge.sources.back() != e.label) p.edge.sources.push_back(e.label);
        const bool same_way = p.edge.tail_group == gt;
        (same_way ? p.tail : p.head).push_back(t.multiplicity);
        (same_way ? p.head : p.tail).push_back(h.multiplicity);
      }
    }
  }

  std::set<TypeLabel> used;
  for (const auto& g : partition.groups) used.insert(g.label);
  for (auto& p : pending) {
    std::string label;
    for (const auto& s : p.edge.sources) label += (label.empty() ? "" : "/") + s;
    if (used.contains(label)) label += "[" + p.edge.tail_group + "," + p.edge.head_group + "]";
    used.insert(label);
    p.edge.label = label;
    // The hyper-node instance carries at most one combined edge, which may
    // be absent entirely, so no lower bound survives the condensation.
    Multiplicity mt = most_general_multiplicity(p.tail);
    Multiplicity mh = most_general_multiplicity(p.head);
    mt.min = 0;
    mh.min = 0;
    abs.add_edge_type(EdgeType{label, std::nullopt, {Endpoint{p.edge.tail_group, mt}}, {Endpoint{p.edge.head_group, mh}}});
    out.combined.push_back(std::move(p.edge));
  }
  return out;
}

TypedGraphSchema abstract_schema(const TypedGraphSchema& schema, const Partition& partition,
                                 const std::vector<AggregateSpec>& aggregates) {
  return abstract_schema_detailed(schema, partition, aggregates).schema;
}

TypedGraph abstract_instance(const TypedGraph& graph, const Partition& partition,
                             const std::vector<AggregateSpec>& aggregates) {
  const TypedGraphSchema& schema = graph.schema();
  SchemaAbstraction abs = abstract_schema_detailed(schema, partition, aggregates);

  std::map<TypeLabel, std::int64_t> node_counts, edge_counts;
  for (const auto& [id, n] : graph.nodes()) ++node_counts[n.type_label];
  for (const auto& [id, e] : graph.edges()) ++edge_counts[e.type_label];

  const auto compute = [&](const AggregateDef& def) -> Value {
    return std::visit(
        [&](const auto& d) -> Value {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, CountNodes>) {
            return Value::integer(node_counts[d.node_type]);
          } else if constexpr (std::is_same_v<T, CountEdges>) {
            return Value::integer(edge_counts[d.edge_type]);
          } else {
            const bool integral = numeric_kind(schema, d.node_type, d.path) == BaseKind::Int;
            std::int64_t total = 0;
            for (const auto& [id, n] : graph.nodes()) {
              if (n.type_label != d.node_type) continue;
              const Value* v = n.value.at_path(d.path);
              if (!v) continue;
              if (v->is_int()) total += integral ? v->as_int() : Decimal::from_int(v->as_int()).units;
              if (v->is_decimal()) total += v->as_decimal().units;
            }
            return integral ? Value::integer(total) : Value::decimal(Decimal{total});
          }
        },
        def);
  };

  MutationBatch batch;
  std::map<TypeLabel, Placeholder> group_nodes;
  for (const auto& g : partition.groups) {
    std::vector<FieldValue> fields;
    for (const auto& a : aggregates) {
      if (a.group == g.label) fields.push_back(FieldValue{a.name, compute(a.def)});
    }
    group_nodes.emplace(g.label, batch.insert_node(g.label, Value::record(std::move(fields)), g.label));
  }
  for (const auto& c : abs.combined) {
    const bool present = std::any_of(c.sources.begin(), c.sources.end(),
                                     [&](const TypeLabel& s) { return edge_counts[s] > 0; });
    if (!present) continue;
    batch.insert_edge(c.label, {{c.tail_group, group_nodes.at(c.tail_group)}},
                      {{c.head_group, group_nodes.at(c.head_group)}});
  }

  auto result = commit(new_graph(std::make_shared<const TypedGraphSchema>(std::move(abs.schema))), batch);
  if (!result.ok()) {
    throw Error(ErrorCode::InvalidSchema, "abstracted instance does not conform: " +
                                              std::string(to_string(result.report.sorted().front().code)));
  }
  return std::move(*result.graph);
}

}  // namespace tgm
