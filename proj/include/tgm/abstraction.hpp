#pragma once

#include <vector>

#include "tgm/schema.hpp"
#include "tgm/store.hpp"

namespace tgm {

/// Disjoint, total grouping of a schema's node types.
struct Partition {
  std::vector<GroupDecl> groups;

  /// The groups declared in the schema itself.
  static Partition from_schema(const TypedGraphSchema& schema);

  const GroupDecl* find(std::string_view group) const;
  /// Group holding the node type, or nullptr.
  const GroupDecl* group_of(std::string_view node_type) const;
};

/// Throws InvalidPartition (empty, overlapping or non-total groups) or
/// UnknownLabel (members or aggregate references that do not resolve).
void validate_partition(const TypedGraphSchema& schema, const Partition& partition,
                        const std::vector<AggregateSpec>& aggregates);

/// One hyper-edge type of the abstracted schema and the source edge types it
/// stands for, in declaration order.
struct CombinedEdge {
  TypeLabel label;
  TypeLabel tail_group;
  TypeLabel head_group;
  std::vector<TypeLabel> sources;
};

struct SchemaAbstraction {
  TypedGraphSchema schema;
  std::vector<CombinedEdge> combined;
};

/// One node type per group, payload `record(<aggregates>)` under the group's
/// label. Edge types running between two groups collapse into one combined
/// edge per unordered group pair; edges inside a group disappear.
SchemaAbstraction abstract_schema_detailed(const TypedGraphSchema& schema, const Partition& partition,
                                           const std::vector<AggregateSpec>& aggregates);
TypedGraphSchema abstract_schema(const TypedGraphSchema& schema, const Partition& partition,
                                 const std::vector<AggregateSpec>& aggregates);

/// One node per group (symbol = group label) carrying computed aggregates,
/// and one edge per combined edge type that has at least one source edge.
TypedGraph abstract_instance(const TypedGraph& graph, const Partition& partition,
                             const std::vector<AggregateSpec>& aggregates);

}  // namespace tgm
