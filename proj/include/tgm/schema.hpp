#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "tgm/multiplicity.hpp"
#include "tgm/report.hpp"
#include "tgm/types.hpp"

namespace tgm {

using FieldPath = std::vector<std::string>;

std::string join_path(const FieldPath& path);

struct NodeType {
  TypeLabel label;
  TypeLabel payload;
  bool operator==(const NodeType&) const = default;
};

enum class Side { Tail, Head };

std::string_view to_string(Side side);

/// One endpoint slot of an edge type: the node type filling it and how many
/// edges of this type each node of that type participates in at this slot.
struct Endpoint {
  TypeLabel node_type;
  Multiplicity multiplicity;
  bool operator==(const Endpoint&) const = default;
};

/// Directed hyper-edge type. Every listed node type is one slot of each edge
/// instance; a node type may appear once per side (twice for self-loops).
struct EdgeType {
  TypeLabel label;
  std::optional<TypeLabel> property;  // empty record when absent
  std::vector<Endpoint> tail;
  std::vector<Endpoint> head;

  const std::vector<Endpoint>& side(Side s) const { return s == Side::Tail ? tail : head; }
  const Endpoint* endpoint(Side s, std::string_view node_type) const;
  bool touches(std::string_view node_type) const;
  std::size_t arity() const noexcept { return tail.size() + head.size(); }

  bool operator==(const EdgeType&) const = default;
};

/// At most one instance of `target` per combination of key nodes. For an
/// edge-type target the key nodes are the endpoints at the key labels; for a
/// node-type target they are the adjacent nodes of the key types.
struct UniquePer {
  TypeLabel target;
  std::vector<TypeLabel> key;
  bool operator==(const UniquePer&) const = default;
};

/// No two nodes of the type share the value at the path.
struct UniqueProperty {
  TypeLabel node_type;
  FieldPath path;
  bool operator==(const UniqueProperty&) const = default;
};

/// Every node or edge of the target type satisfies `value.path op literal`.
struct PropertyPredicate {
  TypeLabel target;
  FieldPath path;
  Comparison op;
  Value literal;
  bool operator==(const PropertyPredicate&) const = default;
};

/// Instances of a recursive edge type form no directed cycle.
struct Acyclic {
  TypeLabel edge_type;
  bool operator==(const Acyclic&) const = default;
};

using Constraint = std::variant<UniquePer, UniqueProperty, PropertyPredicate, Acyclic>;

std::string describe(const Constraint& c);

struct CountNodes {
  TypeLabel node_type;
  bool operator==(const CountNodes&) const = default;
};
struct CountEdges {
  TypeLabel edge_type;
  bool operator==(const CountEdges&) const = default;
};
struct SumField {
  TypeLabel node_type;
  FieldPath path;
  bool operator==(const SumField&) const = default;
};
using AggregateDef = std::variant<CountNodes, CountEdges, SumField>;

/// Derived property of a group hyper-node, e.g. `#orders = count(CustOrder)`.
struct AggregateSpec {
  TypeLabel group;
  std::string name;
  AggregateDef def;
  bool operator==(const AggregateSpec&) const = default;
};

/// A named set of node types, condensed into one hyper-node by abstraction.
struct GroupDecl {
  TypeLabel label;
  std::vector<TypeLabel> members;
  bool operator==(const GroupDecl&) const = default;
};

class TypedGraphSchema {
 public:
  explicit TypedGraphSchema(std::string name = "schema");

  const std::string& name() const noexcept { return name_; }
  void set_name(std::string name) { name_ = std::move(name); }

  const TypeRegistry& registry() const noexcept { return registry_; }
  void define_type(TypeLabel label, DataTypeDef def) { registry_.define(std::move(label), std::move(def)); }

  void add_node_type(TypeLabel label, TypeLabel payload);
  void add_edge_type(EdgeType edge);
  /// Map form: one multiplicity per participating node type. The key set
  /// must equal tail ∪ head; a self-loop label gets the same interval on
  /// both sides.
  void add_edge_type(TypeLabel label, std::optional<TypeLabel> property, const std::vector<TypeLabel>& tail,
                     const std::vector<TypeLabel>& head, const std::map<TypeLabel, Multiplicity>& multiplicity);
  void add_constraint(Constraint c) { constraints_.push_back(std::move(c)); }
  void add_group(GroupDecl group) { groups_.push_back(std::move(group)); }
  void add_aggregate(AggregateSpec spec) { aggregates_.push_back(std::move(spec)); }

  const NodeType* node_type(std::string_view label) const noexcept;
  const EdgeType* edge_type(std::string_view label) const noexcept;

  const std::vector<NodeType>& node_types() const noexcept { return node_types_; }
  const std::vector<EdgeType>& edge_types() const noexcept { return edge_types_; }
  const std::vector<Constraint>& constraints() const noexcept { return constraints_; }
  const std::vector<GroupDecl>& groups() const noexcept { return groups_; }
  const std::vector<AggregateSpec>& aggregates() const noexcept { return aggregates_; }

  /// Type of the component reached by following `path` from a node or edge
  /// type's payload; nullopt if the path does not resolve through records.
  std::optional<TypeLabel> path_type(std::string_view element_label, const FieldPath& path) const;
  /// Payload type of a node type, or property type of an edge type.
  std::optional<TypeLabel> element_type(std::string_view element_label) const;

  ValidationReport validate() const;

  bool operator==(const TypedGraphSchema& other) const;

 private:
  void validate_constraint(const Constraint& c, ValidationReport& report) const;

  std::string name_;
  TypeRegistry registry_;
  std::vector<NodeType> node_types_;
  std::vector<EdgeType> edge_types_;
  std::vector<Constraint> constraints_;
  std::vector<GroupDecl> groups_;
  std::vector<AggregateSpec> aggregates_;
  std::map<TypeLabel, std::size_t, std::less<>> node_index_;
  std::map<TypeLabel, std::size_t, std::less<>> edge_index_;
};

// Free-function forms mirroring the builder members.
TypedGraphSchema add_node_type(TypedGraphSchema schema, TypeLabel label, TypeLabel payload);
TypedGraphSchema add_edge_type(TypedGraphSchema schema, TypeLabel label, std::optional<TypeLabel> property,
                               const std::vector<TypeLabel>& tail, const std::vector<TypeLabel>& head,
                               const std::map<TypeLabel, Multiplicity>& multiplicity);
TypedGraphSchema add_constraint(TypedGraphSchema schema, Constraint c);
ValidationReport validate_schema(const TypedGraphSchema& schema);

}  // namespace tgm
