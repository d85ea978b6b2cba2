#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "tgm/report.hpp"
#include "tgm/schema.hpp"
#include "tgm/value.hpp"

namespace tgm {

enum class NodeId : std::uint64_t {};
enum class EdgeId : std::uint64_t {};

constexpr std::uint64_t raw(NodeId id) noexcept { return static_cast<std::uint64_t>(id); }
constexpr std::uint64_t raw(EdgeId id) noexcept { return static_cast<std::uint64_t>(id); }

struct InstanceNode {
  NodeId id;
  TypeLabel type_label;
  Value value;
  std::string symbol;  // optional user-facing name, unique when present
  bool operator==(const InstanceNode&) const = default;
};

using EndpointMap = std::map<TypeLabel, NodeId>;

struct InstanceEdge {
  EdgeId id;
  TypeLabel type_label;
  Value value;
  EndpointMap tail;
  EndpointMap head;

  const EndpointMap& side(Side s) const { return s == Side::Tail ? tail : head; }
  bool operator==(const InstanceEdge&) const = default;
};

/// Batch-local reference to the n-th node inserted by the same batch.
struct Placeholder {
  std::uint32_t index;
  bool operator==(const Placeholder&) const = default;
};

using NodeRef = std::variant<NodeId, Placeholder>;

struct InsertNode {
  TypeLabel type_label;
  Value value;
  std::string symbol;
};
struct InsertEdge {
  TypeLabel type_label;
  Value value;
  std::map<TypeLabel, NodeRef> tail;
  std::map<TypeLabel, NodeRef> head;
};
struct UpdateNodeValue {
  NodeId id;
  Value value;
};
struct UpdateEdgeValue {
  EdgeId id;
  Value value;
};
struct DeleteNode {
  NodeId id;
};
struct DeleteEdge {
  EdgeId id;
};

using Action = std::variant<InsertNode, InsertEdge, UpdateNodeValue, UpdateEdgeValue, DeleteNode, DeleteEdge>;

/// Ordered staged actions, validated together at commit.
class MutationBatch {
 public:
  Placeholder insert_node(TypeLabel type_label, Value value, std::string symbol = {});
  void insert_edge(TypeLabel type_label, std::map<TypeLabel, NodeRef> tail, std::map<TypeLabel, NodeRef> head,
                   Value value = Value::empty_record());
  void update_node(NodeId id, Value value) { actions_.emplace_back(UpdateNodeValue{id, std::move(value)}); }
  void update_edge(EdgeId id, Value value) { actions_.emplace_back(UpdateEdgeValue{id, std::move(value)}); }
  void delete_node(NodeId id) { actions_.emplace_back(DeleteNode{id}); }
  void delete_edge(EdgeId id) { actions_.emplace_back(DeleteEdge{id}); }
  void push(Action a);

  const std::vector<Action>& actions() const noexcept { return actions_; }
  std::size_t size() const noexcept { return actions_.size(); }
  bool empty() const noexcept { return actions_.empty(); }
  std::uint32_t placeholder_count() const noexcept { return placeholders_; }

 private:
  std::vector<Action> actions_;
  std::uint32_t placeholders_ = 0;
};

enum class Direction { Along, Against };

/// Instance graph bound to a schema. Values are immutable snapshots: commit()
/// produces a new graph and never touches its input.
class TypedGraph {
 public:
  const TypedGraphSchema& schema() const noexcept { return *schema_; }
  std::shared_ptr<const TypedGraphSchema> schema_ptr() const noexcept { return schema_; }

  const std::map<NodeId, InstanceNode>& nodes() const noexcept { return nodes_; }
  const std::map<EdgeId, InstanceEdge>& edges() const noexcept { return edges_; }
  const InstanceNode* node(NodeId id) const noexcept;
  const InstanceEdge* edge(EdgeId id) const noexcept;
  std::optional<NodeId> find_symbol(std::string_view symbol) const;
  /// Edges that reference the node at any endpoint slot.
  const std::set<EdgeId>& incident(NodeId id) const;
  /// Symbol if present, otherwise "#<id>".
  std::string display(NodeId id) const;

  std::uint64_t next_node_id() const noexcept { return next_node_; }
  std::uint64_t next_edge_id() const noexcept { return next_edge_; }

  bool operator==(const TypedGraph& other) const {
    return nodes_ == other.nodes_ && edges_ == other.edges_;
  }

 private:
  explicit TypedGraph(std::shared_ptr<const TypedGraphSchema> schema) : schema_(std::move(schema)) {}

  friend TypedGraph new_graph(std::shared_ptr<const TypedGraphSchema> schema);
  friend TypedGraph new_graph_unchecked(std::shared_ptr<const TypedGraphSchema> schema);
  friend class GraphEditor;

  std::shared_ptr<const TypedGraphSchema> schema_;
  std::map<NodeId, InstanceNode> nodes_;
  std::map<EdgeId, InstanceEdge> edges_;
  std::map<NodeId, std::set<EdgeId>> incidence_;
  std::map<std::string, NodeId, std::less<>> symbols_;
  std::uint64_t next_node_ = 1;
  std::uint64_t next_edge_ = 1;
};

/// Empty graph bound to a schema. Throws InvalidSchema if validation fails.
TypedGraph new_graph(std::shared_ptr<const TypedGraphSchema> schema);
TypedGraph new_graph(const TypedGraphSchema& schema);
/// Binds without validating the schema; for building deliberately broken
/// graphs in tests and diagnostics.
TypedGraph new_graph_unchecked(std::shared_ptr<const TypedGraphSchema> schema);

struct CommitResult {
  std::optional<TypedGraph> graph;  // set iff the batch was accepted
  ViolationReport report;           // errors on rejection, warnings otherwise

  bool ok() const noexcept { return graph.has_value(); }
};

/// Applies the batch to a copy of `graph` and validates every element the
/// batch touched. Requires `graph` itself to be valid (as any committed graph
/// is); on rejection the input graph is returned untouched by construction.
CommitResult commit(const TypedGraph& graph, const MutationBatch& batch);

/// Applies the batch with no validation at all. Unresolvable actions
/// (undefined placeholders, unknown ids) are skipped.
TypedGraph apply_unchecked(const TypedGraph& graph, const MutationBatch& batch);

/// Full revalidation of every invariant from scratch.
ViolationReport check_graph(const TypedGraph& graph);

/// Along: head nodes of `edge_type` edges whose tail holds `node`. Against:
/// tail nodes of edges whose head holds `node`.
std::set<NodeId> neighbors(const TypedGraph& graph, NodeId node, std::string_view edge_type, Direction direction);

/// Transitive closure of against-direction traversal; terminates on cycles.
std::set<NodeId> where_used(const TypedGraph& graph, NodeId node, std::string_view edge_type);

}  // namespace tgm
