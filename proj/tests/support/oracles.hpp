#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tgm/schema.hpp"
#include "tgm/store.hpp"

namespace tgm::testing {

/// Inhabitation by bounded witness search: a value of nesting depth at most
/// `depth` exists. With depth > number of entries this decides finiteness.
bool inhabited_within(const TypeRegistry& registry, const TypeLabel& label, int depth);

struct SlotCount {
  NodeId node;
  TypeLabel edge_type;
  Side side;
  std::uint64_t count;
  Multiplicity allowed;
};

/// Every (node, edge type, slot) whose edge count is outside τ, counting
/// edges by a full scan of the edge table.
std::vector<SlotCount> cardinality_failures(const TypedGraph& graph);

/// Number of pairs of distinct target instances sharing a key, compared
/// pairwise. Node targets key on the adjacent nodes of each key type; keys
/// with an empty part are not compared.
std::size_t unique_per_clashes(const TypedGraph& graph, const UniquePer& c);

}  // namespace tgm::testing
