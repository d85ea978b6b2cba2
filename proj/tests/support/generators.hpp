#pragma once

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "tgm/schema.hpp"
#include "tgm/store.hpp"

namespace tgm::testing {

using Rng = std::mt19937_64;

int uniform(Rng& rng, int lo, int hi);
bool chance(Rng& rng, double p);

template <class T>
const T& pick(Rng& rng, const std::vector<T>& items) {
  return items[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(items.size()) - 1))];
}

/// Label that is sometimes not an identifier (spaces, quotes, non-ASCII).
std::string odd_label(Rng& rng, const std::string& stem, int index);

Multiplicity random_multiplicity(Rng& rng, std::uint32_t max_min = 2, std::uint32_t max_max = 3);

/// Arbitrary schema for printer/parser round trips; not necessarily valid.
TypedGraphSchema random_schema(Rng& rng);

/// Valid schema whose edge types all have 0..* slots, so that any graph
/// with conforming values commits.
TypedGraphSchema random_open_schema(Rng& rng);

/// Value conforming to `label` in the schema's registry.
Value random_value(const TypeRegistry& registry, const TypeLabel& label, Rng& rng, int depth = 0);

/// Committed graph over an open schema, built in two batches (the second
/// deleting some elements) so that ids are not contiguous.
TypedGraph random_graph(std::shared_ptr<const TypedGraphSchema> schema, Rng& rng, int max_nodes = 12);

}  // namespace tgm::testing
