#include "oracles.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace tgm::testing {

bool inhabited_within(const TypeRegistry& registry, const TypeLabel& label, int depth) {
  if (TypeRegistry::is_builtin(label)) return true;
  if (depth <= 0) return false;
  const DataTypeDef* def = registry.find(label);
  if (!def) return false;
  const auto sub = [&](const TypeLabel& l) { return inhabited_within(registry, l, depth - 1); };
  if (const auto* r = std::get_if<RecordType>(def)) {
    for (const auto& f : r->fields) {
      if (!sub(f.type)) return false;
    }
    return true;
  }
  if (const auto* l = std::get_if<ListType>(def)) return l->count.min == 0 || sub(l->element);
  if (const auto* u = std::get_if<UnionType>(def)) {
    for (const auto& a : u->alternatives) {
      if (sub(a)) return true;
    }
    return false;
  }
  if (const auto* t = std::get_if<TypeRef>(def)) return sub(t->target);
  return true;
}

std::vector<SlotCount> cardinality_failures(const TypedGraph& graph) {
  std::vector<SlotCount> out;
  for (const auto& [nid, node] : graph.nodes()) {
    for (const auto& et : graph.schema().edge_types()) {
      for (const Side side : {Side::Tail, Side::Head}) {
        for (const auto& ep : et.side(side)) {
          if (ep.node_type != node.type_label) continue;
          std::uint64_t count = 0;
          for (const auto& [eid, edge] : graph.edges()) {
            if (edge.type_label != et.label) continue;
            const auto& slots = edge.side(side);
            const auto it = slots.find(ep.node_type);
            if (it != slots.end() && it->second == nid) ++count;
          }
          if (!ep.multiplicity.admits(count)) out.push_back({nid, et.label, side, count, ep.multiplicity});
        }
      }
    }
  }
  return out;
}

namespace {

using Key = std::vector<std::vector<NodeId>>;

Key node_key(const TypedGraph& graph, NodeId id, const std::vector<TypeLabel>& key_types) {
  std::vector<std::set<NodeId>> parts(key_types.size());
  for (const auto& [eid, e] : graph.edges()) {
    bool touches = false;
    for (const auto* side : {&e.tail, &e.head}) {
      for (const auto& [slot, n] : *side) touches = touches || n == id;
    }
    if (!touches) continue;
    for (const auto* side : {&e.tail, &e.head}) {
      for (const auto& [slot, n] : *side) {
        if (n == id) continue;
        const auto* other = graph.node(n);
        for (std::size_t k = 0; k < key_types.size(); ++k) {
          if (other && other->type_label == key_types[k]) parts[k].insert(n);
        }
      }
    }
  }
  Key key;
  for (const auto& p : parts) key.emplace_back(p.begin(), p.end());
  return key;
}

Key edge_key(const InstanceEdge& e, const std::vector<TypeLabel>& key_types) {
  Key key(key_types.size());
  for (std::size_t k = 0; k < key_types.size(); ++k) {
    for (const auto* side : {&e.tail, &e.head}) {
      if (const auto it = side->find(key_types[k]); it != side->end()) key[k].push_back(it->second);
    }
  }
  return key;
}

}  // namespace

std::size_t unique_per_clashes(const TypedGraph& graph, const UniquePer& c) {
  std::vector<Key> keys;
  if (graph.schema().node_type(c.target)) {
    for (const auto& [id, n] : graph.nodes()) {
      if (n.type_label == c.target) keys.push_back(node_key(graph, id, c.key));
    }
  } else {
    for (const auto& [id, e] : graph.edges()) {
      if (e.type_label == c.target) keys.push_back(edge_key(e, c.key));
    }
  }
  std::erase_if(keys, [](const Key& k) {
    return std::any_of(k.begin(), k.end(), [](const auto& part) { return part.empty(); });
  });
  std::size_t clashes = 0;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    for (std::size_t j = i + 1; j < keys.size(); ++j) {
      if (keys[i] == keys[j]) ++clashes;
    }
  }
  return clashes;
}

}  // namespace tgm::testing
