#include "tgm/store.hpp"

#include <algorithm>
#include <deque>
#include <functional>

#include "tgm/error.hpp"

namespace tgm {

Placeholder MutationBatch::insert_node(TypeLabel type_label, Value value, std::string symbol) {
  actions_.emplace_back(InsertNode{std::move(type_label), std::move(value), std::move(symbol)});
  return Placeholder{placeholders_++};
}

void MutationBatch::insert_edge(TypeLabel type_label, std::map<TypeLabel, NodeRef> tail,
                                std::map<TypeLabel, NodeRef> head, Value value) {
  actions_.emplace_back(InsertEdge{std::move(type_label), std::move(value), std::move(tail), std::move(head)});
}

void MutationBatch::push(Action a) {
  if (std::holds_alternative<InsertNode>(a)) ++placeholders_;
  actions_.push_back(std::move(a));
}

const InstanceNode* TypedGraph::node(NodeId id) const noexcept {
  const auto it = nodes_.find(id);
  return it == nodes_.end() ? nullptr : &it->second;
}

const InstanceEdge* TypedGraph::edge(EdgeId id) const noexcept {
  const auto it = edges_.find(id);
  return it == edges_.end() ? nullptr : &it->second;
}

std::optional<NodeId> TypedGraph::find_symbol(std::string_view symbol) const {
  const auto it = symbols_.find(symbol);
  if (it == symbols_.end()) return std::nullopt;
  return it->second;
}

const std::set<EdgeId>& TypedGraph::incident(NodeId id) const {
  static const std::set<EdgeId> kNone;
  const auto it = incidence_.find(id);
  return it == incidence_.end() ? kNone : it->second;
}

std::string TypedGraph::display(NodeId id) const {
  const auto* n = node(id);
  if (n && !n->symbol.empty()) return n->symbol;
  return "#" + std::to_string(raw(id));
}

// Raw structural edits; validation is the caller's business.
class GraphEditor {
 public:
  static NodeId add_node(TypedGraph& g, TypeLabel type, Value value, std::string symbol) {
    const NodeId id{g.next_node_++};
    if (!symbol.empty()) g.symbols_.emplace(symbol, id);
    g.nodes_.emplace(id, InstanceNode{id, std::move(type), std::move(value), std::move(symbol)});
    return id;
  }

  static EdgeId add_edge(TypedGraph& g, TypeLabel type, Value value, EndpointMap tail, EndpointMap head) {
    const EdgeId id{g.next_edge_++};
    for (const auto* side : {&tail, &head}) {
      for (const auto& [slot, n] : *side) g.incidence_[n].insert(id);
    }
    g.edges_.emplace(id, InstanceEdge{id, std::move(type), std::move(value), std::move(tail), std::move(head)});
    return id;
  }

  static bool set_node_value(TypedGraph& g, NodeId id, Value value) {
    const auto it = g.nodes_.find(id);
    if (it == g.nodes_.end()) return false;
    it->second.value = std::move(value);
    return true;
  }

  static bool set_edge_value(TypedGraph& g, EdgeId id, Value value) {
    const auto it = g.edges_.find(id);
    if (it == g.edges_.end()) return false;
    it->second.value = std::move(value);
    return true;
  }

  static std::optional<InstanceEdge> remove_edge(TypedGraph& g, EdgeId id) {
    const auto it = g.edges_.find(id);
    if (it == g.edges_.end()) return std::nullopt;
    InstanceEdge removed = std::move(it->second);
    g.edges_.erase(it);
    for (const auto* side : {&removed.tail, &removed.head}) {
      for (const auto& [slot, n] : *side) {
        const auto inc = g.incidence_.find(n);
        if (inc == g.incidence_.end()) continue;
        inc->second.erase(id);
        if (inc->second.empty()) g.incidence_.erase(inc);
      }
    }
    return removed;
  }

  static bool remove_node(TypedGraph& g, NodeId id) {
    const auto it = g.nodes_.find(id);
    if (it == g.nodes_.end()) return false;
    const auto sym = g.symbols_.find(it->second.symbol);
    if (sym != g.symbols_.end() && sym->second == id) g.symbols_.erase(sym);
    g.nodes_.erase(it);
    return true;
  }
};

TypedGraph new_graph_unchecked(std::shared_ptr<const TypedGraphSchema> schema) {
  return TypedGraph(std::move(schema));
}

TypedGraph new_graph(std::shared_ptr<const TypedGraphSchema> schema) {
  const auto report = schema->validate();
  if (!report.ok()) {
    const auto first = std::find_if(report.begin(), report.end(),
                                    [](const Violation& v) { return v.severity == Severity::Error; });
    throw Error(ErrorCode::InvalidSchema, std::string(to_string(first->code)) + " " + first->subject + ": " +
                                              first->detail + " (" + std::to_string(report.error_count()) +
                                              " errors)");
  }
  return TypedGraph(std::move(schema));
}

TypedGraph new_graph(const TypedGraphSchema& schema) {
  return new_graph(std::make_shared<const TypedGraphSchema>(schema));
}

namespace {

std::string edge_display(EdgeId id) { return "edge#" + std::to_string(raw(id)); }

/// Which parts of a graph a validation pass must look at.
struct Scope {
  bool all = false;
  std::set<NodeId> value_nodes;
  std::set<EdgeId> value_edges;
  std::set<NodeId> card_nodes;
  std::set<NodeId> deleted_nodes;
  std::set<TypeLabel> touched_edge_types;

  bool node_value(NodeId id) const { return all || value_nodes.contains(id); }
  bool edge_value(EdgeId id) const { return all || value_edges.contains(id); }
  bool node_adjacency(NodeId id) const { return all || card_nodes.contains(id) || value_nodes.contains(id); }
  bool edge_type_touched(const TypeLabel& t) const { return all || touched_edge_types.contains(t); }
};

class Checker {
 public:
  Checker(const TypedGraph& g, const Scope& scope, ViolationReport& report)
      : g_(g), schema_(g.schema()), scope_(scope), report_(report) {}

  void run() {
    check_nodes();
    check_edges();
    check_deleted();
    check_cardinality();
    for (const auto& c : schema_.constraints()) check_constraint(c);
    check_cycles();
  }

 private:
  void forward_value_report(const std::string& subject, const ViolationReport& inner) {
    for (const auto& v : inner) report_.add(v.code, subject, v.subject + ": " + v.detail, v.severity);
  }

  void check_nodes() {
    std::map<std::string, NodeId> symbols;
    for (const auto& [id, n] : g_.nodes()) {
      if (scope_.all && !n.symbol.empty() && !symbols.emplace(n.symbol, id).second) {
        report_.add(ViolationCode::DuplicateSymbol, n.symbol, "symbol used by more than one node");
      }
      if (!scope_.node_value(id)) continue;
      const auto* type = schema_.node_type(n.type_label);
      if (!type) {
        report_.add(ViolationCode::UnknownTypeLabel, g_.display(id), "'" + n.type_label + "' is not a node type");
        continue;
      }
      forward_value_report(g_.display(id), schema_.registry().check_value(type->payload, n.value));
    }
  }

  void check_edges() {
    for (const auto& [id, e] : g_.edges()) {
      if (!scope_.edge_value(id)) continue;
      const std::string subject = edge_display(id);
      const auto* type = schema_.edge_type(e.type_label);
      if (!type) {
        report_.add(ViolationCode::UnknownTypeLabel, subject, "'" + e.type_label + "' is not an edge type");
        continue;
      }
      for (const Side s : {Side::Tail, Side::Head}) {
        const auto& slots = e.side(s);
        const std::string side_name(to_string(s));
        for (const auto& ep : type->side(s)) {
          if (!slots.contains(ep.node_type)) {
            report_.add(ViolationCode::EndpointMismatch, subject,
                        e.type_label + ": missing " + side_name + " endpoint '" + ep.node_type + "'");
          }
        }
        for (const auto& [slot, node_id] : slots) {
          if (!type->endpoint(s, slot)) {
            report_.add(ViolationCode::EndpointMismatch, subject,
                        e.type_label + ": unexpected " + side_name + " endpoint '" + slot + "'");
            continue;
          }
          const auto* n = g_.node(node_id);
          if (!n) {
            report_.add(ViolationCode::DanglingEndpoint, subject,
                        e.type_label + ": " + side_name + " endpoint '" + slot + "' refers to missing node #" +
                            std::to_string(raw(node_id)));
          } else if (n->type_label != slot) {
            report_.add(ViolationCode::EndpointMismatch, subject,
                        e.type_label + ": " + side_name + " endpoint '" + slot + "' holds " + g_.display(node_id) +
                            " of type '" + n->type_label + "'");
          }
        }
      }
      if (type->property) {
        forward_value_report(subject, schema_.registry().check_value(*type->property, e.value));
      } else if (!(e.value == Value::empty_record())) {
        report_.add(ViolationCode::TypeViolation, subject,
                    e.type_label + " has no property type; expected the empty record {}");
      }
    }
  }

  void check_deleted() {
    for (const NodeId id : scope_.deleted_nodes) {
      if (g_.node(id)) continue;
      const auto& left = g_.incident(id);
      if (left.empty()) continue;
      std::string which;
      for (const EdgeId e : left) which += (which.empty() ? "" : ", ") + edge_display(e);
      report_.add(ViolationCode::DeleteLeavesDangling, "#" + std::to_string(raw(id)),
                  "deleted node is still referenced by " + which);
    }
  }

  void check_cardinality() {
    for (const auto& [id, n] : g_.nodes()) {
      if (!scope_.all && !scope_.card_nodes.contains(id)) continue;
      if (!schema_.node_type(n.type_label)) continue;
      std::map<std::pair<TypeLabel, Side>, std::uint64_t> counts;
      for (const EdgeId eid : g_.incident(id)) {
        const auto* e = g_.edge(eid);
        for (const Side s : {Side::Tail, Side::Head}) {
          const auto slot = e->side(s).find(n.type_label);
          if (slot != e->side(s).end() && slot->second == id) ++counts[{e->type_label, s}];
        }
      }
      for (const auto& type : schema_.edge_types()) {
        for (const Side s : {Side::Tail, Side::Head}) {
          const auto* ep = type.endpoint(s, n.type_label);
          if (!ep) continue;
          const auto found = counts[{type.label, s}];
          if (!ep->multiplicity.admits(found)) {
            report_.add(ViolationCode::CardinalityViolation, g_.display(id),
                        n.type_label + " at " + std::string(to_string(s)) + " of " + type.label + ": found " +
                            std::to_string(found) + ", allowed " + ep->multiplicity.to_string());
          }
        }
      }
    }
  }

  std::string node_list(const std::vector<NodeId>& ids) const {
    std::string out;
    for (const NodeId id : ids) out += (out.empty() ? "" : ", ") + g_.display(id);
    return out;
  }

  void check_unique_per_edge(const UniquePer& c) {
    std::map<std::vector<NodeId>, std::vector<EdgeId>> groups;
    for (const auto& [id, e] : g_.edges()) {
      if (e.type_label != c.target) continue;
      std::vector<NodeId> key;
      bool complete = true;
      for (const auto& k : c.key) {
        bool any = false;
        for (const Side s : {Side::Tail, Side::Head}) {
          const auto it = e.side(s).find(k);
          if (it != e.side(s).end()) {
            key.push_back(it->second);
            any = true;
          }
        }
        complete = complete && any;
      }
      if (complete) groups[key].push_back(id);
    }
    for (const auto& [key, ids] : groups) {
      if (ids.size() < 2) continue;
      if (!scope_.all && std::none_of(ids.begin(), ids.end(), [&](EdgeId e) { return scope_.edge_value(e); })) {
        continue;
      }
      std::string which;
      for (const EdgeId e : ids) which += (which.empty() ? "" : ", ") + edge_display(e);
      report_.add(ViolationCode::ConstraintViolation, describe(c),
                  which + " share key (" + node_list(key) + ")");
    }
  }

  void check_unique_per_node(const UniquePer& c) {
    std::map<std::vector<std::vector<NodeId>>, std::vector<NodeId>> groups;
    for (const auto& [id, n] : g_.nodes()) {
      if (n.type_label != c.target) continue;
      std::vector<std::vector<NodeId>> key(c.key.size());
      for (const EdgeId eid : g_.incident(id)) {
        const auto* e = g_.edge(eid);
        for (const auto* side : {&e->tail, &e->head}) {
          for (const auto& [slot, other] : *side) {
            if (other == id) continue;
            for (std::size_t i = 0; i < c.key.size(); ++i) {
              if (slot == c.key[i]) key[i].push_back(other);
            }
          }
        }
      }
      bool complete = true;
      for (auto& part : key) {
        std::sort(part.begin(), part.end());
        part.erase(std::unique(part.begin(), part.end()), part.end());
        complete = complete && !part.empty();
      }
      if (complete) groups[key].push_back(id);
    }
    for (const auto& [key, ids] : groups) {
      if (ids.size() < 2) continue;
      if (!scope_.all && std::none_of(ids.begin(), ids.end(), [&](NodeId n) { return scope_.node_adjacency(n); })) {
        continue;
      }
      std::vector<NodeId> flat;
      for (const auto& part : key) flat.insert(flat.end(), part.begin(), part.end());
      report_.add(ViolationCode::ConstraintViolation, describe(c),
                  node_list(ids) + " share key (" + node_list(flat) + ")");
    }
  }

  void check_unique_property(const UniqueProperty& c) {
    std::map<std::string, std::vector<NodeId>> groups;
    for (const auto& [id, n] : g_.nodes()) {
      if (n.type_label != c.node_type) continue;
      if (const Value* v = n.value.at_path(c.path)) groups[to_literal(*v)].push_back(id);
    }
    for (const auto& [literal, ids] : groups) {
      if (ids.size() < 2) continue;
      if (!scope_.all && std::none_of(ids.begin(), ids.end(), [&](NodeId n) { return scope_.node_value(n); })) {
        continue;
      }
      report_.add(ViolationCode::ConstraintViolation, describe(c), node_list(ids) + " share value " + literal);
    }
  }

  void check_predicate(const PropertyPredicate& c) {
    const auto holds = [&](const Value& value) {
      const Value* v = value.at_path(c.path);
      if (!v) return false;
      const auto r = compare_values(*v, c.op, c.literal);
      return r && *r;
    };
    for (const auto& [id, n] : g_.nodes()) {
      if (n.type_label == c.target && scope_.node_value(id) && !holds(n.value)) {
        report_.add(ViolationCode::ConstraintViolation, describe(c), g_.display(id) + " fails the predicate");
      }
    }
    for (const auto& [id, e] : g_.edges()) {
      if (e.type_label == c.target && scope_.edge_value(id) && !holds(e.value)) {
        report_.add(ViolationCode::ConstraintViolation, describe(c), edge_display(id) + " fails the predicate");
      }
    }
  }

  /// A directed cycle over tail -> head steps of one edge type, if any.
  std::optional<std::vector<NodeId>> find_cycle(const TypeLabel& edge_type) const {
    std::map<NodeId, std::vector<NodeId>> next;
    for (const auto& [id, e] : g_.edges()) {
      if (e.type_label != edge_type) continue;
      for (const auto& [ts, t] : e.tail) {
        for (const auto& [hs, h] : e.head) next[t].push_back(h);
      }
    }
    enum class Mark { White, Grey, Black };
    std::map<NodeId, Mark> mark;
    std::vector<NodeId> path;
    std::optional<std::vector<NodeId>> cycle;
    std::function<void(NodeId)> visit = [&](NodeId n) {
      mark[n] = Mark::Grey;
      path.push_back(n);
      for (const NodeId m : next[n]) {
        if (cycle) break;
        if (mark[m] == Mark::Grey) {
          const auto start = std::find(path.begin(), path.end(), m);
          cycle.emplace(start, path.end());
          cycle->push_back(m);
        } else if (mark[m] == Mark::White) {
          visit(m);
        }
      }
      path.pop_back();
      mark[n] = Mark::Black;
    };
    for (const auto& [n, succ] : next) {
      if (cycle) break;
      if (mark[n] == Mark::White) visit(n);
    }
    return cycle;
  }

  std::string cycle_text(const std::vector<NodeId>& cycle) const {
    std::string out;
    for (const NodeId n : cycle) out += (out.empty() ? "" : " -> ") + g_.display(n);
    return out;
  }

  void check_constraint(const Constraint& c) {
    std::visit(
        [&](const auto& x) {
          using T = std::decay_t<decltype(x)>;
          if constexpr (std::is_same_v<T, UniquePer>) {
            if (schema_.edge_type(x.target)) {
              check_unique_per_edge(x);
            } else {
              check_unique_per_node(x);
            }
          } else if constexpr (std::is_same_v<T, UniqueProperty>) {
            check_unique_property(x);
          } else if constexpr (std::is_same_v<T, PropertyPredicate>) {
            check_predicate(x);
          } else {
            if (!scope_.edge_type_touched(x.edge_type)) return;
            if (const auto cycle = find_cycle(x.edge_type)) {
              report_.add(ViolationCode::ConstraintViolation, describe(c), "cycle " + cycle_text(*cycle));
            }
          }
        },
        c);
  }

  void check_cycles() {
    for (const auto& type : schema_.edge_types()) {
      if (!scope_.edge_type_touched(type.label)) continue;
      const bool recursive = std::any_of(type.tail.begin(), type.tail.end(),
                                         [&](const Endpoint& ep) { return type.endpoint(Side::Head, ep.node_type); });
      if (!recursive) continue;
      const bool declared_acyclic =
          std::any_of(schema_.constraints().begin(), schema_.constraints().end(), [&](const Constraint& c) {
            const auto* a = std::get_if<Acyclic>(&c);
            return a && a->edge_type == type.label;
          });
      if (declared_acyclic) continue;
      if (const auto cycle = find_cycle(type.label)) {
        report_.add(ViolationCode::InstanceCycle, type.label, "instance cycle " + cycle_text(*cycle),
                    Severity::Warning);
      }
    }
  }

  const TypedGraph& g_;
  const TypedGraphSchema& schema_;
  const Scope& scope_;
  ViolationReport& report_;
};

/// Applies a batch structurally, recording what later checks must cover.
/// Problems that make an action impossible to apply are reported directly.
void apply_batch(TypedGraph& work, const MutationBatch& batch, Scope& scope, ViolationReport& report) {
  std::vector<NodeId> placeholders;
  const auto resolve = [&](const std::map<TypeLabel, NodeRef>& refs, EndpointMap& out) {
    bool ok = true;
    for (const auto& [slot, ref] : refs) {
      if (const auto* id = std::get_if<NodeId>(&ref)) {
        out.emplace(slot, *id);
      } else {
        const auto index = std::get<Placeholder>(ref).index;
        if (index < placeholders.size()) {
          out.emplace(slot, placeholders[index]);
        } else {
          report.add(ViolationCode::UndefinedPlaceholder, "placeholder " + std::to_string(index),
                     "endpoint '" + slot + "' uses a node not inserted earlier in the batch");
          ok = false;
        }
      }
    }
    return ok;
  };

  for (const auto& action : batch.actions()) {
    std::visit(
        [&](const auto& a) {
          using T = std::decay_t<decltype(a)>;
          if constexpr (std::is_same_v<T, InsertNode>) {
            if (!a.symbol.empty() && work.find_symbol(a.symbol)) {
              report.add(ViolationCode::DuplicateSymbol, a.symbol, "symbol already names another node");
            }
            const NodeId id = GraphEditor::add_node(work, a.type_label, a.value, a.symbol);
            placeholders.push_back(id);
            scope.value_nodes.insert(id);
            scope.card_nodes.insert(id);
          } else if constexpr (std::is_same_v<T, InsertEdge>) {
            EndpointMap tail, head;
            const bool ok_tail = resolve(a.tail, tail);
            const bool ok_head = resolve(a.head, head);
            if (!ok_tail || !ok_head) return;
            for (const auto* side : {&tail, &head}) {
              for (const auto& [slot, n] : *side) scope.card_nodes.insert(n);
            }
            const EdgeId id = GraphEditor::add_edge(work, a.type_label, a.value, std::move(tail), std::move(head));
            scope.value_edges.insert(id);
            scope.touched_edge_types.insert(a.type_label);
          } else if constexpr (std::is_same_v<T, UpdateNodeValue>) {
            if (GraphEditor::set_node_value(work, a.id, a.value)) {
              scope.value_nodes.insert(a.id);
            } else {
              report.add(ViolationCode::UnknownElement, "#" + std::to_string(raw(a.id)), "update of a missing node");
            }
          } else if constexpr (std::is_same_v<T, UpdateEdgeValue>) {
            if (GraphEditor::set_edge_value(work, a.id, a.value)) {
              scope.value_edges.insert(a.id);
            } else {
              report.add(ViolationCode::UnknownElement, edge_display(a.id), "update of a missing edge");
            }
          } else if constexpr (std::is_same_v<T, DeleteEdge>) {
            if (auto removed = GraphEditor::remove_edge(work, a.id)) {
              for (const auto* side : {&removed->tail, &removed->head}) {
                for (const auto& [slot, n] : *side) scope.card_nodes.insert(n);
              }
              scope.value_edges.erase(a.id);
              scope.touched_edge_types.insert(removed->type_label);
            } else {
              report.add(ViolationCode::UnknownElement, edge_display(a.id), "delete of a missing edge");
            }
          } else {
            if (GraphEditor::remove_node(work, a.id)) {
              scope.deleted_nodes.insert(a.id);
              scope.value_nodes.erase(a.id);
              scope.card_nodes.erase(a.id);
            } else {
              report.add(ViolationCode::UnknownElement, "#" + std::to_string(raw(a.id)), "delete of a missing node");
            }
          }
        },
        action);
  }
}

}  // namespace

CommitResult commit(const TypedGraph& graph, const MutationBatch& batch) {
  TypedGraph work = graph;
  Scope scope;
  ViolationReport report;
  apply_batch(work, batch, scope, report);
  Checker(work, scope, report).run();
  if (!report.ok()) return CommitResult{std::nullopt, std::move(report)};
  return CommitResult{std::move(work), std::move(report)};
}

TypedGraph apply_unchecked(const TypedGraph& graph, const MutationBatch& batch) {
  TypedGraph work = graph;
  Scope scope;
  ViolationReport ignored;
  apply_batch(work, batch, scope, ignored);
  return work;
}

ViolationReport check_graph(const TypedGraph& graph) {
  Scope scope;
  scope.all = true;
  ViolationReport report;
  Checker(graph, scope, report).run();
  return report;
}

std::set<NodeId> neighbors(const TypedGraph& graph, NodeId node, std::string_view edge_type, Direction direction) {
  if (!graph.node(node)) throw Error(ErrorCode::UnknownNode, "node #" + std::to_string(raw(node)) + " not found");
  if (!graph.schema().edge_type(edge_type)) {
    throw Error(ErrorCode::UnknownEdgeType, "'" + std::string(edge_type) + "' is not an edge type");
  }
  std::set<NodeId> out;
  for (const EdgeId eid : graph.incident(node)) {
    const auto* e = graph.edge(eid);
    if (e->type_label != edge_type) continue;
    const auto& from = direction == Direction::Along ? e->tail : e->head;
    const auto& to = direction == Direction::Along ? e->head : e->tail;
    const bool present = std::any_of(from.begin(), from.end(), [&](const auto& kv) { return kv.second == node; });
    if (!present) continue;
    for (const auto& [slot, other] : to) out.insert(other);
  }
  return out;
}

std::set<NodeId> where_used(const TypedGraph& graph, NodeId node, std::string_view edge_type) {
  std::set<NodeId> result;
  std::deque<NodeId> queue{node};
  std::set<NodeId> expanded{node};
  while (!queue.empty()) {
    const NodeId cur = queue.front();
    queue.pop_front();
    for (const NodeId parent : neighbors(graph, cur, edge_type, Direction::Against)) {
      result.insert(parent);
      if (expanded.insert(parent).second) queue.push_back(parent);
    }
  }
  return result;
}

}  // namespace tgm
