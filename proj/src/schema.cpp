#include "tgm/schema.hpp"

#include <algorithm>
#include <set>

#include "tgm/error.hpp"

namespace tgm {

std::string join_path(const FieldPath& path) {
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out.push_back('.');
    out += quote_label(path[i]);
  }
  return out;
}

std::string_view to_string(Side side) { return side == Side::Tail ? "tail" : "head"; }

const Endpoint* EdgeType::endpoint(Side s, std::string_view node_type) const {
  for (const auto& ep : side(s)) {
    if (ep.node_type == node_type) return &ep;
  }
  return nullptr;
}

bool EdgeType::touches(std::string_view node_type) const {
  return endpoint(Side::Tail, node_type) || endpoint(Side::Head, node_type);
}

std::string describe(const Constraint& c) {
  return std::visit(
      [](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, UniquePer>) {
          std::string out = "uniquePer(" + quote_label(x.target) + ";";
          for (std::size_t i = 0; i < x.key.size(); ++i) out += (i ? ", " : " ") + quote_label(x.key[i]);
          return out + ")";
        } else if constexpr (std::is_same_v<T, UniqueProperty>) {
          return "uniqueProp(" + quote_label(x.node_type) + ", " + join_path(x.path) + ")";
        } else if constexpr (std::is_same_v<T, PropertyPredicate>) {
          return "pred(" + quote_label(x.target) + ", " + join_path(x.path) + " " + std::string(to_string(x.op)) +
                 " " + to_literal(x.literal) + ")";
        } else {
          return "acyclic(" + quote_label(x.edge_type) + ")";
        }
      },
      c);
}

TypedGraphSchema::TypedGraphSchema(std::string name) : name_(std::move(name)) {}

void TypedGraphSchema::add_node_type(TypeLabel label, TypeLabel payload) {
  if (label.empty()) throw Error(ErrorCode::InvalidLabel, "node type label must be non-empty");
  if (node_index_.contains(label)) throw Error(ErrorCode::DuplicateNodeType, "node type '" + label + "' exists");
  if (edge_index_.contains(label)) {
    throw Error(ErrorCode::LabelClash, "'" + label + "' is already an edge type label");
  }
  node_index_.emplace(label, node_types_.size());
  node_types_.push_back({std::move(label), std::move(payload)});
}

void TypedGraphSchema::add_edge_type(EdgeType edge) {
  if (edge.label.empty()) throw Error(ErrorCode::InvalidLabel, "edge type label must be non-empty");
  if (edge_index_.contains(edge.label)) {
    throw Error(ErrorCode::DuplicateEdgeType, "edge type '" + edge.label + "' exists");
  }
  if (node_index_.contains(edge.label)) {
    throw Error(ErrorCode::LabelClash, "'" + edge.label + "' is already a node type label");
  }
  if (edge.tail.empty() && edge.head.empty()) {
    throw Error(ErrorCode::EmptyEndpointSets, "edge type '" + edge.label + "' has neither tail nor head");
  }
  edge_index_.emplace(edge.label, edge_types_.size());
  edge_types_.push_back(std::move(edge));
}

void TypedGraphSchema::add_edge_type(TypeLabel label, std::optional<TypeLabel> property,
                                     const std::vector<TypeLabel>& tail, const std::vector<TypeLabel>& head,
                                     const std::map<TypeLabel, Multiplicity>& multiplicity) {
  std::set<TypeLabel> participants(tail.begin(), tail.end());
  participants.insert(head.begin(), head.end());
  std::set<TypeLabel> keys;
  for (const auto& [k, m] : multiplicity) keys.insert(k);
  if (keys != participants) {
    throw Error(ErrorCode::MultiplicityMismatch,
                "multiplicities of '" + label + "' must be given for exactly the tail and head node types");
  }
  EdgeType edge{std::move(label), std::move(property), {}, {}};
  for (const auto& t : tail) edge.tail.push_back({t, multiplicity.at(t)});
  for (const auto& h : head) edge.head.push_back({h, multiplicity.at(h)});
  add_edge_type(std::move(edge));
}

const NodeType* TypedGraphSchema::node_type(std::string_view label) const noexcept {
  const auto it = node_index_.find(label);
  return it == node_index_.end() ? nullptr : &node_types_[it->second];
}

const EdgeType* TypedGraphSchema::edge_type(std::string_view label) const noexcept {
  const auto it = edge_index_.find(label);
  return it == edge_index_.end() ? nullptr : &edge_types_[it->second];
}

std::optional<TypeLabel> TypedGraphSchema::element_type(std::string_view element_label) const {
  if (const auto* n = node_type(element_label)) return n->payload;
  if (const auto* e = edge_type(element_label)) return e->property;
  return std::nullopt;
}

std::optional<TypeLabel> TypedGraphSchema::path_type(std::string_view element_label, const FieldPath& path) const {
  auto current = element_type(element_label);
  if (!current) return std::nullopt;
  for (const auto& part : path) {
    const DataTypeDef* def = registry_.resolve(*current);
    const auto* rec = def ? std::get_if<RecordType>(def) : nullptr;
    if (!rec) return std::nullopt;
    const auto it = std::find_if(rec->fields.begin(), rec->fields.end(),
                                 [&](const FieldDecl& f) { return f.name == part; });
    if (it == rec->fields.end()) return std::nullopt;
    current = it->type;
  }
  return current;
}

namespace {

std::optional<BaseKind> scalar_kind(const TypeRegistry& registry, const TypeLabel& label) {
  const DataTypeDef* def = registry.resolve(label);
  if (!def) return std::nullopt;
  if (const auto* b = std::get_if<BaseType>(def)) return b->kind;
  if (const auto* c = std::get_if<ConstrainedBase>(def)) return c->kind;
  return std::nullopt;
}

bool literal_matches(BaseKind kind, const Value& literal) {
  switch (kind) {
    case BaseKind::Int: return literal.is_int();
    case BaseKind::String: return literal.is_string();
    case BaseKind::Bool: return literal.is_bool();
    case BaseKind::Decimal:
    case BaseKind::Money: return literal.is_decimal() || literal.is_int();
  }
  return false;
}

}  // namespace

void TypedGraphSchema::validate_constraint(const Constraint& c, ValidationReport& report) const {
  const std::string subject = describe(c);
  const auto fail = [&](const std::string& why) { report.add(ViolationCode::UnresolvedConstraint, subject, why); };
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, UniquePer>) {
          if (x.key.empty()) fail("key must name at least one node type");
          if (const auto* e = edge_type(x.target)) {
            for (const auto& k : x.key) {
              if (!e->touches(k)) fail("'" + k + "' is not an endpoint of edge type '" + x.target + "'");
            }
          } else if (node_type(x.target)) {
            for (const auto& k : x.key) {
              if (!node_type(k)) fail("key '" + k + "' is not a node type");
            }
          } else {
            fail("target '" + x.target + "' is neither a node type nor an edge type");
          }
        } else if constexpr (std::is_same_v<T, UniqueProperty>) {
          if (!node_type(x.node_type)) {
            fail("'" + x.node_type + "' is not a node type");
          } else if (x.path.empty() || !path_type(x.node_type, x.path)) {
            fail("path '" + join_path(x.path) + "' does not resolve in '" + x.node_type + "'");
          }
        } else if constexpr (std::is_same_v<T, PropertyPredicate>) {
          if (!node_type(x.target) && !edge_type(x.target)) {
            fail("target '" + x.target + "' is neither a node type nor an edge type");
            return;
          }
          const auto t = x.path.empty() ? std::nullopt : path_type(x.target, x.path);
          if (!t) {
            fail("path '" + join_path(x.path) + "' does not resolve in '" + x.target + "'");
            return;
          }
          const auto kind = scalar_kind(registry_, *t);
          if (!kind || !literal_matches(*kind, x.literal)) {
            fail("literal " + to_literal(x.literal) + " is not comparable with type '" + *t + "'");
          }
        } else {
          if (!edge_type(x.edge_type)) fail("'" + x.edge_type + "' is not an edge type");
        }
      },
      c);
}

ValidationReport TypedGraphSchema::validate() const {
  ValidationReport report = registry_.validate();

  for (const auto& n : node_types_) {
    if (!registry_.contains(n.payload)) {
      report.add(ViolationCode::DanglingReference, n.label, "payload type '" + n.payload + "' is not defined");
    }
  }

  for (const auto& e : edge_types_) {
    if (e.property && !registry_.contains(*e.property)) {
      report.add(ViolationCode::DanglingReference, e.label, "property type '" + *e.property + "' is not defined");
    }
    if (e.tail.empty() && e.head.empty()) {
      report.add(ViolationCode::EmptyEndpointSets, e.label, "edge type has neither tail nor head");
    }
    for (const Side s : {Side::Tail, Side::Head}) {
      std::set<TypeLabel> seen;
      for (const auto& ep : e.side(s)) {
        const std::string where = e.label + " " + std::string(to_string(s)) + " " + ep.node_type;
        if (!node_type(ep.node_type)) {
          report.add(ViolationCode::UndeclaredEndpoint, e.label,
                     "endpoint '" + ep.node_type + "' is not a declared node type");
        }
        if (!seen.insert(ep.node_type).second) {
          report.add(ViolationCode::MultiplicityMismatch, e.label,
                     "node type '" + ep.node_type + "' given twice in the " + std::string(to_string(s)));
        }
        if (ep.multiplicity.max && ep.multiplicity.min > *ep.multiplicity.max) {
          report.add(ViolationCode::MinExceedsMax, where, "multiplicity " + ep.multiplicity.to_string());
        } else if (ep.multiplicity.max && *ep.multiplicity.max == 0) {
          report.add(ViolationCode::InvalidBounds, where, "maximum multiplicity must be positive");
        }
      }
    }
  }

  for (const auto& c : constraints_) validate_constraint(c, report);

  std::map<TypeLabel, TypeLabel> owner;
  std::set<TypeLabel> group_labels;
  for (const auto& g : groups_) {
    if (!group_labels.insert(g.label).second) {
      report.add(ViolationCode::InvalidGroup, g.label, "group declared twice");
    }
    if (g.members.empty()) report.add(ViolationCode::InvalidGroup, g.label, "group has no members");
    for (const auto& m : g.members) {
      if (!node_type(m)) report.add(ViolationCode::InvalidGroup, g.label, "member '" + m + "' is not a node type");
      const auto [it, fresh] = owner.emplace(m, g.label);
      if (!fresh) {
        report.add(ViolationCode::InvalidGroup, g.label, "member '" + m + "' already belongs to group '" +
                                                             it->second + "'");
      }
    }
  }
  std::set<std::pair<TypeLabel, std::string>> aggregate_names;
  for (const auto& a : aggregates_) {
    const auto g = std::find_if(groups_.begin(), groups_.end(), [&](const GroupDecl& d) { return d.label == a.group; });
    const std::string subject = a.group + "." + a.name;
    if (g == groups_.end()) {
      report.add(ViolationCode::InvalidGroup, subject, "aggregate names unknown group '" + a.group + "'");
      continue;
    }
    if (a.name.empty() || !aggregate_names.emplace(a.group, a.name).second) {
      report.add(ViolationCode::InvalidGroup, subject, "aggregate name empty or repeated");
    }
    const auto in_group = [&](const TypeLabel& n) {
      return std::find(g->members.begin(), g->members.end(), n) != g->members.end();
    };
    std::visit(
        [&](const auto& d) {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, CountNodes>) {
            if (!in_group(d.node_type)) {
              report.add(ViolationCode::InvalidGroup, subject, "'" + d.node_type + "' is not a member of the group");
            }
          } else if constexpr (std::is_same_v<T, CountEdges>) {
            const auto* e = edge_type(d.edge_type);
            const bool inside = e && std::any_of(g->members.begin(), g->members.end(),
                                                 [&](const TypeLabel& m) { return e->touches(m); });
            if (!inside) {
              report.add(ViolationCode::InvalidGroup, subject,
                         "'" + d.edge_type + "' is not an edge type touching the group");
            }
          } else {
            if (!in_group(d.node_type)) {
              report.add(ViolationCode::InvalidGroup, subject, "'" + d.node_type + "' is not a member of the group");
              return;
            }
            const auto t = d.path.empty() ? std::nullopt : path_type(d.node_type, d.path);
            const auto kind = t ? scalar_kind(registry_, *t) : std::nullopt;
            if (!kind || !(*kind == BaseKind::Int || *kind == BaseKind::Decimal || *kind == BaseKind::Money)) {
              report.add(ViolationCode::InvalidGroup, subject, "sum path must resolve to a numeric field");
            }
          }
        },
        a.def);
  }
  return report;
}

bool TypedGraphSchema::operator==(const TypedGraphSchema& other) const {
  return name_ == other.name_ && registry_ == other.registry_ && node_types_ == other.node_types_ &&
         edge_types_ == other.edge_types_ && constraints_ == other.constraints_ && groups_ == other.groups_ &&
         aggregates_ == other.aggregates_;
}

TypedGraphSchema add_node_type(TypedGraphSchema schema, TypeLabel label, TypeLabel payload) {
  schema.add_node_type(std::move(label), std::move(payload));
  return schema;
}

TypedGraphSchema add_edge_type(TypedGraphSchema schema, TypeLabel label, std::optional<TypeLabel> property,
                               const std::vector<TypeLabel>& tail, const std::vector<TypeLabel>& head,
                               const std::map<TypeLabel, Multiplicity>& multiplicity) {
  schema.add_edge_type(std::move(label), std::move(property), tail, head, multiplicity);
  return schema;
}

TypedGraphSchema add_constraint(TypedGraphSchema schema, Constraint c) {
  schema.add_constraint(std::move(c));
  return schema;
}

ValidationReport validate_schema(const TypedGraphSchema& schema) { return schema.validate(); }

}  // namespace tgm
