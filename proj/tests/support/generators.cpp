#include "generators.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "tgm/text.hpp"

namespace tgm::testing {

namespace {

const std::vector<TypeLabel> kBuiltins = {"int", "string", "bool", "decimal", "money", "date"};

const std::vector<std::string> kStringPieces = {"a", "Z", " ", "\"", "\\", "\n", "\t", "`", "\xC3\xA9",
                                                "\xF0\x9F\x98\x80", "{", "}", "->", "//", "0"};

std::string random_text(Rng& rng) {
  std::string s;
  const int n = uniform(rng, 0, 5);
  for (int i = 0; i < n; ++i) s += pick(rng, kStringPieces);
  return s;
}

BaseKind random_kind(Rng& rng) {
  static const std::vector<BaseKind> kinds = {BaseKind::Int, BaseKind::String, BaseKind::Bool, BaseKind::Decimal,
                                              BaseKind::Money};
  return pick(rng, kinds);
}

Value random_scalar(BaseKind kind, Rng& rng) {
  switch (kind) {
    case BaseKind::Int: return Value::integer(uniform(rng, -1000, 1000));
    case BaseKind::String: return Value::text(random_text(rng));
    case BaseKind::Bool: return Value::boolean(chance(rng, 0.5));
    case BaseKind::Decimal: return Value::decimal(Decimal{uniform(rng, -200000, 200000)});
    case BaseKind::Money: return Value::decimal(Decimal{100LL * uniform(rng, -2000, 2000)});
  }
  return Value::integer(0);
}

Comparison random_op(BaseKind kind, Rng& rng) {
  if (kind == BaseKind::Bool) return chance(rng, 0.5) ? Comparison::Equal : Comparison::NotEqual;
  static const std::vector<Comparison> all = {Comparison::Less,      Comparison::LessEq,  Comparison::Equal,
                                              Comparison::GreaterEq, Comparison::Greater, Comparison::NotEqual};
  static const std::vector<Comparison> no_less = {Comparison::Equal, Comparison::GreaterEq, Comparison::Greater,
                                                  Comparison::NotEqual};
  return kind == BaseKind::String ? pick(rng, no_less) : pick(rng, all);
}

/// Value of the kind's carrier satisfying `literal op value`'s mirror, i.e. `value op literal`.
Value satisfying(BaseKind kind, Comparison op, const Value& literal, Rng& rng) {
  const std::int64_t step = uniform(rng, 1, 5);
  switch (kind) {
    case BaseKind::Bool: return Value::boolean(op == Comparison::Equal ? literal.as_bool() : !literal.as_bool());
    case BaseKind::String: {
      if (op == Comparison::Equal || op == Comparison::GreaterEq) {
        return op == Comparison::Equal || chance(rng, 0.5) ? literal : Value::text(literal.as_string() + "~");
      }
      return Value::text(literal.as_string() + "~" + random_text(rng));
    }
    case BaseKind::Int: {
      const std::int64_t v = literal.as_int();
      switch (op) {
        case Comparison::Less: return Value::integer(v - step);
        case Comparison::LessEq: return Value::integer(v - step + 1);
        case Comparison::Equal: return literal;
        case Comparison::GreaterEq: return Value::integer(v + step - 1);
        case Comparison::Greater:
        case Comparison::NotEqual: return Value::integer(v + step);
      }
      break;
    }
    case BaseKind::Decimal:
    case BaseKind::Money: {
      const std::int64_t units = literal.is_int() ? literal.as_int() * Decimal::kUnit : literal.as_decimal().units;
      const std::int64_t d = step * 100;
      switch (op) {
        case Comparison::Less: return Value::decimal(Decimal{units - d});
        case Comparison::LessEq: return Value::decimal(Decimal{units - d + 100});
        case Comparison::Equal: return Value::decimal(Decimal{units});
        case Comparison::GreaterEq: return Value::decimal(Decimal{units + d - 100});
        case Comparison::Greater:
        case Comparison::NotEqual: return Value::decimal(Decimal{units + d});
      }
      break;
    }
  }
  return literal;
}

FieldPath random_path(Rng& rng) {
  FieldPath p{odd_label(rng, "p", uniform(rng, 0, 9))};
  if (chance(rng, 0.4)) p.push_back(odd_label(rng, "q", uniform(rng, 0, 9)));
  return p;
}

std::vector<TypeLabel> distinct(Rng& rng, const std::vector<TypeLabel>& pool, int max_count) {
  std::vector<TypeLabel> out;
  if (pool.empty()) return out;
  const int n = uniform(rng, 0, std::min<int>(max_count, static_cast<int>(pool.size())));
  std::set<TypeLabel> seen;
  for (int i = 0; i < n * 3 && static_cast<int>(out.size()) < n; ++i) {
    const TypeLabel& l = pick(rng, pool);
    if (seen.insert(l).second) out.push_back(l);
  }
  return out;
}

}  // namespace

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

std::string odd_label(Rng& rng, const std::string& stem, int index) {
  const std::string n = std::to_string(index);
  switch (uniform(rng, 0, 9)) {
    case 0: return stem + " " + n;
    case 1: return stem + "`" + n;
    case 2: return stem + "\xC3\xA9" + n;
    case 3: return stem + "-" + n + "\\";
    case 4: return "\"" + stem + n;
    default: return stem + n;
  }
}

Multiplicity random_multiplicity(Rng& rng, std::uint32_t max_min, std::uint32_t max_max) {
  Multiplicity m;
  m.min = static_cast<std::uint32_t>(uniform(rng, 0, static_cast<int>(max_min)));
  if (chance(rng, 0.35)) return m;
  const int lo = std::max<int>(1, static_cast<int>(m.min));
  m.max = static_cast<std::uint32_t>(uniform(rng, lo, std::max<int>(lo, static_cast<int>(max_max))));
  return m;
}

TypedGraphSchema random_schema(Rng& rng) {
  TypedGraphSchema s(odd_label(rng, "s", uniform(rng, 0, 99)));
  std::vector<TypeLabel> pool = kBuiltins;
  const int type_count = uniform(rng, 0, 7);
  for (int i = 0; i < type_count; ++i) {
    TypeLabel label = odd_label(rng, "T", i);
    if (i == 0 && chance(rng, 0.3)) label = pick(rng, std::vector<TypeLabel>{"record", "list", "union", "any"});
    DataTypeDef def;
    switch (uniform(rng, 0, 6)) {
      case 0: def = BaseType{random_kind(rng)}; break;
      case 1: {
        const BaseKind k = random_kind(rng);
        def = ConstrainedBase{k, random_op(k, rng), random_scalar(k, rng)};
        break;
      }
      case 2: {
        RecordType r;
        const int n = uniform(rng, 0, 3);
        for (int j = 0; j < n; ++j) r.fields.push_back(FieldDecl{odd_label(rng, "f", j), pick(rng, pool)});
        def = r;
        break;
      }
      case 3: def = ListType{pick(rng, pool), random_multiplicity(rng)}; break;
      case 4: {
        UnionType u;
        u.alternatives = distinct(rng, pool, 3);
        if (u.alternatives.empty()) u.alternatives.push_back(pick(rng, pool));
        def = u;
        break;
      }
      case 5: def = AnyType{}; break;
      default: def = TypeRef{pick(rng, pool)}; break;
    }
    s.define_type(label, std::move(def));
    pool.push_back(label);
  }
  std::vector<TypeLabel> nodes;
  const int node_count = uniform(rng, 0, 4);
  for (int i = 0; i < node_count; ++i) {
    nodes.push_back(odd_label(rng, "N", i));
    s.add_node_type(nodes.back(), pick(rng, pool));
  }
  std::vector<TypeLabel> edges;
  const int edge_count = nodes.empty() ? 0 : uniform(rng, 0, 4);
  for (int i = 0; i < edge_count; ++i) {
    EdgeType e;
    e.label = odd_label(rng, "E", i);
    if (chance(rng, 0.4)) e.property = pick(rng, pool);
    for (const auto& l : distinct(rng, nodes, 2)) e.tail.push_back(Endpoint{l, random_multiplicity(rng)});
    for (const auto& l : distinct(rng, nodes, 2)) e.head.push_back(Endpoint{l, random_multiplicity(rng)});
    if (e.tail.empty() && e.head.empty()) e.tail.push_back(Endpoint{pick(rng, nodes), random_multiplicity(rng)});
    s.add_edge_type(e);
    edges.push_back(e.label);
  }
  if (!nodes.empty()) {
    std::vector<TypeLabel> elements = nodes;
    elements.insert(elements.end(), edges.begin(), edges.end());
    const int constraint_count = uniform(rng, 0, 3);
    for (int i = 0; i < constraint_count; ++i) {
      switch (uniform(rng, 0, 3)) {
        case 0: {
          auto key = distinct(rng, nodes, 2);
          if (key.empty()) key.push_back(pick(rng, nodes));
          s.add_constraint(UniquePer{pick(rng, elements), key});
          break;
        }
        case 1: s.add_constraint(UniqueProperty{pick(rng, nodes), random_path(rng)}); break;
        case 2: {
          const BaseKind k = random_kind(rng);
          s.add_constraint(PropertyPredicate{pick(rng, elements), random_path(rng), random_op(k, rng), random_scalar(k, rng)});
          break;
        }
        default:
          if (!edges.empty()) s.add_constraint(Acyclic{pick(rng, edges)});
          break;
      }
    }
    const int group_count = uniform(rng, 0, 2);
    for (int g = 0; g < group_count; ++g) {
      GroupDecl decl{odd_label(rng, "G", g), distinct(rng, nodes, 3)};
      if (decl.members.empty()) decl.members.push_back(pick(rng, nodes));
      s.add_group(decl);
      const int agg_count = uniform(rng, 0, 2);
      for (int a = 0; a < agg_count; ++a) {
        AggregateDef def;
        const int kind = uniform(rng, 0, 2);
        if (kind == 0 || (kind == 1 && edges.empty())) {
          def = CountNodes{pick(rng, nodes)};
        } else if (kind == 1) {
          def = CountEdges{pick(rng, edges)};
        } else {
          def = SumField{pick(rng, nodes), random_path(rng)};
        }
        s.add_aggregate(AggregateSpec{decl.label, odd_label(rng, "#a", a), def});
      }
    }
  }
  return s;
}

TypedGraphSchema random_open_schema(Rng& rng) {
  TypedGraphSchema s(odd_label(rng, "open", uniform(rng, 0, 99)));
  std::vector<TypeLabel> pool = kBuiltins;
  const int type_count = uniform(rng, 0, 5);
  for (int i = 0; i < type_count; ++i) {
    const TypeLabel label = odd_label(rng, "T", i);
    DataTypeDef def;
    switch (uniform(rng, 0, 5)) {
      case 0: def = BaseType{random_kind(rng)}; break;
      case 1: {
        const BaseKind k = random_kind(rng);
        def = ConstrainedBase{k, random_op(k, rng), random_scalar(k, rng)};
        break;
      }
      case 2: {
        RecordType r;
        const int n = uniform(rng, 0, 3);
        for (int j = 0; j < n; ++j) r.fields.push_back(FieldDecl{odd_label(rng, "f", j), pick(rng, pool)});
        def = r;
        break;
      }
      case 3: def = ListType{pick(rng, pool), random_multiplicity(rng, 2, 4)}; break;
      case 4: {
        UnionType u;
        u.alternatives = distinct(rng, pool, 3);
        for (const auto& l : pool) {
          if (u.alternatives.size() >= 2) break;
          if (std::find(u.alternatives.begin(), u.alternatives.end(), l) == u.alternatives.end()) {
            u.alternatives.push_back(l);
          }
        }
        def = u;
        break;
      }
      default: def = TypeRef{pick(rng, pool)}; break;
    }
    s.define_type(label, std::move(def));
    pool.push_back(label);
  }
  std::vector<TypeLabel> nodes;
  const int node_count = uniform(rng, 1, 4);
  for (int i = 0; i < node_count; ++i) {
    nodes.push_back(odd_label(rng, "N", i));
    s.add_node_type(nodes.back(), pick(rng, pool));
  }
  const int edge_count = uniform(rng, 0, 3);
  for (int i = 0; i < edge_count; ++i) {
    EdgeType e;
    e.label = odd_label(rng, "E", i);
    if (chance(rng, 0.4)) e.property = pick(rng, pool);
    for (const auto& l : distinct(rng, nodes, 2)) e.tail.push_back(Endpoint{l, Multiplicity::at_least(0)});
    for (const auto& l : distinct(rng, nodes, 2)) e.head.push_back(Endpoint{l, Multiplicity::at_least(0)});
    if (e.tail.empty() && e.head.empty()) e.head.push_back(Endpoint{pick(rng, nodes), Multiplicity::at_least(0)});
    s.add_edge_type(e);
  }
  return s;
}

Value random_value(const TypeRegistry& registry, const TypeLabel& label, Rng& rng, int depth) {
  if (depth > 16) throw std::runtime_error("type nesting too deep for value generation");
  if (label == "date") {
    return Value::record({{"day", Value::integer(uniform(rng, 1, 28))},
                          {"month", Value::integer(uniform(rng, 1, 12))},
                          {"year", Value::integer(uniform(rng, 1900, 2100))}});
  }
  const DataTypeDef* def = registry.find(label);
  if (!def) throw std::runtime_error("unbound type " + label);
  return std::visit(
      [&](const auto& d) -> Value {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, BaseType>) {
          return random_scalar(d.kind, rng);
        } else if constexpr (std::is_same_v<T, ConstrainedBase>) {
          return satisfying(d.kind, d.op, d.literal, rng);
        } else if constexpr (std::is_same_v<T, RecordType>) {
          std::vector<FieldValue> fields;
          for (const auto& f : d.fields) fields.push_back(FieldValue{f.name, random_value(registry, f.type, rng, depth + 1)});
          return Value::record(std::move(fields));
        } else if constexpr (std::is_same_v<T, ListType>) {
          const std::uint32_t hi = d.count.max ? std::min(*d.count.max, d.count.min + 2) : d.count.min + 2;
          const int n = uniform(rng, static_cast<int>(d.count.min), static_cast<int>(hi));
          std::vector<Value> items;
          for (int i = 0; i < n; ++i) items.push_back(random_value(registry, d.element, rng, depth + 1));
          return Value::list(std::move(items));
        } else if constexpr (std::is_same_v<T, UnionType>) {
          const TypeLabel& alt = pick(rng, d.alternatives);
          return Value::tagged(alt, random_value(registry, alt, rng, depth + 1));
        } else if constexpr (std::is_same_v<T, AnyType>) {
          return Value::integer(uniform(rng, 0, 9));
        } else {
          return random_value(registry, d.target, rng, depth + 1);
        }
      },
      *def);
}

TypedGraph random_graph(std::shared_ptr<const TypedGraphSchema> schema, Rng& rng, int max_nodes) {
  const auto& reg = schema->registry();
  const auto node_value = [&](const NodeType& t) { return random_value(reg, t.payload, rng); };
  const auto edge_value = [&](const EdgeType& e) {
    return e.property ? random_value(reg, *e.property, rng) : Value::empty_record();
  };
  int symbol_index = 0;
  const auto symbol = [&]() { return chance(rng, 0.7) ? odd_label(rng, "v", symbol_index++) : std::string(); };

  MutationBatch first;
  std::map<TypeLabel, std::vector<NodeRef>> by_type;
  const int n = uniform(rng, 1, max_nodes);
  for (int i = 0; i < n; ++i) {
    const NodeType& t = pick(rng, schema->node_types());
    by_type[t.label].push_back(first.insert_node(t.label, node_value(t), symbol()));
  }
  const auto add_edges = [&](MutationBatch& batch, int max_per_type) {
    for (const auto& e : schema->edge_types()) {
      const int count = uniform(rng, 0, max_per_type);
      for (int k = 0; k < count; ++k) {
        std::map<TypeLabel, NodeRef> tail, head;
        bool ok = true;
        for (const auto& ep : e.tail) {
          if (by_type[ep.node_type].empty()) ok = false;
          else tail.emplace(ep.node_type, pick(rng, by_type[ep.node_type]));
        }
        for (const auto& ep : e.head) {
          if (by_type[ep.node_type].empty()) ok = false;
          else head.emplace(ep.node_type, pick(rng, by_type[ep.node_type]));
        }
        if (ok) batch.insert_edge(e.label, std::move(tail), std::move(head), edge_value(e));
      }
    }
  };
  add_edges(first, 3);
  auto r1 = commit(new_graph(schema), first);
  if (!r1.ok()) throw std::runtime_error("generated batch rejected:\n" + print_violations(r1.report));
  TypedGraph g = std::move(*r1.graph);

  MutationBatch second;
  std::set<EdgeId> dropped;
  for (const auto& [id, e] : g.edges()) {
    if (chance(rng, 0.2)) {
      second.delete_edge(id);
      dropped.insert(id);
    }
  }
  by_type.clear();
  for (const auto& [id, node] : g.nodes()) {
    if (chance(rng, 0.15)) {
      for (const EdgeId eid : g.incident(id)) {
        if (dropped.insert(eid).second) second.delete_edge(eid);
      }
      second.delete_node(id);
      continue;
    }
    by_type[node.type_label].push_back(id);
  }
  const int extra = uniform(rng, 0, 3);
  for (int i = 0; i < extra; ++i) {
    const NodeType& t = pick(rng, schema->node_types());
    by_type[t.label].push_back(second.insert_node(t.label, node_value(t), symbol()));
  }
  add_edges(second, 1);
  auto r2 = commit(g, second);
  if (!r2.ok()) throw std::runtime_error("generated second batch rejected:\n" + print_violations(r2.report));
  return std::move(*r2.graph);
}

}  // namespace tgm::testing
