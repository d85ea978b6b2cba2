#include "tgm/types.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <set>

#include "tgm/error.hpp"

namespace tgm {

namespace {

constexpr int kMaxCheckDepth = 512;

struct Builtin {
  std::string_view label;
  DataTypeDef def;
};

const std::vector<Builtin>& builtins() {
  static const std::vector<Builtin> table = {
      {"int", BaseType{BaseKind::Int}},
      {"string", BaseType{BaseKind::String}},
      {"bool", BaseType{BaseKind::Bool}},
      {"decimal", BaseType{BaseKind::Decimal}},
      {"money", BaseType{BaseKind::Money}},
      {"date", RecordType{{{"day", "int"}, {"month", "int"}, {"year", "int"}}}},
  };
  return table;
}

bool base_conforms(BaseKind kind, const Value& v) {
  switch (kind) {
    case BaseKind::Int: return v.is_int();
    case BaseKind::String: return v.is_string();
    case BaseKind::Bool: return v.is_bool();
    case BaseKind::Decimal: return v.is_decimal();
    case BaseKind::Money: return v.is_decimal() && v.as_decimal().fits_money();
  }
  return false;
}

bool literal_fits(BaseKind kind, Comparison op, const Value& literal) {
  switch (kind) {
    case BaseKind::Int: return literal.is_int();
    case BaseKind::String: return literal.is_string();
    case BaseKind::Bool: return literal.is_bool() && (op == Comparison::Equal || op == Comparison::NotEqual);
    case BaseKind::Decimal:
    case BaseKind::Money: return literal.is_decimal() || literal.is_int();
  }
  return false;
}

template <class T>
std::optional<bool> apply(const T& a, Comparison op, const T& b) {
  switch (op) {
    case Comparison::Less: return a < b;
    case Comparison::LessEq: return a <= b;
    case Comparison::Equal: return a == b;
    case Comparison::GreaterEq: return a >= b;
    case Comparison::Greater: return a > b;
    case Comparison::NotEqual: return a != b;
  }
  return std::nullopt;
}

}  // namespace

std::string_view to_string(BaseKind kind) {
  switch (kind) {
    case BaseKind::Int: return "int";
    case BaseKind::String: return "string";
    case BaseKind::Bool: return "bool";
    case BaseKind::Decimal: return "decimal";
    case BaseKind::Money: return "money";
  }
  return "?";
}

std::string_view to_string(Comparison op) {
  switch (op) {
    case Comparison::Less: return "<";
    case Comparison::LessEq: return "<=";
    case Comparison::Equal: return "=";
    case Comparison::GreaterEq: return ">=";
    case Comparison::Greater: return ">";
    case Comparison::NotEqual: return "!=";
  }
  return "?";
}

std::optional<BaseKind> base_kind_from(std::string_view name) {
  for (auto kind : {BaseKind::Int, BaseKind::String, BaseKind::Bool, BaseKind::Decimal, BaseKind::Money}) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

std::optional<bool> compare_values(const Value& lhs, Comparison op, const Value& rhs) {
  if (lhs.is_int() && rhs.is_int()) return apply(lhs.as_int(), op, rhs.as_int());
  if ((lhs.is_int() || lhs.is_decimal()) && (rhs.is_int() || rhs.is_decimal())) {
    const Decimal a = lhs.is_int() ? Decimal::from_int(lhs.as_int()) : lhs.as_decimal();
    const Decimal b = rhs.is_int() ? Decimal::from_int(rhs.as_int()) : rhs.as_decimal();
    return apply(a, op, b);
  }
  if (lhs.is_string() && rhs.is_string()) return apply(lhs.as_string(), op, rhs.as_string());
  if (lhs.is_bool() && rhs.is_bool()) {
    if (op == Comparison::Equal) return lhs.as_bool() == rhs.as_bool();
    if (op == Comparison::NotEqual) return lhs.as_bool() != rhs.as_bool();
  }
  return std::nullopt;
}

bool TypeRegistry::is_builtin(std::string_view label) noexcept {
  const auto& table = builtins();
  return std::any_of(table.begin(), table.end(), [label](const Builtin& b) { return b.label == label; });
}

void TypeRegistry::define(TypeLabel label, DataTypeDef def) {
  if (label.empty()) throw Error(ErrorCode::InvalidLabel, "type label must be non-empty");
  if (is_builtin(label)) throw Error(ErrorCode::ReservedLabel, "'" + label + "' is a pre-bound base type");
  if (index_.contains(label)) throw Error(ErrorCode::DuplicateTypeLabel, "'" + label + "' is already defined");
  index_.emplace(label, entries_.size());
  entries_.push_back({std::move(label), std::move(def)});
}

bool TypeRegistry::contains(std::string_view label) const noexcept { return find(label) != nullptr; }

const DataTypeDef* TypeRegistry::find(std::string_view label) const noexcept {
  for (const auto& b : builtins()) {
    if (b.label == label) return &b.def;
  }
  const auto it = index_.find(label);
  return it == index_.end() ? nullptr : &entries_[it->second].def;
}

const DataTypeDef* TypeRegistry::resolve(std::string_view label) const noexcept {
  const DataTypeDef* def = find(label);
  for (std::size_t steps = 0; def && steps <= entries_.size(); ++steps) {
    const auto* ref = std::get_if<TypeRef>(def);
    if (!ref) return def;
    def = find(ref->target);
  }
  return nullptr;
}

std::vector<TypeLabel> TypeRegistry::references(const DataTypeDef& def) {
  std::vector<TypeLabel> out;
  if (const auto* rec = std::get_if<RecordType>(&def)) {
    for (const auto& f : rec->fields) out.push_back(f.type);
  } else if (const auto* list = std::get_if<ListType>(&def)) {
    out.push_back(list->element);
  } else if (const auto* uni = std::get_if<UnionType>(&def)) {
    out = uni->alternatives;
  } else if (const auto* ref = std::get_if<TypeRef>(&def)) {
    out.push_back(ref->target);
  }
  return out;
}

// Least fixed point of "admits a finite value": leaves are finite, a record
// needs every field finite, a list needs min-count 0 or a finite element, a
// union needs one finite alternative, a reference inherits its target.
std::map<TypeLabel, bool> TypeRegistry::finiteness(bool treat_dangling_as_finite) const {
  std::map<TypeLabel, bool> finite;
  for (const auto& e : entries_) finite[e.label] = false;

  const auto lookup = [&](const TypeLabel& label) {
    if (is_builtin(label)) return true;
    const auto it = finite.find(label);
    return it == finite.end() ? treat_dangling_as_finite : it->second;
  };

  for (bool changed = true; changed;) {
    changed = false;
    for (const auto& e : entries_) {
      if (finite[e.label]) continue;
      const bool now = std::visit(
          [&](const auto& d) -> bool {
            using T = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<T, RecordType>) {
              return std::all_of(d.fields.begin(), d.fields.end(),
                                 [&](const FieldDecl& f) { return lookup(f.type); });
            } else if constexpr (std::is_same_v<T, ListType>) {
              return d.count.min == 0 || lookup(d.element);
            } else if constexpr (std::is_same_v<T, UnionType>) {
              return std::any_of(d.alternatives.begin(), d.alternatives.end(), lookup);
            } else if constexpr (std::is_same_v<T, TypeRef>) {
              return lookup(d.target);
            } else {
              return true;
            }
          },
          e.def);
      if (now) {
        finite[e.label] = true;
        changed = true;
      }
    }
  }
  return finite;
}

ValidationReport TypeRegistry::validate() const {
  ValidationReport report;
  for (const auto& e : entries_) {
    std::visit(
        [&](const auto& d) {
          using T = std::decay_t<decltype(d)>;
          if constexpr (std::is_same_v<T, RecordType>) {
            std::set<std::string> seen;
            for (const auto& f : d.fields) {
              if (!seen.insert(f.name).second) {
                report.add(ViolationCode::DuplicateFieldName, e.label, "field '" + f.name + "' declared twice");
              }
            }
          } else if constexpr (std::is_same_v<T, ListType>) {
            if (!d.count.well_formed()) {
              report.add(ViolationCode::InvalidBounds, e.label, "list count " + d.count.to_string() + " is empty");
            }
          } else if constexpr (std::is_same_v<T, UnionType>) {
            if (d.alternatives.size() < 2) {
              report.add(ViolationCode::InvalidBounds, e.label, "union needs at least two alternatives");
            }
            std::set<std::string> seen;
            for (const auto& alt : d.alternatives) {
              if (!seen.insert(alt).second) {
                report.add(ViolationCode::DuplicateAlternative, e.label, "alternative '" + alt + "' listed twice");
              }
            }
          } else if constexpr (std::is_same_v<T, ConstrainedBase>) {
            if (!literal_fits(d.kind, d.op, d.literal)) {
              report.add(ViolationCode::LiteralMismatch, e.label,
                         std::string("literal ") + to_literal(d.literal) + " does not fit " +
                             std::string(to_string(d.kind)) + " " + std::string(to_string(d.op)));
            }
          } else if constexpr (std::is_same_v<T, AnyType>) {
            report.add(ViolationCode::AnyTypeUsed, e.label, "anyType accepts every value; consider a precise type",
                       Severity::Warning);
          }
        },
        e.def);
    for (const auto& ref : references(e.def)) {
      if (!contains(ref)) {
        report.add(ViolationCode::DanglingReference, e.label, "references undefined type '" + ref + "'");
      }
    }
  }
  const auto finite = finiteness(true);
  for (const auto& e : entries_) {
    if (!finite.at(e.label)) {
      report.add(ViolationCode::NonFiniteType, e.label, "recursive definition has no finite value");
    }
  }
  return report;
}

bool TypeRegistry::is_finite(std::string_view label) const {
  std::set<std::string, std::less<>> seen;
  std::vector<std::string> stack{std::string(label)};
  while (!stack.empty()) {
    const std::string cur = std::move(stack.back());
    stack.pop_back();
    if (!seen.insert(cur).second) continue;
    const DataTypeDef* def = find(cur);
    if (!def) throw Error(ErrorCode::DanglingReference, "type '" + cur + "' is not defined");
    for (auto& ref : references(*def)) stack.push_back(std::move(ref));
  }
  if (is_builtin(label)) return true;
  return finiteness(false).at(std::string(label));
}

ViolationReport TypeRegistry::check_value(std::string_view label, const Value& value) const {
  ViolationReport report;
  check_into(label, value, std::string(label), 0, report);
  return report;
}

void TypeRegistry::check_into(std::string_view label, const Value& value, const std::string& path, int depth,
                              ViolationReport& report) const {
  const DataTypeDef* def = find(label);
  if (!def) {
    report.add(ViolationCode::TypeViolation, path, "type '" + std::string(label) + "' is not defined");
    return;
  }
  if (depth > kMaxCheckDepth) {
    report.add(ViolationCode::TypeViolation, path, "value nesting exceeds the supported depth");
    return;
  }
  const auto mismatch = [&](std::string_view expected) {
    report.add(ViolationCode::TypeViolation, path,
               "expected " + std::string(expected) + ", found " + std::string(value.carrier_name()));
  };
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, BaseType>) {
          if (!base_conforms(d.kind, value)) mismatch(to_string(d.kind));
        } else if constexpr (std::is_same_v<T, ConstrainedBase>) {
          if (!base_conforms(d.kind, value)) {
            mismatch(to_string(d.kind));
            return;
          }
          const auto holds = compare_values(value, d.op, d.literal);
          if (!holds || !*holds) {
            report.add(ViolationCode::TypeViolation, path,
                       "predicate " + std::string(to_string(d.op)) + " " + to_literal(d.literal) + " fails at " +
                           path + " (value " + to_literal(value) + ")");
          }
        } else if constexpr (std::is_same_v<T, RecordType>) {
          if (!value.is_record()) {
            mismatch("record " + std::string(label));
            return;
          }
          const auto& fields = value.as_record().fields;
          const std::size_t common = std::min(fields.size(), d.fields.size());
          for (std::size_t i = 0; i < common; ++i) {
            if (fields[i].name != d.fields[i].name) {
              report.add(ViolationCode::TypeViolation, path,
                         "field " + std::to_string(i + 1) + " should be '" + d.fields[i].name + "', found '" +
                             fields[i].name + "'");
              continue;
            }
            check_into(d.fields[i].type, fields[i].value, path + "." + d.fields[i].name, depth + 1, report);
          }
          for (std::size_t i = common; i < d.fields.size(); ++i) {
            report.add(ViolationCode::TypeViolation, path, "missing field '" + d.fields[i].name + "'");
          }
          for (std::size_t i = common; i < fields.size(); ++i) {
            report.add(ViolationCode::TypeViolation, path, "unexpected field '" + fields[i].name + "'");
          }
        } else if constexpr (std::is_same_v<T, ListType>) {
          if (!value.is_list()) {
            mismatch("list");
            return;
          }
          const auto& items = value.as_list().items;
          if (!d.count.admits(items.size())) {
            report.add(ViolationCode::TypeViolation, path,
                       "list has " + std::to_string(items.size()) + " elements, allowed " + d.count.to_string());
          }
          for (std::size_t i = 0; i < items.size(); ++i) {
            check_into(d.element, items[i], path + "[" + std::to_string(i) + "]", depth + 1, report);
          }
        } else if constexpr (std::is_same_v<T, UnionType>) {
          if (!value.is_tagged()) {
            mismatch("tagged union value");
            return;
          }
          const auto& tagged = value.as_tagged();
          if (std::find(d.alternatives.begin(), d.alternatives.end(), tagged.tag) == d.alternatives.end()) {
            report.add(ViolationCode::TypeViolation, path,
                       "'" + tagged.tag + "' is not an alternative of " + std::string(label));
            return;
          }
          if (tagged.inner) check_into(tagged.tag, *tagged.inner, path + "@" + tagged.tag, depth + 1, report);
        } else if constexpr (std::is_same_v<T, TypeRef>) {
          check_into(d.target, value, path, depth + 1, report);
        }
      },
      *def);
}

TypeRegistry define_type(TypeRegistry registry, TypeLabel label, DataTypeDef def) {
  registry.define(std::move(label), std::move(def));
  return registry;
}

ValidationReport validate_registry(const TypeRegistry& registry) { return registry.validate(); }

ViolationReport check_value(const TypeRegistry& registry, std::string_view label, const Value& value) {
  return registry.check_value(label, value);
}

bool is_finite(const TypeRegistry& registry, std::string_view label) { return registry.is_finite(label); }

}  // namespace tgm
