#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tgm/multiplicity.hpp"
#include "tgm/report.hpp"
#include "tgm/value.hpp"

namespace tgm {

using TypeLabel = std::string;

enum class BaseKind { Int, String, Bool, Decimal, Money };

enum class Comparison { Less, LessEq, Equal, GreaterEq, Greater, NotEqual };

std::string_view to_string(BaseKind kind);
std::string_view to_string(Comparison op);
std::optional<BaseKind> base_kind_from(std::string_view name);

/// Evaluates `lhs op rhs` on same-carrier scalars (ints are widened to
/// decimals when compared against a decimal). nullopt when incomparable.
std::optional<bool> compare_values(const Value& lhs, Comparison op, const Value& rhs);

struct BaseType {
  BaseKind kind;
  bool operator==(const BaseType&) const = default;
};

/// A base type refined by one comparison against a literal, e.g. `int > 0`.
struct ConstrainedBase {
  BaseKind kind;
  Comparison op;
  Value literal;
  bool operator==(const ConstrainedBase&) const = default;
};

struct FieldDecl {
  std::string name;
  TypeLabel type;
  bool operator==(const FieldDecl&) const = default;
};

/// Ordered record; field order is significant.
struct RecordType {
  std::vector<FieldDecl> fields;
  bool operator==(const RecordType&) const = default;
};

struct ListType {
  TypeLabel element;
  Multiplicity count;
  bool operator==(const ListType&) const = default;
};

struct UnionType {
  std::vector<TypeLabel> alternatives;
  bool operator==(const UnionType&) const = default;
};

struct AnyType {
  bool operator==(const AnyType&) const = default;
};

struct TypeRef {
  TypeLabel target;
  bool operator==(const TypeRef&) const = default;
};

using DataTypeDef = std::variant<BaseType, ConstrainedBase, RecordType, ListType, UnionType, AnyType, TypeRef>;

/// Named data types. Base types (int, string, bool, decimal, money) and the
/// record `date` are pre-bound and cannot be redefined. Labels are nominal:
/// two labels with identical definitions are still distinct types.
class TypeRegistry {
 public:
  struct Entry {
    TypeLabel label;
    DataTypeDef def;
    bool operator==(const Entry&) const = default;
  };

  TypeRegistry() = default;

  /// Binds a new label. Referenced labels are not resolved until validate().
  void define(TypeLabel label, DataTypeDef def);

  static bool is_builtin(std::string_view label) noexcept;
  bool contains(std::string_view label) const noexcept;
  /// Definition bound to a label (builtins included); nullptr if unbound.
  const DataTypeDef* find(std::string_view label) const noexcept;
  /// Follows TypeRef chains; nullptr on a dangling or cyclic chain.
  const DataTypeDef* resolve(std::string_view label) const noexcept;

  /// User-defined entries in definition order (builtins excluded).
  const std::vector<Entry>& entries() const noexcept { return entries_; }

  /// Dangling references, non-finite recursion, malformed definitions; AnyType
  /// use is reported as a warning.
  ValidationReport validate() const;

  /// Conformance of a value to the named type. Paths in the report start at
  /// the label, e.g. "OrderLine.posNo" or "Part.components[2]".
  ViolationReport check_value(std::string_view label, const Value& value) const;

  /// True iff the type admits a finite value. Throws DanglingReference if an
  /// unbound label is reachable from `label`.
  bool is_finite(std::string_view label) const;

  /// Labels directly referenced by a definition.
  static std::vector<TypeLabel> references(const DataTypeDef& def);

  bool operator==(const TypeRegistry& other) const { return entries_ == other.entries_; }

 private:
  std::map<TypeLabel, bool> finiteness(bool treat_dangling_as_finite) const;
  void check_into(std::string_view label, const Value& value, const std::string& path, int depth,
                  ViolationReport& report) const;

  std::vector<Entry> entries_;
  std::map<TypeLabel, std::size_t, std::less<>> index_;
};

// Free-function forms of the registry operations.
TypeRegistry define_type(TypeRegistry registry, TypeLabel label, DataTypeDef def);
ValidationReport validate_registry(const TypeRegistry& registry);
ViolationReport check_value(const TypeRegistry& registry, std::string_view label, const Value& value);
bool is_finite(const TypeRegistry& registry, std::string_view label);

}  // namespace tgm
