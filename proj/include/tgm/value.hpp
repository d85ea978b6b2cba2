#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace tgm {

/// Fixed-point decimal with four fractional digits. Money values are the
/// subset whose last two fractional digits are zero.
struct Decimal {
  static constexpr int kScale = 4;
  static constexpr std::int64_t kUnit = 10000;

  std::int64_t units = 0;

  static Decimal from_int(std::int64_t v) { return Decimal{v * kUnit}; }
  /// Accepts "-12", "3.5", "0.0001". Rejects more than kScale fraction digits.
  static std::optional<Decimal> parse(std::string_view text);

  bool fits_money() const noexcept { return units % 100 == 0; }
  /// Shortest form with at least one fractional digit, e.g. "12.5", "3.0".
  std::string to_string() const;

  auto operator<=>(const Decimal&) const = default;
};

struct Value;
struct FieldValue;

struct RecordVal {
  std::vector<FieldValue> fields;
  bool operator==(const RecordVal& other) const;
};

struct ListVal {
  std::vector<Value> items;
  bool operator==(const ListVal& other) const;
};

/// Value of a union type: the chosen alternative plus the payload.
struct TaggedVal {
  std::string tag;
  std::shared_ptr<const Value> inner;
  bool operator==(const TaggedVal& other) const;
};

/// Immutable value carrier checked against the type registry.
struct Value {
  using Data = std::variant<std::int64_t, std::string, bool, Decimal, RecordVal, ListVal, TaggedVal>;

  Data data;

  static Value integer(std::int64_t v) { return Value{Data{std::in_place_type<std::int64_t>, v}}; }
  static Value text(std::string v) { return Value{Data{std::in_place_type<std::string>, std::move(v)}}; }
  static Value boolean(bool v) { return Value{Data{std::in_place_type<bool>, v}}; }
  static Value decimal(Decimal v) { return Value{Data{std::in_place_type<Decimal>, v}}; }
  static Value record(std::vector<FieldValue> fields);
  static Value empty_record() { return Value{Data{std::in_place_type<RecordVal>}}; }
  static Value list(std::vector<Value> items);
  static Value tagged(std::string tag, Value inner);

  bool is_int() const noexcept { return std::holds_alternative<std::int64_t>(data); }
  bool is_string() const noexcept { return std::holds_alternative<std::string>(data); }
  bool is_bool() const noexcept { return std::holds_alternative<bool>(data); }
  bool is_decimal() const noexcept { return std::holds_alternative<Decimal>(data); }
  bool is_record() const noexcept { return std::holds_alternative<RecordVal>(data); }
  bool is_list() const noexcept { return std::holds_alternative<ListVal>(data); }
  bool is_tagged() const noexcept { return std::holds_alternative<TaggedVal>(data); }

  std::int64_t as_int() const { return std::get<std::int64_t>(data); }
  const std::string& as_string() const { return std::get<std::string>(data); }
  bool as_bool() const { return std::get<bool>(data); }
  Decimal as_decimal() const { return std::get<Decimal>(data); }
  const RecordVal& as_record() const { return std::get<RecordVal>(data); }
  const ListVal& as_list() const { return std::get<ListVal>(data); }
  const TaggedVal& as_tagged() const { return std::get<TaggedVal>(data); }

  /// Field lookup on record values; nullptr for other carriers or unknown names.
  const Value* field(std::string_view name) const;
  /// Follows a dotted field path through nested records.
  const Value* at_path(const std::vector<std::string>& path) const;

  /// Human readable carrier name: "int", "string", "record", ...
  std::string_view carrier_name() const;

  bool operator==(const Value& other) const { return data == other.data; }
};

struct FieldValue {
  std::string name;
  Value value;
  bool operator==(const FieldValue&) const = default;
};

inline bool RecordVal::operator==(const RecordVal& other) const { return fields == other.fields; }
inline bool ListVal::operator==(const ListVal& other) const { return items == other.items; }
inline bool TaggedVal::operator==(const TaggedVal& other) const {
  if (tag != other.tag) return false;
  if (!inner || !other.inner) return inner == other.inner;
  return *inner == *other.inner;
}

/// True if the string is a plain identifier: [A-Za-z_][A-Za-z0-9_]*.
bool is_identifier(std::string_view s) noexcept;
/// Identifier as-is, anything else back-quoted with escapes.
std::string quote_label(std::string_view label);
/// Double-quoted string literal with backslash escapes.
std::string quote_string(std::string_view s);

/// Canonical literal syntax, shared by the printer and by uniqueness checks.
std::string to_literal(const Value& v);

}  // namespace tgm
