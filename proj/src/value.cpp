#include "tgm/value.hpp"

#include <cctype>
#include <cstdio>
#include <limits>

namespace tgm {

std::optional<Decimal> Decimal::parse(std::string_view text) {
  if (text.empty()) return std::nullopt;
  bool negative = false;
  std::size_t i = 0;
  if (text[0] == '-' || text[0] == '+') {
    negative = text[0] == '-';
    ++i;
  }
  const std::size_t int_start = i;
  unsigned __int128 whole = 0;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
    whole = whole * 10 + static_cast<unsigned>(text[i] - '0');
    if (whole > static_cast<unsigned __int128>(std::numeric_limits<std::int64_t>::max())) return std::nullopt;
    ++i;
  }
  if (i == int_start) return std::nullopt;
  std::int64_t frac = 0;
  if (i < text.size()) {
    if (text[i] != '.') return std::nullopt;
    ++i;
    int digits = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      if (++digits > kScale) return std::nullopt;
      frac = frac * 10 + (text[i] - '0');
      ++i;
    }
    if (digits == 0 || i != text.size()) return std::nullopt;
    for (; digits < kScale; ++digits) frac *= 10;
  }
  const unsigned __int128 magnitude = whole * kUnit + static_cast<unsigned __int128>(frac);
  if (magnitude > static_cast<unsigned __int128>(std::numeric_limits<std::int64_t>::max())) return std::nullopt;
  const auto units = static_cast<std::int64_t>(magnitude);
  return Decimal{negative ? -units : units};
}

std::string Decimal::to_string() const {
  const bool negative = units < 0;
  const std::uint64_t magnitude =
      negative ? static_cast<std::uint64_t>(-(units + 1)) + 1 : static_cast<std::uint64_t>(units);
  const std::uint64_t whole = magnitude / kUnit;
  const std::uint64_t frac = magnitude % kUnit;
  char buf[8];
  std::snprintf(buf, sizeof buf, "%04llu", static_cast<unsigned long long>(frac));
  std::string frac_text(buf);
  while (frac_text.size() > 1 && frac_text.back() == '0') frac_text.pop_back();
  return (negative ? "-" : "") + std::to_string(whole) + "." + frac_text;
}

Value Value::record(std::vector<FieldValue> fields) {
  return Value{Data{std::in_place_type<RecordVal>, RecordVal{std::move(fields)}}};
}

Value Value::list(std::vector<Value> items) {
  return Value{Data{std::in_place_type<ListVal>, ListVal{std::move(items)}}};
}

Value Value::tagged(std::string tag, Value inner) {
  return Value{Data{std::in_place_type<TaggedVal>,
                    TaggedVal{std::move(tag), std::make_shared<const Value>(std::move(inner))}}};
}

const Value* Value::field(std::string_view name) const {
  const auto* rec = std::get_if<RecordVal>(&data);
  if (!rec) return nullptr;
  for (const auto& f : rec->fields) {
    if (f.name == name) return &f.value;
  }
  return nullptr;
}

const Value* Value::at_path(const std::vector<std::string>& path) const {
  const Value* cur = this;
  for (const auto& part : path) {
    cur = cur->field(part);
    if (!cur) return nullptr;
  }
  return cur;
}

std::string_view Value::carrier_name() const {
  switch (data.index()) {
    case 0: return "int";
    case 1: return "string";
    case 2: return "bool";
    case 3: return "decimal";
    case 4: return "record";
    case 5: return "list";
    case 6: return "tagged";
  }
  return "?";
}

bool is_identifier(std::string_view s) noexcept {
  if (s.empty()) return false;
  const auto head = static_cast<unsigned char>(s.front());
  if (!(std::isalpha(head) || head == '_')) return false;
  for (const char c : s) {
    const auto u = static_cast<unsigned char>(c);
    if (!(std::isalnum(u) || u == '_')) return false;
  }
  return true;
}

namespace {

void append_escaped(std::string& out, std::string_view s, char quote) {
  out.push_back(quote);
  for (const char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (c == quote) {
          out.push_back('\\');
          out.push_back(c);
        } else if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u{%x}", static_cast<unsigned>(static_cast<unsigned char>(c)));
          out += buf;
        } else {
          out.push_back(c);
        }
    }
  }
  out.push_back(quote);
}

void append_literal(std::string& out, const Value& v) {
  std::visit(
      [&out](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, std::int64_t>) {
          out += std::to_string(x);
        } else if constexpr (std::is_same_v<T, std::string>) {
          append_escaped(out, x, '"');
        } else if constexpr (std::is_same_v<T, bool>) {
          out += x ? "true" : "false";
        } else if constexpr (std::is_same_v<T, Decimal>) {
          out += x.to_string();
        } else if constexpr (std::is_same_v<T, RecordVal>) {
          out.push_back('{');
          for (std::size_t i = 0; i < x.fields.size(); ++i) {
            if (i) out += ", ";
            out += quote_label(x.fields[i].name);
            out += ": ";
            append_literal(out, x.fields[i].value);
          }
          out.push_back('}');
        } else if constexpr (std::is_same_v<T, ListVal>) {
          out.push_back('[');
          for (std::size_t i = 0; i < x.items.size(); ++i) {
            if (i) out += ", ";
            append_literal(out, x.items[i]);
          }
          out.push_back(']');
        } else {
          out.push_back('@');
          out += quote_label(x.tag);
          out.push_back('(');
          if (x.inner) append_literal(out, *x.inner);
          out.push_back(')');
        }
      },
      v.data);
}

}  // namespace

std::string quote_label(std::string_view label) {
  if (is_identifier(label)) return std::string(label);
  std::string out;
  append_escaped(out, label, '`');
  return out;
}

std::string quote_string(std::string_view s) {
  std::string out;
  append_escaped(out, s, '"');
  return out;
}

std::string to_literal(const Value& v) {
  std::string out;
  append_literal(out, v);
  return out;
}

}  // namespace tgm
