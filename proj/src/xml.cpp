#include "tgm/xml.hpp"

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <charconv>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "tgm/error.hpp"

namespace tgm {

namespace {

namespace pt = boost::property_tree;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

XmlElement convert(const std::string& name, const pt::ptree& tree) {
  XmlElement e;
  e.name = name;
  e.text = trim(tree.data());
  for (const auto& [key, child] : tree) {
    if (key == "<xmlattr>") {
      for (const auto& [attr, value] : child) e.attributes.emplace_back(attr, value.data());
    } else if (key == "<xmlcomment>") {
      continue;
    } else {
      e.children.push_back(convert(key, child));
    }
  }
  return e;
}

std::string local_name(std::string_view qname) {
  const auto colon = qname.find(':');
  return std::string(colon == std::string_view::npos ? qname : qname.substr(colon + 1));
}

std::string prefix_of(std::string_view qname) {
  const auto colon = qname.find(':');
  return colon == std::string_view::npos ? std::string() : std::string(qname.substr(0, colon));
}

const std::string* attr(const XmlElement& e, std::string_view name) {
  for (const auto& [k, v] : e.attributes) {
    if (k == name) return &v;
  }
  return nullptr;
}

[[noreturn]] void unsupported(const std::string& msg) { throw Error(ErrorCode::UnsupportedXsdFeature, msg); }

std::optional<BaseKind> xsd_builtin(std::string_view name) {
  static const std::map<std::string_view, BaseKind> kMap = {
      {"string", BaseKind::String},           {"normalizedString", BaseKind::String},
      {"token", BaseKind::String},            {"integer", BaseKind::Int},
      {"int", BaseKind::Int},                 {"long", BaseKind::Int},
      {"short", BaseKind::Int},               {"byte", BaseKind::Int},
      {"nonNegativeInteger", BaseKind::Int},  {"positiveInteger", BaseKind::Int},
      {"unsignedInt", BaseKind::Int},         {"boolean", BaseKind::Bool},
      {"decimal", BaseKind::Decimal},         {"double", BaseKind::Decimal},
      {"float", BaseKind::Decimal},
  };
  const auto it = kMap.find(name);
  if (it == kMap.end()) return std::nullopt;
  return it->second;
}

std::optional<std::uint32_t> occurs_value(const XmlElement& e, std::string_view name, std::uint32_t fallback,
                                          bool allow_unbounded, bool& unbounded) {
  unbounded = false;
  const std::string* v = attr(e, name);
  if (!v) return fallback;
  if (*v == "unbounded" && allow_unbounded) {
    unbounded = true;
    return std::nullopt;
  }
  std::uint32_t n = 0;
  const auto [p, ec] = std::from_chars(v->data(), v->data() + v->size(), n);
  if (ec != std::errc() || p != v->data() + v->size()) {
    throw Error(ErrorCode::MalformedInput, std::string(name) + "=\"" + *v + "\" is not a count");
  }
  return n;
}

Multiplicity occurs_of(const XmlElement& e) {
  bool unbounded = false;
  const std::uint32_t min = *occurs_value(e, "minOccurs", 1, false, unbounded);
  const auto max = occurs_value(e, "maxOccurs", 1, true, unbounded);
  if (max && *max == 0) unsupported("maxOccurs=\"0\" on '" + e.name + "'");
  Multiplicity m{min, max};
  if (!m.well_formed()) throw Error(ErrorCode::MalformedInput, "minOccurs exceeds maxOccurs on '" + e.name + "'");
  return m;
}

Multiplicity multiply(const Multiplicity& a, const Multiplicity& b) {
  Multiplicity m;
  m.min = a.min * b.min;
  if (a.max && b.max) m.max = *a.max * *b.max;
  return m;
}

std::optional<Value> parse_kind(BaseKind kind, std::string_view text) {
  switch (kind) {
    case BaseKind::String: return Value::text(std::string(text));
    case BaseKind::Int: {
      std::int64_t v = 0;
      std::string_view t = text;
      if (!t.empty() && t.front() == '+') t.remove_prefix(1);
      const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
      if (t.empty() || ec != std::errc() || p != t.data() + t.size()) return std::nullopt;
      return Value::integer(v);
    }
    case BaseKind::Bool:
      if (text == "true" || text == "1") return Value::boolean(true);
      if (text == "false" || text == "0") return Value::boolean(false);
      return std::nullopt;
    case BaseKind::Decimal:
    case BaseKind::Money: {
      const auto d = Decimal::parse(text);
      if (!d || (kind == BaseKind::Money && !d->fits_money())) return std::nullopt;
      return Value::decimal(*d);
    }
  }
  return std::nullopt;
}

std::optional<Value> parse_date(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  int y = 0, m = 0, d = 0;
  const auto num = [&](std::size_t at, std::size_t len, int& out) {
    const auto [p, ec] = std::from_chars(text.data() + at, text.data() + at + len, out);
    return ec == std::errc() && p == text.data() + at + len;
  };
  if (!num(0, 4, y) || !num(5, 2, m) || !num(8, 2, d) || m < 1 || m > 12 || d < 1 || d > 31) return std::nullopt;
  return Value::record({{"day", Value::integer(d)}, {"month", Value::integer(m)}, {"year", Value::integer(y)}});
}

class XsdReader {
 public:
  explicit XsdReader(const XmlElement& schema) : schema_(schema), xs_prefix_(prefix_of(schema.name)) {
    if (local_name(schema.name) != "schema") throw Error(ErrorCode::MalformedInput, "root element is not xs:schema");
    for (const auto& child : schema.children) {
      const std::string kind = local_name(child.name);
      const std::string* name = attr(child, "name");
      if (kind == "simpleType" || kind == "complexType") {
        if (!name) unsupported("global " + kind + " without a name");
        (kind == "simpleType" ? simple_decls_ : complex_decls_).emplace(*name, &child);
      }
    }
  }

  XsdSubset run() {
    const XmlElement* root = nullptr;
    for (const auto& child : schema_.children) {
      const std::string kind = local_name(child.name);
      if (kind == "element") {
        if (root) unsupported("more than one global element");
        root = &child;
      } else if (kind == "simpleType") {
        simple_label(*attr(child, "name"));
      } else if (kind == "complexType" || kind == "annotation") {
        continue;
      } else {
        unsupported("xs:" + kind);
      }
    }
    if (!root) throw Error(ErrorCode::MalformedInput, "schema declares no element");
    XsdSubset out;
    out.root = element(*root, 0);
    out.simple_types = std::move(simple_types_);
    return out;
  }

 private:
  /// Registry label for a type reference appearing in a type= or base= attribute.
  TypeLabel type_label(const std::string& qname) {
    const std::string prefix = prefix_of(qname);
    const std::string local = local_name(qname);
    const bool user = simple_decls_.contains(local) && prefix != xs_prefix_;
    if (!user && (prefix == xs_prefix_ || !simple_decls_.contains(local))) {
      if (local == "date") return "date";
      if (const auto kind = xsd_builtin(local)) return std::string(to_string(*kind));
      if (complex_decls_.contains(local) && prefix != xs_prefix_) unsupported("complex type '" + local + "' used as simple type");
      unsupported("type '" + qname + "'");
    }
    return simple_label(local);
  }

  TypeLabel simple_label(const std::string& name) {
    if (const auto it = done_.find(name); it != done_.end()) return it->second;
    if (!in_progress_.insert(name).second) unsupported("recursive simple type '" + name + "'");
    const TypeLabel label = name;
    DataTypeDef def = restriction(*simple_decls_.at(name), name);
    if (TypeRegistry::is_builtin(label)) unsupported("simple type '" + name + "' shadows a built-in type");
    simple_types_.emplace_back(label, std::move(def));
    done_.emplace(name, label);
    in_progress_.erase(name);
    return label;
  }

  TypeLabel anonymous_simple(const XmlElement& st, const std::string& owner) {
    std::string label = owner + "_value";
    while (done_.contains(label) || simple_decls_.contains(label)) label += "_";
    DataTypeDef def = restriction(st, label);
    simple_types_.emplace_back(label, std::move(def));
    done_.emplace(label, label);
    return label;
  }

  DataTypeDef restriction(const XmlElement& st, const std::string& name) {
    const XmlElement* r = nullptr;
    for (const auto& c : st.children) {
      const std::string kind = local_name(c.name);
      if (kind == "restriction" && !r) {
        r = &c;
      } else if (kind != "annotation") {
        unsupported("xs:" + kind + " in simple type '" + name + "'");
      }
    }
    if (!r) unsupported("simple type '" + name + "' without restriction");
    const std::string* base = attr(*r, "base");
    if (!base) unsupported("restriction without base in '" + name + "'");
    const TypeLabel base_label = type_label(*base);
    std::optional<BaseKind> kind = base_kind_from(base_label);
    std::optional<std::pair<Comparison, std::string>> bound;
    std::optional<std::uint32_t> fraction;
    for (const auto& f : r->children) {
      const std::string facet = local_name(f.name);
      if (facet == "annotation") continue;
      const std::string* value = attr(f, "value");
      if (!value) throw Error(ErrorCode::MalformedInput, "facet without value in '" + name + "'");
      static const std::map<std::string, Comparison> kBounds = {{"minInclusive", Comparison::GreaterEq},
                                                                {"minExclusive", Comparison::Greater},
                                                                {"maxInclusive", Comparison::LessEq},
                                                                {"maxExclusive", Comparison::Less}};
      if (const auto b = kBounds.find(facet); b != kBounds.end()) {
        if (bound) unsupported("more than one bound facet in '" + name + "'");
        bound.emplace(b->second, *value);
      } else if (facet == "fractionDigits") {
        std::uint32_t n = 0;
        const auto [p, ec] = std::from_chars(value->data(), value->data() + value->size(), n);
        if (ec != std::errc() || p != value->data() + value->size()) {
          throw Error(ErrorCode::MalformedInput, "bad fractionDigits in '" + name + "'");
        }
        fraction = n;
      } else {
        unsupported("facet xs:" + facet + " in '" + name + "'");
      }
    }
    if (!bound && !fraction) return TypeRef{base_label};
    if (!kind) unsupported("facets on non-base type in '" + name + "'");
    if (fraction) {
      if (*kind != BaseKind::Decimal && *kind != BaseKind::Money) unsupported("fractionDigits on non-decimal '" + name + "'");
      if (*fraction > static_cast<std::uint32_t>(Decimal::kScale)) unsupported("fractionDigits above 4 in '" + name + "'");
      if (*fraction <= 2) kind = BaseKind::Money;
    }
    if (!bound) return BaseType{*kind};
    auto literal = parse_kind(*kind == BaseKind::Money ? BaseKind::Decimal : *kind, bound->second);
    if (!literal || *kind == BaseKind::Bool || *kind == BaseKind::String) {
      unsupported("bound '" + bound->second + "' on '" + name + "'");
    }
    return ConstrainedBase{*kind, bound->first, std::move(*literal)};
  }

  XsdAttribute attribute(const XmlElement& a) {
    if (attr(a, "ref")) unsupported("attribute ref");
    if (attr(a, "default") || attr(a, "fixed")) unsupported("attribute default/fixed values");
    const std::string* name = attr(a, "name");
    if (!name) throw Error(ErrorCode::MalformedInput, "attribute without a name");
    XsdAttribute out;
    out.name = *name;
    const std::string* use = attr(a, "use");
    if (use && *use == "prohibited") unsupported("prohibited attribute '" + *name + "'");
    out.required = use && *use == "required";
    const XmlElement* inline_type = nullptr;
    for (const auto& c : a.children) {
      const std::string kind = local_name(c.name);
      if (kind == "simpleType") {
        inline_type = &c;
      } else if (kind != "annotation") {
        unsupported("xs:" + kind + " in attribute '" + *name + "'");
      }
    }
    if (const std::string* t = attr(a, "type")) {
      out.type = type_label(*t);
    } else if (inline_type) {
      out.type = anonymous_simple(*inline_type, *name);
    } else {
      out.type = "string";
    }
    return out;
  }

  XsdElement element(const XmlElement& e, int depth) {
    if (depth > 32) unsupported("element nesting too deep (recursive complex types)");
    for (const char* a : {"ref", "substitutionGroup", "abstract", "default", "fixed"}) {
      if (attr(e, a)) unsupported(std::string("element ") + a);
    }
    if (const std::string* n = attr(e, "nillable"); n && *n == "true") unsupported("nillable elements");
    const std::string* name = attr(e, "name");
    if (!name) throw Error(ErrorCode::MalformedInput, "element without a name");
    XsdElement out;
    out.name = *name;
    out.occurs = occurs_of(e);
    const XmlElement* inline_complex = nullptr;
    const XmlElement* inline_simple = nullptr;
    for (const auto& c : e.children) {
      const std::string kind = local_name(c.name);
      if (kind == "complexType") {
        inline_complex = &c;
      } else if (kind == "simpleType") {
        inline_simple = &c;
      } else if (kind != "annotation") {
        unsupported("xs:" + kind + " in element '" + *name + "'");
      }
    }
    if (const std::string* t = attr(e, "type")) {
      const std::string local = local_name(*t);
      if (prefix_of(*t) != xs_prefix_ && complex_decls_.contains(local)) {
        complex_type(*complex_decls_.at(local), out, depth);
      } else {
        out.simple_type = type_label(*t);
      }
    } else if (inline_complex) {
      complex_type(*inline_complex, out, depth);
    } else if (inline_simple) {
      out.simple_type = anonymous_simple(*inline_simple, *name);
    } else {
      unsupported("element '" + *name + "' without a type (xs:anyType)");
    }
    return out;
  }

  void complex_type(const XmlElement& ct, XsdElement& out, int depth) {
    if (const std::string* m = attr(ct, "mixed"); m && *m == "true") unsupported("mixed content");
    for (const auto& c : ct.children) {
      const std::string kind = local_name(c.name);
      if (kind == "sequence") {
        sequence(c, Multiplicity::exactly(1), out.children, depth);
      } else if (kind == "attribute") {
        out.attributes.push_back(attribute(c));
      } else if (kind == "simpleContent") {
        simple_content(c, out);
      } else if (kind != "annotation") {
        unsupported("xs:" + kind);
      }
    }
    std::set<std::string> names;
    for (const auto& ch : out.children) {
      if (!names.insert(ch.name).second) unsupported("element '" + ch.name + "' appears twice in one sequence");
    }
    std::set<std::string> attrs;
    for (const auto& a : out.attributes) {
      if (!attrs.insert(a.name).second) throw Error(ErrorCode::MalformedInput, "attribute '" + a.name + "' declared twice");
    }
  }

  void simple_content(const XmlElement& sc, XsdElement& out) {
    for (const auto& c : sc.children) {
      const std::string kind = local_name(c.name);
      if (kind == "extension") {
        const std::string* base = attr(c, "base");
        if (!base) throw Error(ErrorCode::MalformedInput, "extension without base");
        out.text_type = type_label(*base);
        for (const auto& a : c.children) {
          const std::string akind = local_name(a.name);
          if (akind == "attribute") {
            out.attributes.push_back(attribute(a));
          } else if (akind != "annotation") {
            unsupported("xs:" + akind + " in simple content");
          }
        }
      } else if (kind != "annotation") {
        unsupported("xs:" + kind + " in simple content");
      }
    }
  }

  void sequence(const XmlElement& seq, const Multiplicity& outer, std::vector<XsdElement>& out, int depth) {
    const Multiplicity combined = multiply(outer, occurs_of(seq));
    std::size_t items = 0;
    for (const auto& c : seq.children) {
      const std::string kind = local_name(c.name);
      if (kind == "element" || kind == "sequence") ++items;
    }
    if (combined.max != 1u && items > 1) unsupported("repeating sequence with more than one particle");
    for (const auto& c : seq.children) {
      const std::string kind = local_name(c.name);
      if (kind == "element") {
        XsdElement child = element(c, depth + 1);
        child.occurs = multiply(combined, child.occurs);
        out.push_back(std::move(child));
      } else if (kind == "sequence") {
        sequence(c, combined, out, depth);
      } else if (kind != "annotation") {
        unsupported("xs:" + kind);
      }
    }
  }

  const XmlElement& schema_;
  std::string xs_prefix_;
  std::map<std::string, const XmlElement*> simple_decls_;
  std::map<std::string, const XmlElement*> complex_decls_;
  std::map<std::string, TypeLabel> done_;
  std::set<std::string> in_progress_;
  std::vector<std::pair<TypeLabel, DataTypeDef>> simple_types_;
};

/// Labels chosen for every declaration; shared by schema and data import.
struct Layout {
  TypedGraphSchema schema;
  std::map<const XsdElement*, TypeLabel> node_label;      // expanded
  std::map<const XsdElement*, TypeLabel> edge_label;      // expanded, keyed by child
  std::map<const XsdElement*, TypeLabel> record_label;    // compact
  bool ordinals = false;
};

class LayoutBuilder {
 public:
  LayoutBuilder(const XsdSubset& xsd, const XmlOptions& options, std::string name)
      : xsd_(xsd), options_(options) {
    layout_.schema = TypedGraphSchema(std::move(name));
    layout_.ordinals = options.strategy == XmlStrategy::Expanded && options.ordinals;
  }

  Layout run() {
    try {
      for (const auto& [label, def] : xsd_.simple_types) define(label, def);
      if (options_.strategy == XmlStrategy::Compact) {
        const TypeLabel payload = compact_type(xsd_.root);
        layout_.schema.add_node_type(xsd_.root.name, payload);
      } else {
        if (layout_.ordinals) {
          ordinal_type_ = fresh_type("Ordinal");
          define(ordinal_type_, RecordType{{FieldDecl{"ordinal", "int"}}});
        }
        expanded_node(xsd_.root);
        expanded_edges(xsd_.root);
      }
    } catch (const Error& e) {
      if (e.code() == ErrorCode::UnsupportedXsdFeature) throw;
      unsupported(std::string("naming conflict: ") + e.what());
    }
    return std::move(layout_);
  }

 private:
  void define(const TypeLabel& label, DataTypeDef def) {
    types_.insert(label);
    layout_.schema.define_type(label, std::move(def));
  }

  TypeLabel fresh_type(const std::string& base) {
    std::string label = base;
    for (int i = 2; types_.contains(label) || TypeRegistry::is_builtin(label); ++i) label = base + "_" + std::to_string(i);
    types_.insert(label);
    return label;
  }

  TypeLabel fresh_element(const std::string& base) {
    std::string label = base;
    for (int i = 2; elements_.contains(label); ++i) label = base + "_" + std::to_string(i);
    elements_.insert(label);
    return label;
  }

  TypeLabel wrap(const TypeLabel& inner, const Multiplicity& m) {
    if (m == Multiplicity::exactly(1)) return inner;
    const auto key = std::make_pair(inner, m.to_string());
    if (const auto it = wrappers_.find(key); it != wrappers_.end()) return it->second;
    const TypeLabel label = fresh_type(m == Multiplicity::between(0, 1) ? "opt_" + inner : inner + "_list");
    define(label, ListType{inner, m});
    wrappers_.emplace(key, label);
    return label;
  }

  void attribute_fields(const XsdElement& e, RecordType& r) {
    for (const auto& a : e.attributes) {
      r.fields.push_back(FieldDecl{"@" + a.name, a.required ? a.type : wrap(a.type, Multiplicity::between(0, 1))});
    }
  }

  TypeLabel compact_type(const XsdElement& e) {
    if (e.is_simple()) return *e.simple_type;
    RecordType r;
    attribute_fields(e, r);
    if (e.text_type) r.fields.push_back(FieldDecl{"#text", *e.text_type});
    for (const auto& c : e.children) r.fields.push_back(FieldDecl{c.name, wrap(compact_type(c), c.occurs)});
    const TypeLabel label = fresh_type(e.name);
    define(label, std::move(r));
    layout_.record_label.emplace(&e, label);
    return label;
  }

  void expanded_node(const XsdElement& e) {
    const TypeLabel node = fresh_element(e.name);
    RecordType r;
    attribute_fields(e, r);
    if (e.text_type) r.fields.push_back(FieldDecl{"#text", *e.text_type});
    if (e.simple_type) r.fields.push_back(FieldDecl{"#text", *e.simple_type});
    const TypeLabel payload = fresh_type(node);
    define(payload, std::move(r));
    layout_.schema.add_node_type(node, payload);
    layout_.node_label.emplace(&e, node);
    for (const auto& c : e.children) expanded_node(c);
  }

  void expanded_edges(const XsdElement& e) {
    const TypeLabel& parent = layout_.node_label.at(&e);
    for (const auto& c : e.children) {
      const TypeLabel& child = layout_.node_label.at(&c);
      const TypeLabel label = fresh_element(parent + "_" + child);
      std::optional<TypeLabel> prop;
      if (layout_.ordinals) prop = ordinal_type_;
      layout_.schema.add_edge_type(
          EdgeType{label, prop, {Endpoint{parent, c.occurs}}, {Endpoint{child, Multiplicity::exactly(1)}}});
      layout_.edge_label.emplace(&c, label);
    }
    for (const auto& c : e.children) expanded_edges(c);
  }

  const XsdSubset& xsd_;
  XmlOptions options_;
  Layout layout_;
  std::set<TypeLabel> types_;
  std::set<TypeLabel> elements_;
  std::map<std::pair<TypeLabel, std::string>, TypeLabel> wrappers_;
  TypeLabel ordinal_type_;
};

bool ignorable_attribute(std::string_view name) {
  return name == "xmlns" || name.starts_with("xmlns:") || name.starts_with("xsi:");
}

class DocumentReader {
 public:
  DocumentReader(const XsdSubset& xsd, const Layout& layout, const XmlOptions& options, XmlData& out)
      : layout_(layout), options_(options), out_(out) {
    for (const auto& [label, def] : xsd.simple_types) registry_.define(label, def);
  }

  void run(const XmlElement& doc, const XsdElement& root) {
    if (doc.name != root.name) {
      mismatch(doc.name, "root element is '" + doc.name + "', schema expects '" + root.name + "'");
      return;
    }
    if (options_.strategy == XmlStrategy::Compact) {
      auto v = compact_value(doc, root, root.name);
      if (v) out_.batch.insert_node(root.name, std::move(*v), root.name);
    } else {
      expanded(doc, root, root.name);
    }
  }

 private:
  void mismatch(const std::string& path, const std::string& detail) {
    out_.report.add(ViolationCode::DocumentSchemaMismatch, path, detail);
  }

  std::optional<Value> simple(const TypeLabel& type, const std::string& text, const std::string& path) {
    TypeLabel t = type;
    for (int guard = 0; guard < 64; ++guard) {
      const DataTypeDef* def = registry_.find(t);
      const auto* ref = def ? std::get_if<TypeRef>(def) : nullptr;
      if (!ref) break;
      t = ref->target;
    }
    std::optional<Value> v;
    if (t == "date") {
      v = parse_date(text);
    } else if (const DataTypeDef* def = registry_.resolve(t)) {
      if (const auto* b = std::get_if<BaseType>(def)) v = parse_kind(b->kind, text);
      if (const auto* c = std::get_if<ConstrainedBase>(def)) v = parse_kind(c->kind, text);
    }
    if (!v) {
      mismatch(path, "'" + text + "' is not a valid " + type);
      return std::nullopt;
    }
    const auto report = registry_.check_value(type, *v);
    if (!report.ok()) {
      mismatch(path, report.sorted().front().detail);
      return std::nullopt;
    }
    return v;
  }

  /// Attribute fields and "#text" in declaration order; false on mismatch.
  bool header_fields(const XmlElement& doc, const XsdElement& decl, const std::string& path,
                     std::vector<FieldValue>& fields) {
    bool ok = true;
    for (const auto& [name, value] : doc.attributes) {
      if (ignorable_attribute(name)) continue;
      const bool declared = std::any_of(decl.attributes.begin(), decl.attributes.end(),
                                        [&](const XsdAttribute& a) { return a.name == name; });
      if (!declared) {
        mismatch(path + "/@" + name, "undeclared attribute");
        ok = false;
      }
    }
    for (const auto& a : decl.attributes) {
      const std::string* raw = attr(doc, a.name);
      const std::string apath = path + "/@" + a.name;
      if (!raw) {
        if (a.required) {
          mismatch(apath, "required attribute missing");
          ok = false;
        } else {
          fields.push_back(FieldValue{"@" + a.name, Value::list({})});
        }
        continue;
      }
      auto v = simple(a.type, *raw, apath);
      if (!v) {
        ok = false;
        continue;
      }
      fields.push_back(FieldValue{"@" + a.name, a.required ? std::move(*v) : Value::list({std::move(*v)})});
    }
    const auto text_type = decl.text_type ? decl.text_type : decl.simple_type;
    if (text_type) {
      if (!doc.children.empty()) {
        mismatch(path, "simple content expected, found child elements");
        return false;
      }
      auto v = simple(*text_type, doc.text, path);
      if (!v) return false;
      fields.push_back(FieldValue{"#text", std::move(*v)});
    } else if (!doc.text.empty()) {
      mismatch(path, "unexpected character data");
      ok = false;
    }
    return ok;
  }

  /// Pairs each document child with its declaration, checking counts.
  std::optional<std::vector<std::pair<const XmlElement*, const XsdElement*>>> match(const XmlElement& doc,
                                                                                    const XsdElement& decl,
                                                                                    const std::string& path) {
    std::vector<std::pair<const XmlElement*, const XsdElement*>> out;
    bool ok = true;
    std::size_t i = 0;
    for (const auto& c : decl.children) {
      std::uint64_t count = 0;
      while (i < doc.children.size() && doc.children[i].name == c.name) {
        out.emplace_back(&doc.children[i], &c);
        ++i;
        ++count;
      }
      if (!c.occurs.admits(count)) {
        mismatch(path + "/" + c.name, "expected " + c.occurs.to_string() + " element(s), found " +
                                          std::to_string(count));
        ok = false;
      }
    }
    if (i < doc.children.size()) {
      mismatch(path + "/" + doc.children[i].name, "unexpected element");
      ok = false;
    }
    if (!ok) return std::nullopt;
    return out;
  }

  std::optional<Value> compact_value(const XmlElement& doc, const XsdElement& decl, const std::string& path) {
    if (decl.is_simple()) {
      if (!doc.attributes.empty() || !doc.children.empty()) {
        bool only_ns = std::all_of(doc.attributes.begin(), doc.attributes.end(),
                                   [](const auto& a) { return ignorable_attribute(a.first); });
        if (!only_ns || !doc.children.empty()) {
          mismatch(path, "simple element with attributes or children");
          return std::nullopt;
        }
      }
      return simple(*decl.simple_type, doc.text, path);
    }
    std::vector<FieldValue> fields;
    bool ok = header_fields(doc, decl, path, fields);
    const auto pairs = match(doc, decl, path);
    if (!pairs) return std::nullopt;
    for (const auto& c : decl.children) {
      std::vector<Value> items;
      for (const auto& [d, x] : *pairs) {
        if (x != &c) continue;
        auto v = compact_value(*d, c, path + "/" + c.name);
        if (!v) {
          ok = false;
          continue;
        }
        items.push_back(std::move(*v));
      }
      if (c.occurs == Multiplicity::exactly(1)) {
        if (!items.empty()) fields.push_back(FieldValue{c.name, std::move(items.front())});
      } else {
        fields.push_back(FieldValue{c.name, Value::list(std::move(items))});
      }
    }
    if (!ok) return std::nullopt;
    return Value::record(std::move(fields));
  }

  std::optional<Placeholder> expanded(const XmlElement& doc, const XsdElement& decl, const std::string& symbol) {
    std::vector<FieldValue> fields;
    if (!header_fields(doc, decl, symbol, fields)) return std::nullopt;
    const auto pairs = match(doc, decl, symbol);
    if (!pairs) return std::nullopt;
    const Placeholder self = out_.batch.insert_node(layout_.node_label.at(&decl), Value::record(std::move(fields)), symbol);
    std::map<std::string, int> seen;
    std::int64_t ordinal = 0;
    for (const auto& [d, x] : *pairs) {
      ++ordinal;
      const std::string child_symbol = symbol + "/" + d->name + "[" + std::to_string(++seen[d->name]) + "]";
      const auto child = expanded(*d, *x, child_symbol);
      if (!child) continue;
      Value prop = layout_.ordinals ? Value::record({{"ordinal", Value::integer(ordinal)}}) : Value::empty_record();
      out_.batch.insert_edge(layout_.edge_label.at(x), {{layout_.node_label.at(&decl), self}},
                             {{layout_.node_label.at(x), *child}}, std::move(prop));
    }
    return self;
  }

  const Layout& layout_;
  XmlOptions options_;
  XmlData& out_;
  TypeRegistry registry_;
};

bool is_date_type(const TypeRegistry& registry, TypeLabel label) {
  for (int guard = 0; guard < 64; ++guard) {
    if (label == "date") return true;
    const DataTypeDef* def = registry.find(label);
    const auto* ref = def ? std::get_if<TypeRef>(def) : nullptr;
    if (!ref) return false;
    label = ref->target;
  }
  return false;
}

void walk_compact(const TypeRegistry& registry, const Value& v, const TypeLabel& type, const std::string& path,
                  std::vector<std::pair<std::string, std::string>>& out) {
  if (is_date_type(registry, type)) {
    out.emplace_back(path, to_literal(v));
    return;
  }
  const DataTypeDef* def = registry.resolve(type);
  if (const auto* rec = def ? std::get_if<RecordType>(def) : nullptr; rec && v.is_record()) {
    for (const auto& f : v.as_record().fields) {
      const auto decl = std::find_if(rec->fields.begin(), rec->fields.end(),
                                     [&](const FieldDecl& d) { return d.name == f.name; });
      if (decl == rec->fields.end()) continue;
      walk_compact(registry, f.value, decl->type, f.name == "#text" ? path : path + "/" + f.name, out);
    }
  } else if (const auto* list = def ? std::get_if<ListType>(def) : nullptr; list && v.is_list()) {
    for (const auto& item : v.as_list().items) walk_compact(registry, item, list->element, path, out);
  } else {
    out.emplace_back(path, to_literal(v));
  }
}

std::string strip_indices(const std::string& symbol) {
  std::string out;
  bool skipping = false;
  for (const char c : symbol) {
    if (c == '[') skipping = true;
    if (!skipping) out.push_back(c);
    if (c == ']') skipping = false;
  }
  return out;
}

}  // namespace

XmlElement parse_xml(std::string_view text) {
  pt::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    pt::read_xml(in, tree, pt::xml_parser::no_comments);
  } catch (const pt::xml_parser_error& e) {
    throw Error(ErrorCode::MalformedInput, e.what());
  }
  for (const auto& [key, child] : tree) {
    if (key != "<xmlcomment>") return convert(key, child);
  }
  throw Error(ErrorCode::MalformedInput, "document has no root element");
}

XsdSubset parse_xsd(std::string_view text) {
  const XmlElement doc = parse_xml(text);
  return XsdReader(doc).run();
}

TypedGraphSchema import_xsd(const XsdSubset& xsd, const XmlOptions& options, std::string name) {
  return LayoutBuilder(xsd, options, std::move(name)).run().schema;
}

XmlData import_xml_document(const XmlElement& document, const XsdSubset& xsd, const TypedGraphSchema& schema,
                            const XmlOptions& options) {
  const Layout layout = LayoutBuilder(xsd, options, schema.name()).run();
  XmlData out;
  DocumentReader(xsd, layout, options, out).run(document, xsd.root);
  return out;
}

std::vector<std::pair<std::string, std::string>> extract_compact(const TypedGraph& graph) {
  std::vector<std::pair<std::string, std::string>> out;
  const auto& schema = graph.schema();
  for (const auto& [id, n] : graph.nodes()) {
    const NodeType* t = schema.node_type(n.type_label);
    if (t) walk_compact(schema.registry(), n.value, t->payload, n.type_label, out);
  }
  return out;
}

std::vector<std::pair<std::string, std::string>> extract_expanded(const TypedGraph& graph) {
  std::vector<std::pair<std::string, std::string>> out;
  std::set<NodeId> has_parent;
  for (const auto& [id, e] : graph.edges()) {
    for (const auto& [slot, n] : e.head) has_parent.insert(n);
  }
  std::function<void(NodeId)> visit = [&](NodeId id) {
    const InstanceNode* n = graph.node(id);
    const std::string path = strip_indices(n->symbol);
    if (n->value.is_record()) {
      for (const auto& f : n->value.as_record().fields) {
        const std::string fpath = f.name == "#text" ? path : path + "/" + f.name;
        if (f.value.is_list()) {
          for (const auto& item : f.value.as_list().items) out.emplace_back(fpath, to_literal(item));
        } else {
          out.emplace_back(fpath, to_literal(f.value));
        }
      }
    }
    std::vector<std::pair<std::int64_t, NodeId>> children;
    for (const EdgeId eid : graph.incident(id)) {
      const InstanceEdge* e = graph.edge(eid);
      const bool from_here = std::any_of(e->tail.begin(), e->tail.end(), [&](const auto& kv) { return kv.second == id; });
      if (!from_here) continue;
      const Value* ord = e->value.field("ordinal");
      const std::int64_t key = ord && ord->is_int() ? ord->as_int() : static_cast<std::int64_t>(raw(eid));
      for (const auto& [slot, child] : e->head) children.emplace_back(key, child);
    }
    std::sort(children.begin(), children.end());
    for (const auto& [key, child] : children) visit(child);
  };
  for (const auto& [id, n] : graph.nodes()) {
    if (!has_parent.contains(id)) visit(id);
  }
  return out;
}

}  // namespace tgm
