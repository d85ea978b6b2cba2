#include <gtest/gtest.h>

#include "generators.hpp"
#include "helpers.hpp"

namespace tgm {
namespace {

using testing::read_fixture;
using testing::schema_of;

std::string first_diagnostic(const std::vector<ParseDiagnostic>& ds) {
  return ds.empty() ? std::string() : format_diagnostic(ds.front());
}

TEST(Text, SyntaxErrorsCarryLocation) {
  const auto r = parse_schema("schema s {\n  node A int\n}");
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.diagnostics.front().location, (SourceLocation{2, 10}));
  EXPECT_NE(first_diagnostic(r.diagnostics).find("2:10: error:"), std::string::npos);
  EXPECT_NE(first_diagnostic(r.diagnostics).find("':'"), std::string::npos);
}

TEST(Text, SemanticErrorsPointAtTheDeclaration) {
  const auto r = parse_schema("schema s {\n  node A : int\n  edge e tail (A[1..1]) head (B[0..*])\n}");
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.diagnostics.front().location.line, 3u);
  EXPECT_TRUE(parse_schema_unchecked("schema s {\n  node A : int\n  edge e tail (A[1..1]) head (B[0..*])\n}").ok());
}

TEST(Text, CommentsAndUnterminatedTokens) {
  EXPECT_TRUE(parse_schema("// lead\nschema s { // trailing\n node A : int }").ok());
  EXPECT_FALSE(parse_schema("schema s { /* block */ node A : int }").ok());
  EXPECT_FALSE(parse_schema("schema s { node `A : int }").ok());
  EXPECT_FALSE(parse_schema("schema s { node A : int").ok());
  EXPECT_FALSE(parse_schema("schema s { node A : int } trailing").ok());
}

TEST(Text, FixturesRoundTrip) {
  for (const char* name : {"review.tgs", "enterprise.tgs", "bom.tgs", "bom_shared.tgs", "flat.tgs"}) {
    const auto s = schema_of(read_fixture(name));
    const std::string printed = print_schema(*s);
    const auto again = parse_schema(printed);
    ASSERT_TRUE(again.ok()) << name << "\n" << printed;
    EXPECT_EQ(*again.value, *s) << name;
    EXPECT_EQ(print_schema(*again.value), printed) << name;
  }
}

TEST(Text, InstanceRoundTrip) {
  const auto s = schema_of(read_fixture("enterprise.tgs"));
  const TypedGraph g = testing::graph_of(s, read_fixture("enterprise.tgi"));
  const std::string printed = print_instance(g, "acme");
  const TypedGraph again = testing::graph_of(s, printed);
  EXPECT_EQ(again, g);
  EXPECT_EQ(print_instance(again, "acme"), printed);
}

TEST(Text, InstanceChecksLabelsAndSymbols) {
  const auto s = schema_of(read_fixture("review.tgs"));
  EXPECT_FALSE(parse_instance("graph g uses review { n a : Ghost = {} }", *s).ok());
  EXPECT_FALSE(parse_instance("graph g uses review { e : wrote_review(nobody -> r) }", *s).ok());
  EXPECT_FALSE(parse_instance(
                   "graph g uses review { n a : Person = {name: \"a\"} n a : Person = {name: \"b\"} }", *s)
                   .ok());
  const auto arity = parse_instance(
      "graph g uses review { n a : Person = {name: \"a\"} e : wrote_review(a, a -> a) }", *s);
  EXPECT_FALSE(arity.ok());
}

TEST(Text, ValueLiterals) {
  const auto v = parse_value(R"({name: "Billy", tags: ["a", "b"], n: -3, d: 2.50, ok: true, u: @int(1)})");
  ASSERT_TRUE(v.ok()) << first_diagnostic(v.diagnostics);
  EXPECT_EQ(v.value->field("n")->as_int(), -3);
  EXPECT_EQ(v.value->field("d")->as_decimal(), *Decimal::parse("2.5"));
  EXPECT_EQ(v.value->field("tags")->as_list().items.size(), 2u);
  EXPECT_EQ(v.value->field("u")->as_tagged().tag, "int");
  const auto again = parse_value(to_literal(*v.value));
  ASSERT_TRUE(again.ok());
  EXPECT_EQ(*again.value, *v.value);
  EXPECT_FALSE(parse_value("{a: }").ok());
}

TEST(Text, DeepNestingIsRejectedNotCrashing) {
  const std::string deep = std::string(100000, '[') + std::string(100000, ']');
  EXPECT_FALSE(parse_value(deep).ok());
}

TEST(Text, KeywordAndOddLabelsRoundTrip) {
  TypedGraphSchema s("s");
  s.add_node_type("node", "int");
  s.add_node_type("with space", "string");
  s.add_edge_type(EdgeType{"edge", std::nullopt, {{"node", Multiplicity::at_least(0)}},
                           {{"with space", Multiplicity::between(0, 1)}}});
  const std::string printed = print_schema(s);
  EXPECT_NE(printed.find("`with space`"), std::string::npos);
  const auto again = parse_schema(printed);
  ASSERT_TRUE(again.ok()) << printed;
  EXPECT_EQ(*again.value, s);
}

TEST(Text, RandomSchemasRoundTrip) {
  testing::Rng rng(3);
  for (int i = 0; i < 300; ++i) {
    const TypedGraphSchema s = testing::random_schema(rng);
    const std::string printed = print_schema(s);
    const auto again = parse_schema_unchecked(printed);
    ASSERT_TRUE(again.ok()) << printed << first_diagnostic(again.diagnostics);
    ASSERT_EQ(*again.value, s) << printed;
  }
}

TEST(Text, PrintViolations) {
  EXPECT_EQ(print_violations(ViolationReport{}), "OK (0 violations)\n");
  ViolationReport r;
  r.add(ViolationCode::InstanceCycle, "contains", "cycle through a, b", Severity::Warning);
  r.add(ViolationCode::CardinalityViolation, "r1", "found 0");
  const std::string out = print_violations(r);
  const auto card = out.find("CardinalityViolation");
  const auto cycle = out.find("InstanceCycle");
  ASSERT_NE(card, std::string::npos);
  ASSERT_NE(cycle, std::string::npos);
  EXPECT_LT(card, cycle);
  EXPECT_NE(out.find("warning"), std::string::npos);
  EXPECT_NE(out.find("r1"), std::string::npos);
}

}  // namespace
}  // namespace tgm
