#include <gtest/gtest.h>

#include "tgm/error.hpp"
#include "tgm/schema.hpp"

namespace tgm {
namespace {

TypedGraphSchema review() {
  TypedGraphSchema s("review");
  s.define_type("Rating", ConstrainedBase{BaseKind::Int, Comparison::GreaterEq, Value::integer(1)});
  s.define_type("PersonRec", RecordType{{{"name", "string"}}});
  s.define_type("ReviewRec", RecordType{{{"rating", "Rating"}}});
  s.add_node_type("Person", "PersonRec");
  s.add_node_type("Review", "ReviewRec");
  s.add_edge_type(EdgeType{"wrote_review", std::nullopt, {{"Person", Multiplicity::at_least(1)}},
                           {{"Review", Multiplicity::exactly(1)}}});
  return s;
}

TEST(Schema, ValidSchemaHasEmptyReport) { EXPECT_TRUE(review().validate().empty()); }

TEST(Schema, BuilderPreconditions) {
  TypedGraphSchema s = review();
  EXPECT_THROW(s.add_node_type("Person", "PersonRec"), Error);
  EXPECT_THROW(s.add_node_type("wrote_review", "PersonRec"), Error);
  EXPECT_THROW(s.add_edge_type(EdgeType{"Person", std::nullopt, {{"Review", {}}}, {}}), Error);
  EXPECT_THROW(s.add_edge_type(EdgeType{"empty", std::nullopt, {}, {}}), Error);
  try {
    s.add_edge_type(EdgeType{"empty", std::nullopt, {}, {}});
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyEndpointSets);
  }
}

TEST(Schema, MapFormRequiresExactKeySet) {
  TypedGraphSchema s = review();
  EXPECT_THROW(s.add_edge_type("likes", std::nullopt, {"Person"}, {"Review"}, {{"Person", Multiplicity::at_least(0)}}),
               Error);
  s.add_edge_type("likes", std::nullopt, {"Person"}, {"Review"},
                  {{"Person", Multiplicity::at_least(0)}, {"Review", Multiplicity::between(0, 1)}});
  const EdgeType* e = s.edge_type("likes");
  ASSERT_NE(e, nullptr);
  EXPECT_EQ(e->head[0].multiplicity, Multiplicity::between(0, 1));
}

TEST(Schema, ValidateFindsDanglingAndBadBounds) {
  TypedGraphSchema s("bad");
  s.add_node_type("A", "Missing");
  s.add_edge_type(EdgeType{"e", "AlsoMissing", {{"A", Multiplicity{2, 1}}}, {{"Ghost", Multiplicity::exactly(1)}}});
  const auto r = s.validate();
  EXPECT_EQ(r.count(ViolationCode::DanglingReference), 2u);
  EXPECT_TRUE(r.has(ViolationCode::MinExceedsMax));
  EXPECT_TRUE(r.has(ViolationCode::UndeclaredEndpoint));
}

TEST(Schema, ConstraintsMustResolve) {
  TypedGraphSchema s = review();
  s.add_constraint(UniquePer{"Review", {"Person"}});
  s.add_constraint(UniqueProperty{"Person", {"name"}});
  s.add_constraint(PropertyPredicate{"Review", {"rating"}, Comparison::LessEq, Value::integer(5)});
  s.add_constraint(Acyclic{"wrote_review"});
  EXPECT_TRUE(s.validate().ok());
  s.add_constraint(UniqueProperty{"Person", {"nope"}});
  s.add_constraint(PropertyPredicate{"Ghost", {"x"}, Comparison::Equal, Value::integer(1)});
  s.add_constraint(UniquePer{"Review", {"Ghost"}});
  EXPECT_EQ(s.validate().count(ViolationCode::UnresolvedConstraint), 3u);
}

TEST(Schema, GroupsAndAggregatesAreChecked) {
  TypedGraphSchema s = review();
  s.add_group(GroupDecl{"People", {"Person"}});
  s.add_group(GroupDecl{"Texts", {"Review", "Person"}});
  s.add_aggregate(AggregateSpec{"People", "#n", CountNodes{"Review"}});
  s.add_aggregate(AggregateSpec{"Texts", "#sum", SumField{"Review", {"rating"}}});
  const auto r = s.validate();
  EXPECT_EQ(r.count(ViolationCode::InvalidGroup), 2u);
}

TEST(Schema, PathTypes) {
  const TypedGraphSchema s = review();
  EXPECT_EQ(s.path_type("Review", {"rating"}), "Rating");
  EXPECT_EQ(s.path_type("Review", {"nope"}), std::nullopt);
  EXPECT_EQ(s.element_type("wrote_review"), std::nullopt);
  EXPECT_EQ(s.element_type("Person"), "PersonRec");
}

TEST(Schema, DescribeConstraints) {
  EXPECT_EQ(describe(UniquePer{"Review", {"Person", "Performance"}}), "uniquePer(Review; Person, Performance)");
  EXPECT_EQ(describe(Acyclic{"contains"}), "acyclic(contains)");
}

}  // namespace
}  // namespace tgm
