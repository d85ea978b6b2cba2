#include <gtest/gtest.h>

#include "generators.hpp"
#include "oracles.hpp"
#include "tgm/error.hpp"
#include "tgm/types.hpp"

namespace tgm {
namespace {

using testing::Rng;

TEST(Decimal, ParsesAndPrints) {
  EXPECT_EQ(Decimal::parse("3.5")->units, 35000);
  EXPECT_EQ(Decimal::parse("-12")->units, -120000);
  EXPECT_EQ(Decimal::parse("0.0001")->units, 1);
  EXPECT_FALSE(Decimal::parse("0.00001"));
  EXPECT_FALSE(Decimal::parse("1.2.3"));
  EXPECT_FALSE(Decimal::parse(""));
  EXPECT_EQ(Decimal::parse("12.50")->to_string(), "12.5");
  EXPECT_EQ(Decimal::from_int(3).to_string(), "3.0");
  EXPECT_TRUE(Decimal::parse("1.25")->fits_money());
  EXPECT_FALSE(Decimal::parse("1.255")->fits_money());
}

TEST(Registry, BuiltinsAreBoundAndReserved) {
  TypeRegistry r;
  for (const char* b : {"int", "string", "bool", "decimal", "money", "date"}) {
    EXPECT_TRUE(TypeRegistry::is_builtin(b));
    EXPECT_NE(r.find(b), nullptr);
  }
  EXPECT_THROW(r.define("int", BaseType{BaseKind::String}), Error);
  r.define("Age", BaseType{BaseKind::Int});
  EXPECT_THROW(r.define("Age", BaseType{BaseKind::Int}), Error);
  EXPECT_THROW(r.define("", BaseType{BaseKind::Int}), Error);
}

TEST(Registry, ValidateReportsStructuralProblems) {
  TypeRegistry r;
  r.define("R", RecordType{{{"a", "int"}, {"a", "string"}}});
  r.define("L", ListType{"int", Multiplicity{3, 2}});
  r.define("U", UnionType{{"int"}});
  r.define("D", TypeRef{"Missing"});
  r.define("C", ConstrainedBase{BaseKind::Int, Comparison::Greater, Value::text("x")});
  r.define("A", AnyType{});
  const auto report = r.validate();
  EXPECT_TRUE(report.has(ViolationCode::DuplicateFieldName));
  EXPECT_TRUE(report.has(ViolationCode::InvalidBounds));
  EXPECT_TRUE(report.has(ViolationCode::DanglingReference));
  EXPECT_TRUE(report.has(ViolationCode::LiteralMismatch));
  EXPECT_EQ(report.count(ViolationCode::AnyTypeUsed), 1u);
  EXPECT_EQ(report.warning_count(), 1u);
}

TEST(Registry, CheckValueNamesThePath) {
  TypeRegistry r;
  r.define("Pos", ConstrainedBase{BaseKind::Int, Comparison::Greater, Value::integer(0)});
  r.define("Line", RecordType{{{"posNo", "Pos"}, {"price", "money"}}});
  r.define("Lines", ListType{"Line", Multiplicity::at_least(1)});
  const Value ok = Value::list({Value::record({{"posNo", Value::integer(1)}, {"price", Value::decimal(*Decimal::parse("2.50"))}})});
  EXPECT_TRUE(r.check_value("Lines", ok).empty());

  const Value bad = Value::list({Value::record({{"posNo", Value::integer(1)}, {"price", Value::decimal(*Decimal::parse("1.0"))}}),
                                 Value::record({{"posNo", Value::integer(0)}, {"price", Value::decimal(*Decimal::parse("1.001"))}})});
  const auto report = r.check_value("Lines", bad);
  ASSERT_EQ(report.size(), 2u);
  const auto sorted = report.sorted();
  EXPECT_EQ(sorted[0].subject, "Lines[1].posNo");
  EXPECT_EQ(sorted[1].subject, "Lines[1].price");
  EXPECT_FALSE(r.check_value("Lines", Value::list({})).ok());
}

TEST(Registry, CheckValueRecordShapeAndUnions) {
  TypeRegistry r;
  r.define("P", RecordType{{{"x", "int"}, {"y", "int"}}});
  r.define("U", UnionType{{"int", "string"}});
  EXPECT_FALSE(r.check_value("P", Value::record({{"y", Value::integer(1)}, {"x", Value::integer(2)}})).ok());
  EXPECT_FALSE(r.check_value("P", Value::record({{"x", Value::integer(1)}})).ok());
  EXPECT_FALSE(r.check_value("P", Value::record({{"x", Value::integer(1)}, {"y", Value::integer(1)}, {"z", Value::integer(1)}})).ok());
  EXPECT_TRUE(r.check_value("U", Value::tagged("string", Value::text("s"))).ok());
  EXPECT_FALSE(r.check_value("U", Value::tagged("bool", Value::boolean(true))).ok());
  EXPECT_FALSE(r.check_value("U", Value::tagged("int", Value::text("s"))).ok());
  EXPECT_FALSE(r.check_value("int", Value::decimal(Decimal::from_int(1))).ok());
  EXPECT_TRUE(r.check_value("decimal", Value::decimal(Decimal::from_int(1))).ok());
  EXPECT_TRUE(r.check_value("money", Value::decimal(*Decimal::parse("1.25"))).ok());
}

TEST(Registry, DateIsARecordOfInts) {
  TypeRegistry r;
  const Value d = Value::record({{"day", Value::integer(29)}, {"month", Value::integer(7)}, {"year", Value::integer(2012)}});
  EXPECT_TRUE(r.check_value("date", d).ok());
  EXPECT_FALSE(r.check_value("date", Value::text("2012-07-29")).ok());
}

TEST(Registry, ComparisonsWidenIntsAgainstDecimals) {
  EXPECT_EQ(compare_values(Value::integer(2), Comparison::Less, Value::decimal(*Decimal::parse("2.5"))), true);
  EXPECT_EQ(compare_values(Value::text("b"), Comparison::Greater, Value::text("a")), true);
  EXPECT_EQ(compare_values(Value::text("b"), Comparison::Greater, Value::integer(1)), std::nullopt);
  EXPECT_EQ(compare_values(Value::boolean(true), Comparison::NotEqual, Value::boolean(false)), true);
}

TEST(Finiteness, KnownCases) {
  TypeRegistry r;
  r.define("Part", RecordType{{{"name", "string"}, {"components", "Parts"}}});
  r.define("Parts", ListType{"Part", Multiplicity::at_least(0)});
  r.define("Loop", RecordType{{{"next", "Loop"}}});
  r.define("Chain", ListType{"Chain", Multiplicity::at_least(1)});
  r.define("Either", UnionType{{"Loop", "int"}});
  EXPECT_TRUE(r.is_finite("Part"));
  EXPECT_FALSE(r.is_finite("Loop"));
  EXPECT_FALSE(r.is_finite("Chain"));
  EXPECT_TRUE(r.is_finite("Either"));
  EXPECT_TRUE(r.is_finite("int"));
  EXPECT_EQ(r.validate().count(ViolationCode::NonFiniteType), 2u);
  r.define("Bad", TypeRef{"Nowhere"});
  EXPECT_THROW(r.is_finite("Bad"), Error);
}

// Random recursive registries against bounded witness search.
TEST(Finiteness, MatchesWitnessSearchOracle) {
  Rng rng(7);
  int finite = 0, infinite = 0;
  for (int round = 0; round < 2000; ++round) {
    TypeRegistry r;
    const int n = testing::uniform(rng, 1, 7);
    std::vector<TypeLabel> labels;
    for (int i = 0; i < n; ++i) labels.push_back("T" + std::to_string(i));
    std::vector<TypeLabel> pool = labels;
    pool.push_back("int");
    for (const auto& l : labels) {
      switch (testing::uniform(rng, 0, 4)) {
        case 0: {
          RecordType rec;
          for (int f = testing::uniform(rng, 0, 3); f > 0; --f) rec.fields.push_back({"f" + std::to_string(f), testing::pick(rng, pool)});
          r.define(l, rec);
          break;
        }
        case 1: r.define(l, ListType{testing::pick(rng, pool), Multiplicity{static_cast<std::uint32_t>(testing::uniform(rng, 0, 1)), std::nullopt}}); break;
        case 2: r.define(l, UnionType{{testing::pick(rng, pool), testing::pick(rng, pool)}}); break;
        case 3: r.define(l, TypeRef{testing::pick(rng, pool)}); break;
        default: r.define(l, BaseType{BaseKind::Int}); break;
      }
    }
    for (const auto& l : labels) {
      const bool expected = testing::inhabited_within(r, l, n + 1);
      ASSERT_EQ(r.is_finite(l), expected) << "round " << round << " label " << l;
      (expected ? finite : infinite)++;
    }
  }
  EXPECT_GT(finite, 100);
  EXPECT_GT(infinite, 100);
}

TEST(Multiplicity, MostGeneral) {
  const std::vector<Multiplicity> ms = {Multiplicity::between(0, 1), Multiplicity::exactly(1)};
  EXPECT_EQ(most_general_multiplicity(ms), Multiplicity::between(0, 1));
  const std::vector<Multiplicity> with_star = {Multiplicity::between(2, 3), Multiplicity::at_least(1)};
  EXPECT_EQ(most_general_multiplicity(with_star), Multiplicity::at_least(1));
  EXPECT_THROW(most_general_multiplicity(std::vector<Multiplicity>{}), Error);
  EXPECT_EQ(Multiplicity::at_least(0).to_string(), "0..*");
  EXPECT_TRUE(Multiplicity::at_least(0).contains(Multiplicity::exactly(7)));
  EXPECT_FALSE(Multiplicity::between(0, 3).contains(Multiplicity::at_least(1)));
}

TEST(Values, LiteralsAndLabels) {
  EXPECT_EQ(to_literal(Value::text("a\"b\\c\n")), "\"a\\\"b\\\\c\\n\"");
  EXPECT_EQ(quote_label("plain_1"), "plain_1");
  EXPECT_EQ(quote_label("two words"), "`two words`");
  EXPECT_EQ(quote_label("a`b"), "`a\\`b`");
  EXPECT_EQ(to_literal(Value::record({{"#x", Value::list({Value::integer(1)})}})), "{`#x`: [1]}");
  EXPECT_EQ(to_literal(Value::tagged("int", Value::integer(3))), "@int(3)");
}

}  // namespace
}  // namespace tgm
