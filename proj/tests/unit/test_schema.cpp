/*
 * Copyright (c) 2026, The crosswalk authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <gtest/gtest.h>

#include "crosswalk/error.hpp"
#include "crosswalk/files.hpp"
#include "crosswalk/json_io.hpp"
#include "crosswalk/schema.hpp"
#include "support.hpp"

namespace crosswalk {
namespace {

Table people() {
  return Table({Column("id", {CellValue::text("1"), CellValue::text("2"), CellValue::text("2")}),
                Column("when", {CellValue::text("03/04/2020"), CellValue::text("2018-04-20"), CellValue()}),
                Column("kind", {CellValue::text("Retail"), CellValue(), CellValue::text("Retail")})});
}

CoercedValue co(const std::string& text, FieldType type) { return coerce_value(CellValue::text(text), type); }

TEST(Schema, DeriveIsMinimal) {
  const auto s = derive_schema(people(), "people", "abc");
  EXPECT_EQ(s.field_names(), people().column_names());
  for (const auto& f : s.fields) {
    EXPECT_EQ(f.type, FieldType::string);
    EXPECT_EQ(f.constraints, FieldConstraints{});
  }
  EXPECT_EQ(s.version, 1);
  EXPECT_EQ(s.derived_from, "abc");
  EXPECT_EQ(s.uuid.size(), 36u);
  EXPECT_THROW(derive_schema(Table{}), SchemaError);
}

TEST(Schema, FingerprintIgnoresConstraints) {
  const auto s = derive_schema(people());
  auto t = set_field_categories(s, "kind", {{"Retail", "shops"}});
  EXPECT_EQ(fingerprint(s), fingerprint(t));
  EXPECT_EQ(t.version, 2);
  t = set_field_type(t, "kind", FieldType::category);
  EXPECT_NE(fingerprint(s), fingerprint(t));
  auto renamed = s;
  renamed.fields[0].name = "ID";
  EXPECT_NE(fingerprint(s), fingerprint(renamed));
  auto swapped = s;
  std::swap(swapped.fields[0], swapped.fields[1]);
  EXPECT_NE(fingerprint(s), fingerprint(swapped));
}

TEST(Schema, EditsCheckInvariants) {
  const auto s = derive_schema(people());
  EXPECT_THROW(set_field_type(s, "kind", FieldType::category), SchemaError);
  EXPECT_THROW(set_field_type(s, "nope", FieldType::integer), UnknownFieldError);
  EXPECT_THROW(set_field_categories(s, "kind", {{"a", {}}, {"a", {}}}), SchemaError);
  auto f = s.fields[0];
  f.constraints.minimum = 5;
  f.constraints.maximum = 1;
  EXPECT_THROW(replace_field(s, f), SchemaError);
  auto dup = s;
  dup.fields.push_back(dup.fields[0]);
  EXPECT_THROW(dup.check(), SchemaError);
}

TEST(Schema, TypeChangeCoercesDefault) {
  auto s = derive_schema(people());
  auto f = s.fields[0];
  f.constraints.default_value = CellValue::text("7");
  s = replace_field(s, f);
  s = set_field_type(s, "id", FieldType::integer);
  EXPECT_EQ(s.field("id").constraints.default_value, CellValue::integer(7));
}

TEST(Schema, DeriveCategories) {
  const auto unique = derive_categories(people(), "kind", CategoryMode::unique_terms);
  ASSERT_EQ(unique.size(), 1u);
  EXPECT_EQ(unique[0].name, "Retail");
  const auto presence = derive_categories(people(), "kind", CategoryMode::boolean_presence);
  EXPECT_EQ(presence, (std::vector<CategoryTerm>{{"true", {}}, {"false", {}}}));
  EXPECT_THROW(derive_categories(people(), "zz", CategoryMode::unique_terms), UnknownFieldError);
  EXPECT_EQ(parse_category_mode("boolean"), CategoryMode::boolean_presence);
}

TEST(Coerce, Integers) {
  EXPECT_EQ(co("42", FieldType::integer).value, CellValue::integer(42));
  EXPECT_EQ(co(" -7 ", FieldType::integer).value, CellValue::integer(-7));
  EXPECT_EQ(co("7.0", FieldType::integer).value, CellValue::integer(7));
  EXPECT_FALSE(co("7.5", FieldType::integer).ok);
  EXPECT_FALSE(co("seven", FieldType::integer).ok);
  EXPECT_TRUE(co("seven", FieldType::integer).value.is_empty());
}

TEST(Coerce, NumbersAndBooleans) {
  EXPECT_EQ(co("1.5", FieldType::number).value, CellValue::number(1.5));
  EXPECT_EQ(co("1e3", FieldType::number).value, CellValue::number(1000));
  EXPECT_FALSE(co("nan", FieldType::number).ok);
  EXPECT_EQ(co("TRUE", FieldType::boolean).value, CellValue::boolean(true));
  EXPECT_EQ(co("0", FieldType::boolean).value, CellValue::boolean(false));
  EXPECT_FALSE(co("Y", FieldType::boolean).ok);
}

TEST(Coerce, DatesDayFirstWithAmbiguityFlag) {
  const auto a = co("03/04/2020", FieldType::date);
  EXPECT_EQ(a.value, CellValue::date({2020, 4, 3}));
  EXPECT_TRUE(a.ambiguous);
  const auto b = co("20/04/2018", FieldType::date);
  EXPECT_EQ(b.value, CellValue::date({2018, 4, 20}));
  EXPECT_FALSE(b.ambiguous);
  EXPECT_FALSE(co("01/01/2020", FieldType::date).ambiguous);
  EXPECT_EQ(co("2018-04-20", FieldType::date).value, CellValue::date({2018, 4, 20}));
  EXPECT_FALSE(co("31/02/2020", FieldType::date).ok);
  EXPECT_FALSE(co("04/20/2018", FieldType::date).ok);
  EXPECT_FALSE(co("1/2/20", FieldType::date).ok);
}

TEST(Coerce, StringsKeepWhitespaceAndArraysWrap) {
  EXPECT_EQ(co(" a ", FieldType::string).value, CellValue::text(" a "));
  EXPECT_EQ(coerce_value(CellValue::integer(3), FieldType::string).value, CellValue::text("3"));
  EXPECT_EQ(co("x", FieldType::array).value, CellValue::list({std::string("x")}));
  EXPECT_TRUE(coerce_value(CellValue(), FieldType::integer).ok);
}

TEST(Coerce, TableReport) {
  auto s = derive_schema(people());
  s = set_field_type(s, "id", FieldType::integer);
  s = set_field_type(s, "when", FieldType::date);
  const auto out = coerce_table(people(), s);
  EXPECT_TRUE(out.report.clean());
  ASSERT_EQ(out.report.ambiguous_dates.size(), 1u);
  EXPECT_EQ(out.report.ambiguous_dates[0].row, 0u);
  EXPECT_EQ(out.table.get_column("id")[2], CellValue::integer(2));
  EXPECT_EQ(out.table.get_column("kind")[0], CellValue::text("Retail"));

  const Table bad({Column("id", {CellValue::text("x"), CellValue::text("1")})}, {10, 11});
  SchemaModel only_id;
  only_id.fields = {s.field("id")};
  const auto rep = coerce_table(bad, only_id).report;
  ASSERT_EQ(rep.failures.size(), 1u);
  EXPECT_EQ(rep.failures[0], (CoercionIssue{"id", 10, "x"}));
  EXPECT_EQ(rep.failure_count("id"), 1u);
  SchemaModel missing;
  missing.fields = {{"nope"}};
  EXPECT_THROW(coerce_table(bad, missing), UnknownFieldError);
}

TEST(Validate, Constraints) {
  SchemaModel s;
  s.fields = {{"id", {}, {}, FieldType::integer, {true, true, 0.0, 10.0, {}, {}}},
              {"kind", {}, {}, FieldType::category, {false, false, {}, {}, std::vector<CategoryTerm>{{"Retail", {}}}, {}}},
              {"tags", {}, {}, FieldType::array, {false, false, {}, {}, std::vector<CategoryTerm>{{"a", {}}}, {}}}};
  s.check();
  const Table t({Column("id", {CellValue::integer(1), CellValue::integer(1), CellValue(), CellValue::integer(11)}),
                 Column("kind", {CellValue::text("Retail"), CellValue::text("Re\xCC\x81tail"), CellValue(),
                                 CellValue::text("retail")}),
                 Column("tags", {CellValue::list({std::string("a")}), CellValue::list({std::string("b")}), CellValue(),
                                 CellValue::text("a")})});
  const auto report = validate_table(t, s);
  std::map<ViolationKind, int> counts;
  for (const auto& v : report.violations) ++counts[v.kind];
  EXPECT_EQ(counts[ViolationKind::required], 1);
  EXPECT_EQ(counts[ViolationKind::unique], 1);
  EXPECT_EQ(counts[ViolationKind::maximum], 1);
  EXPECT_EQ(counts[ViolationKind::category], 3);  // two kinds, one tag
  EXPECT_EQ(counts[ViolationKind::type], 1);
  for (const auto& v : report.violations) {
    if (v.kind == ViolationKind::unique) {
      EXPECT_EQ(v.rows, (std::vector<RowLabel>{0, 1}));
    }
  }
  SchemaModel extra;
  extra.fields = {{"absent"}};
  EXPECT_EQ(validate_table(t, extra).violations.at(0).kind, ViolationKind::missing_field);
}

TEST(Validate, CategoryMatchingIsNfc) {
  SchemaModel s;
  s.fields = {{"k", {}, {}, FieldType::category, {false, false, {}, {}, std::vector<CategoryTerm>{{"caf\xC3\xA9", {}}}, {}}}};
  const Table t({Column("k", {CellValue::text("cafe\xCC\x81")})});
  EXPECT_TRUE(validate_table(t, s).ok());
}

TEST(SchemaJson, RoundTrip) {
  const auto doc = parse_json(R"({
    "name": "d", "fields": [
      {"name": "a", "type": "integer", "constraints": {"required": true, "default": "5", "minimum": 0}},
      {"name": "c", "type": "category", "constraints": {"categories": ["x", {"name": "y", "description": "why"}]}},
      {"name": "l", "type": "array"}
    ]})");
  const auto s = schema_from_json(doc);
  EXPECT_EQ(s.field("a").constraints.default_value, CellValue::integer(5));
  EXPECT_EQ(s.field("c").constraints.categories->at(1).description, "why");
  EXPECT_EQ(schema_from_json(to_json(s)), s);
  EXPECT_THROW(schema_from_json(parse_json(R"({"name": "d", "fields": [{"name": "a", "type": "blob"}]})")), SchemaError);
  EXPECT_THROW(schema_from_json(parse_json(R"({"fields": []})")), SchemaError);
  EXPECT_THROW(parse_json("{"), SchemaError);
}

TEST(SchemaJson, CaseStudyDestination) {
  const auto s = schema_from_json(parse_json(read_text_file(testing::data_dir() / "rates" / "dest_schema.json")));
  EXPECT_EQ(s.fields.size(), 10u);
  EXPECT_TRUE(s.field("localAuthorityCode").constraints.required);
  EXPECT_EQ(s.field("occupierReliefType").type, FieldType::array);
}

// --- properties -------------------------------------------------------------

TEST(SchemaProperty, DeriveIsBijectiveStringAndDeterministic) {
  testing::Rng rng(51);
  for (int i = 0; i < 1000; ++i) {
    const auto t = testing::random_table(rng, {0, 8, 1, 10, 0.3});
    const auto a = derive_schema(t);
    const auto b = derive_schema(t);
    ASSERT_EQ(a.field_names(), t.column_names());
    for (const auto& f : a.fields) ASSERT_EQ(f.type, FieldType::string);
    ASSERT_EQ(fingerprint(a), fingerprint(b));
    ASSERT_EQ(a, b);
  }
}

TEST(SchemaProperty, CoerceKeepsShape) {
  testing::Rng rng(52);
  const std::vector<FieldType> types = {FieldType::string,  FieldType::integer,  FieldType::number,
                                        FieldType::boolean, FieldType::date,     FieldType::datetime,
                                        FieldType::array};
  for (int i = 0; i < 1000; ++i) {
    const auto t = testing::random_table(rng, {0, 8, 1, 6, 0.3});
    auto s = derive_schema(t);
    for (const auto& f : t.column_names()) s = set_field_type(s, f, types[testing::uniform(rng, 0, types.size() - 1)]);
    const auto out = coerce_table(t, s);
    ASSERT_EQ(out.table.row_count(), t.row_count());
    ASSERT_EQ(out.table.row_labels(), t.row_labels());
    ASSERT_EQ(out.table.column_names(), t.column_names());
  }
}

TEST(SchemaProperty, BooleanPresenceIgnoresContents) {
  testing::Rng rng(53);
  const auto expected = derive_categories(people(), "kind", CategoryMode::boolean_presence);
  for (int i = 0; i < 1000; ++i) {
    const auto t = testing::random_table(rng, {0, 10, 1, 3, 0.5});
    ASSERT_EQ(derive_categories(t, t.column_names().front(), CategoryMode::boolean_presence), expected);
  }
}

}  // namespace
}  // namespace crosswalk
