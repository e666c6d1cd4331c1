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

#include <cmath>
#include <limits>

#include "crosswalk/cell.hpp"
#include "crosswalk/error.hpp"
#include "crosswalk/table.hpp"
#include "support.hpp"

namespace crosswalk {
namespace {

using testing::Rng;

Table small() {
  return Table({Column("a", {CellValue::text("1"), CellValue::empty(), CellValue::text("3")}),
                Column("b", {CellValue::text("x"), CellValue::text(""), CellValue::integer(7)})});
}

TEST(Cell, KindsAndText) {
  EXPECT_EQ(CellValue().kind(), CellKind::empty);
  EXPECT_EQ(to_text(CellValue()), "");
  EXPECT_EQ(to_text(CellValue::text(" a ")), " a ");
  EXPECT_EQ(to_text(CellValue::integer(-42)), "-42");
  EXPECT_EQ(to_text(CellValue::number(4.0)), "4");
  EXPECT_EQ(to_text(CellValue::number(0.1)), "0.1");
  EXPECT_EQ(to_text(CellValue::boolean(true)), "true");
  EXPECT_EQ(to_text(CellValue::date({2018, 4, 20})), "2018-04-20");
  EXPECT_EQ(to_text(CellValue::list({std::string("it's"), std::monostate{}, std::int64_t{3}})), "['it''s', ~, 3]");
}

TEST(Cell, EmptyTextDiffersFromEmpty) {
  EXPECT_NE(CellValue::text(""), CellValue::empty());
  EXPECT_NE(hash_value(CellValue::text("")), hash_value(CellValue::empty()));
}

TEST(Cell, NumberFormattingRoundTrips) {
  Rng rng(11);
  std::uniform_real_distribution<double> mag(-300, 300);
  for (int i = 0; i < 1000; ++i) {
    const double v = std::pow(10.0, mag(rng) / 10.0) * (testing::coin(rng) ? 1 : -1);
    const auto text = format_number(v);
    EXPECT_EQ(std::stod(text), v) << text;
  }
  EXPECT_EQ(format_number(1e21), "1e+21");
}

TEST(Date, CalendarArithmetic) {
  EXPECT_EQ(Date({1970, 1, 1}).days_since_epoch(), 0);
  EXPECT_EQ(Date({2000, 3, 1}).days_since_epoch(), 11017);
  EXPECT_TRUE(Date({2000, 2, 29}).valid());
  EXPECT_FALSE(Date({1900, 2, 29}).valid());
  for (std::int64_t d = -800000; d < 800000; d += 997) EXPECT_EQ(Date::from_days(d).days_since_epoch(), d);
  EXPECT_EQ(Date::parse_iso("2018-04-20"), (Date{2018, 4, 20}));
  EXPECT_FALSE(Date::parse_iso("2018-02-30"));
  EXPECT_FALSE(Date::parse_iso("20/04/2018"));
}

TEST(DateTime, IsoForms) {
  const auto t = DateTime::parse_iso("2020-03-15T12:30:00+01:00");
  ASSERT_TRUE(t);
  EXPECT_EQ(t->iso(), "2020-03-15T11:30:00Z");
  EXPECT_EQ(DateTime::from_micros(1500).iso(), "1970-01-01T00:00:00.001500Z");
  EXPECT_EQ(DateTime::parse_iso("1999-12-31 23:59")->iso(), "1999-12-31T23:59:00Z");
  EXPECT_FALSE(DateTime::parse_iso("1999-12-31T25:00"));
}

TEST(Table, LookupIsExactAndCaseSensitive) {
  const auto t = small();
  EXPECT_EQ(t.get_column("a")[0], CellValue::text("1"));
  EXPECT_THROW(t.get_column("A"), UnknownColumnError);
  try {
    t.get_column("zz");
  } catch (const UnknownColumnError& e) {
    EXPECT_EQ(e.name(), "zz");
    EXPECT_EQ(e.available(), (std::vector<std::string>{"a", "b"}));
  }
}

TEST(Table, RejectsBrokenInvariants) {
  EXPECT_THROW(Table({Column("a", {CellValue()}), Column("a", {CellValue()})}), TableError);
  EXPECT_THROW(Table({Column("a", {CellValue()}), Column("b", Cells{})}), TableError);
  EXPECT_THROW(Table({Column("", {CellValue()})}), TableError);
  EXPECT_THROW(Table({Column("a", {CellValue(), CellValue()})}, {2, 1}), TableError);
  EXPECT_THROW(small().with_column(Column("c", Cells{})), TableError);
}

TEST(Table, WithColumnReplacesInPlace) {
  const auto t = small().with_column(Column("a", {CellValue(), CellValue(), CellValue()}));
  EXPECT_EQ(t.column_names(), (std::vector<std::string>{"a", "b"}));
  EXPECT_TRUE(t.get_column("a")[0].is_empty());
  const auto u = small().with_column(Column("c", {CellValue(), CellValue(), CellValue()}));
  EXPECT_EQ(u.column_names().back(), "c");
}

TEST(Table, TakeRowsKeepsLabels) {
  const std::vector<std::size_t> pos{0, 2};
  const auto t = small().take_rows(pos);
  EXPECT_EQ(t.row_labels(), (std::vector<RowLabel>{0, 2}));
  EXPECT_EQ(t.get_column("b")[1], CellValue::integer(7));
  const std::vector<std::size_t> unsorted{2, 0};
  EXPECT_THROW((void)small().take_rows(unsorted), TableError);
}

TEST(Table, CopiesShareCells) {
  const auto t = small();
  const auto u = t;
  EXPECT_EQ(t.columns()[0].shared_cells().get(), u.columns()[0].shared_cells().get());
}

TEST(Table, PreviewAndEmpty) {
  EXPECT_EQ(preview(small(), 2).row_count(), 2u);
  EXPECT_EQ(preview(small(), 10).row_count(), 3u);
  EXPECT_EQ(preview(small(), 0).column_count(), 2u);
  const std::vector<std::string> names{"x", "y"};
  const auto e = empty_table(names, {4, 9});
  EXPECT_EQ(e.row_labels(), (std::vector<RowLabel>{4, 9}));
  EXPECT_TRUE(e.get_column("y")[1].is_empty());
}

// --- properties -------------------------------------------------------------

void expect_uniform(const Table& t) {
  for (const auto& c : t.columns()) ASSERT_EQ(c.size(), t.row_count());
  auto names = t.column_names();
  std::sort(names.begin(), names.end());
  ASSERT_EQ(std::adjacent_find(names.begin(), names.end()), names.end());
}

TEST(TableProperty, OperationsKeepColumnsUniformAndNamesUnique) {
  Rng rng(101);
  for (int i = 0; i < 1000; ++i) {
    auto t = testing::random_table(rng);
    expect_uniform(t);
    std::vector<std::size_t> keep;
    for (std::size_t r = 0; r < t.row_count(); ++r) {
      if (testing::coin(rng)) keep.push_back(r);
    }
    t = t.take_rows(keep);
    expect_uniform(t);
    t = t.with_column(Column(t.column_names().front(), Cells(t.row_count())));
    expect_uniform(t);
    t = t.with_column(Column("new", Cells(t.row_count(), CellValue::text("n"))));
    expect_uniform(t);
    if (t.column_count() > 1) {
      const std::vector<std::string> drop{t.column_names().front()};
      t = t.without_columns(drop);
      expect_uniform(t);
    }
    // a duplicate name or a wrong-length column never gets in
    EXPECT_THROW(Table({Column("d", Cells(1)), Column("d", Cells(1))}), TableError);
    EXPECT_THROW(t.with_column(Column("w", Cells(t.row_count() + 1))), TableError);
  }
}

TEST(TableProperty, PreviewComposes) {
  Rng rng(102);
  for (int i = 0; i < 1000; ++i) {
    const auto t = testing::random_table(rng, {0, 20, 1, 4, 0.2});
    const auto n = testing::uniform(rng, 0, 25);
    const auto m = testing::uniform(rng, 0, 25);
    EXPECT_EQ(preview(preview(t, n), m), preview(t, std::min(n, m)));
  }
}

}  // namespace
}  // namespace crosswalk
