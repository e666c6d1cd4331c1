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

#include <sstream>

#include "crosswalk/csv.hpp"
#include "crosswalk/error.hpp"
#include "crosswalk/unicode.hpp"
#include "support.hpp"

namespace crosswalk {
namespace {

using csv::Field;
using csv::Record;

TEST(Csv, EmptyAndQuotedEmptyDiffer) {
  const auto recs = csv::parse("a,\"\",\n");
  ASSERT_EQ(recs.size(), 1u);
  EXPECT_EQ(recs[0], (Record{Field("a"), Field(""), std::nullopt}));
}

TEST(Csv, QuotesAndLineEndings) {
  const auto recs = csv::parse("\"x,y\",\"he said \"\"hi\"\"\"\r\n\"multi\nline\",z\rlast,1");
  ASSERT_EQ(recs.size(), 3u);
  EXPECT_EQ(*recs[0][0], "x,y");
  EXPECT_EQ(*recs[0][1], "he said \"hi\"");
  EXPECT_EQ(*recs[1][0], "multi\nline");
  EXPECT_EQ(*recs[2][1], "1");
}

TEST(Csv, WhitespaceIsData) {
  const auto recs = csv::parse(" a , b\n");
  EXPECT_EQ(*recs[0][0], " a ");
  EXPECT_EQ(*recs[0][1], " b");
}

TEST(Csv, ErrorsArePositioned) {
  try {
    csv::parse("a,b\nc,\"open\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.row(), 1u);
    EXPECT_EQ(e.offset(), 6u);
  }
  try {
    csv::parse("\"a\"x,b\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.row(), 0u);
    EXPECT_EQ(e.offset(), 3u);
  }
  EXPECT_THROW(csv::parse("a", '"'), PreconditionError);
}

TEST(Csv, TabDelimiter) {
  const auto recs = csv::parse("a\tb,c\n", '\t');
  EXPECT_EQ(recs[0], (Record{Field("a"), Field("b,c")}));
}

TEST(CsvProperty, WriteThenParseRoundTrips) {
  testing::Rng rng(21);
  for (int i = 0; i < 1000; ++i) {
    std::vector<Record> records;
    const auto width = testing::uniform(rng, 1, 5);
    for (std::size_t r = 0, n = testing::uniform(rng, 1, 6); r < n; ++r) {
      Record rec;
      for (std::size_t c = 0; c < width; ++c) {
        switch (testing::uniform(rng, 0, 5)) {
          case 0: rec.push_back(std::nullopt); break;
          case 1: rec.push_back(std::string()); break;
          case 2: rec.push_back(std::string("q\"uo,te\r\n")); break;
          default: rec.push_back(testing::random_text(rng)); break;
        }
      }
      // a lone absent field would write an empty line, which is no record
      if (width == 1 && !rec[0]) rec[0] = "x";
      records.push_back(std::move(rec));
    }
    std::ostringstream out;
    for (const auto& rec : records) csv::write_record(out, rec);
    ASSERT_EQ(csv::parse(out.str()), records) << out.str();
  }
}

TEST(Unicode, Nfc) {
  EXPECT_EQ(unicode::nfc("e\xCC\x81"), "\xC3\xA9");
  EXPECT_EQ(unicode::nfc("plain"), "plain");
  EXPECT_EQ(unicode::nfc("\xFF"), "\xFF");
}

TEST(Unicode, Blank) {
  EXPECT_TRUE(unicode::is_blank(""));
  EXPECT_TRUE(unicode::is_blank(" \t\xC2\xA0\xE3\x80\x80"));  // NBSP, ideographic space
  EXPECT_FALSE(unicode::is_blank(" a "));
}

TEST(Unicode, Transcoding) {
  EXPECT_EQ(unicode::to_utf8("caf\xE9", "ISO-8859-1"), "caf\xC3\xA9");
  EXPECT_EQ(unicode::to_utf8("\xA3" "5", "windows-1252"), "\xC2\xA3" "5");
  EXPECT_THROW(unicode::to_utf8("x", "no-such-encoding"), UnsupportedFormatError);
  EXPECT_THROW(unicode::to_utf8("ok\xC3", "UTF-8"), ParseError);
  EXPECT_EQ(unicode::find_invalid_utf8("ab\xC3(z"), 2u);
  EXPECT_FALSE(unicode::find_invalid_utf8("\xE2\x82\xAC"));
}

}  // namespace
}  // namespace crosswalk
