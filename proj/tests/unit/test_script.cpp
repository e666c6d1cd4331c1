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

#include <chrono>

#include "crosswalk/error.hpp"
#include "crosswalk/script.hpp"
#include "support.hpp"

namespace crosswalk {
namespace {

using testing::Rng;

TEST(Script, CorpusRoundTrips) {
  const auto start = std::chrono::steady_clock::now();
  ASSERT_EQ(testing::script_corpus().size(), 17u);
  for (const auto& text : testing::script_corpus()) {
    SCOPED_TRACE(text);
    const auto a = parse_script(text);
    EXPECT_EQ(a.raw, text);
    EXPECT_TRUE(validate_structure(a).empty());
    const auto b = parse_script(serialize(a));
    EXPECT_TRUE(a.structurally_equal(b));
    EXPECT_EQ(serialize(b), serialize(a));
  }
  EXPECT_LT(std::chrono::steady_clock::now() - start, std::chrono::seconds(1));
}

TEST(Script, CategoriseAst) {
  const auto a = parse_script(testing::script_corpus()[0]);
  EXPECT_EQ(a.action, ActionName::CATEGORISE);
  EXPECT_EQ(a.dest_fields, std::vector<std::string>{"occupation_state_reliefs"});
  EXPECT_EQ(a.dest_term, DestTerm(std::string("other")));
  EXPECT_EQ(a.source_term, "Current Relief Type");
  EXPECT_EQ(a.source_items, (std::vector<SourceItem>{Literal{"Sports Club (Registered CASC)"}, Literal{"Mandatory"}}));

  const auto b = parse_script("CATEGORISE > 'occupation_state'::True < ' EmptyFrom'::[True]");
  EXPECT_EQ(b.dest_term, DestTerm(true));
  EXPECT_EQ(b.source_term, " EmptyFrom");
  EXPECT_EQ(b.source_items, std::vector<SourceItem>{BooleanLiteral{true}});
}

TEST(Script, ItemKinds) {
  EXPECT_EQ(parse_script("NEW > 'a' < ['E07000223']").source_items, std::vector<SourceItem>{Literal{"E07000223"}});
  EXPECT_EQ(parse_script("NEW > 'a' < [7]").source_items, std::vector<SourceItem>{IntegerLiteral{7}});
  EXPECT_EQ(parse_script("RENAME > 'a' < ['b']").source_items, std::vector<SourceItem>{FieldRef{"b"}});
  EXPECT_EQ(parse_script("COLLATE > 'a' < [~, 'b']").source_items,
            (std::vector<SourceItem>{Placeholder{}, FieldRef{"b"}}));
  EXPECT_EQ(parse_script("CALCULATE > 't' < [+'a', -'b']").source_items,
            (std::vector<SourceItem>{SignedField{Sign::plus, "a"}, SignedField{Sign::minus, "b"}}));
  EXPECT_EQ(parse_script("SELECT_OLDEST > 'v' < ['v1' + 'd1']").source_items,
            (std::vector<SourceItem>{DatedField{"v1", "d1"}}));
  EXPECT_EQ(parse_script("DELETE_ROWS < [0, 2]").source_items,
            (std::vector<SourceItem>{IntegerLiteral{0}, IntegerLiteral{2}}));
  const auto sep = parse_script("SEPARATE > ['a', 'b'] < ';' :: ['n']");
  EXPECT_TRUE(sep.dest_bracketed);
  EXPECT_EQ(sep.dest_fields, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(sep.source_term, ";");
}

TEST(Script, QuotingEscapes) {
  EXPECT_EQ(quote("it's"), "'it''s'");
  const auto a = parse_script("NEW > 'o''brien' < ['it''s']");
  EXPECT_EQ(a.dest_fields[0], "o'brien");
  EXPECT_EQ(a.source_items[0], SourceItem(Literal{"it's"}));
  EXPECT_EQ(serialize(a), "NEW > 'o''brien' < ['it''s']");
  EXPECT_EQ(parse_script("NEW > 'caf\xC3\xA9' < ['\xE2\x82\xAC']").dest_fields[0], "caf\xC3\xA9");
}

TEST(Script, WhitespaceInsensitive) {
  const auto a = parse_script("UNITE>'n'<' ; '::['a','b']");
  const auto b = parse_script("  UNITE \n >  'n'\t< ' ; ' ::\n[ 'a' ,\n 'b' ]  ");
  EXPECT_TRUE(a.structurally_equal(b));
}

struct ErrorCase {
  const char* text;
  std::size_t offset;
};

TEST(Script, ErrorsArePositioned) {
  const ErrorCase cases[] = {
      {"", 0},
      {"NEW > 'a' < [", 13},
      {"NEW > 'a < ['x']", 14},
      {"RENAME 'a'", 7},
      {"RENAME > 'a' < ['b'] extra", 21},
      {"DELETE_ROWS < [-1]", 16},
      {"NEW > 'a' < ['x',]", 17},
      {"CATEGORISE > 'a' :: < 'b' :: [True]", 20},
  };
  for (const auto& c : cases) {
    SCOPED_TRACE(c.text);
    try {
      parse_script(c.text);
      FAIL() << "parsed";
    } catch (const ScriptSyntaxError& e) {
      EXPECT_EQ(e.offset(), c.offset) << e.what();
      EXPECT_NE(std::string(e.what()).find("at offset"), std::string::npos);
    }
  }
}

TEST(Script, UnknownActions) {
  try {
    parse_script("  FOO > 'a'");
    FAIL();
  } catch (const UnknownActionError& e) {
    EXPECT_EQ(e.name(), "FOO");
    EXPECT_EQ(e.offset(), 2u);
  }
  EXPECT_THROW(parse_script("new > 'a' < ['b']"), UnknownActionError);
}

TEST(Script, StructureViolations) {
  auto clauses = [](const char* text) {
    std::vector<std::string> out;
    for (const auto& v : validate_structure(parse_script(text))) out.push_back(v.clause);
    return out;
  };
  EXPECT_EQ(clauses("NEW > 'a' < 'x'"), std::vector<std::string>{"source_items"});
  EXPECT_EQ(clauses("UNITE > 'a' < ['b']"), std::vector<std::string>{"source_term"});
  EXPECT_EQ(clauses("DEBLANK > 'a'"), std::vector<std::string>{"dest"});
  EXPECT_EQ(clauses("CATEGORISE > 'a' < 'b' :: ['x']"), std::vector<std::string>{"dest_term"});
  EXPECT_EQ(clauses("PIVOT_LONGER > 'a' < ['b']"), std::vector<std::string>{"dest"});
  EXPECT_EQ(clauses("CALCULATE > 't' < ['a']"), std::vector<std::string>{"source_items"});
  EXPECT_EQ(clauses("RENAME > 'a' < ['b', 'c']"), std::vector<std::string>{"source_items"});
  EXPECT_EQ(clauses("PIVOT_CATEGORIES > 'g' < 'l' :: ['x']"), std::vector<std::string>{"source_items"});
  EXPECT_THROW(parse_script("PIVOT_CATEGORIES > 'g' < 'l' :: []"), ScriptSyntaxError);
}

TEST(Script, CatalogCoversEveryAction) {
  ASSERT_EQ(action_catalog().size(), kActionCount);
  for (const auto& info : action_catalog()) {
    SCOPED_TRACE(std::string(info.example));
    EXPECT_EQ(parse_action_name(to_string(info.name)), info.name);
    const auto a = parse_script(info.example);
    EXPECT_EQ(a.action, info.name);
    EXPECT_TRUE(validate_structure(a).empty());
  }
  EXPECT_TRUE(is_barrier(ActionName::DEDUPE));
  EXPECT_FALSE(is_barrier(ActionName::UNITE));
}

SchemaModel schema_of(std::vector<FieldDefinition> fields) {
  SchemaModel s;
  s.fields = std::move(fields);
  return s;
}

TEST(Script, SchemaValidation) {
  const auto source = schema_of({{"a"}, {"b"}, {"EmptyFrom"}});
  const auto dest = schema_of({{"x"},
                               {"state", {}, {}, FieldType::category,
                                {false, false, {}, {}, std::vector<CategoryTerm>{{"Vacant", {}}}, {}}}});
  auto kinds = [&](const char* text) {
    std::vector<SchemaViolationKind> out;
    for (const auto& v : validate_against_schemas(parse_script(text), source, dest)) out.push_back(v.kind);
    return out;
  };
  EXPECT_TRUE(kinds("UNITE > 'x' < ' ' :: ['a', 'b']").empty());
  EXPECT_EQ(kinds("RENAME > 'y' < ['a']"), std::vector<SchemaViolationKind>{SchemaViolationKind::unknown_dest_field});
  EXPECT_EQ(kinds("RENAME > 'x' < ['c']"), std::vector<SchemaViolationKind>{SchemaViolationKind::unknown_source_field});
  EXPECT_TRUE(kinds("CATEGORISE > 'state' :: 'Vacant' < 'EmptyFrom' :: [True]").empty());
  EXPECT_EQ(kinds("CATEGORISE > 'state' :: 'Empty' < 'EmptyFrom' :: [True]"),
            std::vector<SchemaViolationKind>{SchemaViolationKind::unknown_category_term});
  EXPECT_TRUE(kinds("PIVOT_LONGER > ['n', 'v'] < ['a', 'b']").empty());
  EXPECT_TRUE(kinds("UNITE > 'x' < ' ' :: ['a']").empty());
  // a field without declared categories accepts any term
  EXPECT_TRUE(kinds("CATEGORISE > 'x' :: 'anything' < 'a' :: ['1']").empty());
}

TEST(Script, FieldAccounting) {
  const auto a = parse_script("SELECT_NEWEST > 'v' < ['v1' + 'd1', 'v2' + 'd2']");
  EXPECT_EQ(source_fields_of(a), (std::vector<std::string>{"v1", "d1", "v2", "d2"}));
  const auto p = parse_script("PIVOT_LONGER > ['year', 'value'] < ['2019', '2020']");
  EXPECT_EQ(source_fields_added_by(p), (std::vector<std::string>{"year", "value"}));
  EXPECT_EQ(source_fields_of(parse_script("CATEGORISE > 's' :: 'V' < 'E' :: [True]")), std::vector<std::string>{"E"});
  EXPECT_TRUE(source_fields_of(parse_script("NEW > 'a' < ['lit']")).empty());
}

// --- properties -------------------------------------------------------------

TEST(ScriptProperty, GeneratedAstsRoundTripAndValidate) {
  Rng rng(61);
  for (const auto action : all_actions()) {
    SCOPED_TRACE(std::string(to_string(action)));
    for (int i = 0; i < 1000; ++i) {
      const auto a = testing::random_action(rng, action);
      ASSERT_TRUE(validate_structure(a).empty()) << serialize(a);
      const auto text = serialize(a);
      const auto b = parse_script(text);
      ASSERT_TRUE(a.structurally_equal(b)) << text;
      ASSERT_EQ(serialize(b), text);
    }
  }
}

/// Breaks one clause so it no longer fits the action's signature.
ParsedAction mutate(ParsedAction a, int clause) {
  const ActionInfo& info = action_info(a.action);
  switch (clause) {
    case 0:
      if (info.dest == "none") {
        a.dest_fields = {"d"};
      } else if (info.dest == "field") {
        a.dest_fields = {"d", "e"};
        a.dest_bracketed = true;
      } else if (info.dest == "field_pair") {
        a.dest_fields.resize(1);
      } else {
        a.dest_fields.resize(1);
        a.dest_bracketed = false;
      }
      break;
    case 1:
      if (a.dest_term) {
        a.dest_term.reset();
      } else {
        a.dest_term = DestTerm(std::string("t"));
      }
      break;
    case 2:
      if (a.source_term) {
        a.source_term.reset();
      } else {
        a.source_term = ";";
      }
      break;
    default: {
      const std::string_view kind = info.source_items;
      a.source_bracketed = true;
      if (kind == "none") {
        a.source_items = {FieldRef{"f"}};
      } else if (kind == "rows" || kind == "signed_fields" || kind == "dated_fields") {
        a.source_items = {FieldRef{"f"}};
      } else if (kind == "fields_or_placeholders") {
        a.source_items = {IntegerLiteral{3}};
      } else {
        a.source_items = {Placeholder{}};
      }
      break;
    }
  }
  return a;
}

TEST(ScriptProperty, ClauseMutationsAreCaught) {
  Rng rng(62);
  for (const auto action : all_actions()) {
    SCOPED_TRACE(std::string(to_string(action)));
    for (int i = 0; i < 1000; ++i) {
      const int clause = static_cast<int>(testing::uniform(rng, 0, 3));
      const auto bad = mutate(testing::random_action(rng, action), clause);
      ASSERT_FALSE(validate_structure(bad).empty()) << "clause " << clause << ": " << serialize(bad);
    }
  }
}

TEST(ScriptProperty, ParsingIsTotal) {
  Rng rng(63);
  const std::string alphabet = "><:[],~+-' \n\tTrueFalsNEWRNAMCOLT_0123456789x\xC3\xA9\xFF";
  std::size_t parsed = 0;
  for (int i = 0; i < 20000; ++i) {
    std::string text;
    if (i % 2 == 0) {
      for (std::size_t n = testing::uniform(rng, 0, 40); n > 0; --n) {
        text += alphabet[testing::uniform(rng, 0, alphabet.size() - 1)];
      }
    } else {
      // corpus script with a few bytes replaced, inserted or removed
      text = testing::script_corpus()[testing::uniform(rng, 0, testing::script_corpus().size() - 1)];
      for (std::size_t k = testing::uniform(rng, 1, 3); k > 0 && !text.empty(); --k) {
        const auto pos = testing::uniform(rng, 0, text.size() - 1);
        switch (testing::uniform(rng, 0, 2)) {
          case 0: text[pos] = alphabet[testing::uniform(rng, 0, alphabet.size() - 1)]; break;
          case 1: text.insert(pos, 1, alphabet[testing::uniform(rng, 0, alphabet.size() - 1)]); break;
          default: text.erase(pos, 1); break;
        }
      }
    }
    try {
      const auto a = parse_script(text);
      ++parsed;
      (void)validate_structure(a);
      ASSERT_TRUE(a.structurally_equal(parse_script(serialize(a)))) << text;
    } catch (const ScriptSyntaxError& e) {
      ASSERT_LE(e.offset(), text.size()) << text;
    }
  }
  EXPECT_GT(parsed, 0u);
}

}  // namespace
}  // namespace crosswalk
