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

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "crosswalk/schema.hpp"

namespace crosswalk {

enum class ActionName {
  CALCULATE,
  CATEGORISE,
  COLLATE,
  DEBLANK,
  DEDUPE,
  DELETE_ROWS,
  NEW,
  PIVOT_CATEGORIES,
  PIVOT_LONGER,
  RENAME,
  SELECT,
  SELECT_NEWEST,
  SELECT_OLDEST,
  SEPARATE,
  UNITE,
};

inline constexpr std::size_t kActionCount = 15;

const std::array<ActionName, kActionCount>& all_actions() noexcept;
std::string_view to_string(ActionName action) noexcept;
std::optional<ActionName> parse_action_name(std::string_view text) noexcept;

/// Actions that need the whole table and bound row-parallel execution.
bool is_barrier(ActionName action) noexcept;

struct FieldRef {
  std::string name;
  bool operator==(const FieldRef&) const = default;
};
struct Literal {
  std::string text;
  bool operator==(const Literal&) const = default;
};
struct BooleanLiteral {
  bool value = false;
  bool operator==(const BooleanLiteral&) const = default;
};
struct IntegerLiteral {
  std::int64_t value = 0;
  bool operator==(const IntegerLiteral&) const = default;
};
struct Placeholder {
  bool operator==(const Placeholder&) const = default;
};
enum class Sign { plus, minus };
struct SignedField {
  Sign sign = Sign::plus;
  std::string name;
  bool operator==(const SignedField&) const = default;
};
struct DatedField {
  std::string value_field;
  std::string date_field;
  bool operator==(const DatedField&) const = default;
};

using SourceItem =
    std::variant<FieldRef, Literal, BooleanLiteral, IntegerLiteral, Placeholder, SignedField, DatedField>;

/// Destination term: quoted text or a bare True/False.
using DestTerm = std::variant<std::string, bool>;

struct ParsedAction {
  ActionName action = ActionName::DEBLANK;
  std::vector<std::string> dest_fields;
  bool dest_bracketed = false;
  std::optional<DestTerm> dest_term;
  std::optional<std::string> source_term;
  std::vector<SourceItem> source_items;
  bool source_bracketed = false;
  /// Script text exactly as given to the parser.
  std::string raw;

  /// Equality of everything except `raw`.
  bool structurally_equal(const ParsedAction& other) const;
};

/// Throws ScriptSyntaxError (with byte offset and expected tokens) or
/// UnknownActionError. Never crashes on arbitrary input.
ParsedAction parse_script(std::string_view text);

/// Canonical single-line form.
std::string serialize(const ParsedAction& action);

/// Escapes `text` as a quoted script token.
std::string quote(std::string_view text);

struct StructureViolation {
  std::string clause;  // "dest", "dest_term", "source_term", "source_items"
  std::string message;

  bool operator==(const StructureViolation&) const = default;
};

/// Empty iff the clause shapes match the action's signature.
std::vector<StructureViolation> validate_structure(const ParsedAction& action);

enum class SchemaViolationKind { unknown_dest_field, unknown_source_field, unknown_category_term, missing_literal };

std::string_view to_string(SchemaViolationKind kind) noexcept;

struct SchemaViolation {
  SchemaViolationKind kind;
  std::string field;
  std::string message;

  bool operator==(const SchemaViolation&) const = default;
};

std::vector<SchemaViolation> validate_against_schemas(const ParsedAction& action, const SchemaModel& source,
                                                      const SchemaModel& dest);

/// Source field names the action reads, in script order (duplicates kept).
std::vector<std::string> source_fields_of(const ParsedAction& action);

/// Fields an action adds to the working source (PIVOT_* outputs).
std::vector<std::string> source_fields_added_by(const ParsedAction& action);

/// Clause signature of one action, for palettes and documentation.
struct ActionInfo {
  ActionName name;
  std::string_view dest;          // "none" | "field" | "field_pair" | "field_list"
  bool dest_term;                 // CATEGORISE only
  std::string_view source_term;   // "none" | "separator" | "field"
  std::string_view source_items;  // "none" | "field" | "fields" | "literal" | "match_terms" |
                                  // "signed_fields" | "fields_or_placeholders" | "dated_fields" | "rows"
  bool barrier;
  std::string_view summary;
  std::string_view example;
};

const std::array<ActionInfo, kActionCount>& action_catalog() noexcept;
const ActionInfo& action_info(ActionName action) noexcept;

}  // namespace crosswalk
