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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "crosswalk/cell.hpp"
#include "crosswalk/table.hpp"

namespace crosswalk {

enum class FieldType { string, integer, number, boolean, date, datetime, array, category };

std::string_view to_string(FieldType type) noexcept;
std::optional<FieldType> parse_field_type(std::string_view text) noexcept;

struct CategoryTerm {
  std::string name;
  std::optional<std::string> description;

  bool operator==(const CategoryTerm&) const = default;
};

struct FieldConstraints {
  bool required = false;
  bool unique = false;
  std::optional<double> minimum;
  std::optional<double> maximum;
  std::optional<std::vector<CategoryTerm>> categories;
  std::optional<CellValue> default_value;

  bool operator==(const FieldConstraints&) const = default;
};

struct FieldDefinition {
  std::string name;
  std::optional<std::string> title;
  std::optional<std::string> description;
  FieldType type = FieldType::string;
  FieldConstraints constraints;

  bool operator==(const FieldDefinition&) const = default;
};

struct SchemaModel {
  std::string uuid;
  std::string name;
  std::optional<std::string> description;
  std::vector<FieldDefinition> fields;
  std::int64_t version = 1;
  /// Digest of the source file this schema was derived from.
  std::optional<std::string> derived_from;

  const FieldDefinition* find_field(std::string_view field) const noexcept;
  /// Throws UnknownFieldError.
  const FieldDefinition& field(std::string_view field) const;
  std::vector<std::string> field_names() const;

  /// Throws SchemaError when an invariant is broken (duplicate or empty
  /// names, minimum > maximum, category type without terms, duplicate term
  /// names, default not of the field's type).
  void check() const;

  bool operator==(const SchemaModel&) const = default;
};

/// UUID-formatted identifier derived from `seed` by hashing; equal seeds
/// give equal identifiers.
std::string uuid_from_seed(std::string_view seed);

/// Minimum transformable schema: one string field per column, same order,
/// no constraints. Throws SchemaError for a zero-column table.
SchemaModel derive_schema(const Table& table, std::string name = "source",
                          std::optional<std::string> derived_from = std::nullopt);

/// New version with the field's type replaced. Switching to `category`
/// requires the field to carry category terms already.
SchemaModel set_field_type(const SchemaModel& schema, std::string_view field, FieldType type);
SchemaModel set_field_categories(const SchemaModel& schema, std::string_view field,
                                 std::vector<CategoryTerm> terms);
/// New version with `definition` replacing the same-named field.
SchemaModel replace_field(const SchemaModel& schema, FieldDefinition definition);

enum class CategoryMode { unique_terms, boolean_presence };

std::optional<CategoryMode> parse_category_mode(std::string_view text) noexcept;

/// unique_terms: distinct non-empty cell texts in first-appearance order.
/// boolean_presence: always the terms "true" and "false".
std::vector<CategoryTerm> derive_categories(const Table& table, std::string_view field, CategoryMode mode);

// --- coercion ---------------------------------------------------------------

struct CoercedValue {
  CellValue value;
  bool ok = true;
  /// A day-first date whose day and month could be swapped.
  bool ambiguous = false;
};

/// Converts one cell to `type`. Empty stays empty and succeeds; failures
/// return an empty value with ok == false.
CoercedValue coerce_value(const CellValue& cell, FieldType type);

struct CoercionIssue {
  std::string field;
  RowLabel row = 0;
  std::string original;

  bool operator==(const CoercionIssue&) const = default;
};

struct CoercionReport {
  std::vector<CoercionIssue> failures;
  std::vector<CoercionIssue> ambiguous_dates;

  std::size_t failure_count(std::string_view field) const;
  bool clean() const noexcept { return failures.empty(); }
};

struct CoercedTable {
  Table table;
  CoercionReport report;
};

/// Coerces every schema field's column. Columns absent from the schema pass
/// through. Throws UnknownFieldError when a schema field has no column.
CoercedTable coerce_table(const Table& table, const SchemaModel& schema);

// --- validation -------------------------------------------------------------

enum class ViolationKind { missing_field, required, unique, minimum, maximum, category, type };

std::string_view to_string(ViolationKind kind) noexcept;

struct TableViolation {
  ViolationKind kind;
  std::string field;
  std::vector<RowLabel> rows;
  std::string value;
  std::string message;
};

struct ValidationReport {
  std::vector<TableViolation> violations;

  bool ok() const noexcept { return violations.empty(); }
};

ValidationReport validate_table(const Table& table, const SchemaModel& schema);

/// BLAKE2b-512 over the ordered (name, type) pairs only.
std::string fingerprint(const SchemaModel& schema);

}  // namespace crosswalk
