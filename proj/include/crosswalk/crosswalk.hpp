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
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "crosswalk/actions.hpp"
#include "crosswalk/ingest.hpp"
#include "crosswalk/schema.hpp"
#include "crosswalk/script.hpp"

namespace crosswalk {

enum class CrosswalkStatus { draft, validated };

std::string_view to_string(CrosswalkStatus status) noexcept;
std::optional<CrosswalkStatus> parse_crosswalk_status(std::string_view text) noexcept;

struct Crosswalk {
  std::string uuid;
  std::string name;
  std::int64_t version = 1;
  CrosswalkStatus status = CrosswalkStatus::draft;
  std::string source_fingerprint;
  std::string dest_schema_uuid;
  DateTime created_at;
  DateTime updated_at;
  std::vector<ParsedAction> actions;

  /// Canonical script text of every action, in order.
  std::vector<std::string> scripts() const;
};

struct ActionIssue {
  std::size_t step = 0;
  std::string script;
  std::string kind;  // "structure" | "schema" | "coverage"
  std::string field;
  std::string message;
};

struct ValidationOutcome {
  std::vector<ActionIssue> errors;
  std::vector<ActionIssue> warnings;
  /// Destination fields written by at least one action, in schema order.
  std::vector<std::string> mapped_dest_fields;
  std::vector<std::string> unmapped_dest_fields;
  /// Source schema fields read by at least one action, in schema order.
  std::vector<std::string> mapped_source_fields;

  bool ok() const noexcept { return errors.empty(); }
};

/// Checks every action against its clause signature and the schemas, tracking
/// the fields PIVOT actions add to or remove from the working source.
/// Unwritten destination fields are warnings, or errors when required.
/// Throws FingerprintMismatchError when `source` is not the schema the
/// crosswalk was authored against.
ValidationOutcome validate_crosswalk(const Crosswalk& cw, const SchemaModel& source, const SchemaModel& dest);

struct AuditRecord {
  std::size_t step = 0;
  std::string action;
  std::size_t rows_before = 0;
  std::size_t rows_after = 0;
  std::size_t warnings_emitted = 0;
  double duration_ms = 0;
};

struct TransformResult {
  /// Columns exactly the destination schema's fields, in order.
  Table table;
  std::vector<AuditRecord> audit;
  /// Failures converting source cells to curator-assigned source types.
  CoercionReport source_coercion;
  CoercionReport coercion_report;
  ValidationReport validation_report;
  std::vector<std::string> warnings;
};

struct ApplyOptions {
  ExecOptions exec;
  /// Refuse draft crosswalks.
  bool require_validated = true;
  /// Run on the first N source rows only.
  std::optional<std::size_t> row_limit;
};

/// Runs the actions in order, then assembles, coerces, fills defaults and
/// validates the destination table. Deterministic apart from durations, which
/// are zero when clock_is_fixed().
TransformResult apply_crosswalk(const Table& table, const Crosswalk& cw, const SchemaModel& source,
                                const SchemaModel& dest, const ApplyOptions& options = {});

struct MatchResult {
  Crosswalk crosswalk;
  /// Set on every match: the curator still has to confirm it.
  bool auto_assigned = true;
};

/// Most recently updated validated crosswalk for (source_fp, dest_uuid);
/// ties go to the later library entry.
std::optional<MatchResult> match_existing(const std::string& source_fp, const std::string& dest_uuid,
                                          std::span<const Crosswalk> library);

enum class ExportFormat { csv, parquet };

std::string_view to_string(ExportFormat format) noexcept;
std::optional<ExportFormat> parse_export_format(std::string_view text) noexcept;

/// Serialized file content. Parquet columns are typed from `dest`.
std::string render_table(const Table& table, ExportFormat format, const SchemaModel& dest);

/// Writes the file and returns a record carrying the output's own digest.
DataSourceRecord export_table(const TransformResult& result, ExportFormat format,
                              const std::filesystem::path& path, const SchemaModel& dest, DateTime when);

}  // namespace crosswalk
