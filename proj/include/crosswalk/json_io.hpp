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

#include <exception>
#include <string>

#include "json.hpp"

#include "crosswalk/crosswalk.hpp"

namespace crosswalk {

/// Objects keep insertion order, so every document has a fixed key order.
using Json = nlohmann::ordered_json;

Json cell_to_json(const CellValue& cell);
/// Inverse for schema defaults: strings become text, numbers integer or
/// number, arrays lists. Caller coerces to the field type.
CellValue cell_from_json(const Json& value);

Json to_json(const DateTime& when);
DateTime datetime_from_json(const Json& value);

Json to_json(const DataSourceRecord& record);
DataSourceRecord record_from_json(const Json& doc);

Json to_json(const IngestOptions& options);
IngestOptions ingest_options_from_json(const Json& doc);

/// Table-Schema-shaped document; categories live under constraints.
Json to_json(const SchemaModel& schema);
/// Throws SchemaError on malformed documents or broken invariants.
SchemaModel schema_from_json(const Json& doc);

/// Actions are stored as canonical script strings.
Json to_json(const Crosswalk& cw);
/// Throws SchemaError on malformed documents, ScriptSyntaxError on bad scripts.
Crosswalk crosswalk_from_json(const Json& doc);

Json to_json(const ActionIssue& issue);
Json to_json(const ValidationOutcome& outcome);
Json to_json(const AuditRecord& record);
Json to_json(const CoercionReport& report);
Json to_json(const ValidationReport& report);
Json to_json(const ActionInfo& info);
Json to_json(const StructureViolation& violation);

/// {"columns": [...], "row_labels": [...], "rows": [[...], ...]}
Json table_to_json(const Table& table);

/// Machine-readable description of an exception: kind plus the fields the
/// error type carries (offsets, names, versions).
Json error_to_json(const std::exception& error);

/// Parses text, mapping JSON syntax errors to SchemaError.
Json parse_json(std::string_view text);

/// Pretty-printed with a trailing newline.
std::string dump(const Json& doc);

}  // namespace crosswalk
