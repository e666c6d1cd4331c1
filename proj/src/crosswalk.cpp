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

#include "crosswalk/crosswalk.hpp"

#include <algorithm>
#include <chrono>
#include <set>
#include <sstream>

#include "crosswalk/blake2b.hpp"
#include "crosswalk/clock.hpp"
#include "crosswalk/csv.hpp"
#include "crosswalk/error.hpp"
#include "crosswalk/files.hpp"
#include "crosswalk/parquet.hpp"

namespace crosswalk {

namespace {

/// Source schema as seen by step i: PIVOT actions add and remove fields.
void evolve(SchemaModel& working, const ParsedAction& a) {
  if (a.action == ActionName::PIVOT_LONGER) {
    std::set<std::string> pivoted;
    for (const auto& item : a.source_items) {
      if (const auto* f = std::get_if<FieldRef>(&item)) pivoted.insert(f->name);
    }
    std::erase_if(working.fields, [&](const FieldDefinition& f) { return pivoted.count(f.name) != 0; });
  }
  for (const auto& added : source_fields_added_by(a)) {
    if (!working.find_field(added)) {
      FieldDefinition def;
      def.name = added;
      working.fields.push_back(std::move(def));
    }
  }
}

std::vector<std::string> in_schema_order(const SchemaModel& schema, const std::set<std::string>& names) {
  std::vector<std::string> out;
  for (const auto& f : schema.fields) {
    if (names.count(f.name)) out.push_back(f.name);
  }
  return out;
}

SchemaModel typed_subset(const SchemaModel& source, const Table& table) {
  SchemaModel out = source;
  std::erase_if(out.fields, [&](const FieldDefinition& f) {
    return f.type == FieldType::string || !table.has_column(f.name);
  });
  return out;
}

parquet::ColumnType column_type(FieldType t) {
  switch (t) {
    case FieldType::string:
    case FieldType::category: return parquet::ColumnType::string;
    case FieldType::integer: return parquet::ColumnType::integer;
    case FieldType::number: return parquet::ColumnType::number;
    case FieldType::boolean: return parquet::ColumnType::boolean;
    case FieldType::date: return parquet::ColumnType::date;
    case FieldType::datetime: return parquet::ColumnType::datetime;
    case FieldType::array: return parquet::ColumnType::list;
  }
  return parquet::ColumnType::string;
}

}  // namespace

std::string_view to_string(CrosswalkStatus status) noexcept {
  return status == CrosswalkStatus::validated ? "validated" : "draft";
}

std::optional<CrosswalkStatus> parse_crosswalk_status(std::string_view text) noexcept {
  if (text == "draft") return CrosswalkStatus::draft;
  if (text == "validated") return CrosswalkStatus::validated;
  return std::nullopt;
}

std::vector<std::string> Crosswalk::scripts() const {
  std::vector<std::string> out;
  out.reserve(actions.size());
  for (const auto& a : actions) out.push_back(serialize(a));
  return out;
}

ValidationOutcome validate_crosswalk(const Crosswalk& cw, const SchemaModel& source, const SchemaModel& dest) {
  const std::string actual = fingerprint(source);
  if (actual != cw.source_fingerprint) throw FingerprintMismatchError(cw.source_fingerprint, actual);

  ValidationOutcome out;
  SchemaModel working = source;
  std::set<std::string> written;
  std::set<std::string> read;
  for (std::size_t i = 0; i < cw.actions.size(); ++i) {
    const ParsedAction& a = cw.actions[i];
    const std::string script = serialize(a);
    const auto structure = validate_structure(a);
    for (const auto& v : structure) out.errors.push_back({i, script, "structure", v.clause, v.message});
    if (structure.empty()) {
      for (const auto& v : validate_against_schemas(a, working, dest)) {
        out.errors.push_back({i, script, "schema", v.field, v.message});
      }
    }
    if (source_fields_added_by(a).empty()) {
      for (const auto& f : a.dest_fields) {
        if (dest.find_field(f)) written.insert(f);
      }
    }
    for (const auto& f : source_fields_of(a)) read.insert(f);
    evolve(working, a);
  }
  for (const auto& f : dest.fields) {
    if (written.count(f.name)) continue;
    out.unmapped_dest_fields.push_back(f.name);
    const bool fatal = f.constraints.required && !f.constraints.default_value;
    ActionIssue issue{cw.actions.size(), "", "coverage", f.name, f.name + " unmapped"};
    (fatal ? out.errors : out.warnings).push_back(std::move(issue));
  }
  out.mapped_dest_fields = in_schema_order(dest, written);
  out.mapped_source_fields = in_schema_order(source, read);
  return out;
}

TransformResult apply_crosswalk(const Table& table, const Crosswalk& cw, const SchemaModel& source,
                                const SchemaModel& dest, const ApplyOptions& options) {
  if (options.require_validated && cw.status != CrosswalkStatus::validated) {
    throw StateError("crosswalk '" + cw.name + "' is not validated");
  }
  const std::string actual = fingerprint(source);
  if (actual != cw.source_fingerprint) throw FingerprintMismatchError(cw.source_fingerprint, actual);

  TransformResult result;
  Table input = options.row_limit ? preview(table, *options.row_limit) : table;
  const SchemaModel typed = typed_subset(source, input);
  if (!typed.fields.empty()) {
    auto coerced = coerce_table(input, typed);
    input = std::move(coerced.table);
    result.source_coercion = std::move(coerced.report);
  }

  ActionContext ctx = ActionContext::start(std::move(input), source, dest);
  const bool timed = !clock_is_fixed();
  for (std::size_t i = 0; i < cw.actions.size(); ++i) {
    const auto started = std::chrono::steady_clock::now();
    AuditRecord rec;
    rec.step = i;
    rec.action = serialize(cw.actions[i]);
    rec.rows_before = ctx.source.row_count();
    const std::size_t warnings_before = ctx.warnings.size();
    apply_action(ctx, cw.actions[i], options.exec);
    rec.rows_after = ctx.source.row_count();
    rec.warnings_emitted = ctx.warnings.size() - warnings_before;
    if (timed) {
      rec.duration_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
    }
    result.audit.push_back(std::move(rec));
  }

  std::vector<Column> columns;
  columns.reserve(dest.fields.size());
  const std::size_t rows = ctx.dest.row_count();
  for (const auto& f : dest.fields) {
    if (const Column* c = ctx.dest.find_column(f.name)) {
      columns.push_back(*c);
    } else {
      columns.emplace_back(f.name, Cells(rows));
      ctx.warnings.push_back(f.name + " unmapped");
    }
  }
  Table assembled(std::move(columns), ctx.dest.row_labels());
  auto coerced = coerce_table(assembled, dest);
  result.coercion_report = std::move(coerced.report);

  std::vector<Column> filled;
  for (std::size_t i = 0; i < dest.fields.size(); ++i) {
    const auto& f = dest.fields[i];
    const Column& col = coerced.table.columns()[i];
    const auto& def = f.constraints.default_value;
    if (!def || def->is_empty() ||
        std::none_of(col.cells().begin(), col.cells().end(), [](const CellValue& c) { return c.is_empty(); })) {
      filled.push_back(col);
      continue;
    }
    Cells cells = col.cells();
    for (auto& c : cells) {
      if (c.is_empty()) c = *def;
    }
    filled.emplace_back(f.name, std::move(cells));
  }
  result.table = Table(std::move(filled), coerced.table.row_labels());
  result.validation_report = validate_table(result.table, dest);
  result.warnings = std::move(ctx.warnings);
  return result;
}

std::optional<MatchResult> match_existing(const std::string& source_fp, const std::string& dest_uuid,
                                          std::span<const Crosswalk> library) {
  const Crosswalk* best = nullptr;
  for (const auto& cw : library) {
    if (cw.status != CrosswalkStatus::validated || cw.source_fingerprint != source_fp ||
        cw.dest_schema_uuid != dest_uuid) {
      continue;
    }
    if (!best || cw.updated_at >= best->updated_at) best = &cw;
  }
  if (!best) return std::nullopt;
  return MatchResult{*best, true};
}

std::string_view to_string(ExportFormat format) noexcept {
  return format == ExportFormat::parquet ? "parquet" : "csv";
}

std::optional<ExportFormat> parse_export_format(std::string_view text) noexcept {
  if (text == "csv") return ExportFormat::csv;
  if (text == "parquet") return ExportFormat::parquet;
  return std::nullopt;
}

std::string render_table(const Table& table, ExportFormat format, const SchemaModel& dest) {
  std::ostringstream out;
  if (format == ExportFormat::csv) {
    csv::write_table(out, table);
    return out.str();
  }
  std::vector<parquet::ColumnType> types;
  for (const auto& name : table.column_names()) {
    const auto* f = dest.find_field(name);
    types.push_back(f ? column_type(f->type) : parquet::ColumnType::string);
  }
  parquet::write(out, table, types);
  return out.str();
}

DataSourceRecord export_table(const TransformResult& result, ExportFormat format, const std::filesystem::path& path,
                              const SchemaModel& dest, DateTime when) {
  const std::string content = render_table(result.table, format, dest);
  write_file_atomic(path, content);
  DataSourceRecord rec;
  rec.source_path = path.string();
  rec.format = format == ExportFormat::csv ? SourceFormat::csv : SourceFormat::parquet;
  rec.digest = hash_bytes(content);
  rec.imported_at = when;
  rec.row_count = result.table.row_count();
  rec.column_count = result.table.column_count();
  return rec;
}

}  // namespace crosswalk
