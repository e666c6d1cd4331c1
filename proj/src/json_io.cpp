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

#include "crosswalk/json_io.hpp"

#include <cmath>

#include "crosswalk/blake2b.hpp"
#include "crosswalk/error.hpp"

namespace crosswalk {

namespace {

Json scalar_to_json(const ScalarValue& value) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, double>) {
          if (!std::isfinite(v)) return format_number(v);
          return v;
        } else if constexpr (std::is_same_v<T, Date> || std::is_same_v<T, DateTime>) {
          return v.iso();
        } else {
          return v;
        }
      },
      value);
}

ScalarValue scalar_from_json(const Json& value) {
  if (value.is_null()) return std::monostate{};
  if (value.is_string()) return value.get<std::string>();
  if (value.is_boolean()) return value.get<bool>();
  if (value.is_number_integer()) return value.get<std::int64_t>();
  if (value.is_number()) return value.get<double>();
  throw SchemaError("expected a scalar value, got " + value.dump());
}

template <typename T>
T required(const Json& doc, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) throw SchemaError(std::string("missing key '") + key + "'");
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw SchemaError(std::string("key '") + key + "' has the wrong type");
  }
}

template <typename T>
std::optional<T> optional(const Json& doc, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) return std::nullopt;
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw SchemaError(std::string("key '") + key + "' has the wrong type");
  }
}

void require_object(const Json& doc, const char* what) {
  if (!doc.is_object()) throw SchemaError(std::string(what) + " document must be a JSON object");
}

Json optional_text(const std::optional<std::string>& value) {
  return value ? Json(*value) : Json(nullptr);
}

Json string_list(const std::vector<std::string>& items) {
  Json out = Json::array();
  for (const auto& s : items) out.push_back(s);
  return out;
}

Json issues(const std::vector<CoercionIssue>& list) {
  Json out = Json::array();
  for (const auto& i : list) out.push_back(Json{{"field", i.field}, {"row", i.row}, {"original", i.original}});
  return out;
}

}  // namespace

Json cell_to_json(const CellValue& cell) {
  if (const auto* list = cell.as_list()) {
    Json out = Json::array();
    for (const auto& v : *list) out.push_back(scalar_to_json(v));
    return out;
  }
  return scalar_to_json(cell.to_scalar());
}

CellValue cell_from_json(const Json& value) {
  if (value.is_array()) {
    ListValue list;
    for (const auto& v : value) list.push_back(scalar_from_json(v));
    return CellValue::list(std::move(list));
  }
  return CellValue(scalar_from_json(value));
}

Json to_json(const DateTime& when) { return when.iso(); }

DateTime datetime_from_json(const Json& value) {
  if (!value.is_string()) throw SchemaError("timestamp must be a string");
  auto parsed = DateTime::parse_iso(value.get<std::string>());
  if (!parsed) throw SchemaError("invalid timestamp '" + value.get<std::string>() + "'");
  return *parsed;
}

Json to_json(const DataSourceRecord& record) {
  Json out;
  out["source_path"] = record.source_path;
  out["format"] = std::string(to_string(record.format));
  out["sheet_name"] = optional_text(record.sheet_name);
  out["digest"] = record.digest;
  out["imported_at"] = to_json(record.imported_at);
  out["citation"] = optional_text(record.citation);
  out["row_count"] = record.row_count;
  out["column_count"] = record.column_count;
  out["skip_rows"] = record.skip_rows;
  return out;
}

DataSourceRecord record_from_json(const Json& doc) {
  require_object(doc, "record");
  DataSourceRecord r;
  r.source_path = required<std::string>(doc, "source_path");
  const auto format = parse_source_format(required<std::string>(doc, "format"));
  if (!format) throw SchemaError("unknown source format");
  r.format = *format;
  r.sheet_name = optional<std::string>(doc, "sheet_name");
  r.digest = required<std::string>(doc, "digest");
  if (!is_digest(r.digest)) throw SchemaError("digest must be 128 lowercase hex characters");
  r.imported_at = datetime_from_json(required<Json>(doc, "imported_at"));
  r.citation = optional<std::string>(doc, "citation");
  r.row_count = required<std::size_t>(doc, "row_count");
  r.column_count = required<std::size_t>(doc, "column_count");
  r.skip_rows = optional<std::size_t>(doc, "skip_rows").value_or(0);
  return r;
}

Json to_json(const IngestOptions& o) {
  Json out;
  out["header_row"] = o.header_row ? Json(*o.header_row) : Json(nullptr);
  out["no_header"] = o.no_header;
  out["generated_name_prefix"] = o.generated_name_prefix;
  out["delimiter"] = std::string(1, o.delimiter);
  out["encoding"] = o.encoding;
  out["field_names"] = string_list(o.field_names);
  out["sheet"] = optional_text(o.sheet);
  out["format"] = o.format ? Json(std::string(to_string(*o.format))) : Json(nullptr);
  out["citation"] = optional_text(o.citation);
  return out;
}

IngestOptions ingest_options_from_json(const Json& doc) {
  require_object(doc, "ingest options");
  IngestOptions o;
  o.header_row = optional<std::size_t>(doc, "header_row");
  o.no_header = optional<bool>(doc, "no_header").value_or(false);
  o.generated_name_prefix = optional<std::string>(doc, "generated_name_prefix").value_or("column");
  const auto delimiter = optional<std::string>(doc, "delimiter").value_or(",");
  if (delimiter.size() != 1) throw SchemaError("delimiter must be a single character");
  o.delimiter = delimiter[0];
  o.encoding = optional<std::string>(doc, "encoding").value_or("UTF-8");
  o.field_names = optional<std::vector<std::string>>(doc, "field_names").value_or(std::vector<std::string>{});
  o.sheet = optional<std::string>(doc, "sheet");
  if (auto f = optional<std::string>(doc, "format")) {
    o.format = parse_source_format(*f);
    if (!o.format) throw SchemaError("unknown source format '" + *f + "'");
  }
  o.citation = optional<std::string>(doc, "citation");
  return o;
}

Json to_json(const SchemaModel& schema) {
  Json out;
  out["uuid"] = schema.uuid;
  out["name"] = schema.name;
  if (schema.description) out["description"] = *schema.description;
  out["version"] = schema.version;
  if (schema.derived_from) out["derived_from"] = *schema.derived_from;
  Json fields = Json::array();
  for (const auto& f : schema.fields) {
    Json field;
    field["name"] = f.name;
    if (f.title) field["title"] = *f.title;
    if (f.description) field["description"] = *f.description;
    field["type"] = std::string(to_string(f.type));
    Json c;
    c["required"] = f.constraints.required;
    c["unique"] = f.constraints.unique;
    if (f.constraints.minimum) c["minimum"] = *f.constraints.minimum;
    if (f.constraints.maximum) c["maximum"] = *f.constraints.maximum;
    if (f.constraints.categories) {
      Json terms = Json::array();
      for (const auto& t : *f.constraints.categories) {
        Json term;
        term["name"] = t.name;
        if (t.description) term["description"] = *t.description;
        terms.push_back(std::move(term));
      }
      c["categories"] = std::move(terms);
    }
    if (f.constraints.default_value) c["default"] = cell_to_json(*f.constraints.default_value);
    field["constraints"] = std::move(c);
    fields.push_back(std::move(field));
  }
  out["fields"] = std::move(fields);
  return out;
}

SchemaModel schema_from_json(const Json& doc) {
  require_object(doc, "schema");
  SchemaModel s;
  s.uuid = optional<std::string>(doc, "uuid").value_or("");
  s.name = required<std::string>(doc, "name");
  s.description = optional<std::string>(doc, "description");
  s.version = optional<std::int64_t>(doc, "version").value_or(1);
  s.derived_from = optional<std::string>(doc, "derived_from");
  const auto it = doc.find("fields");
  if (it == doc.end() || !it->is_array()) throw SchemaError("schema needs a 'fields' array");
  for (const auto& fj : *it) {
    require_object(fj, "field");
    FieldDefinition f;
    f.name = required<std::string>(fj, "name");
    f.title = optional<std::string>(fj, "title");
    f.description = optional<std::string>(fj, "description");
    const auto type_text = optional<std::string>(fj, "type").value_or("string");
    const auto type = parse_field_type(type_text);
    if (!type) throw SchemaError("field '" + f.name + "': unknown type '" + type_text + "'");
    f.type = *type;
    if (const auto c = fj.find("constraints"); c != fj.end() && !c->is_null()) {
      require_object(*c, "constraints");
      f.constraints.required = optional<bool>(*c, "required").value_or(false);
      f.constraints.unique = optional<bool>(*c, "unique").value_or(false);
      f.constraints.minimum = optional<double>(*c, "minimum");
      f.constraints.maximum = optional<double>(*c, "maximum");
      if (const auto cats = c->find("categories"); cats != c->end() && !cats->is_null()) {
        if (!cats->is_array()) throw SchemaError("field '" + f.name + "': categories must be an array");
        std::vector<CategoryTerm> terms;
        for (const auto& t : *cats) {
          if (t.is_string()) {
            terms.push_back({t.get<std::string>(), std::nullopt});
          } else {
            require_object(t, "category");
            terms.push_back({required<std::string>(t, "name"), optional<std::string>(t, "description")});
          }
        }
        f.constraints.categories = std::move(terms);
      }
      if (const auto d = c->find("default"); d != c->end() && !d->is_null()) {
        CellValue raw;
        try {
          raw = cell_from_json(*d);
        } catch (const SchemaError&) {
          throw SchemaError("field '" + f.name + "': default must be a scalar or an array of scalars");
        }
        auto coerced = coerce_value(raw, f.type);
        if (!coerced.ok) throw SchemaError("field '" + f.name + "': default does not match type " + type_text);
        f.constraints.default_value = coerced.value;
      }
    }
    s.fields.push_back(std::move(f));
  }
  s.check();
  return s;
}

Json to_json(const Crosswalk& cw) {
  Json out;
  out["uuid"] = cw.uuid;
  out["name"] = cw.name;
  out["version"] = cw.version;
  out["status"] = std::string(to_string(cw.status));
  out["source_fingerprint"] = cw.source_fingerprint;
  out["dest_schema_uuid"] = cw.dest_schema_uuid;
  out["created_at"] = to_json(cw.created_at);
  out["updated_at"] = to_json(cw.updated_at);
  out["actions"] = string_list(cw.scripts());
  return out;
}

Crosswalk crosswalk_from_json(const Json& doc) {
  require_object(doc, "crosswalk");
  Crosswalk cw;
  cw.uuid = required<std::string>(doc, "uuid");
  cw.name = optional<std::string>(doc, "name").value_or("");
  cw.version = optional<std::int64_t>(doc, "version").value_or(1);
  const auto status = parse_crosswalk_status(optional<std::string>(doc, "status").value_or("draft"));
  if (!status) throw SchemaError("unknown crosswalk status");
  cw.status = *status;
  cw.source_fingerprint = required<std::string>(doc, "source_fingerprint");
  cw.dest_schema_uuid = required<std::string>(doc, "dest_schema_uuid");
  cw.created_at = datetime_from_json(required<Json>(doc, "created_at"));
  cw.updated_at = datetime_from_json(required<Json>(doc, "updated_at"));
  for (const auto& script : required<std::vector<std::string>>(doc, "actions")) {
    cw.actions.push_back(parse_script(script));
  }
  return cw;
}

Json to_json(const ActionIssue& issue) {
  Json out;
  out["step"] = issue.step;
  out["script"] = issue.script;
  out["kind"] = issue.kind;
  out["field"] = issue.field;
  out["message"] = issue.message;
  return out;
}

Json to_json(const ValidationOutcome& outcome) {
  Json out;
  out["ok"] = outcome.ok();
  Json errors = Json::array();
  for (const auto& e : outcome.errors) errors.push_back(to_json(e));
  Json warnings = Json::array();
  for (const auto& w : outcome.warnings) warnings.push_back(to_json(w));
  out["errors"] = std::move(errors);
  out["warnings"] = std::move(warnings);
  out["mapped_dest_fields"] = string_list(outcome.mapped_dest_fields);
  out["unmapped_dest_fields"] = string_list(outcome.unmapped_dest_fields);
  out["mapped_source_fields"] = string_list(outcome.mapped_source_fields);
  return out;
}

Json to_json(const AuditRecord& record) {
  Json out;
  out["step"] = record.step;
  out["action"] = record.action;
  out["rows_before"] = record.rows_before;
  out["rows_after"] = record.rows_after;
  out["warnings_emitted"] = record.warnings_emitted;
  out["duration_ms"] = record.duration_ms;
  return out;
}

Json to_json(const CoercionReport& report) {
  Json out;
  out["failures"] = issues(report.failures);
  out["ambiguous_dates"] = issues(report.ambiguous_dates);
  return out;
}

Json to_json(const ValidationReport& report) {
  Json out;
  out["ok"] = report.ok();
  Json list = Json::array();
  for (const auto& v : report.violations) {
    Json item;
    item["kind"] = std::string(to_string(v.kind));
    item["field"] = v.field;
    item["rows"] = v.rows;
    item["value"] = v.value;
    item["message"] = v.message;
    list.push_back(std::move(item));
  }
  out["violations"] = std::move(list);
  return out;
}

Json to_json(const ActionInfo& info) {
  Json out;
  out["name"] = std::string(to_string(info.name));
  out["dest"] = std::string(info.dest);
  out["dest_term"] = info.dest_term;
  out["source_term"] = std::string(info.source_term);
  out["source_items"] = std::string(info.source_items);
  out["barrier"] = info.barrier;
  out["summary"] = std::string(info.summary);
  out["example"] = std::string(info.example);
  return out;
}

Json to_json(const StructureViolation& violation) {
  Json out;
  out["clause"] = violation.clause;
  out["message"] = violation.message;
  return out;
}

Json table_to_json(const Table& table) {
  Json out;
  out["columns"] = string_list(table.column_names());
  out["row_labels"] = table.row_labels();
  Json rows = Json::array();
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    Json row = Json::array();
    for (const auto& c : table.columns()) row.push_back(cell_to_json(c[r]));
    rows.push_back(std::move(row));
  }
  out["rows"] = std::move(rows);
  return out;
}

Json error_to_json(const std::exception& error) {
  Json out;
  auto set = [&](const char* kind) { out["error"] = kind; };
  if (const auto* e = dynamic_cast<const UnknownActionError*>(&error)) {
    set("unknown_action");
    out["name"] = e->name();
    out["offset"] = e->offset();
  } else if (const auto* e = dynamic_cast<const ScriptSyntaxError*>(&error)) {
    set("script_syntax");
    out["offset"] = e->offset();
    out["expected"] = string_list(e->expected());
  } else if (const auto* e = dynamic_cast<const ParseError*>(&error)) {
    set("parse");
    out["row"] = e->row();
    out["offset"] = e->offset();
  } else if (const auto* e = dynamic_cast<const UnknownColumnError*>(&error)) {
    set("unknown_column");
    out["name"] = e->name();
    out["available"] = string_list(e->available());
  } else if (const auto* e = dynamic_cast<const UnknownFieldError*>(&error)) {
    set("unknown_field");
    out["field"] = e->field();
  } else if (const auto* e = dynamic_cast<const DuplicateHeaderError*>(&error)) {
    set("duplicate_header");
    out["names"] = string_list(e->names());
  } else if (const auto* e = dynamic_cast<const FingerprintMismatchError*>(&error)) {
    set("fingerprint_mismatch");
    out["expected"] = e->expected();
    out["actual"] = e->actual();
  } else if (const auto* e = dynamic_cast<const VersionConflictError*>(&error)) {
    set("version_conflict");
    out["expected_version"] = e->expected();
    out["actual_version"] = e->actual();
  } else if (dynamic_cast<const EmptyFileError*>(&error)) {
    set("empty_file");
  } else if (dynamic_cast<const UnsupportedFormatError*>(&error)) {
    set("unsupported_format");
  } else if (dynamic_cast<const IoError*>(&error)) {
    set("io");
  } else if (dynamic_cast<const SchemaError*>(&error)) {
    set("schema");
  } else if (dynamic_cast<const NotFoundError*>(&error)) {
    set("not_found");
  } else if (dynamic_cast<const ProbityError*>(&error)) {
    set("probity");
  } else if (dynamic_cast<const StateError*>(&error)) {
    set("state");
  } else if (dynamic_cast<const PreconditionError*>(&error)) {
    set("precondition");
  } else if (dynamic_cast<const TableError*>(&error)) {
    set("table");
  } else {
    set("internal");
  }
  out["message"] = error.what();
  return out;
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

}  // namespace crosswalk
