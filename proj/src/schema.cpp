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

#include "crosswalk/schema.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <set>
#include <unordered_map>

#include "crosswalk/blake2b.hpp"
#include "crosswalk/error.hpp"
#include "crosswalk/unicode.hpp"
#include "json.hpp"

namespace crosswalk {

namespace {

std::string_view trim_ascii(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r' || s.front() == '\n')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n')) {
    s.remove_suffix(1);
  }
  return s;
}

std::optional<std::int64_t> parse_integer(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  std::int64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return v;
}

std::optional<double> parse_number(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v, std::chars_format::general);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::optional<std::int64_t> integral(double d) {
  if (!std::isfinite(d) || std::trunc(d) != d || d < -9.2e18 || d > 9.2e18) return std::nullopt;
  return static_cast<std::int64_t>(d);
}

/// D/M/YYYY or DD/MM/YYYY, day first.
std::optional<Date> parse_day_first(std::string_view s, bool& ambiguous) {
  const auto a = s.find('/');
  const auto b = a == std::string_view::npos ? a : s.find('/', a + 1);
  if (b == std::string_view::npos || s.find('/', b + 1) != std::string_view::npos) return std::nullopt;
  const auto day = parse_integer(s.substr(0, a));
  const auto month = parse_integer(s.substr(a + 1, b - a - 1));
  const auto year_text = s.substr(b + 1);
  const auto year = parse_integer(year_text);
  if (!day || !month || !year || a == 0 || a > 2 || b - a - 1 == 0 || b - a - 1 > 2 || year_text.size() != 4 ||
      s.substr(0, a).find_first_not_of("0123456789") != std::string_view::npos ||
      s.substr(a + 1, b - a - 1).find_first_not_of("0123456789") != std::string_view::npos) {
    return std::nullopt;
  }
  if (*day < 1 || *day > 31 || *month < 1 || *month > 12) return std::nullopt;
  Date d{static_cast<std::int32_t>(*year), static_cast<std::uint8_t>(*month), static_cast<std::uint8_t>(*day)};
  if (!d.valid()) return std::nullopt;
  ambiguous = *day <= 12 && *month <= 12 && *day != *month;
  return d;
}

std::optional<Date> parse_date_text(std::string_view s, bool& ambiguous) {
  ambiguous = false;
  if (auto d = Date::parse_iso(s)) return d;
  if (auto d = parse_day_first(s, ambiguous)) return d;
  if (auto dt = DateTime::parse_iso(s)) {
    if (dt->seconds % 86400 == 0 && dt->nanos == 0) return Date::from_days(dt->seconds / 86400);
  }
  return std::nullopt;
}

std::optional<bool> parse_boolean(std::string_view s) {
  static const std::set<std::string_view> kTrue = {"true", "True", "TRUE", "1"};
  static const std::set<std::string_view> kFalse = {"false", "False", "FALSE", "0"};
  if (kTrue.count(s)) return true;
  if (kFalse.count(s)) return false;
  return std::nullopt;
}

CoercedValue fail() { return CoercedValue{CellValue{}, false, false}; }

CoercedValue coerce_scalar(const CellValue& cell, FieldType type) {
  const std::string* text = cell.as_text();
  const std::string_view trimmed = text ? trim_ascii(*text) : std::string_view{};
  switch (type) {
    case FieldType::string:
    case FieldType::category:
      if (text) return {cell};
      return {CellValue::text(to_text(cell))};
    case FieldType::integer:
      if (cell.as_integer()) return {cell};
      if (const auto* d = cell.as_number()) {
        if (auto i = integral(*d)) return {CellValue::integer(*i)};
        return fail();
      }
      if (text) {
        if (auto i = parse_integer(trimmed)) return {CellValue::integer(*i)};
        if (auto d = parse_number(trimmed)) {
          if (auto i = integral(*d)) return {CellValue::integer(*i)};
        }
      }
      return fail();
    case FieldType::number:
      if (cell.as_number()) return {cell};
      if (const auto* i = cell.as_integer()) return {CellValue::number(static_cast<double>(*i))};
      if (text) {
        if (auto d = parse_number(trimmed)) return {CellValue::number(*d)};
      }
      return fail();
    case FieldType::boolean:
      if (cell.as_boolean()) return {cell};
      if (text) {
        if (auto b = parse_boolean(trimmed)) return {CellValue::boolean(*b)};
      }
      if (const auto* i = cell.as_integer(); i && (*i == 0 || *i == 1)) return {CellValue::boolean(*i == 1)};
      return fail();
    case FieldType::date: {
      if (cell.as_date()) return {cell};
      if (const auto* dt = cell.as_datetime()) {
        if (dt->seconds % 86400 == 0 && dt->nanos == 0) return {CellValue::date(Date::from_days(dt->seconds / 86400))};
        return fail();
      }
      bool ambiguous = false;
      if (text) {
        if (auto d = parse_date_text(trimmed, ambiguous)) return {CellValue::date(*d), true, ambiguous};
      }
      return fail();
    }
    case FieldType::datetime: {
      if (cell.as_datetime()) return {cell};
      if (const auto* d = cell.as_date()) return {CellValue::datetime(DateTime{d->days_since_epoch() * 86400, 0})};
      if (text) {
        if (auto dt = DateTime::parse_iso(trimmed)) return {CellValue::datetime(*dt)};
        bool ambiguous = false;
        if (auto d = parse_date_text(trimmed, ambiguous)) {
          return {CellValue::datetime(DateTime{d->days_since_epoch() * 86400, 0}), true, ambiguous};
        }
      }
      return fail();
    }
    case FieldType::array: break;
  }
  return fail();
}

bool matches_type(const CellValue& cell, FieldType type) {
  switch (type) {
    case FieldType::string:
    case FieldType::category: return cell.as_text() != nullptr;
    case FieldType::integer: return cell.as_integer() != nullptr;
    case FieldType::number: return cell.as_number() != nullptr || cell.as_integer() != nullptr;
    case FieldType::boolean: return cell.as_boolean() != nullptr;
    case FieldType::date: return cell.as_date() != nullptr;
    case FieldType::datetime: return cell.as_datetime() != nullptr;
    case FieldType::array: return cell.as_list() != nullptr;
  }
  return false;
}

std::optional<double> numeric(const CellValue& cell) {
  if (const auto* d = cell.as_number()) return *d;
  if (const auto* i = cell.as_integer()) return static_cast<double>(*i);
  return std::nullopt;
}

SchemaModel bumped(const SchemaModel& schema) {
  SchemaModel out = schema;
  ++out.version;
  return out;
}

FieldDefinition& mutable_field(SchemaModel& schema, std::string_view name) {
  for (auto& f : schema.fields) {
    if (f.name == name) return f;
  }
  throw UnknownFieldError(std::string(name));
}

}  // namespace

std::string_view to_string(FieldType type) noexcept {
  switch (type) {
    case FieldType::string: return "string";
    case FieldType::integer: return "integer";
    case FieldType::number: return "number";
    case FieldType::boolean: return "boolean";
    case FieldType::date: return "date";
    case FieldType::datetime: return "datetime";
    case FieldType::array: return "array";
    case FieldType::category: return "category";
  }
  return "string";
}

std::optional<FieldType> parse_field_type(std::string_view text) noexcept {
  static constexpr FieldType kAll[] = {FieldType::string, FieldType::integer, FieldType::number,
                                       FieldType::boolean, FieldType::date, FieldType::datetime,
                                       FieldType::array, FieldType::category};
  for (const auto t : kAll) {
    if (to_string(t) == text) return t;
  }
  return std::nullopt;
}

std::string_view to_string(ViolationKind kind) noexcept {
  switch (kind) {
    case ViolationKind::missing_field: return "missing_field";
    case ViolationKind::required: return "required";
    case ViolationKind::unique: return "unique";
    case ViolationKind::minimum: return "minimum";
    case ViolationKind::maximum: return "maximum";
    case ViolationKind::category: return "category";
    case ViolationKind::type: return "type";
  }
  return "type";
}

const FieldDefinition* SchemaModel::find_field(std::string_view field) const noexcept {
  for (const auto& f : fields) {
    if (f.name == field) return &f;
  }
  return nullptr;
}

const FieldDefinition& SchemaModel::field(std::string_view field) const {
  if (const auto* f = find_field(field)) return *f;
  throw UnknownFieldError(std::string(field));
}

std::vector<std::string> SchemaModel::field_names() const {
  std::vector<std::string> out;
  out.reserve(fields.size());
  for (const auto& f : fields) out.push_back(f.name);
  return out;
}

void SchemaModel::check() const {
  std::set<std::string_view> names;
  for (const auto& f : fields) {
    if (f.name.empty()) throw SchemaError("schema '" + name + "' has a field with an empty name");
    if (!names.insert(f.name).second) throw SchemaError("duplicate field name '" + f.name + "'");
    const auto& c = f.constraints;
    if (c.minimum && c.maximum && *c.minimum > *c.maximum) {
      throw SchemaError("field '" + f.name + "': minimum exceeds maximum");
    }
    if (f.type == FieldType::category && (!c.categories || c.categories->empty())) {
      throw SchemaError("field '" + f.name + "': category type needs category terms");
    }
    if (c.categories) {
      std::set<std::string_view> terms;
      for (const auto& t : *c.categories) {
        if (!terms.insert(t.name).second) {
          throw SchemaError("field '" + f.name + "': duplicate category term '" + t.name + "'");
        }
      }
    }
    if (c.default_value && !c.default_value->is_empty()) {
      bool fits = matches_type(*c.default_value, f.type);
      if (f.type == FieldType::array) fits = c.default_value->as_list() != nullptr;
      if (!fits) throw SchemaError("field '" + f.name + "': default does not match type " + std::string(to_string(f.type)));
    }
  }
}

std::string uuid_from_seed(std::string_view seed) {
  Blake2b h(16);
  h.update(seed);
  auto bytes = h.finish();
  bytes[6] = static_cast<std::uint8_t>((bytes[6] & 0x0f) | 0x80);  // version 8 (custom)
  bytes[8] = static_cast<std::uint8_t>((bytes[8] & 0x3f) | 0x80);  // RFC 4122 variant
  const std::string hex = to_hex(bytes);
  return hex.substr(0, 8) + "-" + hex.substr(8, 4) + "-" + hex.substr(12, 4) + "-" + hex.substr(16, 4) + "-" +
         hex.substr(20);
}

SchemaModel derive_schema(const Table& table, std::string name, std::optional<std::string> derived_from) {
  if (table.column_count() == 0) throw SchemaError("cannot derive a schema from a table without columns");
  SchemaModel schema;
  schema.name = std::move(name);
  schema.derived_from = std::move(derived_from);
  for (const auto& col : table.columns()) {
    FieldDefinition f;
    f.name = col.name();
    schema.fields.push_back(std::move(f));
  }
  schema.uuid = uuid_from_seed("schema\n" + schema.derived_from.value_or("") + "\n" + fingerprint(schema));
  return schema;
}

SchemaModel set_field_type(const SchemaModel& schema, std::string_view field, FieldType type) {
  SchemaModel out = bumped(schema);
  auto& f = mutable_field(out, field);
  if (type == FieldType::category && (!f.constraints.categories || f.constraints.categories->empty())) {
    throw SchemaError("field '" + f.name + "' has no category terms; derive or set them first");
  }
  if (f.constraints.default_value && !f.constraints.default_value->is_empty()) {
    auto coerced = type == FieldType::array ? CoercedValue{CellValue::list({f.constraints.default_value->to_scalar()})}
                                            : coerce_value(*f.constraints.default_value, type);
    f.constraints.default_value = coerced.ok ? std::optional<CellValue>(coerced.value) : std::nullopt;
  }
  f.type = type;
  return out;
}

SchemaModel set_field_categories(const SchemaModel& schema, std::string_view field,
                                 std::vector<CategoryTerm> terms) {
  SchemaModel out = bumped(schema);
  auto& f = mutable_field(out, field);
  std::set<std::string_view> seen;
  for (const auto& t : terms) {
    if (!seen.insert(t.name).second) throw SchemaError("duplicate category term '" + t.name + "'");
  }
  if (terms.empty() && f.type == FieldType::category) {
    throw SchemaError("field '" + f.name + "' is a category and needs at least one term");
  }
  if (terms.empty()) {
    f.constraints.categories.reset();
  } else {
    f.constraints.categories = std::move(terms);
  }
  return out;
}

SchemaModel replace_field(const SchemaModel& schema, FieldDefinition definition) {
  SchemaModel out = bumped(schema);
  mutable_field(out, definition.name) = std::move(definition);
  out.check();
  return out;
}

std::optional<CategoryMode> parse_category_mode(std::string_view text) noexcept {
  if (text == "unique" || text == "unique_terms") return CategoryMode::unique_terms;
  if (text == "boolean" || text == "boolean_presence") return CategoryMode::boolean_presence;
  return std::nullopt;
}

std::vector<CategoryTerm> derive_categories(const Table& table, std::string_view field, CategoryMode mode) {
  const Column* col = table.find_column(field);
  if (!col) throw UnknownFieldError(std::string(field));
  std::vector<CategoryTerm> out;
  if (mode == CategoryMode::boolean_presence) {
    out.push_back({"true", std::nullopt});
    out.push_back({"false", std::nullopt});
    return out;
  }
  std::set<std::string> seen;
  for (const auto& cell : col->cells()) {
    if (cell.is_empty()) continue;
    if (const auto* list = cell.as_list()) {
      for (const auto& v : *list) {
        if (std::holds_alternative<std::monostate>(v)) continue;
        std::string t = to_text(v);
        if (seen.insert(t).second) out.push_back({std::move(t), std::nullopt});
      }
      continue;
    }
    std::string t = to_text(cell);
    if (t.empty()) continue;
    if (seen.insert(t).second) out.push_back({std::move(t), std::nullopt});
  }
  return out;
}

CoercedValue coerce_value(const CellValue& cell, FieldType type) {
  if (cell.is_empty()) return {};
  if (type == FieldType::array) {
    if (cell.as_list()) return {cell};
    return {CellValue::list({cell.to_scalar()})};
  }
  if (const auto* list = cell.as_list()) {
    if (type == FieldType::string || type == FieldType::category) return {CellValue::text(to_script_literal(*list))};
    if (list->size() == 1 && !std::holds_alternative<std::monostate>(list->front())) {
      return coerce_scalar(CellValue(list->front()), type);
    }
    return fail();
  }
  return coerce_scalar(cell, type);
}

std::size_t CoercionReport::failure_count(std::string_view field) const {
  return static_cast<std::size_t>(
      std::count_if(failures.begin(), failures.end(), [&](const CoercionIssue& i) { return i.field == field; }));
}

CoercedTable coerce_table(const Table& table, const SchemaModel& schema) {
  CoercedTable out;
  std::vector<Column> columns = table.columns();
  const auto& labels = table.row_labels();
  for (const auto& field : schema.fields) {
    auto it = std::find_if(columns.begin(), columns.end(), [&](const Column& c) { return c.name() == field.name; });
    if (it == columns.end()) throw UnknownFieldError(field.name);
    const Cells& cells = it->cells();
    Cells coerced;
    coerced.reserve(cells.size());
    bool changed = false;
    for (std::size_t r = 0; r < cells.size(); ++r) {
      CoercedValue v = coerce_value(cells[r], field.type);
      if (!v.ok) {
        out.report.failures.push_back({field.name, labels[r], to_text(cells[r])});
      } else if (v.ambiguous) {
        out.report.ambiguous_dates.push_back({field.name, labels[r], to_text(cells[r])});
      }
      changed = changed || !(v.value == cells[r]);
      coerced.push_back(std::move(v.value));
    }
    if (changed) *it = Column(field.name, std::move(coerced));
  }
  out.table = Table(std::move(columns), labels);
  return out;
}

ValidationReport validate_table(const Table& table, const SchemaModel& schema) {
  ValidationReport report;
  const auto& labels = table.row_labels();
  for (const auto& field : schema.fields) {
    const Column* col = table.find_column(field.name);
    if (!col) {
      report.violations.push_back({ViolationKind::missing_field, field.name, {}, {},
                                   "field '" + field.name + "' has no column"});
      continue;
    }
    const auto& c = field.constraints;
    std::set<std::string> terms;
    if (c.categories) {
      for (const auto& t : *c.categories) terms.insert(unicode::nfc(t.name));
    }
    // value text -> rows holding it, in first-appearance order
    std::map<std::string, std::vector<RowLabel>> seen;
    std::vector<std::string> order;

    for (std::size_t r = 0; r < col->size(); ++r) {
      const CellValue& cell = (*col)[r];
      const RowLabel label = labels[r];
      if (cell.is_empty()) {
        if (c.required) {
          report.violations.push_back({ViolationKind::required, field.name, {label}, {},
                                       "field '" + field.name + "' requires a value"});
        }
        continue;
      }
      const std::string text = to_text(cell);
      if (!matches_type(cell, field.type)) {
        report.violations.push_back({ViolationKind::type, field.name, {label}, text,
                                     "expected " + std::string(to_string(field.type)) + ", found " +
                                         std::string(to_string(cell.kind()))});
        continue;
      }
      if (c.unique) {
        auto [it, inserted] = seen.try_emplace(text);
        if (inserted) order.push_back(text);
        it->second.push_back(label);
      }
      if (auto n = numeric(cell)) {
        if (c.minimum && *n < *c.minimum) {
          report.violations.push_back({ViolationKind::minimum, field.name, {label}, text,
                                       text + " is below the minimum " + format_number(*c.minimum)});
        }
        if (c.maximum && *n > *c.maximum) {
          report.violations.push_back({ViolationKind::maximum, field.name, {label}, text,
                                       text + " is above the maximum " + format_number(*c.maximum)});
        }
      }
      if (c.categories) {
        auto check_term = [&](const std::string& value) {
          if (!terms.count(unicode::nfc(value))) {
            report.violations.push_back({ViolationKind::category, field.name, {label}, value,
                                         "'" + value + "' is not a category of '" + field.name + "'"});
          }
        };
        if (const auto* list = cell.as_list()) {
          for (const auto& v : *list) {
            if (!std::holds_alternative<std::monostate>(v)) check_term(to_text(v));
          }
        } else {
          check_term(text);
        }
      }
    }
    for (const auto& value : order) {
      const auto& rows = seen[value];
      if (rows.size() > 1) {
        report.violations.push_back({ViolationKind::unique, field.name, rows, value,
                                     "'" + value + "' appears " + std::to_string(rows.size()) + " times"});
      }
    }
  }
  return report;
}

std::string fingerprint(const SchemaModel& schema) {
  nlohmann::json pairs = nlohmann::json::array();
  for (const auto& f : schema.fields) pairs.push_back({f.name, std::string(to_string(f.type))});
  return hash_bytes(pairs.dump());
}

}  // namespace crosswalk
