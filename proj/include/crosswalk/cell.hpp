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

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace crosswalk {

/// Proleptic Gregorian calendar date.
struct Date {
  std::int32_t year = 1970;
  std::uint8_t month = 1;
  std::uint8_t day = 1;

  bool valid() const noexcept;
  std::int64_t days_since_epoch() const noexcept;
  static Date from_days(std::int64_t days) noexcept;
  /// YYYY-MM-DD
  std::string iso() const;
  static std::optional<Date> parse_iso(std::string_view text) noexcept;

  auto operator<=>(const Date&) const = default;
};

/// UTC instant with nanosecond resolution.
struct DateTime {
  std::int64_t seconds = 0;   // since 1970-01-01T00:00:00Z
  std::uint32_t nanos = 0;    // [0, 1e9)

  /// YYYY-MM-DDTHH:MM:SS[.fraction]Z, fraction trimmed to 3, 6 or 9 digits.
  std::string iso() const;
  /// Accepts `YYYY-MM-DD[T| ]HH:MM[:SS[.f+]][Z|+HH:MM|-HH:MM]`; no zone means UTC.
  static std::optional<DateTime> parse_iso(std::string_view text) noexcept;
  static DateTime from_micros(std::int64_t micros) noexcept;
  std::int64_t micros() const noexcept;

  auto operator<=>(const DateTime&) const = default;
};

/// Non-list cell payloads. Lists hold only these, so nesting stops at one level.
using ScalarValue =
    std::variant<std::monostate, std::string, double, std::int64_t, bool, Date, DateTime>;
using ListValue = std::vector<ScalarValue>;

enum class CellKind { empty, text, number, integer, boolean, date, datetime, list };

std::string_view to_string(CellKind kind) noexcept;

class CellValue {
 public:
  using Storage = std::variant<std::monostate, std::string, double, std::int64_t, bool, Date,
                               DateTime, ListValue>;

  CellValue() = default;
  CellValue(const ScalarValue& scalar);  // NOLINT(google-explicit-constructor)

  static CellValue empty() { return {}; }
  static CellValue text(std::string value) { return CellValue(Storage{std::move(value)}); }
  static CellValue number(double value) { return CellValue(Storage{value}); }
  static CellValue integer(std::int64_t value) { return CellValue(Storage{value}); }
  static CellValue boolean(bool value) { return CellValue(Storage{value}); }
  static CellValue date(Date value) { return CellValue(Storage{value}); }
  static CellValue datetime(DateTime value) { return CellValue(Storage{value}); }
  static CellValue list(ListValue value) { return CellValue(Storage{std::move(value)}); }

  CellKind kind() const noexcept { return static_cast<CellKind>(data_.index()); }
  bool is_empty() const noexcept { return data_.index() == 0; }

  const std::string* as_text() const noexcept { return std::get_if<std::string>(&data_); }
  const double* as_number() const noexcept { return std::get_if<double>(&data_); }
  const std::int64_t* as_integer() const noexcept { return std::get_if<std::int64_t>(&data_); }
  const bool* as_boolean() const noexcept { return std::get_if<bool>(&data_); }
  const Date* as_date() const noexcept { return std::get_if<Date>(&data_); }
  const DateTime* as_datetime() const noexcept { return std::get_if<DateTime>(&data_); }
  const ListValue* as_list() const noexcept { return std::get_if<ListValue>(&data_); }

  const Storage& storage() const noexcept { return data_; }

  /// Scalar view of a non-list cell; lists collapse to their canonical text.
  ScalarValue to_scalar() const;

  bool operator==(const CellValue& other) const = default;

 private:
  explicit CellValue(Storage data) : data_(std::move(data)) {}

  Storage data_;
};

/// Canonical text of a cell: empty -> "", numbers shortest round-trip,
/// booleans "true"/"false", dates ISO-8601, lists in script-literal form.
std::string to_text(const CellValue& cell);
std::string to_text(const ScalarValue& value);

/// Script-literal rendering: quoted text with '' escaping, bare numbers,
/// True/False, `~` for empty.
std::string to_script_literal(const ScalarValue& value);
std::string to_script_literal(const ListValue& list);

/// Shortest round-trip decimal text for a double.
std::string format_number(double value);

std::size_t hash_value(const CellValue& cell) noexcept;

}  // namespace crosswalk
