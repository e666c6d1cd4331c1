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

#include "crosswalk/cell.hpp"

#include <charconv>
#include <cstdio>
#include <functional>

namespace crosswalk {

namespace {

bool is_leap(std::int64_t y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

unsigned days_in_month(std::int64_t y, unsigned m) {
  static constexpr unsigned kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  return m == 2 && is_leap(y) ? 29 : kDays[m - 1];
}

// civil <-> days, after H. Hinnant's public-domain algorithms
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
  y -= m <= 2;
  const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
  const auto yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

Date civil_from_days(std::int64_t z) {
  z += 719468;
  const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
  const auto doe = static_cast<unsigned>(z - era * 146097);
  const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
  const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
  const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
  const unsigned mp = (5 * doy + 2) / 153;
  const unsigned d = doy - (153 * mp + 2) / 5 + 1;
  const unsigned m = mp < 10 ? mp + 3 : mp - 9;
  return Date{static_cast<std::int32_t>(y + (m <= 2)), static_cast<std::uint8_t>(m),
              static_cast<std::uint8_t>(d)};
}

bool read_digits(std::string_view text, std::size_t& pos, std::size_t count, int& out) {
  if (pos + count > text.size()) return false;
  int value = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const char c = text[pos + i];
    if (c < '0' || c > '9') return false;
    value = value * 10 + (c - '0');
  }
  pos += count;
  out = value;
  return true;
}

std::string pad(std::int64_t value, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%0*lld", width, static_cast<long long>(value));
  return buf;
}

}  // namespace

bool Date::valid() const noexcept {
  return month >= 1 && month <= 12 && day >= 1 && day <= days_in_month(year, month);
}

std::int64_t Date::days_since_epoch() const noexcept { return days_from_civil(year, month, day); }

Date Date::from_days(std::int64_t days) noexcept { return civil_from_days(days); }

std::string Date::iso() const {
  std::string out = year < 0 ? "-" + pad(-static_cast<std::int64_t>(year), 4) : pad(year, 4);
  return out + "-" + pad(month, 2) + "-" + pad(day, 2);
}

std::optional<Date> Date::parse_iso(std::string_view text) noexcept {
  std::size_t pos = 0;
  int y = 0;
  int m = 0;
  int d = 0;
  if (!read_digits(text, pos, 4, y) || pos >= text.size() || text[pos++] != '-' ||
      !read_digits(text, pos, 2, m) || pos >= text.size() || text[pos++] != '-' ||
      !read_digits(text, pos, 2, d) || pos != text.size()) {
    return std::nullopt;
  }
  Date date{y, static_cast<std::uint8_t>(m), static_cast<std::uint8_t>(d)};
  if (!date.valid()) return std::nullopt;
  return date;
}

std::string DateTime::iso() const {
  const std::int64_t days = (seconds >= 0 ? seconds : seconds - 86399) / 86400;
  const std::int64_t secs_of_day = seconds - days * 86400;
  std::string out = Date::from_days(days).iso() + "T" + pad(secs_of_day / 3600, 2) + ":" +
                    pad((secs_of_day / 60) % 60, 2) + ":" + pad(secs_of_day % 60, 2);
  if (nanos != 0) {
    if (nanos % 1000000 == 0) {
      out += "." + pad(nanos / 1000000, 3);
    } else if (nanos % 1000 == 0) {
      out += "." + pad(nanos / 1000, 6);
    } else {
      out += "." + pad(nanos, 9);
    }
  }
  return out + "Z";
}

std::optional<DateTime> DateTime::parse_iso(std::string_view text) noexcept {
  if (text.size() < 16) return std::nullopt;
  const auto date = Date::parse_iso(text.substr(0, 10));
  if (!date || (text[10] != 'T' && text[10] != ' ')) return std::nullopt;
  std::size_t pos = 11;
  int hh = 0;
  int mm = 0;
  int ss = 0;
  std::uint32_t nanos = 0;
  if (!read_digits(text, pos, 2, hh) || pos >= text.size() || text[pos++] != ':' ||
      !read_digits(text, pos, 2, mm)) {
    return std::nullopt;
  }
  if (pos < text.size() && text[pos] == ':') {
    ++pos;
    if (!read_digits(text, pos, 2, ss)) return std::nullopt;
    if (pos < text.size() && (text[pos] == '.' || text[pos] == ',')) {
      ++pos;
      std::size_t digits = 0;
      std::uint32_t scale = 100000000;
      while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
        if (digits < 9) nanos += static_cast<std::uint32_t>(text[pos] - '0') * scale;
        scale /= 10;
        ++digits;
        ++pos;
      }
      if (digits == 0) return std::nullopt;
    }
  }
  if (hh > 23 || mm > 59 || ss > 60) return std::nullopt;
  std::int64_t offset = 0;
  if (pos < text.size()) {
    const char z = text[pos];
    if (z == 'Z' || z == 'z') {
      ++pos;
    } else if (z == '+' || z == '-') {
      ++pos;
      int oh = 0;
      int om = 0;
      if (!read_digits(text, pos, 2, oh)) return std::nullopt;
      if (pos < text.size() && text[pos] == ':') ++pos;
      if (!read_digits(text, pos, 2, om)) return std::nullopt;
      offset = (oh * 3600 + om * 60) * (z == '+' ? 1 : -1);
    } else {
      return std::nullopt;
    }
  }
  if (pos != text.size()) return std::nullopt;
  DateTime out;
  out.seconds = date->days_since_epoch() * 86400 + hh * 3600 + mm * 60 + ss - offset;
  out.nanos = nanos;
  return out;
}

DateTime DateTime::from_micros(std::int64_t micros) noexcept {
  std::int64_t secs = micros / 1000000;
  std::int64_t rem = micros % 1000000;
  if (rem < 0) {
    rem += 1000000;
    --secs;
  }
  return DateTime{secs, static_cast<std::uint32_t>(rem * 1000)};
}

std::int64_t DateTime::micros() const noexcept { return seconds * 1000000 + nanos / 1000; }

std::string_view to_string(CellKind kind) noexcept {
  switch (kind) {
    case CellKind::empty: return "empty";
    case CellKind::text: return "text";
    case CellKind::number: return "number";
    case CellKind::integer: return "integer";
    case CellKind::boolean: return "boolean";
    case CellKind::date: return "date";
    case CellKind::datetime: return "datetime";
    case CellKind::list: return "list";
  }
  return "unknown";
}

CellValue::CellValue(const ScalarValue& scalar) {
  std::visit([this](const auto& v) { data_ = v; }, scalar);
}

ScalarValue CellValue::to_scalar() const {
  return std::visit(
      [](const auto& v) -> ScalarValue {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ListValue>) {
          return to_script_literal(v);
        } else {
          return v;
        }
      },
      data_);
}

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, res.ptr);
}

namespace {

struct TextOf {
  std::string operator()(std::monostate) const { return {}; }
  std::string operator()(const std::string& v) const { return v; }
  std::string operator()(double v) const { return format_number(v); }
  std::string operator()(std::int64_t v) const { return std::to_string(v); }
  std::string operator()(bool v) const { return v ? "true" : "false"; }
  std::string operator()(const Date& v) const { return v.iso(); }
  std::string operator()(const DateTime& v) const { return v.iso(); }
  std::string operator()(const ListValue& v) const { return to_script_literal(v); }
};

}  // namespace

std::string to_text(const ScalarValue& value) { return std::visit(TextOf{}, value); }

std::string to_text(const CellValue& cell) { return std::visit(TextOf{}, cell.storage()); }

std::string to_script_literal(const ScalarValue& value) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "~";
        } else if constexpr (std::is_same_v<T, std::string>) {
          std::string out = "'";
          for (const char c : v) {
            out += c;
            if (c == '\'') out += '\'';
          }
          return out + "'";
        } else if constexpr (std::is_same_v<T, double>) {
          return format_number(v);
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "True" : "False";
        } else {
          return "'" + v.iso() + "'";
        }
      },
      value);
}

std::string to_script_literal(const ListValue& list) {
  std::string out = "[";
  for (std::size_t i = 0; i < list.size(); ++i) {
    if (i) out += ", ";
    out += to_script_literal(list[i]);
  }
  return out + "]";
}

namespace {

std::size_t hash_scalar(const ScalarValue& value) noexcept {
  const std::size_t tag = value.index() * 0x9e3779b97f4a7c15ULL;
  return std::visit(
      [tag](const auto& v) -> std::size_t {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return tag;
        } else if constexpr (std::is_same_v<T, Date>) {
          return tag ^ std::hash<std::int64_t>{}(v.days_since_epoch());
        } else if constexpr (std::is_same_v<T, DateTime>) {
          return tag ^ std::hash<std::int64_t>{}(v.seconds) ^ (std::size_t{v.nanos} << 1);
        } else {
          return tag ^ std::hash<T>{}(v);
        }
      },
      value);
}

}  // namespace

std::size_t hash_value(const CellValue& cell) noexcept {
  if (const auto* list = cell.as_list()) {
    std::size_t h = 0xabcdefULL + list->size();
    for (const auto& v : *list) h = h * 1099511628211ULL ^ hash_scalar(v);
    return h;
  }
  return std::visit(
      [](const auto& v) -> std::size_t {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ListValue>) {
          return 0;
        } else {
          return hash_scalar(ScalarValue{std::in_place_type<T>, v});
        }
      },
      cell.storage());
}

}  // namespace crosswalk
