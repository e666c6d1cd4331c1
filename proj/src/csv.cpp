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

#include "crosswalk/csv.hpp"

#include "crosswalk/error.hpp"

namespace crosswalk::csv {

std::vector<Record> parse(std::string_view text, char delimiter) {
  if (delimiter == '"' || delimiter == '\n' || delimiter == '\r') {
    throw PreconditionError("invalid CSV delimiter");
  }
  std::vector<Record> records;
  Record record;
  std::string field;
  std::size_t pos = 0;
  const std::size_t n = text.size();

  auto end_record = [&] {
    records.push_back(std::move(record));
    record = Record{};
  };

  while (pos < n) {
    // start of a field
    if (text[pos] == '"') {
      const std::size_t open = pos;
      ++pos;
      field.clear();
      bool closed = false;
      while (pos < n) {
        const char c = text[pos];
        if (c == '"') {
          if (pos + 1 < n && text[pos + 1] == '"') {
            field += '"';
            pos += 2;
          } else {
            ++pos;
            closed = true;
            break;
          }
        } else {
          field += c;
          ++pos;
        }
      }
      if (!closed) throw ParseError("unterminated quoted field", records.size(), open);
      record.emplace_back(field);
      if (pos == n) break;
      const char c = text[pos];
      if (c == delimiter) {
        ++pos;
        if (pos == n) record.emplace_back(std::nullopt);
      } else if (c == '\n') {
        ++pos;
        end_record();
      } else if (c == '\r') {
        pos += (pos + 1 < n && text[pos + 1] == '\n') ? 2 : 1;
        end_record();
      } else {
        throw ParseError("unexpected character after closing quote", records.size(), pos);
      }
      continue;
    }
    const std::size_t start = pos;
    while (pos < n && text[pos] != delimiter && text[pos] != '\n' && text[pos] != '\r') ++pos;
    if (pos == start) {
      record.emplace_back(std::nullopt);
    } else {
      record.emplace_back(std::string(text.substr(start, pos - start)));
    }
    if (pos == n) break;
    const char c = text[pos];
    if (c == delimiter) {
      ++pos;
      if (pos == n) record.emplace_back(std::nullopt);
    } else if (c == '\n') {
      ++pos;
      end_record();
    } else {
      pos += (pos + 1 < n && text[pos + 1] == '\n') ? 2 : 1;
      end_record();
    }
  }
  if (!record.empty()) end_record();
  return records;
}

void write_record(std::ostream& out, const std::vector<Field>& fields, char delimiter) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << delimiter;
    if (!fields[i]) continue;
    const std::string& f = *fields[i];
    const bool quote =
        f.empty() || f.find_first_of(std::string{delimiter, '"', '\n', '\r'}) != std::string::npos;
    if (!quote) {
      out << f;
      continue;
    }
    out << '"';
    for (const char c : f) {
      if (c == '"') out << '"';
      out << c;
    }
    out << '"';
  }
  out << '\n';
}

void write_table(std::ostream& out, const Table& table, char delimiter) {
  std::vector<Field> fields;
  for (const auto& name : table.column_names()) fields.emplace_back(name);
  write_record(out, fields, delimiter);
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    fields.clear();
    for (const auto& col : table.columns()) {
      const auto& cell = col[r];
      if (cell.is_empty()) {
        fields.emplace_back(std::nullopt);
      } else {
        fields.emplace_back(to_text(cell));
      }
    }
    write_record(out, fields, delimiter);
  }
}

}  // namespace crosswalk::csv
