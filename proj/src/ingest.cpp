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

#include "crosswalk/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <set>

#include "crosswalk/blake2b.hpp"
#include "crosswalk/csv.hpp"
#include "crosswalk/error.hpp"
#include "crosswalk/parquet.hpp"
#include "crosswalk/unicode.hpp"
#ifdef CROSSWALK_WITH_XLSX
#include "xlsx.hpp"
#endif

namespace crosswalk {

namespace {

using Records = std::vector<csv::Record>;

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool is_blank_line(const csv::Record& record) {
  return record.size() == 1 && !record.front().has_value();
}

/// Turns raw records into a text table. Returns the number of rows skipped
/// above the header through `skipped`.
Table build_table(Records records, const IngestOptions& options, std::size_t& skipped) {
  std::erase_if(records, is_blank_line);
  if (records.empty()) throw EmptyFileError("source contains no rows");

  std::size_t width = 0;
  std::vector<std::string> names;
  std::size_t first_data = 0;
  skipped = 0;
  if (options.no_header) {
    for (const auto& r : records) width = std::max(width, r.size());
    names = generate_field_names(width, options.generated_name_prefix);
  } else {
    const std::size_t header = options.header_row.value_or(0);
    if (header >= records.size()) {
      throw ParseError("header row " + std::to_string(header) + " is beyond the last row", header, 0);
    }
    skipped = header;
    first_data = header + 1;
    const auto& head = records[header];
    width = head.size();
    for (std::size_t i = 0; i < width; ++i) {
      const auto& f = head[i];
      // blank header cells get a generated, still-referenceable name
      if (!f || unicode::is_blank(*f)) {
        names.push_back(options.generated_name_prefix + "_" + std::to_string(i));
      } else {
        names.push_back(*f);
      }
    }
  }

  if (!options.field_names.empty()) {
    if (options.field_names.size() != width) {
      throw PreconditionError("expected " + std::to_string(width) + " field names, got " +
                              std::to_string(options.field_names.size()));
    }
    names = options.field_names;
  }

  std::vector<std::string> duplicates;
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (!seen.insert(n).second && std::find(duplicates.begin(), duplicates.end(), n) == duplicates.end()) {
      duplicates.push_back(n);
    }
  }
  if (!duplicates.empty()) throw DuplicateHeaderError(duplicates);

  std::vector<Cells> columns(width);
  const std::size_t rows = records.size() - first_data;
  for (auto& c : columns) c.reserve(rows);
  for (std::size_t r = first_data; r < records.size(); ++r) {
    auto& record = records[r];
    if (record.size() > width) {
      throw ParseError("row has " + std::to_string(record.size()) + " fields, header has " +
                           std::to_string(width),
                       r, 0);
    }
    for (std::size_t c = 0; c < width; ++c) {
      if (c < record.size() && record[c]) {
        columns[c].push_back(CellValue::text(std::move(*record[c])));
      } else {
        columns[c].emplace_back();
      }
    }
  }

  std::vector<Column> out;
  out.reserve(width);
  for (std::size_t c = 0; c < width; ++c) out.emplace_back(names[c], std::move(columns[c]));
  std::vector<RowLabel> labels(rows);
  for (std::size_t i = 0; i < rows; ++i) labels[i] = i;
  return Table(std::move(out), std::move(labels));
}

std::string decode_text(std::span<const std::uint8_t> content, const std::string& encoding) {
  std::string_view bytes(reinterpret_cast<const char*>(content.data()), content.size());
  std::string text = unicode::to_utf8(bytes, encoding);
  if (text.size() >= 3 && text.compare(0, 3, "\xEF\xBB\xBF") == 0) text.erase(0, 3);
  return text;
}

DataSourceRecord make_record(const std::string& path, SourceFormat format, const std::string& digest,
                             DateTime when, const IngestOptions& options, const Table& table,
                             std::size_t skipped) {
  DataSourceRecord rec;
  rec.source_path = path;
  rec.format = format;
  rec.digest = digest;
  rec.imported_at = when;
  rec.citation = options.citation;
  rec.row_count = table.row_count();
  rec.column_count = table.column_count();
  rec.skip_rows = skipped;
  return rec;
}

Table rename_parquet(Table table, const IngestOptions& options) {
  if (options.field_names.empty()) return table;
  if (options.field_names.size() != table.column_count()) {
    throw PreconditionError("expected " + std::to_string(table.column_count()) + " field names, got " +
                            std::to_string(options.field_names.size()));
  }
  std::set<std::string> unique(options.field_names.begin(), options.field_names.end());
  if (unique.size() != options.field_names.size()) {
    std::vector<std::string> dups;
    std::set<std::string> seen;
    for (const auto& n : options.field_names) {
      if (!seen.insert(n).second) dups.push_back(n);
    }
    throw DuplicateHeaderError(dups);
  }
  std::vector<Column> cols;
  for (std::size_t i = 0; i < table.column_count(); ++i) {
    cols.push_back(table.columns()[i].renamed(options.field_names[i]));
  }
  return Table(std::move(cols), table.row_labels());
}

}  // namespace

std::string_view to_string(SourceFormat format) noexcept {
  switch (format) {
    case SourceFormat::csv: return "csv";
    case SourceFormat::parquet: return "parquet";
    case SourceFormat::xlsx: return "xlsx";
  }
  return "csv";
}

std::optional<SourceFormat> parse_source_format(std::string_view text) noexcept {
  if (text == "csv") return SourceFormat::csv;
  if (text == "parquet") return SourceFormat::parquet;
  if (text == "xlsx") return SourceFormat::xlsx;
  return std::nullopt;
}

std::optional<SourceFormat> format_from_extension(const std::filesystem::path& path) {
  const std::string ext = lower(path.extension().string());
  if (ext == ".csv" || ext == ".txt" || ext == ".tsv") return SourceFormat::csv;
  if (ext == ".parquet" || ext == ".pq") return SourceFormat::parquet;
  if (ext == ".xlsx") return SourceFormat::xlsx;
  return std::nullopt;
}

void IngestOptions::validate() const {
  if (no_header && header_row) throw PreconditionError("header_row and no_header are mutually exclusive");
  if (generated_name_prefix.empty()) throw PreconditionError("generated_name_prefix must not be empty");
  if (delimiter == '"' || delimiter == '\n' || delimiter == '\r') {
    throw PreconditionError("invalid delimiter");
  }
}

std::vector<std::string> generate_field_names(std::size_t count, std::string_view prefix) {
  if (count == 0) throw PreconditionError("generate_field_names needs count >= 1");
  std::vector<std::string> names;
  names.reserve(count);
  for (std::size_t i = 0; i < count; ++i) names.push_back(std::string(prefix) + "_" + std::to_string(i));
  return names;
}

bool xlsx_supported() noexcept {
#ifdef CROSSWALK_WITH_XLSX
  return true;
#else
  return false;
#endif
}

std::vector<IngestedSource> ingest_bytes(std::span<const std::uint8_t> content,
                                         const std::string& source_path,
                                         const IngestOptions& options, DateTime imported_at) {
  options.validate();
  SourceFormat format = SourceFormat::csv;
  if (options.format) {
    format = *options.format;
  } else if (auto guessed = format_from_extension(source_path)) {
    format = *guessed;
  } else {
    throw UnsupportedFormatError("cannot tell the format of '" + source_path + "'; pass it explicitly");
  }
  if (content.empty()) throw EmptyFileError("'" + source_path + "' is empty");
  const std::string digest = hash_bytes(content);

  std::vector<IngestedSource> out;
  switch (format) {
    case SourceFormat::csv: {
      const std::string text = decode_text(content, options.encoding);
      std::size_t skipped = 0;
      Table table = build_table(csv::parse(text, options.delimiter), options, skipped);
      auto rec = make_record(source_path, format, digest, imported_at, options, table, skipped);
      out.push_back({std::move(table), std::move(rec)});
      break;
    }
    case SourceFormat::parquet: {
      Table table = rename_parquet(parquet::read(content).table, options);
      if (table.column_count() == 0) throw EmptyFileError("'" + source_path + "' has no readable columns");
      auto rec = make_record(source_path, format, digest, imported_at, options, table, 0);
      out.push_back({std::move(table), std::move(rec)});
      break;
    }
    case SourceFormat::xlsx: {
#ifdef CROSSWALK_WITH_XLSX
      const auto sheets = xlsx::read(content);
      std::size_t index = 0;
      for (const auto& sheet : sheets) {
        const std::size_t i = index++;
        if (options.sheet && *options.sheet != sheet.name && *options.sheet != std::to_string(i)) continue;
        std::size_t skipped = 0;
        Records records(sheet.rows.begin(), sheet.rows.end());
        Table table = build_table(std::move(records), options, skipped);
        auto rec = make_record(source_path, format, digest, imported_at, options, table, skipped);
        rec.sheet_name = sheet.name;
        out.push_back({std::move(table), std::move(rec)});
      }
      if (out.empty()) {
        throw NotFoundError(options.sheet ? "no sheet '" + *options.sheet + "' in workbook"
                                          : "workbook has no sheets");
      }
      break;
#else
      throw UnsupportedFormatError("this build does not include XLSX support");
#endif
    }
  }
  return out;
}

std::vector<IngestedSource> ingest_source(const std::filesystem::path& path,
                                          const IngestOptions& options, DateTime imported_at) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::vector<std::uint8_t> content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("cannot read '" + path.string() + "'");
  IngestOptions effective = options;
  if (!effective.format) {
    effective.format = format_from_extension(path);
    if (!effective.format) effective.format = SourceFormat::csv;
  }
  return ingest_bytes(content, path.string(), effective, imported_at);
}

}  // namespace crosswalk
