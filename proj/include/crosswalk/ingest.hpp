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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "crosswalk/cell.hpp"
#include "crosswalk/table.hpp"

namespace crosswalk {

enum class SourceFormat { csv, parquet, xlsx };

std::string_view to_string(SourceFormat format) noexcept;
std::optional<SourceFormat> parse_source_format(std::string_view text) noexcept;
/// Guess from the file extension; nullopt when unrecognised.
std::optional<SourceFormat> format_from_extension(const std::filesystem::path& path);

/// Provenance of one imported sheet.
struct DataSourceRecord {
  std::string source_path;
  SourceFormat format = SourceFormat::csv;
  std::optional<std::string> sheet_name;
  std::string digest;  // BLAKE2b-512 of the whole file, lowercase hex
  DateTime imported_at;
  std::optional<std::string> citation;
  std::size_t row_count = 0;
  std::size_t column_count = 0;
  /// Physical rows discarded above the header row.
  std::size_t skip_rows = 0;

  bool operator==(const DataSourceRecord&) const = default;
};

struct IngestOptions {
  /// 0-based physical row holding the column names; unset means 0.
  std::optional<std::size_t> header_row;
  bool no_header = false;
  std::string generated_name_prefix = "column";
  char delimiter = ',';
  std::string encoding = "UTF-8";
  /// Replaces the column names after load; must match the column count.
  std::vector<std::string> field_names;
  /// Restricts a workbook import to one sheet, by name or 0-based index.
  std::optional<std::string> sheet;
  /// Overrides detection by file extension.
  std::optional<SourceFormat> format;
  std::optional<std::string> citation;

  /// Throws PreconditionError when the options contradict each other.
  void validate() const;
};

struct IngestedSource {
  Table table;
  DataSourceRecord record;
};

/// One entry per sheet (CSV and Parquet: exactly one). Every cell is empty
/// or text. Throws IoError, ParseError, DuplicateHeaderError, EmptyFileError,
/// UnsupportedFormatError.
std::vector<IngestedSource> ingest_source(const std::filesystem::path& path,
                                          const IngestOptions& options, DateTime imported_at);

/// Same as ingest_source over in-memory file content. `source_path` is only
/// recorded; the format comes from `options.format` or its extension.
std::vector<IngestedSource> ingest_bytes(std::span<const std::uint8_t> content,
                                         const std::string& source_path,
                                         const IngestOptions& options, DateTime imported_at);

/// `{prefix}_{i}` for i in [0, count). Throws PreconditionError for count 0.
std::vector<std::string> generate_field_names(std::size_t count, std::string_view prefix);

/// Whether this build includes the XLSX reader.
bool xlsx_supported() noexcept;

}  // namespace crosswalk
