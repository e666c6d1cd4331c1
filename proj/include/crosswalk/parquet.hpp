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
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "crosswalk/table.hpp"

namespace crosswalk::parquet {

struct ReadResult {
  /// Every cell is empty or text: integers as decimal, floats shortest
  /// round-trip, dates and timestamps ISO-8601, lists in script-literal form.
  Table table;
  /// Top-level columns with nested structure that were not read.
  std::vector<std::string> skipped_columns;
};

/// Reads all top-level scalar and list-of-scalar columns. Supports PLAIN and
/// dictionary encodings, data page v1/v2, and UNCOMPRESSED, SNAPPY and GZIP
/// codecs. Throws ParseError / UnsupportedFormatError.
ReadResult read(std::span<const std::uint8_t> bytes);

enum class ColumnType { string, integer, number, boolean, date, datetime, list };

/// Writes `table` as a single-row-group file, every column optional, PLAIN
/// encoded and uncompressed. `types[i]` gives the physical mapping of
/// column i; cells must be empty or of the matching variant (lists hold
/// scalars rendered as UTF-8 text elements). Output is deterministic.
void write(std::ostream& out, const Table& table, std::span<const ColumnType> types);

/// Snappy raw-format decompression (exposed for testing).
std::vector<std::uint8_t> snappy_decompress(std::span<const std::uint8_t> input);

}  // namespace crosswalk::parquet
