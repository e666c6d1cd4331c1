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

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "crosswalk/table.hpp"

namespace crosswalk::csv {

/// One parsed field. `std::nullopt` marks an unquoted empty field; a quoted
/// empty field ("") is an empty string.
using Field = std::optional<std::string>;
using Record = std::vector<Field>;

/// RFC-4180 reader over already-decoded UTF-8 text. Accepts LF, CRLF and
/// lone CR record terminators; quoted fields may span lines.
/// Throws ParseError with record index and byte offset.
std::vector<Record> parse(std::string_view text, char delimiter = ',');

/// Writes one RFC-4180 record terminated by '\n'. Fields are quoted only
/// when they contain the delimiter, a quote, CR or LF, or are zero-length
/// strings (so that "" stays distinct from an absent value).
void write_record(std::ostream& out, const std::vector<Field>& fields, char delimiter = ',');

/// Header row plus one record per row, cells rendered with to_text().
void write_table(std::ostream& out, const Table& table, char delimiter = ',');

}  // namespace crosswalk::csv
