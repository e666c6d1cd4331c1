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
#include <random>
#include <string>
#include <vector>

#include "crosswalk/actions.hpp"
#include "crosswalk/crosswalk.hpp"
#include "crosswalk/table.hpp"

namespace crosswalk::testing {

using Rng = std::mt19937_64;

std::filesystem::path data_dir();

/// Fresh empty directory, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag = "t");
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const noexcept { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// The 17 example scripts of the rates case study and the action
/// reference, including the multi-line forms.
const std::vector<std::string>& script_corpus();

/// The case-study crosswalk, one script per element.
std::vector<std::string> case_study_scripts();

// --- random data -------------------------------------------------------------

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi);
bool coin(Rng& rng, double p = 0.5);
/// Short text drawn from a small alphabet (so duplicates occur), sometimes
/// with spaces, quotes or non-ASCII letters.
std::string random_text(Rng& rng, std::size_t max_len = 6);
std::string random_name(Rng& rng);
/// `n` distinct column names.
std::vector<std::string> random_names(Rng& rng, std::size_t n);

struct TableShape {
  std::size_t min_rows = 0, max_rows = 12;
  std::size_t min_cols = 1, max_cols = 6;
  double empty_p = 0.2;
};

/// Ingest-like table: cells empty or text, distinct names, labels 0..n-1.
Table random_table(Rng& rng, const TableShape& shape = {});
/// Cell text never contains `avoid`.
Table random_table_without(Rng& rng, const TableShape& shape, const std::string& avoid);

/// Structurally valid AST for `action` with random names and terms.
ParsedAction random_action(Rng& rng, ActionName action);

/// CSV text for the table (header plus rows) through the library writer.
std::string to_csv(const Table& table);

// --- case study oracle -------------------------------------------------------

/// Destination cells as canonical text, computed directly from the raw
/// fixture rows without the library. Rows are in fixture order.
struct OracleTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

OracleTable case_study_oracle(const std::filesystem::path& fixture_csv);

/// The same view of a library table, for comparison.
OracleTable as_text(const Table& table);

/// The rates fixture ingested, its derived schema, the destination schema
/// and the validated 14-step crosswalk between them.
struct CaseStudy {
  Table table;
  SchemaModel source;
  SchemaModel dest;
  Crosswalk crosswalk;
};

CaseStudy case_study();

}  // namespace crosswalk::testing
