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
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "crosswalk/cell.hpp"

namespace crosswalk {

/// Stable row identity assigned at ingest (0-based) and carried through
/// row-dropping actions.
using RowLabel = std::uint64_t;
using Cells = std::vector<CellValue>;

/// Named column. Cell storage is shared and immutable, so copying a Column
/// or a Table never copies cells.
class Column {
 public:
  Column(std::string name, Cells cells);
  Column(std::string name, std::shared_ptr<const Cells> cells);

  const std::string& name() const noexcept { return name_; }
  const Cells& cells() const noexcept { return *cells_; }
  std::size_t size() const noexcept { return cells_->size(); }
  const CellValue& operator[](std::size_t row) const { return (*cells_)[row]; }
  const std::shared_ptr<const Cells>& shared_cells() const noexcept { return cells_; }

  Column renamed(std::string name) const { return Column(std::move(name), cells_); }

  bool operator==(const Column& other) const;

 private:
  std::string name_;
  std::shared_ptr<const Cells> cells_;
};

/// Ordered named columns of uniform length plus ascending row labels.
/// Immutable: every transformation returns a new Table.
class Table {
 public:
  Table() = default;
  /// Labels default to 0..n-1.
  explicit Table(std::vector<Column> columns);
  Table(std::vector<Column> columns, std::vector<RowLabel> row_labels);

  std::size_t row_count() const noexcept { return row_labels_.size(); }
  std::size_t column_count() const noexcept { return columns_.size(); }
  std::vector<std::string> column_names() const;
  const std::vector<Column>& columns() const noexcept { return columns_; }
  const std::vector<RowLabel>& row_labels() const noexcept { return row_labels_; }

  /// Exact, case-sensitive lookup. Throws UnknownColumnError.
  const Column& get_column(std::string_view name) const;
  const Column* find_column(std::string_view name) const noexcept;
  bool has_column(std::string_view name) const noexcept { return find_column(name) != nullptr; }

  /// Replaces the same-named column in place, or appends.
  Table with_column(Column column) const;
  Table without_columns(std::span<const std::string> names) const;
  /// Rows at the given ascending, distinct positions; labels retained.
  Table take_rows(std::span<const std::size_t> positions) const;
  /// Rows at arbitrary positions (repeats allowed) under fresh labels.
  Table take_rows(std::span<const std::size_t> positions, std::vector<RowLabel> labels) const;

  bool operator==(const Table& other) const;

 private:
  void check() const;

  std::vector<Column> columns_;
  std::vector<RowLabel> row_labels_;
};

/// First min(n, row_count) rows, all columns, original labels.
Table preview(const Table& table, std::size_t n);

/// A table with the given column names, each filled with `rows` empty cells.
Table empty_table(std::span<const std::string> names, std::vector<RowLabel> labels);

}  // namespace crosswalk
