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

#include "crosswalk/table.hpp"

#include <numeric>
#include <unordered_set>

#include "crosswalk/error.hpp"

namespace crosswalk {

Column::Column(std::string name, Cells cells)
    : name_(std::move(name)), cells_(std::make_shared<const Cells>(std::move(cells))) {}

Column::Column(std::string name, std::shared_ptr<const Cells> cells)
    : name_(std::move(name)), cells_(cells ? std::move(cells) : std::make_shared<const Cells>()) {}

bool Column::operator==(const Column& other) const {
  return name_ == other.name_ && (cells_ == other.cells_ || *cells_ == *other.cells_);
}

namespace {

std::vector<RowLabel> default_labels(const std::vector<Column>& columns) {
  std::vector<RowLabel> labels(columns.empty() ? 0 : columns.front().size());
  std::iota(labels.begin(), labels.end(), RowLabel{0});
  return labels;
}

}  // namespace

Table::Table(std::vector<Column> columns) : columns_(std::move(columns)) {
  row_labels_ = default_labels(columns_);
  check();
}

Table::Table(std::vector<Column> columns, std::vector<RowLabel> row_labels)
    : columns_(std::move(columns)), row_labels_(std::move(row_labels)) {
  check();
}

void Table::check() const {
  std::unordered_set<std::string_view> seen;
  for (const auto& c : columns_) {
    if (c.name().empty()) throw TableError("column names must be non-empty");
    if (!seen.insert(c.name()).second) throw TableError("duplicate column name '" + c.name() + "'");
    if (c.size() != row_labels_.size()) {
      throw TableError("column '" + c.name() + "' has " + std::to_string(c.size()) +
                       " cells, expected " + std::to_string(row_labels_.size()));
    }
  }
  for (std::size_t i = 1; i < row_labels_.size(); ++i) {
    if (row_labels_[i] <= row_labels_[i - 1]) throw TableError("row labels must be strictly ascending");
  }
}

std::vector<std::string> Table::column_names() const {
  std::vector<std::string> names;
  names.reserve(columns_.size());
  for (const auto& c : columns_) names.push_back(c.name());
  return names;
}

const Column& Table::get_column(std::string_view name) const {
  if (const auto* c = find_column(name)) return *c;
  throw UnknownColumnError(std::string(name), column_names());
}

const Column* Table::find_column(std::string_view name) const noexcept {
  for (const auto& c : columns_) {
    if (c.name() == name) return &c;
  }
  return nullptr;
}

Table Table::with_column(Column column) const {
  if (column.size() != row_count()) {
    throw TableError("column '" + column.name() + "' has " + std::to_string(column.size()) +
                     " cells, expected " + std::to_string(row_count()));
  }
  Table out = *this;
  for (auto& c : out.columns_) {
    if (c.name() == column.name()) {
      c = std::move(column);
      return out;
    }
  }
  if (column.name().empty()) throw TableError("column names must be non-empty");
  out.columns_.push_back(std::move(column));
  return out;
}

Table Table::without_columns(std::span<const std::string> names) const {
  Table out;
  out.row_labels_ = row_labels_;
  for (const auto& c : columns_) {
    bool drop = false;
    for (const auto& n : names) drop = drop || n == c.name();
    if (!drop) out.columns_.push_back(c);
  }
  return out;
}

Table Table::take_rows(std::span<const std::size_t> positions) const {
  std::vector<RowLabel> labels;
  labels.reserve(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (positions[i] >= row_count()) throw TableError("row position out of range");
    if (i && positions[i] <= positions[i - 1]) throw TableError("row positions must be ascending");
    labels.push_back(row_labels_[positions[i]]);
  }
  return take_rows(positions, std::move(labels));
}

Table Table::take_rows(std::span<const std::size_t> positions, std::vector<RowLabel> labels) const {
  if (labels.size() != positions.size()) throw TableError("label count must match row count");
  std::vector<Column> cols;
  cols.reserve(columns_.size());
  for (const auto& c : columns_) {
    Cells cells;
    cells.reserve(positions.size());
    for (const auto p : positions) cells.push_back(c[p]);
    cols.emplace_back(c.name(), std::move(cells));
  }
  return Table(std::move(cols), std::move(labels));
}

bool Table::operator==(const Table& other) const {
  return row_labels_ == other.row_labels_ && columns_ == other.columns_;
}

Table preview(const Table& table, std::size_t n) {
  const std::size_t rows = std::min(n, table.row_count());
  std::vector<std::size_t> positions(rows);
  std::iota(positions.begin(), positions.end(), std::size_t{0});
  return table.take_rows(positions);
}

Table empty_table(std::span<const std::string> names, std::vector<RowLabel> labels) {
  std::vector<Column> cols;
  cols.reserve(names.size());
  auto blank = std::make_shared<const Cells>(labels.size());
  for (const auto& n : names) cols.emplace_back(n, blank);
  return Table(std::move(cols), std::move(labels));
}

}  // namespace crosswalk
