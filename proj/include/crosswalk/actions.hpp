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
#include <set>
#include <string>
#include <vector>

#include "crosswalk/schema.hpp"
#include "crosswalk/script.hpp"
#include "crosswalk/table.hpp"

namespace crosswalk {

/// Execution state of one crosswalk run.
struct ActionContext {
  Table source;  // working copy; the ingested table is never modified
  Table dest;    // destination columns written so far, same row labels as source
  SchemaModel source_schema;
  SchemaModel dest_schema;
  std::vector<std::string> warnings;
  /// Source columns removed by DEBLANK; later reads see all-empty cells.
  std::set<std::string> dropped_columns;

  static ActionContext start(Table source, SchemaModel source_schema, SchemaModel dest_schema);
};

struct ExecOptions {
  /// Worker threads for row-independent actions; results are identical for
  /// every value.
  unsigned threads = 1;
  /// Smallest row slice handed to a worker.
  std::size_t min_rows_per_thread = 4096;
};

/// Executes one structurally valid action. Throws UnknownFieldError when a
/// referenced source field does not exist.
void apply_action(ActionContext& ctx, const ParsedAction& action, const ExecOptions& options = {});

// Individual actions. Field-level ones keep source rows and labels intact.

void act_new(ActionContext& ctx, const std::string& dest_field, const CellValue& literal);
void act_rename(ActionContext& ctx, const std::string& dest_field, const std::string& source_field,
                const ExecOptions& options = {});
void act_select(ActionContext& ctx, const std::string& dest_field, const std::vector<std::string>& source_fields,
                const ExecOptions& options = {});

enum class DateDirection { newest, oldest };

void act_select_by_date(ActionContext& ctx, const std::string& dest_field, const std::vector<DatedField>& pairs,
                        DateDirection direction, const ExecOptions& options = {});
void act_calculate(ActionContext& ctx, const std::string& dest_field, const std::vector<SignedField>& fields,
                   const ExecOptions& options = {});
void act_unite(ActionContext& ctx, const std::string& dest_field, const std::string& separator,
               const std::vector<std::string>& source_fields, const ExecOptions& options = {});
void act_separate(ActionContext& ctx, const std::vector<std::string>& dest_fields, const std::string& separator,
                  const std::string& source_field, const ExecOptions& options = {});

/// A CATEGORISE match term: quoted value or True/False presence test.
using MatchTerm = std::variant<std::string, bool>;

void act_categorise(ActionContext& ctx, const std::string& dest_field, const DestTerm& dest_term,
                    const std::string& source_field, const std::vector<MatchTerm>& match_terms,
                    const ExecOptions& options = {});

/// Item of a COLLATE list: a source field, or nullopt for `~`.
using CollateItem = std::optional<std::string>;

void act_collate(ActionContext& ctx, const std::string& dest_field, const std::vector<CollateItem>& items,
                 const ExecOptions& options = {});

void act_deblank(ActionContext& ctx);
void act_dedupe(ActionContext& ctx);
void act_delete_rows(ActionContext& ctx, const std::vector<RowLabel>& labels);
void act_pivot_longer(ActionContext& ctx, const std::string& name_field, const std::string& value_field,
                      const std::vector<std::string>& source_fields);
void act_pivot_categories(ActionContext& ctx, const std::string& dest_field, const std::string& source_field,
                          const std::vector<RowLabel>& header_labels);

/// True for cells treated as absent by SELECT and UNITE: empty or zero-length text.
bool is_absent(const CellValue& cell) noexcept;

}  // namespace crosswalk
