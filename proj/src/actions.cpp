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

#include "crosswalk/actions.hpp"

#include <algorithm>
#include <functional>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "crosswalk/error.hpp"
#include "crosswalk/unicode.hpp"

namespace crosswalk {

namespace {

/// Output of one row slice of a field-level action.
struct Slice {
  std::vector<Cells> columns;
  std::vector<std::string> warnings;
  std::size_t count = 0;
};

using Kernel = std::function<void(std::size_t begin, std::size_t end, Slice& out)>;

/// Runs `kernel` over [0, rows) in contiguous slices and stitches the slices
/// back together in row order, so the result does not depend on `threads`.
Slice run_rows(std::size_t rows, std::size_t width, const ExecOptions& options, const Kernel& kernel) {
  const std::size_t min_rows = std::max<std::size_t>(1, options.min_rows_per_thread);
  std::size_t workers = std::max(1u, options.threads);
  workers = std::min(workers, std::max<std::size_t>(1, rows / min_rows));
  std::vector<Slice> slices(workers);
  for (auto& s : slices) s.columns.resize(width);
  if (workers == 1) {
    kernel(0, rows, slices[0]);
    return std::move(slices[0]);
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  const std::size_t step = rows / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = w * step;
    const std::size_t end = w + 1 == workers ? rows : begin + step;
    pool.emplace_back([&, w, begin, end] {
      try {
        kernel(begin, end, slices[w]);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  Slice out;
  out.columns.resize(width);
  for (std::size_t c = 0; c < width; ++c) out.columns[c].reserve(rows);
  for (auto& s : slices) {
    for (std::size_t c = 0; c < width; ++c) {
      std::move(s.columns[c].begin(), s.columns[c].end(), std::back_inserter(out.columns[c]));
    }
    std::move(s.warnings.begin(), s.warnings.end(), std::back_inserter(out.warnings));
    out.count += s.count;
  }
  return out;
}

/// Cells of a source field. Columns removed by DEBLANK read as empty.
std::shared_ptr<const Cells> source_cells(ActionContext& ctx, const std::string& field, std::string_view action) {
  if (const Column* col = ctx.source.find_column(field)) return col->shared_cells();
  if (ctx.dropped_columns.count(field)) {
    ctx.warnings.push_back(std::string(action) + ": source field '" + field +
                           "' was removed by DEBLANK and reads as empty");
    return std::make_shared<const Cells>(ctx.source.row_count());
  }
  throw UnknownFieldError(field);
}

void write_dest(ActionContext& ctx, const std::string& field, Cells cells, std::string_view action) {
  if (ctx.dest.has_column(field)) {
    ctx.warnings.push_back(std::string(action) + ": overwrites destination field '" + field +
                           "' written by an earlier action");
  }
  ctx.dest = ctx.dest.with_column(Column(field, std::move(cells)));
}

/// Applies a row selection to source and destination alike.
void keep_rows(ActionContext& ctx, const std::vector<std::size_t>& positions) {
  ctx.source = ctx.source.take_rows(positions);
  ctx.dest = ctx.dest.take_rows(positions);
}

std::optional<double> to_number(const CellValue& cell, bool& stripped) {
  stripped = false;
  if (const auto* d = cell.as_number()) return *d;
  if (const auto* i = cell.as_integer()) return static_cast<double>(*i);
  if (const auto* b = cell.as_boolean()) return *b ? 1.0 : 0.0;
  const auto* t = cell.as_text();
  if (!t) return std::nullopt;
  std::string text;
  text.reserve(t->size());
  for (const char c : *t) {
    if (c == ',') {
      stripped = true;
      continue;
    }
    text += c;
  }
  const auto coerced = coerce_value(CellValue::text(std::move(text)), FieldType::number);
  if (!coerced.ok) return std::nullopt;
  if (const auto* d = coerced.value.as_number()) return *d;
  return std::nullopt;
}

std::optional<DateTime> to_instant(const CellValue& cell) {
  if (cell.is_empty()) return std::nullopt;
  const auto coerced = coerce_value(cell, FieldType::datetime);
  if (!coerced.ok) return std::nullopt;
  if (const auto* dt = coerced.value.as_datetime()) return *dt;
  return std::nullopt;
}

ScalarValue term_value(const DestTerm& term) {
  if (const auto* b = std::get_if<bool>(&term)) return *b;
  return std::get<std::string>(term);
}

std::string term_text(const DestTerm& term) {
  if (const auto* b = std::get_if<bool>(&term)) return *b ? "True" : "False";
  return std::get<std::string>(term);
}

}  // namespace

bool is_absent(const CellValue& cell) noexcept {
  if (cell.is_empty()) return true;
  const auto* t = cell.as_text();
  return t && t->empty();
}

ActionContext ActionContext::start(Table source, SchemaModel source_schema, SchemaModel dest_schema) {
  ActionContext ctx;
  ctx.dest = Table({}, source.row_labels());
  ctx.source = std::move(source);
  ctx.source_schema = std::move(source_schema);
  ctx.dest_schema = std::move(dest_schema);
  return ctx;
}

void act_new(ActionContext& ctx, const std::string& dest_field, const CellValue& literal) {
  write_dest(ctx, dest_field, Cells(ctx.source.row_count(), literal), "NEW");
}

void act_rename(ActionContext& ctx, const std::string& dest_field, const std::string& source_field,
                const ExecOptions&) {
  auto cells = source_cells(ctx, source_field, "RENAME");
  if (ctx.dest.has_column(dest_field)) {
    ctx.warnings.push_back("RENAME: overwrites destination field '" + dest_field + "' written by an earlier action");
  }
  ctx.dest = ctx.dest.with_column(Column(dest_field, std::move(cells)));
}

void act_select(ActionContext& ctx, const std::string& dest_field, const std::vector<std::string>& source_fields,
                const ExecOptions& options) {
  std::vector<std::shared_ptr<const Cells>> inputs;
  for (const auto& f : source_fields) inputs.push_back(source_cells(ctx, f, "SELECT"));
  Slice out = run_rows(ctx.source.row_count(), 1, options, [&](std::size_t b, std::size_t e, Slice& s) {
    auto& col = s.columns[0];
    for (std::size_t r = b; r < e; ++r) {
      const CellValue* pick = nullptr;
      for (const auto& in : inputs) {
        if (!is_absent((*in)[r])) {
          pick = &(*in)[r];
          break;
        }
      }
      col.push_back(pick ? *pick : CellValue{});
    }
  });
  write_dest(ctx, dest_field, std::move(out.columns[0]), "SELECT");
}

void act_select_by_date(ActionContext& ctx, const std::string& dest_field, const std::vector<DatedField>& pairs,
                        DateDirection direction, const ExecOptions& options) {
  const std::string_view name = direction == DateDirection::newest ? "SELECT_NEWEST" : "SELECT_OLDEST";
  std::vector<std::pair<std::shared_ptr<const Cells>, std::shared_ptr<const Cells>>> inputs;
  for (const auto& p : pairs) {
    inputs.emplace_back(source_cells(ctx, p.value_field, name), source_cells(ctx, p.date_field, name));
  }
  Slice out = run_rows(ctx.source.row_count(), 1, options, [&](std::size_t b, std::size_t e, Slice& s) {
    auto& col = s.columns[0];
    for (std::size_t r = b; r < e; ++r) {
      const CellValue* pick = nullptr;
      std::optional<DateTime> best;
      for (const auto& [values, dates] : inputs) {
        const auto when = to_instant((*dates)[r]);
        if (!when) continue;
        const bool better = !best || (direction == DateDirection::newest ? *when > *best : *when < *best);
        if (better) {
          best = when;
          pick = &(*values)[r];
        }
      }
      if (!pick) ++s.count;
      col.push_back(pick ? *pick : CellValue{});
    }
  });
  if (out.count) {
    ctx.warnings.push_back(std::string(name) + ": " + std::to_string(out.count) + " row(s) had no parseable date for '" +
                           dest_field + "'");
  }
  write_dest(ctx, dest_field, std::move(out.columns[0]), name);
}

void act_calculate(ActionContext& ctx, const std::string& dest_field, const std::vector<SignedField>& fields,
                   const ExecOptions& options) {
  std::vector<std::shared_ptr<const Cells>> inputs;
  for (const auto& f : fields) inputs.push_back(source_cells(ctx, f.name, "CALCULATE"));
  const auto& labels = ctx.source.row_labels();
  Slice out = run_rows(ctx.source.row_count(), 1, options, [&](std::size_t b, std::size_t e, Slice& s) {
    auto& col = s.columns[0];
    for (std::size_t r = b; r < e; ++r) {
      double total = 0;
      bool any = false;
      for (std::size_t i = 0; i < fields.size(); ++i) {
        const CellValue& cell = (*inputs[i])[r];
        bool stripped = false;
        const auto value = to_number(cell, stripped);
        const std::string where = "CALCULATE '" + dest_field + "': row " + std::to_string(labels[r]) + " field '" +
                                  fields[i].name + "'";
        if (!value) {
          s.warnings.push_back(where + " value '" + to_text(cell) + "' is not numeric; counted as 0");
          continue;
        }
        if (stripped) s.warnings.push_back(where + " removed thousands separators from '" + to_text(cell) + "'");
        any = true;
        total += fields[i].sign == Sign::plus ? *value : -*value;
      }
      col.push_back(any ? CellValue::number(total) : CellValue{});
    }
  });
  ctx.warnings.insert(ctx.warnings.end(), std::make_move_iterator(out.warnings.begin()),
                      std::make_move_iterator(out.warnings.end()));
  write_dest(ctx, dest_field, std::move(out.columns[0]), "CALCULATE");
}

void act_unite(ActionContext& ctx, const std::string& dest_field, const std::string& separator,
               const std::vector<std::string>& source_fields, const ExecOptions& options) {
  std::vector<std::shared_ptr<const Cells>> inputs;
  for (const auto& f : source_fields) inputs.push_back(source_cells(ctx, f, "UNITE"));
  Slice out = run_rows(ctx.source.row_count(), 1, options, [&](std::size_t b, std::size_t e, Slice& s) {
    auto& col = s.columns[0];
    for (std::size_t r = b; r < e; ++r) {
      std::string joined;
      bool any = false;
      for (const auto& in : inputs) {
        const CellValue& cell = (*in)[r];
        if (is_absent(cell)) continue;
        if (any) joined += separator;
        joined += to_text(cell);
        any = true;
      }
      col.push_back(any ? CellValue::text(std::move(joined)) : CellValue{});
    }
  });
  write_dest(ctx, dest_field, std::move(out.columns[0]), "UNITE");
}

void act_separate(ActionContext& ctx, const std::vector<std::string>& dest_fields, const std::string& separator,
                  const std::string& source_field, const ExecOptions& options) {
  if (separator.empty()) throw PreconditionError("SEPARATE needs a non-empty separator");
  const auto input = source_cells(ctx, source_field, "SEPARATE");
  const std::size_t n = dest_fields.size();
  Slice out = run_rows(ctx.source.row_count(), n, options, [&](std::size_t b, std::size_t e, Slice& s) {
    for (std::size_t r = b; r < e; ++r) {
      const CellValue& cell = (*input)[r];
      if (is_absent(cell)) {
        for (auto& col : s.columns) col.emplace_back();
        continue;
      }
      const std::string text = to_text(cell);
      std::size_t pos = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (pos == std::string::npos) {
          s.columns[i].emplace_back();
          continue;
        }
        if (i + 1 == n) {
          s.columns[i].push_back(CellValue::text(text.substr(pos)));
          break;
        }
        const std::size_t hit = text.find(separator, pos);
        if (hit == std::string::npos) {
          s.columns[i].push_back(CellValue::text(text.substr(pos)));
          pos = std::string::npos;
        } else {
          s.columns[i].push_back(CellValue::text(text.substr(pos, hit - pos)));
          pos = hit + separator.size();
        }
      }
    }
  });
  for (std::size_t i = 0; i < n; ++i) write_dest(ctx, dest_fields[i], std::move(out.columns[i]), "SEPARATE");
}

void act_categorise(ActionContext& ctx, const std::string& dest_field, const DestTerm& dest_term,
                    const std::string& source_field, const std::vector<MatchTerm>& match_terms,
                    const ExecOptions& options) {
  const auto input = source_cells(ctx, source_field, "CATEGORISE");
  const FieldDefinition* def = ctx.dest_schema.find_field(dest_field);
  const bool append = def && def->type == FieldType::array;
  std::unordered_set<std::string> literals;
  bool match_present = false;
  bool match_absent = false;
  for (const auto& t : match_terms) {
    if (const auto* b = std::get_if<bool>(&t)) {
      (*b ? match_present : match_absent) = true;
    } else {
      literals.insert(unicode::nfc(std::get<std::string>(t)));
    }
  }
  const Column* existing_col = ctx.dest.find_column(dest_field);
  const std::shared_ptr<const Cells> existing =
      existing_col ? existing_col->shared_cells() : std::make_shared<const Cells>(ctx.source.row_count());
  const ScalarValue term = term_value(dest_term);
  const CellValue term_cell(term);

  Slice out = run_rows(ctx.source.row_count(), 1, options, [&](std::size_t b, std::size_t e, Slice& s) {
    auto& col = s.columns[0];
    for (std::size_t r = b; r < e; ++r) {
      const CellValue& cell = (*input)[r];
      const CellValue& prior = (*existing)[r];
      bool hit = cell.is_empty() ? match_absent : match_present;
      if (!hit && !literals.empty() && !cell.is_empty()) hit = literals.count(unicode::nfc(to_text(cell))) != 0;
      if (!hit) {
        col.push_back(prior);
        continue;
      }
      if (append) {
        ListValue list;
        if (const auto* l = prior.as_list()) {
          list = *l;
        } else if (!prior.is_empty()) {
          list.push_back(prior.to_scalar());
        }
        list.push_back(term);
        col.push_back(CellValue::list(std::move(list)));
      } else {
        if (!prior.is_empty() && !(prior == term_cell)) ++s.count;
        col.push_back(term_cell);
      }
    }
  });
  if (out.count) {
    ctx.warnings.push_back("CATEGORISE: overwrote " + std::to_string(out.count) + " existing value(s) in '" +
                           dest_field + "' with '" + term_text(dest_term) + "'");
  }
  ctx.dest = ctx.dest.with_column(Column(dest_field, std::move(out.columns[0])));
}

void act_collate(ActionContext& ctx, const std::string& dest_field, const std::vector<CollateItem>& items,
                 const ExecOptions& options) {
  std::vector<std::shared_ptr<const Cells>> inputs;
  for (const auto& item : items) inputs.push_back(item ? source_cells(ctx, *item, "COLLATE") : nullptr);
  Slice out = run_rows(ctx.source.row_count(), 1, options, [&](std::size_t b, std::size_t e, Slice& s) {
    auto& col = s.columns[0];
    for (std::size_t r = b; r < e; ++r) {
      ListValue list;
      list.reserve(items.size());
      for (const auto& in : inputs) list.push_back(in ? (*in)[r].to_scalar() : ScalarValue{});
      col.push_back(CellValue::list(std::move(list)));
    }
  });
  write_dest(ctx, dest_field, std::move(out.columns[0]), "COLLATE");
}

void act_deblank(ActionContext& ctx) {
  const Table& t = ctx.source;
  auto blank = [](const CellValue& c) {
    if (c.is_empty()) return true;
    const auto* s = c.as_text();
    return s && unicode::is_blank(*s);
  };
  std::vector<std::size_t> keep;
  for (std::size_t r = 0; r < t.row_count(); ++r) {
    const bool all_blank =
        std::all_of(t.columns().begin(), t.columns().end(), [&](const Column& c) { return blank(c[r]); });
    if (!all_blank) keep.push_back(r);
  }
  std::vector<std::string> drop;
  if (t.row_count() > 0) {
    for (const auto& c : t.columns()) {
      if (std::all_of(c.cells().begin(), c.cells().end(), blank)) drop.push_back(c.name());
    }
  }
  if (keep.size() != t.row_count()) keep_rows(ctx, keep);
  if (!drop.empty()) {
    ctx.source = ctx.source.without_columns(drop);
    ctx.dropped_columns.insert(drop.begin(), drop.end());
  }
}

void act_dedupe(ActionContext& ctx) {
  const Table& t = ctx.source;
  const std::size_t rows = t.row_count();
  std::unordered_map<std::size_t, std::vector<std::size_t>> buckets;
  std::vector<std::size_t> keep;
  keep.reserve(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    std::size_t h = 1469598103934665603ULL;
    for (const auto& c : t.columns()) h = (h ^ hash_value(c[r])) * 1099511628211ULL;
    auto& bucket = buckets[h];
    const bool dup = std::any_of(bucket.begin(), bucket.end(), [&](std::size_t other) {
      return std::all_of(t.columns().begin(), t.columns().end(), [&](const Column& c) { return c[r] == c[other]; });
    });
    if (dup) continue;
    bucket.push_back(r);
    keep.push_back(r);
  }
  if (keep.size() != rows) keep_rows(ctx, keep);
}

void act_delete_rows(ActionContext& ctx, const std::vector<RowLabel>& labels) {
  const auto& current = ctx.source.row_labels();
  std::set<RowLabel> doomed(labels.begin(), labels.end());
  std::vector<std::size_t> keep;
  std::set<RowLabel> found;
  for (std::size_t r = 0; r < current.size(); ++r) {
    if (doomed.count(current[r])) {
      found.insert(current[r]);
    } else {
      keep.push_back(r);
    }
  }
  for (const auto l : doomed) {
    if (!found.count(l)) ctx.warnings.push_back("DELETE_ROWS: row " + std::to_string(l) + " is not present");
  }
  if (keep.size() != current.size()) keep_rows(ctx, keep);
}

void act_pivot_longer(ActionContext& ctx, const std::string& name_field, const std::string& value_field,
                      const std::vector<std::string>& source_fields) {
  if (source_fields.empty()) throw PreconditionError("PIVOT_LONGER needs at least one source field");
  std::vector<std::shared_ptr<const Cells>> pivoted;
  for (const auto& f : source_fields) pivoted.push_back(source_cells(ctx, f, "PIVOT_LONGER"));
  const std::size_t rows = ctx.source.row_count();
  const std::size_t k = source_fields.size();
  std::vector<std::size_t> positions;
  positions.reserve(rows * k);
  Cells names;
  Cells values;
  names.reserve(rows * k);
  values.reserve(rows * k);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < k; ++i) {
      positions.push_back(r);
      names.push_back(CellValue::text(source_fields[i]));
      values.push_back((*pivoted[i])[r]);
    }
  }
  std::vector<RowLabel> labels(rows * k);
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = i;

  std::vector<std::string> drop;
  for (const auto& f : source_fields) {
    if (ctx.source.has_column(f)) drop.push_back(f);
  }
  Table source = ctx.source.without_columns(drop).take_rows(positions, labels);
  source = source.with_column(Column(name_field, names)).with_column(Column(value_field, values));
  Table dest = ctx.dest.take_rows(positions, labels);
  ctx.source = std::move(source);
  ctx.dest = std::move(dest);
  write_dest(ctx, name_field, std::move(names), "PIVOT_LONGER");
  write_dest(ctx, value_field, std::move(values), "PIVOT_LONGER");
  ctx.warnings.push_back("PIVOT_LONGER: " + std::to_string(rows) + " row(s) became " + std::to_string(rows * k) +
                         "; row labels were reassigned from 0");
}

void act_pivot_categories(ActionContext& ctx, const std::string& dest_field, const std::string& source_field,
                          const std::vector<RowLabel>& header_labels) {
  const auto input = source_cells(ctx, source_field, "PIVOT_CATEGORIES");
  const auto& labels = ctx.source.row_labels();
  const std::set<RowLabel> headers(header_labels.begin(), header_labels.end());
  std::set<RowLabel> found;
  std::vector<std::size_t> keep;
  Cells assigned;
  std::optional<CellValue> current;
  std::size_t orphans = 0;
  for (std::size_t r = 0; r < labels.size(); ++r) {
    if (headers.count(labels[r])) {
      found.insert(labels[r]);
      const CellValue& h = (*input)[r];
      current = h.is_empty() ? CellValue{} : CellValue::text(to_text(h));
      continue;
    }
    keep.push_back(r);
    if (!current) ++orphans;
    assigned.push_back(current.value_or(CellValue{}));
  }
  for (const auto l : headers) {
    if (!found.count(l)) ctx.warnings.push_back("PIVOT_CATEGORIES: header row " + std::to_string(l) + " is not present");
  }
  if (orphans) {
    ctx.warnings.push_back("PIVOT_CATEGORIES: " + std::to_string(orphans) +
                           " row(s) precede the first header and get no category");
  }
  if (keep.size() != labels.size()) keep_rows(ctx, keep);
  ctx.source = ctx.source.with_column(Column(dest_field, assigned));
  write_dest(ctx, dest_field, std::move(assigned), "PIVOT_CATEGORIES");
}

void apply_action(ActionContext& ctx, const ParsedAction& a, const ExecOptions& options) {
  auto field_names = [&]() {
    std::vector<std::string> out;
    for (const auto& item : a.source_items) {
      if (const auto* f = std::get_if<FieldRef>(&item)) out.push_back(f->name);
    }
    return out;
  };
  auto row_labels = [&]() {
    std::vector<RowLabel> out;
    for (const auto& item : a.source_items) {
      if (const auto* i = std::get_if<IntegerLiteral>(&item)) {
        if (i->value < 0) throw PreconditionError("row labels are non-negative");
        out.push_back(static_cast<RowLabel>(i->value));
      }
    }
    return out;
  };
  auto dest = [&]() -> const std::string& {
    if (a.dest_fields.empty()) throw PreconditionError(std::string(to_string(a.action)) + " needs a destination field");
    return a.dest_fields.front();
  };
  auto term = [&]() -> const std::string& {
    if (!a.source_term) throw PreconditionError(std::string(to_string(a.action)) + " needs a source term");
    return *a.source_term;
  };

  switch (a.action) {
    case ActionName::NEW: {
      CellValue literal;
      for (const auto& item : a.source_items) {
        if (const auto* l = std::get_if<Literal>(&item)) {
          literal = CellValue::text(l->text);
        } else if (const auto* b = std::get_if<BooleanLiteral>(&item)) {
          literal = CellValue::boolean(b->value);
        } else if (const auto* i = std::get_if<IntegerLiteral>(&item)) {
          literal = CellValue::integer(i->value);
        }
      }
      act_new(ctx, dest(), literal);
      return;
    }
    case ActionName::RENAME: {
      const auto fields = field_names();
      if (fields.size() != 1) throw PreconditionError("RENAME needs exactly one source field");
      act_rename(ctx, dest(), fields.front(), options);
      return;
    }
    case ActionName::SELECT: act_select(ctx, dest(), field_names(), options); return;
    case ActionName::SELECT_NEWEST:
    case ActionName::SELECT_OLDEST: {
      std::vector<DatedField> pairs;
      for (const auto& item : a.source_items) {
        if (const auto* d = std::get_if<DatedField>(&item)) pairs.push_back(*d);
      }
      act_select_by_date(ctx, dest(), pairs,
                         a.action == ActionName::SELECT_NEWEST ? DateDirection::newest : DateDirection::oldest,
                         options);
      return;
    }
    case ActionName::CALCULATE: {
      std::vector<SignedField> fields;
      for (const auto& item : a.source_items) {
        if (const auto* s = std::get_if<SignedField>(&item)) fields.push_back(*s);
      }
      act_calculate(ctx, dest(), fields, options);
      return;
    }
    case ActionName::UNITE: act_unite(ctx, dest(), term(), field_names(), options); return;
    case ActionName::SEPARATE: {
      const auto fields = field_names();
      if (fields.size() != 1) throw PreconditionError("SEPARATE needs exactly one source field");
      act_separate(ctx, a.dest_fields, term(), fields.front(), options);
      return;
    }
    case ActionName::CATEGORISE: {
      if (!a.dest_term) throw PreconditionError("CATEGORISE needs a destination term");
      std::vector<MatchTerm> terms;
      for (const auto& item : a.source_items) {
        if (const auto* l = std::get_if<Literal>(&item)) {
          terms.emplace_back(l->text);
        } else if (const auto* b = std::get_if<BooleanLiteral>(&item)) {
          terms.emplace_back(b->value);
        }
      }
      act_categorise(ctx, dest(), *a.dest_term, term(), terms, options);
      return;
    }
    case ActionName::COLLATE: {
      std::vector<CollateItem> items;
      for (const auto& item : a.source_items) {
        if (const auto* f = std::get_if<FieldRef>(&item)) {
          items.emplace_back(f->name);
        } else {
          items.emplace_back(std::nullopt);
        }
      }
      act_collate(ctx, dest(), items, options);
      return;
    }
    case ActionName::DEBLANK: act_deblank(ctx); return;
    case ActionName::DEDUPE: act_dedupe(ctx); return;
    case ActionName::DELETE_ROWS: act_delete_rows(ctx, row_labels()); return;
    case ActionName::PIVOT_LONGER:
      if (a.dest_fields.size() != 2) throw PreconditionError("PIVOT_LONGER needs two destination fields");
      act_pivot_longer(ctx, a.dest_fields[0], a.dest_fields[1], field_names());
      return;
    case ActionName::PIVOT_CATEGORIES: act_pivot_categories(ctx, dest(), term(), row_labels()); return;
  }
}

}  // namespace crosswalk
