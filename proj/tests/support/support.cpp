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

#include "support.hpp"

#include <atomic>
#include <fstream>
#include <set>
#include <sstream>

#include "crosswalk/csv.hpp"
#include "crosswalk/files.hpp"
#include "crosswalk/json_io.hpp"

namespace crosswalk::testing {

namespace fs = std::filesystem;

fs::path data_dir() { return CROSSWALK_TEST_DATA_DIR; }

TempDir::TempDir(const std::string& tag) {
  static std::atomic<unsigned> counter{0};
  std::random_device rd;
  path_ = fs::temp_directory_path() /
          ("xwalk-" + tag + "-" + std::to_string(rd()) + "-" + std::to_string(counter++));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

const std::vector<std::string>& script_corpus() {
  static const std::vector<std::string> corpus = {
      "CATEGORISE > 'occupation_state_reliefs'::'other' < 'Current Relief Type'::"
      "['Sports Club (Registered CASC)', 'Mandatory']",
      "CATEGORISE > 'occupation_state'::True < ' EmptyFrom'::[True]",
      "RENAME > 'occupation_state_date' < ['EmptyFrom']",
      "NEW > 'localAuthorityCode' < [ 'E07000223' ]",
      "RENAME > 'localBillingReference' < [ 'PropertyID' ]",
      "UNITE > 'occupierAccountHolderName' < ' ; ' :: [ 'AccountHolder1', 'AccountHolder2' ]",
      "UNITE > 'occupierPropertyAddress' < ' ; ' :: [\n"
      "  'PropertyAddr1', 'PropertyAddr2', 'PropertyAddr3',\n"
      "  'PropertyAddr4', 'PropertyPostcode'\n"
      "]",
      "UNITE > 'occupierCorrespondenceAddress' < ' ; ' :: [\n"
      "  'HolderAddr1', 'HolderAddr2', 'HolderAddr3', 'HolderAddr4', 'HolderPostcode'\n"
      "]",
      "RENAME > 'occupierAccountStartDate' < [ 'LiableFrom' ]",
      "CATEGORISE > 'occupierOccupationState' :: 'Vacant' < 'EmptyFrom' :: [ True ]",
      "SELECT > 'occupierOccupationDate' < [ 'EmptyFrom' ]",
      "CATEGORISE > 'occupierReliefType' :: 'retail' < 'Retail' :: [ 'Y' ]",
      "CATEGORISE > 'occupierReliefType' :: 'small_business' < 'SBRR' :: [ 'Y' ]",
      "CATEGORISE > 'occupierReliefType' :: 'charity' < 'Charitable' :: [ 'Y' ]",
      "CATEGORISE > 'occupierReliefType' :: 'mandatory' < 'Mandatory' :: [ True ]",
      "CATEGORISE > 'occupierReliefType' :: 'discretionary' < 'Discretionary' :: [ True ]",
      "COLLATE > 'occupierReliefAmount' < [ ~, ~, ~, 'Mandatory', 'Discretionary' ]",
  };
  return corpus;
}

std::vector<std::string> case_study_scripts() {
  const auto& all = script_corpus();
  return {all.begin() + 3, all.end()};
}

std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

std::string random_text(Rng& rng, std::size_t max_len) {
  static const std::vector<std::string> pieces = {"a", "b", "c", "A", "7", "0", " ", "'", "é", "ß", "-", ".", "x"};
  const std::size_t len = uniform(rng, 1, max_len);
  std::string out;
  for (std::size_t i = 0; i < len; ++i) out += pieces[uniform(rng, 0, pieces.size() - 1)];
  return out;
}

std::string random_name(Rng& rng) {
  static const std::vector<std::string> pieces = {"id", "name", "Addr", "x", "Y", "date", " ", "'", "é", "_", "2"};
  std::string out;
  const std::size_t len = uniform(rng, 1, 4);
  for (std::size_t i = 0; i < len; ++i) out += pieces[uniform(rng, 0, pieces.size() - 1)];
  // whitespace-only headers are renamed at ingest
  if (out.find_first_not_of(' ') == std::string::npos) out += "f";
  return out;
}

std::vector<std::string> random_names(Rng& rng, std::size_t n) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  while (out.size() < n) {
    auto name = random_name(rng);
    if (seen.insert(name).second) out.push_back(std::move(name));
  }
  return out;
}

namespace {

Table make_table(Rng& rng, const TableShape& shape, const std::string* avoid) {
  const std::size_t rows = uniform(rng, shape.min_rows, shape.max_rows);
  const std::size_t cols = uniform(rng, shape.min_cols, shape.max_cols);
  const auto names = random_names(rng, cols);
  std::vector<Column> columns;
  for (const auto& name : names) {
    Cells cells;
    for (std::size_t r = 0; r < rows; ++r) {
      if (coin(rng, shape.empty_p)) {
        cells.push_back(CellValue::empty());
        continue;
      }
      std::string text;
      do {
        text = random_text(rng);
      } while (avoid && text.find(*avoid) != std::string::npos);
      cells.push_back(CellValue::text(std::move(text)));
    }
    columns.emplace_back(name, std::move(cells));
  }
  return Table(std::move(columns));
}

std::string pick(Rng& rng, const std::vector<std::string>& from) { return from[uniform(rng, 0, from.size() - 1)]; }

}  // namespace

Table random_table(Rng& rng, const TableShape& shape) { return make_table(rng, shape, nullptr); }

Table random_table_without(Rng& rng, const TableShape& shape, const std::string& avoid) {
  return make_table(rng, shape, &avoid);
}

ParsedAction random_action(Rng& rng, ActionName action) {
  ParsedAction a;
  a.action = action;
  const ActionInfo& info = action_info(action);
  const auto names = random_names(rng, 8);
  const std::size_t n = uniform(rng, 1, 4);

  if (info.dest == "field") {
    a.dest_fields = {names[0]};
  } else if (info.dest == "field_pair") {
    a.dest_fields = {names[0], names[1]};
    a.dest_bracketed = true;
  } else if (info.dest == "field_list") {
    for (std::size_t i = 0; i < n; ++i) a.dest_fields.push_back(names[i]);
    a.dest_bracketed = true;
  }
  if (info.dest_term) {
    if (coin(rng, 0.3)) {
      a.dest_term = coin(rng);
    } else {
      a.dest_term = random_text(rng);
    }
  }
  if (info.source_term == "separator") {
    a.source_term = pick(rng, {";", " ; ", ", ", "|", "''"});
  } else if (info.source_term == "field") {
    a.source_term = names[5];
  }

  const std::string_view kind = info.source_items;
  if (kind == "none") return a;
  a.source_bracketed = true;
  auto field = [&](std::size_t i) { return names[2 + i % 6]; };
  if (kind == "field") {
    a.source_items.push_back(FieldRef{field(0)});
  } else if (kind == "fields") {
    for (std::size_t i = 0; i < n; ++i) a.source_items.push_back(FieldRef{field(i)});
  } else if (kind == "literal") {
    switch (uniform(rng, 0, 2)) {
      case 0: a.source_items.push_back(Literal{random_text(rng)}); break;
      case 1: a.source_items.push_back(BooleanLiteral{coin(rng)}); break;
      default: a.source_items.push_back(IntegerLiteral{static_cast<std::int64_t>(uniform(rng, 0, 100000))}); break;
    }
  } else if (kind == "match_terms") {
    for (std::size_t i = 0; i < n; ++i) {
      if (coin(rng, 0.3)) {
        a.source_items.push_back(BooleanLiteral{coin(rng)});
      } else {
        a.source_items.push_back(Literal{random_text(rng)});
      }
    }
  } else if (kind == "signed_fields") {
    for (std::size_t i = 0; i < n; ++i) a.source_items.push_back(SignedField{coin(rng) ? Sign::plus : Sign::minus, field(i)});
  } else if (kind == "fields_or_placeholders") {
    for (std::size_t i = 0; i < n; ++i) {
      if (coin(rng, 0.4)) {
        a.source_items.push_back(Placeholder{});
      } else {
        a.source_items.push_back(FieldRef{field(i)});
      }
    }
  } else if (kind == "dated_fields") {
    for (std::size_t i = 0; i < n; ++i) a.source_items.push_back(DatedField{field(i), field(i + 3)});
  } else if (kind == "rows") {
    for (std::size_t i = 0; i < n; ++i) a.source_items.push_back(IntegerLiteral{static_cast<std::int64_t>(uniform(rng, 0, 50))});
  }
  return a;
}

std::string to_csv(const Table& table) {
  std::ostringstream out;
  csv::write_table(out, table);
  return out.str();
}

// --- case study oracle -------------------------------------------------------

namespace {

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out(1);
  for (const char c : line) {
    if (c == ',') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  return out;
}

std::string join_present(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (p.empty()) continue;
    if (!out.empty()) out += " ; ";
    out += p;
  }
  return out;
}

// DD/MM/YYYY -> YYYY-MM-DD
std::string iso_from_uk(const std::string& text) {
  if (text.empty()) return "";
  return text.substr(6, 4) + "-" + text.substr(3, 2) + "-" + text.substr(0, 2);
}

}  // namespace

OracleTable case_study_oracle(const fs::path& fixture_csv) {
  std::ifstream in(fixture_csv);
  std::string line;
  std::getline(in, line);
  const auto header = split_commas(line);
  std::vector<std::vector<std::string>> raw;
  while (std::getline(in, line)) {
    if (!line.empty()) raw.push_back(split_commas(line));
  }
  auto col = [&](const std::vector<std::string>& row, const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return row[i];
    }
    throw std::runtime_error("oracle: no column " + name);
  };

  OracleTable out;
  out.columns = {"localAuthorityCode",        "localBillingReference",      "occupierAccountHolderName",
                 "occupierPropertyAddress",   "occupierCorrespondenceAddress", "occupierAccountStartDate",
                 "occupierOccupationState",   "occupierOccupationDate",     "occupierReliefType",
                 "occupierReliefAmount"};
  for (const auto& r : raw) {
    std::vector<std::string> row;
    row.push_back("E07000223");
    row.push_back(col(r, "PropertyID"));
    row.push_back(join_present({col(r, "AccountHolder1"), col(r, "AccountHolder2")}));
    row.push_back(join_present({col(r, "PropertyAddr1"), col(r, "PropertyAddr2"), col(r, "PropertyAddr3"),
                                col(r, "PropertyAddr4"), col(r, "PropertyPostcode")}));
    row.push_back(join_present({col(r, "HolderAddr1"), col(r, "HolderAddr2"), col(r, "HolderAddr3"),
                                col(r, "HolderAddr4"), col(r, "HolderPostcode")}));
    row.push_back(iso_from_uk(col(r, "LiableFrom")));
    const std::string empty_from = col(r, "EmptyFrom");
    row.push_back(empty_from.empty() ? "" : "Vacant");
    row.push_back(iso_from_uk(empty_from));

    std::vector<std::string> reliefs;
    if (col(r, "Retail") == "Y") reliefs.push_back("'retail'");
    if (col(r, "SBRR") == "Y") reliefs.push_back("'small_business'");
    if (col(r, "Charitable") == "Y") reliefs.push_back("'charity'");
    if (!col(r, "Mandatory").empty()) reliefs.push_back("'mandatory'");
    if (!col(r, "Discretionary").empty()) reliefs.push_back("'discretionary'");
    std::string relief_text;
    for (std::size_t i = 0; i < reliefs.size(); ++i) relief_text += (i ? ", " : "[") + reliefs[i];
    row.push_back(reliefs.empty() ? "" : relief_text + "]");

    auto amount = [](const std::string& v) { return v.empty() ? std::string("~") : "'" + v + "'"; };
    row.push_back("[~, ~, ~, " + amount(col(r, "Mandatory")) + ", " + amount(col(r, "Discretionary")) + "]");
    out.rows.push_back(std::move(row));
  }
  return out;
}

OracleTable as_text(const Table& table) {
  OracleTable out;
  out.columns = table.column_names();
  for (std::size_t r = 0; r < table.row_count(); ++r) {
    std::vector<std::string> row;
    for (const auto& c : table.columns()) row.push_back(to_text(c[r]));
    out.rows.push_back(std::move(row));
  }
  return out;
}

CaseStudy case_study() {
  CaseStudy cs;
  cs.table = ingest_source(data_dir() / "rates" / "business_rates.csv", {}, DateTime{}).front().table;
  cs.source = derive_schema(cs.table, "business_rates");
  cs.dest = schema_from_json(parse_json(read_text_file(data_dir() / "rates" / "dest_schema.json")));
  if (cs.dest.uuid.empty()) cs.dest.uuid = uuid_from_seed("ndr_occupation");
  cs.crosswalk.uuid = uuid_from_seed("case-study");
  cs.crosswalk.name = "rates to ndr";
  cs.crosswalk.status = CrosswalkStatus::validated;
  cs.crosswalk.source_fingerprint = fingerprint(cs.source);
  cs.crosswalk.dest_schema_uuid = cs.dest.uuid;
  for (const auto& script : case_study_scripts()) cs.crosswalk.actions.push_back(parse_script(script));
  return cs;
}

}  // namespace crosswalk::testing
