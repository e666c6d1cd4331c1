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

#include <gtest/gtest.h>

#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <thread>

#include "crosswalk/blake2b.hpp"
#include "crosswalk/error.hpp"
#include "crosswalk/files.hpp"
#include "crosswalk/project.hpp"
#include "support.hpp"

namespace crosswalk {
namespace {

namespace fs = std::filesystem;

std::span<const std::uint8_t> bytes_of(const std::string& s) {
  return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

const fs::path kRates = testing::data_dir() / "rates" / "business_rates.csv";

/// Project with the destination schema imported and the case-study
/// crosswalk validated on the rates fixture.
struct RatesProject {
  testing::TempDir dir{"project"};
  Project project = Project::init(dir.path(), "rates");
  std::string dest_uuid;
  std::string resource_uuid;
  std::string crosswalk_uuid;

  RatesProject() {
    dest_uuid = project.import_schema(testing::case_study().dest).uuid;
    resource_uuid = project.ingest_file(kRates, {}).front().resource.uuid;
    auto cw = project.create_crosswalk(resource_uuid, dest_uuid, "rates");
    cw = project.update_actions(cw.uuid, cw.version, testing::case_study().crosswalk.actions);
    crosswalk_uuid = cw.uuid;
    EXPECT_TRUE(project.validate(cw.uuid).ok());
  }
};

TEST(Project, InitAndOpen) {
  testing::TempDir dir("init");
  EXPECT_THROW(Project::open(dir.path()), NotFoundError);
  const auto p = Project::init(dir.path(), "demo");
  EXPECT_TRUE(fs::exists(dir / "project.json"));
  const auto again = Project::open(dir.path());
  EXPECT_EQ(again.info().name, "demo");
  EXPECT_EQ(again.info().uuid, p.info().uuid);
}

TEST(Project, IngestDerivesSchemaAndStoresCopy) {
  testing::TempDir dir("ingest");
  auto p = Project::init(dir.path());
  const auto outcomes = p.ingest_file(kRates, {});
  ASSERT_EQ(outcomes.size(), 1u);
  const auto& r = outcomes[0].resource;
  EXPECT_EQ(r.state, ResourceState::schema_ready);
  EXPECT_EQ(r.source.digest, hash_file(kRates));
  EXPECT_EQ(r.source.row_count, 6u);
  EXPECT_EQ(r.source.column_count, 22u);
  EXPECT_EQ(hash_file(dir / r.stored_file), r.source.digest);
  EXPECT_EQ(outcomes[0].schema.field_names().front(), "PropertyID");
  EXPECT_FALSE(outcomes[0].matched_crosswalk);
  EXPECT_EQ(p.load_table(r), testing::case_study().table);
  EXPECT_EQ(p.resources().size(), 1u);
}

TEST(Project, CrosswalkLifecycle) {
  RatesProject rp;
  auto& p = rp.project;
  const auto cw = p.crosswalk(rp.crosswalk_uuid);
  EXPECT_EQ(cw.status, CrosswalkStatus::validated);
  EXPECT_EQ(cw.actions.size(), 14u);
  EXPECT_EQ(p.resource(rp.resource_uuid).state, ResourceState::validated);

  EXPECT_THROW(p.update_actions(cw.uuid, cw.version - 1, {}), VersionConflictError);
  // an identical retry of the last write succeeds unchanged
  const auto retry = p.update_actions(cw.uuid, cw.version - 1, cw.actions);
  EXPECT_EQ(retry.version, cw.version);
  EXPECT_EQ(retry.status, CrosswalkStatus::validated);

  const auto edited = p.update_actions(cw.uuid, cw.version, {cw.actions.begin(), cw.actions.begin() + 3});
  EXPECT_EQ(edited.version, cw.version + 1);
  EXPECT_EQ(edited.status, CrosswalkStatus::draft);
  EXPECT_THROW(p.runnable_crosswalk(p.resource(rp.resource_uuid)), StateError);
  EXPECT_THROW(p.transform(rp.resource_uuid, ExportFormat::csv), StateError);
}

TEST(Project, TransformStoresOutputAndReplays) {
  RatesProject rp;
  auto& p = rp.project;
  const auto out = rp.dir / "export.csv";
  const auto rec = p.transform(rp.resource_uuid, ExportFormat::csv, out);
  EXPECT_EQ(rec.output.digest, hash_file(out));
  EXPECT_EQ(rec.output.digest, hash_file(p.output_path(rec)));
  EXPECT_EQ(rec.input_digest, hash_file(kRates));
  EXPECT_EQ(rec.actions.size(), 14u);
  EXPECT_EQ(rec.violations, 0u);
  EXPECT_EQ(p.resource(rp.resource_uuid).state, ResourceState::transformed);

  const auto& cs = testing::case_study();
  const auto direct = apply_crosswalk(cs.table, cs.crosswalk, cs.source, cs.dest);
  EXPECT_EQ(read_text_file(out), render_table(direct.table, ExportFormat::csv, cs.dest));

  const auto replay = p.replay(rec.uuid);
  EXPECT_TRUE(replay.matches());
  EXPECT_EQ(p.transform_record(rec.uuid).output.digest, rec.output.digest);
  EXPECT_EQ(p.transforms().size(), 1u);

  // later edits do not change what the record replays
  auto cw = p.crosswalk(rp.crosswalk_uuid);
  p.update_actions(cw.uuid, cw.version, {cw.actions.front()});
  EXPECT_TRUE(p.replay(rec.uuid).matches());
}

TEST(Project, TamperedFilesFailProbity) {
  RatesProject rp;
  auto& p = rp.project;
  const auto rec = p.transform(rp.resource_uuid, ExportFormat::parquet);
  const auto r = p.resource(rp.resource_uuid);
  auto text = read_text_file(rp.dir / r.stored_file);
  text[text.size() / 2] ^= 0x01;
  write_file_atomic(rp.dir / r.stored_file, text);
  EXPECT_THROW(p.load_table(r), ProbityError);
  EXPECT_THROW(p.replay(rec.uuid), ProbityError);
}

TEST(Project, TamperedOutputIsReported) {
  RatesProject rp;
  auto& p = rp.project;
  const auto rec = p.transform(rp.resource_uuid, ExportFormat::csv);
  write_file_atomic(p.output_path(rec), "changed\n");
  const auto replay = p.replay(rec.uuid);
  EXPECT_FALSE(replay.stored_output_ok);
  EXPECT_EQ(replay.replayed_digest, rec.output.digest);
  EXPECT_FALSE(replay.matches());
}

TEST(Project, SecondFileIsAutoAssignedPendingConfirmation) {
  RatesProject rp;
  auto& p = rp.project;
  auto text = read_text_file(kRates);
  text = text.substr(0, text.rfind('\n', text.size() - 2) + 1);  // drop the last row
  const auto second = p.ingest(bytes_of(text), "rates_2021.csv", {}).front();
  ASSERT_TRUE(second.matched_crosswalk);
  EXPECT_EQ(*second.matched_crosswalk, rp.crosswalk_uuid);
  EXPECT_TRUE(second.resource.auto_assigned);
  EXPECT_THROW(p.transform(second.resource.uuid, ExportFormat::csv), StateError);
  const auto confirmed = p.confirm(second.resource.uuid);
  EXPECT_FALSE(confirmed.auto_assigned);
  EXPECT_EQ(p.transform(second.resource.uuid, ExportFormat::csv).output.row_count, 5u);

  // a different header gets no match
  const auto other = p.ingest(bytes_of(std::string("a,b\n1,2\n")), "other.csv", {}).front();
  EXPECT_FALSE(other.matched_crosswalk);
}

TEST(Project, SourceSchemaEditsResetCrosswalks) {
  RatesProject rp;
  auto& p = rp.project;
  const auto original = p.schema(p.resource(rp.resource_uuid).schema_uuid);
  auto schema = original;
  schema.fields[2].type = FieldType::number;  // RV
  const auto saved = p.save_schema([&] {
    auto s = schema;
    ++s.version;
    return s;
  }(), schema.version);
  const auto cw = p.crosswalk(rp.crosswalk_uuid);
  EXPECT_EQ(cw.status, CrosswalkStatus::draft);
  EXPECT_EQ(cw.source_fingerprint, fingerprint(saved));
  EXPECT_EQ(p.save_schema(saved, saved.version - 1).version, saved.version);
  EXPECT_THROW(p.save_schema(original, saved.version - 1), VersionConflictError);
  EXPECT_TRUE(p.validate(cw.uuid).ok());
}

TEST(Project, ConcurrentTransformsOfDistinctResources) {
  RatesProject rp;
  auto& p = rp.project;
  const auto second = p.ingest(bytes_of(read_text_file(kRates) + "9,9,9,,,,,,,,,,,,,,,,,,,\n"), "more.csv", {});
  p.confirm(second.front().resource.uuid);
  std::vector<TransformRecord> records(4);
  std::vector<std::thread> threads;
  for (int i = 0; i < 4; ++i) {
    const auto uuid = i % 2 ? second.front().resource.uuid : rp.resource_uuid;
    threads.emplace_back([&, i, uuid] { records[i] = p.transform(uuid, ExportFormat::csv); });
  }
  for (auto& t : threads) t.join();
  std::set<std::string> uuids;
  for (const auto& r : records) {
    uuids.insert(r.uuid);
    EXPECT_TRUE(p.replay(r.uuid).matches());
  }
  EXPECT_EQ(uuids.size(), 4u);
  EXPECT_EQ(p.transforms().size(), 4u);
}

std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (e.is_regular_file()) out[fs::relative(e.path(), root).string()] = read_text_file(e.path());
  }
  return out;
}

TEST(Project, ReplayedCommandSequencesAreByteIdentical) {
  ::setenv("SOURCE_DATE_EPOCH", "1760000000", 1);
  RatesProject a;
  RatesProject b;
  a.project.transform(a.resource_uuid, ExportFormat::parquet);
  b.project.transform(b.resource_uuid, ExportFormat::parquet);
  ::unsetenv("SOURCE_DATE_EPOCH");
  const auto sa = snapshot(a.dir.path());
  const auto sb = snapshot(b.dir.path());
  EXPECT_GT(sa.size(), 5u);
  EXPECT_EQ(sa, sb);
}

TEST(ProjectProperty, TransformsReplayToTheSameDigest) {
  testing::Rng rng(301);
  SchemaModel dest;
  dest.name = "out";
  for (int f = 0; f < 3; ++f) dest.fields.push_back(FieldDefinition{.name = "out" + std::to_string(f)});
  std::optional<testing::TempDir> dir;
  std::optional<Project> p;
  for (int i = 0; i < 1000; ++i) {
    if (i % 50 == 0) {
      p.reset();
      dir.emplace("prop");
      p = Project::init(dir->path());
      dest = p->import_schema(dest);
    }
    const auto t = testing::random_table(rng, {1, 6, 1, 4, 0.2});
    const auto csv = testing::to_csv(t);
    const auto names = t.column_names();
    const auto r = p->ingest(bytes_of(csv), "case" + std::to_string(i) + ".csv", {}).front().resource;
    if (r.auto_assigned) {
      p->confirm(r.uuid);
    } else {
      auto cw = p->create_crosswalk(r.uuid, dest.uuid);
      std::vector<ParsedAction> actions;
      for (const auto& out : dest.field_names()) {
        actions.push_back(parse_script("RENAME > " + quote(out) + " < [" +
                                       quote(names[testing::uniform(rng, 0, names.size() - 1)]) + "]"));
      }
      cw = p->update_actions(cw.uuid, cw.version, actions);
      ASSERT_TRUE(p->validate(cw.uuid).ok());
    }
    const auto rec = p->transform(r.uuid, testing::coin(rng) ? ExportFormat::csv : ExportFormat::parquet);
    ASSERT_EQ(rec.output.row_count, p->resource(r.uuid).source.row_count);
    ASSERT_TRUE(p->replay(rec.uuid).matches()) << csv;
  }
}

}  // namespace
}  // namespace crosswalk
