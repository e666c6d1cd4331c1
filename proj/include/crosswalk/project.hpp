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
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "crosswalk/crosswalk.hpp"
#include "crosswalk/json_io.hpp"

namespace crosswalk {

enum class ResourceState { imported, schema_ready, crosswalk_draft, validated, transformed };

std::string_view to_string(ResourceState state) noexcept;
std::optional<ResourceState> parse_resource_state(std::string_view text) noexcept;

/// One imported sheet with its derived schema and optional crosswalk.
struct Resource {
  std::string uuid;
  std::int64_t version = 1;
  std::string task;
  DataSourceRecord source;
  /// Copy of the source file inside the project, relative to its root.
  std::string stored_file;
  IngestOptions ingest;
  std::string schema_uuid;
  std::optional<std::string> crosswalk_uuid;
  /// Assigned by match_existing and not yet confirmed by the curator.
  bool auto_assigned = false;
  ResourceState state = ResourceState::imported;
  std::vector<std::string> transforms;
  DateTime created_at;
  DateTime updated_at;
};

/// Everything needed to replay a transform and check its output digest.
struct TransformRecord {
  std::string uuid;
  std::string resource_uuid;
  std::string crosswalk_uuid;
  std::int64_t crosswalk_version = 0;
  std::string input_digest;
  std::string stored_input;
  IngestOptions ingest;
  /// Schemas and actions exactly as used, so later edits do not affect replay.
  SchemaModel source_schema;
  SchemaModel dest_schema;
  std::vector<std::string> actions;
  ExportFormat format = ExportFormat::csv;
  DataSourceRecord output;
  std::string stored_output;
  std::vector<AuditRecord> audit;
  std::vector<std::string> warnings;
  std::size_t coercion_failures = 0;
  std::size_t violations = 0;
  DateTime created_at;
};

Json to_json(const Resource& resource);
Resource resource_from_json(const Json& doc);
Json to_json(const TransformRecord& record);
TransformRecord transform_from_json(const Json& doc);

struct Task {
  std::string uuid;
  std::string name;
  std::vector<std::string> resources;
};

struct ProjectInfo {
  std::string uuid;
  std::string name;
  std::int64_t version = 1;
  DateTime created_at;
  DateTime updated_at;
  std::vector<Task> tasks;
  /// Identifiers in insertion order.
  std::vector<std::string> schemas;
  std::vector<std::string> crosswalks;
  std::vector<std::string> transforms;
  /// CLI context: the resource and crosswalk commands default to.
  std::optional<std::string> current_resource;
  std::optional<std::string> current_crosswalk;
};

struct IngestOutcome {
  Resource resource;
  SchemaModel schema;
  /// Set when an existing validated crosswalk was auto-assigned.
  std::optional<std::string> matched_crosswalk;
};

struct ReplayOutcome {
  TransformRecord record;
  std::string replayed_digest;
  bool stored_output_ok = false;
  bool matches() const noexcept { return stored_output_ok && replayed_digest == record.output.digest; }
};

/// A project directory: project.json plus schemas/, crosswalks/, sources/
/// and transforms/. Identifiers are derived from content and insertion
/// order, and timestamps from utc_now(), so a command sequence replayed on
/// the same inputs with SOURCE_DATE_EPOCH set yields identical files.
/// Writes are atomic and serialized within the process; versioned
/// documents reject stale writes with VersionConflictError. Copies of a
/// Project share their locks. Transforms of distinct resources run
/// concurrently; transforms of one resource queue behind each other.
class Project {
 public:
  /// Creates the layout if missing.
  static Project init(const std::filesystem::path& root, std::string name = "project");
  /// Throws NotFoundError when `root` holds no project.json.
  static Project open(const std::filesystem::path& root);

  const std::filesystem::path& root() const noexcept { return root_; }
  ProjectInfo info() const;
  void set_current(std::optional<std::string> resource, std::optional<std::string> crosswalk);

  // --- resources -----------------------------------------------------------

  /// Imports every sheet of the file, derives schemas and auto-assigns a
  /// matching validated crosswalk if one exists.
  std::vector<IngestOutcome> ingest(std::span<const std::uint8_t> content, const std::string& source_path,
                                    const IngestOptions& options, const std::string& task = "default");
  std::vector<IngestOutcome> ingest_file(const std::filesystem::path& path, const IngestOptions& options,
                                         const std::string& task = "default");
  std::vector<Resource> resources() const;
  Resource resource(const std::string& uuid) const;
  /// Re-reads the stored copy after checking its digest (ProbityError).
  Table load_table(const Resource& resource) const;

  // --- schemas -------------------------------------------------------------

  std::vector<SchemaModel> schemas() const;
  SchemaModel schema(const std::string& uuid) const;
  /// Adds a destination schema; a missing uuid is derived from its content.
  SchemaModel import_schema(SchemaModel schema);
  /// Replaces a schema whose stored version equals schema.version - 1 or,
  /// for an identical retry, schema.version. Crosswalks bound to a
  /// resource using it are rebound to the new fingerprint and reset to draft.
  SchemaModel save_schema(const SchemaModel& schema, std::int64_t expected_version);
  /// Fresh minimum transformable schema for the resource's data.
  SchemaModel rederive_schema(const std::string& resource_uuid);

  // --- crosswalks ----------------------------------------------------------

  std::vector<Crosswalk> crosswalks() const;
  Crosswalk crosswalk(const std::string& uuid) const;
  /// New draft bound to the resource's schema and assigned to it.
  Crosswalk create_crosswalk(const std::string& resource_uuid, const std::string& dest_schema_uuid,
                             std::string name = "");
  /// Replaces the action list; status returns to draft. A retry of an
  /// already-applied write with identical actions succeeds unchanged.
  Crosswalk update_actions(const std::string& uuid, std::int64_t expected_version,
                           std::vector<ParsedAction> actions);
  /// Validates against the crosswalk's resource schema and the destination.
  /// On success the crosswalk becomes validated.
  ValidationOutcome validate(const std::string& crosswalk_uuid);
  /// First resource the crosswalk is assigned to.
  std::optional<Resource> resource_for(const std::string& crosswalk_uuid) const;
  /// Clears the auto-assigned flag on the resource.
  Resource confirm(const std::string& resource_uuid);
  std::optional<MatchResult> match(const std::string& resource_uuid) const;
  /// The resource's crosswalk if it may be run. Throws StateError when none
  /// is assigned, it is a draft, or an auto-assignment is unconfirmed.
  Crosswalk runnable_crosswalk(const Resource& resource) const;

  // --- transforms ----------------------------------------------------------

  /// Deterministic identifier the next transform of this resource gets.
  std::string next_transform_uuid(const std::string& resource_uuid) const;
  /// Runs the assigned validated crosswalk, stores the output and its
  /// record, and optionally copies the output to `out`.
  TransformRecord transform(const std::string& resource_uuid, ExportFormat format,
                            const std::optional<std::filesystem::path>& out = std::nullopt,
                            const ExecOptions& exec = {});
  std::vector<TransformRecord> transforms() const;
  TransformRecord transform_record(const std::string& uuid) const;
  std::filesystem::path output_path(const TransformRecord& record) const;
  /// Re-ingests the stored input, re-runs the recorded crosswalk and
  /// compares output digests. Throws ProbityError when the stored input no
  /// longer matches its digest.
  ReplayOutcome replay(const std::string& transform_uuid, const ExecOptions& exec = {}) const;

 private:
  explicit Project(std::filesystem::path root);

  std::filesystem::path doc_path(const char* dir, const std::string& uuid) const;
  Json read_doc(const std::filesystem::path& path, const std::string& what) const;
  void write_doc(const std::filesystem::path& path, const Json& doc) const;
  ProjectInfo load_info() const;
  void store_info(const ProjectInfo& info) const;
  void store(const Resource& r) const;
  void store(const SchemaModel& s) const;
  void store(const Crosswalk& c) const;
  void store(const TransformRecord& t) const;

  struct Locks;
  std::shared_ptr<std::mutex> resource_lock(const std::string& uuid) const;

  std::filesystem::path root_;
  std::shared_ptr<Locks> locks_;
};

/// Runs a transform record's crosswalk on its stored input and returns the
/// rendered output, without touching the project.
std::string replay_output(const std::filesystem::path& root, const TransformRecord& record,
                          const ExecOptions& exec = {});

}  // namespace crosswalk
