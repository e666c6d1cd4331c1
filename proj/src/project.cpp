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

#include "crosswalk/project.hpp"

#include <algorithm>

#include "crosswalk/blake2b.hpp"
#include "crosswalk/clock.hpp"
#include "crosswalk/error.hpp"
#include "crosswalk/files.hpp"

namespace fs = std::filesystem;

namespace crosswalk {

namespace {

constexpr const char* kProjectFile = "project.json";

template <typename T>
T get(const Json& doc, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end()) throw SchemaError(std::string("missing key '") + key + "'");
  try {
    return it->get<T>();
  } catch (const nlohmann::json::exception&) {
    throw SchemaError(std::string("key '") + key + "' has the wrong type");
  }
}

std::optional<std::string> get_optional(const Json& doc, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) return std::nullopt;
  return get<std::string>(doc, key);
}

Json optional_text(const std::optional<std::string>& value) {
  return value ? Json(*value) : Json(nullptr);
}

std::string extension_for(ExportFormat format) {
  return format == ExportFormat::csv ? ".csv" : ".parquet";
}

Crosswalk replay_crosswalk(const TransformRecord& record) {
  Crosswalk cw;
  cw.uuid = record.crosswalk_uuid;
  cw.version = record.crosswalk_version;
  cw.status = CrosswalkStatus::validated;
  cw.source_fingerprint = fingerprint(record.source_schema);
  cw.dest_schema_uuid = record.dest_schema.uuid;
  for (const auto& script : record.actions) cw.actions.push_back(parse_script(script));
  return cw;
}

Table ingest_stored(std::span<const std::uint8_t> bytes, const std::string& source_path,
                    const IngestOptions& options, const std::string& digest) {
  if (hash_bytes(bytes) != digest) {
    throw ProbityError("stored copy of '" + source_path + "' no longer matches digest " + digest.substr(0, 16));
  }
  auto sheets = ingest_bytes(bytes, source_path, options, DateTime{});
  if (sheets.empty()) throw EmptyFileError("'" + source_path + "' holds no sheets");
  return std::move(sheets.front().table);
}

}  // namespace

std::string_view to_string(ResourceState state) noexcept {
  switch (state) {
    case ResourceState::imported: return "imported";
    case ResourceState::schema_ready: return "schema_ready";
    case ResourceState::crosswalk_draft: return "crosswalk_draft";
    case ResourceState::validated: return "validated";
    case ResourceState::transformed: return "transformed";
  }
  return "imported";
}

std::optional<ResourceState> parse_resource_state(std::string_view text) noexcept {
  for (auto s : {ResourceState::imported, ResourceState::schema_ready, ResourceState::crosswalk_draft,
                 ResourceState::validated, ResourceState::transformed}) {
    if (to_string(s) == text) return s;
  }
  return std::nullopt;
}

Json to_json(const Resource& r) {
  Json out;
  out["uuid"] = r.uuid;
  out["version"] = r.version;
  out["task"] = r.task;
  out["state"] = std::string(to_string(r.state));
  out["source"] = to_json(r.source);
  out["stored_file"] = r.stored_file;
  out["ingest"] = to_json(r.ingest);
  out["schema_uuid"] = r.schema_uuid;
  out["crosswalk_uuid"] = optional_text(r.crosswalk_uuid);
  out["auto_assigned"] = r.auto_assigned;
  out["transforms"] = r.transforms;
  out["created_at"] = to_json(r.created_at);
  out["updated_at"] = to_json(r.updated_at);
  return out;
}

Resource resource_from_json(const Json& doc) {
  Resource r;
  r.uuid = get<std::string>(doc, "uuid");
  r.version = get<std::int64_t>(doc, "version");
  r.task = get<std::string>(doc, "task");
  const auto state = parse_resource_state(get<std::string>(doc, "state"));
  if (!state) throw SchemaError("unknown resource state");
  r.state = *state;
  r.source = record_from_json(get<Json>(doc, "source"));
  r.stored_file = get<std::string>(doc, "stored_file");
  r.ingest = ingest_options_from_json(get<Json>(doc, "ingest"));
  r.schema_uuid = get<std::string>(doc, "schema_uuid");
  r.crosswalk_uuid = get_optional(doc, "crosswalk_uuid");
  r.auto_assigned = get<bool>(doc, "auto_assigned");
  r.transforms = get<std::vector<std::string>>(doc, "transforms");
  r.created_at = datetime_from_json(get<Json>(doc, "created_at"));
  r.updated_at = datetime_from_json(get<Json>(doc, "updated_at"));
  return r;
}

Json to_json(const TransformRecord& t) {
  Json out;
  out["uuid"] = t.uuid;
  out["resource_uuid"] = t.resource_uuid;
  out["crosswalk_uuid"] = t.crosswalk_uuid;
  out["crosswalk_version"] = t.crosswalk_version;
  out["created_at"] = to_json(t.created_at);
  Json input;
  input["digest"] = t.input_digest;
  input["stored_file"] = t.stored_input;
  input["ingest"] = to_json(t.ingest);
  out["input"] = std::move(input);
  out["source_schema"] = to_json(t.source_schema);
  out["dest_schema"] = to_json(t.dest_schema);
  out["actions"] = t.actions;
  out["format"] = std::string(to_string(t.format));
  out["output"] = to_json(t.output);
  out["stored_output"] = t.stored_output;
  Json audit = Json::array();
  for (const auto& a : t.audit) audit.push_back(to_json(a));
  out["audit"] = std::move(audit);
  out["warnings"] = t.warnings;
  out["coercion_failures"] = t.coercion_failures;
  out["violations"] = t.violations;
  return out;
}

TransformRecord transform_from_json(const Json& doc) {
  TransformRecord t;
  t.uuid = get<std::string>(doc, "uuid");
  t.resource_uuid = get<std::string>(doc, "resource_uuid");
  t.crosswalk_uuid = get<std::string>(doc, "crosswalk_uuid");
  t.crosswalk_version = get<std::int64_t>(doc, "crosswalk_version");
  t.created_at = datetime_from_json(get<Json>(doc, "created_at"));
  const Json input = get<Json>(doc, "input");
  t.input_digest = get<std::string>(input, "digest");
  t.stored_input = get<std::string>(input, "stored_file");
  t.ingest = ingest_options_from_json(get<Json>(input, "ingest"));
  t.source_schema = schema_from_json(get<Json>(doc, "source_schema"));
  t.dest_schema = schema_from_json(get<Json>(doc, "dest_schema"));
  t.actions = get<std::vector<std::string>>(doc, "actions");
  const auto format = parse_export_format(get<std::string>(doc, "format"));
  if (!format) throw SchemaError("unknown export format");
  t.format = *format;
  t.output = record_from_json(get<Json>(doc, "output"));
  t.stored_output = get<std::string>(doc, "stored_output");
  for (const auto& a : get<Json>(doc, "audit")) {
    AuditRecord rec;
    rec.step = get<std::size_t>(a, "step");
    rec.action = get<std::string>(a, "action");
    rec.rows_before = get<std::size_t>(a, "rows_before");
    rec.rows_after = get<std::size_t>(a, "rows_after");
    rec.warnings_emitted = get<std::size_t>(a, "warnings_emitted");
    rec.duration_ms = get<double>(a, "duration_ms");
    t.audit.push_back(std::move(rec));
  }
  t.warnings = get<std::vector<std::string>>(doc, "warnings");
  t.coercion_failures = get<std::size_t>(doc, "coercion_failures");
  t.violations = get<std::size_t>(doc, "violations");
  return t;
}

// --- Project ----------------------------------------------------------------

struct Project::Locks {
  std::recursive_mutex mutex;
  std::mutex keyed_guard;
  std::map<std::string, std::shared_ptr<std::mutex>> keyed;
};

Project::Project(fs::path root) : root_(std::move(root)), locks_(std::make_shared<Locks>()) {}

std::shared_ptr<std::mutex> Project::resource_lock(const std::string& uuid) const {
  std::lock_guard guard(locks_->keyed_guard);
  auto& slot = locks_->keyed[uuid];
  if (!slot) slot = std::make_shared<std::mutex>();
  return slot;
}

Project Project::init(const fs::path& root, std::string name) {
  Project p(root);
  std::error_code ec;
  for (const char* dir : {"schemas", "crosswalks", "sources", "transforms"}) {
    fs::create_directories(root / dir, ec);
    if (ec) throw IoError("cannot create '" + (root / dir).string() + "': " + ec.message());
  }
  if (!fs::exists(root / kProjectFile)) {
    ProjectInfo info;
    info.uuid = uuid_from_seed("project\n" + name);
    info.name = std::move(name);
    info.created_at = info.updated_at = utc_now();
    p.write_doc(root / kProjectFile, [&] {
      Json doc;
      doc["uuid"] = info.uuid;
      doc["name"] = info.name;
      doc["version"] = info.version;
      doc["created_at"] = to_json(info.created_at);
      doc["updated_at"] = to_json(info.updated_at);
      doc["tasks"] = Json::array();
      doc["schemas"] = Json::array();
      doc["crosswalks"] = Json::array();
      doc["transforms"] = Json::array();
      doc["current_resource"] = nullptr;
      doc["current_crosswalk"] = nullptr;
      return doc;
    }());
  }
  return p;
}

Project Project::open(const fs::path& root) {
  if (!fs::exists(root / kProjectFile)) throw NotFoundError("no project at '" + root.string() + "'");
  return Project(root);
}

fs::path Project::doc_path(const char* dir, const std::string& uuid) const {
  // identifiers arrive from HTTP paths and argv
  if (uuid.empty() || uuid.find_first_of("/\\.") != std::string::npos) {
    throw NotFoundError(std::string(dir) + " '" + uuid + "' not found");
  }
  return root_ / dir / (uuid + ".json");
}

Json Project::read_doc(const fs::path& path, const std::string& what) const {
  if (!fs::exists(path)) throw NotFoundError(what + " not found");
  return parse_json(read_text_file(path));
}

void Project::write_doc(const fs::path& path, const Json& doc) const { write_file_atomic(path, dump(doc)); }

ProjectInfo Project::load_info() const {
  const Json doc = read_doc(root_ / kProjectFile, "project");
  ProjectInfo info;
  info.uuid = get<std::string>(doc, "uuid");
  info.name = get<std::string>(doc, "name");
  info.version = get<std::int64_t>(doc, "version");
  info.created_at = datetime_from_json(get<Json>(doc, "created_at"));
  info.updated_at = datetime_from_json(get<Json>(doc, "updated_at"));
  for (const auto& t : get<Json>(doc, "tasks")) {
    info.tasks.push_back({get<std::string>(t, "uuid"), get<std::string>(t, "name"),
                          get<std::vector<std::string>>(t, "resources")});
  }
  info.schemas = get<std::vector<std::string>>(doc, "schemas");
  info.crosswalks = get<std::vector<std::string>>(doc, "crosswalks");
  info.transforms = get<std::vector<std::string>>(doc, "transforms");
  info.current_resource = get_optional(doc, "current_resource");
  info.current_crosswalk = get_optional(doc, "current_crosswalk");
  return info;
}

void Project::store_info(const ProjectInfo& info) const {
  Json doc;
  doc["uuid"] = info.uuid;
  doc["name"] = info.name;
  doc["version"] = info.version;
  doc["created_at"] = to_json(info.created_at);
  doc["updated_at"] = to_json(info.updated_at);
  Json tasks = Json::array();
  for (const auto& t : info.tasks) {
    Json task;
    task["uuid"] = t.uuid;
    task["name"] = t.name;
    task["resources"] = t.resources;
    tasks.push_back(std::move(task));
  }
  doc["tasks"] = std::move(tasks);
  doc["schemas"] = info.schemas;
  doc["crosswalks"] = info.crosswalks;
  doc["transforms"] = info.transforms;
  doc["current_resource"] = optional_text(info.current_resource);
  doc["current_crosswalk"] = optional_text(info.current_crosswalk);
  write_doc(root_ / kProjectFile, doc);
}

void Project::store(const Resource& r) const { write_doc(doc_path("sources", r.uuid), to_json(r)); }
void Project::store(const SchemaModel& s) const { write_doc(doc_path("schemas", s.uuid), to_json(s)); }
void Project::store(const Crosswalk& c) const { write_doc(doc_path("crosswalks", c.uuid), to_json(c)); }
void Project::store(const TransformRecord& t) const { write_doc(doc_path("transforms", t.uuid), to_json(t)); }

ProjectInfo Project::info() const {
  std::lock_guard lock(locks_->mutex);
  return load_info();
}

void Project::set_current(std::optional<std::string> resource, std::optional<std::string> crosswalk) {
  std::lock_guard lock(locks_->mutex);
  ProjectInfo info = load_info();
  if (resource) info.current_resource = std::move(resource);
  if (crosswalk) info.current_crosswalk = std::move(crosswalk);
  ++info.version;
  info.updated_at = utc_now();
  store_info(info);
}

// --- resources ----------------------------------------------------------------

std::vector<IngestOutcome> Project::ingest(std::span<const std::uint8_t> content, const std::string& source_path,
                                           const IngestOptions& options, const std::string& task) {
  std::lock_guard lock(locks_->mutex);
  const DateTime now = utc_now();
  auto sheets = ingest_bytes(content, source_path, options, now);
  ProjectInfo info = load_info();

  const std::string digest = hash_bytes(content);
  std::string ext = fs::path(source_path).extension().string();
  if (ext.empty() || ext.find_first_of("/\\") != std::string::npos) {
    ext = "." + std::string(to_string(sheets.front().record.format));
  }
  const std::string stored_file = "sources/files/" + digest + ext;
  if (!fs::exists(root_ / stored_file)) {
    write_file_atomic(root_ / stored_file,
                      std::string_view(reinterpret_cast<const char*>(content.data()), content.size()));
  }

  auto task_it = std::find_if(info.tasks.begin(), info.tasks.end(), [&](const Task& t) { return t.name == task; });
  if (task_it == info.tasks.end()) {
    info.tasks.push_back({uuid_from_seed("task\n" + task), task, {}});
    task_it = std::prev(info.tasks.end());
  }
  std::size_t existing = 0;
  for (const auto& t : info.tasks) existing += t.resources.size();

  const auto library = crosswalks();
  std::vector<IngestOutcome> out;
  for (auto& sheet : sheets) {
    Resource r;
    r.uuid = uuid_from_seed("resource\n" + digest + "\n" + sheet.record.sheet_name.value_or("") + "\n" +
                            std::to_string(existing++));
    r.task = task_it->name;
    r.source = sheet.record;
    r.stored_file = stored_file;
    r.ingest = options;
    if (sheet.record.sheet_name) r.ingest.sheet = sheet.record.sheet_name;
    r.created_at = r.updated_at = now;

    std::string schema_name = fs::path(source_path).stem().string();
    if (sheet.record.sheet_name) schema_name += ":" + *sheet.record.sheet_name;
    SchemaModel schema = derive_schema(sheet.table, schema_name, digest);
    schema.uuid = uuid_from_seed("schema\n" + r.uuid);
    r.schema_uuid = schema.uuid;
    r.state = ResourceState::schema_ready;

    IngestOutcome outcome;
    const std::string fp = fingerprint(schema);
    const Crosswalk* newest = nullptr;
    for (const auto& cw : library) {
      if (cw.status == CrosswalkStatus::validated && cw.source_fingerprint == fp &&
          (!newest || cw.updated_at >= newest->updated_at)) {
        newest = &cw;
      }
    }
    if (newest) {
      if (auto match = match_existing(fp, newest->dest_schema_uuid, library)) {
        r.crosswalk_uuid = match->crosswalk.uuid;
        r.auto_assigned = match->auto_assigned;
        r.state = ResourceState::validated;
        outcome.matched_crosswalk = match->crosswalk.uuid;
      }
    }
    store(schema);
    store(r);
    info.schemas.push_back(schema.uuid);
    task_it->resources.push_back(r.uuid);
    outcome.resource = std::move(r);
    outcome.schema = std::move(schema);
    out.push_back(std::move(outcome));
  }
  info.current_resource = out.front().resource.uuid;
  info.current_crosswalk = out.front().matched_crosswalk;
  ++info.version;
  info.updated_at = now;
  store_info(info);
  return out;
}

std::vector<IngestOutcome> Project::ingest_file(const fs::path& path, const IngestOptions& options,
                                                const std::string& task) {
  if (!fs::is_regular_file(path)) throw IoError("cannot read '" + path.string() + "': no such file");
  IngestOptions effective = options;
  if (!effective.format) effective.format = format_from_extension(path);
  if (!effective.format) effective.format = SourceFormat::csv;
  const auto bytes = read_file(path);
  return ingest(bytes, path.string(), effective, task);
}

std::vector<Resource> Project::resources() const {
  std::lock_guard lock(locks_->mutex);
  std::vector<Resource> out;
  for (const auto& t : load_info().tasks) {
    for (const auto& id : t.resources) out.push_back(resource(id));
  }
  return out;
}

Resource Project::resource(const std::string& uuid) const {
  return resource_from_json(read_doc(doc_path("sources", uuid), "resource '" + uuid + "'"));
}

Table Project::load_table(const Resource& r) const {
  const auto bytes = read_file(root_ / r.stored_file);
  return ingest_stored(bytes, r.source.source_path, r.ingest, r.source.digest);
}

// --- schemas ------------------------------------------------------------------

std::vector<SchemaModel> Project::schemas() const {
  std::lock_guard lock(locks_->mutex);
  std::vector<SchemaModel> out;
  for (const auto& id : load_info().schemas) out.push_back(schema(id));
  return out;
}

SchemaModel Project::schema(const std::string& uuid) const {
  return schema_from_json(read_doc(doc_path("schemas", uuid), "schema '" + uuid + "'"));
}

SchemaModel Project::import_schema(SchemaModel s) {
  std::lock_guard lock(locks_->mutex);
  s.check();
  if (s.uuid.empty()) s.uuid = uuid_from_seed("dest-schema\n" + to_json(s).dump());
  ProjectInfo info = load_info();
  if (std::find(info.schemas.begin(), info.schemas.end(), s.uuid) != info.schemas.end()) {
    const SchemaModel existing = schema(s.uuid);
    if (to_json(existing) == to_json(s)) return existing;
    throw VersionConflictError(s.uuid, s.version, existing.version);
  }
  doc_path("schemas", s.uuid);
  store(s);
  info.schemas.push_back(s.uuid);
  ++info.version;
  info.updated_at = utc_now();
  store_info(info);
  return s;
}

SchemaModel Project::save_schema(const SchemaModel& proposed, std::int64_t expected_version) {
  std::lock_guard lock(locks_->mutex);
  const SchemaModel current = schema(proposed.uuid);
  SchemaModel next = proposed;
  next.version = expected_version + 1;
  if (current.version != expected_version) {
    if (current.version == expected_version + 1 && current == next) return current;
    throw VersionConflictError(proposed.uuid, expected_version, current.version);
  }
  next.check();

  const auto all = resources();
  for (const auto& r : all) {
    if (r.schema_uuid == next.uuid && next.field_names() != current.field_names()) {
      throw SchemaError("field names of a derived schema must match the source columns");
    }
  }
  store(next);

  const std::string fp = fingerprint(next);
  const DateTime now = utc_now();
  for (auto cw : crosswalks()) {
    bool bound = false;
    for (const auto& r : all) bound |= r.schema_uuid == next.uuid && r.crosswalk_uuid == cw.uuid;
    const bool rebind = bound && cw.source_fingerprint != fp;
    const bool dest_edit = cw.dest_schema_uuid == next.uuid;
    if (!rebind && !dest_edit) continue;
    if (rebind) cw.source_fingerprint = fp;
    cw.status = CrosswalkStatus::draft;
    cw.updated_at = now;
    store(cw);
    for (auto r : all) {
      if (r.crosswalk_uuid == cw.uuid && r.state >= ResourceState::validated) {
        r.state = ResourceState::crosswalk_draft;
        ++r.version;
        r.updated_at = now;
        store(r);
      }
    }
  }
  return next;
}

SchemaModel Project::rederive_schema(const std::string& resource_uuid) {
  std::lock_guard lock(locks_->mutex);
  const Resource r = resource(resource_uuid);
  const SchemaModel current = schema(r.schema_uuid);
  SchemaModel fresh = derive_schema(load_table(r), current.name, r.source.digest);
  fresh.uuid = current.uuid;
  fresh.description = current.description;
  return save_schema(fresh, current.version);
}

// --- crosswalks ---------------------------------------------------------------

std::vector<Crosswalk> Project::crosswalks() const {
  std::lock_guard lock(locks_->mutex);
  std::vector<Crosswalk> out;
  for (const auto& id : load_info().crosswalks) out.push_back(crosswalk(id));
  return out;
}

Crosswalk Project::crosswalk(const std::string& uuid) const {
  return crosswalk_from_json(read_doc(doc_path("crosswalks", uuid), "crosswalk '" + uuid + "'"));
}

Crosswalk Project::create_crosswalk(const std::string& resource_uuid, const std::string& dest_schema_uuid,
                                    std::string name) {
  std::lock_guard lock(locks_->mutex);
  Resource r = resource(resource_uuid);
  const SchemaModel dest = schema(dest_schema_uuid);
  const SchemaModel source = schema(r.schema_uuid);
  ProjectInfo info = load_info();

  Crosswalk cw;
  cw.uuid = uuid_from_seed("crosswalk\n" + r.uuid + "\n" + dest.uuid + "\n" + std::to_string(info.crosswalks.size()));
  cw.name = name.empty() ? source.name + " to " + dest.name : std::move(name);
  cw.source_fingerprint = fingerprint(source);
  cw.dest_schema_uuid = dest.uuid;
  cw.created_at = cw.updated_at = utc_now();
  store(cw);

  r.crosswalk_uuid = cw.uuid;
  r.auto_assigned = false;
  r.state = ResourceState::crosswalk_draft;
  ++r.version;
  r.updated_at = cw.updated_at;
  store(r);

  info.crosswalks.push_back(cw.uuid);
  info.current_resource = r.uuid;
  info.current_crosswalk = cw.uuid;
  ++info.version;
  info.updated_at = cw.updated_at;
  store_info(info);
  return cw;
}

Crosswalk Project::update_actions(const std::string& uuid, std::int64_t expected_version,
                                  std::vector<ParsedAction> actions) {
  std::lock_guard lock(locks_->mutex);
  Crosswalk cw = crosswalk(uuid);
  auto same_actions = [&] {
    if (cw.actions.size() != actions.size()) return false;
    for (std::size_t i = 0; i < actions.size(); ++i) {
      if (!cw.actions[i].structurally_equal(actions[i])) return false;
    }
    return true;
  };
  if (cw.version != expected_version) {
    if (cw.version == expected_version + 1 && same_actions()) return cw;
    throw VersionConflictError(uuid, expected_version, cw.version);
  }
  cw.actions = std::move(actions);
  cw.status = CrosswalkStatus::draft;
  cw.version = expected_version + 1;
  cw.updated_at = utc_now();
  store(cw);
  for (auto r : resources()) {
    if (r.crosswalk_uuid == uuid && r.state >= ResourceState::validated) {
      r.state = ResourceState::crosswalk_draft;
      ++r.version;
      r.updated_at = cw.updated_at;
      store(r);
    }
  }
  return crosswalk(uuid);
}

std::optional<Resource> Project::resource_for(const std::string& crosswalk_uuid) const {
  for (auto& r : resources()) {
    if (r.crosswalk_uuid == crosswalk_uuid) return r;
  }
  return std::nullopt;
}

ValidationOutcome Project::validate(const std::string& crosswalk_uuid) {
  std::lock_guard lock(locks_->mutex);
  Crosswalk cw = crosswalk(crosswalk_uuid);
  const auto r = resource_for(crosswalk_uuid);
  if (!r) throw StateError("crosswalk '" + crosswalk_uuid + "' is not assigned to any resource");
  const auto outcome = validate_crosswalk(cw, schema(r->schema_uuid), schema(cw.dest_schema_uuid));
  const auto status = outcome.ok() ? CrosswalkStatus::validated : CrosswalkStatus::draft;
  if (status != cw.status) {
    cw.status = status;
    cw.updated_at = utc_now();
    store(cw);
  }
  for (auto res : resources()) {
    if (res.crosswalk_uuid != crosswalk_uuid) continue;
    const auto state = outcome.ok() ? std::max(res.state, ResourceState::validated) : ResourceState::crosswalk_draft;
    if (state == res.state) continue;
    res.state = state;
    ++res.version;
    res.updated_at = utc_now();
    store(res);
  }
  return outcome;
}

Resource Project::confirm(const std::string& resource_uuid) {
  std::lock_guard lock(locks_->mutex);
  Resource r = resource(resource_uuid);
  if (!r.crosswalk_uuid) throw StateError("resource '" + resource_uuid + "' has no crosswalk to confirm");
  if (r.auto_assigned) {
    r.auto_assigned = false;
    ++r.version;
    r.updated_at = utc_now();
    store(r);
    set_current(r.uuid, *r.crosswalk_uuid);
  }
  return r;
}

std::optional<MatchResult> Project::match(const std::string& resource_uuid) const {
  std::lock_guard lock(locks_->mutex);
  const Resource r = resource(resource_uuid);
  const std::string fp = fingerprint(schema(r.schema_uuid));
  const auto library = crosswalks();
  const Crosswalk* newest = nullptr;
  for (const auto& cw : library) {
    if (cw.status == CrosswalkStatus::validated && cw.source_fingerprint == fp &&
        (!newest || cw.updated_at >= newest->updated_at)) {
      newest = &cw;
    }
  }
  if (!newest) return std::nullopt;
  return match_existing(fp, newest->dest_schema_uuid, library);
}

// --- transforms ---------------------------------------------------------------

std::string Project::next_transform_uuid(const std::string& resource_uuid) const {
  std::lock_guard lock(locks_->mutex);
  const Resource r = resource(resource_uuid);
  return uuid_from_seed("transform\n" + r.uuid + "\n" + std::to_string(r.transforms.size()));
}

Crosswalk Project::runnable_crosswalk(const Resource& r) const {
  if (!r.crosswalk_uuid) throw StateError("resource '" + r.uuid + "' has no crosswalk");
  if (r.auto_assigned) {
    throw StateError("crosswalk '" + *r.crosswalk_uuid + "' was auto-assigned and awaits curator confirmation");
  }
  Crosswalk cw = crosswalk(*r.crosswalk_uuid);
  if (cw.status != CrosswalkStatus::validated) throw StateError("crosswalk '" + cw.uuid + "' is not validated");
  return cw;
}

TransformRecord Project::transform(const std::string& resource_uuid, ExportFormat format,
                                   const std::optional<fs::path>& out, const ExecOptions& exec) {
  const auto serial = resource_lock(resource_uuid);
  std::lock_guard per_resource(*serial);

  TransformRecord rec;
  Crosswalk cw;
  Table table;
  {
    std::lock_guard lock(locks_->mutex);
    const Resource r = resource(resource_uuid);
    cw = runnable_crosswalk(r);
    rec.uuid = next_transform_uuid(resource_uuid);
    rec.resource_uuid = r.uuid;
    rec.crosswalk_uuid = cw.uuid;
    rec.crosswalk_version = cw.version;
    rec.input_digest = r.source.digest;
    rec.stored_input = r.stored_file;
    rec.ingest = r.ingest;
    rec.source_schema = schema(r.schema_uuid);
    rec.dest_schema = schema(cw.dest_schema_uuid);
    rec.actions = cw.scripts();
    rec.format = format;
    table = load_table(r);
  }

  ApplyOptions options;
  options.exec = exec;
  const TransformResult result = apply_crosswalk(table, cw, rec.source_schema, rec.dest_schema, options);
  const std::string content = render_table(result.table, format, rec.dest_schema);

  rec.stored_output = "transforms/" + rec.uuid + extension_for(format);
  write_file_atomic(root_ / rec.stored_output, content);
  if (out) write_file_atomic(*out, content);
  rec.created_at = utc_now();
  rec.output.source_path = out ? out->string() : rec.stored_output;
  rec.output.format = format == ExportFormat::csv ? SourceFormat::csv : SourceFormat::parquet;
  rec.output.digest = hash_bytes(content);
  rec.output.imported_at = rec.created_at;
  rec.output.row_count = result.table.row_count();
  rec.output.column_count = result.table.column_count();
  rec.audit = result.audit;
  rec.warnings = result.warnings;
  rec.coercion_failures = result.source_coercion.failures.size() + result.coercion_report.failures.size();
  rec.violations = result.validation_report.violations.size();

  std::lock_guard lock(locks_->mutex);
  store(rec);
  Resource r = resource(resource_uuid);
  r.transforms.push_back(rec.uuid);
  r.state = ResourceState::transformed;
  ++r.version;
  r.updated_at = rec.created_at;
  store(r);

  ProjectInfo info = load_info();
  info.transforms.push_back(rec.uuid);
  ++info.version;
  info.updated_at = rec.created_at;
  store_info(info);
  return rec;
}

std::vector<TransformRecord> Project::transforms() const {
  std::lock_guard lock(locks_->mutex);
  std::vector<TransformRecord> out;
  for (const auto& id : load_info().transforms) out.push_back(transform_record(id));
  return out;
}

TransformRecord Project::transform_record(const std::string& uuid) const {
  return transform_from_json(read_doc(doc_path("transforms", uuid), "transform '" + uuid + "'"));
}

fs::path Project::output_path(const TransformRecord& record) const { return root_ / record.stored_output; }

ReplayOutcome Project::replay(const std::string& transform_uuid, const ExecOptions& exec) const {
  ReplayOutcome out;
  out.record = transform_record(transform_uuid);
  out.replayed_digest = hash_bytes(replay_output(root_, out.record, exec));
  const fs::path stored = output_path(out.record);
  out.stored_output_ok = fs::exists(stored) && hash_file(stored) == out.record.output.digest;
  return out;
}

std::string replay_output(const fs::path& root, const TransformRecord& record, const ExecOptions& exec) {
  const auto bytes = read_file(root / record.stored_input);
  const Table table = ingest_stored(bytes, record.stored_input, record.ingest, record.input_digest);
  ApplyOptions options;
  options.exec = exec;
  const auto result =
      apply_crosswalk(table, replay_crosswalk(record), record.source_schema, record.dest_schema, options);
  return render_table(result.table, record.format, record.dest_schema);
}

}  // namespace crosswalk
