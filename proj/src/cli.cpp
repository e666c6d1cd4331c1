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

#include "crosswalk/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "crosswalk/blake2b.hpp"
#include "crosswalk/error.hpp"
#include "crosswalk/files.hpp"
#include "crosswalk/project.hpp"
#include "crosswalk/service.hpp"

namespace fs = std::filesystem;

namespace crosswalk {

int exit_code_for(const std::exception& e) noexcept {
  if (dynamic_cast<const ProbityError*>(&e)) return kExitProbity;
  if (dynamic_cast<const PreconditionError*>(&e) || dynamic_cast<const NotFoundError*>(&e)) return kExitUsage;
  if (dynamic_cast<const UnknownFieldError*>(&e) || dynamic_cast<const UnknownColumnError*>(&e) ||
      dynamic_cast<const StateError*>(&e) || dynamic_cast<const FingerprintMismatchError*>(&e) ||
      dynamic_cast<const VersionConflictError*>(&e)) {
    return kExitValidation;
  }
  return kExitIo;
}

namespace {

struct Options {
  std::string project;
  bool json = false;

  // ingest
  std::string file;
  std::string sheet;
  bool no_header = false;
  int header_row = -1;
  std::string delimiter = ",";
  std::string encoding = "UTF-8";
  std::string prefix = "column";
  std::string citation;
  std::string format;
  std::string task = "default";
  std::vector<std::string> field_names;

  // shared selectors
  std::string resource;
  std::string schema;
  std::string crosswalk;

  std::string field;
  std::string type;
  std::string mode;
  std::string name;
  std::string source;
  std::string dest;
  std::vector<std::string> scripts;
  std::string script_file;
  std::string out;
  std::string export_format = "csv";
  unsigned threads = 1;
  std::string target;

  std::string host = "127.0.0.1";
  int port = 8080;
  unsigned workers = 2;
};

/// Emits either a JSON document or human-readable lines.
class Printer {
 public:
  Printer(std::ostream& out, bool json) : out_(out), json_(json) {}

  bool json() const { return json_; }
  void doc(const Json& value) const {
    if (json_) out_ << value.dump() << '\n';
  }
  std::ostream& text() const { return json_ ? null_ : out_; }

 private:
  std::ostream& out_;
  bool json_;
  mutable std::ostringstream null_;
};

template <typename T, typename IdOf>
std::string resolve(const std::string& ref, const std::vector<T>& items, IdOf id_of, const std::string& what) {
  std::vector<std::string> hits;
  for (const auto& item : items) {
    const std::string id = id_of(item);
    if (id == ref) return id;
    if (ref.size() >= 4 && id.compare(0, ref.size(), ref) == 0) hits.push_back(id);
  }
  if (hits.size() == 1) return hits.front();
  if (hits.empty()) throw NotFoundError(what + " '" + ref + "' not found");
  throw PreconditionError(what + " prefix '" + ref + "' is ambiguous");
}

std::string resolve_resource(const Project& p, const std::string& ref) {
  if (ref.empty()) {
    auto current = p.info().current_resource;
    if (!current) throw PreconditionError("no resource selected; pass --resource or ingest a file");
    return *current;
  }
  return resolve(ref, p.resources(), [](const Resource& r) { return r.uuid; }, "resource");
}

std::string resolve_schema(Project& p, const std::string& ref) {
  if (fs::is_regular_file(ref)) return p.import_schema(schema_from_json(parse_json(read_text_file(ref)))).uuid;
  const auto all = p.schemas();
  std::vector<std::string> named;
  for (const auto& s : all)
    if (s.name == ref) named.push_back(s.uuid);
  if (named.size() == 1) return named.front();
  return resolve(ref, all, [](const SchemaModel& s) { return s.uuid; }, "schema");
}

std::string resolve_crosswalk(const Project& p, const std::string& ref) {
  if (!ref.empty()) return resolve(ref, p.crosswalks(), [](const Crosswalk& c) { return c.uuid; }, "crosswalk");
  const auto info = p.info();
  if (info.current_resource) {
    const auto r = p.resource(*info.current_resource);
    if (r.crosswalk_uuid) return *r.crosswalk_uuid;
  }
  if (info.current_crosswalk) return *info.current_crosswalk;
  throw PreconditionError("no crosswalk selected; pass --crosswalk or run 'crosswalk new'");
}

std::vector<std::string> read_script_file(const std::string& path) {
  std::string text;
  if (path == "-") {
    std::ostringstream buffer;
    buffer << std::cin.rdbuf();
    text = buffer.str();
  } else {
    text = read_text_file(path);
  }
  std::vector<std::string> scripts;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    scripts.push_back(line);
  }
  return scripts;
}

Project open_project(const Options& o) {
  if (o.project.empty()) throw PreconditionError("no project directory; pass --project or set CROSSWALK_PROJECT");
  return Project::open(o.project);
}

void print_schema(const Printer& pr, const SchemaModel& s) {
  pr.doc(to_json(s));
  auto& out = pr.text();
  out << "schema " << s.uuid << " '" << s.name << "' version " << s.version << '\n';
  for (const auto& f : s.fields) {
    out << "  " << f.name << ": " << to_string(f.type);
    if (f.constraints.required) out << " required";
    if (f.constraints.categories) {
      out << " [";
      for (std::size_t i = 0; i < f.constraints.categories->size(); ++i) {
        out << (i ? ", " : "") << (*f.constraints.categories)[i].name;
      }
      out << "]";
    }
    out << '\n';
  }
}

void print_issues(std::ostream& out, const char* label, const std::vector<ActionIssue>& issues) {
  for (const auto& i : issues) {
    out << label << ": ";
    if (!i.script.empty()) out << "step " << i.step << " (" << i.script << "): ";
    out << i.message << '\n';
  }
}

int cmd_init(const Options& o, const Printer& pr) {
  if (o.project.empty()) throw PreconditionError("no project directory; pass --project or set CROSSWALK_PROJECT");
  const auto p = Project::init(o.project, o.name.empty() ? fs::path(o.project).filename().string() : o.name);
  const auto info = p.info();
  pr.doc(Json{{"project", info.uuid}, {"root", p.root().string()}});
  pr.text() << "project " << info.uuid << " at " << p.root().string() << '\n';
  return kExitOk;
}

int cmd_ingest(const Options& o, const Printer& pr) {
  if (o.project.empty()) throw PreconditionError("no project directory; pass --project or set CROSSWALK_PROJECT");
  Project p = Project::init(o.project, fs::path(o.project).filename().string());
  IngestOptions opts;
  if (!o.sheet.empty()) opts.sheet = o.sheet;
  opts.no_header = o.no_header;
  if (o.header_row >= 0) opts.header_row = static_cast<std::size_t>(o.header_row);
  if (o.delimiter == "\\t" || o.delimiter == "tab") {
    opts.delimiter = '\t';
  } else if (o.delimiter.size() == 1) {
    opts.delimiter = o.delimiter[0];
  } else {
    throw PreconditionError("--delimiter must be a single character");
  }
  opts.encoding = o.encoding;
  opts.generated_name_prefix = o.prefix;
  if (!o.citation.empty()) opts.citation = o.citation;
  if (!o.format.empty()) {
    opts.format = parse_source_format(o.format);
    if (!opts.format) throw PreconditionError("unknown --format '" + o.format + "'");
  }
  opts.field_names = o.field_names;
  opts.validate();
  const auto outcomes = p.ingest_file(o.file, opts, o.task);
  Json list = Json::array();
  for (const auto& oc : outcomes) {
    Json item;
    item["resource"] = oc.resource.uuid;
    item["schema"] = oc.schema.uuid;
    item["sheet_name"] = oc.resource.source.sheet_name ? Json(*oc.resource.source.sheet_name) : Json(nullptr);
    item["digest"] = oc.resource.source.digest;
    item["rows"] = oc.resource.source.row_count;
    item["columns"] = oc.resource.source.column_count;
    item["fingerprint"] = fingerprint(oc.schema);
    item["matched_crosswalk"] = oc.matched_crosswalk ? Json(*oc.matched_crosswalk) : Json(nullptr);
    item["auto_assigned"] = oc.resource.auto_assigned;
    list.push_back(std::move(item));
    auto& out = pr.text();
    out << "resource " << oc.resource.uuid;
    if (oc.resource.source.sheet_name) out << " sheet '" << *oc.resource.source.sheet_name << "'";
    out << ": " << oc.resource.source.row_count << " rows, " << oc.resource.source.column_count << " columns\n";
    out << "  digest " << oc.resource.source.digest << '\n';
    out << "  schema " << oc.schema.uuid << '\n';
    if (oc.matched_crosswalk) {
      out << "  auto-assigned crosswalk " << *oc.matched_crosswalk << " (run 'crosswalk confirm' to accept)\n";
    }
  }
  pr.doc(Json{{"resources", list}});
  return kExitOk;
}

int cmd_resource_list(const Options& o, const Printer& pr) {
  const Project p = open_project(o);
  Json list = Json::array();
  for (const auto& r : p.resources()) {
    list.push_back(to_json(r));
    pr.text() << r.uuid << "  " << to_string(r.state) << "  " << r.source.source_path
              << (r.source.sheet_name ? " [" + *r.source.sheet_name + "]" : "") << '\n';
  }
  pr.doc(list);
  return kExitOk;
}

int cmd_resource_show(const Options& o, const Printer& pr) {
  const Project p = open_project(o);
  const auto r = p.resource(resolve_resource(p, o.target));
  pr.doc(to_json(r));
  pr.text() << dump(to_json(r));
  return kExitOk;
}

int cmd_resource_use(const Options& o, const Printer& pr) {
  Project p = open_project(o);
  const auto r = p.resource(resolve_resource(p, o.target));
  p.set_current(r.uuid, r.crosswalk_uuid);
  pr.doc(Json{{"resource", r.uuid}});
  pr.text() << "using resource " << r.uuid << '\n';
  return kExitOk;
}

SchemaModel target_schema(Project& p, const Options& o) {
  if (!o.schema.empty()) return p.schema(resolve_schema(p, o.schema));
  return p.schema(p.resource(resolve_resource(p, o.resource)).schema_uuid);
}

int cmd_schema_derive(const Options& o, const Printer& pr) {
  Project p = open_project(o);
  print_schema(pr, p.rederive_schema(resolve_resource(p, o.target.empty() ? o.resource : o.target)));
  return kExitOk;
}

int cmd_schema_set_type(const Options& o, const Printer& pr) {
  Project p = open_project(o);
  const auto type = parse_field_type(o.type);
  if (!type) throw PreconditionError("unknown type '" + o.type + "'");
  const SchemaModel current = target_schema(p, o);
  print_schema(pr, p.save_schema(set_field_type(current, o.field, *type), current.version));
  return kExitOk;
}

int cmd_schema_categorise(const Options& o, const Printer& pr) {
  Project p = open_project(o);
  const auto mode = parse_category_mode(o.mode);
  if (!mode) throw PreconditionError("--mode must be 'unique' or 'boolean'");
  const Resource r = p.resource(resolve_resource(p, o.resource));
  const SchemaModel current = p.schema(r.schema_uuid);
  const auto terms = derive_categories(p.load_table(r), o.field, *mode);
  print_schema(pr, p.save_schema(set_field_categories(current, o.field, terms), current.version));
  return kExitOk;
}

int cmd_schema_show(const Options& o, const Printer& pr) {
  Project p = open_project(o);
  print_schema(pr, target_schema(p, o));
  return kExitOk;
}

int cmd_schema_import(const Options& o, const Printer& pr) {
  Project p = open_project(o);
  const auto s = p.import_schema(schema_from_json(parse_json(read_text_file(o.file))));
  print_schema(pr, s);
  return kExitOk;
}

int cmd_schema_list(const Options& o, const Printer& pr) {
  const Project p = open_project(o);
  Json list = Json::array();
  for (const auto& s : p.schemas()) {
    list.push_back(Json{{"uuid", s.uuid}, {"name", s.name}, {"version", s.version}, {"fields", s.fields.size()}});
    pr.text() << s.uuid << "  " << s.name << "  (" << s.fields.size() << " fields)\n";
  }
  pr.doc(list);
  return kExitOk;
}

void print_crosswalk(const Printer& pr, const Crosswalk& cw) {
  pr.doc(to_json(cw));
  auto& out = pr.text();
  out << "crosswalk " << cw.uuid << " '" << cw.name << "' version " << cw.version << " (" << to_string(cw.status)
      << ")\n";
  const auto scripts = cw.scripts();
  for (std::size_t i = 0; i < scripts.size(); ++i) out << "  " << i << "  " << scripts[i] << '\n';
}

int cmd_crosswalk_new(const Options& o, const Printer& pr) {
  Project p = open_project(o);
  const std::string resource = resolve_resource(p, o.source);
  const std::string dest = resolve_schema(p, o.dest);
  print_crosswalk(pr, p.create_crosswalk(resource, dest, o.name));
  return kExitOk;
}

int cmd_crosswalk_add(const Options& o, const Printer& pr) {
  Project p = open_project(o);
  std::vector<std::string> scripts = o.scripts;
  if (!o.script_file.empty()) {
    auto more = read_script_file(o.script_file);
    scripts.insert(scripts.end(), more.begin(), more.end());
  }
  if (scripts.empty()) throw PreconditionError("no scripts given; pass them as arguments or with --file");
  std::vector<ParsedAction> parsed;
  for (const auto& s : scripts) parsed.push_back(parse_script(s));
  const Crosswalk cw = p.crosswalk(resolve_crosswalk(p, o.crosswalk));
  auto actions = cw.actions;
  actions.insert(actions.end(), parsed.begin(), parsed.end());
  const Crosswalk updated = p.update_actions(cw.uuid, cw.version, std::move(actions));
  p.set_current(std::nullopt, updated.uuid);
  print_crosswalk(pr, updated);
  return kExitOk;
}

int cmd_crosswalk_validate(const Options& o, const Printer& pr) {
  Project p = open_project(o);
  const std::string id = resolve_crosswalk(p, o.crosswalk);
  const auto outcome = p.validate(id);
  Json doc = to_json(outcome);
  doc["crosswalk"] = id;
  pr.doc(doc);
  auto& out = pr.text();
  print_issues(out, "error", outcome.errors);
  print_issues(out, "warning", outcome.warnings);
  out << (outcome.ok() ? "valid" : "invalid") << ": " << outcome.errors.size() << " errors, "
      << outcome.warnings.size() << " warnings, " << outcome.mapped_dest_fields.size() << " of "
      << outcome.mapped_dest_fields.size() + outcome.unmapped_dest_fields.size() << " destination fields mapped\n";
  return outcome.ok() ? kExitOk : kExitValidation;
}

int cmd_crosswalk_run(const Options& o, const Printer& pr) {
  Project p = open_project(o);
  const auto format = parse_export_format(o.export_format);
  if (!format) throw PreconditionError("--format must be csv or parquet");
  std::string resource = o.resource;
  if (resource.empty() && !o.crosswalk.empty()) {
    const auto r = p.resource_for(resolve_crosswalk(p, o.crosswalk));
    if (!r) throw StateError("crosswalk is not assigned to any resource");
    resource = r->uuid;
  }
  ExecOptions exec;
  exec.threads = std::max(1u, o.threads);
  const auto rec = p.transform(resolve_resource(p, resource), *format,
                               o.out.empty() ? std::nullopt : std::optional<fs::path>(o.out), exec);
  Json doc;
  doc["transform"] = rec.uuid;
  doc["output"] = to_json(rec.output);
  doc["coercion_failures"] = rec.coercion_failures;
  doc["violations"] = rec.violations;
  doc["warnings"] = rec.warnings.size();
  pr.doc(doc);
  auto& out = pr.text();
  out << "transform " << rec.uuid << ": " << rec.output.row_count << " rows -> " << rec.output.source_path << '\n';
  out << "  output digest " << rec.output.digest << '\n';
  if (rec.coercion_failures) out << "  " << rec.coercion_failures << " cells could not be coerced\n";
  if (rec.violations) out << "  " << rec.violations << " schema violations\n";
  return rec.violations ? kExitValidation : kExitOk;
}

int cmd_crosswalk_show(const Options& o, const Printer& pr) {
  const Project p = open_project(o);
  print_crosswalk(pr, p.crosswalk(resolve_crosswalk(p, o.crosswalk)));
  return kExitOk;
}

int cmd_crosswalk_list(const Options& o, const Printer& pr) {
  const Project p = open_project(o);
  Json list = Json::array();
  for (const auto& cw : p.crosswalks()) {
    list.push_back(to_json(cw));
    pr.text() << cw.uuid << "  " << to_string(cw.status) << "  v" << cw.version << "  " << cw.name << '\n';
  }
  pr.doc(list);
  return kExitOk;
}

int cmd_crosswalk_confirm(const Options& o, const Printer& pr) {
  Project p = open_project(o);
  const auto r = p.confirm(resolve_resource(p, o.resource));
  pr.doc(Json{{"resource", r.uuid}, {"crosswalk", *r.crosswalk_uuid}});
  pr.text() << "resource " << r.uuid << " uses crosswalk " << *r.crosswalk_uuid << '\n';
  return kExitOk;
}

int cmd_match(const Options& o, const Printer& pr) {
  const Project p = open_project(o);
  const auto id = resolve_resource(p, o.target);
  const auto match = p.match(id);
  Json doc;
  doc["resource"] = id;
  doc["crosswalk"] = match ? Json(match->crosswalk.uuid) : Json(nullptr);
  doc["auto_assigned"] = match ? match->auto_assigned : false;
  pr.doc(doc);
  if (match) pr.text() << match->crosswalk.uuid << '\n';
  return kExitOk;
}

int cmd_verify(const Options& o, const Printer& pr) {
  std::string id = o.target;
  std::optional<Project> project;
  if (fs::is_regular_file(o.target)) {
    const auto rec = transform_from_json(parse_json(read_text_file(o.target)));
    id = rec.uuid;
    project = Project::open(fs::absolute(o.target).parent_path().parent_path());
  } else {
    project = open_project(o);
    id = resolve(o.target, project->transforms(), [](const TransformRecord& t) { return t.uuid; }, "transform");
  }
  ExecOptions exec;
  exec.threads = std::max(1u, o.threads);
  const auto outcome = project->replay(id, exec);
  Json doc;
  doc["transform"] = id;
  doc["recorded_digest"] = outcome.record.output.digest;
  doc["replayed_digest"] = outcome.replayed_digest;
  doc["stored_output_ok"] = outcome.stored_output_ok;
  doc["ok"] = outcome.matches();
  pr.doc(doc);
  auto& out = pr.text();
  if (outcome.matches()) {
    out << "verified " << id << ": output digest reproduced\n";
    return kExitOk;
  }
  if (!outcome.stored_output_ok) out << "stored output of " << id << " does not match its recorded digest\n";
  if (outcome.replayed_digest != outcome.record.output.digest) {
    out << "replay of " << id << " produced digest " << outcome.replayed_digest << ", recorded "
        << outcome.record.output.digest << '\n';
  }
  return kExitProbity;
}

int cmd_transform_list(const Options& o, const Printer& pr) {
  const Project p = open_project(o);
  Json list = Json::array();
  for (const auto& t : p.transforms()) {
    list.push_back(Json{{"uuid", t.uuid},
                        {"resource", t.resource_uuid},
                        {"crosswalk", t.crosswalk_uuid},
                        {"input_digest", t.input_digest},
                        {"output_digest", t.output.digest}});
    pr.text() << t.uuid << "  " << t.output.row_count << " rows  " << t.output.digest.substr(0, 16) << '\n';
  }
  pr.doc(list);
  return kExitOk;
}

int cmd_serve(const Options& o, const Printer& pr, std::ostream& out) {
  Project p = open_project(o);
  ServiceOptions opts;
  opts.host = o.host;
  opts.port = o.port;
  opts.workers = std::max(1u, o.workers);
  opts.exec.threads = std::max(1u, o.threads);
  WorkspaceService service(std::move(p), opts);
  const int port = service.bind();
  pr.doc(Json{{"host", o.host}, {"port", port}});
  pr.text() << "listening on http://" << o.host << ":" << port << '\n';
  out.flush();
  service.listen();
  return kExitOk;
}

void report(std::ostream& err, const std::exception& e, int code) {
  Json line = error_to_json(e);
  line["exit_code"] = code;
  err << line.dump() << '\n' << "xwalk: " << e.what() << '\n';
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Restructure tabular sources into destination schemas with auditable crosswalks", "xwalk"};
  app.option_defaults()->always_capture_default();
  app.add_option("--project,-p", o.project, "Project directory")->envname("CROSSWALK_PROJECT");
  app.add_flag("--json", o.json, "Machine-readable output");
  app.require_subcommand(1);

  auto* init = app.add_subcommand("init", "Create a project directory");
  init->add_option("--name", o.name, "Project name");

  auto* ingest = app.add_subcommand("ingest", "Import a source file as one resource per sheet");
  ingest->add_option("file", o.file, "CSV, Parquet or XLSX file")->required();
  ingest->add_option("--sheet", o.sheet, "Only this sheet (name or 0-based index)");
  ingest->add_flag("--no-header", o.no_header, "First row is data; generate field names");
  ingest->add_option("--header-row", o.header_row, "0-based row holding the field names");
  ingest->add_option("--delimiter", o.delimiter, "CSV delimiter (use 'tab' for tabs)");
  ingest->add_option("--encoding", o.encoding, "Source text encoding");
  ingest->add_option("--prefix", o.prefix, "Prefix of generated field names");
  ingest->add_option("--field-names", o.field_names, "Replacement field names")->delimiter(',');
  ingest->add_option("--citation", o.citation, "Citation recorded with the source");
  ingest->add_option("--format", o.format, "csv, parquet or xlsx (default: from extension)");
  ingest->add_option("--task", o.task, "Task grouping the resource");

  auto* resource = app.add_subcommand("resource", "Inspect resources");
  resource->require_subcommand(1);
  auto* resource_list = resource->add_subcommand("list", "List resources");
  auto* resource_show = resource->add_subcommand("show", "Show one resource");
  resource_show->add_option("resource", o.target, "Resource id or prefix");
  auto* resource_use = resource->add_subcommand("use", "Select the current resource");
  resource_use->add_option("resource", o.target, "Resource id or prefix")->required();

  auto* schema = app.add_subcommand("schema", "Derive, edit and import schemas");
  schema->require_subcommand(1);
  auto* schema_derive = schema->add_subcommand("derive", "Re-derive the minimum transformable schema");
  schema_derive->add_option("resource", o.target, "Resource id or prefix");
  auto* schema_set_type = schema->add_subcommand("set-type", "Change a field's type");
  schema_set_type->add_option("field", o.field)->required();
  schema_set_type->add_option("type", o.type, "string|integer|number|boolean|date|datetime|array|category")
      ->required();
  auto* schema_categorise = schema->add_subcommand("categorise", "Derive category terms for a field");
  schema_categorise->add_option("field", o.field)->required();
  schema_categorise->add_option("--mode", o.mode, "unique or boolean")->required();
  auto* schema_show = schema->add_subcommand("show", "Print a schema");
  auto* schema_import = schema->add_subcommand("import", "Add a destination schema from a JSON file");
  schema_import->add_option("file", o.file)->required();
  auto* schema_list = schema->add_subcommand("list", "List schemas");
  for (auto* sub : {schema_set_type, schema_categorise, schema_show}) {
    sub->add_option("--resource", o.resource, "Resource whose schema to use");
  }
  for (auto* sub : {schema_set_type, schema_show}) {
    sub->add_option("--schema", o.schema, "Schema id, prefix or JSON file");
  }

  auto* crosswalk = app.add_subcommand("crosswalk", "Author, validate and run crosswalks");
  crosswalk->require_subcommand(1);
  auto* cw_new = crosswalk->add_subcommand("new", "Start a crosswalk from a resource to a destination schema");
  cw_new->add_option("--source", o.source, "Resource id or prefix (default: current)");
  cw_new->add_option("--dest", o.dest, "Destination schema id, prefix or JSON file")->required();
  cw_new->add_option("--name", o.name, "Crosswalk name");
  auto* cw_add = crosswalk->add_subcommand("add", "Append action scripts");
  cw_add->add_option("scripts", o.scripts, "Action scripts");
  cw_add->add_option("--file", o.script_file, "One script per line; '#' comments; '-' for stdin");
  auto* cw_validate = crosswalk->add_subcommand("validate", "Validate against the source and destination schemas");
  auto* cw_run = crosswalk->add_subcommand("run", "Transform a resource and record the output digest");
  cw_run->add_option("--out", o.out, "Also write the output here");
  cw_run->add_option("--format", o.export_format, "csv or parquet");
  cw_run->add_option("--resource", o.resource, "Resource to transform");
  cw_run->add_option("--threads", o.threads, "Worker threads for row-level actions");
  auto* cw_show = crosswalk->add_subcommand("show", "Print a crosswalk");
  auto* cw_list = crosswalk->add_subcommand("list", "List crosswalks");
  auto* cw_confirm = crosswalk->add_subcommand("confirm", "Accept an auto-assigned crosswalk");
  cw_confirm->add_option("--resource", o.resource, "Resource id or prefix");
  for (auto* sub : {cw_add, cw_validate, cw_run, cw_show}) {
    sub->add_option("--crosswalk", o.crosswalk, "Crosswalk id or prefix");
  }

  auto* match = app.add_subcommand("match", "Find a validated crosswalk for a resource");
  match->add_option("resource", o.target, "Resource id or prefix");

  auto* verify = app.add_subcommand("verify", "Replay a transform and compare output digests");
  verify->add_option("transform", o.target, "Transform id, prefix or record file")->required();
  verify->add_option("--threads", o.threads, "Worker threads for row-level actions");

  auto* transform = app.add_subcommand("transform", "Inspect transforms");
  transform->require_subcommand(1);
  auto* transform_list = transform->add_subcommand("list", "List transforms");

  auto* serve = app.add_subcommand("serve", "Start the workspace HTTP service");
  serve->add_option("--host", o.host, "Bind address");
  serve->add_option("--port", o.port, "Port (0 picks a free one)");
  serve->add_option("--workers", o.workers, "Transform worker threads");
  serve->add_option("--threads", o.threads, "Worker threads per transform");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    Json line{{"error", "usage"}, {"message", e.what()}, {"exit_code", int(kExitUsage)}};
    err << line.dump() << '\n' << "xwalk: " << e.what() << '\n' << "Run with --help for usage.\n";
    return kExitUsage;
  }

  const Printer pr(out, o.json);
  try {
    if (init->parsed()) return cmd_init(o, pr);
    if (ingest->parsed()) return cmd_ingest(o, pr);
    if (resource_list->parsed()) return cmd_resource_list(o, pr);
    if (resource_show->parsed()) return cmd_resource_show(o, pr);
    if (resource_use->parsed()) return cmd_resource_use(o, pr);
    if (schema_derive->parsed()) return cmd_schema_derive(o, pr);
    if (schema_set_type->parsed()) return cmd_schema_set_type(o, pr);
    if (schema_categorise->parsed()) return cmd_schema_categorise(o, pr);
    if (schema_show->parsed()) return cmd_schema_show(o, pr);
    if (schema_import->parsed()) return cmd_schema_import(o, pr);
    if (schema_list->parsed()) return cmd_schema_list(o, pr);
    if (cw_new->parsed()) return cmd_crosswalk_new(o, pr);
    if (cw_add->parsed()) return cmd_crosswalk_add(o, pr);
    if (cw_validate->parsed()) return cmd_crosswalk_validate(o, pr);
    if (cw_run->parsed()) return cmd_crosswalk_run(o, pr);
    if (cw_show->parsed()) return cmd_crosswalk_show(o, pr);
    if (cw_list->parsed()) return cmd_crosswalk_list(o, pr);
    if (cw_confirm->parsed()) return cmd_crosswalk_confirm(o, pr);
    if (match->parsed()) return cmd_match(o, pr);
    if (verify->parsed()) return cmd_verify(o, pr);
    if (transform_list->parsed()) return cmd_transform_list(o, pr);
    if (serve->parsed()) return cmd_serve(o, pr, out);
  } catch (const std::exception& e) {
    const int code = exit_code_for(e);
    report(err, e, code);
    return code;
  }
  return kExitUsage;
}

}  // namespace crosswalk
