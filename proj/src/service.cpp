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

#include "crosswalk/service.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <condition_variable>
#include <deque>
#include <functional>
#include <map>
#include <thread>

#include "httplib.h"

#include "crosswalk/error.hpp"
#include "crosswalk/files.hpp"

namespace crosswalk {

namespace {

constexpr std::size_t kDefaultPreviewRows = 50;

struct HttpError : Error {
  HttpError(int status, Json body) : Error(body.value("message", "")), status(status), body(std::move(body)) {}
  int status;
  Json body;
};

void send(httplib::Response& res, int status, const Json& body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

int status_for(const std::exception& e) {
  if (dynamic_cast<const NotFoundError*>(&e)) return 404;
  if (dynamic_cast<const VersionConflictError*>(&e)) return 409;
  if (dynamic_cast<const FingerprintMismatchError*>(&e) || dynamic_cast<const StateError*>(&e) ||
      dynamic_cast<const UnknownFieldError*>(&e) || dynamic_cast<const UnknownColumnError*>(&e)) {
    return 422;
  }
  if (dynamic_cast<const ScriptSyntaxError*>(&e) || dynamic_cast<const SchemaError*>(&e) ||
      dynamic_cast<const ParseError*>(&e) || dynamic_cast<const EmptyFileError*>(&e) ||
      dynamic_cast<const DuplicateHeaderError*>(&e) || dynamic_cast<const UnsupportedFormatError*>(&e) ||
      dynamic_cast<const PreconditionError*>(&e)) {
    return 400;
  }
  return 500;
}

template <typename Fn>
void guarded(httplib::Response& res, Fn&& fn) {
  try {
    fn();
  } catch (const HttpError& e) {
    send(res, e.status, e.body);
  } catch (const std::exception& e) {
    send(res, status_for(e), error_to_json(e));
  }
}

Json body_object(const httplib::Request& req) {
  Json doc = parse_json(req.body);
  if (!doc.is_object()) throw SchemaError("request body must be a JSON object");
  return doc;
}

std::size_t size_param(const httplib::Request& req, const char* name, std::size_t fallback) {
  if (!req.has_param(name)) return fallback;
  const std::string text = req.get_param_value(name);
  std::size_t value = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw PreconditionError(std::string("query parameter '") + name + "' must be a non-negative integer");
  }
  return value;
}

std::optional<std::string> form_value(const httplib::Request& req, const char* name) {
  if (!req.has_file(name)) return std::nullopt;
  return req.get_file_value(name).content;
}

bool truthy(const std::string& text) { return text == "1" || text == "true" || text == "True" || text == "on"; }

std::string base_name(const std::string& filename) {
  const auto slash = filename.find_last_of("/\\");
  std::string out = slash == std::string::npos ? filename : filename.substr(slash + 1);
  return out.empty() ? "upload" : out;
}

}  // namespace

struct WorkspaceService::Impl {
  struct Job {
    std::string id;
    std::string resource;
    ExportFormat format = ExportFormat::csv;
    std::string status = "queued";
    std::optional<std::string> transform;
    Json error;
  };

  Project project;
  ServiceOptions options;
  httplib::Server server;
  bool bound = false;
  int port = 0;

  std::mutex jobs_mutex;
  std::condition_variable jobs_changed;
  std::map<std::string, Job> jobs;
  std::deque<std::string> queue;
  std::size_t active = 0;
  std::size_t job_counter = 0;
  bool stopping = false;
  std::vector<std::thread> workers;

  Impl(Project p, ServiceOptions o) : project(std::move(p)), options(std::move(o)) {
    server.set_payload_max_length(options.max_upload_bytes);
    routes();
    const unsigned n = std::max(1u, options.workers);
    for (unsigned i = 0; i < n; ++i) workers.emplace_back([this] { work(); });
  }

  ~Impl() {
    server.stop();
    {
      std::lock_guard lock(jobs_mutex);
      stopping = true;
    }
    jobs_changed.notify_all();
    for (auto& t : workers) t.join();
  }

  void work() {
    for (;;) {
      std::string id;
      {
        std::unique_lock lock(jobs_mutex);
        jobs_changed.wait(lock, [&] { return stopping || !queue.empty(); });
        if (queue.empty()) return;
        id = queue.front();
        queue.pop_front();
        jobs[id].status = "running";
        ++active;
      }
      const Job job = snapshot(id);
      std::optional<std::string> transform;
      Json error;
      try {
        transform = project.transform(job.resource, job.format, std::nullopt, options.exec).uuid;
      } catch (const std::exception& e) {
        error = error_to_json(e);
      }
      {
        std::lock_guard lock(jobs_mutex);
        Job& j = jobs[id];
        j.status = transform ? "done" : "failed";
        j.transform = transform;
        j.error = std::move(error);
        --active;
      }
      jobs_changed.notify_all();
    }
  }

  Job snapshot(const std::string& id) {
    std::lock_guard lock(jobs_mutex);
    const auto it = jobs.find(id);
    if (it == jobs.end()) throw NotFoundError("job '" + id + "' not found");
    return it->second;
  }

  static Json job_json(const Job& j) {
    Json out;
    out["job"] = j.id;
    out["resource"] = j.resource;
    out["format"] = std::string(to_string(j.format));
    out["status"] = j.status;
    out["transform"] = j.transform ? Json(*j.transform) : Json(nullptr);
    out["error"] = j.error;
    return out;
  }

  Json resource_json(const Resource& r) const {
    Json out = to_json(r);
    out["schema"] = to_json(project.schema(r.schema_uuid));
    return out;
  }

  static Json crosswalk_json(const Crosswalk& cw) {
    Json out = to_json(cw);
    out["approximate_dry_run"] =
        std::any_of(cw.actions.begin(), cw.actions.end(), [](const ParsedAction& a) { return is_barrier(a.action); });
    return out;
  }

  Resource crosswalk_resource(const httplib::Request& req, const std::string& cw_uuid) const {
    if (req.has_param("resource")) return project.resource(req.get_param_value("resource"));
    auto r = project.resource_for(cw_uuid);
    if (!r) throw StateError("crosswalk '" + cw_uuid + "' is not assigned to any resource");
    return *r;
  }

  void routes() {
    using Req = httplib::Request;
    using Res = httplib::Response;

    server.Get("/actions", [](const Req&, Res& res) {
      Json list = Json::array();
      for (const auto& info : action_catalog()) list.push_back(to_json(info));
      send(res, 200, list);
    });

    server.Get("/resources", [this](const Req&, Res& res) {
      guarded(res, [&] {
        Json list = Json::array();
        for (const auto& r : project.resources()) list.push_back(resource_json(r));
        send(res, 200, list);
      });
    });

    server.Post("/resources", [this](const Req& req, Res& res) {
      guarded(res, [&] {
        if (!req.is_multipart_form_data() || !req.has_file("file")) {
          throw PreconditionError("expected multipart/form-data with a 'file' part");
        }
        const auto file = req.get_file_value("file");
        IngestOptions opts;
        if (auto v = form_value(req, "sheet")) opts.sheet = *v;
        if (auto v = form_value(req, "no_header")) opts.no_header = truthy(*v);
        if (auto v = form_value(req, "header_row")) {
          std::size_t row = 0;
          const auto [end, ec] = std::from_chars(v->data(), v->data() + v->size(), row);
          if (ec != std::errc() || end != v->data() + v->size()) throw PreconditionError("header_row must be an integer");
          opts.header_row = row;
        }
        if (auto v = form_value(req, "delimiter")) {
          if (v->size() != 1) throw PreconditionError("delimiter must be a single character");
          opts.delimiter = (*v)[0];
        }
        if (auto v = form_value(req, "encoding")) opts.encoding = *v;
        if (auto v = form_value(req, "prefix")) opts.generated_name_prefix = *v;
        if (auto v = form_value(req, "citation")) opts.citation = *v;
        if (auto v = form_value(req, "format")) {
          opts.format = parse_source_format(*v);
          if (!opts.format) throw PreconditionError("unknown format '" + *v + "'");
        }
        const std::string task = form_value(req, "task").value_or("default");
        const auto bytes = std::span(reinterpret_cast<const std::uint8_t*>(file.content.data()), file.content.size());
        Json list = Json::array();
        for (const auto& outcome : project.ingest(bytes, base_name(file.filename), opts, task)) {
          Json item = resource_json(outcome.resource);
          item["matched_crosswalk"] = outcome.matched_crosswalk ? Json(*outcome.matched_crosswalk) : Json(nullptr);
          list.push_back(std::move(item));
        }
        send(res, 201, list);
      });
    });

    server.Get(R"(/resources/([^/]+))", [this](const Req& req, Res& res) {
      guarded(res, [&] { send(res, 200, resource_json(project.resource(req.matches[1]))); });
    });

    server.Get(R"(/resources/([^/]+)/preview)", [this](const Req& req, Res& res) {
      guarded(res, [&] {
        const auto rows = size_param(req, "rows", kDefaultPreviewRows);
        const Resource r = project.resource(req.matches[1]);
        const Table table = project.load_table(r);
        Json out;
        out["resource"] = r.uuid;
        out["total_rows"] = table.row_count();
        out["table"] = table_to_json(preview(table, rows));
        send(res, 200, out);
      });
    });

    server.Get(R"(/resources/([^/]+)/schema)", [this](const Req& req, Res& res) {
      guarded(res, [&] {
        const Resource r = project.resource(req.matches[1]);
        send(res, 200, to_json(project.schema(r.schema_uuid)));
      });
    });

    server.Put(R"(/resources/([^/]+)/schema)", [this](const Req& req, Res& res) {
      guarded(res, [&] {
        const Resource r = project.resource(req.matches[1]);
        const Json body = body_object(req);
        if (!body.contains("version")) throw SchemaError("schema updates must carry the version they edit");
        SchemaModel s = schema_from_json(body);
        s.uuid = r.schema_uuid;
        send(res, 200, to_json(project.save_schema(s, s.version)));
      });
    });

    server.Post(R"(/resources/([^/]+)/schema/derive)", [this](const Req& req, Res& res) {
      guarded(res, [&] { send(res, 200, to_json(project.rederive_schema(req.matches[1]))); });
    });

    server.Post(R"(/resources/([^/]+)/schema/categorise)", [this](const Req& req, Res& res) {
      guarded(res, [&] {
        const Resource r = project.resource(req.matches[1]);
        const Json body = body_object(req);
        const std::string field = body.value("field", "");
        const auto mode = parse_category_mode(body.value("mode", "unique"));
        if (!mode) throw PreconditionError("mode must be 'unique' or 'boolean'");
        const SchemaModel current = project.schema(r.schema_uuid);
        const std::int64_t expected = body.value("version", current.version);
        const auto terms = derive_categories(project.load_table(r), field, *mode);
        send(res, 200, to_json(project.save_schema(set_field_categories(current, field, terms), expected)));
      });
    });

    server.Get(R"(/resources/([^/]+)/match)", [this](const Req& req, Res& res) {
      guarded(res, [&] {
        const auto match = project.match(req.matches[1]);
        Json out;
        out["crosswalk"] = match ? Json(match->crosswalk.uuid) : Json(nullptr);
        out["auto_assigned"] = match ? match->auto_assigned : false;
        send(res, 200, out);
      });
    });

    server.Post(R"(/resources/([^/]+)/confirm)", [this](const Req& req, Res& res) {
      guarded(res, [&] { send(res, 200, resource_json(project.confirm(req.matches[1]))); });
    });

    server.Post(R"(/resources/([^/]+)/transform)", [this](const Req& req, Res& res) {
      guarded(res, [&] {
        const Resource r = project.resource(req.matches[1]);
        const std::string fmt = req.has_param("format") ? req.get_param_value("format") : "csv";
        const auto format = parse_export_format(fmt);
        if (!format) throw PreconditionError("format must be csv or parquet");
        project.runnable_crosswalk(r);
        Job job;
        {
          std::lock_guard lock(jobs_mutex);
          if (queue.size() >= options.queue_limit) {
            throw HttpError(503, Json{{"error", "busy"}, {"message", "transform queue is full"}});
          }
          job.id = uuid_from_seed("job\n" + r.uuid + "\n" + std::to_string(job_counter++));
          job.resource = r.uuid;
          job.format = *format;
          jobs[job.id] = job;
          queue.push_back(job.id);
        }
        jobs_changed.notify_all();
        res.set_header("Location", "/jobs/" + job.id);
        send(res, 202, job_json(job));
      });
    });

    server.Get(R"(/jobs/([^/]+))", [this](const Req& req, Res& res) {
      guarded(res, [&] { send(res, 200, job_json(snapshot(req.matches[1]))); });
    });

    server.Get("/schemas", [this](const Req&, Res& res) {
      guarded(res, [&] {
        Json list = Json::array();
        for (const auto& s : project.schemas()) list.push_back(to_json(s));
        send(res, 200, list);
      });
    });

    server.Post("/schemas", [this](const Req& req, Res& res) {
      guarded(res, [&] { send(res, 201, to_json(project.import_schema(schema_from_json(body_object(req))))); });
    });

    server.Get(R"(/schemas/([^/]+))", [this](const Req& req, Res& res) {
      guarded(res, [&] { send(res, 200, to_json(project.schema(req.matches[1]))); });
    });

    server.Get("/crosswalks", [this](const Req&, Res& res) {
      guarded(res, [&] {
        Json list = Json::array();
        for (const auto& cw : project.crosswalks()) list.push_back(crosswalk_json(cw));
        send(res, 200, list);
      });
    });

    server.Post("/crosswalks", [this](const Req& req, Res& res) {
      guarded(res, [&] {
        const Json body = body_object(req);
        const auto cw = project.create_crosswalk(body.value("resource", ""), body.value("dest", ""),
                                                 body.value("name", ""));
        send(res, 201, crosswalk_json(cw));
      });
    });

    server.Get(R"(/crosswalks/([^/]+))", [this](const Req& req, Res& res) {
      guarded(res, [&] { send(res, 200, crosswalk_json(project.crosswalk(req.matches[1]))); });
    });

    server.Put(R"(/crosswalks/([^/]+))", [this](const Req& req, Res& res) {
      guarded(res, [&] {
        const Json body = body_object(req);
        const auto version = body.find("version");
        const auto scripts = body.find("actions");
        if (version == body.end() || !version->is_number_integer()) {
          throw SchemaError("crosswalk updates must carry an integer 'version'");
        }
        if (scripts == body.end() || !scripts->is_array()) throw SchemaError("'actions' must be an array of scripts");
        std::vector<ParsedAction> actions;
        for (std::size_t i = 0; i < scripts->size(); ++i) {
          const auto& text = (*scripts)[i];
          if (!text.is_string()) throw SchemaError("action " + std::to_string(i) + " is not a string");
          try {
            actions.push_back(parse_script(text.get<std::string>()));
          } catch (const ScriptSyntaxError& e) {
            Json err = error_to_json(e);
            err["step"] = i;
            err["script"] = text;
            throw HttpError(400, err);
          }
        }
        send(res, 200, crosswalk_json(project.update_actions(req.matches[1], version->get<std::int64_t>(),
                                                             std::move(actions))));
      });
    });

    server.Post(R"(/crosswalks/([^/]+)/validate)", [this](const Req& req, Res& res) {
      guarded(res, [&] {
        const auto outcome = project.validate(req.matches[1]);
        Json body = to_json(outcome);
        body["crosswalk"] = crosswalk_json(project.crosswalk(req.matches[1]));
        send(res, outcome.ok() ? 200 : 422, body);
      });
    });

    server.Post(R"(/crosswalks/([^/]+)/dry-run)", [this](const Req& req, Res& res) {
      guarded(res, [&] {
        const auto rows = size_param(req, "rows", kDefaultPreviewRows);
        const Crosswalk cw = project.crosswalk(req.matches[1]);
        const Resource r = crosswalk_resource(req, cw.uuid);
        const SchemaModel source = project.schema(r.schema_uuid);
        const SchemaModel dest = project.schema(cw.dest_schema_uuid);
        const auto outcome = validate_crosswalk(cw, source, dest);
        const bool runnable = std::all_of(outcome.errors.begin(), outcome.errors.end(),
                                          [](const ActionIssue& i) { return i.kind == "coverage"; });
        if (!runnable) throw HttpError(422, to_json(outcome));
        ApplyOptions apply;
        apply.exec = options.exec;
        apply.require_validated = false;
        apply.row_limit = rows;
        const auto result = apply_crosswalk(project.load_table(r), cw, source, dest, apply);
        Json out;
        out["crosswalk"] = cw.uuid;
        out["resource"] = r.uuid;
        out["rows"] = rows;
        out["approximate"] = std::any_of(cw.actions.begin(), cw.actions.end(),
                                         [](const ParsedAction& a) { return is_barrier(a.action); });
        out["table"] = table_to_json(result.table);
        Json audit = Json::array();
        for (const auto& a : result.audit) audit.push_back(to_json(a));
        out["audit"] = std::move(audit);
        out["warnings"] = result.warnings;
        out["source_coercion"] = to_json(result.source_coercion);
        out["coercion"] = to_json(result.coercion_report);
        out["validation"] = to_json(result.validation_report);
        send(res, 200, out);
      });
    });

    server.Get(R"(/transforms/([^/]+))", [this](const Req& req, Res& res) {
      guarded(res, [&] {
        const auto rec = project.transform_record(req.matches[1]);
        Json out = to_json(rec);
        out["download"] = "/transforms/" + rec.uuid + "/download";
        send(res, 200, out);
      });
    });

    server.Get(R"(/transforms/([^/]+)/download)", [this](const Req& req, Res& res) {
      guarded(res, [&] {
        const auto rec = project.transform_record(req.matches[1]);
        const auto path = project.output_path(rec);
        const std::string content = read_text_file(path);
        const bool csv = rec.format == ExportFormat::csv;
        res.status = 200;
        res.set_header("Content-Disposition",
                       "attachment; filename=\"" + rec.uuid + (csv ? ".csv" : ".parquet") + "\"");
        res.set_header("X-Content-Digest", rec.output.digest);
        res.set_content(content, csv ? "text/csv; charset=utf-8" : "application/vnd.apache.parquet");
      });
    });

    server.Get("/export/bulk", [this](const Req&, Res& res) {
      guarded(res, [&] {
        Json list = Json::array();
        for (const auto& t : project.transforms()) {
          Json item;
          item["transform"] = t.uuid;
          item["resource"] = t.resource_uuid;
          item["crosswalk"] = t.crosswalk_uuid;
          item["crosswalk_version"] = t.crosswalk_version;
          item["input_digest"] = t.input_digest;
          item["output_digest"] = t.output.digest;
          item["format"] = std::string(to_string(t.format));
          item["rows"] = t.output.row_count;
          item["created_at"] = to_json(t.created_at);
          item["download"] = "/transforms/" + t.uuid + "/download";
          list.push_back(std::move(item));
        }
        Json out;
        out["project"] = project.info().uuid;
        out["transforms"] = std::move(list);
        send(res, 200, out);
      });
    });
  }
};

WorkspaceService::WorkspaceService(Project project, ServiceOptions options)
    : impl_(std::make_unique<Impl>(std::move(project), std::move(options))) {}

WorkspaceService::~WorkspaceService() = default;

int WorkspaceService::bind() {
  if (impl_->bound) return impl_->port;
  const auto& o = impl_->options;
  if (o.port == 0) {
    impl_->port = impl_->server.bind_to_any_port(o.host);
    if (impl_->port < 0) throw IoError("cannot bind " + o.host);
  } else {
    if (!impl_->server.bind_to_port(o.host, o.port)) {
      throw IoError("cannot bind " + o.host + ":" + std::to_string(o.port));
    }
    impl_->port = o.port;
  }
  impl_->bound = true;
  return impl_->port;
}

void WorkspaceService::listen() {
  bind();
  impl_->server.listen_after_bind();
}

void WorkspaceService::stop() { impl_->server.stop(); }

void WorkspaceService::drain() {
  std::unique_lock lock(impl_->jobs_mutex);
  impl_->jobs_changed.wait(lock, [&] { return impl_->queue.empty() && impl_->active == 0; });
}

}  // namespace crosswalk
