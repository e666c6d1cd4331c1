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
#include <memory>
#include <string>

#include "crosswalk/project.hpp"

namespace crosswalk {

struct ServiceOptions {
  std::string host = "127.0.0.1";
  /// 0 picks a free port.
  int port = 8080;
  /// Transform worker threads.
  unsigned workers = 2;
  /// Transform jobs waiting beyond the running ones; more are refused with 503.
  std::size_t queue_limit = 64;
  std::size_t max_upload_bytes = 256u << 20;
  ExecOptions exec;
};

/// HTTP/1.1 JSON API over one project directory.
///
///   GET  /actions
///   GET  /resources                      POST /resources (multipart "file")
///   GET  /resources/{id}                 GET  /resources/{id}/preview?rows=50
///   GET  /resources/{id}/schema          PUT  /resources/{id}/schema
///   POST /resources/{id}/schema/derive   POST /resources/{id}/schema/categorise
///   GET  /resources/{id}/match           POST /resources/{id}/confirm
///   POST /resources/{id}/transform?format=csv|parquet  -> 202 job
///   GET  /jobs/{id}
///   GET  /schemas  POST /schemas  GET /schemas/{id}
///   GET  /crosswalks  POST /crosswalks  GET/PUT /crosswalks/{id}
///   POST /crosswalks/{id}/validate       POST /crosswalks/{id}/dry-run?rows=50
///   GET  /transforms/{id}                GET  /transforms/{id}/download
///   GET  /export/bulk
///
/// Errors carry a JSON body from error_to_json: 400 malformed input (script
/// errors include byte offsets), 404 unknown id, 409 version conflict, 422
/// validation failure or invalid state.
class WorkspaceService {
 public:
  WorkspaceService(Project project, ServiceOptions options);
  ~WorkspaceService();
  WorkspaceService(const WorkspaceService&) = delete;
  WorkspaceService& operator=(const WorkspaceService&) = delete;

  /// Binds the socket and returns the port. Throws IoError.
  int bind();
  /// Serves until stop(); bind() is called first if needed.
  void listen();
  void stop();
  /// Blocks until every queued transform job has finished.
  void drain();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace crosswalk
