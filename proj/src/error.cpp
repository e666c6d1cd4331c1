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

#include "crosswalk/error.hpp"

namespace crosswalk {

namespace {

std::string join_names(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ", ";
    out += "'" + names[i] + "'";
  }
  return out;
}

}  // namespace

UnknownColumnError::UnknownColumnError(std::string name, std::vector<std::string> available)
    : Error("unknown column '" + name + "'; available: [" + join_names(available) + "]"),
      name_(std::move(name)),
      available_(std::move(available)) {}

ParseError::ParseError(const std::string& what, std::size_t row, std::size_t offset)
    : Error(what + " (row " + std::to_string(row) + ", byte " + std::to_string(offset) + ")"),
      row_(row),
      offset_(offset) {}

DuplicateHeaderError::DuplicateHeaderError(std::vector<std::string> names)
    : Error("duplicate header names: [" + join_names(names) + "]"), names_(std::move(names)) {}

UnknownFieldError::UnknownFieldError(std::string field)
    : Error("unknown field '" + field + "'"), field_(std::move(field)) {}

ScriptSyntaxError::ScriptSyntaxError(const std::string& what, std::size_t offset,
                                     std::vector<std::string> expected)
    : Error(what + " at offset " + std::to_string(offset)),
      offset_(offset),
      expected_(std::move(expected)) {}

UnknownActionError::UnknownActionError(std::string name, std::size_t offset)
    : ScriptSyntaxError("unknown action '" + name + "'", offset), name_(std::move(name)) {}

FingerprintMismatchError::FingerprintMismatchError(std::string expected, std::string actual)
    : Error("source schema fingerprint mismatch: crosswalk expects " + expected.substr(0, 16) +
            "..., source has " + actual.substr(0, 16) + "..."),
      expected_(std::move(expected)),
      actual_(std::move(actual)) {}

VersionConflictError::VersionConflictError(std::string id, long long expected, long long actual)
    : Error("version conflict on " + id + ": expected version " + std::to_string(expected) +
            ", current is " + std::to_string(actual)),
      expected_(expected),
      actual_(actual) {}

}  // namespace crosswalk
