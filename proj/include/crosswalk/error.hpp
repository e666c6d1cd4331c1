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
#include <stdexcept>
#include <string>
#include <vector>

namespace crosswalk {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownColumnError : public Error {
 public:
  UnknownColumnError(std::string name, std::vector<std::string> available);

  const std::string& name() const noexcept { return name_; }
  const std::vector<std::string>& available() const noexcept { return available_; }

 private:
  std::string name_;
  std::vector<std::string> available_;
};

/// A table was constructed in violation of its structural invariants.
class TableError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

/// Malformed source data. `row` is the 0-based physical record, `offset` the
/// byte position in the (decoded) input where the problem was detected.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t row, std::size_t offset);

  std::size_t row() const noexcept { return row_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t row_;
  std::size_t offset_;
};

class DuplicateHeaderError : public Error {
 public:
  explicit DuplicateHeaderError(std::vector<std::string> names);

  const std::vector<std::string>& names() const noexcept { return names_; }

 private:
  std::vector<std::string> names_;
};

class EmptyFileError : public Error {
 public:
  using Error::Error;
};

class UnsupportedFormatError : public Error {
 public:
  using Error::Error;
};

class UnknownFieldError : public Error {
 public:
  explicit UnknownFieldError(std::string field);

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class SchemaError : public Error {
 public:
  using Error::Error;
};

/// Syntax error in an action script, positioned at a byte offset.
class ScriptSyntaxError : public Error {
 public:
  ScriptSyntaxError(const std::string& what, std::size_t offset,
                    std::vector<std::string> expected = {});

  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  std::size_t offset_;
  std::vector<std::string> expected_;
};

class UnknownActionError : public ScriptSyntaxError {
 public:
  UnknownActionError(std::string name, std::size_t offset);

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class FingerprintMismatchError : public Error {
 public:
  FingerprintMismatchError(std::string expected, std::string actual);

  const std::string& expected() const noexcept { return expected_; }
  const std::string& actual() const noexcept { return actual_; }

 private:
  std::string expected_;
  std::string actual_;
};

class VersionConflictError : public Error {
 public:
  VersionConflictError(std::string id, long long expected, long long actual);

  long long expected() const noexcept { return expected_; }
  long long actual() const noexcept { return actual_; }

 private:
  long long expected_;
  long long actual_;
};

class NotFoundError : public Error {
 public:
  using Error::Error;
};

/// A recorded digest does not match the bytes on disk or a replayed output.
class ProbityError : public Error {
 public:
  using Error::Error;
};

class StateError : public Error {
 public:
  using Error::Error;
};

}  // namespace crosswalk
