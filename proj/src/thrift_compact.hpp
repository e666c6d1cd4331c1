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

// Minimal Thrift compact protocol: a generic decoder into a value tree and a
// field-by-field encoder. Only what Parquet metadata needs.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace crosswalk::thrift {

enum CompactType : std::uint8_t {
  kStop = 0,
  kBoolTrue = 1,
  kBoolFalse = 2,
  kByte = 3,
  kI16 = 4,
  kI32 = 5,
  kI64 = 6,
  kDouble = 7,
  kBinary = 8,
  kList = 9,
  kSet = 10,
  kMap = 11,
  kStruct = 12,
};

struct Field;

struct Value {
  std::variant<std::int64_t, bool, double, std::string, std::vector<Value>, std::vector<Field>> data;

  std::int64_t as_int() const;
  bool as_bool() const;
  const std::string& as_binary() const;
  const std::vector<Value>& as_list() const;
  const std::vector<Field>& as_struct() const;
  /// Struct member by field id, or nullptr.
  const Value* get(std::int16_t id) const;
};

struct Field {
  std::int16_t id;
  Value value;
};

/// Decodes one struct starting at `pos`; advances `pos` past it.
/// Throws ParseError on truncated or malformed input.
Value read_struct(std::span<const std::uint8_t> bytes, std::size_t& pos);

class Writer {
 public:
  const std::vector<std::uint8_t>& bytes() const noexcept { return out_; }

  void i32(std::int16_t id, std::int32_t v);
  void i64(std::int16_t id, std::int64_t v);
  void binary(std::int16_t id, std::string_view v);
  void boolean(std::int16_t id, bool v);

  void begin_struct(std::int16_t id);
  void end_struct();
  /// Closes the outermost struct.
  void stop();

  void begin_list(std::int16_t id, CompactType element, std::size_t size);
  void list_i32(std::int32_t v);
  void list_binary(std::string_view v);
  /// Struct element inside a list; close with end_struct().
  void begin_list_struct();

 private:
  void field_header(std::int16_t id, std::uint8_t type);
  void varint(std::uint64_t v);

  std::vector<std::uint8_t> out_;
  std::vector<std::int16_t> last_ids_{0};
};

}  // namespace crosswalk::thrift
