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

#include "thrift_compact.hpp"

#include <cstring>

#include "crosswalk/error.hpp"

namespace crosswalk::thrift {

namespace {

constexpr int kMaxDepth = 64;

[[noreturn]] void fail(const char* what, std::size_t pos) {
  throw ParseError(std::string("parquet metadata: ") + what, 0, pos);
}

class Reader {
 public:
  Reader(std::span<const std::uint8_t> bytes, std::size_t pos) : bytes_(bytes), pos_(pos) {}

  std::size_t pos() const { return pos_; }

  std::uint8_t byte() {
    if (pos_ >= bytes_.size()) fail("truncated", pos_);
    return bytes_[pos_++];
  }

  std::uint64_t varint() {
    std::uint64_t v = 0;
    for (int shift = 0; shift < 64; shift += 7) {
      const std::uint8_t b = byte();
      v |= static_cast<std::uint64_t>(b & 0x7f) << shift;
      if (!(b & 0x80)) return v;
    }
    fail("varint too long", pos_);
  }

  std::int64_t zigzag() {
    const std::uint64_t v = varint();
    return static_cast<std::int64_t>(v >> 1) ^ -static_cast<std::int64_t>(v & 1);
  }

  Value value(std::uint8_t type, int depth) {
    if (depth > kMaxDepth) fail("nesting too deep", pos_);
    switch (type) {
      case kBoolTrue: return Value{true};
      case kBoolFalse: return Value{false};
      case kByte: return Value{static_cast<std::int64_t>(static_cast<std::int8_t>(byte()))};
      case kI16:
      case kI32:
      case kI64: return Value{zigzag()};
      case kDouble: {
        if (pos_ + 8 > bytes_.size()) fail("truncated double", pos_);
        double d = 0;
        std::memcpy(&d, bytes_.data() + pos_, 8);
        pos_ += 8;
        return Value{d};
      }
      case kBinary: {
        const std::uint64_t len = varint();
        if (len > bytes_.size() - pos_) fail("binary length out of range", pos_);
        std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), len);
        pos_ += len;
        return Value{std::move(s)};
      }
      case kList:
      case kSet: {
        const std::uint8_t header = byte();
        std::uint64_t size = header >> 4;
        const std::uint8_t elem = header & 0x0f;
        if (size == 15) size = varint();
        if (size > bytes_.size() - pos_) fail("list size out of range", pos_);
        std::vector<Value> items;
        items.reserve(size);
        for (std::uint64_t i = 0; i < size; ++i) {
          // booleans inside containers are one byte each
          if (elem == kBoolTrue || elem == kBoolFalse) {
            items.push_back(Value{byte() == kBoolTrue});
          } else {
            items.push_back(value(elem, depth + 1));
          }
        }
        return Value{std::move(items)};
      }
      case kMap: {
        const std::uint64_t size = varint();
        std::vector<Value> items;
        if (size == 0) return Value{std::move(items)};
        const std::uint8_t kv = byte();
        if (size > bytes_.size() - pos_) fail("map size out of range", pos_);
        for (std::uint64_t i = 0; i < size; ++i) {
          items.push_back(value(kv >> 4, depth + 1));
          items.push_back(value(kv & 0x0f, depth + 1));
        }
        return Value{std::move(items)};
      }
      case kStruct: return structure(depth + 1);
      default: fail("unknown compact type", pos_);
    }
  }

  Value structure(int depth) {
    std::vector<Field> fields;
    std::int16_t last = 0;
    for (;;) {
      const std::uint8_t header = byte();
      if (header == kStop) break;
      const std::uint8_t type = header & 0x0f;
      const std::uint8_t delta = header >> 4;
      std::int16_t id = 0;
      if (delta != 0) {
        id = static_cast<std::int16_t>(last + delta);
      } else {
        id = static_cast<std::int16_t>(zigzag());
      }
      last = id;
      fields.push_back(Field{id, value(type, depth)});
    }
    return Value{std::move(fields)};
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_;
};

}  // namespace

std::int64_t Value::as_int() const {
  if (const auto* v = std::get_if<std::int64_t>(&data)) return *v;
  if (const auto* b = std::get_if<bool>(&data)) return *b ? 1 : 0;
  throw ParseError("parquet metadata: expected integer", 0, 0);
}

bool Value::as_bool() const {
  if (const auto* b = std::get_if<bool>(&data)) return *b;
  if (const auto* v = std::get_if<std::int64_t>(&data)) return *v != 0;
  throw ParseError("parquet metadata: expected boolean", 0, 0);
}

const std::string& Value::as_binary() const {
  if (const auto* s = std::get_if<std::string>(&data)) return *s;
  throw ParseError("parquet metadata: expected binary", 0, 0);
}

const std::vector<Value>& Value::as_list() const {
  if (const auto* l = std::get_if<std::vector<Value>>(&data)) return *l;
  throw ParseError("parquet metadata: expected list", 0, 0);
}

const std::vector<Field>& Value::as_struct() const {
  if (const auto* s = std::get_if<std::vector<Field>>(&data)) return *s;
  throw ParseError("parquet metadata: expected struct", 0, 0);
}

const Value* Value::get(std::int16_t id) const {
  const auto* s = std::get_if<std::vector<Field>>(&data);
  if (!s) return nullptr;
  for (const auto& f : *s) {
    if (f.id == id) return &f.value;
  }
  return nullptr;
}

Value read_struct(std::span<const std::uint8_t> bytes, std::size_t& pos) {
  Reader r(bytes, pos);
  Value v = r.structure(0);
  pos = r.pos();
  return v;
}

void Writer::varint(std::uint64_t v) {
  while (v >= 0x80) {
    out_.push_back(static_cast<std::uint8_t>(v | 0x80));
    v >>= 7;
  }
  out_.push_back(static_cast<std::uint8_t>(v));
}

void Writer::field_header(std::int16_t id, std::uint8_t type) {
  const int delta = id - last_ids_.back();
  if (delta > 0 && delta <= 15) {
    out_.push_back(static_cast<std::uint8_t>((delta << 4) | type));
  } else {
    out_.push_back(type);
    const auto zz = static_cast<std::uint64_t>((static_cast<std::int64_t>(id) << 1) ^
                                               (static_cast<std::int64_t>(id) >> 63));
    varint(zz);
  }
  last_ids_.back() = id;
}

void Writer::i32(std::int16_t id, std::int32_t v) {
  field_header(id, kI32);
  varint(static_cast<std::uint32_t>((v << 1) ^ (v >> 31)));
}

void Writer::i64(std::int16_t id, std::int64_t v) {
  field_header(id, kI64);
  varint(static_cast<std::uint64_t>((v << 1) ^ (v >> 63)));
}

void Writer::binary(std::int16_t id, std::string_view v) {
  field_header(id, kBinary);
  varint(v.size());
  out_.insert(out_.end(), v.begin(), v.end());
}

void Writer::boolean(std::int16_t id, bool v) { field_header(id, v ? kBoolTrue : kBoolFalse); }

void Writer::begin_struct(std::int16_t id) {
  field_header(id, kStruct);
  last_ids_.push_back(0);
}

void Writer::end_struct() {
  out_.push_back(kStop);
  last_ids_.pop_back();
}

void Writer::stop() { out_.push_back(kStop); }

void Writer::begin_list(std::int16_t id, CompactType element, std::size_t size) {
  field_header(id, kList);
  if (size < 15) {
    out_.push_back(static_cast<std::uint8_t>((size << 4) | element));
  } else {
    out_.push_back(static_cast<std::uint8_t>(0xf0 | element));
    varint(size);
  }
}

void Writer::list_i32(std::int32_t v) { varint(static_cast<std::uint32_t>((v << 1) ^ (v >> 31))); }

void Writer::list_binary(std::string_view v) {
  varint(v.size());
  out_.insert(out_.end(), v.begin(), v.end());
}

void Writer::begin_list_struct() { last_ids_.push_back(0); }

}  // namespace crosswalk::thrift
