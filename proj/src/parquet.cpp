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

#include "crosswalk/parquet.hpp"

#include <zlib.h>

#include <charconv>
#include <cstring>
#include <optional>

#include "crosswalk/error.hpp"
#include "thrift_compact.hpp"

namespace crosswalk::parquet {

namespace {

// parquet.thrift enums
enum PhysicalType { kBoolean = 0, kInt32 = 1, kInt64 = 2, kInt96 = 3, kFloat = 4, kDouble = 5,
                    kByteArray = 6, kFixedLenByteArray = 7 };
enum Repetition { kRequired = 0, kOptional = 1, kRepeated = 2 };
enum Codec { kUncompressed = 0, kSnappy = 1, kGzip = 2 };
enum PageType { kDataPage = 0, kDictionaryPage = 2, kDataPageV2 = 3 };
enum Encoding { kPlain = 0, kPlainDictionary = 2, kRle = 3, kRleDictionary = 8 };
enum ConvertedType { kUtf8 = 0, kList = 3, kEnum = 4, kDecimal = 5, kDate = 6, kTimeMillis = 7,
                     kTimeMicros = 8, kTimestampMillis = 9, kTimestampMicros = 10, kUint8 = 11,
                     kUint16 = 12, kUint32 = 13, kUint64 = 14, kJson = 19 };

constexpr char kMagic[] = "PAR1";

[[noreturn]] void corrupt(const std::string& what, std::size_t offset = 0) {
  throw ParseError("parquet: " + what, 0, offset);
}

std::uint32_t load_u32(const std::uint8_t* p) {
  return static_cast<std::uint32_t>(p[0]) | static_cast<std::uint32_t>(p[1]) << 8 |
         static_cast<std::uint32_t>(p[2]) << 16 | static_cast<std::uint32_t>(p[3]) << 24;
}

std::uint64_t load_u64(const std::uint8_t* p) {
  return static_cast<std::uint64_t>(load_u32(p)) | static_cast<std::uint64_t>(load_u32(p + 4)) << 32;
}

std::int64_t int_or(const thrift::Value* v, std::int64_t fallback) {
  return v ? v->as_int() : fallback;
}

// ---------------------------------------------------------------------------
// Logical interpretation of physical values as canonical text

enum class TimeUnit { millis, micros, nanos };

struct Interpretation {
  int physical = kByteArray;
  int type_length = 0;
  std::optional<int> converted;
  bool string_like = false;
  bool date = false;
  std::optional<TimeUnit> timestamp;
  std::optional<TimeUnit> time;
  std::optional<int> decimal_scale;
  bool unsigned_int = false;
  bool uuid = false;
};

Interpretation interpret(const thrift::Value& element) {
  Interpretation in;
  in.physical = static_cast<int>(int_or(element.get(1), kByteArray));
  in.type_length = static_cast<int>(int_or(element.get(2), 0));
  if (const auto* c = element.get(6)) {
    const int ct = static_cast<int>(c->as_int());
    in.converted = ct;
    switch (ct) {
      case kUtf8:
      case kEnum:
      case kJson: in.string_like = true; break;
      case kDate: in.date = true; break;
      case kTimestampMillis: in.timestamp = TimeUnit::millis; break;
      case kTimestampMicros: in.timestamp = TimeUnit::micros; break;
      case kTimeMillis: in.time = TimeUnit::millis; break;
      case kTimeMicros: in.time = TimeUnit::micros; break;
      case kDecimal: in.decimal_scale = static_cast<int>(int_or(element.get(7), 0)); break;
      case kUint8:
      case kUint16:
      case kUint32:
      case kUint64: in.unsigned_int = true; break;
      default: break;
    }
  }
  if (const auto* logical = element.get(10)) {
    auto unit_of = [](const thrift::Value* u) {
      if (!u) return TimeUnit::micros;
      if (u->get(1)) return TimeUnit::millis;
      if (u->get(3)) return TimeUnit::nanos;
      return TimeUnit::micros;
    };
    if (logical->get(1) || logical->get(4) || logical->get(12)) in.string_like = true;
    if (const auto* d = logical->get(5)) in.decimal_scale = static_cast<int>(int_or(d->get(1), 0));
    if (logical->get(6)) in.date = true;
    if (const auto* t = logical->get(7)) in.time = unit_of(t->get(2));
    if (const auto* t = logical->get(8)) in.timestamp = unit_of(t->get(2));
    if (const auto* i = logical->get(10)) {
      if (const auto* s = i->get(2)) in.unsigned_int = !s->as_bool();
    }
    if (logical->get(14)) in.uuid = true;
  }
  return in;
}

std::string decimal_text(__int128 unscaled, int scale) {
  const bool negative = unscaled < 0;
  unsigned __int128 mag = negative ? static_cast<unsigned __int128>(-(unscaled + 1)) + 1
                                   : static_cast<unsigned __int128>(unscaled);
  std::string digits;
  do {
    digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(mag % 10)));
    mag /= 10;
  } while (mag != 0);
  if (scale > 0) {
    if (static_cast<int>(digits.size()) <= scale) {
      digits.insert(0, static_cast<std::size_t>(scale) - digits.size() + 1, '0');
    }
    digits.insert(digits.size() - static_cast<std::size_t>(scale), ".");
  } else if (scale < 0) {
    digits.append(static_cast<std::size_t>(-scale), '0');
  }
  return negative ? "-" + digits : digits;
}

std::string hex_text(std::string_view bytes) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out = "0x";
  for (const unsigned char b : bytes) {
    out += kDigits[b >> 4];
    out += kDigits[b & 0xf];
  }
  return out;
}

std::string time_text(std::int64_t value, TimeUnit unit) {
  const std::int64_t per_second = unit == TimeUnit::millis ? 1000 : unit == TimeUnit::micros ? 1000000 : 1000000000;
  DateTime dt;
  dt.seconds = value / per_second;
  std::int64_t frac = value % per_second;
  if (frac < 0) {
    frac += per_second;
    --dt.seconds;
  }
  dt.nanos = static_cast<std::uint32_t>(frac * (1000000000 / per_second));
  const std::string iso = dt.iso();  // 1970-01-01THH:MM:SS[.f]Z
  return iso.substr(11, iso.size() - 12);
}

std::string timestamp_text(std::int64_t value, TimeUnit unit) {
  const std::int64_t per_second = unit == TimeUnit::millis ? 1000 : unit == TimeUnit::micros ? 1000000 : 1000000000;
  DateTime dt;
  dt.seconds = value / per_second;
  std::int64_t frac = value % per_second;
  if (frac < 0) {
    frac += per_second;
    --dt.seconds;
  }
  dt.nanos = static_cast<std::uint32_t>(frac * (1000000000 / per_second));
  return dt.iso();
}

std::string int_text(std::int64_t v, const Interpretation& in, int width) {
  if (in.date) return Date::from_days(v).iso();
  if (in.timestamp) return timestamp_text(v, *in.timestamp);
  if (in.time) return time_text(v, *in.time);
  if (in.decimal_scale) return decimal_text(v, *in.decimal_scale);
  if (in.unsigned_int) {
    return std::to_string(width == 32 ? static_cast<std::uint64_t>(static_cast<std::uint32_t>(v))
                                      : static_cast<std::uint64_t>(v));
  }
  return std::to_string(v);
}

std::string bytes_text(std::string_view bytes, const Interpretation& in) {
  if (in.decimal_scale && !bytes.empty() && bytes.size() <= 16) {
    __int128 v = static_cast<signed char>(bytes[0]) < 0 ? -1 : 0;
    for (const unsigned char b : bytes) v = (v << 8) | b;
    return decimal_text(v, *in.decimal_scale);
  }
  if (in.uuid && bytes.size() == 16) {
    std::string h = hex_text(bytes).substr(2);
    return h.substr(0, 8) + "-" + h.substr(8, 4) + "-" + h.substr(12, 4) + "-" + h.substr(16, 4) +
           "-" + h.substr(20);
  }
  if (in.string_like || in.physical == kByteArray) {
    // unannotated binary is kept as text when it is valid UTF-8
    bool ascii_or_utf8 = true;
    for (std::size_t i = 0; i < bytes.size() && ascii_or_utf8;) {
      const auto c = static_cast<unsigned char>(bytes[i]);
      std::size_t len = c < 0x80 ? 1 : (c >> 5) == 6 ? 2 : (c >> 4) == 14 ? 3 : (c >> 3) == 30 ? 4 : 0;
      if (len == 0 || i + len > bytes.size()) {
        ascii_or_utf8 = false;
        break;
      }
      for (std::size_t k = 1; k < len; ++k) {
        if ((static_cast<unsigned char>(bytes[i + k]) >> 6) != 2) ascii_or_utf8 = false;
      }
      i += len;
    }
    if (in.string_like || ascii_or_utf8) return std::string(bytes);
  }
  return hex_text(bytes);
}

// ---------------------------------------------------------------------------
// Decompression

std::vector<std::uint8_t> gzip_decompress(std::span<const std::uint8_t> input, std::size_t expected) {
  std::vector<std::uint8_t> out(expected);
  z_stream zs{};
  if (inflateInit2(&zs, 15 + 32) != Z_OK) corrupt("zlib init failed");
  zs.next_in = const_cast<Bytef*>(input.data());
  zs.avail_in = static_cast<uInt>(input.size());
  zs.next_out = out.data();
  zs.avail_out = static_cast<uInt>(out.size());
  const int rc = inflate(&zs, Z_FINISH);
  inflateEnd(&zs);
  if (rc != Z_STREAM_END || zs.total_out != expected) corrupt("gzip page decompression failed");
  return out;
}

std::vector<std::uint8_t> decompress(int codec, std::span<const std::uint8_t> input, std::size_t expected) {
  switch (codec) {
    case kUncompressed: return {input.begin(), input.end()};
    case kSnappy: {
      auto out = snappy_decompress(input);
      if (out.size() != expected) corrupt("snappy page has unexpected size");
      return out;
    }
    case kGzip: return gzip_decompress(input, expected);
    default:
      throw UnsupportedFormatError("parquet: unsupported compression codec " + std::to_string(codec));
  }
}

// ---------------------------------------------------------------------------
// Level and value decoding

class ByteReader {
 public:
  ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t remaining() const { return bytes_.size() - pos_; }
  std::size_t pos() const { return pos_; }

  std::span<const std::uint8_t> take(std::size_t n) {
    if (n > remaining()) corrupt("page data truncated");
    auto s = bytes_.subspan(pos_, n);
    pos_ += n;
    return s;
  }

  std::uint8_t byte() { return take(1)[0]; }

  std::uint64_t varint() {
    std::uint64_t v = 0;
    for (int shift = 0; shift < 64; shift += 7) {
      const std::uint8_t b = byte();
      v |= static_cast<std::uint64_t>(b & 0x7f) << shift;
      if (!(b & 0x80)) return v;
    }
    corrupt("varint too long");
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

int bit_width(std::uint32_t max_value) {
  int w = 0;
  while (max_value >> w) ++w;
  return w;
}

/// RLE / bit-packed hybrid decoder.
std::vector<std::uint32_t> decode_hybrid(std::span<const std::uint8_t> data, int width, std::size_t count) {
  std::vector<std::uint32_t> out;
  out.reserve(count);
  if (width == 0) {
    out.assign(count, 0);
    return out;
  }
  if (width > 32) corrupt("bit width too large");
  ByteReader r(data);
  const std::size_t value_bytes = static_cast<std::size_t>((width + 7) / 8);
  while (out.size() < count) {
    const std::uint64_t header = r.varint();
    if (header & 1) {
      const std::size_t groups = header >> 1;
      const std::size_t nbytes = groups * static_cast<std::size_t>(width);
      const auto packed = r.take(std::min(nbytes, r.remaining()));
      const std::size_t values = groups * 8;
      for (std::size_t i = 0; i < values && out.size() < count; ++i) {
        std::uint64_t v = 0;
        const std::size_t bit = i * static_cast<std::size_t>(width);
        for (int b = 0; b < width; ++b) {
          const std::size_t pos = bit + static_cast<std::size_t>(b);
          if (pos / 8 >= packed.size()) corrupt("bit-packed run truncated");
          v |= static_cast<std::uint64_t>((packed[pos / 8] >> (pos % 8)) & 1) << b;
        }
        out.push_back(static_cast<std::uint32_t>(v));
      }
    } else {
      const std::size_t run = header >> 1;
      if (run == 0) corrupt("empty RLE run");
      std::uint32_t v = 0;
      const auto bytes = r.take(value_bytes);
      for (std::size_t b = 0; b < value_bytes; ++b) v |= static_cast<std::uint32_t>(bytes[b]) << (8 * b);
      for (std::size_t i = 0; i < run && out.size() < count; ++i) out.push_back(v);
    }
  }
  return out;
}

std::vector<std::string> decode_plain(ByteReader& r, std::size_t count, const Interpretation& in) {
  std::vector<std::string> out;
  out.reserve(count);
  switch (in.physical) {
    case kBoolean: {
      const auto bytes = r.take((count + 7) / 8);
      for (std::size_t i = 0; i < count; ++i) out.push_back((bytes[i / 8] >> (i % 8)) & 1 ? "true" : "false");
      break;
    }
    case kInt32:
      for (std::size_t i = 0; i < count; ++i) {
        const auto v = static_cast<std::int32_t>(load_u32(r.take(4).data()));
        out.push_back(int_text(v, in, 32));
      }
      break;
    case kInt64:
      for (std::size_t i = 0; i < count; ++i) {
        const auto v = static_cast<std::int64_t>(load_u64(r.take(8).data()));
        out.push_back(int_text(v, in, 64));
      }
      break;
    case kInt96:
      for (std::size_t i = 0; i < count; ++i) {
        const auto* p = r.take(12).data();
        const auto nanos_of_day = static_cast<std::int64_t>(load_u64(p));
        const auto julian = static_cast<std::int64_t>(load_u32(p + 8));
        out.push_back(timestamp_text((julian - 2440588) * 86400000000000LL + nanos_of_day, TimeUnit::nanos));
      }
      break;
    case kFloat:
      for (std::size_t i = 0; i < count; ++i) {
        float f = 0;
        std::memcpy(&f, r.take(4).data(), 4);
        char buf[32];
        const auto res = std::to_chars(buf, buf + sizeof buf, f);
        out.emplace_back(buf, res.ptr);
      }
      break;
    case kDouble:
      for (std::size_t i = 0; i < count; ++i) {
        double d = 0;
        std::memcpy(&d, r.take(8).data(), 8);
        out.push_back(format_number(d));
      }
      break;
    case kByteArray:
      for (std::size_t i = 0; i < count; ++i) {
        const std::uint32_t len = load_u32(r.take(4).data());
        const auto bytes = r.take(len);
        out.push_back(bytes_text(std::string_view(reinterpret_cast<const char*>(bytes.data()), len), in));
      }
      break;
    case kFixedLenByteArray:
      for (std::size_t i = 0; i < count; ++i) {
        const auto bytes = r.take(static_cast<std::size_t>(in.type_length));
        out.push_back(bytes_text(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()), in));
      }
      break;
    default: corrupt("unknown physical type " + std::to_string(in.physical));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Schema

struct LeafColumn {
  std::string name;            // top-level column name
  std::vector<std::string> path;
  Interpretation interp;
  int max_def = 0;
  int max_rep = 0;
  bool is_list = false;
  int list_def = 0;            // def level at which the list itself is present
};

struct SchemaNode {
  const thrift::Value* element = nullptr;
  std::vector<SchemaNode> children;
};

SchemaNode build_tree(const std::vector<thrift::Value>& elements, std::size_t& index) {
  if (index >= elements.size()) corrupt("schema truncated");
  SchemaNode node;
  node.element = &elements[index++];
  const auto n = int_or(node.element->get(5), 0);
  for (std::int64_t i = 0; i < n; ++i) node.children.push_back(build_tree(elements, index));
  return node;
}

std::string node_name(const SchemaNode& n) { return n.element->get(4) ? n.element->get(4)->as_binary() : ""; }
int node_rep(const SchemaNode& n) { return static_cast<int>(int_or(n.element->get(3), kRequired)); }

bool node_is_list(const SchemaNode& n) {
  if (const auto* c = n.element->get(6); c && c->as_int() == kList) return true;
  if (const auto* l = n.element->get(10); l && l->get(3)) return true;
  return false;
}

std::optional<LeafColumn> resolve_column(const SchemaNode& top) {
  LeafColumn col;
  col.name = node_name(top);
  const int top_rep = node_rep(top);
  if (top.children.empty()) {
    col.path = {col.name};
    col.interp = interpret(*top.element);
    col.max_def = top_rep == kRequired ? 0 : 1;
    col.max_rep = top_rep == kRepeated ? 1 : 0;
    col.is_list = top_rep == kRepeated;
    col.list_def = 0;
    return col;
  }
  if (!node_is_list(top) || top.children.size() != 1) return std::nullopt;
  const SchemaNode& repeated = top.children.front();
  if (node_rep(repeated) != kRepeated) return std::nullopt;
  col.is_list = true;
  col.list_def = top_rep == kOptional ? 1 : 0;
  if (repeated.children.empty()) {
    // two-level list: repeated primitive
    col.path = {col.name, node_name(repeated)};
    col.interp = interpret(*repeated.element);
    col.max_def = col.list_def + 1;
    col.max_rep = 1;
    return col;
  }
  if (repeated.children.size() != 1 || !repeated.children.front().children.empty()) return std::nullopt;
  const SchemaNode& element = repeated.children.front();
  col.path = {col.name, node_name(repeated), node_name(element)};
  col.interp = interpret(*element.element);
  col.max_def = col.list_def + 1 + (node_rep(element) == kOptional ? 1 : 0);
  col.max_rep = 1;
  return col;
}

// ---------------------------------------------------------------------------
// Column chunk reading

struct ChunkData {
  std::vector<std::uint32_t> def;
  std::vector<std::uint32_t> rep;
  std::vector<std::string> values;
};

void read_chunk(std::span<const std::uint8_t> file, const thrift::Value& meta, const LeafColumn& col,
                ChunkData& out) {
  const int codec = static_cast<int>(int_or(meta.get(4), 0));
  const std::int64_t num_values = int_or(meta.get(5), 0);
  std::int64_t offset = int_or(meta.get(9), 0);
  if (const auto* dict = meta.get(11); dict && dict->as_int() > 0 && dict->as_int() < offset) {
    offset = dict->as_int();
  }
  std::vector<std::string> dictionary;
  std::int64_t seen = 0;
  const int def_width = bit_width(static_cast<std::uint32_t>(col.max_def));
  const int rep_width = bit_width(static_cast<std::uint32_t>(col.max_rep));

  while (seen < num_values) {
    if (offset < 0 || static_cast<std::size_t>(offset) >= file.size()) corrupt("page offset out of range");
    std::size_t pos = static_cast<std::size_t>(offset);
    const thrift::Value header = thrift::read_struct(file, pos);
    const int type = static_cast<int>(int_or(header.get(1), -1));
    const auto uncompressed = static_cast<std::size_t>(int_or(header.get(2), 0));
    const auto compressed = static_cast<std::size_t>(int_or(header.get(3), 0));
    if (compressed > file.size() - pos) corrupt("page extends past end of file", pos);
    const auto payload = file.subspan(pos, compressed);
    offset = static_cast<std::int64_t>(pos + compressed);

    if (type == kDictionaryPage) {
      const auto* dh = header.get(7);
      const auto n = static_cast<std::size_t>(dh ? int_or(dh->get(1), 0) : 0);
      const auto raw = decompress(codec, payload, uncompressed);
      ByteReader r(raw);
      dictionary = decode_plain(r, n, col.interp);
      continue;
    }
    if (type != kDataPage && type != kDataPageV2) continue;  // index pages

    std::size_t count = 0;
    int encoding = kPlain;
    std::vector<std::uint8_t> values_buf;
    std::vector<std::uint32_t> def;
    std::vector<std::uint32_t> rep;
    if (type == kDataPage) {
      const auto* dh = header.get(5);
      if (!dh) corrupt("data page without header");
      count = static_cast<std::size_t>(int_or(dh->get(1), 0));
      encoding = static_cast<int>(int_or(dh->get(2), kPlain));
      const auto raw = decompress(codec, payload, uncompressed);
      ByteReader r(raw);
      if (col.max_rep > 0) {
        const std::uint32_t len = load_u32(r.take(4).data());
        rep = decode_hybrid(r.take(len), rep_width, count);
      }
      if (col.max_def > 0) {
        const std::uint32_t len = load_u32(r.take(4).data());
        def = decode_hybrid(r.take(len), def_width, count);
      }
      const auto rest = r.take(r.remaining());
      values_buf.assign(rest.begin(), rest.end());
    } else {
      const auto* dh = header.get(8);
      if (!dh) corrupt("data page v2 without header");
      count = static_cast<std::size_t>(int_or(dh->get(1), 0));
      encoding = static_cast<int>(int_or(dh->get(4), kPlain));
      const auto def_len = static_cast<std::size_t>(int_or(dh->get(5), 0));
      const auto rep_len = static_cast<std::size_t>(int_or(dh->get(6), 0));
      const bool is_compressed = dh->get(7) ? dh->get(7)->as_bool() : true;
      if (def_len + rep_len > payload.size()) corrupt("level data exceeds page");
      if (col.max_rep > 0) rep = decode_hybrid(payload.subspan(0, rep_len), rep_width, count);
      if (col.max_def > 0) def = decode_hybrid(payload.subspan(rep_len, def_len), def_width, count);
      const auto body = payload.subspan(rep_len + def_len);
      if (is_compressed) {
        values_buf = decompress(codec, body, uncompressed - rep_len - def_len);
      } else {
        values_buf.assign(body.begin(), body.end());
      }
    }
    if (def.empty()) def.assign(count, static_cast<std::uint32_t>(col.max_def));
    if (rep.empty()) rep.assign(count, 0);
    std::size_t present = 0;
    for (const auto d : def) present += d == static_cast<std::uint32_t>(col.max_def);

    ByteReader vr(values_buf);
    if (encoding == kPlain) {
      auto vals = decode_plain(vr, present, col.interp);
      out.values.insert(out.values.end(), std::make_move_iterator(vals.begin()),
                        std::make_move_iterator(vals.end()));
    } else if (encoding == kPlainDictionary || encoding == kRleDictionary) {
      if (present > 0) {
        const int width = vr.byte();
        const auto idx = decode_hybrid(vr.take(vr.remaining()), width, present);
        for (const auto i : idx) {
          if (i >= dictionary.size()) corrupt("dictionary index out of range");
          out.values.push_back(dictionary[i]);
        }
      }
    } else if (encoding == kRle && col.interp.physical == kBoolean) {
      // 4-byte little-endian length, then the hybrid runs at bit width 1.
      if (present > 0) {
        const auto len_bytes = vr.take(4);
        const std::size_t len = len_bytes[0] | (len_bytes[1] << 8) | (len_bytes[2] << 16) |
                                (static_cast<std::size_t>(len_bytes[3]) << 24);
        for (const auto bit : decode_hybrid(vr.take(len), 1, present)) out.values.push_back(bit ? "true" : "false");
      }
    } else {
      throw UnsupportedFormatError("parquet: unsupported value encoding " + std::to_string(encoding));
    }
    out.def.insert(out.def.end(), def.begin(), def.end());
    out.rep.insert(out.rep.end(), rep.begin(), rep.end());
    seen += static_cast<std::int64_t>(count);
  }
}

Cells assemble(const LeafColumn& col, const ChunkData& data, std::size_t expected_rows) {
  Cells cells;
  cells.reserve(expected_rows);
  std::size_t next = 0;
  const auto max_def = static_cast<std::uint32_t>(col.max_def);
  if (!col.is_list) {
    for (const auto d : data.def) {
      if (d == max_def) {
        if (next >= data.values.size()) corrupt("fewer values than definition levels");
        cells.push_back(CellValue::text(data.values[next++]));
      } else {
        cells.emplace_back();
      }
    }
    return cells;
  }
  const auto list_def = static_cast<std::uint32_t>(col.list_def);
  std::optional<ListValue> current;
  bool row_open = false;
  auto flush = [&] {
    if (!row_open) return;
    if (current) {
      cells.push_back(CellValue::text(to_script_literal(*current)));
    } else {
      cells.emplace_back();
    }
    current.reset();
  };
  for (std::size_t i = 0; i < data.def.size(); ++i) {
    const auto d = data.def[i];
    if (data.rep[i] == 0) {
      flush();
      row_open = true;
      if (d < list_def) continue;  // null list
      current.emplace();
      if (d == list_def) continue;  // empty list
    }
    if (!current) current.emplace();
    if (d == max_def) {
      if (next >= data.values.size()) corrupt("fewer values than definition levels");
      current->push_back(data.values[next++]);
    } else {
      current->push_back(std::monostate{});
    }
  }
  flush();
  return cells;
}

}  // namespace

std::vector<std::uint8_t> snappy_decompress(std::span<const std::uint8_t> input) {
  ByteReader r(input);
  const std::uint64_t length = r.varint();
  if (length > (std::uint64_t{1} << 32)) corrupt("snappy length too large");
  std::vector<std::uint8_t> out;
  out.reserve(length);
  while (r.remaining() > 0) {
    const std::uint8_t tag = r.byte();
    const int kind = tag & 3;
    if (kind == 0) {
      std::size_t len = tag >> 2;
      if (len >= 60) {
        const std::size_t extra = len - 59;
        const auto b = r.take(extra);
        len = 0;
        for (std::size_t i = 0; i < extra; ++i) len |= static_cast<std::size_t>(b[i]) << (8 * i);
      }
      const auto lit = r.take(len + 1);
      out.insert(out.end(), lit.begin(), lit.end());
      continue;
    }
    std::size_t len = 0;
    std::size_t offset = 0;
    if (kind == 1) {
      len = ((tag >> 2) & 7) + 4;
      offset = (static_cast<std::size_t>(tag >> 5) << 8) | r.byte();
    } else if (kind == 2) {
      len = (tag >> 2) + 1;
      const auto b = r.take(2);
      offset = b[0] | static_cast<std::size_t>(b[1]) << 8;
    } else {
      len = (tag >> 2) + 1;
      offset = load_u32(r.take(4).data());
    }
    if (offset == 0 || offset > out.size()) corrupt("snappy copy offset out of range");
    const std::size_t start = out.size() - offset;
    for (std::size_t i = 0; i < len; ++i) out.push_back(out[start + i]);
  }
  if (out.size() != length) corrupt("snappy length mismatch");
  return out;
}

ReadResult read(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), kMagic, 4) != 0 ||
      std::memcmp(bytes.data() + bytes.size() - 4, kMagic, 4) != 0) {
    corrupt("missing PAR1 magic");
  }
  const std::uint32_t footer_len = load_u32(bytes.data() + bytes.size() - 8);
  if (footer_len > bytes.size() - 12) corrupt("footer length out of range");
  std::size_t pos = bytes.size() - 8 - footer_len;
  const thrift::Value meta = thrift::read_struct(bytes, pos);

  const auto* schema_list = meta.get(2);
  if (!schema_list) corrupt("file has no schema");
  const auto& elements = schema_list->as_list();
  std::size_t index = 0;
  const SchemaNode root = build_tree(elements, index);
  const auto num_rows = static_cast<std::size_t>(int_or(meta.get(3), 0));

  ReadResult result;
  std::vector<LeafColumn> columns;
  for (const auto& top : root.children) {
    if (auto col = resolve_column(top)) {
      columns.push_back(std::move(*col));
    } else {
      result.skipped_columns.push_back(node_name(top));
    }
  }

  std::vector<ChunkData> data(columns.size());
  if (const auto* groups = meta.get(4)) {
    for (const auto& group : groups->as_list()) {
      const auto* chunks = group.get(1);
      if (!chunks) continue;
      for (const auto& chunk : chunks->as_list()) {
        const auto* cm = chunk.get(3);
        if (!cm) corrupt("column chunk without metadata");
        const auto* path_v = cm->get(3);
        if (!path_v) continue;
        std::vector<std::string> path;
        for (const auto& p : path_v->as_list()) path.push_back(p.as_binary());
        for (std::size_t c = 0; c < columns.size(); ++c) {
          if (columns[c].path == path) read_chunk(bytes, *cm, columns[c], data[c]);
        }
      }
    }
  }

  std::vector<Column> out;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    Cells cells = assemble(columns[c], data[c], num_rows);
    if (cells.size() != num_rows) corrupt("column '" + columns[c].name + "' row count mismatch");
    out.emplace_back(columns[c].name, std::move(cells));
  }
  std::vector<RowLabel> labels(num_rows);
  for (std::size_t i = 0; i < num_rows; ++i) labels[i] = i;
  result.table = Table(std::move(out), std::move(labels));
  return result;
}

// ---------------------------------------------------------------------------
// Writer

namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_varint(std::vector<std::uint8_t>& out, std::uint64_t v) {
  while (v >= 0x80) {
    out.push_back(static_cast<std::uint8_t>(v | 0x80));
    v >>= 7;
  }
  out.push_back(static_cast<std::uint8_t>(v));
}

/// Run-length-only hybrid encoding; levels never exceed one byte.
std::vector<std::uint8_t> encode_levels(const std::vector<std::uint32_t>& levels) {
  std::vector<std::uint8_t> out;
  std::size_t i = 0;
  while (i < levels.size()) {
    std::size_t j = i;
    while (j < levels.size() && levels[j] == levels[i]) ++j;
    put_varint(out, static_cast<std::uint64_t>(j - i) << 1);
    out.push_back(static_cast<std::uint8_t>(levels[i]));
    i = j;
  }
  return out;
}

[[noreturn]] void type_mismatch(const std::string& column, const CellValue& cell, ColumnType type) {
  static constexpr const char* kNames[] = {"string", "integer", "number", "boolean", "date", "datetime", "list"};
  throw Error("parquet export: column '" + column + "' expects " + kNames[static_cast<int>(type)] +
              " values, found " + std::string(to_string(cell.kind())));
}

struct EncodedColumn {
  std::vector<std::uint8_t> page;  // header + body
  std::size_t num_values = 0;
  std::size_t uncompressed = 0;
};

EncodedColumn encode_column(const Column& column, ColumnType type) {
  std::vector<std::uint32_t> def;
  std::vector<std::uint32_t> rep;
  std::vector<std::uint8_t> values;
  std::size_t bool_count = 0;
  const bool is_list = type == ColumnType::list;

  auto put_bytes = [&values](std::string_view s) {
    put_u32(values, static_cast<std::uint32_t>(s.size()));
    values.insert(values.end(), s.begin(), s.end());
  };

  for (const auto& cell : column.cells()) {
    if (is_list) {
      if (cell.is_empty()) {
        def.push_back(0);
        rep.push_back(0);
        continue;
      }
      const auto* list = cell.as_list();
      if (!list) type_mismatch(column.name(), cell, type);
      if (list->empty()) {
        def.push_back(1);
        rep.push_back(0);
        continue;
      }
      for (std::size_t i = 0; i < list->size(); ++i) {
        rep.push_back(i == 0 ? 0 : 1);
        if (std::holds_alternative<std::monostate>((*list)[i])) {
          def.push_back(2);
        } else {
          def.push_back(3);
          put_bytes(to_text((*list)[i]));
        }
      }
      continue;
    }
    if (cell.is_empty()) {
      def.push_back(0);
      continue;
    }
    def.push_back(1);
    switch (type) {
      case ColumnType::string:
        if (cell.as_list()) type_mismatch(column.name(), cell, type);
        put_bytes(to_text(cell));
        break;
      case ColumnType::integer:
        if (!cell.as_integer()) type_mismatch(column.name(), cell, type);
        put_u64(values, static_cast<std::uint64_t>(*cell.as_integer()));
        break;
      case ColumnType::number: {
        double d = 0;
        if (const auto* n = cell.as_number()) {
          d = *n;
        } else if (const auto* i = cell.as_integer()) {
          d = static_cast<double>(*i);
        } else {
          type_mismatch(column.name(), cell, type);
        }
        std::uint64_t bits = 0;
        std::memcpy(&bits, &d, 8);
        put_u64(values, bits);
        break;
      }
      case ColumnType::boolean:
        if (!cell.as_boolean()) type_mismatch(column.name(), cell, type);
        if (bool_count % 8 == 0) values.push_back(0);
        if (*cell.as_boolean()) values.back() |= static_cast<std::uint8_t>(1u << (bool_count % 8));
        ++bool_count;
        break;
      case ColumnType::date:
        if (!cell.as_date()) type_mismatch(column.name(), cell, type);
        put_u32(values, static_cast<std::uint32_t>(static_cast<std::int32_t>(cell.as_date()->days_since_epoch())));
        break;
      case ColumnType::datetime:
        if (!cell.as_datetime()) type_mismatch(column.name(), cell, type);
        put_u64(values, static_cast<std::uint64_t>(cell.as_datetime()->micros()));
        break;
      case ColumnType::list: break;
    }
  }

  std::vector<std::uint8_t> body;
  if (is_list) {
    const auto r = encode_levels(rep);
    put_u32(body, static_cast<std::uint32_t>(r.size()));
    body.insert(body.end(), r.begin(), r.end());
  }
  const auto d = encode_levels(def);
  put_u32(body, static_cast<std::uint32_t>(d.size()));
  body.insert(body.end(), d.begin(), d.end());
  body.insert(body.end(), values.begin(), values.end());

  thrift::Writer h;
  h.i32(1, kDataPage);
  h.i32(2, static_cast<std::int32_t>(body.size()));
  h.i32(3, static_cast<std::int32_t>(body.size()));
  h.begin_struct(5);
  h.i32(1, static_cast<std::int32_t>(def.size()));
  h.i32(2, kPlain);
  h.i32(3, kRle);
  h.i32(4, kRle);
  h.end_struct();
  h.stop();

  EncodedColumn out;
  out.page = h.bytes();
  out.page.insert(out.page.end(), body.begin(), body.end());
  out.num_values = def.size();
  out.uncompressed = out.page.size();
  return out;
}

int physical_of(ColumnType t) {
  switch (t) {
    case ColumnType::string:
    case ColumnType::list: return kByteArray;
    case ColumnType::integer: return kInt64;
    case ColumnType::number: return kDouble;
    case ColumnType::boolean: return kBoolean;
    case ColumnType::date: return kInt32;
    case ColumnType::datetime: return kInt64;
  }
  return kByteArray;
}

void write_schema(thrift::Writer& w, const Table& table, std::span<const ColumnType> types) {
  std::size_t elements = 1;
  for (const auto t : types) elements += t == ColumnType::list ? 3 : 1;
  w.begin_list(2, thrift::kStruct, elements);

  w.begin_list_struct();
  w.binary(4, "schema");
  w.i32(5, static_cast<std::int32_t>(table.column_count()));
  w.end_struct();

  auto leaf = [&w](const std::string& name, ColumnType t) {
    w.begin_list_struct();
    w.i32(1, physical_of(t));
    w.i32(3, kOptional);
    w.binary(4, name);
    switch (t) {
      case ColumnType::string:
      case ColumnType::list:
        w.i32(6, kUtf8);
        w.begin_struct(10);
        w.begin_struct(1);
        w.end_struct();
        w.end_struct();
        break;
      case ColumnType::date:
        w.i32(6, kDate);
        w.begin_struct(10);
        w.begin_struct(6);
        w.end_struct();
        w.end_struct();
        break;
      case ColumnType::datetime:
        w.i32(6, kTimestampMicros);
        w.begin_struct(10);
        w.begin_struct(8);
        w.boolean(1, true);
        w.begin_struct(2);
        w.begin_struct(2);
        w.end_struct();
        w.end_struct();
        w.end_struct();
        w.end_struct();
        break;
      default: break;
    }
    w.end_struct();
  };

  for (std::size_t c = 0; c < table.column_count(); ++c) {
    const auto& name = table.columns()[c].name();
    if (types[c] != ColumnType::list) {
      leaf(name, types[c]);
      continue;
    }
    w.begin_list_struct();
    w.i32(3, kOptional);
    w.binary(4, name);
    w.i32(5, 1);
    w.i32(6, kList);
    w.begin_struct(10);
    w.begin_struct(3);
    w.end_struct();
    w.end_struct();
    w.end_struct();

    w.begin_list_struct();
    w.i32(3, kRepeated);
    w.binary(4, "list");
    w.i32(5, 1);
    w.end_struct();

    leaf("element", ColumnType::list);
  }
}

}  // namespace

void write(std::ostream& out, const Table& table, std::span<const ColumnType> types) {
  if (types.size() != table.column_count()) throw PreconditionError("parquet export: one type per column required");
  std::vector<std::uint8_t> file(kMagic, kMagic + 4);
  std::vector<EncodedColumn> encoded;
  std::vector<std::size_t> offsets;
  for (std::size_t c = 0; c < table.column_count(); ++c) {
    encoded.push_back(encode_column(table.columns()[c], types[c]));
    offsets.push_back(file.size());
    file.insert(file.end(), encoded.back().page.begin(), encoded.back().page.end());
  }

  thrift::Writer w;
  w.i32(1, 1);
  write_schema(w, table, types);
  w.i64(3, static_cast<std::int64_t>(table.row_count()));
  w.begin_list(4, thrift::kStruct, 1);
  w.begin_list_struct();
  w.begin_list(1, thrift::kStruct, table.column_count());
  std::size_t total = 0;
  for (std::size_t c = 0; c < table.column_count(); ++c) {
    const auto& e = encoded[c];
    total += e.page.size();
    w.begin_list_struct();
    w.i64(2, static_cast<std::int64_t>(offsets[c]));
    w.begin_struct(3);
    w.i32(1, physical_of(types[c]));
    w.begin_list(2, thrift::kI32, 2);
    w.list_i32(kPlain);
    w.list_i32(kRle);
    const auto& name = table.columns()[c].name();
    if (types[c] == ColumnType::list) {
      w.begin_list(3, thrift::kBinary, 3);
      w.list_binary(name);
      w.list_binary("list");
      w.list_binary("element");
    } else {
      w.begin_list(3, thrift::kBinary, 1);
      w.list_binary(name);
    }
    w.i32(4, kUncompressed);
    w.i64(5, static_cast<std::int64_t>(e.num_values));
    w.i64(6, static_cast<std::int64_t>(e.page.size()));
    w.i64(7, static_cast<std::int64_t>(e.page.size()));
    w.i64(9, static_cast<std::int64_t>(offsets[c]));
    w.end_struct();
    w.end_struct();
  }
  w.i64(2, static_cast<std::int64_t>(total));
  w.i64(3, static_cast<std::int64_t>(table.row_count()));
  w.end_struct();
  w.binary(6, "crosswalk");
  w.stop();

  const auto& footer = w.bytes();
  file.insert(file.end(), footer.begin(), footer.end());
  put_u32(file, static_cast<std::uint32_t>(footer.size()));
  file.insert(file.end(), kMagic, kMagic + 4);
  out.write(reinterpret_cast<const char*>(file.data()), static_cast<std::streamsize>(file.size()));
  if (!out) throw IoError("parquet export: write failed");
}

}  // namespace crosswalk::parquet
