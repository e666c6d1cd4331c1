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

#include "xlsx.hpp"

#include <zlib.h>

#include <algorithm>
#include <cstring>
#include <map>
#include <string_view>

#include "crosswalk/error.hpp"

namespace crosswalk::xlsx {

namespace {

[[noreturn]] void corrupt(const std::string& what) { throw ParseError("xlsx: " + what, 0, 0); }

std::uint16_t u16(std::span<const std::uint8_t> b, std::size_t at) {
  if (at + 2 > b.size()) corrupt("truncated zip structure");
  return static_cast<std::uint16_t>(b[at] | b[at + 1] << 8);
}

std::uint32_t u32(std::span<const std::uint8_t> b, std::size_t at) {
  if (at + 4 > b.size()) corrupt("truncated zip structure");
  return static_cast<std::uint32_t>(b[at]) | static_cast<std::uint32_t>(b[at + 1]) << 8 |
         static_cast<std::uint32_t>(b[at + 2]) << 16 | static_cast<std::uint32_t>(b[at + 3]) << 24;
}

struct Entry {
  std::uint16_t method = 0;
  std::uint32_t compressed = 0;
  std::uint32_t uncompressed = 0;
  std::uint32_t local_offset = 0;
};

class Zip {
 public:
  explicit Zip(std::span<const std::uint8_t> bytes) : bytes_(bytes) {
    if (bytes.size() < 22) corrupt("not a zip archive");
    std::size_t eocd = std::string::npos;
    const std::size_t lowest = bytes.size() > 22 + 65535 ? bytes.size() - 22 - 65535 : 0;
    for (std::size_t i = bytes.size() - 22 + 1; i-- > lowest;) {
      if (u32(bytes, i) == 0x06054b50) {
        eocd = i;
        break;
      }
    }
    if (eocd == std::string::npos) corrupt("zip end-of-directory record not found");
    const std::uint16_t count = u16(bytes, eocd + 10);
    std::size_t pos = u32(bytes, eocd + 16);
    for (std::uint16_t i = 0; i < count; ++i) {
      if (u32(bytes, pos) != 0x02014b50) corrupt("bad zip central directory entry");
      Entry e;
      e.method = u16(bytes, pos + 10);
      e.compressed = u32(bytes, pos + 20);
      e.uncompressed = u32(bytes, pos + 24);
      const std::uint16_t name_len = u16(bytes, pos + 28);
      const std::uint16_t extra_len = u16(bytes, pos + 30);
      const std::uint16_t comment_len = u16(bytes, pos + 32);
      e.local_offset = u32(bytes, pos + 42);
      if (pos + 46 + name_len > bytes.size()) corrupt("truncated zip entry name");
      std::string name(reinterpret_cast<const char*>(bytes.data() + pos + 46), name_len);
      entries_[name] = e;
      pos += 46 + name_len + extra_len + comment_len;
    }
  }

  bool has(const std::string& name) const { return entries_.count(name) != 0; }

  std::string read(const std::string& name) const {
    const auto it = entries_.find(name);
    if (it == entries_.end()) corrupt("missing part '" + name + "'");
    const Entry& e = it->second;
    const std::size_t at = e.local_offset;
    if (u32(bytes_, at) != 0x04034b50) corrupt("bad zip local header");
    const std::size_t data = at + 30 + u16(bytes_, at + 26) + u16(bytes_, at + 28);
    if (data + e.compressed > bytes_.size()) corrupt("zip entry extends past end of file");
    const auto* src = bytes_.data() + data;
    if (e.method == 0) return std::string(reinterpret_cast<const char*>(src), e.compressed);
    if (e.method != 8) throw UnsupportedFormatError("xlsx: unsupported zip compression method");
    std::string out(e.uncompressed, '\0');
    z_stream zs{};
    if (inflateInit2(&zs, -15) != Z_OK) corrupt("zlib init failed");
    zs.next_in = const_cast<Bytef*>(src);
    zs.avail_in = e.compressed;
    zs.next_out = reinterpret_cast<Bytef*>(out.data());
    zs.avail_out = static_cast<uInt>(out.size());
    const int rc = inflate(&zs, Z_FINISH);
    inflateEnd(&zs);
    if (rc != Z_STREAM_END || zs.total_out != e.uncompressed) corrupt("cannot inflate '" + name + "'");
    return out;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::map<std::string, Entry> entries_;
};

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

std::string unescape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (std::size_t i = 0; i < s.size();) {
    if (s[i] == '&') {
      const std::size_t semi = s.find(';', i);
      if (semi != std::string_view::npos) {
        const std::string_view ent = s.substr(i + 1, semi - i - 1);
        if (ent == "amp") out += '&';
        else if (ent == "lt") out += '<';
        else if (ent == "gt") out += '>';
        else if (ent == "quot") out += '"';
        else if (ent == "apos") out += '\'';
        else if (!ent.empty() && ent[0] == '#') {
          const bool hex = ent.size() > 1 && (ent[1] == 'x' || ent[1] == 'X');
          append_utf8(out, static_cast<std::uint32_t>(
                               std::stoul(std::string(ent.substr(hex ? 2 : 1)), nullptr, hex ? 16 : 10)));
        } else {
          out.append(s.substr(i, semi - i + 1));
        }
        i = semi + 1;
        continue;
      }
    }
    out += s[i++];
  }
  return out;
}

/// OOXML `_xHHHH_` escapes for characters XML cannot carry.
std::string unescape_ooxml(const std::string& s) {
  if (s.find("_x") == std::string::npos) return s;
  std::string out;
  for (std::size_t i = 0; i < s.size();) {
    if (i + 7 <= s.size() && s[i] == '_' && s[i + 1] == 'x' && s[i + 6] == '_' &&
        std::all_of(s.begin() + static_cast<std::ptrdiff_t>(i) + 2, s.begin() + static_cast<std::ptrdiff_t>(i) + 6,
                    [](unsigned char c) { return std::isxdigit(c) != 0; })) {
      append_utf8(out, static_cast<std::uint32_t>(std::stoul(s.substr(i + 2, 4), nullptr, 16)));
      i += 7;
      continue;
    }
    out += s[i++];
  }
  return out;
}

/// Forward-only tag scanner; good enough for machine-written OOXML parts.
class Scanner {
 public:
  explicit Scanner(std::string_view xml) : xml_(xml) {}

  struct Tag {
    std::string_view name;  // without namespace prefix
    std::string_view attrs;
    bool closing = false;
    bool self_closing = false;
    std::size_t text_start = 0;  // offset just past '>'
  };

  /// Next element tag, skipping comments, declarations and text.
  bool next(Tag& tag) {
    for (;;) {
      const std::size_t lt = xml_.find('<', pos_);
      if (lt == std::string_view::npos) return false;
      if (xml_.compare(lt, 4, "<!--") == 0) {
        const std::size_t end = xml_.find("-->", lt);
        if (end == std::string_view::npos) return false;
        pos_ = end + 3;
        continue;
      }
      const std::size_t gt = xml_.find('>', lt);
      if (gt == std::string_view::npos) corrupt("unterminated XML tag");
      pos_ = gt + 1;
      if (xml_[lt + 1] == '?' || xml_[lt + 1] == '!') continue;
      std::string_view body = xml_.substr(lt + 1, gt - lt - 1);
      tag.closing = !body.empty() && body[0] == '/';
      if (tag.closing) body.remove_prefix(1);
      tag.self_closing = !body.empty() && body.back() == '/';
      if (tag.self_closing) body.remove_suffix(1);
      std::size_t name_end = 0;
      while (name_end < body.size() && !std::isspace(static_cast<unsigned char>(body[name_end]))) ++name_end;
      std::string_view name = body.substr(0, name_end);
      if (const auto colon = name.find(':'); colon != std::string_view::npos) name.remove_prefix(colon + 1);
      tag.name = name;
      tag.attrs = body.substr(name_end);
      tag.text_start = pos_;
      return true;
    }
  }

  /// Raw text up to the next '<'.
  std::string_view text() const {
    const std::size_t lt = xml_.find('<', pos_);
    return xml_.substr(pos_, (lt == std::string_view::npos ? xml_.size() : lt) - pos_);
  }

 private:
  std::string_view xml_;
  std::size_t pos_ = 0;
};

std::optional<std::string> attribute(std::string_view attrs, std::string_view wanted) {
  std::size_t i = 0;
  while (i < attrs.size()) {
    while (i < attrs.size() && std::isspace(static_cast<unsigned char>(attrs[i]))) ++i;
    const std::size_t eq = attrs.find('=', i);
    if (eq == std::string_view::npos) break;
    std::string_view key = attrs.substr(i, eq - i);
    while (!key.empty() && std::isspace(static_cast<unsigned char>(key.back()))) key.remove_suffix(1);
    std::size_t q = eq + 1;
    while (q < attrs.size() && std::isspace(static_cast<unsigned char>(attrs[q]))) ++q;
    if (q >= attrs.size()) break;
    const char quote = attrs[q];
    const std::size_t close = attrs.find(quote, q + 1);
    if (close == std::string_view::npos) break;
    const auto colon = key.find(':');
    const bool match = wanted.find(':') == std::string_view::npos
                           ? key == wanted
                           : colon != std::string_view::npos &&
                                 key.substr(colon + 1) == wanted.substr(wanted.find(':') + 1);
    if (match) return unescape(attrs.substr(q + 1, close - q - 1));
    i = close + 1;
  }
  return std::nullopt;
}

/// Concatenated <t> text of the element the scanner is inside, ending at
/// the closing tag named `until`. Phonetic runs (<rPh>) are skipped.
std::string collect_text(Scanner& s, std::string_view until) {
  std::string out;
  Scanner::Tag tag;
  int phonetic = 0;
  while (s.next(tag)) {
    if (tag.name == until && tag.closing) break;
    if (tag.name == "rPh") {
      if (!tag.self_closing) phonetic += tag.closing ? -1 : 1;
      continue;
    }
    if (tag.name == "t" && !tag.closing && !tag.self_closing && phonetic == 0) out += unescape(s.text());
  }
  return unescape_ooxml(out);
}

std::vector<std::string> shared_strings(const Zip& zip) {
  std::vector<std::string> out;
  if (!zip.has("xl/sharedStrings.xml")) return out;
  const std::string xml = zip.read("xl/sharedStrings.xml");
  Scanner s(xml);
  Scanner::Tag tag;
  while (s.next(tag)) {
    if (tag.name != "si" || tag.closing) continue;
    out.push_back(tag.self_closing ? std::string() : collect_text(s, "si"));
  }
  return out;
}

std::string resolve_target(std::string target) {
  if (!target.empty() && target[0] == '/') return target.substr(1);
  std::string base = "xl/";
  while (target.rfind("../", 0) == 0) {
    target.erase(0, 3);
    base.clear();
  }
  return base + target;
}

std::size_t column_index(std::string_view ref) {
  std::size_t col = 0;
  std::size_t i = 0;
  while (i < ref.size() && std::isalpha(static_cast<unsigned char>(ref[i]))) {
    col = col * 26 + static_cast<std::size_t>(std::toupper(static_cast<unsigned char>(ref[i])) - 'A' + 1);
    ++i;
  }
  if (i == 0) return std::string::npos;
  return col - 1;
}

Sheet read_sheet(const std::string& xml, const std::vector<std::string>& strings, std::string name) {
  Sheet sheet;
  sheet.name = std::move(name);
  Scanner s(xml);
  Scanner::Tag tag;
  std::size_t next_row = 0;
  std::vector<std::optional<std::string>>* row = nullptr;
  std::size_t next_col = 0;
  while (s.next(tag)) {
    if (tag.name == "row" && !tag.closing) {
      std::size_t index = next_row;
      if (auto r = attribute(tag.attrs, "r")) index = std::stoul(*r) - 1;
      if (index < sheet.rows.size()) corrupt("rows out of order");
      while (sheet.rows.size() < index) sheet.rows.push_back({std::nullopt});
      sheet.rows.emplace_back();
      row = &sheet.rows.back();
      next_row = index + 1;
      next_col = 0;
      if (tag.self_closing) row->push_back(std::nullopt);
      continue;
    }
    if (tag.name != "c" || tag.closing || !row) continue;
    std::size_t col = next_col;
    if (auto r = attribute(tag.attrs, "r")) {
      const std::size_t parsed = column_index(*r);
      if (parsed != std::string::npos) col = parsed;
    }
    next_col = col + 1;
    if (tag.self_closing) continue;
    const std::string type = attribute(tag.attrs, "t").value_or("n");
    std::optional<std::string> value;
    std::optional<std::string> raw;
    Scanner::Tag inner;
    while (s.next(inner)) {
      if (inner.name == "c" && inner.closing) break;
      if (inner.name == "v" && !inner.closing && !inner.self_closing) raw = unescape(s.text());
      if (inner.name == "is" && !inner.closing && !inner.self_closing) value = collect_text(s, "is");
    }
    if (type == "s" && raw) {
      const std::size_t idx = std::stoul(*raw);
      if (idx >= strings.size()) corrupt("shared string index out of range");
      value = strings[idx];
    } else if (type == "b" && raw) {
      value = *raw == "1" ? "TRUE" : "FALSE";
    } else if (type == "str" && raw) {
      value = unescape_ooxml(*raw);
    } else if (type != "inlineStr" && raw) {
      value = *raw;
    }
    if (!value) continue;
    if (row->size() <= col) row->resize(col + 1);
    (*row)[col] = std::move(value);
  }
  for (auto& r : sheet.rows) {
    while (r.size() > 1 && !r.back()) r.pop_back();
    if (r.empty()) r.push_back(std::nullopt);
  }
  return sheet;
}

}  // namespace

namespace {

std::vector<Sheet> read_workbook(std::span<const std::uint8_t> bytes) {
  const Zip zip(bytes);
  if (!zip.has("xl/workbook.xml")) throw UnsupportedFormatError("xlsx: not a spreadsheet workbook");
  std::map<std::string, std::string> targets;
  if (zip.has("xl/_rels/workbook.xml.rels")) {
    const std::string rels = zip.read("xl/_rels/workbook.xml.rels");
    Scanner s(rels);
    Scanner::Tag tag;
    while (s.next(tag)) {
      if (tag.name != "Relationship" || tag.closing) continue;
      auto id = attribute(tag.attrs, "Id");
      auto target = attribute(tag.attrs, "Target");
      if (id && target) targets[*id] = resolve_target(*target);
    }
  }
  const auto strings = shared_strings(zip);
  const std::string workbook = zip.read("xl/workbook.xml");
  Scanner s(workbook);
  Scanner::Tag tag;
  std::vector<Sheet> sheets;
  std::size_t position = 0;
  while (s.next(tag)) {
    if (tag.name != "sheet" || tag.closing) continue;
    ++position;
    const std::string name = attribute(tag.attrs, "name").value_or("Sheet" + std::to_string(position));
    std::string part = "xl/worksheets/sheet" + std::to_string(position) + ".xml";
    if (auto rid = attribute(tag.attrs, "r:id")) {
      if (auto it = targets.find(*rid); it != targets.end()) part = it->second;
    }
    if (!zip.has(part)) corrupt("missing worksheet part '" + part + "'");
    sheets.push_back(read_sheet(zip.read(part), strings, name));
  }
  return sheets;
}

}  // namespace

std::vector<Sheet> read(std::span<const std::uint8_t> bytes) {
  try {
    return read_workbook(bytes);
  } catch (const std::logic_error&) {
    // std::stoul on a malformed number
    corrupt("malformed numeric attribute");
  }
}

}  // namespace crosswalk::xlsx
