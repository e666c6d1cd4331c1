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

#include "crosswalk/unicode.hpp"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/ucnv.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <cctype>
#include <memory>
#include <vector>

#include "crosswalk/error.hpp"

namespace crosswalk::unicode {

namespace {

bool is_ascii(std::string_view text) {
  return std::all_of(text.begin(), text.end(),
                     [](char c) { return static_cast<unsigned char>(c) < 0x80; });
}

}  // namespace

std::string nfc(std::string_view text) {
  if (is_ascii(text)) return std::string(text);
  if (find_invalid_utf8(text)) return std::string(text);
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* norm = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) return std::string(text);
  const auto src = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<std::int32_t>(text.size())));
  if (norm->isNormalized(src, status) && U_SUCCESS(status)) return std::string(text);
  status = U_ZERO_ERROR;
  const icu::UnicodeString out = norm->normalize(src, status);
  if (U_FAILURE(status)) return std::string(text);
  std::string result;
  out.toUTF8String(result);
  return result;
}

bool is_blank(std::string_view text) {
  std::int32_t i = 0;
  const auto len = static_cast<std::int32_t>(text.size());
  const auto* s = reinterpret_cast<const std::uint8_t*>(text.data());
  while (i < len) {
    UChar32 c = 0;
    U8_NEXT(s, i, len, c);
    if (c < 0) return false;
    if (!u_isUWhiteSpace(c)) return false;
  }
  return true;
}

std::optional<std::size_t> find_invalid_utf8(std::string_view text) {
  std::int32_t i = 0;
  const auto len = static_cast<std::int32_t>(text.size());
  const auto* s = reinterpret_cast<const std::uint8_t*>(text.data());
  while (i < len) {
    const std::int32_t start = i;
    if (s[i] < 0x80) {
      ++i;
      continue;
    }
    UChar32 c = 0;
    U8_NEXT(s, i, len, c);
    if (c < 0) return static_cast<std::size_t>(start);
  }
  return std::nullopt;
}

bool is_utf8_name(std::string_view encoding) {
  std::string lower;
  for (const char c : encoding) {
    if (c != '-' && c != '_') lower += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return lower == "utf8" || lower.empty();
}

std::string to_utf8(std::string_view bytes, std::string_view encoding) {
  if (is_utf8_name(encoding)) {
    if (const auto bad = find_invalid_utf8(bytes)) {
      throw ParseError("invalid UTF-8 byte sequence", 0, *bad);
    }
    return std::string(bytes);
  }
  UErrorCode status = U_ZERO_ERROR;
  const std::string name(encoding);
  std::unique_ptr<UConverter, decltype(&ucnv_close)> conv(ucnv_open(name.c_str(), &status),
                                                         &ucnv_close);
  if (U_FAILURE(status) || !conv) throw UnsupportedFormatError("unknown encoding '" + name + "'");
  ucnv_setToUCallBack(conv.get(), UCNV_TO_U_CALLBACK_STOP, nullptr, nullptr, nullptr, &status);
  status = U_ZERO_ERROR;
  icu::UnicodeString wide(bytes.data(), static_cast<std::int32_t>(bytes.size()), conv.get(), status);
  if (U_FAILURE(status)) {
    throw ParseError("input is not valid " + name, 0, 0);
  }
  std::string out;
  wide.toUTF8String(out);
  return out;
}

}  // namespace crosswalk::unicode
