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
#include <optional>
#include <string>
#include <string_view>

namespace crosswalk::unicode {

/// NFC-normalized copy. Invalid UTF-8 is returned unchanged.
std::string nfc(std::string_view text);

/// True when `text` is empty after trimming Unicode White_Space.
bool is_blank(std::string_view text);

/// Offset of the first invalid UTF-8 byte, if any.
std::optional<std::size_t> find_invalid_utf8(std::string_view text);

/// Converts `bytes` in `encoding` (any ICU converter name) to UTF-8.
/// Throws UnsupportedFormatError for unknown encodings and ParseError on
/// malformed input.
std::string to_utf8(std::string_view bytes, std::string_view encoding);

bool is_utf8_name(std::string_view encoding);

}  // namespace crosswalk::unicode
