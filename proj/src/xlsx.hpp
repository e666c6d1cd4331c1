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

// Minimal XLSX (Office Open XML spreadsheet) reader: cell text per sheet,
// no styles, no formulas beyond their cached values.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace crosswalk::xlsx {

struct Sheet {
  std::string name;
  /// Dense rows; absent cells are nullopt. Trailing absent cells are trimmed.
  std::vector<std::vector<std::optional<std::string>>> rows;
};

/// Throws ParseError / UnsupportedFormatError.
std::vector<Sheet> read(std::span<const std::uint8_t> bytes);

}  // namespace crosswalk::xlsx
