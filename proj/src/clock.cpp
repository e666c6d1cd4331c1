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

#include "crosswalk/clock.hpp"

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <cstring>
#include <optional>

namespace crosswalk {

namespace {

std::optional<std::int64_t> fixed_epoch() {
  const char* fixed = std::getenv("SOURCE_DATE_EPOCH");
  if (!fixed) return std::nullopt;
  std::int64_t seconds = 0;
  const char* end = fixed + std::strlen(fixed);
  const auto [ptr, ec] = std::from_chars(fixed, end, seconds);
  if (ec != std::errc{} || ptr != end || ptr == fixed) return std::nullopt;
  return seconds;
}

}  // namespace

bool clock_is_fixed() { return fixed_epoch().has_value(); }

DateTime utc_now() {
  if (const auto seconds = fixed_epoch()) return DateTime{*seconds, 0};
  const auto now = std::chrono::system_clock::now();
  const auto micros = std::chrono::duration_cast<std::chrono::microseconds>(now.time_since_epoch()).count();
  return DateTime::from_micros(micros);
}

}  // namespace crosswalk
