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

#include "crosswalk/cell.hpp"

namespace crosswalk {

/// Current UTC time, truncated to microseconds. When SOURCE_DATE_EPOCH is set
/// to an integer, that instant is returned instead so runs are reproducible.
DateTime utc_now();

/// True when SOURCE_DATE_EPOCH pins the clock. Measured durations are then
/// reported as zero.
bool clock_is_fixed();

}  // namespace crosswalk
