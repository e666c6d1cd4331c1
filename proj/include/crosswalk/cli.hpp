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

#include <exception>
#include <iosfwd>
#include <string>
#include <vector>

namespace crosswalk {

/// Process exit codes of the command-line tool. Stable across versions.
enum ExitCode : int {
  kExitOk = 0,
  kExitValidation = 1,
  kExitUsage = 2,
  kExitIo = 3,
  kExitProbity = 4,
};

int exit_code_for(const std::exception& error) noexcept;

/// Runs one command. `args` excludes the program name. Errors go to `err`
/// as one JSON line followed by a line of prose.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace crosswalk
