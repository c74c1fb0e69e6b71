// Copyright (c) 2026 The cvaug Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CVAUG_PROCESS_H_
#define CVAUG_PROCESS_H_

#include <filesystem>
#include <string>
#include <vector>

namespace cvaug {

// POSIX single-quoting for one shell word.
std::string shell_quote(const std::string& word);

/// Runs `command` (a shell fragment, e.g. "python3 convert.py --gpu 0") with
/// the quoted `args` appended, through /bin/sh in working directory `cwd`.
/// Returns the exit status (128 + signal for killed children). Throws
/// Error(kBackend) when the process cannot be started or the shell reports
/// the command as not found (127).
int run_command(const std::string& command, const std::vector<std::string>& args,
                const std::filesystem::path& cwd);

}  // namespace cvaug

#endif  // CVAUG_PROCESS_H_
