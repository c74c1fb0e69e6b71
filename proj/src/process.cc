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

#include "cvaug/process.h"

#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>

#include "cvaug/error.h"

namespace cvaug {

std::string shell_quote(const std::string& word) {
  std::string out = "'";
  for (char c : word) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  out += "'";
  return out;
}

int run_command(const std::string& command, const std::vector<std::string>& args,
                const std::filesystem::path& cwd) {
  if (command.empty()) throw Error(ErrorKind::kBackend, "no backend command configured");
  std::string script = command;
  for (const auto& a : args) script += " " + shell_quote(a);
  const std::string dir = cwd.string();

  const pid_t pid = fork();
  if (pid < 0) throw Error(ErrorKind::kBackend, "fork failed for backend command: " + command);
  if (pid == 0) {
    if (chdir(dir.c_str()) != 0) _exit(126);
    execl("/bin/sh", "sh", "-c", script.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  int status = 0;
  while (waitpid(pid, &status, 0) < 0) {
    if (errno != EINTR) throw Error(ErrorKind::kBackend, "waitpid failed for: " + command);
  }
  int code = 0;
  if (WIFEXITED(status)) {
    code = WEXITSTATUS(status);
  } else if (WIFSIGNALED(status)) {
    code = 128 + WTERMSIG(status);
  }
  if (code == 126 || code == 127) {
    throw Error(ErrorKind::kBackend,
                "backend command could not be launched (exit " + std::to_string(code) +
                    "): " + command);
  }
  return code;
}

}  // namespace cvaug
