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

#ifndef CVAUG_CLI_H_
#define CVAUG_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace cvaug {

/// Runs one `cvaug` command line (args exclude the program name). Returns
/// 0 on success, 1 on a domain/data error and 2 on a usage error. Errors are
/// written to `err` as "cvaug: error[<kind>]: <message>".
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cli_main(int argc, char** argv);

}  // namespace cvaug

#endif  // CVAUG_CLI_H_
