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

#ifndef CVAUG_ERROR_H_
#define CVAUG_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace cvaug {

/// Broad category of a failure, used by the CLI to build a
/// machine-parsable prefix ("error[parse]: ...").
enum class ErrorKind {
  kParse,
  kValidation,
  kIo,
  kDomain,
  kBackend,
  kUsage,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace cvaug

#endif  // CVAUG_ERROR_H_
