// Copyright 2026 The offmix Authors
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

#ifndef OFFMIX_ERROR_HPP
#define OFFMIX_ERROR_HPP

#include <stdexcept>
#include <string>

namespace offmix {

// Error categories map 1:1 onto the CLI exit codes.
enum class ErrorCategory : int {
  usage = 1,    // bad flags, malformed config, invalid parameter values
  data = 2,     // unreadable/ill-formed input files, schema violations
  backend = 3,  // encoder backend unavailable or incapable
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const { return category_; }
  int exit_code() const { return static_cast<int>(category_); }

 private:
  ErrorCategory category_;
};

[[noreturn]] inline void throw_usage(const std::string& msg) {
  throw Error(ErrorCategory::usage, msg);
}
[[noreturn]] inline void throw_data(const std::string& msg) {
  throw Error(ErrorCategory::data, msg);
}
[[noreturn]] inline void throw_backend(const std::string& msg) {
  throw Error(ErrorCategory::backend, msg);
}

}  // namespace offmix

#endif  // OFFMIX_ERROR_HPP
