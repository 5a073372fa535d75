/*
 * Copyright 2026 The torlab Authors
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

#ifndef TORLAB_ERROR_HPP
#define TORLAB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace torlab {

enum class ErrorCode {
  kInvalidArgument = 1,
  kPrecondition = 2,
  kBudgetExhausted = 3,
  kNumeric = 4,
  kIo = 5,
  kConfig = 6,
};

const char* error_code_name(ErrorCode code);

// All library failures are reported with this exception type; the C API maps
// the code onto torlab_status.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

inline void require(bool condition, ErrorCode code, const std::string& message) {
  if (!condition) fail(code, message);
}

}  // namespace torlab

#endif  // TORLAB_ERROR_HPP
