// Copyright 2026 The PF-TS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PFTS_ERROR_H_
#define PFTS_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace pfts {

enum class ErrorCode {
  kInvalidArgument,
  kDimensionMismatch,
  kNotPsd,
  kNoConvergence,
  kParseError,
  kEmptyData,
  kNonNumeric,
  kConfig,
  kIo,
  kBudgetTooSmall,
  kNotFound,
  kConflict,
  kBadRequest,
  kCorruptStore,
};

// Stable identifier used in machine-readable error payloads.
std::string_view ErrorCodeName(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Renders {"code": ..., "message": ...} with JSON string escaping.
std::string ErrorJson(ErrorCode code, std::string_view message);

}  // namespace pfts

#endif  // PFTS_ERROR_H_
