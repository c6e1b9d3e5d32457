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

#include "pfts/error.h"

#include "json.hpp"

namespace pfts {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNotPsd: return "NotPsd";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kEmptyData: return "EmptyData";
    case ErrorCode::kNonNumeric: return "NonNumeric";
    case ErrorCode::kConfig: return "ConfigError";
    case ErrorCode::kIo: return "IoError";
    case ErrorCode::kBudgetTooSmall: return "BudgetTooSmall";
    case ErrorCode::kNotFound: return "NotFound";
    case ErrorCode::kConflict: return "Conflict";
    case ErrorCode::kBadRequest: return "BadRequest";
    case ErrorCode::kCorruptStore: return "CorruptStore";
  }
  return "Unknown";
}

std::string ErrorJson(ErrorCode code, std::string_view message) {
  nlohmann::json j = {{"code", std::string(ErrorCodeName(code))},
                      {"message", std::string(message)}};
  return j.dump();
}

}  // namespace pfts
