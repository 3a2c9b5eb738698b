// Copyright 2026 The blindmarket Authors
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

#include "blindmarket/errors.hpp"

namespace blindmarket {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidThreshold: return "InvalidThreshold";
    case ErrorCode::kZeroBlindingFactor: return "ZeroBlindingFactor";
    case ErrorCode::kDuplicateIndex: return "DuplicateIndex";
    case ErrorCode::kWrongCount: return "WrongCount";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kMalformedBid: return "MalformedBid";
    case ErrorCode::kInvalidPolicy: return "InvalidPolicy";
    case ErrorCode::kNotWinner: return "NotWinner";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kScenarioInvalid: return "ScenarioInvalid";
  }
  return "Unknown";
}

}  // namespace blindmarket
