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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace blindmarket {

/// Precondition failures raised by library functions. Ledger transactions do
/// not throw; they report a `ledger::Status` in their receipt instead.
enum class ErrorCode {
  kInvalidThreshold,
  kZeroBlindingFactor,
  kDuplicateIndex,
  kWrongCount,
  kIndexOutOfRange,
  kDimensionMismatch,
  kTooLarge,
  kMalformedBid,
  kInvalidPolicy,
  kNotWinner,
  kParseError,
  kScenarioInvalid,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code), message_(what) {}

  ErrorCode code() const { return code_; }
  /// what() without the code prefix.
  const std::string& message() const { return message_; }

 private:
  ErrorCode code_;
  std::string message_;
};

}  // namespace blindmarket
