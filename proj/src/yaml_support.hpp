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

// YAML helpers shared by the config readers. Private to the library.

#include <yaml-cpp/yaml.h>

#include <string>

#include "blindmarket/errors.hpp"
#include "blindmarket/ledger.hpp"

namespace blindmarket::yaml {

[[noreturn]] inline void fail(const YAML::Mark& mark, const std::string& what) {
  throw Error(ErrorCode::kParseError, "line " + std::to_string(mark.line + 1) + ": " + what);
}

[[noreturn]] inline void fail(const YAML::Node& node, const std::string& what) { fail(node.Mark(), what); }

inline YAML::Node load(std::string_view text) {
  try {
    return YAML::Load(std::string(text));
  } catch (const YAML::ParserException& e) {
    fail(e.mark, e.msg);
  }
}

/// Applies `operation: amount` or `operation: {base, per_unit}` entries.
void apply_gas_overrides(const YAML::Node& map, ledger::GasTable& table);

}  // namespace blindmarket::yaml
