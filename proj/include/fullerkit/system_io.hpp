/*
 * Copyright 2026 The fullerkit Authors
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

#pragma once

#include "fullerkit/flow.hpp"
#include "fullerkit/fuller.hpp"
#include "fullerkit/hamsym.hpp"
#include "fullerkit/vecfield.hpp"

#include <nlohmann/json.hpp>

#include <string>

namespace fullerkit {

using Json = nlohmann::ordered_json;

/// Parses JSON text; syntax errors become ValidationError with line and column.
Json parse_json_text(const std::string& text, const std::string& source);
Json read_json_file(const std::string& path);

/// Serializes with floating-point numbers printed to 17 significant digits.
std::string dump_json(const Json& j, int indent = 2);
std::string format_double(double x);

/// System document: {"n", "m", "fields": [[{"coef", "exp"}] × n] × (2m+1)}.
/// Errors name the offending field path, e.g. "fields[1][0][2].exp".
ControlAffineSystem parse_system(const Json& j);
Json system_to_json(const ControlAffineSystem& sys);

/// {"q": [...], "p": [...]}.
ExtremalState parse_state(const Json& j, int n);
Json state_to_json(const ExtremalState& lam);

/// Unknown keys are rejected.
FlowConfig parse_flow_config(const Json& j);

/// {"points": [r...]} | {"cascade": {...}} | {"union": [set...]}; rationals
/// are strings "p/q" or integers.
CascadeSet parse_cascade(const Json& j);
Json cascade_to_json(const CascadeSet& s);

}  // namespace fullerkit
