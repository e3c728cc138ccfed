// Copyright 2026 The spotsim Authors.
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

#include <string>

#include "spotsim/workload.hpp"

namespace spotsim {

/// Sectioned key = value text with sections cluster, scheduler, cost_model,
/// agent, workload and timeline. Absent keys take their defaults (the cost
/// model is calibrated to the node width first). Without a [timeline]
/// section the default timeline for the workload is generated.
///
///   [cluster]
///   nodes = 19
///   cores_per_node = 32
///   [workload]
///   job_type = triple
///   size = small
///   [timeline]
///   job = 121, interactive, normal, triple, 608, 32, 1, 3600
///
/// Throws ParseError (syntax, with line number) and ConfigError (unknown
/// keys and bad values, with the field path).
Scenario parse_config(const std::string& text);

/// Writes every field, including the explicit timeline.
std::string serialize_config(const Scenario& s);

/// Throws IoError when the file cannot be read.
Scenario load_config(const std::string& path);

}  // namespace spotsim
