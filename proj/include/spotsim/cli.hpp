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

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace spotsim {

struct Flags {
  std::optional<std::string> scenario_path;
  std::optional<std::string> builtin;
  bool table1 = false;
  std::optional<std::uint64_t> seed;
  /// Empty means $SPOTSIM_OUT, then "results".
  std::string out_dir;
  bool events = false;
  bool quiet = false;
  bool list = false;
};

enum ExitCode : int { kExitOk = 0, kExitConfig = 2, kExitRuntime = 3 };

/// Runs the selected scenario(s) and writes <out>/<id>.csv (plus
/// <id>.events.csv with `events`), summary.txt and, for the matrix,
/// skipped.txt. Nothing is written unless every scenario succeeds.
int run(const Flags& flags, std::ostream& out, std::ostream& err);

/// Builtin names with their matrix coordinates, one per line.
std::string list_scenarios();

}  // namespace spotsim
