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

#include <CLI11.hpp>

#include <iostream>

#include "spotsim/cli.hpp"

int main(int argc, char** argv) {
  spotsim::Flags flags;
  CLI::App app{"spotsim: spot preemption scheduling simulator"};
  auto* scenario = app.add_option("--scenario", flags.scenario_path, "Scenario config file");
  auto* builtin = app.add_option("--builtin", flags.builtin, "Builtin scenario name");
  auto* table1 = app.add_flag("--table1", flags.table1, "Run the whole experiment matrix");
  scenario->excludes(builtin)->excludes(table1);
  builtin->excludes(table1);
  app.add_option("--seed", flags.seed, "Seed recorded in scenario ids");
  app.add_option("--out", flags.out_dir, "Output directory (default $SPOTSIM_OUT or results)");
  app.add_flag("--events", flags.events, "Also write the event log per scenario");
  app.add_flag("--quiet", flags.quiet, "No per-scenario output");
  app.add_flag("--list", flags.list, "List builtin scenarios");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : spotsim::kExitConfig;
  }
  return spotsim::run(flags, std::cout, std::cerr);
}
