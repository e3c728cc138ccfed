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

#include "spotsim/cli.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <regex>
#include <sstream>
#include <thread>
#include <vector>

#include "spotsim/config.hpp"
#include "spotsim/errors.hpp"
#include "spotsim/metrics.hpp"
#include "spotsim/simulation.hpp"
#include "spotsim/workload.hpp"

namespace spotsim {

namespace {

namespace fs = std::filesystem;

std::string builtin_name(const Scenario& s) {
  const std::string id = s.id();
  return id.substr(0, id.rfind("-s"));
}

struct Outcome {
  RunResult result;
  RunSummary summary;
  std::string error;
  bool config_error = false;
};

std::vector<Outcome> run_all(const std::vector<Scenario>& scenarios) {
  std::vector<Outcome> outcomes(scenarios.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < scenarios.size(); i = next++) {
      auto& o = outcomes[i];
      try {
        o.result = run_scenario(scenarios[i]);
        o.summary = summarize(o.result);
      } catch (const ConfigError& e) {
        o.error = scenarios[i].id() + ": " + e.what();
        o.config_error = true;
      } catch (const std::exception& e) {
        o.error = scenarios[i].id() + ": " + e.what();
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                                     static_cast<unsigned>(scenarios.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return outcomes;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write " + p.string());
  f << text;
  if (!f) throw IoError("write failed for " + p.string());
}

}  // namespace

std::string list_scenarios() {
  const Table1 t = table1_matrix();
  std::ostringstream out;
  for (const auto& s : t.scenarios) {
    out << builtin_name(s) << "  approach=" << to_string(s.approach)
        << " mode=" << (s.approach == Approach::Baseline ? "none" : to_string(s.mode))
        << " partitions=" << to_string(s.partitions) << " type=" << to_string(s.job_type)
        << " size=" << to_string(s.size) << '\n';
  }
  return out.str();
}

int run(const Flags& flags, std::ostream& out, std::ostream& err) {
  if (flags.list) {
    out << list_scenarios();
    return kExitOk;
  }
  const int selected = (flags.scenario_path ? 1 : 0) + (flags.builtin ? 1 : 0) + (flags.table1 ? 1 : 0);
  if (selected != 1) {
    err << "error: choose exactly one of --scenario, --builtin, --table1\n";
    return kExitConfig;
  }

  std::vector<Scenario> scenarios;
  std::vector<SkippedCell> skipped;
  try {
    if (flags.table1) {
      Table1 t = table1_matrix(flags.seed.value_or(1));
      scenarios = std::move(t.scenarios);
      skipped = std::move(t.skipped);
    } else if (flags.builtin) {
      static const std::regex seeded(R"(^(.*)-s[0-9]+$)");
      std::smatch m;
      std::string name = *flags.builtin;
      if (std::regex_match(name, m, seeded)) name = m[1];
      for (auto& s : table1_matrix(flags.seed.value_or(1)).scenarios) {
        if (builtin_name(s) == name) scenarios.push_back(s);
      }
      if (scenarios.empty()) throw ConfigError("builtin", "unknown scenario '" + name + "'");
    } else {
      Scenario s = load_config(*flags.scenario_path);
      if (flags.seed) s.seed = *flags.seed;
      scenarios.push_back(std::move(s));
    }
  } catch (const SimError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  const auto outcomes = run_all(scenarios);
  int code = kExitOk;
  for (const auto& o : outcomes) {
    if (o.error.empty()) continue;
    err << "error: " << o.error << '\n';
    code = std::max(code, o.config_error ? static_cast<int>(kExitConfig)
                                         : static_cast<int>(kExitRuntime));
  }
  if (code != kExitOk) return code;

  fs::path dir = flags.out_dir;
  if (dir.empty()) {
    const char* env = std::getenv("SPOTSIM_OUT");
    dir = env && *env ? env : "results";
  }
  std::vector<RunSummary> summaries;
  try {
    fs::create_directories(dir);
    for (const auto& o : outcomes) {
      const std::string id = o.summary.scenario_id;
      write_file(dir / (id + ".csv"), emit_csv(o.summary));
      if (flags.events) write_file(dir / (id + ".events.csv"), emit_event_log(o.result.log));
      summaries.push_back(o.summary);
      if (!flags.quiet) {
        out << id;
        for (const auto& r : o.summary.records) {
          out << "  scheduling_time_s=" << format_seconds(r.scheduling_time);
        }
        out << '\n';
      }
    }
    write_file(dir / "summary.txt", emit_summary(summaries, skipped));
    if (!skipped.empty()) {
      std::ostringstream sk;
      for (const auto& k : skipped) sk << k.row << ": " << k.reason << '\n';
      write_file(dir / "skipped.txt", sk.str());
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}

}  // namespace spotsim
