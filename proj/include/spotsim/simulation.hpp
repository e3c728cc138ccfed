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

#include <functional>
#include <map>
#include <vector>

#include "spotsim/agent.hpp"
#include "spotsim/engine.hpp"
#include "spotsim/scheduler.hpp"
#include "spotsim/workload.hpp"

namespace spotsim {

/// Read-only view handed to per-event hooks.
struct SimView {
  const ClusterState& cluster;
  const Scheduler& scheduler;
  const SpotAgent* agent;
};

struct RunOptions {
  /// Stop once every normal-QoS submission is fully dispatched.
  bool stop_when_measured = true;
  /// Absolute end of the run; 0 means last submission + 4 hours.
  double horizon = 0.0;
  std::function<void(const LogEntry&, const SimView&)> after_event;
};

struct RunResult {
  Scenario scenario;
  EventLog log;
  std::map<JobId, JobRecord> jobs;
  std::vector<AgentReport> agent_reports;
  /// Batch tags of the normal-QoS submissions, in submission order.
  std::vector<std::int64_t> measured_batches;
  bool all_measured_dispatched = false;
  double wall_seconds = 0.0;
};

/// Validates the scenario, then runs it on a fresh engine.
/// Throws ConfigError for invalid scenarios.
RunResult run_scenario(const Scenario& s, const RunOptions& opts = {});

}  // namespace spotsim
