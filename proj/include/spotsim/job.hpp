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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spotsim/cluster.hpp"
#include "spotsim/sim_time.hpp"

namespace spotsim {

enum class JobType : std::uint8_t { Individual, Array, Triple };
enum class JobState : std::uint8_t { Pending, Running, Requeued, Cancelled, Completed };
enum class DispatchPath : std::uint8_t { None, Main, Backfill };

std::string_view to_string(JobType t);
std::string_view to_string(JobState s);
std::string_view to_string(DispatchPath p);

/// A submission request. An individual request with total_tasks > 1 stands
/// for a batch of one-task jobs sharing a batch tag.
struct JobSpec {
  std::string user = "user";
  Qos qos = Qos::Normal;
  JobType job_type = JobType::Triple;
  int total_tasks = 1;
  /// Triple mode only: tasks consolidated into one node unit.
  int tasks_per_node = 1;
  int cores_per_task = 1;
  double run_seconds = 3600.0;
  SimTime submit_at;

  bool operator==(const JobSpec&) const = default;
};

/// Throws ValidationError. `node_cores` bounds a triple node unit.
void validate(const JobSpec& spec, int node_cores);

/// Dispatch units of one job record built from `spec`: tasks for
/// individual/array, ceil(total_tasks / tasks_per_node) nodes for triple.
int dispatch_units(const JobSpec& spec);

PlacementRequest placement_request(const JobSpec& spec);

struct JobRecord {
  JobId id = 0;
  JobSpec spec;
  std::int64_t batch = 0;
  JobState state = JobState::Pending;
  SimTime recognized_at;
  std::vector<SimTime> dispatch_times;
  int requeue_count = 0;
  DispatchPath dispatched_by = DispatchPath::None;

  /// Set when an external requeue preceded the submission (manual approach).
  std::optional<SimTime> preempt_start;
  /// Victims preempted on this job's behalf.
  int victims = 0;
  /// Started only after its scheduler-initiated preemptions drain.
  bool awaiting_preemption = false;
  /// Incremented on every (re)start; stale dispatch/completion events carry
  /// an older value.
  std::int64_t epoch = 0;
  int units_this_run = 0;
  SimTime expected_end;
};

/// Candidate for preemption. Youngest means latest recognized_at, ties
/// broken by larger job id.
struct VictimCandidate {
  JobId id = 0;
  SimTime recognized_at;
  long cores = 0;
  int nodes = 0;
};

bool younger(const VictimCandidate& a, const VictimCandidate& b);

}  // namespace spotsim
