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

#include "spotsim/job.hpp"

#include "spotsim/cost_model.hpp"
#include "spotsim/errors.hpp"

namespace spotsim {

std::string_view to_string(JobType t) {
  switch (t) {
    case JobType::Individual: return "individual";
    case JobType::Array: return "array";
    case JobType::Triple: return "triple";
  }
  return "?";
}

std::string_view to_string(JobState s) {
  switch (s) {
    case JobState::Pending: return "Pending";
    case JobState::Running: return "Running";
    case JobState::Requeued: return "Requeued";
    case JobState::Cancelled: return "Cancelled";
    case JobState::Completed: return "Completed";
  }
  return "?";
}

std::string_view to_string(DispatchPath p) {
  switch (p) {
    case DispatchPath::None: return "none";
    case DispatchPath::Main: return "main";
    case DispatchPath::Backfill: return "backfill";
  }
  return "?";
}

void validate(const JobSpec& spec, int node_cores) {
  if (spec.total_tasks < 1) throw ValidationError("total_tasks must be >= 1");
  if (spec.cores_per_task < 1) throw ValidationError("cores_per_task must be >= 1");
  if (!(spec.run_seconds > 0.0)) throw ValidationError("run_seconds must be > 0");
  if (spec.submit_at.seconds < 0.0) throw ValidationError("submit_at must be >= 0");
  if (spec.user.empty()) throw ValidationError("user must be non-empty");
  if (spec.cores_per_task > node_cores) {
    throw ValidationError("cores_per_task exceeds node cores");
  }
  if (spec.job_type == JobType::Triple) {
    if (spec.tasks_per_node < 1) throw ValidationError("triple job needs tasks_per_node >= 1");
    if (static_cast<long>(spec.tasks_per_node) * spec.cores_per_task > node_cores) {
      throw ValidationError("tasks_per_node * cores_per_task exceeds node cores");
    }
  }
}

int dispatch_units(const JobSpec& spec) {
  switch (spec.job_type) {
    case JobType::Individual: return 1;
    case JobType::Array: return spec.total_tasks;
    case JobType::Triple:
      return (spec.total_tasks + spec.tasks_per_node - 1) / spec.tasks_per_node;
  }
  return 0;
}

PlacementRequest placement_request(const JobSpec& spec) {
  return PlacementRequest{dispatch_units(spec), spec.cores_per_task,
                          spec.job_type == JobType::Triple};
}

bool younger(const VictimCandidate& a, const VictimCandidate& b) {
  if (a.recognized_at != b.recognized_at) return a.recognized_at > b.recognized_at;
  return a.id > b.id;
}

CostModel CostModel::calibrated(int cores_per_node) {
  CostModel c;
  c.c_node_dispatch = 0.007 * cores_per_node / 64.0;
  return c;
}

void CostModel::validate() const {
  const std::pair<const char*, double> fields[] = {
      {"c_recognize", c_recognize},           {"c_job_overhead", c_job_overhead},
      {"c_task_dispatch", c_task_dispatch},   {"c_node_dispatch", c_node_dispatch},
      {"c_preempt_signal", c_preempt_signal}, {"c_cleanup", c_cleanup},
      {"c_requeue_release", c_requeue_release}, {"t_main", t_main},
      {"t_backfill", t_backfill}};
  for (const auto& [name, v] : fields) {
    if (!(v >= 0.0)) throw ConfigError(std::string("cost_model.") + name, "must be >= 0");
  }
  if (!(t_main > 0.0)) throw ConfigError("cost_model.t_main", "must be > 0");
  if (!(t_backfill > t_main)) {
    throw ConfigError("cost_model.t_backfill", "must be greater than t_main");
  }
}

}  // namespace spotsim
