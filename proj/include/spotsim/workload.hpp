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

#include "spotsim/agent.hpp"
#include "spotsim/cluster.hpp"
#include "spotsim/cost_model.hpp"
#include "spotsim/job.hpp"
#include "spotsim/scheduler.hpp"

namespace spotsim {

enum class Approach : std::uint8_t { Baseline, Auto, Manual, Cron };
enum class SizeClass : std::uint8_t { Small, Medium, Large };

std::string_view to_string(Approach a);
std::string_view to_string(SizeClass s);

/// 608, 2048 or 4096 tasks.
int size_tasks(SizeClass s);

/// Knobs used to generate a scenario's default timeline.
struct WorkloadParams {
  /// Interactive submission time.
  double arrival = 121.0;
  /// Cron runs submit the same job a second time; defaults to arrival + 150.
  std::optional<double> second_arrival;
  /// Node count of each spot filler job; 0 means the per-user limit.
  int spot_job_nodes = 0;
  double run_seconds = 3600.0;
  double spot_run_seconds = 86400.0;

  bool operator==(const WorkloadParams&) const = default;
};

struct Scenario {
  int nodes = 19;
  int cores_per_node = 32;
  /// 0 means the whole cluster.
  int per_user_limit_nodes = 0;
  Approach approach = Approach::Baseline;
  PreemptMode mode = PreemptMode::Requeue;
  PartitionLayout partitions = PartitionLayout::Dual;
  JobType job_type = JobType::Triple;
  SizeClass size = SizeClass::Small;
  std::vector<JobSpec> timeline;
  CostModel cost;
  std::optional<AgentConfig> agent;
  bool per_user_quota = false;
  std::uint64_t seed = 1;
  WorkloadParams workload;

  /// Slug of the experiment coordinates plus seed, e.g.
  /// "auto-requeue-dual-triple-large-s1".
  std::string id() const;
  ClusterConfig cluster_config() const;
  SchedulerConfig scheduler_config() const;
  int effective_per_user_limit() const;
  /// Throws ConfigError on inconsistent approach/agent pairing, a measured
  /// size beyond cluster capacity, or invalid cost/cluster settings.
  void validate() const;
  /// Throws ValidationError when `spec` cannot run on this cluster.
  void validate_spec_for_cluster(const JobSpec& spec) const;

  bool operator==(const Scenario&) const = default;
};

/// individual -> total_tasks one-task specs; array -> one spec with
/// total_tasks units; triple -> one spec with
/// ceil(total_tasks / tasks_per_node) node units. Throws ValidationError.
std::vector<JobSpec> make_job(JobType type, int total_tasks, int tasks_per_node, Qos qos,
                              const std::string& user, SimTime t);

/// Triple-mode spot jobs covering `quota_nodes` nodes in groups of
/// `job_nodes`, submitted one `stagger` apart so LIFO order is well defined.
std::vector<JobSpec> fill_with_spot(int cluster_nodes, int cores_per_node, int quota_nodes,
                                    int job_nodes, SimTime start, double stagger = 1.0,
                                    double run_seconds = 86400.0);

std::vector<JobSpec> default_timeline(const Scenario& s);

/// One experiment cell with its cluster, cost model, agent and timeline.
Scenario make_scenario(Approach approach, PreemptMode mode, PartitionLayout partitions,
                       JobType job_type, SizeClass size, std::uint64_t seed = 1);

struct SkippedCell {
  std::string row;
  std::string reason;
};

struct Table1 {
  std::vector<Scenario> scenarios;
  std::vector<SkippedCell> skipped;
};

/// Every supported experiment cell, in a fixed order.
Table1 table1_matrix(std::uint64_t seed = 1);

/// Random spot/interactive arrivals on a small cluster (for the agent's
/// headroom properties). Portable: derived from the raw mt19937_64 stream.
struct StreamParams {
  int nodes = 19;
  int cores_per_node = 32;
  double horizon = 3600.0;
  int spot_jobs = 24;
  int interactive_jobs = 16;
};
std::vector<JobSpec> random_stream(std::uint64_t seed, const StreamParams& p = {});

}  // namespace spotsim
