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

#include <vector>

#include "spotsim/cluster.hpp"
#include "spotsim/cost_model.hpp"
#include "spotsim/engine.hpp"
#include "spotsim/job.hpp"
#include "spotsim/scheduler.hpp"

namespace spotsim {

struct AgentConfig {
  double interval = 60.0;
  /// Idle nodes kept free for the next interactive job. Negative means "use
  /// the cluster's per-user limit".
  int reserve_nodes = -1;

  bool operator==(const AgentConfig&) const = default;
};

struct AgentReport {
  SimTime tick_time;
  int idle_before = 0;
  /// Projected idle count once the victims' drains expire.
  int idle_after = 0;
  int deficit = 0;
  std::vector<JobId> victims;
  int new_spot_quota = 0;
};

/// Idle-node target: the reserve, capped by what interactive work leaves.
int reserve_target(int total_nodes, int reserve_nodes, int interactive_nodes);

/// max(0, total - reserve - interactive).
int spot_quota(int total_nodes, int reserve_nodes, int interactive_nodes);

/// Shortest last-in-first-out prefix of `spot_jobs` whose node footprint
/// covers `deficit_nodes`; every job when even all of them fall short.
std::vector<JobId> select_lifo_victims(std::vector<VictimCandidate> spot_jobs, int deficit_nodes);

/// Requeues spot jobs from outside the scheduler, the way a privileged user
/// would with a requeue command. Victims drain for c_requeue_release.
class ExternalRequeuer {
 public:
  ExternalRequeuer(Engine& engine, ClusterState& cluster, Scheduler& scheduler, CostModel cost)
      : engine_(engine), cluster_(cluster), scheduler_(scheduler), cost_(cost) {}

  /// LIFO requeue until `deficit_nodes` are freed. Returns the victims; the
  /// i-th one is signalled at now + (i+1) * c_preempt_signal.
  std::vector<JobId> requeue_lifo(int deficit_nodes, SimTime now, std::int64_t for_batch);

  /// Manual approach: requeue what the request needs beyond the idle nodes,
  /// then submit it once the requeue commands return.
  std::vector<JobId> submit_with_requeue(const JobSpec& spec, SimTime now);

 protected:
  Engine& engine_;
  ClusterState& cluster_;
  Scheduler& scheduler_;
  CostModel cost_;
};

/// The periodic headroom agent. Runs as AgentTick events on the same
/// engine; never touches normal-QoS jobs.
class SpotAgent : public ExternalRequeuer {
 public:
  SpotAgent(Engine& engine, ClusterState& cluster, Scheduler& scheduler, AgentConfig cfg,
            CostModel cost);

  /// Registers the AgentTick/QuotaUpdated handlers and the first tick at t0.
  void start(SimTime t0 = SimTime{});

  AgentReport tick(SimTime now);
  int update_spot_quota(SimTime now);

  int reserve_nodes() const { return reserve_; }
  const AgentConfig& config() const { return cfg_; }
  const std::vector<AgentReport>& reports() const { return reports_; }

 private:
  AgentConfig cfg_;
  int reserve_ = 0;
  std::vector<AgentReport> reports_;
};

}  // namespace spotsim
