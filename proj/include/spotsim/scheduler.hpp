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

#include <map>
#include <optional>
#include <set>
#include <tuple>
#include <vector>

#include "spotsim/cluster.hpp"
#include "spotsim/cost_model.hpp"
#include "spotsim/engine.hpp"
#include "spotsim/job.hpp"

namespace spotsim {

struct SchedulerConfig {
  /// In-scheduler automatic preemption of spot jobs, youngest first.
  bool auto_preempt = false;
  /// Enforce the spot quota per user instead of across all spot jobs.
  bool per_user_quota = false;
};

struct Need {
  long cores = 0;
  int nodes = 0;
};

/// Shortest youngest-first prefix of `spot_jobs` whose combined cores and
/// nodes cover `need`. Throws InsufficientEvenAfterPreemption when every spot
/// job together still falls short.
std::vector<JobId> select_youngest_first(std::vector<VictimCandidate> spot_jobs, Need need);

struct Dispatch {
  JobId job = 0;
  SimTime first;
  SimTime last;
  int units = 0;
  DispatchPath path = DispatchPath::None;
};

/// Queue management, main and backfill cycles, dispatch timing and
/// automatic preemption. Owns every JobRecord; mutates the ClusterState it
/// is given. All entry points run inside event handlers of one Engine.
class Scheduler {
 public:
  Scheduler(Engine& engine, ClusterState& cluster, SchedulerConfig cfg, CostModel cost);
  Scheduler(const Scheduler&) = delete;
  Scheduler& operator=(const Scheduler&) = delete;

  /// Registers the cycle/dispatch handlers and starts both periodic chains
  /// at t0.
  void start(SimTime t0 = SimTime{});

  /// Registers the request. The job(s) become visible at
  /// submitted + c_recognize, when a one-shot main cycle also runs. An
  /// individual request expands to total_tasks one-task jobs sharing the
  /// batch tag (the first job id). Throws ValidationError.
  std::vector<JobId> submit(const JobSpec& spec, SimTime submitted,
                            std::optional<SimTime> preempt_start = std::nullopt, int victims = 0);

  std::vector<Dispatch> main_cycle(SimTime now);
  std::vector<Dispatch> backfill_cycle(SimTime now);

  /// Requeues a running spot job: allocation released with its nodes
  /// draining until `drain_until`, state back to Pending with the original
  /// recognized_at. Throws UnknownJob, NotRunning, NotSpot.
  void requeue(JobId id, SimTime drain_until);

  const JobRecord& job(JobId id) const;
  const std::map<JobId, JobRecord>& jobs() const { return jobs_; }
  std::vector<VictimCandidate> running_spot_jobs() const;
  JobId next_job_id() const { return next_id_; }
  SimTime busy_until() const { return busy_until_; }
  const SchedulerConfig& config() const { return cfg_; }
  const CostModel& cost() const { return cost_; }

 private:
  // (-priority, recognized_at, id)
  using QueueKey = std::tuple<int, SimTime, JobId>;

  QueueKey key_of(const JobRecord& j) const;
  std::vector<std::vector<JobId>> visible_queues(SimTime now) const;
  bool quota_blocks(const JobRecord& j, const Placement& p) const;
  SimTime dispatch(JobRecord& j, const Placement& p, SimTime cursor, DispatchPath path);
  bool try_auto_preempt(JobRecord& j, SimTime now, SimTime& cursor);
  void preempt(JobId victim, SimTime signalled, SimTime drain_until, std::int64_t for_batch);
  void make_pending(JobRecord& j);

  struct Reservation {
    JobId head = 0;
    PlacementRequest request;
    SimTime shadow = SimTime::never();
    ClusterState future;
  };
  Reservation reserve_for(const JobRecord& head, SimTime now) const;

  LogFacts on_main(const Event& e);
  LogFacts on_backfill(const Event& e);
  LogFacts on_task_dispatched(const Event& e);
  LogFacts on_job_completed(const Event& e);

  Engine& engine_;
  ClusterState& cluster_;
  SchedulerConfig cfg_;
  CostModel cost_;
  std::map<JobId, JobRecord> jobs_;
  std::set<QueueKey> pending_;
  std::set<SimTime> triggered_cycles_;
  SimTime busy_until_;
  JobId next_id_ = 0;
};

}  // namespace spotsim
