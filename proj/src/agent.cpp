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

#include "spotsim/agent.hpp"

#include <algorithm>

#include "spotsim/errors.hpp"

namespace spotsim {

int reserve_target(int total_nodes, int reserve_nodes, int interactive_nodes) {
  return std::max(0, std::min(reserve_nodes, total_nodes - interactive_nodes));
}

int spot_quota(int total_nodes, int reserve_nodes, int interactive_nodes) {
  return std::max(0, total_nodes - reserve_nodes - interactive_nodes);
}

std::vector<JobId> select_lifo_victims(std::vector<VictimCandidate> spot_jobs, int deficit_nodes) {
  std::sort(spot_jobs.begin(), spot_jobs.end(), younger);
  std::vector<JobId> victims;
  int freed = 0;
  for (const auto& c : spot_jobs) {
    if (freed >= deficit_nodes) break;
    victims.push_back(c.id);
    freed += c.nodes;
  }
  return victims;
}

std::vector<JobId> ExternalRequeuer::requeue_lifo(int deficit_nodes, SimTime now,
                                                  std::int64_t for_batch) {
  if (deficit_nodes <= 0) return {};
  const auto victims = select_lifo_victims(scheduler_.running_spot_jobs(), deficit_nodes);
  SimTime signalled = now;
  for (JobId v : victims) {
    signalled += cost_.c_preempt_signal;
    scheduler_.requeue(v, signalled + cost_.c_requeue_release);
    Payload pl;
    pl.job = v;
    pl.batch = for_batch;
    engine_.schedule(signalled, EventKind::PreemptionDone, pl);
  }
  return victims;
}

std::vector<JobId> ExternalRequeuer::submit_with_requeue(const JobSpec& spec, SimTime now) {
  int need_nodes = 0;
  if (spec.job_type == JobType::Triple) {
    need_nodes = dispatch_units(spec);
  } else {
    const long cores = static_cast<long>(spec.total_tasks) * spec.cores_per_task;
    const long per_node = cluster_.max_node_cores();
    need_nodes = static_cast<int>((cores + per_node - 1) / per_node);
  }
  const int deficit = std::max(0, need_nodes - cluster_.idle_nodes(now));
  const auto victims = requeue_lifo(deficit, now, scheduler_.next_job_id());
  const SimTime submitted = now + cost_.c_preempt_signal * static_cast<double>(victims.size());
  return scheduler_.submit(spec, submitted, now, static_cast<int>(victims.size()));
}

SpotAgent::SpotAgent(Engine& engine, ClusterState& cluster, Scheduler& scheduler,
                     AgentConfig cfg, CostModel cost)
    : ExternalRequeuer(engine, cluster, scheduler, cost), cfg_(cfg) {
  if (!(cfg_.interval > 0.0)) throw ConfigError("agent.interval", "must be > 0");
  reserve_ = cfg_.reserve_nodes < 0 ? cluster.per_user_limit_nodes() : cfg_.reserve_nodes;
  if (reserve_ > cluster.total_nodes()) {
    throw ConfigError("agent.reserve_nodes", "exceeds the cluster's node count");
  }
}

void SpotAgent::start(SimTime t0) {
  engine_.on(EventKind::AgentTick, [this](const Event&) {
    const auto r = tick(engine_.now());
    LogFacts f;
    f.count = static_cast<std::int64_t>(r.victims.size());
    f.unit = r.deficit;
    f.value = r.new_spot_quota;
    f.detail = "idle=" + std::to_string(r.idle_before) + "->" + std::to_string(r.idle_after);
    return f;
  });
  engine_.on(EventKind::QuotaUpdated, [](const Event& e) {
    LogFacts f;
    f.count = e.payload.count;
    f.detail = "spot_quota";
    return f;
  });
  engine_.schedule(t0, EventKind::AgentTick);
}

AgentReport SpotAgent::tick(SimTime now) {
  AgentReport r;
  r.tick_time = now;
  const int total = cluster_.total_nodes();
  r.idle_before = cluster_.idle_nodes(now);
  const int target = reserve_target(total, reserve_, cluster_.interactive_nodes());
  r.deficit = std::max(0, target - r.idle_before);

  int freed = 0;
  if (r.deficit > 0) {
    const auto cands = scheduler_.running_spot_jobs();
    r.victims = requeue_lifo(r.deficit, now, -1);
    for (JobId v : r.victims) {
      for (const auto& c : cands) {
        if (c.id == v) freed += c.nodes;
      }
    }
  }
  r.idle_after = r.idle_before + freed;
  r.new_spot_quota = update_spot_quota(now);

  Payload pl;
  pl.periodic = true;
  engine_.schedule(now + cfg_.interval, EventKind::AgentTick, pl);
  reports_.push_back(r);
  return r;
}

int SpotAgent::update_spot_quota(SimTime now) {
  const int quota = spot_quota(cluster_.total_nodes(), reserve_, cluster_.interactive_nodes());
  cluster_.policy(Qos::Spot).max_tres_per_user = quota;
  Payload pl;
  pl.count = quota;
  engine_.schedule(now, EventKind::QuotaUpdated, pl);
  return quota;
}

}  // namespace spotsim
