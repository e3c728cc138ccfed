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

#include "spotsim/scheduler.hpp"

#include <algorithm>
#include <variant>

#include "spotsim/errors.hpp"

namespace spotsim {

std::vector<JobId> select_youngest_first(std::vector<VictimCandidate> spot_jobs, Need need) {
  std::sort(spot_jobs.begin(), spot_jobs.end(), younger);
  std::vector<JobId> victims;
  long cores = 0;
  int nodes = 0;
  for (const auto& c : spot_jobs) {
    if (cores >= need.cores && nodes >= need.nodes) break;
    victims.push_back(c.id);
    cores += c.cores;
    nodes += c.nodes;
  }
  if (cores < need.cores || nodes < need.nodes) {
    throw InsufficientEvenAfterPreemption(
        "all running spot jobs free " + std::to_string(cores) + " cores / " +
        std::to_string(nodes) + " nodes, need " + std::to_string(need.cores) + " / " +
        std::to_string(need.nodes));
  }
  return victims;
}

Scheduler::Scheduler(Engine& engine, ClusterState& cluster, SchedulerConfig cfg, CostModel cost)
    : engine_(engine), cluster_(cluster), cfg_(cfg), cost_(cost) {
  cost_.validate();
}

void Scheduler::start(SimTime t0) {
  engine_.on(EventKind::MainCycle, [this](const Event& e) { return on_main(e); });
  engine_.on(EventKind::BackfillCycle, [this](const Event& e) { return on_backfill(e); });
  engine_.on(EventKind::TaskDispatched, [this](const Event& e) { return on_task_dispatched(e); });
  engine_.on(EventKind::JobCompleted, [this](const Event& e) { return on_job_completed(e); });
  engine_.on(EventKind::PreemptionDone, [this](const Event& e) {
    const auto& v = jobs_.at(e.payload.job);
    return LogFacts{v.id, e.payload.batch, -1, e.payload.count, 0.0,
                    e.payload.count != 0 ? "cancel" : "requeue"};
  });
  Payload periodic;
  periodic.periodic = true;
  engine_.schedule(t0, EventKind::MainCycle, periodic);
  engine_.schedule(t0, EventKind::BackfillCycle, periodic);
}

std::vector<JobId> Scheduler::submit(const JobSpec& spec, SimTime submitted,
                                     std::optional<SimTime> preempt_start, int victims) {
  validate(spec, cluster_.max_node_cores());
  const int records = spec.job_type == JobType::Individual ? spec.total_tasks : 1;
  const JobId batch = next_id_;
  const SimTime recognized = submitted + cost_.c_recognize;

  JobSpec per_record = spec;
  if (spec.job_type == JobType::Individual) per_record.total_tasks = 1;

  std::vector<JobId> ids;
  ids.reserve(static_cast<std::size_t>(records));
  for (int i = 0; i < records; ++i) {
    JobRecord r;
    r.id = next_id_++;
    r.spec = per_record;
    r.batch = batch;
    r.recognized_at = recognized;
    r.preempt_start = preempt_start;
    if (i == 0) r.victims = victims;
    pending_.insert(key_of(r));
    ids.push_back(r.id);
    jobs_.emplace(r.id, std::move(r));
  }
  if (triggered_cycles_.insert(recognized).second) {
    engine_.schedule(recognized, EventKind::MainCycle);
  }
  return ids;
}

const JobRecord& Scheduler::job(JobId id) const {
  auto it = jobs_.find(id);
  if (it == jobs_.end()) throw UnknownJob("job " + std::to_string(id));
  return it->second;
}

Scheduler::QueueKey Scheduler::key_of(const JobRecord& j) const {
  return {-cluster_.policy(j.spec.qos).priority, j.recognized_at, j.id};
}

std::vector<std::vector<JobId>> Scheduler::visible_queues(SimTime now) const {
  const bool dual = cluster_.layout() == PartitionLayout::Dual;
  std::vector<std::vector<JobId>> queues(dual ? 2 : 1);
  for (const auto& [prio, recognized, id] : pending_) {
    if (recognized > now) continue;
    const auto& j = jobs_.at(id);
    queues[dual && j.spec.qos == Qos::Spot ? 1 : 0].push_back(id);
  }
  return queues;
}

std::vector<VictimCandidate> Scheduler::running_spot_jobs() const {
  std::vector<VictimCandidate> out;
  for (JobId id : cluster_.allocated_jobs()) {
    const auto& j = jobs_.at(id);
    if (j.spec.qos != Qos::Spot || j.state != JobState::Running) continue;
    out.push_back({id, j.recognized_at, cluster_.allocation(id).cores(), cluster_.footprint(id)});
  }
  return out;
}

bool Scheduler::quota_blocks(const JobRecord& j, const Placement& p) const {
  if (j.spec.qos != Qos::Spot) return false;
  const auto& quota = cluster_.policy(Qos::Spot).max_tres_per_user;
  if (!quota) return false;
  if (cfg_.per_user_quota) {
    return cluster_.per_user_spot_nodes(j.spec.user) +
               cluster_.new_user_spot_nodes(j.spec.user, p) >
           *quota;
  }
  return cluster_.spot_nodes() + cluster_.new_spot_nodes(p) > *quota;
}

SimTime Scheduler::dispatch(JobRecord& j, const Placement& p, SimTime cursor, DispatchPath path) {
  const int units = p.units();
  const double c_unit =
      j.spec.job_type == JobType::Triple ? cost_.c_node_dispatch : cost_.c_task_dispatch;
  pending_.erase(key_of(j));
  ++j.epoch;
  j.state = JobState::Running;
  j.dispatched_by = path;
  j.awaiting_preemption = false;
  j.units_this_run = units;

  Payload pl;
  pl.job = j.id;
  pl.batch = j.batch;
  pl.count = j.epoch;
  for (int i = 1; i <= units; ++i) {
    pl.unit = i - 1;
    engine_.schedule(cursor + i * c_unit, EventKind::TaskDispatched, pl);
  }
  const SimTime last = cursor + units * c_unit;
  j.expected_end = last + j.spec.run_seconds;
  pl.unit = -1;
  engine_.schedule(j.expected_end, EventKind::JobCompleted, pl);
  return last;
}

void Scheduler::make_pending(JobRecord& j) {
  j.state = JobState::Pending;
  pending_.insert(key_of(j));
}

void Scheduler::preempt(JobId victim, SimTime signalled, SimTime drain_until,
                        std::int64_t for_batch) {
  auto& v = jobs_.at(victim);
  const bool cancel = cluster_.policy(Qos::Spot).preempt_mode == PreemptMode::Cancel;
  cluster_.release(victim, drain_until);
  ++v.epoch;
  if (cancel) {
    v.state = JobState::Cancelled;
  } else {
    v.state = JobState::Requeued;
    ++v.requeue_count;
    make_pending(v);
  }
  Payload pl;
  pl.job = victim;
  pl.batch = for_batch;
  pl.count = cancel ? 1 : 0;
  engine_.schedule(signalled, EventKind::PreemptionDone, pl);
}

void Scheduler::requeue(JobId id, SimTime drain_until) {
  auto it = jobs_.find(id);
  if (it == jobs_.end()) throw UnknownJob("job " + std::to_string(id));
  auto& j = it->second;
  if (j.spec.qos != Qos::Spot) throw NotSpot("job " + std::to_string(id) + " is not a spot job");
  if (j.state != JobState::Running) {
    throw NotRunning("job " + std::to_string(id) + " is " + std::string(to_string(j.state)));
  }
  cluster_.release(id, drain_until);
  ++j.epoch;
  j.state = JobState::Requeued;
  ++j.requeue_count;
  make_pending(j);
}

bool Scheduler::try_auto_preempt(JobRecord& j, SimTime now, SimTime& cursor) {
  const auto req = placement_request(j.spec);
  ClusterState hypo = cluster_;
  hypo.clear_drains();
  const auto res = hypo.try_place(req, now);
  // Fits once current drains expire: nothing more to preempt.
  if (std::holds_alternative<Placement>(res)) return false;
  const auto& short_by = std::get<Insufficient>(res);

  auto candidates = running_spot_jobs();
  std::vector<JobId> victims;
  try {
    victims = select_youngest_first(candidates, Need{short_by.deficit_cores, short_by.deficit_nodes});
  } catch (const InsufficientEvenAfterPreemption&) {
    return false;
  }

  // Fragmentation can leave the request unplaceable; extend the prefix.
  std::sort(candidates.begin(), candidates.end(), younger);
  for (JobId v : victims) hypo.release(v);
  std::size_t next = victims.size();
  while (!std::holds_alternative<Placement>(hypo.try_place(req, now))) {
    if (next >= candidates.size()) return false;
    victims.push_back(candidates[next].id);
    hypo.release(candidates[next].id);
    ++next;
  }

  for (JobId v : victims) {
    cursor += cost_.c_preempt_signal;
    preempt(v, cursor, cursor + cost_.c_cleanup, j.batch);
  }
  j.awaiting_preemption = true;
  j.victims += static_cast<int>(victims.size());
  return true;
}

std::vector<Dispatch> Scheduler::main_cycle(SimTime now) {
  std::vector<Dispatch> out;
  SimTime cursor = later_of(now, busy_until_);
  const auto queues = visible_queues(now);
  const bool dual = queues.size() == 2;
  bool normal_blocked = false;

  for (std::size_t qi = 0; qi < queues.size(); ++qi) {
    if (dual && qi == 1 && normal_blocked) break;
    for (JobId id : queues[qi]) {
      auto& j = jobs_.at(id);
      cursor += cost_.c_job_overhead;
      if (j.awaiting_preemption) {
        normal_blocked = normal_blocked || j.spec.qos == Qos::Normal;
        break;
      }
      const auto res = cluster_.try_place(placement_request(j.spec), now);
      if (const auto* p = std::get_if<Placement>(&res)) {
        if (quota_blocks(j, *p)) continue;
        cluster_.commit(id, *p, {j.spec.user, j.spec.qos});
        const SimTime first = cursor;
        cursor = dispatch(j, *p, cursor, DispatchPath::Main);
        out.push_back({id, first, cursor, p->units(), DispatchPath::Main});
        continue;
      }
      // Head-of-line: the first blocked job ends this queue's scan.
      if (j.spec.qos == Qos::Normal) {
        normal_blocked = true;
        if (cfg_.auto_preempt) try_auto_preempt(j, now, cursor);
      }
      break;
    }
  }
  busy_until_ = cursor;
  return out;
}

Scheduler::Reservation Scheduler::reserve_for(const JobRecord& head, SimTime now) const {
  Reservation r;
  r.head = head.id;
  r.request = placement_request(head.spec);
  r.future = cluster_;

  std::vector<std::pair<SimTime, JobId>> releases;
  for (JobId id : cluster_.allocated_jobs()) releases.emplace_back(jobs_.at(id).expected_end, id);
  for (SimTime t : cluster_.drain_ends_after(now)) releases.emplace_back(t, -1);
  std::sort(releases.begin(), releases.end());

  for (std::size_t i = 0; i < releases.size();) {
    const SimTime t = later_of(releases[i].first, now);
    for (; i < releases.size() && later_of(releases[i].first, now) == t; ++i) {
      if (releases[i].second >= 0) r.future.release(releases[i].second);
    }
    if (std::holds_alternative<Placement>(r.future.try_place(r.request, t))) {
      r.shadow = t;
      return r;
    }
  }
  r.shadow = SimTime::never();
  return r;
}

std::vector<Dispatch> Scheduler::backfill_cycle(SimTime now) {
  std::vector<Dispatch> out;
  SimTime cursor = later_of(now, busy_until_);
  const auto queues = visible_queues(now);
  std::optional<Reservation> res;

  for (const auto& queue : queues) {
    // The candidate list is built before anything is started.
    cursor += cost_.c_job_overhead * static_cast<double>(queue.size());
    for (JobId id : queue) {
      auto& j = jobs_.at(id);
      const auto placed = cluster_.try_place(placement_request(j.spec), now);
      const auto* p = std::get_if<Placement>(&placed);
      if (!p) {
        if (!res) res = reserve_for(j, now);
        continue;
      }
      if (quota_blocks(j, *p)) continue;
      if (res) {
        const double c_unit =
            j.spec.job_type == JobType::Triple ? cost_.c_node_dispatch : cost_.c_task_dispatch;
        const SimTime end = cursor + p->units() * c_unit + j.spec.run_seconds;
        if (end > res->shadow) {
          // Must leave the head's reservation intact at the shadow time.
          res->future.commit(id, *p, {j.spec.user, j.spec.qos});
          if (!std::holds_alternative<Placement>(res->future.try_place(res->request, res->shadow))) {
            res->future.release(id);
            continue;
          }
        }
      }
      cluster_.commit(id, *p, {j.spec.user, j.spec.qos});
      const SimTime first = cursor;
      cursor = dispatch(j, *p, cursor, DispatchPath::Backfill);
      out.push_back({id, first, cursor, p->units(), DispatchPath::Backfill});
    }
  }
  busy_until_ = cursor;
  return out;
}

LogFacts Scheduler::on_main(const Event& e) {
  const SimTime now = engine_.now();
  if (e.payload.periodic) {
    Payload pl;
    pl.periodic = true;
    engine_.schedule(now + cost_.t_main, EventKind::MainCycle, pl);
  } else {
    triggered_cycles_.erase(now);
  }
  const auto d = main_cycle(now);
  LogFacts f;
  f.count = static_cast<std::int64_t>(d.size());
  f.value = busy_until_.seconds;
  f.detail = e.payload.periodic ? "periodic" : "triggered";
  return f;
}

LogFacts Scheduler::on_backfill(const Event& e) {
  const SimTime now = engine_.now();
  if (e.payload.periodic) {
    Payload pl;
    pl.periodic = true;
    engine_.schedule(now + cost_.t_backfill, EventKind::BackfillCycle, pl);
  }
  const auto d = backfill_cycle(now);
  LogFacts f;
  f.count = static_cast<std::int64_t>(d.size());
  f.value = busy_until_.seconds;
  f.detail = "periodic";
  return f;
}

LogFacts Scheduler::on_task_dispatched(const Event& e) {
  auto& j = jobs_.at(e.payload.job);
  LogFacts f{j.id, j.batch, e.payload.unit, e.payload.count, 0.0, "stale"};
  if (j.epoch == e.payload.count && j.state == JobState::Running) {
    j.dispatch_times.push_back(engine_.now());
    f.detail = std::string(to_string(j.dispatched_by));
  }
  return f;
}

LogFacts Scheduler::on_job_completed(const Event& e) {
  auto& j = jobs_.at(e.payload.job);
  LogFacts f{j.id, j.batch, -1, e.payload.count, 0.0, "stale"};
  if (j.epoch == e.payload.count && j.state == JobState::Running) {
    cluster_.release(j.id);
    j.state = JobState::Completed;
    f.detail = "completed";
  }
  return f;
}

}  // namespace spotsim
