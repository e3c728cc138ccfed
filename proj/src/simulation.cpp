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

#include "spotsim/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <memory>

namespace spotsim {

RunResult run_scenario(const Scenario& s, const RunOptions& opts) {
  s.validate();
  const auto wall0 = std::chrono::steady_clock::now();

  Engine engine;
  ClusterState cluster = build_cluster(s.cluster_config());
  Scheduler scheduler(engine, cluster, s.scheduler_config(), s.cost);
  std::unique_ptr<SpotAgent> agent;
  if (s.approach == Approach::Cron) {
    agent = std::make_unique<SpotAgent>(engine, cluster, scheduler, *s.agent, s.cost);
  }
  ExternalRequeuer requeuer(engine, cluster, scheduler, s.cost);

  RunResult out;
  out.scenario = s;

  // Units still to dispatch per measured batch.
  std::map<std::int64_t, long> remaining;
  std::size_t submitted = 0;

  engine.on(EventKind::Submit, [&](const Event& e) {
    const JobSpec& spec = s.timeline.at(static_cast<std::size_t>(e.payload.count));
    const JobId first = scheduler.next_job_id();
    if (s.approach == Approach::Manual && spec.qos == Qos::Normal) {
      requeuer.submit_with_requeue(spec, e.fire_at);
    } else {
      scheduler.submit(spec, e.fire_at);
    }
    ++submitted;
    const JobRecord& head = scheduler.job(first);
    long units = 0;
    for (JobId id = first; id < scheduler.next_job_id(); ++id) {
      units += dispatch_units(scheduler.job(id).spec);
    }
    if (spec.qos == Qos::Normal) {
      out.measured_batches.push_back(head.batch);
      remaining[head.batch] = units;
    }
    return LogFacts{first, head.batch, static_cast<std::int32_t>(units), spec.total_tasks,
                    head.recognized_at.seconds, std::string(to_string(spec.qos))};
  });

  const SimView view{cluster, scheduler, agent.get()};
  engine.observe([&](const LogEntry& entry) {
    if (entry.kind == EventKind::TaskDispatched && entry.detail != "stale") {
      auto it = remaining.find(entry.batch);
      if (it != remaining.end()) --it->second;
    }
    if (opts.after_event) opts.after_event(entry, view);
    if (opts.stop_when_measured && submitted == s.timeline.size() &&
        std::all_of(remaining.begin(), remaining.end(),
                    [](const auto& kv) { return kv.second <= 0; })) {
      engine.stop();
    }
  });

  scheduler.start(SimTime{});
  if (agent) agent->start(SimTime{});
  double last_submit = 0.0;
  for (std::size_t i = 0; i < s.timeline.size(); ++i) {
    Payload p;
    p.count = static_cast<std::int64_t>(i);
    engine.schedule(s.timeline[i].submit_at, EventKind::Submit, p);
    last_submit = std::max(last_submit, s.timeline[i].submit_at.seconds);
  }

  const double horizon = opts.horizon > 0.0 ? opts.horizon : last_submit + 4 * 3600.0;
  engine.run_until(SimTime(horizon));

  out.log = engine.log();
  out.jobs = scheduler.jobs();
  if (agent) out.agent_reports = agent->reports();
  out.all_measured_dispatched =
      submitted == s.timeline.size() &&
      std::all_of(remaining.begin(), remaining.end(), [](const auto& kv) { return kv.second <= 0; });
  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
  return out;
}

}  // namespace spotsim
