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

#include "spotsim/workload.hpp"

#include <algorithm>
#include <random>

#include "spotsim/errors.hpp"

namespace spotsim {

std::string_view to_string(Approach a) {
  switch (a) {
    case Approach::Baseline: return "baseline";
    case Approach::Auto: return "auto";
    case Approach::Manual: return "manual";
    case Approach::Cron: return "cron";
  }
  return "?";
}

std::string_view to_string(SizeClass s) {
  switch (s) {
    case SizeClass::Small: return "small";
    case SizeClass::Medium: return "medium";
    case SizeClass::Large: return "large";
  }
  return "?";
}

int size_tasks(SizeClass s) {
  switch (s) {
    case SizeClass::Small: return 608;
    case SizeClass::Medium: return 2048;
    case SizeClass::Large: return 4096;
  }
  return 0;
}

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::string Scenario::id() const {
  std::string out(to_string(approach));
  if (approach != Approach::Baseline) out += "-" + lower(to_string(mode));
  out += "-" + std::string(to_string(partitions));
  out += "-" + std::string(to_string(job_type));
  out += "-" + std::string(to_string(size));
  out += "-s" + std::to_string(seed);
  return out;
}

int Scenario::effective_per_user_limit() const {
  return per_user_limit_nodes == 0 ? nodes : per_user_limit_nodes;
}

ClusterConfig Scenario::cluster_config() const {
  return ClusterConfig::uniform(nodes, cores_per_node, partitions, mode, per_user_limit_nodes);
}

SchedulerConfig Scenario::scheduler_config() const {
  return SchedulerConfig{approach == Approach::Auto, per_user_quota};
}

void Scenario::validate() const {
  if (nodes <= 0) throw ConfigError("cluster.nodes", "must be > 0");
  if (cores_per_node <= 0) throw ConfigError("cluster.cores_per_node", "must be > 0");
  build_cluster(cluster_config());
  cost.validate();
  if (approach == Approach::Cron && !agent) {
    throw ConfigError("agent", "cron approach requires an agent");
  }
  if (approach != Approach::Cron && agent) {
    throw ConfigError("agent", "only the cron approach runs an agent");
  }
  if (agent && !(agent->interval > 0.0)) throw ConfigError("agent.interval", "must be > 0");
  if (agent && agent->reserve_nodes > nodes) {
    throw ConfigError("agent.reserve_nodes", "exceeds the cluster's node count");
  }
  if (static_cast<long>(size_tasks(size)) > static_cast<long>(nodes) * cores_per_node) {
    throw ConfigError("workload.size", "job size exceeds cluster capacity");
  }
  for (const auto& spec : timeline) {
    try {
      validate_spec_for_cluster(spec);
    } catch (const ValidationError& e) {
      throw ConfigError("timeline", e.what());
    }
  }
}

void Scenario::validate_spec_for_cluster(const JobSpec& spec) const {
  spotsim::validate(spec, cores_per_node);
  long cores = static_cast<long>(spec.total_tasks) * spec.cores_per_task;
  if (spec.job_type == JobType::Triple) {
    cores = static_cast<long>(dispatch_units(spec)) * cores_per_node;
  }
  if (cores > static_cast<long>(nodes) * cores_per_node) {
    throw ValidationError("job needs more cores than the cluster has");
  }
}

std::vector<JobSpec> make_job(JobType type, int total_tasks, int tasks_per_node, Qos qos,
                              const std::string& user, SimTime t) {
  if (total_tasks < 1) throw ValidationError("total_tasks must be >= 1");
  if (type == JobType::Triple && tasks_per_node < 1) {
    throw ValidationError("triple job needs tasks_per_node >= 1");
  }
  JobSpec base;
  base.user = user;
  base.qos = qos;
  base.job_type = type;
  base.total_tasks = total_tasks;
  base.tasks_per_node = type == JobType::Triple ? tasks_per_node : 1;
  base.submit_at = t;
  if (type != JobType::Individual) return {base};
  base.total_tasks = 1;
  return std::vector<JobSpec>(static_cast<std::size_t>(total_tasks), base);
}

std::vector<JobSpec> fill_with_spot(int cluster_nodes, int cores_per_node, int quota_nodes,
                                    int job_nodes, SimTime start, double stagger,
                                    double run_seconds) {
  if (quota_nodes > cluster_nodes) throw ValidationError("spot quota exceeds cluster nodes");
  if (job_nodes < 1) throw ValidationError("spot job needs >= 1 node");
  std::vector<JobSpec> out;
  int left = quota_nodes;
  for (int i = 0; left > 0; ++i) {
    const int n = std::min(job_nodes, left);
    auto spec = make_job(JobType::Triple, n * cores_per_node, cores_per_node, Qos::Spot, "spot",
                         start + i * stagger)
                    .front();
    spec.run_seconds = run_seconds;
    out.push_back(spec);
    left -= n;
  }
  return out;
}

std::vector<JobSpec> default_timeline(const Scenario& s) {
  std::vector<JobSpec> tl;
  const auto& w = s.workload;
  const int group = w.spot_job_nodes > 0 ? w.spot_job_nodes : s.effective_per_user_limit();
  if (s.approach != Approach::Baseline) {
    int quota = s.nodes;
    if (s.approach == Approach::Cron) {
      const int reserve = s.agent && s.agent->reserve_nodes >= 0 ? s.agent->reserve_nodes
                                                                 : s.effective_per_user_limit();
      quota = spot_quota(s.nodes, reserve, 0);
    }
    tl = fill_with_spot(s.nodes, s.cores_per_node, quota, group, SimTime{}, 1.0,
                        w.spot_run_seconds);
  }

  auto interactive = [&](double t) {
    JobSpec j;
    j.user = "interactive";
    j.qos = Qos::Normal;
    j.job_type = s.job_type;
    j.total_tasks = size_tasks(s.size);
    j.tasks_per_node = s.job_type == JobType::Triple ? s.cores_per_node : 1;
    j.cores_per_task = 1;
    j.run_seconds = w.run_seconds;
    j.submit_at = SimTime(t);
    return j;
  };
  tl.push_back(interactive(w.arrival));
  if (s.approach == Approach::Cron) {
    tl.push_back(interactive(w.second_arrival.value_or(w.arrival + 150.0)));
  }
  return tl;
}

Scenario make_scenario(Approach approach, PreemptMode mode, PartitionLayout partitions,
                       JobType job_type, SizeClass size, std::uint64_t seed) {
  Scenario s;
  s.approach = approach;
  s.mode = mode;
  s.partitions = partitions;
  s.job_type = job_type;
  s.size = size;
  s.seed = seed;
  if (size == SizeClass::Small) {
    s.nodes = 19;
    s.cores_per_node = 32;
    s.per_user_limit_nodes = 19;
  } else {
    s.nodes = 64;
    s.cores_per_node = 64;
    s.per_user_limit_nodes = 64;
  }
  if (approach == Approach::Cron) {
    // Headroom equal to the per-user limit plus as much again for spot work.
    s.nodes = 2 * s.per_user_limit_nodes;
    s.workload.spot_job_nodes = s.per_user_limit_nodes / 4;
    s.agent = AgentConfig{};
  }
  s.cost = CostModel::calibrated(s.cores_per_node);
  s.timeline = default_timeline(s);
  return s;
}

Table1 table1_matrix(std::uint64_t seed) {
  Table1 t;
  const JobType types[] = {JobType::Individual, JobType::Array, JobType::Triple};
  const SizeClass sizes[] = {SizeClass::Small, SizeClass::Medium, SizeClass::Large};

  for (SizeClass size : sizes) {
    for (JobType type : types) {
      t.scenarios.push_back(make_scenario(Approach::Baseline, PreemptMode::Requeue,
                                          PartitionLayout::Dual, type, size, seed));
    }
  }
  for (PreemptMode mode : {PreemptMode::Requeue, PreemptMode::Cancel}) {
    for (PartitionLayout layout : {PartitionLayout::Single, PartitionLayout::Dual}) {
      for (JobType type : types) {
        for (SizeClass size : sizes) {
          t.scenarios.push_back(make_scenario(Approach::Auto, mode, layout, type, size, seed));
        }
      }
    }
  }
  t.skipped.push_back({"lua-requeue-dual",
                       "job-submit plugin could not issue scheduler commands; not simulated"});
  for (Approach a : {Approach::Manual, Approach::Cron}) {
    for (JobType type : types) {
      t.scenarios.push_back(
          make_scenario(a, PreemptMode::Requeue, PartitionLayout::Dual, type, SizeClass::Large,
                        seed));
    }
  }
  return t;
}

std::vector<JobSpec> random_stream(std::uint64_t seed, const StreamParams& p) {
  std::mt19937_64 rng(seed);
  auto pick = [&](std::uint64_t n) { return rng() % n; };
  auto uniform = [&](double hi) {
    return static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0) * hi;
  };

  std::vector<JobSpec> out;
  for (int i = 0; i < p.spot_jobs; ++i) {
    const int n = 1 + static_cast<int>(pick(4));
    auto spec = make_job(JobType::Triple, n * p.cores_per_node, p.cores_per_node, Qos::Spot,
                         "spot" + std::to_string(pick(3)), SimTime(uniform(p.horizon)))
                    .front();
    spec.run_seconds = 60.0 + uniform(1800.0);
    out.push_back(spec);
  }
  const JobType types[] = {JobType::Individual, JobType::Array, JobType::Triple};
  for (int i = 0; i < p.interactive_jobs; ++i) {
    const JobType type = types[pick(3)];
    const int nodes = 1 + static_cast<int>(pick(3));
    const int tasks = type == JobType::Triple ? nodes * p.cores_per_node
                                              : 1 + static_cast<int>(pick(
                                                        static_cast<std::uint64_t>(nodes) *
                                                        p.cores_per_node));
    auto specs = make_job(type, tasks, p.cores_per_node, Qos::Normal, "interactive",
                          SimTime(uniform(p.horizon)));
    JobSpec spec = specs.front();
    spec.total_tasks = tasks;
    spec.run_seconds = 30.0 + uniform(900.0);
    out.push_back(spec);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const JobSpec& a, const JobSpec& b) { return a.submit_at < b.submit_at; });
  return out;
}

}  // namespace spotsim
