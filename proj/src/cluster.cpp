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

#include "spotsim/cluster.hpp"

#include <algorithm>
#include <numeric>

#include "spotsim/errors.hpp"

namespace spotsim {

std::string_view to_string(Qos q) { return q == Qos::Normal ? "normal" : "spot"; }

std::string_view to_string(PreemptMode m) {
  switch (m) {
    case PreemptMode::Requeue: return "REQUEUE";
    case PreemptMode::Cancel: return "CANCEL";
    case PreemptMode::Gang: return "GANG";
    case PreemptMode::Suspend: return "SUSPEND";
  }
  return "?";
}

std::string_view to_string(PartitionLayout p) {
  return p == PartitionLayout::Single ? "single" : "dual";
}

ClusterConfig ClusterConfig::uniform(int node_count, int cores_per_node, PartitionLayout layout,
                                     PreemptMode spot_mode, int per_user_limit_nodes) {
  ClusterConfig cfg;
  cfg.nodes.reserve(static_cast<std::size_t>(std::max(node_count, 0)));
  for (int i = 0; i < node_count; ++i) cfg.nodes.push_back({i, cores_per_node});
  cfg.per_user_limit_nodes = per_user_limit_nodes;
  cfg.layout = layout;
  cfg.qos = {QosPolicy{Qos::Normal, 100, PreemptMode::Requeue, std::nullopt},
             QosPolicy{Qos::Spot, 10, spot_mode, std::nullopt}};
  return cfg;
}

int Placement::units() const {
  int n = 0;
  for (const auto& s : slots) n += s.units;
  return n;
}

long Placement::cores() const {
  long n = 0;
  for (const auto& s : slots) n += s.cores;
  return n;
}

namespace {

void check_mode(PreemptMode m, const std::string& field) {
  if (m == PreemptMode::Gang) {
    throw ConfigError(field,
                      "GANG preemption time-slices the preempted job with its preemptor on the "
                      "same nodes; interactive jobs must not share resources with preempted work");
  }
  if (m == PreemptMode::Suspend) {
    throw ConfigError(field,
                      "SUSPEND preemption keeps the preempted job resident in node memory; "
                      "interactive jobs need the full memory of their nodes");
  }
}

std::vector<int> sorted_ids(std::vector<int> ids) {
  std::sort(ids.begin(), ids.end());
  return ids;
}

}  // namespace

ClusterState build_cluster(const ClusterConfig& cfg) {
  if (cfg.nodes.empty()) throw ConfigError("cluster.nodes", "cluster has no nodes");

  ClusterState st;
  st.layout_ = cfg.layout;
  for (const auto& n : cfg.nodes) {
    if (n.cores <= 0) {
      throw ConfigError("cluster.cores_per_node",
                        "node " + std::to_string(n.node_id) + " has no cores");
    }
    if (!st.index_.emplace(n.node_id, st.nodes_.size()).second) {
      throw ConfigError("cluster.nodes", "duplicate node id " + std::to_string(n.node_id));
    }
    st.nodes_.push_back(ClusterState::Node{n, n.cores, SimTime{}, 0, 0});
  }

  const int total = static_cast<int>(cfg.nodes.size());
  st.per_user_limit_nodes_ = cfg.per_user_limit_nodes == 0 ? total : cfg.per_user_limit_nodes;
  if (st.per_user_limit_nodes_ < 0 || st.per_user_limit_nodes_ > total) {
    throw ConfigError("cluster.per_user_limit_nodes", "must be within [0, node count]");
  }

  std::vector<int> all_ids;
  for (const auto& n : cfg.nodes) all_ids.push_back(n.node_id);
  all_ids = sorted_ids(all_ids);

  st.partitions_ = cfg.partitions;
  if (st.partitions_.empty()) {
    if (cfg.layout == PartitionLayout::Single) {
      st.partitions_.push_back({"all", all_ids, {Qos::Normal, Qos::Spot}});
    } else {
      st.partitions_.push_back({"interactive", all_ids, {Qos::Normal}});
      st.partitions_.push_back({"spot", all_ids, {Qos::Spot}});
    }
  }
  for (const auto& p : st.partitions_) {
    const std::string field = "cluster.partition." + p.name;
    if (p.node_ids.empty()) throw ConfigError(field, "partition has no nodes");
    if (p.admitted_qos.empty()) throw ConfigError(field, "partition admits no QoS");
    for (int id : p.node_ids) {
      if (!st.index_.count(id)) {
        throw ConfigError(field, "unknown node id " + std::to_string(id));
      }
    }
  }
  if (cfg.layout == PartitionLayout::Single) {
    if (st.partitions_.size() != 1 || st.partitions_[0].admitted_qos.size() != 2) {
      throw ConfigError("cluster.partitions",
                        "single layout needs one partition admitting normal and spot");
    }
  } else {
    if (st.partitions_.size() != 2) {
      throw ConfigError("cluster.partitions", "dual layout needs exactly two partitions");
    }
    const auto& a = st.partitions_[0];
    const auto& b = st.partitions_[1];
    if (sorted_ids(a.node_ids) != sorted_ids(b.node_ids)) {
      throw ConfigError("cluster.partitions", "dual partitions must cover the same nodes");
    }
    for (Qos q : a.admitted_qos) {
      if (b.admitted_qos.count(q)) {
        throw ConfigError("cluster.partitions", "dual partitions must admit disjoint QoS");
      }
    }
  }

  st.qos_ = cfg.qos;
  if (st.qos_.empty()) st.qos_ = ClusterConfig::uniform(1, 1).qos;
  bool have_normal = false, have_spot = false;
  for (const auto& q : st.qos_) {
    const std::string field = "qos." + std::string(to_string(q.qos));
    check_mode(q.preempt_mode, field + ".preempt_mode");
    if (q.max_tres_per_user && *q.max_tres_per_user < 0) {
      throw ConfigError(field + ".max_tres_per_user", "must be >= 0");
    }
    (q.qos == Qos::Normal ? have_normal : have_spot) = true;
  }
  if (!have_normal || !have_spot) throw ConfigError("qos", "both normal and spot QoS required");
  if (st.policy(Qos::Normal).priority <= st.policy(Qos::Spot).priority) {
    throw ConfigError("qos.priority", "normal priority must exceed spot priority");
  }
  return st;
}

std::size_t ClusterState::index_of(int node_id) const {
  auto it = index_.find(node_id);
  if (it == index_.end()) throw SimError("unknown node id " + std::to_string(node_id));
  return it->second;
}

const QosPolicy& ClusterState::policy(Qos q) const {
  for (const auto& p : qos_) {
    if (p.qos == q) return p;
  }
  throw SimError("no policy for QoS " + std::string(to_string(q)));
}

QosPolicy& ClusterState::policy(Qos q) {
  return const_cast<QosPolicy&>(static_cast<const ClusterState&>(*this).policy(q));
}

long ClusterState::total_cores() const {
  long n = 0;
  for (const auto& node : nodes_) n += node.spec.cores;
  return n;
}

int ClusterState::max_node_cores() const {
  int m = 0;
  for (const auto& node : nodes_) m = std::max(m, node.spec.cores);
  return m;
}

long ClusterState::free_cores() const {
  long n = 0;
  for (const auto& node : nodes_) n += node.free;
  return n;
}

long ClusterState::allocated_cores() const {
  long n = 0;
  for (const auto& [job, a] : allocs_) n += a.placement.cores();
  return n;
}

bool ClusterState::draining(int node_id, SimTime now) const {
  return nodes_.at(index_of(node_id)).drain_until > now;
}

std::vector<SimTime> ClusterState::drain_ends_after(SimTime now) const {
  std::vector<SimTime> ends;
  for (const auto& n : nodes_) {
    if (n.drain_until > now) ends.push_back(n.drain_until);
  }
  std::sort(ends.begin(), ends.end());
  ends.erase(std::unique(ends.begin(), ends.end()), ends.end());
  return ends;
}

void ClusterState::clear_drains() {
  for (auto& n : nodes_) n.drain_until = SimTime{};
}

PlaceResult ClusterState::try_place(const PlacementRequest& req, SimTime now) const {
  Placement p;
  p.node_exclusive = req.node_exclusive;
  if (req.node_exclusive) {
    int need = req.n_units;
    for (const auto& n : nodes_) {
      if (need == 0) break;
      if (n.free == n.spec.cores && !(n.drain_until > now)) {
        p.slots.push_back({n.spec.node_id, n.spec.cores, 1});
        --need;
      }
    }
    if (need > 0) return Insufficient{0, need};
    return p;
  }

  const int cpu = req.cores_per_unit;
  int remaining = req.n_units;
  long usable = 0;
  for (const auto& n : nodes_) {
    if (n.drain_until > now) continue;
    usable += n.free;
    if (remaining == 0) continue;
    const int k = std::min(remaining, n.free / cpu);
    if (k > 0) {
      p.slots.push_back({n.spec.node_id, k * cpu, k});
      remaining -= k;
    }
  }
  if (remaining > 0) {
    const long needed = static_cast<long>(req.n_units) * cpu;
    return Insufficient{std::max(1L, needed - usable), 0};
  }
  return p;
}

void ClusterState::commit(JobId job, const Placement& placement, const JobOwner& owner) {
  if (allocs_.count(job)) throw DoubleCommit("job " + std::to_string(job) + " already allocated");
  for (const auto& s : placement.slots) {
    const auto& n = nodes_.at(index_of(s.node_id));
    const bool fits = placement.node_exclusive ? n.free == n.spec.cores : n.free >= s.cores;
    if (!fits || s.cores <= 0) {
      throw PlacementConflict("node " + std::to_string(s.node_id) + " cannot host job " +
                              std::to_string(job));
    }
  }
  for (const auto& s : placement.slots) {
    auto& n = nodes_[index_of(s.node_id)];
    n.free -= s.cores;
    if (owner.qos == Qos::Spot) {
      ++n.spot_refs;
      ++user_spot_[owner.user][s.node_id];
    } else {
      ++n.normal_refs;
    }
  }
  allocs_.emplace(job, Allocation{placement, owner});
}

void ClusterState::release(JobId job, std::optional<SimTime> drain_until) {
  auto it = allocs_.find(job);
  if (it == allocs_.end()) throw UnknownJob("job " + std::to_string(job) + " holds no allocation");
  const auto& a = it->second;
  for (const auto& s : a.placement.slots) {
    auto& n = nodes_[index_of(s.node_id)];
    n.free += s.cores;
    if (a.owner.qos == Qos::Spot) {
      --n.spot_refs;
      auto& per_node = user_spot_[a.owner.user];
      if (--per_node[s.node_id] == 0) per_node.erase(s.node_id);
      if (per_node.empty()) user_spot_.erase(a.owner.user);
    } else {
      --n.normal_refs;
    }
    if (drain_until && *drain_until > n.drain_until) n.drain_until = *drain_until;
  }
  allocs_.erase(it);
}

const Placement& ClusterState::allocation(JobId job) const {
  auto it = allocs_.find(job);
  if (it == allocs_.end()) throw UnknownJob("job " + std::to_string(job) + " holds no allocation");
  return it->second.placement;
}

std::vector<JobId> ClusterState::allocated_jobs() const {
  std::vector<JobId> ids;
  ids.reserve(allocs_.size());
  for (const auto& [id, a] : allocs_) ids.push_back(id);
  return ids;
}

int ClusterState::idle_nodes(SimTime now) const {
  return static_cast<int>(std::count_if(nodes_.begin(), nodes_.end(), [&](const Node& n) {
    return n.free == n.spec.cores && !(n.drain_until > now);
  }));
}

int ClusterState::interactive_nodes() const {
  return static_cast<int>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.normal_refs > 0; }));
}

int ClusterState::spot_nodes() const {
  return static_cast<int>(
      std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.spot_refs > 0; }));
}

int ClusterState::per_user_spot_nodes(const std::string& user) const {
  auto it = user_spot_.find(user);
  return it == user_spot_.end() ? 0 : static_cast<int>(it->second.size());
}

int ClusterState::footprint(JobId job) const {
  std::set<int> nodes;
  for (const auto& s : allocation(job).slots) nodes.insert(s.node_id);
  return static_cast<int>(nodes.size());
}

int ClusterState::new_spot_nodes(const Placement& p) const {
  std::set<int> fresh;
  for (const auto& s : p.slots) {
    if (nodes_.at(index_of(s.node_id)).spot_refs == 0) fresh.insert(s.node_id);
  }
  return static_cast<int>(fresh.size());
}

int ClusterState::new_user_spot_nodes(const std::string& user, const Placement& p) const {
  auto it = user_spot_.find(user);
  std::set<int> fresh;
  for (const auto& s : p.slots) {
    if (it == user_spot_.end() || !it->second.count(s.node_id)) fresh.insert(s.node_id);
  }
  return static_cast<int>(fresh.size());
}

void ClusterState::verify() const {
  std::vector<long> used(nodes_.size(), 0);
  std::vector<int> normal(nodes_.size(), 0), spot(nodes_.size(), 0);
  std::map<std::string, std::set<int>> user_nodes;
  for (const auto& [job, a] : allocs_) {
    for (const auto& s : a.placement.slots) {
      const auto i = index_of(s.node_id);
      used[i] += s.cores;
      if (a.owner.qos == Qos::Spot) {
        ++spot[i];
        user_nodes[a.owner.user].insert(s.node_id);
      } else {
        ++normal[i];
      }
    }
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const auto& n = nodes_[i];
    if (used[i] + n.free != n.spec.cores) {
      throw SimError("conservation violated on node " + std::to_string(n.spec.node_id));
    }
    if (used[i] > n.spec.cores || n.free < 0) {
      throw SimError("node " + std::to_string(n.spec.node_id) + " over-subscribed");
    }
    if (normal[i] != n.normal_refs || spot[i] != n.spot_refs) {
      throw SimError("allocation refcounts drifted on node " + std::to_string(n.spec.node_id));
    }
  }
  if (user_nodes.size() != user_spot_.size()) throw SimError("per-user spot accounting drifted");
  for (const auto& [user, set] : user_nodes) {
    if (per_user_spot_nodes(user) != static_cast<int>(set.size())) {
      throw SimError("per-user spot accounting drifted for " + user);
    }
  }
}

}  // namespace spotsim
