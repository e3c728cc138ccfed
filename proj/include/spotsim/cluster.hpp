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
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "spotsim/sim_time.hpp"

namespace spotsim {

using JobId = std::int64_t;

enum class Qos : std::uint8_t { Normal, Spot };
enum class PreemptMode : std::uint8_t { Requeue, Cancel, Gang, Suspend };
enum class PartitionLayout : std::uint8_t { Single, Dual };

std::string_view to_string(Qos q);
std::string_view to_string(PreemptMode m);
std::string_view to_string(PartitionLayout p);

struct NodeSpec {
  int node_id = 0;
  int cores = 0;
};

/// MaxTRESPerUser analogue is counted in nodes; nullopt means unlimited.
struct QosPolicy {
  Qos qos = Qos::Normal;
  int priority = 0;
  PreemptMode preempt_mode = PreemptMode::Requeue;
  std::optional<int> max_tres_per_user;
};

struct PartitionConfig {
  std::string name;
  std::vector<int> node_ids;
  std::set<Qos> admitted_qos;
};

struct ClusterConfig {
  std::vector<NodeSpec> nodes;
  int per_user_limit_nodes = 0;
  PartitionLayout layout = PartitionLayout::Dual;
  /// Left empty, partitions are derived from `layout` over all nodes.
  std::vector<PartitionConfig> partitions;
  std::vector<QosPolicy> qos;

  /// Homogeneous cluster with the default normal/spot policies.
  static ClusterConfig uniform(int node_count, int cores_per_node,
                               PartitionLayout layout = PartitionLayout::Dual,
                               PreemptMode spot_mode = PreemptMode::Requeue,
                               int per_user_limit_nodes = 0);
};

struct PlacementRequest {
  int n_units = 1;
  int cores_per_unit = 1;
  /// Whole-node units (triple mode); cores_per_unit is then ignored.
  bool node_exclusive = false;
};

struct Slot {
  int node_id = 0;
  int cores = 0;
  int units = 0;
  bool operator==(const Slot&) const = default;
};

struct Placement {
  std::vector<Slot> slots;
  bool node_exclusive = false;

  int units() const;
  long cores() const;
  bool operator==(const Placement&) const = default;
};

struct Insufficient {
  long deficit_cores = 0;
  int deficit_nodes = 0;
};

using PlaceResult = std::variant<Placement, Insufficient>;

struct JobOwner {
  std::string user;
  Qos qos = Qos::Normal;
};

/// Core-level occupancy of the cluster plus drain windows and spot
/// accounting. A value type: schedulers copy it to evaluate hypotheticals.
class ClusterState {
 public:
  ClusterState() = default;

  int total_nodes() const { return static_cast<int>(nodes_.size()); }
  long total_cores() const;
  long free_cores() const;
  long allocated_cores() const;
  int node_cores(int node_id) const { return nodes_.at(index_of(node_id)).spec.cores; }
  int max_node_cores() const;
  int node_free(int node_id) const { return nodes_.at(index_of(node_id)).free; }
  int per_user_limit_nodes() const { return per_user_limit_nodes_; }
  PartitionLayout layout() const { return layout_; }
  const std::vector<PartitionConfig>& partitions() const { return partitions_; }

  const QosPolicy& policy(Qos q) const;
  QosPolicy& policy(Qos q);

  /// Deterministic: ascending node id, as many units per node as fit.
  PlaceResult try_place(const PlacementRequest& req, SimTime now) const;

  /// Throws DoubleCommit if the job already holds an allocation and
  /// PlacementConflict if any slot no longer fits.
  void commit(JobId job, const Placement& placement, const JobOwner& owner);
  /// Throws UnknownJob. With `drain_until`, every node the job touched stops
  /// accepting allocations until that instant.
  void release(JobId job, std::optional<SimTime> drain_until = std::nullopt);

  bool has_allocation(JobId job) const { return allocs_.count(job) != 0; }
  const Placement& allocation(JobId job) const;
  std::vector<JobId> allocated_jobs() const;

  bool draining(int node_id, SimTime now) const;
  SimTime drain_until(int node_id) const { return nodes_.at(index_of(node_id)).drain_until; }
  std::vector<SimTime> drain_ends_after(SimTime now) const;
  void clear_drains();

  /// Nodes with every core free and no active drain.
  int idle_nodes(SimTime now) const;
  /// Nodes touched by at least one normal-QoS allocation.
  int interactive_nodes() const;
  /// Nodes touched by at least one spot allocation.
  int spot_nodes() const;
  int per_user_spot_nodes(const std::string& user) const;
  /// Distinct nodes of the job's allocation.
  int footprint(JobId job) const;
  /// Nodes the placement would add to the spot footprint (for quota checks).
  int new_spot_nodes(const Placement& p) const;
  int new_user_spot_nodes(const std::string& user, const Placement& p) const;

  /// Recomputes occupancy and spot accounting from allocations; throws
  /// SimError on any mismatch or over-subscription.
  void verify() const;

 private:
  friend ClusterState build_cluster(const ClusterConfig& cfg);

  struct Node {
    NodeSpec spec;
    int free = 0;
    SimTime drain_until;
    int normal_refs = 0;
    int spot_refs = 0;
  };
  struct Allocation {
    Placement placement;
    JobOwner owner;
  };

  std::size_t index_of(int node_id) const;

  std::vector<Node> nodes_;
  std::map<int, std::size_t> index_;
  std::map<JobId, Allocation> allocs_;
  std::map<std::string, std::map<int, int>> user_spot_;
  std::vector<PartitionConfig> partitions_;
  std::vector<QosPolicy> qos_;
  int per_user_limit_nodes_ = 0;
  PartitionLayout layout_ = PartitionLayout::Dual;
};

/// Validates the configuration and returns an all-free cluster. Throws
/// ConfigError on duplicate node ids, empty or dangling partitions, a
/// partition layout violation, or a GANG/SUSPEND preemption mode.
ClusterState build_cluster(const ClusterConfig& cfg);

}  // namespace spotsim
