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

#include <gtest/gtest.h>

#include <random>

#include "spotsim/cluster.hpp"
#include "spotsim/errors.hpp"

using namespace spotsim;

namespace {

ClusterState small(int nodes = 4, int cores = 8) {
  return build_cluster(ClusterConfig::uniform(nodes, cores));
}

Placement place(const ClusterState& c, PlacementRequest r, SimTime t = {}) {
  auto res = c.try_place(r, t);
  EXPECT_TRUE(std::holds_alternative<Placement>(res));
  return std::get<Placement>(res);
}

}  // namespace

TEST(Cluster, CorePlacementFillsLowestNodesFirst) {
  auto c = small();
  const auto p = place(c, {10, 1, false});
  ASSERT_EQ(p.slots.size(), 2u);
  EXPECT_EQ(p.slots[0], (Slot{0, 8, 8}));
  EXPECT_EQ(p.slots[1], (Slot{1, 2, 2}));
  EXPECT_EQ(p.units(), 10);
  EXPECT_EQ(p.cores(), 10);
}

TEST(Cluster, ExclusivePlacementNeedsIdleNodes) {
  auto c = small();
  c.commit(1, place(c, {1, 1, false}), {"u", Qos::Normal});
  const auto p = place(c, {3, 8, true});
  EXPECT_EQ(p.slots.front().node_id, 1);
  const auto res = c.try_place({4, 8, true}, {});
  ASSERT_TRUE(std::holds_alternative<Insufficient>(res));
  EXPECT_EQ(std::get<Insufficient>(res).deficit_nodes, 1);
}

TEST(Cluster, InsufficientReportsCoreDeficit) {
  auto c = small(2, 4);
  const auto res = c.try_place({11, 1, false}, {});
  ASSERT_TRUE(std::holds_alternative<Insufficient>(res));
  EXPECT_EQ(std::get<Insufficient>(res).deficit_cores, 3);
}

TEST(Cluster, CommitAndReleaseConserveCores) {
  auto c = small();
  c.commit(7, place(c, {12, 1, false}), {"u", Qos::Normal});
  EXPECT_EQ(c.free_cores() + c.allocated_cores(), c.total_cores());
  EXPECT_EQ(c.allocated_cores(), 12);
  EXPECT_THROW(c.commit(7, place(c, {1, 1, false}), {"u", Qos::Normal}), DoubleCommit);
  c.release(7);
  EXPECT_EQ(c.free_cores(), c.total_cores());
  EXPECT_THROW(c.release(7), UnknownJob);
  c.verify();
}

TEST(Cluster, ConflictingCommitRejected) {
  auto c = small(1, 8);
  const auto p = place(c, {6, 1, false});
  c.commit(1, p, {"u", Qos::Normal});
  EXPECT_THROW(c.commit(2, p, {"u", Qos::Normal}), PlacementConflict);
  c.verify();
}

TEST(Cluster, DrainingNodeAcceptsNothingUntilDrainEnds) {
  auto c = small(2, 8);
  c.commit(1, place(c, {1, 8, true}), {"s", Qos::Spot});
  c.release(1, SimTime(30));
  EXPECT_TRUE(c.draining(0, SimTime(10)));
  EXPECT_FALSE(c.draining(0, SimTime(30)));
  EXPECT_EQ(c.idle_nodes(SimTime(10)), 1);
  const auto p = place(c, {1, 8, true}, SimTime(10));
  EXPECT_EQ(p.slots.front().node_id, 1);
  EXPECT_TRUE(std::holds_alternative<Insufficient>(c.try_place({2, 8, true}, SimTime(29.9))));
  EXPECT_TRUE(std::holds_alternative<Placement>(c.try_place({2, 8, true}, SimTime(30))));
}

TEST(Cluster, SpotAccountingTracksAllocations) {
  auto c = small(4, 8);
  c.commit(1, place(c, {2, 8, true}), {"a", Qos::Spot});
  c.commit(2, place(c, {4, 1, false}), {"n", Qos::Normal});
  EXPECT_EQ(c.spot_nodes(), 2);
  EXPECT_EQ(c.per_user_spot_nodes("a"), 2);
  EXPECT_EQ(c.per_user_spot_nodes("b"), 0);
  EXPECT_EQ(c.interactive_nodes(), 1);
  EXPECT_EQ(c.footprint(1), 2);
  c.release(1);
  EXPECT_EQ(c.per_user_spot_nodes("a"), 0);
  c.verify();
}

TEST(Cluster, RandomCommitReleaseKeepsInvariants) {
  auto c = small(6, 16);
  std::mt19937_64 rng(7);
  std::vector<JobId> live;
  for (JobId id = 0; id < 500; ++id) {
    if (!live.empty() && rng() % 3 == 0) {
      const auto k = rng() % live.size();
      c.release(live[k], rng() % 2 ? std::optional<SimTime>(SimTime(0.5)) : std::nullopt);
      live.erase(live.begin() + static_cast<long>(k));
    } else {
      const bool excl = rng() % 2;
      PlacementRequest r{1 + static_cast<int>(rng() % 3), excl ? 16 : 1 + static_cast<int>(rng() % 4),
                         excl};
      auto res = c.try_place(r, SimTime(1));
      if (auto* p = std::get_if<Placement>(&res)) {
        c.commit(id, *p, {excl ? "s" + std::to_string(rng() % 2) : "n", excl ? Qos::Spot : Qos::Normal});
        live.push_back(id);
      }
    }
    ASSERT_NO_THROW(c.verify());
    ASSERT_EQ(c.free_cores() + c.allocated_cores(), c.total_cores());
  }
}

TEST(ClusterConfig, RejectsGangAndSuspend) {
  for (auto m : {PreemptMode::Gang, PreemptMode::Suspend}) {
    try {
      build_cluster(ClusterConfig::uniform(2, 4, PartitionLayout::Dual, m));
      FAIL() << "accepted " << to_string(m);
    } catch (const ConfigError& e) {
      EXPECT_EQ(e.field(), "qos.spot.preempt_mode");
      EXPECT_NE(std::string(e.what()).find(to_string(m)), std::string::npos) << e.what();
    }
  }
}

TEST(ClusterConfig, RejectsMalformedLayouts) {
  auto cfg = ClusterConfig::uniform(2, 4);
  cfg.nodes.push_back({0, 4});
  EXPECT_THROW(build_cluster(cfg), ConfigError);

  cfg = ClusterConfig::uniform(2, 4);
  cfg.nodes[1].cores = 0;
  EXPECT_THROW(build_cluster(cfg), ConfigError);

  cfg = ClusterConfig::uniform(2, 4, PartitionLayout::Dual);
  auto built = build_cluster(cfg);
  ASSERT_EQ(built.partitions().size(), 2u);
  cfg.partitions = built.partitions();
  cfg.partitions[1].admitted_qos = {Qos::Normal, Qos::Spot};
  EXPECT_THROW(build_cluster(cfg), ConfigError);

  cfg = ClusterConfig::uniform(2, 4, PartitionLayout::Single);
  EXPECT_EQ(build_cluster(cfg).partitions().size(), 1u);

  cfg = ClusterConfig::uniform(2, 4);
  cfg.per_user_limit_nodes = 3;
  EXPECT_THROW(build_cluster(cfg), ConfigError);
}

TEST(ClusterConfig, OnlySpotIsPreemptable) {
  auto cfg = ClusterConfig::uniform(2, 4);
  for (auto& q : cfg.qos) {
    if (q.qos == Qos::Spot) q.priority = 1000;
  }
  EXPECT_THROW(build_cluster(cfg), ConfigError);
}
