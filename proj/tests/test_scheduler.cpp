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

#include <algorithm>
#include <random>

#include "spotsim/errors.hpp"
#include "spotsim/scheduler.hpp"

using namespace spotsim;

namespace {

struct Rig {
  Engine engine;
  ClusterState cluster;
  CostModel cost;
  Scheduler sched;

  Rig(int nodes, int cores, bool auto_preempt = false,
      PartitionLayout layout = PartitionLayout::Dual, PreemptMode mode = PreemptMode::Requeue)
      : cluster(build_cluster(ClusterConfig::uniform(nodes, cores, layout, mode))),
        cost(CostModel::calibrated(cores)),
        sched(engine, cluster, SchedulerConfig{auto_preempt, false}, cost) {
    sched.start();
  }
};

JobSpec job(JobType type, int total, int tpn, Qos qos = Qos::Normal, double run = 3600) {
  JobSpec s;
  s.job_type = type;
  s.total_tasks = total;
  s.tasks_per_node = type == JobType::Triple ? tpn : 1;
  s.qos = qos;
  s.user = qos == Qos::Spot ? "spot" : "user";
  s.run_seconds = run;
  return s;
}

SimTime last_dispatch(const Scheduler& s, JobId first, JobId end) {
  SimTime last;
  for (JobId id = first; id < end; ++id) {
    const auto& j = s.job(id);
    EXPECT_FALSE(j.dispatch_times.empty()) << "job " << id;
    for (auto t : j.dispatch_times) last = later_of(last, t);
  }
  return last;
}

}  // namespace

// Idle cluster: one main cycle scans the request (h per job scanned) and
// dispatches its units back to back.
TEST(Scheduler, IdleClusterDispatchCostMatchesOracle) {
  struct Case {
    JobType type;
    int total;
    int nodes, cores;
  } cases[] = {{JobType::Triple, 4096, 64, 64}, {JobType::Array, 4096, 64, 64},
               {JobType::Individual, 608, 19, 32}, {JobType::Triple, 608, 19, 32}};
  for (const auto& c : cases) {
    Rig r(c.nodes, c.cores);
    const auto ids = r.sched.submit(job(c.type, c.total, c.cores), SimTime(10));
    r.engine.run_until(SimTime(500));
    const double h = r.cost.c_job_overhead;
    double expect = 0;
    switch (c.type) {
      case JobType::Triple: expect = h + (c.total / c.cores) * r.cost.c_node_dispatch; break;
      case JobType::Array: expect = h + c.total * r.cost.c_task_dispatch; break;
      case JobType::Individual: expect = c.total * (h + r.cost.c_task_dispatch); break;
    }
    const auto last = last_dispatch(r.sched, ids.front(), ids.back() + 1);
    EXPECT_NEAR(last - SimTime(10 + r.cost.c_recognize), expect, 1e-9) << to_string(c.type);
  }
}

TEST(Scheduler, IndividualRequestExpandsToBatch) {
  Rig r(2, 8);
  const auto ids = r.sched.submit(job(JobType::Individual, 5, 1), SimTime(0));
  ASSERT_EQ(ids.size(), 5u);
  for (auto id : ids) EXPECT_EQ(r.sched.job(id).batch, ids.front());
}

TEST(Scheduler, JobInvisibleBeforeRecognition) {
  Rig r(2, 8);
  r.sched.submit(job(JobType::Triple, 8, 8), SimTime(3));
  r.engine.run_until(SimTime(3.005));
  EXPECT_EQ(r.sched.job(0).state, JobState::Pending);
  r.engine.run_until(SimTime(4));
  EXPECT_EQ(r.sched.job(0).state, JobState::Running);
}

TEST(Scheduler, HeadOfLineBlockingThenBackfill) {
  Rig r(4, 8);
  // Occupies 3 nodes for 100 s.
  r.sched.submit(job(JobType::Triple, 24, 8, Qos::Normal, 100), SimTime(0));
  r.engine.run_until(SimTime(1));
  // Head needs all four nodes; the one-node short job fits behind it.
  r.sched.submit(job(JobType::Triple, 32, 8, Qos::Normal, 50), SimTime(2));
  r.sched.submit(job(JobType::Triple, 8, 8, Qos::Normal, 50), SimTime(3));
  r.engine.run_until(SimTime(29));
  EXPECT_EQ(r.sched.job(1).state, JobState::Pending);
  EXPECT_EQ(r.sched.job(2).state, JobState::Pending);
  r.engine.run_until(SimTime(31));
  EXPECT_EQ(r.sched.job(2).state, JobState::Running);
  EXPECT_EQ(r.sched.job(2).dispatched_by, DispatchPath::Backfill);
  r.engine.run_until(SimTime(200));
  ASSERT_FALSE(r.sched.job(1).dispatch_times.empty());
  EXPECT_GE(r.sched.job(1).dispatch_times.front(), SimTime(100));
}

TEST(Scheduler, BackfillNeverDelaysTheReservation) {
  Rig r(4, 8);
  r.sched.submit(job(JobType::Triple, 24, 8, Qos::Normal, 100), SimTime(0));
  r.engine.run_until(SimTime(1));
  r.sched.submit(job(JobType::Triple, 32, 8, Qos::Normal, 50), SimTime(2));
  // Would still hold its node when the head's reservation starts.
  r.sched.submit(job(JobType::Triple, 8, 8, Qos::Normal, 500), SimTime(3));
  r.engine.run_until(SimTime(140));
  ASSERT_FALSE(r.sched.job(1).dispatch_times.empty());
  EXPECT_LT(r.sched.job(1).dispatch_times.front(), SimTime(110));
  EXPECT_EQ(r.sched.job(2).state, JobState::Pending);
}

TEST(Scheduler, AutoPreemptionRequeuesYoungestSpotFirst) {
  Rig r(4, 8, true);
  for (int i = 0; i < 4; ++i) {
    r.sched.submit(job(JobType::Triple, 8, 8, Qos::Spot, 1e6), SimTime(i));
  }
  r.engine.run_until(SimTime(10));
  ASSERT_EQ(r.cluster.spot_nodes(), 4);
  const auto ids = r.sched.submit(job(JobType::Triple, 16, 8), SimTime(20));
  r.engine.run_until(SimTime(300));
  const auto& normal = r.sched.job(ids.front());
  EXPECT_EQ(normal.state, JobState::Running);
  EXPECT_EQ(normal.victims, 2);
  EXPECT_EQ(r.sched.job(3).requeue_count, 1);
  EXPECT_EQ(r.sched.job(2).requeue_count, 1);
  EXPECT_EQ(r.sched.job(1).requeue_count, 0);
  EXPECT_EQ(r.sched.job(0).requeue_count, 0);
  // Victims wait out the cleanup window before the job can start.
  EXPECT_GE(normal.dispatch_times.front() - SimTime(20), r.cost.c_cleanup);
  r.cluster.verify();
}

TEST(Scheduler, CancelModeTerminatesVictims) {
  Rig r(2, 8, true, PartitionLayout::Dual, PreemptMode::Cancel);
  r.sched.submit(job(JobType::Triple, 16, 8, Qos::Spot, 1e6), SimTime(0));
  r.engine.run_until(SimTime(5));
  r.sched.submit(job(JobType::Triple, 8, 8), SimTime(10));
  r.engine.run_until(SimTime(300));
  EXPECT_EQ(r.sched.job(0).state, JobState::Cancelled);
  EXPECT_EQ(r.sched.job(1).state, JobState::Running);
}

TEST(Scheduler, NoPreemptionWithoutAutoMode) {
  Rig r(2, 8, false);
  r.sched.submit(job(JobType::Triple, 16, 8, Qos::Spot, 1e6), SimTime(0));
  r.engine.run_until(SimTime(5));
  r.sched.submit(job(JobType::Triple, 8, 8), SimTime(10));
  r.engine.run_until(SimTime(300));
  EXPECT_EQ(r.sched.job(0).state, JobState::Running);
  EXPECT_EQ(r.sched.job(1).state, JobState::Pending);
}

TEST(Scheduler, RequeueErrors) {
  Rig r(2, 8);
  r.sched.submit(job(JobType::Triple, 8, 8), SimTime(0));
  r.sched.submit(job(JobType::Triple, 8, 8, Qos::Spot), SimTime(0));
  EXPECT_THROW(r.sched.requeue(42, SimTime(1)), UnknownJob);
  EXPECT_THROW(r.sched.requeue(1, SimTime(1)), NotRunning);
  r.engine.run_until(SimTime(1));
  EXPECT_THROW(r.sched.requeue(0, SimTime(1)), NotSpot);
  r.sched.requeue(1, SimTime(4));
  EXPECT_EQ(r.sched.job(1).state, JobState::Pending);
  EXPECT_EQ(r.sched.job(1).requeue_count, 1);
  EXPECT_TRUE(r.cluster.draining(1, SimTime(2)));
}

TEST(Scheduler, RequeuedJobKeepsItsAge) {
  Rig r(2, 8);
  r.sched.submit(job(JobType::Triple, 8, 8, Qos::Spot), SimTime(0));
  r.engine.run_until(SimTime(1));
  const auto age = r.sched.job(0).recognized_at;
  r.sched.requeue(0, SimTime(2));
  r.engine.run_until(SimTime(100));
  EXPECT_EQ(r.sched.job(0).recognized_at, age);
  EXPECT_EQ(r.sched.job(0).state, JobState::Running);
  EXPECT_EQ(r.sched.job(0).dispatch_times.size(), 2u);
}

TEST(Scheduler, SpotQuotaCapsNewSpotWork) {
  Rig r(4, 8);
  r.cluster.policy(Qos::Spot).max_tres_per_user = 1;
  r.sched.submit(job(JobType::Triple, 8, 8, Qos::Spot), SimTime(0));
  r.sched.submit(job(JobType::Triple, 8, 8, Qos::Spot), SimTime(0));
  r.sched.submit(job(JobType::Triple, 8, 8), SimTime(1));
  r.engine.run_until(SimTime(100));
  EXPECT_EQ(r.cluster.spot_nodes(), 1);
  EXPECT_EQ(r.sched.job(2).state, JobState::Running);
}

TEST(Scheduler, JobCompletesAfterRunTime) {
  Rig r(1, 8);
  r.sched.submit(job(JobType::Triple, 8, 8, Qos::Normal, 10), SimTime(0));
  r.engine.run_until(SimTime(20));
  EXPECT_EQ(r.sched.job(0).state, JobState::Completed);
  EXPECT_EQ(r.cluster.free_cores(), 8);
}

// Exhaustive oracle: the shortest prefix of the young-to-old order that
// covers the need, by trying every prefix length.
TEST(YoungestFirst, MatchesPrefixOracle) {
  std::mt19937_64 rng(11);
  for (int iter = 0; iter < 3000; ++iter) {
    const int n = 1 + static_cast<int>(rng() % 6);
    std::vector<VictimCandidate> c;
    for (int i = 0; i < n; ++i) {
      const int nodes = 1 + static_cast<int>(rng() % 3);
      c.push_back({i, SimTime(static_cast<double>(rng() % 3)), nodes * 8L, nodes});
    }
    const Need need{static_cast<long>(rng() % 60), static_cast<int>(rng() % 8)};

    auto order = c;
    for (std::size_t i = 0; i < order.size(); ++i) {
      for (std::size_t j = i + 1; j < order.size(); ++j) {
        const bool swap = order[j].recognized_at > order[i].recognized_at ||
                          (order[j].recognized_at == order[i].recognized_at && order[j].id > order[i].id);
        if (swap) std::swap(order[i], order[j]);
      }
    }
    std::optional<std::vector<JobId>> expect;
    for (std::size_t k = 0; k <= order.size() && !expect; ++k) {
      long cores = 0;
      int nodes = 0;
      for (std::size_t i = 0; i < k; ++i) {
        cores += order[i].cores;
        nodes += order[i].nodes;
      }
      if (cores >= need.cores && nodes >= need.nodes) {
        std::vector<JobId> ids;
        for (std::size_t i = 0; i < k; ++i) ids.push_back(order[i].id);
        expect = ids;
      }
    }
    if (expect) {
      EXPECT_EQ(select_youngest_first(c, need), *expect);
    } else {
      EXPECT_THROW(select_youngest_first(c, need), InsufficientEvenAfterPreemption);
    }
  }
}
