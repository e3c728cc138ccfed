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

#include <set>

#include "spotsim/errors.hpp"
#include "spotsim/workload.hpp"

using namespace spotsim;

TEST(Workload, SizeMapping) {
  EXPECT_EQ(size_tasks(SizeClass::Small), 608);
  EXPECT_EQ(size_tasks(SizeClass::Medium), 2048);
  EXPECT_EQ(size_tasks(SizeClass::Large), 4096);
}

TEST(Workload, MakeJobShapes) {
  auto tri = make_job(JobType::Triple, 4096, 64, Qos::Normal, "u", SimTime(1));
  ASSERT_EQ(tri.size(), 1u);
  EXPECT_EQ(dispatch_units(tri[0]), 64);
  auto arr = make_job(JobType::Array, 608, 32, Qos::Normal, "u", SimTime(1));
  ASSERT_EQ(arr.size(), 1u);
  EXPECT_EQ(dispatch_units(arr[0]), 608);
  auto ind = make_job(JobType::Individual, 608, 32, Qos::Normal, "u", SimTime(1));
  EXPECT_EQ(ind.size(), 608u);
  EXPECT_EQ(ind[0].total_tasks, 1);
  EXPECT_THROW(make_job(JobType::Triple, 0, 64, Qos::Normal, "u", SimTime(0)), ValidationError);
}

TEST(Workload, SpotFillStaggersAndCoversQuota) {
  auto fill = fill_with_spot(128, 64, 64, 16, SimTime(0));
  ASSERT_EQ(fill.size(), 4u);
  int nodes = 0;
  for (std::size_t i = 0; i < fill.size(); ++i) {
    EXPECT_EQ(fill[i].qos, Qos::Spot);
    EXPECT_EQ(fill[i].submit_at, SimTime(static_cast<double>(i)));
    nodes += dispatch_units(fill[i]);
  }
  EXPECT_EQ(nodes, 64);
  EXPECT_EQ(fill_with_spot(19, 32, 19, 19, SimTime(0)).size(), 1u);
  EXPECT_THROW(fill_with_spot(4, 8, 5, 1, SimTime(0)), ValidationError);
}

TEST(Workload, Table1MatrixShape) {
  const auto t = table1_matrix();
  EXPECT_EQ(t.scenarios.size(), 51u);
  ASSERT_EQ(t.skipped.size(), 1u);
  EXPECT_NE(t.skipped[0].row.find("lua"), std::string::npos);
  std::set<std::string> ids;
  int cron = 0, manual = 0, autos = 0, base = 0;
  for (const auto& s : t.scenarios) {
    ids.insert(s.id());
    EXPECT_NO_THROW(s.validate()) << s.id();
    switch (s.approach) {
      case Approach::Baseline: ++base; break;
      case Approach::Auto: ++autos; break;
      case Approach::Manual: ++manual; break;
      case Approach::Cron: ++cron; break;
    }
    EXPECT_EQ(s.scheduler_config().auto_preempt, s.approach == Approach::Auto);
    EXPECT_EQ(s.agent.has_value(), s.approach == Approach::Cron);
  }
  EXPECT_EQ(ids.size(), t.scenarios.size());
  EXPECT_EQ(base, 9);
  EXPECT_EQ(autos, 36);
  EXPECT_EQ(manual, 3);
  EXPECT_EQ(cron, 3);
  EXPECT_TRUE(ids.count("cron-requeue-dual-triple-large-s1"));
  EXPECT_TRUE(ids.count("baseline-dual-triple-small-s1"));
}

TEST(Workload, MatrixIsReproducible) {
  const auto a = table1_matrix(3), b = table1_matrix(3);
  ASSERT_EQ(a.scenarios.size(), b.scenarios.size());
  for (std::size_t i = 0; i < a.scenarios.size(); ++i) EXPECT_EQ(a.scenarios[i], b.scenarios[i]);
}

TEST(Workload, ScenarioValidation) {
  auto s = make_scenario(Approach::Cron, PreemptMode::Requeue, PartitionLayout::Dual,
                         JobType::Triple, SizeClass::Large);
  s.agent.reset();
  EXPECT_THROW(s.validate(), ConfigError);
  s = make_scenario(Approach::Auto, PreemptMode::Requeue, PartitionLayout::Dual, JobType::Triple,
                    SizeClass::Large);
  s.agent = AgentConfig{};
  EXPECT_THROW(s.validate(), ConfigError);
  s = make_scenario(Approach::Baseline, PreemptMode::Requeue, PartitionLayout::Dual,
                    JobType::Triple, SizeClass::Large);
  s.nodes = 8;
  EXPECT_THROW(s.validate(), ConfigError);
  s = make_scenario(Approach::Auto, PreemptMode::Gang, PartitionLayout::Dual, JobType::Triple,
                    SizeClass::Small);
  EXPECT_THROW(s.validate(), ConfigError);
}

TEST(Workload, RandomStreamIsDeterministic) {
  EXPECT_EQ(random_stream(5), random_stream(5));
  EXPECT_NE(random_stream(5), random_stream(6));
  const auto s = random_stream(9);
  for (std::size_t i = 1; i < s.size(); ++i) EXPECT_LE(s[i - 1].submit_at, s[i].submit_at);
}
