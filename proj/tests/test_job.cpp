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

#include "spotsim/cost_model.hpp"
#include "spotsim/errors.hpp"
#include "spotsim/job.hpp"

using namespace spotsim;

TEST(Job, ConsolidationIsMinimalCeiling) {
  for (int total = 1; total <= 300; ++total) {
    for (int tpn : {1, 7, 32, 64}) {
      JobSpec s;
      s.job_type = JobType::Triple;
      s.total_tasks = total;
      s.tasks_per_node = tpn;
      const int units = dispatch_units(s);
      ASSERT_GE(units * tpn, total);
      ASSERT_LT((units - 1) * tpn, total);
    }
  }
}

TEST(Job, UnitsPerType) {
  JobSpec s;
  s.total_tasks = 4096;
  s.tasks_per_node = 64;
  s.job_type = JobType::Triple;
  EXPECT_EQ(dispatch_units(s), 64);
  s.job_type = JobType::Array;
  EXPECT_EQ(dispatch_units(s), 4096);
  s.job_type = JobType::Individual;
  s.total_tasks = 1;
  EXPECT_EQ(dispatch_units(s), 1);
  s.job_type = JobType::Triple;
  s.total_tasks = 608;
  s.tasks_per_node = 32;
  EXPECT_EQ(dispatch_units(s), 19);
  EXPECT_TRUE(placement_request(s).node_exclusive);
}

TEST(Job, ValidationRejectsBadSpecs) {
  JobSpec s;
  s.job_type = JobType::Triple;
  s.total_tasks = 64;
  s.tasks_per_node = 65;
  EXPECT_THROW(validate(s, 64), ValidationError);
  s.tasks_per_node = 64;
  EXPECT_NO_THROW(validate(s, 64));
  s.total_tasks = 0;
  EXPECT_THROW(validate(s, 64), ValidationError);
}

TEST(Job, YoungerOrdersByRecognitionThenId) {
  VictimCandidate a{1, SimTime(5), 8, 1}, b{2, SimTime(6), 8, 1}, c{3, SimTime(6), 8, 1};
  EXPECT_TRUE(younger(b, a));
  EXPECT_FALSE(younger(a, b));
  EXPECT_TRUE(younger(c, b));
}

TEST(CostModel, DefaultsAndValidation) {
  CostModel c;
  EXPECT_NO_THROW(c.validate());
  EXPECT_DOUBLE_EQ(CostModel::calibrated(64).c_node_dispatch, 0.007);
  EXPECT_DOUBLE_EQ(CostModel::calibrated(32).c_node_dispatch, 0.0035);
  c.t_backfill = c.t_main;
  EXPECT_THROW(c.validate(), ConfigError);
  c = CostModel{};
  c.c_cleanup = -1;
  try {
    c.validate();
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.field(), "cost_model.c_cleanup");
  }
}
