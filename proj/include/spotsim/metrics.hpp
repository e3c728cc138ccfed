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
#include <string>
#include <vector>

#include "spotsim/engine.hpp"
#include "spotsim/simulation.hpp"

namespace spotsim {

/// Where the scheduling-time clock starts.
enum class Origin : std::uint8_t {
  /// The scheduler recognized the request.
  Recognized,
  /// The user issued the first preemption command (manual approach).
  PreemptStart,
};

struct SchedRecord {
  std::int64_t job_id = 0;
  int n_tasks = 0;
  double recognized_at = 0.0;
  double origin_at = 0.0;
  double first_dispatch_at = 0.0;
  double last_dispatch_at = 0.0;
  double scheduling_time = 0.0;
  double per_task_time = 0.0;
  std::string dispatched_by;
  bool preemption_on_path = false;
  int victims_count = 0;

  bool operator==(const SchedRecord&) const = default;
};

/// Computed from the event log alone. Throws UnknownJob when the batch was
/// never submitted and NotFullyDispatched when some unit never started.
SchedRecord measure(const EventLog& log, std::int64_t batch, Origin origin);

/// last dispatch - origin.
double scheduling_time(const EventLog& log, std::int64_t batch, Origin origin);

struct RunSummary {
  std::string scenario_id;
  std::string approach;
  std::string mode;
  std::string partitions;
  std::string job_type;
  std::string size;
  std::uint64_t seed = 0;
  std::vector<SchedRecord> records;
};

Origin origin_for(Approach a);

/// One record per normal-QoS submission.
RunSummary summarize(const RunResult& r);

/// Header plus one row per record; times with 6 decimals.
std::string emit_csv(const RunSummary& s);
/// Inverse of emit_csv for the columns it writes. Throws ParseError.
RunSummary parse_csv(const std::string& text);

std::string emit_event_log(const EventLog& log);

struct SkippedCell;
std::string emit_summary(const std::vector<RunSummary>& runs,
                         const std::vector<SkippedCell>& skipped);

std::string format_seconds(double v);

}  // namespace spotsim
