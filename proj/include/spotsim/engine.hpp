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
#include <functional>
#include <queue>
#include <string>
#include <string_view>
#include <vector>

#include "spotsim/sim_time.hpp"

namespace spotsim {

enum class EventKind : std::uint8_t {
  Submit,
  MainCycle,
  BackfillCycle,
  AgentTick,
  TaskDispatched,
  JobCompleted,
  PreemptionDone,
  QuotaUpdated,
};

/// Same-instant tie-break: Submit=0, MainCycle=1, BackfillCycle=2,
/// AgentTick=3, everything else 4.
constexpr int kind_priority(EventKind k) {
  switch (k) {
    case EventKind::Submit: return 0;
    case EventKind::MainCycle: return 1;
    case EventKind::BackfillCycle: return 2;
    case EventKind::AgentTick: return 3;
    default: return 4;
  }
}

std::string_view to_string(EventKind k);

using EventId = std::uint64_t;

struct Payload {
  std::int64_t job = -1;
  std::int64_t batch = -1;
  std::int32_t unit = -1;
  std::int64_t count = 0;
  bool periodic = false;
};

struct Event {
  SimTime fire_at;
  EventKind kind = EventKind::Submit;
  Payload payload;
  EventId seq = 0;
};

/// What a handler reports about the state change it made.
struct LogFacts {
  std::int64_t job = -1;
  std::int64_t batch = -1;
  std::int32_t unit = -1;
  std::int64_t count = 0;
  double value = 0.0;
  std::string detail;
};

struct LogEntry {
  EventId seq = 0;
  SimTime time;
  EventKind kind = EventKind::Submit;
  std::int64_t job = -1;
  std::int64_t batch = -1;
  std::int32_t unit = -1;
  std::int64_t count = 0;
  double value = 0.0;
  std::string detail;

  bool operator==(const LogEntry&) const = default;
};

using EventLog = std::vector<LogEntry>;

/// Single-threaded discrete-event loop. Events are ordered by
/// (fire_at, kind priority, insertion sequence); every processed event is
/// appended to the log in processing order.
class Engine {
 public:
  using Handler = std::function<LogFacts(const Event&)>;
  using Observer = std::function<void(const LogEntry&)>;

  Engine() = default;
  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;

  /// Throws SchedulingInPast if t is before the current clock.
  EventId schedule(SimTime t, EventKind kind, Payload payload = {});

  void on(EventKind kind, Handler handler);
  void observe(Observer observer) { observers_.push_back(std::move(observer)); }

  /// Processes every event with fire_at <= t_end unless stop() is called
  /// from a handler. The clock ends at t_end when the queue drains first.
  const EventLog& run_until(SimTime t_end);

  void stop() { stop_requested_ = true; }
  bool stopped() const { return stop_requested_; }

  SimTime now() const { return clock_; }
  std::size_t pending() const { return queue_.size(); }
  EventId next_id() const { return next_seq_; }
  const EventLog& log() const { return log_; }

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      if (a.fire_at != b.fire_at) return a.fire_at > b.fire_at;
      const int pa = kind_priority(a.kind), pb = kind_priority(b.kind);
      if (pa != pb) return pa > pb;
      return a.seq > b.seq;
    }
  };

  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::vector<Handler> handlers_ = std::vector<Handler>(8);
  std::vector<Observer> observers_;
  EventLog log_;
  SimTime clock_;
  EventId next_seq_ = 0;
  bool stop_requested_ = false;
};

}  // namespace spotsim
