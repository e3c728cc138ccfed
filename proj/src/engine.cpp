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

#include "spotsim/engine.hpp"

#include "spotsim/errors.hpp"

namespace spotsim {

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::Submit: return "Submit";
    case EventKind::MainCycle: return "MainCycle";
    case EventKind::BackfillCycle: return "BackfillCycle";
    case EventKind::AgentTick: return "AgentTick";
    case EventKind::TaskDispatched: return "TaskDispatched";
    case EventKind::JobCompleted: return "JobCompleted";
    case EventKind::PreemptionDone: return "PreemptionDone";
    case EventKind::QuotaUpdated: return "QuotaUpdated";
  }
  return "?";
}

EventId Engine::schedule(SimTime t, EventKind kind, Payload payload) {
  if (t < clock_) {
    throw SchedulingInPast("event " + std::string(to_string(kind)) + " at " +
                           std::to_string(t.seconds) + " is before clock " +
                           std::to_string(clock_.seconds));
  }
  const EventId id = next_seq_++;
  queue_.push(Event{t, kind, payload, id});
  return id;
}

void Engine::on(EventKind kind, Handler handler) {
  handlers_[static_cast<std::size_t>(kind)] = std::move(handler);
}

const EventLog& Engine::run_until(SimTime t_end) {
  stop_requested_ = false;
  while (!queue_.empty() && !stop_requested_) {
    if (queue_.top().fire_at > t_end) break;
    Event ev = queue_.top();
    queue_.pop();
    clock_ = ev.fire_at;

    LogFacts facts;
    if (auto& h = handlers_[static_cast<std::size_t>(ev.kind)]) {
      facts = h(ev);
    } else {
      facts.job = ev.payload.job;
      facts.batch = ev.payload.batch;
      facts.unit = ev.payload.unit;
      facts.count = ev.payload.count;
    }
    log_.push_back(LogEntry{ev.seq, ev.fire_at, ev.kind, facts.job, facts.batch, facts.unit,
                            facts.count, facts.value, std::move(facts.detail)});
    for (auto& obs : observers_) obs(log_.back());
  }
  if (!stop_requested_ && clock_ < t_end) clock_ = t_end;
  return log_;
}

}  // namespace spotsim
