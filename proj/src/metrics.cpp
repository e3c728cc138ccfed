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

#include "spotsim/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <sstream>

#include "spotsim/errors.hpp"
#include "spotsim/workload.hpp"

namespace spotsim {

std::string format_seconds(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v == 0.0 ? 0.0 : v);
  return buf;
}

SchedRecord measure(const EventLog& log, std::int64_t batch, Origin origin) {
  const LogEntry* submit = nullptr;
  for (const auto& e : log) {
    if (e.kind == EventKind::Submit && e.batch == batch) {
      submit = &e;
      break;
    }
  }
  if (!submit) throw UnknownJob("no submission for batch " + std::to_string(batch));

  SchedRecord r;
  r.job_id = batch;
  r.n_tasks = static_cast<int>(submit->count);
  r.recognized_at = submit->value;
  r.origin_at = origin == Origin::Recognized ? submit->value : submit->time.seconds;

  std::set<std::pair<std::int64_t, std::int32_t>> units;
  std::set<std::string> paths;
  bool any = false;
  for (const auto& e : log) {
    if (e.batch != batch) continue;
    if (e.kind == EventKind::TaskDispatched && e.detail != "stale") {
      units.insert({e.job, e.unit});
      paths.insert(e.detail);
      if (!any) r.first_dispatch_at = e.time.seconds;
      r.last_dispatch_at = std::max(r.last_dispatch_at, e.time.seconds);
      any = true;
    } else if (e.kind == EventKind::PreemptionDone) {
      ++r.victims_count;
    }
  }
  if (static_cast<long>(units.size()) < submit->unit) {
    throw NotFullyDispatched("batch " + std::to_string(batch) + " dispatched " +
                             std::to_string(units.size()) + " of " +
                             std::to_string(submit->unit) + " units");
  }
  r.scheduling_time = r.last_dispatch_at - r.origin_at;
  r.per_task_time = r.n_tasks > 0 ? r.scheduling_time / r.n_tasks : 0.0;
  r.dispatched_by = paths.size() == 1 ? *paths.begin() : "mixed";
  r.preemption_on_path = r.victims_count > 0;
  return r;
}

double scheduling_time(const EventLog& log, std::int64_t batch, Origin origin) {
  return measure(log, batch, origin).scheduling_time;
}

Origin origin_for(Approach a) {
  return a == Approach::Manual ? Origin::PreemptStart : Origin::Recognized;
}

RunSummary summarize(const RunResult& r) {
  const Scenario& s = r.scenario;
  RunSummary out;
  out.scenario_id = s.id();
  out.approach = std::string(to_string(s.approach));
  out.mode = s.approach == Approach::Baseline ? "none" : std::string(to_string(s.mode));
  std::transform(out.mode.begin(), out.mode.end(), out.mode.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  out.partitions = std::string(to_string(s.partitions));
  out.job_type = std::string(to_string(s.job_type));
  out.size = std::string(to_string(s.size));
  out.seed = s.seed;
  for (auto batch : r.measured_batches) {
    out.records.push_back(measure(r.log, batch, origin_for(s.approach)));
  }
  return out;
}

namespace {

constexpr const char* kHeader =
    "scenario_id,approach,mode,partitions,job_type,size,seed,job_id,n_tasks,scheduling_time_s,"
    "per_task_s,dispatched_by,victims";

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

std::string emit_csv(const RunSummary& s) {
  std::ostringstream out;
  out << kHeader << '\n';
  for (const auto& r : s.records) {
    out << s.scenario_id << ',' << s.approach << ',' << s.mode << ',' << s.partitions << ','
        << s.job_type << ',' << s.size << ',' << s.seed << ',' << r.job_id << ',' << r.n_tasks
        << ',' << format_seconds(r.scheduling_time) << ',' << format_seconds(r.per_task_time)
        << ',' << r.dispatched_by << ',' << r.victims_count << '\n';
  }
  return out.str();
}

RunSummary parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  RunSummary s;
  if (!std::getline(in, line) || line != kHeader) throw ParseError(1, "unexpected CSV header");
  ++lineno;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 13) throw ParseError(lineno, "expected 13 fields");
    try {
      s.scenario_id = f[0];
      s.approach = f[1];
      s.mode = f[2];
      s.partitions = f[3];
      s.job_type = f[4];
      s.size = f[5];
      s.seed = std::stoull(f[6]);
      SchedRecord r;
      r.job_id = std::stoll(f[7]);
      r.n_tasks = std::stoi(f[8]);
      r.scheduling_time = std::stod(f[9]);
      r.per_task_time = std::stod(f[10]);
      r.dispatched_by = f[11];
      r.victims_count = std::stoi(f[12]);
      r.preemption_on_path = r.victims_count > 0;
      s.records.push_back(r);
    } catch (const std::logic_error&) {
      throw ParseError(lineno, "malformed number");
    }
  }
  return s;
}

std::string emit_event_log(const EventLog& log) {
  std::ostringstream out;
  out << "seq,time_s,kind,job,batch,unit,count,value,detail\n";
  for (const auto& e : log) {
    out << e.seq << ',' << format_seconds(e.time.seconds) << ',' << to_string(e.kind) << ','
        << e.job << ',' << e.batch << ',' << e.unit << ',' << e.count << ','
        << format_seconds(e.value) << ',' << e.detail << '\n';
  }
  return out.str();
}

std::string emit_summary(const std::vector<RunSummary>& runs,
                         const std::vector<SkippedCell>& skipped) {
  std::ostringstream out;
  for (const auto& s : runs) {
    out << '[' << s.scenario_id << "]\n";
    for (std::size_t i = 0; i < s.records.size(); ++i) {
      const auto& r = s.records[i];
      const std::string p = s.records.size() > 1 ? "job" + std::to_string(i + 1) + "." : "";
      out << p << "n_tasks = " << r.n_tasks << '\n'
          << p << "scheduling_time_s = " << format_seconds(r.scheduling_time) << '\n'
          << p << "per_task_s = " << format_seconds(r.per_task_time) << '\n'
          << p << "dispatched_by = " << r.dispatched_by << '\n'
          << p << "victims = " << r.victims_count << '\n';
    }
    out << '\n';
  }
  for (const auto& k : skipped) {
    out << '[' << k.row << "]\nskipped = " << k.reason << "\n\n";
  }
  return out.str();
}

}  // namespace spotsim
