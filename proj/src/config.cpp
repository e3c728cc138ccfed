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

#include "spotsim/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "spotsim/errors.hpp"

namespace spotsim {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <typename E, std::size_t N>
E parse_enum(const std::string& field, const std::string& value, const E (&options)[N]) {
  for (E e : options) {
    if (lower(std::string(to_string(e))) == lower(value)) return e;
  }
  throw ConfigError(field, "unknown value '" + value + "'");
}

double parse_double(const std::string& field, const std::string& v) {
  double out = 0.0;
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || p != end) throw ConfigError(field, "expected a number, got '" + v + "'");
  return out;
}

long long parse_int(const std::string& field, const std::string& v) {
  long long out = 0;
  const auto* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc{} || p != end) {
    throw ConfigError(field, "expected an integer, got '" + v + "'");
  }
  return out;
}

int parse_int32(const std::string& field, const std::string& v) {
  const long long x = parse_int(field, v);
  if (x < INT32_MIN || x > INT32_MAX) throw ConfigError(field, "out of range");
  return static_cast<int>(x);
}

bool parse_bool(const std::string& field, const std::string& v) {
  const auto l = lower(v);
  if (l == "true" || l == "yes" || l == "1") return true;
  if (l == "false" || l == "no" || l == "0") return false;
  throw ConfigError(field, "expected true or false, got '" + v + "'");
}

constexpr Approach kApproaches[] = {Approach::Baseline, Approach::Auto, Approach::Manual,
                                    Approach::Cron};
constexpr PreemptMode kModes[] = {PreemptMode::Requeue, PreemptMode::Cancel, PreemptMode::Gang,
                                  PreemptMode::Suspend};
constexpr PartitionLayout kLayouts[] = {PartitionLayout::Single, PartitionLayout::Dual};
constexpr JobType kTypes[] = {JobType::Individual, JobType::Array, JobType::Triple};
constexpr SizeClass kSizes[] = {SizeClass::Small, SizeClass::Medium, SizeClass::Large};
constexpr Qos kQos[] = {Qos::Normal, Qos::Spot};

JobSpec parse_timeline_job(const std::string& v, int line) {
  std::vector<std::string> f;
  std::stringstream in(v);
  std::string part;
  while (std::getline(in, part, ',')) f.push_back(trim(part));
  if (f.size() != 8) {
    throw ParseError(line, "timeline job needs 8 fields: t, user, qos, type, total, "
                           "tasks_per_node, cores_per_task, run_seconds");
  }
  JobSpec j;
  j.submit_at = SimTime(parse_double("timeline.job.t", f[0]));
  j.user = f[1];
  j.qos = parse_enum("timeline.job.qos", f[2], kQos);
  j.job_type = parse_enum("timeline.job.type", f[3], kTypes);
  j.total_tasks = parse_int32("timeline.job.total", f[4]);
  j.tasks_per_node = parse_int32("timeline.job.tasks_per_node", f[5]);
  j.cores_per_task = parse_int32("timeline.job.cores_per_task", f[6]);
  j.run_seconds = parse_double("timeline.job.run_seconds", f[7]);
  if (j.user.empty() || j.user.find_first_of(",\n") != std::string::npos) {
    throw ConfigError("timeline.job.user", "must be a non-empty name without commas");
  }
  return j;
}

struct Entry {
  std::string value;
  int line = 0;
};

}  // namespace

Scenario parse_config(const std::string& text) {
  // section -> key -> entry; timeline jobs kept in order.
  std::map<std::string, std::map<std::string, Entry>> kv;
  std::vector<std::pair<std::string, int>> jobs;
  bool has_timeline = false;

  static const std::map<std::string, std::vector<std::string>> kKeys = {
      {"cluster", {"nodes", "cores_per_node", "per_user_limit_nodes", "partitions", "mode"}},
      {"scheduler", {"approach", "per_user_quota"}},
      {"cost_model",
       {"c_recognize", "c_job_overhead", "c_task_dispatch", "c_node_dispatch", "c_preempt_signal",
        "c_cleanup", "c_requeue_release", "t_main", "t_backfill"}},
      {"agent", {"interval", "reserve_nodes"}},
      {"workload",
       {"job_type", "size", "seed", "arrival", "second_arrival", "spot_job_nodes", "run_seconds",
        "spot_run_seconds"}},
      {"timeline", {"job"}},
  };

  std::istringstream in(text);
  std::string raw;
  std::string section;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(raw);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ParseError(line, "unterminated section header");
      section = lower(trim(std::string_view(s).substr(1, s.size() - 2)));
      if (!kKeys.count(section)) throw ParseError(line, "unknown section [" + section + "]");
      if (kv.count(section) || (section == "timeline" && has_timeline)) {
        throw ParseError(line, "duplicate section [" + section + "]");
      }
      kv[section];
      if (section == "timeline") has_timeline = true;
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ParseError(line, "expected key = value");
    if (section.empty()) throw ParseError(line, "key outside of any section");
    const std::string key = lower(trim(std::string_view(s).substr(0, eq)));
    const std::string value = trim(std::string_view(s).substr(eq + 1));
    const auto& allowed = kKeys.at(section);
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(section + "." + key, "unknown key (line " + std::to_string(line) + ")");
    }
    if (section == "timeline") {
      jobs.emplace_back(value, line);
      continue;
    }
    if (kv[section].count(key)) {
      throw ParseError(line, "duplicate key " + section + "." + key);
    }
    kv[section][key] = Entry{value, line};
  }

  auto get = [&](const std::string& sec, const std::string& key) -> const std::string* {
    auto s = kv.find(sec);
    if (s == kv.end()) return nullptr;
    auto k = s->second.find(key);
    return k == s->second.end() ? nullptr : &k->second.value;
  };

  Scenario sc;
  sc.per_user_limit_nodes = 0;
  if (auto v = get("cluster", "nodes")) sc.nodes = parse_int32("cluster.nodes", *v);
  if (auto v = get("cluster", "cores_per_node")) {
    sc.cores_per_node = parse_int32("cluster.cores_per_node", *v);
  }
  if (auto v = get("cluster", "per_user_limit_nodes")) {
    sc.per_user_limit_nodes = parse_int32("cluster.per_user_limit_nodes", *v);
  }
  if (auto v = get("cluster", "partitions")) {
    sc.partitions = parse_enum("cluster.partitions", *v, kLayouts);
  }
  if (auto v = get("cluster", "mode")) sc.mode = parse_enum("cluster.mode", *v, kModes);

  if (auto v = get("scheduler", "approach")) {
    sc.approach = parse_enum("scheduler.approach", *v, kApproaches);
  }
  if (auto v = get("scheduler", "per_user_quota")) {
    sc.per_user_quota = parse_bool("scheduler.per_user_quota", *v);
  }

  sc.cost = CostModel::calibrated(sc.cores_per_node > 0 ? sc.cores_per_node : 64);
  const std::pair<const char*, double CostModel::*> cost_fields[] = {
      {"c_recognize", &CostModel::c_recognize},
      {"c_job_overhead", &CostModel::c_job_overhead},
      {"c_task_dispatch", &CostModel::c_task_dispatch},
      {"c_node_dispatch", &CostModel::c_node_dispatch},
      {"c_preempt_signal", &CostModel::c_preempt_signal},
      {"c_cleanup", &CostModel::c_cleanup},
      {"c_requeue_release", &CostModel::c_requeue_release},
      {"t_main", &CostModel::t_main},
      {"t_backfill", &CostModel::t_backfill},
  };
  for (const auto& [name, member] : cost_fields) {
    if (auto v = get("cost_model", name)) {
      sc.cost.*member = parse_double(std::string("cost_model.") + name, *v);
    }
  }

  if (kv.count("agent") || sc.approach == Approach::Cron) {
    AgentConfig a;
    if (auto v = get("agent", "interval")) a.interval = parse_double("agent.interval", *v);
    if (auto v = get("agent", "reserve_nodes")) {
      a.reserve_nodes = parse_int32("agent.reserve_nodes", *v);
    }
    sc.agent = a;
  }

  auto& w = sc.workload;
  if (auto v = get("workload", "job_type")) {
    sc.job_type = parse_enum("workload.job_type", *v, kTypes);
  }
  if (auto v = get("workload", "size")) sc.size = parse_enum("workload.size", *v, kSizes);
  if (auto v = get("workload", "seed")) {
    const long long seed = parse_int("workload.seed", *v);
    if (seed < 0) throw ConfigError("workload.seed", "must be >= 0");
    sc.seed = static_cast<std::uint64_t>(seed);
  }
  if (auto v = get("workload", "arrival")) w.arrival = parse_double("workload.arrival", *v);
  if (auto v = get("workload", "second_arrival")) {
    w.second_arrival = parse_double("workload.second_arrival", *v);
  }
  if (auto v = get("workload", "spot_job_nodes")) {
    w.spot_job_nodes = parse_int32("workload.spot_job_nodes", *v);
  }
  if (auto v = get("workload", "run_seconds")) {
    w.run_seconds = parse_double("workload.run_seconds", *v);
  }
  if (auto v = get("workload", "spot_run_seconds")) {
    w.spot_run_seconds = parse_double("workload.spot_run_seconds", *v);
  }

  if (sc.nodes <= 0) throw ConfigError("cluster.nodes", "must be > 0");
  if (sc.cores_per_node <= 0) throw ConfigError("cluster.cores_per_node", "must be > 0");
  if (has_timeline) {
    for (const auto& [value, l] : jobs) sc.timeline.push_back(parse_timeline_job(value, l));
  } else {
    sc.timeline = default_timeline(sc);
  }
  sc.validate();
  return sc;
}

std::string serialize_config(const Scenario& s) {
  std::ostringstream out;
  out << "[cluster]\n"
      << "nodes = " << s.nodes << '\n'
      << "cores_per_node = " << s.cores_per_node << '\n'
      << "per_user_limit_nodes = " << s.per_user_limit_nodes << '\n'
      << "partitions = " << to_string(s.partitions) << '\n'
      << "mode = " << lower(std::string(to_string(s.mode))) << "\n\n";
  out << "[scheduler]\n"
      << "approach = " << to_string(s.approach) << '\n'
      << "per_user_quota = " << (s.per_user_quota ? "true" : "false") << "\n\n";
  out << "[cost_model]\n"
      << "c_recognize = " << fmt(s.cost.c_recognize) << '\n'
      << "c_job_overhead = " << fmt(s.cost.c_job_overhead) << '\n'
      << "c_task_dispatch = " << fmt(s.cost.c_task_dispatch) << '\n'
      << "c_node_dispatch = " << fmt(s.cost.c_node_dispatch) << '\n'
      << "c_preempt_signal = " << fmt(s.cost.c_preempt_signal) << '\n'
      << "c_cleanup = " << fmt(s.cost.c_cleanup) << '\n'
      << "c_requeue_release = " << fmt(s.cost.c_requeue_release) << '\n'
      << "t_main = " << fmt(s.cost.t_main) << '\n'
      << "t_backfill = " << fmt(s.cost.t_backfill) << "\n\n";
  if (s.agent) {
    out << "[agent]\n"
        << "interval = " << fmt(s.agent->interval) << '\n'
        << "reserve_nodes = " << s.agent->reserve_nodes << "\n\n";
  }
  const auto& w = s.workload;
  out << "[workload]\n"
      << "job_type = " << to_string(s.job_type) << '\n'
      << "size = " << to_string(s.size) << '\n'
      << "seed = " << s.seed << '\n'
      << "arrival = " << fmt(w.arrival) << '\n';
  if (w.second_arrival) out << "second_arrival = " << fmt(*w.second_arrival) << '\n';
  out << "spot_job_nodes = " << w.spot_job_nodes << '\n'
      << "run_seconds = " << fmt(w.run_seconds) << '\n'
      << "spot_run_seconds = " << fmt(w.spot_run_seconds) << "\n\n";
  out << "[timeline]\n";
  for (const auto& j : s.timeline) {
    out << "job = " << fmt(j.submit_at.seconds) << ", " << j.user << ", " << to_string(j.qos)
        << ", " << to_string(j.job_type) << ", " << j.total_tasks << ", " << j.tasks_per_node
        << ", " << j.cores_per_task << ", " << fmt(j.run_seconds) << '\n';
  }
  return out.str();
}

Scenario load_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot read scenario file " + path);
  std::ostringstream buf;
  buf << f.rdbuf();
  return parse_config(buf.str());
}

}  // namespace spotsim
