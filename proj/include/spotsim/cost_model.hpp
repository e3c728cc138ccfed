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

namespace spotsim {

/// Parametric latencies, in seconds. Defaults are calibrated, not measured:
/// they reproduce the relative behaviour of the three launch styles and of
/// the preemption approaches on a 64-core-node cluster.
struct CostModel {
  double c_recognize = 0.01;
  /// Per job scanned in a scheduling cycle.
  double c_job_overhead = 0.002;
  /// Per individual/array task dispatched.
  double c_task_dispatch = 0.012;
  /// Per triple-mode node unit dispatched.
  double c_node_dispatch = 0.007;
  /// Per victim signalled.
  double c_preempt_signal = 0.05;
  /// Drain window after scheduler-initiated preemption.
  double c_cleanup = 30.0;
  /// Drain window after an externally issued requeue (manual or agent).
  double c_requeue_release = 3.0;
  double t_main = 2.0;
  double t_backfill = 30.0;

  /// Defaults with the node-unit dispatch cost scaled to the node width
  /// (0.007 s for a 64-core node).
  static CostModel calibrated(int cores_per_node);

  /// Throws ConfigError: every field >= 0, t_main > 0, t_backfill > t_main.
  void validate() const;

  bool operator==(const CostModel&) const = default;
};

}  // namespace spotsim
