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

#include <compare>
#include <limits>

namespace spotsim {

/// A point on the simulated time axis, in seconds. Durations are plain
/// doubles; only instants carry the type.
struct SimTime {
  double seconds = 0.0;

  constexpr SimTime() = default;
  constexpr explicit SimTime(double s) : seconds(s) {}

  static constexpr SimTime never() { return SimTime(std::numeric_limits<double>::infinity()); }

  constexpr auto operator<=>(const SimTime&) const = default;

  constexpr SimTime operator+(double d) const { return SimTime(seconds + d); }
  constexpr SimTime& operator+=(double d) {
    seconds += d;
    return *this;
  }
  constexpr double operator-(SimTime o) const { return seconds - o.seconds; }
};

constexpr SimTime later_of(SimTime a, SimTime b) { return a < b ? b : a; }

}  // namespace spotsim
