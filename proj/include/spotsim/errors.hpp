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

#include <stdexcept>
#include <string>

namespace spotsim {

/// Root of every error raised by the simulator.
class SimError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SchedulingInPast : public SimError {
 public:
  using SimError::SimError;
};

/// Invalid cluster/scheduler/agent configuration. `field` names the config
/// path (e.g. "scheduler.mode") when known.
class ConfigError : public SimError {
 public:
  ConfigError(std::string field, const std::string& what)
      : SimError(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

class ParseError : public SimError {
 public:
  ParseError(int line, const std::string& what)
      : SimError("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

class ValidationError : public SimError {
 public:
  using SimError::SimError;
};

class DoubleCommit : public SimError {
 public:
  using SimError::SimError;
};

class PlacementConflict : public SimError {
 public:
  using SimError::SimError;
};

class UnknownJob : public SimError {
 public:
  using SimError::SimError;
};

class NotRunning : public SimError {
 public:
  using SimError::SimError;
};

class NotSpot : public SimError {
 public:
  using SimError::SimError;
};

class InsufficientEvenAfterPreemption : public SimError {
 public:
  using SimError::SimError;
};

class NotFullyDispatched : public SimError {
 public:
  using SimError::SimError;
};

class IoError : public SimError {
 public:
  using SimError::SimError;
};

}  // namespace spotsim
