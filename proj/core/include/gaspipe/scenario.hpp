// Copyright 2026 The gaspipe-dse Authors.
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

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "gaspipe/network.hpp"

namespace gaspipe {

enum class ChannelKind { kPressure, kFlow };

std::string_view to_string(ChannelKind kind);

/// Piecewise-linear load curve, held constant outside its knots.
struct LoadProfile {
  std::vector<double> times_h;
  std::vector<double> values;  // kg/s

  double at_hours(double t_h) const;
  bool is_zero() const;

  friend bool operator==(const LoadProfile&, const LoadProfile&) = default;
};

/// Standard deviations of the synthetic measurement noise.
struct NoiseConfig {
  double pressure_sigma_bar = 0.01;
  /// Fraction of the node's time-averaged nominal flow magnitude.
  double flow_sigma_relative = 0.02;
  /// kg/s, used for the zero-flow channels of junction nodes and as a floor.
  double virtual_sigma = 0.001;

  friend bool operator==(const NoiseConfig&, const NoiseConfig&) = default;
};

/// Replaces one measurement outright. `value` is bar for pressure, kg/s for flow.
struct BadDataEvent {
  ChannelKind kind = ChannelKind::kPressure;
  int node = 0;
  double time_h = 0.0;
  double value = 0.0;

  friend bool operator==(const BadDataEvent&, const BadDataEvent&) = default;
};

/// Adds a constant offset on every grid instant in [start_h, end_h].
///
/// `node_set` is a comma-separated list of node ids, ranges `a-b` and the
/// keywords `all`, `sources`, `sinks`, `loads`, `junctions`, `metered`
/// (sources and loads).
struct BiasEvent {
  ChannelKind kind = ChannelKind::kPressure;
  std::string node_set;
  double start_h = 0.0;
  double end_h = 0.0;
  double offset = 0.0;

  friend bool operator==(const BiasEvent&, const BiasEvent&) = default;
};

struct Scenario {
  double dt_s = 900.0;
  double horizon_s = 86400.0;
  std::uint64_t seed = 0;
  std::map<int, LoadProfile> loads;  // sink node id -> profile
  NoiseConfig noise;
  std::vector<BadDataEvent> bad_data;
  std::vector<BiasEvent> bias;

  /// Number of propagation steps; throws ValidationError unless horizon/dt is a positive integer.
  int steps() const;
  /// Node loads at grid step k, indexed by node id - 1.
  Eigen::VectorXd loads_at_step(int k, int node_count) const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// A junction is a sink whose load profile is identically zero.
bool is_junction(const Scenario& scenario, const Node& node);

/// Grid step of `time_h`; throws ValidationError when it is off the grid or outside 1..steps.
int event_step(const Scenario& scenario, double time_h);

std::vector<int> resolve_node_set(std::string_view spec, const GasNetwork& net,
                                  const Scenario& scenario);

/// Checks the scenario against a network: every sink has a profile, sources
/// have none, noise sigmas are positive, events reference known nodes and sit
/// on the time grid. Throws ValidationError.
void validate_scenario(const Scenario& scenario, const GasNetwork& net);

Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::string& path);
std::string serialize_scenario(const Scenario& scenario);

enum class Condition { kNormal, kBadData, kBias };

std::string_view to_string(Condition condition);

inline constexpr std::uint64_t kDefaultSeed = 20240617;

/// Demo scenarios on the builtin benchmark: smooth diurnal loads with a +-30%
/// swing, 15 min steps over 24 h. kBadData adds spikes on the node-30 pressure
/// and node-11 flow readings; kBias adds +0.2 bar on every pressure channel and
/// +0.1 kg/s on the metered flows.
Scenario bundled_scenario(Condition condition, std::uint64_t seed = kDefaultSeed);

}  // namespace gaspipe
