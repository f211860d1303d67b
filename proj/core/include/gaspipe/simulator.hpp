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
#include <string>
#include <vector>

#include "gaspipe/network.hpp"
#include "gaspipe/scenario.hpp"
#include "gaspipe/transient_model.hpp"

namespace gaspipe {

/// Model assembled around the steady state of the scenario's t = 0 loads.
struct StudyModel {
  TransientModel model;
  SteadyState initial;
};

StudyModel build_study_model(const GasNetwork& net, const Scenario& scenario);

/// Fixed point of the frozen transition for constant `node_loads`: solves
/// (lhs - rhs) x = raw_input.
Eigen::VectorXd fixed_point(const TransientModel& model, const Eigen::VectorXd& node_loads);

/// Ground truth on the time grid, t = 0..T.
struct Trajectory {
  double dt = 0.0;
  std::vector<Eigen::VectorXd> states;
  std::vector<Eigen::VectorXd> loads;  // node loads, node id - 1

  int steps() const { return static_cast<int>(states.size()) - 1; }
};

/// Propagates x_{t+1} = F x_t + u_{t+1} from the fixed point of the t = 0
/// loads. No process noise.
Trajectory simulate(const TransientModel& model, const GasNetwork& net, const Scenario& scenario);

/// Pressure channels (identity on the density slots) followed by nodal flow
/// channels using the sink-balance sign convention. 2 n_N x dim.
Eigen::MatrixXd measurement_matrix(const GasNetwork& net, const StateIndex& index);

struct Channel {
  int node = 0;
  ChannelKind kind = ChannelKind::kPressure;
  bool source = false;
  /// Zero-flow channel of a junction node.
  bool is_virtual = false;
  /// Noise standard deviation in internal units (kg/m^3 for pressure, kg/s for flow).
  double sigma = 0.0;

  /// `p_node<N>` or `m_node<N>`.
  std::string name() const;
};

struct CorruptionRecord {
  enum class Kind { kBadData, kBias };
  Kind kind = Kind::kBadData;
  int step = 0;     // 1-based grid step
  int channel = 0;  // index into MeasurementSeries::channels
  double clean = 0.0;
  double corrupted = 0.0;
};

/// Synthetic SCADA data for steps 1..T. Pressure channels are stored as
/// densities; conversion to bar happens at file boundaries.
struct MeasurementSeries {
  double dt = 0.0;
  std::vector<Channel> channels;
  std::vector<Eigen::VectorXd> measured;  // [k] is step k + 1
  std::vector<Eigen::VectorXd> truth;     // noiseless H x
  /// Scheduled node loads for t = 0..T, the known input of the transition.
  std::vector<Eigen::VectorXd> loads;
  std::vector<CorruptionRecord> corruption;

  int steps() const { return static_cast<int>(measured.size()); }
};

/// Channel metadata with noise sigmas. Flow sigmas are anchored to the
/// time-averaged magnitude of each node's true flow over steps 1..T.
std::vector<Channel> measurement_channels(const GasNetwork& net, const Scenario& scenario,
                                          const std::vector<Eigen::VectorXd>& truth);

/// z = H x + w with Gaussian w, then bad-data replacements and bias offsets.
/// Identical seeds produce identical series.
MeasurementSeries synthesize_measurements(const Trajectory& trajectory, const Eigen::MatrixXd& h,
                                          const Scenario& scenario, const GasNetwork& net);

/// Measurement value in file units (bar or kg/s) and back.
double to_file_units(const GasNetwork& net, ChannelKind kind, double value);
double from_file_units(const GasNetwork& net, ChannelKind kind, double value);

}  // namespace gaspipe
