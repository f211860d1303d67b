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

#include "gaspipe/simulator.hpp"

#include <fmt/format.h>

#include <random>

#include "gaspipe/errors.hpp"

namespace gaspipe {

StudyModel build_study_model(const GasNetwork& net, const Scenario& scenario) {
  validate_scenario(scenario, net);
  auto initial = steady_state(net, scenario.loads_at_step(0, net.node_count()));
  auto model = assemble(net, scenario.dt_s, initial.u_bar);
  return {std::move(model), std::move(initial)};
}

Eigen::VectorXd fixed_point(const TransientModel& model, const Eigen::VectorXd& node_loads) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(model.lhs() - model.rhs());
  if (!lu.isInvertible()) throw NumericalError("transition has no unique fixed point");
  return lu.solve(model.raw_input(node_loads));
}

Trajectory simulate(const TransientModel& model, const GasNetwork& net, const Scenario& scenario) {
  if (std::abs(model.dt() - scenario.dt_s) > 1e-12 * scenario.dt_s) {
    throw std::invalid_argument("model and scenario time steps differ");
  }
  const int steps = scenario.steps();
  Trajectory out;
  out.dt = scenario.dt_s;
  out.states.reserve(steps + 1);
  out.loads.reserve(steps + 1);

  // The source rows read rho = rho_s; write that back so round-off in the
  // factorized solve never moves a source.
  const auto pin = [&](Eigen::VectorXd x) {
    for (const Node& node : net.nodes()) {
      if (node.is_source()) x(model.index().density_slot(node.id)) = net.source_density(node.id);
    }
    return x;
  };
  out.loads.push_back(scenario.loads_at_step(0, net.node_count()));
  out.states.push_back(pin(fixed_point(model, out.loads.front())));
  for (int k = 1; k <= steps; ++k) {
    out.loads.push_back(scenario.loads_at_step(k, net.node_count()));
    out.states.push_back(pin(model.step(out.states.back(), out.loads.back())));
  }
  return out;
}

Eigen::MatrixXd measurement_matrix(const GasNetwork& net, const StateIndex& index) {
  const int n = net.node_count();
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2 * n, index.dim());
  for (int id = 1; id <= n; ++id) h(id - 1, index.density_slot(id)) = 1.0;
  for (int p = 0; p < net.pipeline_count(); ++p) {
    const Pipeline& pipe = net.pipelines()[p];
    h(n + pipe.to - 1, index.flow_slot(p, PipeEnd::kTo)) += 1.0;
    h(n + pipe.from - 1, index.flow_slot(p, PipeEnd::kFrom)) -= 1.0;
  }
  return h;
}

std::string Channel::name() const {
  return fmt::format("{}_node{}", kind == ChannelKind::kPressure ? "p" : "m", node);
}

double to_file_units(const GasNetwork& net, ChannelKind kind, double value) {
  return kind == ChannelKind::kPressure ? net.density_to_pressure(value) : value;
}

double from_file_units(const GasNetwork& net, ChannelKind kind, double value) {
  return kind == ChannelKind::kPressure ? net.pressure_to_density(value) : value;
}

std::vector<Channel> measurement_channels(const GasNetwork& net, const Scenario& scenario,
                                          const std::vector<Eigen::VectorXd>& truth) {
  const int n = net.node_count();
  std::vector<Channel> channels;
  channels.reserve(2 * n);
  const double pressure_sigma = net.pressure_to_density(scenario.noise.pressure_sigma_bar);
  for (const Node& node : net.nodes()) {
    channels.push_back({node.id, ChannelKind::kPressure, node.is_source(), false, pressure_sigma});
  }
  for (const Node& node : net.nodes()) {
    Channel c{node.id, ChannelKind::kFlow, node.is_source(), is_junction(scenario, node),
              scenario.noise.virtual_sigma};
    if (!c.is_virtual && !truth.empty()) {
      double mean_abs = 0.0;
      for (const auto& z : truth) mean_abs += std::abs(z(n + node.id - 1));
      mean_abs /= static_cast<double>(truth.size());
      c.sigma = std::max(scenario.noise.flow_sigma_relative * mean_abs, scenario.noise.virtual_sigma);
    }
    channels.push_back(c);
  }
  return channels;
}

MeasurementSeries synthesize_measurements(const Trajectory& trajectory, const Eigen::MatrixXd& h,
                                          const Scenario& scenario, const GasNetwork& net) {
  validate_scenario(scenario, net);
  const int steps = trajectory.steps();
  if (steps != scenario.steps()) throw std::invalid_argument("trajectory does not match scenario");
  const int n = net.node_count();

  MeasurementSeries out;
  out.dt = trajectory.dt;
  out.loads = trajectory.loads;
  out.truth.reserve(steps);
  for (int k = 1; k <= steps; ++k) out.truth.push_back(h * trajectory.states[k]);
  out.channels = measurement_channels(net, scenario, out.truth);

  std::mt19937_64 rng(scenario.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  out.measured.reserve(steps);
  for (int k = 0; k < steps; ++k) {
    Eigen::VectorXd z = out.truth[k];
    for (std::size_t c = 0; c < out.channels.size(); ++c) {
      z(static_cast<Eigen::Index>(c)) += out.channels[c].sigma * normal(rng);
    }
    out.measured.push_back(std::move(z));
  }

  auto channel_of = [n](ChannelKind kind, int node) {
    return kind == ChannelKind::kPressure ? node - 1 : n + node - 1;
  };
  for (const auto& e : scenario.bad_data) {
    const int step = event_step(scenario, e.time_h);
    const int c = channel_of(e.kind, e.node);
    double& value = out.measured[step - 1](c);
    const double corrupted = from_file_units(net, e.kind, e.value);
    out.corruption.push_back({CorruptionRecord::Kind::kBadData, step, c, value, corrupted});
    value = corrupted;
  }
  for (const auto& e : scenario.bias) {
    const int first = event_step(scenario, e.start_h);
    const int last = event_step(scenario, e.end_h);
    const double offset = from_file_units(net, e.kind, e.offset) - from_file_units(net, e.kind, 0.0);
    for (int node : resolve_node_set(e.node_set, net, scenario)) {
      const int c = channel_of(e.kind, node);
      for (int step = first; step <= last; ++step) {
        double& value = out.measured[step - 1](c);
        out.corruption.push_back({CorruptionRecord::Kind::kBias, step, c, value, value + offset});
        value += offset;
      }
    }
  }
  return out;
}

}  // namespace gaspipe
