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

#include "gaspipe/transient_model.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "gaspipe/errors.hpp"

namespace gaspipe {

StateIndex::StateIndex(int node_count, int pipeline_count)
    : node_count_(node_count), pipeline_count_(pipeline_count) {}

StateIndex::StateIndex(const GasNetwork& net)
    : StateIndex(net.node_count(), net.pipeline_count()) {}

PipelineCoefficients pipeline_coefficients(const Pipeline& pipe, double dt, double sound_speed,
                                           double u_bar) {
  const double a = pipe.cross_section_area();
  const double length = pipe.length_m;
  return {
      .flow_gain = dt / (a * length),
      .wave_gain = a * dt * sound_speed * sound_speed / length,
      .friction_gain = pipe.friction_factor * std::abs(u_bar) * dt / (4.0 * pipe.diameter_m),
  };
}

PipelineRows pipeline_rows(const Pipeline& pipe, int pipeline, const StateIndex& index, double dt,
                           double sound_speed, double u_bar) {
  const auto k = pipeline_coefficients(pipe, dt, sound_speed, u_bar);
  const int rho_i = index.density_slot(pipe.from);
  const int rho_j = index.density_slot(pipe.to);
  const int m_i = index.flow_slot(pipeline, PipeEnd::kFrom);
  const int m_j = index.flow_slot(pipeline, PipeEnd::kTo);

  PipelineRows rows;
  // Continuity: time difference of the mean density plus the flow divergence,
  // averaged over t and t+1.
  rows.continuity.lhs = {{rho_i, 1.0}, {rho_j, 1.0}, {m_i, -k.flow_gain}, {m_j, k.flow_gain}};
  rows.continuity.rhs = {{rho_i, 1.0}, {rho_j, 1.0}, {m_i, k.flow_gain}, {m_j, -k.flow_gain}};

  // Momentum: mean flow rate of change, pressure gradient and linearized
  // friction on the four-point mean.
  const double keep = 1.0 + k.friction_gain;
  const double carry = 1.0 - k.friction_gain;
  rows.momentum.lhs = {{rho_i, -k.wave_gain}, {rho_j, k.wave_gain}, {m_i, keep}, {m_j, keep}};
  rows.momentum.rhs = {{rho_i, k.wave_gain}, {rho_j, -k.wave_gain}, {m_i, carry}, {m_j, carry}};
  return rows;
}

std::vector<BoundaryRow> boundary_rows(const GasNetwork& net, const StateIndex& index) {
  std::vector<BoundaryRow> sinks;
  std::vector<BoundaryRow> rows;
  for (const Node& n : net.nodes()) {
    BoundaryRow row;
    row.node_id = n.id;
    row.source = n.is_source();
    if (row.source) {
      row.lhs = {{index.density_slot(n.id), 1.0}};
      row.source_density = net.source_density(n.id);
      rows.push_back(std::move(row));
    } else {
      sinks.push_back(std::move(row));
    }
  }
  for (auto& row : sinks) {
    for (int p = 0; p < net.pipeline_count(); ++p) {
      const Pipeline& pipe = net.pipelines()[p];
      if (pipe.to == row.node_id) row.lhs.push_back({index.flow_slot(p, PipeEnd::kTo), 1.0});
      if (pipe.from == row.node_id) row.lhs.push_back({index.flow_slot(p, PipeEnd::kFrom), -1.0});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

void scatter(Eigen::MatrixXd& m, int row, const SparseRow& terms) {
  for (const Term& t : terms) m(row, t.slot) += t.coeff;
}

struct Assembly {
  Eigen::MatrixXd lhs;
  Eigen::MatrixXd rhs;
  std::vector<BoundaryRow> boundary;
};

Assembly assemble_rows(const GasNetwork& net, const StateIndex& index, double dt,
                       std::span<const double> u_bar) {
  const int dim = index.dim();
  Assembly out{Eigen::MatrixXd::Zero(dim, dim), Eigen::MatrixXd::Zero(dim, dim),
               boundary_rows(net, index)};
  for (int p = 0; p < net.pipeline_count(); ++p) {
    auto rows = pipeline_rows(net.pipelines()[p], p, index, dt, net.sound_speed(), u_bar[p]);
    scatter(out.lhs, 2 * p, rows.continuity.lhs);
    scatter(out.rhs, 2 * p, rows.continuity.rhs);
    scatter(out.lhs, 2 * p + 1, rows.momentum.lhs);
    scatter(out.rhs, 2 * p + 1, rows.momentum.rhs);
  }
  int row = 2 * net.pipeline_count();
  for (const auto& b : out.boundary) scatter(out.lhs, row++, b.lhs);
  return out;
}

Eigen::FullPivLU<Eigen::MatrixXd> factorize(const Eigen::MatrixXd& m, const char* what) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
  if (lu.rank() < m.rows()) {
    const double smallest = lu.matrixLU().diagonal().cwiseAbs().minCoeff();
    throw NumericalError(fmt::format(
        "{} is singular (rank {} of {}, smallest pivot {:.3e}); the network is structurally "
        "deficient",
        what, lu.rank(), m.rows(), smallest));
  }
  return lu;
}

void check_speeds(const GasNetwork& net, std::span<const double> u_bar) {
  if (static_cast<int>(u_bar.size()) != net.pipeline_count()) {
    throw std::invalid_argument(fmt::format("expected {} linearization speeds, got {}",
                                            net.pipeline_count(), u_bar.size()));
  }
  for (double u : u_bar) {
    if (!(u >= 0.0) || !std::isfinite(u)) {
      throw std::invalid_argument("linearization speeds must be finite and nonnegative");
    }
  }
}

}  // namespace

TransientModel assemble(const GasNetwork& net, double dt, std::span<const double> u_bar) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  check_speeds(net, u_bar);

  StateIndex index(net);
  auto rows = assemble_rows(net, index, dt, u_bar);
  const int dim = index.dim();

  TransientModel model(index);
  model.dt_ = dt;
  model.u_bar_.assign(u_bar.begin(), u_bar.end());

  auto lu = factorize(rows.lhs, "transient left-hand matrix");
  model.transition_ = lu.solve(rows.rhs);

  const int n_boundary = static_cast<int>(rows.boundary.size());
  const int first = 2 * net.pipeline_count();
  Eigen::MatrixXd selector = Eigen::MatrixXd::Zero(dim, n_boundary);
  model.boundary_row_.assign(net.node_count(), -1);
  model.source_density_.assign(net.node_count(), 0.0);
  for (int k = 0; k < n_boundary; ++k) {
    const auto& b = rows.boundary[k];
    selector(first + k, k) = 1.0;
    model.boundary_row_[b.node_id - 1] = first + k;
    model.boundary_nodes_.push_back(b.node_id);
    if (b.source) model.source_density_[b.node_id - 1] = b.source_density;
  }
  model.input_gain_ = lu.solve(selector);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows.lhs);
  const auto& s = svd.singularValues();
  model.lhs_condition_ = s(0) / s(s.size() - 1);

  model.lhs_ = std::move(rows.lhs);
  model.rhs_ = std::move(rows.rhs);
  return model;
}

Eigen::VectorXd TransientModel::raw_input(const Eigen::VectorXd& node_loads) const {
  Eigen::VectorXd u = Eigen::VectorXd::Zero(index_.dim());
  for (int node_id : boundary_nodes_) {
    const double s = source_density_[node_id - 1];
    u(boundary_row(node_id)) = s > 0.0 ? s : node_loads(node_id - 1);
  }
  return u;
}

Eigen::VectorXd TransientModel::input(const Eigen::VectorXd& node_loads) const {
  Eigen::VectorXd b(boundary_nodes_.size());
  for (std::size_t k = 0; k < boundary_nodes_.size(); ++k) {
    const int node_id = boundary_nodes_[k];
    const double s = source_density_[node_id - 1];
    b(static_cast<Eigen::Index>(k)) = s > 0.0 ? s : node_loads(node_id - 1);
  }
  return input_gain_ * b;
}

Eigen::VectorXd TransientModel::step(const Eigen::VectorXd& state,
                                     const Eigen::VectorXd& next_loads) const {
  return transition_ * state + input(next_loads);
}

SteadyState steady_state(const GasNetwork& net, const Eigen::VectorXd& node_loads,
                         const SteadyStateOptions& options) {
  if (node_loads.size() != net.node_count()) {
    throw std::invalid_argument(fmt::format("expected {} node loads, got {}", net.node_count(),
                                            node_loads.size()));
  }
  if (!node_loads.allFinite()) throw std::invalid_argument("node loads must be finite");

  const StateIndex index(net);
  const int dim = index.dim();
  Eigen::VectorXd u = Eigen::VectorXd::Zero(dim);
  {
    auto boundary = boundary_rows(net, index);
    int row = 2 * net.pipeline_count();
    for (const auto& b : boundary) {
      u(row++) = b.source ? b.source_density : node_loads(b.node_id - 1);
    }
  }

  SteadyState out;
  std::vector<double> speeds(net.pipeline_count(), options.initial_speed);
  for (int iter = 1; iter <= options.max_iterations; ++iter) {
    // With the time differences removed the scheme reduces to lhs - rhs, in
    // which every pipeline row is proportional to dt; dt = 1 s is arbitrary.
    auto rows = assemble_rows(net, index, 1.0, speeds);
    auto lu = factorize(rows.lhs - rows.rhs, "steady-state system");
    Eigen::VectorXd x = lu.solve(u);

    double change = 0.0;
    std::vector<double> next(speeds.size());
    for (int p = 0; p < net.pipeline_count(); ++p) {
      const Pipeline& pipe = net.pipelines()[p];
      const double mean_flow =
          0.5 * (x(index.flow_slot(p, PipeEnd::kFrom)) + x(index.flow_slot(p, PipeEnd::kTo)));
      const double mean_density =
          0.5 * (x(index.density_slot(pipe.from)) + x(index.density_slot(pipe.to)));
      if (!(mean_density > 0.0)) {
        throw NumericalError(fmt::format(
            "steady state has a nonpositive density on pipeline ({},{}); loads are infeasible",
            pipe.from, pipe.to));
      }
      // Plain substitution stalls on paths fed from two sources; the geometric
      // mean of old and new speed contracts reliably.
      const double computed = std::max(
          std::abs(mean_flow) / (pipe.cross_section_area() * mean_density), options.min_speed);
      next[p] = std::sqrt(computed * speeds[p]);
      change = std::max(change, std::abs(computed - speeds[p]) / std::max(computed, speeds[p]));
    }
    for (int i = 0; i < net.node_count(); ++i) {
      if (!(x(i) > 0.0)) {
        throw NumericalError(fmt::format(
            "steady state has a nonpositive density at node {}; loads are infeasible", i + 1));
      }
    }

    out.state = std::move(x);
    out.u_bar = speeds;
    out.iterations = iter;
    if (change < options.tolerance) return out;
    speeds = std::move(next);
  }
  throw NumericalError(fmt::format("steady state did not converge in {} iterations",
                                   options.max_iterations));
}

Eigen::VectorXd nodal_flows(const GasNetwork& net, const StateIndex& index,
                            const Eigen::VectorXd& state) {
  Eigen::VectorXd flows = Eigen::VectorXd::Zero(net.node_count());
  for (int p = 0; p < net.pipeline_count(); ++p) {
    const Pipeline& pipe = net.pipelines()[p];
    flows(pipe.to - 1) += state(index.flow_slot(p, PipeEnd::kTo));
    flows(pipe.from - 1) -= state(index.flow_slot(p, PipeEnd::kFrom));
  }
  return flows;
}

}  // namespace gaspipe
