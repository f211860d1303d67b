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
#include <span>
#include <vector>

#include "gaspipe/network.hpp"

namespace gaspipe {

enum class PipeEnd { kFrom, kTo };

/// State layout: node densities (by node id) followed by the two end flows of
/// every pipeline (by pipeline index, from-end first).
class StateIndex {
 public:
  StateIndex(int node_count, int pipeline_count);
  explicit StateIndex(const GasNetwork& net);

  int density_slot(int node_id) const { return node_id - 1; }
  int flow_slot(int pipeline, PipeEnd end) const {
    return node_count_ + 2 * pipeline + (end == PipeEnd::kTo ? 1 : 0);
  }

  int node_count() const { return node_count_; }
  int pipeline_count() const { return pipeline_count_; }
  int dim() const { return node_count_ + 2 * pipeline_count_; }

  friend bool operator==(const StateIndex&, const StateIndex&) = default;

 private:
  int node_count_;
  int pipeline_count_;
};

struct Term {
  int slot = 0;
  double coeff = 0.0;
};
using SparseRow = std::vector<Term>;

/// `lhs . x_{t+1} = rhs . x_t (+ boundary input)`.
struct EquationRow {
  SparseRow lhs;
  SparseRow rhs;
};

/// Dimensionless stencil weights of one pipeline for a given step and
/// linearization speed.
struct PipelineCoefficients {
  double flow_gain = 0.0;      // dt / (a L)
  double wave_gain = 0.0;      // a dt c^2 / L
  double friction_gain = 0.0;  // f |u| dt / (4 d)
};

PipelineCoefficients pipeline_coefficients(const Pipeline& pipe, double dt, double sound_speed,
                                           double u_bar);

struct PipelineRows {
  EquationRow continuity;
  EquationRow momentum;
};

/// Box-scheme discretization of the isothermal continuity and momentum
/// equations over a single element spanning the whole pipe.
PipelineRows pipeline_rows(const Pipeline& pipe, int pipeline, const StateIndex& index, double dt,
                           double sound_speed, double u_bar);

/// Source rows pin the density; sink rows balance to-end inflow minus
/// from-end outflow against the node load. The right-hand side of every
/// boundary row is zero and the constant enters through the input vector.
struct BoundaryRow {
  int node_id = 0;
  bool source = false;
  SparseRow lhs;
  double source_density = 0.0;  // input entry for sources; sinks take the load
};

/// Sources first, then sinks, each in node-id order.
std::vector<BoundaryRow> boundary_rows(const GasNetwork& net, const StateIndex& index);

/// Linear discrete transition x_{t+1} = F x_t + u_{t+1}.
///
/// Node loads are passed as a vector indexed by `node_id - 1`; entries at
/// source nodes are ignored.
class TransientModel {
 public:
  const StateIndex& index() const { return index_; }
  double dt() const { return dt_; }
  const std::vector<double>& u_bar() const { return u_bar_; }

  /// Left-hand assembly.
  const Eigen::MatrixXd& lhs() const { return lhs_; }
  /// Right-hand assembly (boundary rows are zero).
  const Eigen::MatrixXd& rhs() const { return rhs_; }
  const Eigen::MatrixXd& transition() const { return transition_; }
  /// Columns of lhs^-1 for the boundary rows, dim x (n_source + n_sink).
  const Eigen::MatrixXd& input_gain() const { return input_gain_; }
  double lhs_condition() const { return lhs_condition_; }

  /// Row of `lhs()` holding the boundary condition of `node_id`.
  int boundary_row(int node_id) const { return boundary_row_[node_id - 1]; }

  /// Raw input: zero on pipeline rows, source densities and sink loads on boundary rows.
  Eigen::VectorXd raw_input(const Eigen::VectorXd& node_loads) const;
  /// lhs^-1 applied to raw_input.
  Eigen::VectorXd input(const Eigen::VectorXd& node_loads) const;
  Eigen::VectorXd step(const Eigen::VectorXd& state, const Eigen::VectorXd& next_loads) const;

 private:
  friend TransientModel assemble(const GasNetwork&, double, std::span<const double>);

  explicit TransientModel(StateIndex index) : index_(index) {}

  StateIndex index_;
  double dt_ = 0.0;
  std::vector<double> u_bar_;
  Eigen::MatrixXd lhs_;
  Eigen::MatrixXd rhs_;
  Eigen::MatrixXd transition_;
  Eigen::MatrixXd input_gain_;
  double lhs_condition_ = 0.0;
  std::vector<int> boundary_row_;
  std::vector<int> boundary_nodes_;  // node id of boundary input k
  std::vector<double> source_density_;  // by node id - 1, zero at sinks
};

/// Stacks pipeline rows then boundary rows and factorizes the left-hand side.
/// Throws NumericalError naming the smallest pivot when it is singular.
TransientModel assemble(const GasNetwork& net, double dt, std::span<const double> u_bar);

struct SteadyStateOptions {
  double tolerance = 1e-8;
  int max_iterations = 50;
  double initial_speed = 1.0;  // m/s
  double min_speed = 1e-6;     // keeps the friction terms nonzero
};

struct SteadyState {
  Eigen::VectorXd state;
  /// Linearization speeds used in the final linear solve; `state` is an exact
  /// fixed point of the model assembled with these.
  std::vector<double> u_bar;
  int iterations = 0;
};

/// Fixed-point iteration on the linearization speed of the time-independent
/// system. Throws NumericalError on non-convergence or a nonpositive density.
SteadyState steady_state(const GasNetwork& net, const Eigen::VectorXd& node_loads,
                         const SteadyStateOptions& options = {});

/// Nodal flow balance (to-end inflows minus from-end outflows) for every node,
/// indexed by node id - 1. Equals the load at sinks and minus the injection at sources.
Eigen::VectorXd nodal_flows(const GasNetwork& net, const StateIndex& index, const Eigen::VectorXd& state);

}  // namespace gaspipe
