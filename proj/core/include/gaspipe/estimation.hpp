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
#include <deque>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "gaspipe/network.hpp"
#include "gaspipe/simulator.hpp"
#include "gaspipe/transient_model.hpp"

namespace gaspipe {

enum class Variant { kClassic, kRobust };

std::string_view to_string(Variant variant);

struct EstimatorConfig {
  Eigen::MatrixXd process_noise;         // Q, dim x dim
  Eigen::VectorXd measurement_variance;  // diagonal of R, one entry per channel
  Eigen::MatrixXd initial_covariance;    // P0, dim x dim
  int window = 10;                       // innovation window length, steps
  Variant variant = Variant::kRobust;
  double mu_floor = 1.0;
  /// Optional upper clamp on the scalar. Setting floor = ceiling = 1 turns the
  /// robust filter into the classic one.
  std::optional<double> mu_ceiling;

  /// Throws std::invalid_argument on shape mismatch, asymmetry, a non-SPD
  /// matrix, window < 1 or mu_floor < 1.
  void validate(int state_dim, int channel_count) const;
};

struct DefaultTuning {
  /// Q = (process_scale * rms of the x0 densities)^2 I.
  double process_scale = 1e-4;
  /// P0 = diag((initial_scale * |x0_i|)^2), floored at Q.
  double initial_scale = 1e-2;
};

/// Q, R and P0 derived from the initial state and the channel sigmas.
EstimatorConfig default_config(const Eigen::VectorXd& initial_state,
                               const MeasurementSeries& measurements, Variant variant,
                               const DefaultTuning& tuning = {});

struct Prediction {
  Eigen::VectorXd state;
  Eigen::MatrixXd covariance;
};

/// x = F x + u, P = F P F^T + Q, symmetrized.
Prediction predict(const Eigen::VectorXd& state, const Eigen::MatrixXd& covariance,
                   const Eigen::MatrixXd& transition, const Eigen::VectorXd& input,
                   const Eigen::MatrixXd& process_noise);

struct Update {
  Eigen::VectorXd state;
  Eigen::MatrixXd covariance;
  Eigen::VectorXd innovation;
  Eigen::MatrixXd gain;
};

/// Measurement update against a diagonal noise covariance. The gain comes from
/// a Cholesky solve on H P H^T + diag(variance); throws NumericalError if that
/// factorization fails.
Update kf_update(const Eigen::VectorXd& predicted_state, const Eigen::MatrixXd& predicted_covariance,
                 const Eigen::VectorXd& measurement, const Eigen::MatrixXd& h,
                 const Eigen::VectorXd& variance);

/// Sample second moment (1/m) sum e e^T of the innovations in the window.
Eigen::MatrixXd innovation_covariance_estimate(std::span<const Eigen::VectorXd> window);

/// Last `capacity` innovations, newest at the back.
class InnovationWindow {
 public:
  explicit InnovationWindow(int capacity);

  void push(Eigen::VectorXd innovation);
  int size() const { return static_cast<int>(entries_.size()); }
  Eigen::MatrixXd covariance() const;

 private:
  int capacity_;
  std::deque<Eigen::VectorXd> entries_;
};

/// Diagonal of (C_e - H P H^T) R^-1, clamped below at `mu_floor` (and above
/// at `mu_ceiling` when given). Off-diagonal terms are discarded.
Eigen::VectorXd compute_scalar(const Eigen::MatrixXd& innovation_covariance, const Eigen::MatrixXd& h,
                               const Eigen::MatrixXd& predicted_covariance,
                               const Eigen::VectorXd& variance, double mu_floor,
                               std::optional<double> mu_ceiling = std::nullopt);

struct EstimationStep {
  Eigen::VectorXd state;                // x(t|t)
  Eigen::VectorXd covariance_diagonal;  // diag P(t|t)
  Eigen::VectorXd innovation;           // z - H x(t|t-1)
  /// diag(H P(t|t-1) H^T) + R with the nominal R.
  Eigen::VectorXd innovation_variance;
  Eigen::VectorXd scalar;    // mu' diagonal; ones for the classic variant
  Eigen::VectorXd estimate;  // H x(t|t)
};

struct EstimationResult {
  Variant variant = Variant::kClassic;
  Eigen::VectorXd initial_state;
  std::vector<EstimationStep> steps;  // [k] is grid step k + 1
};

/// Runs the classic or robust filter over the series. The initial estimate is
/// the fixed point of the t = 0 loads; the scheduled loads drive the input.
EstimationResult run_filter(const TransientModel& model, const GasNetwork& net,
                            const MeasurementSeries& measurements, const EstimatorConfig& config);

}  // namespace gaspipe
