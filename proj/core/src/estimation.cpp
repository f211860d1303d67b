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

#include "gaspipe/estimation.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

#include "gaspipe/errors.hpp"

namespace gaspipe {

std::string_view to_string(Variant variant) {
  return variant == Variant::kClassic ? "kf" : "rkf";
}

namespace {

void require_spd(const Eigen::MatrixXd& m, int dim, const char* name) {
  if (m.rows() != dim || m.cols() != dim) {
    throw std::invalid_argument(fmt::format("{} must be {}x{}", name, dim, dim));
  }
  if (!m.isApprox(m.transpose(), 1e-12)) throw std::invalid_argument(fmt::format("{} is not symmetric", name));
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    throw std::invalid_argument(fmt::format("{} is not positive definite", name));
  }
}

Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

void EstimatorConfig::validate(int state_dim, int channel_count) const {
  require_spd(process_noise, state_dim, "process noise covariance");
  require_spd(initial_covariance, state_dim, "initial covariance");
  if (measurement_variance.size() != channel_count) {
    throw std::invalid_argument(fmt::format("measurement variance needs {} entries", channel_count));
  }
  if (!(measurement_variance.array() > 0.0).all()) {
    throw std::invalid_argument("measurement variances must be positive");
  }
  if (window < 1) throw std::invalid_argument("innovation window must hold at least one step");
  if (!(mu_floor >= 1.0)) throw std::invalid_argument("mu_floor must be at least 1");
  if (mu_ceiling && !(*mu_ceiling >= mu_floor)) {
    throw std::invalid_argument("mu_ceiling must not be below mu_floor");
  }
}

EstimatorConfig default_config(const Eigen::VectorXd& initial_state,
                               const MeasurementSeries& measurements, Variant variant,
                               const DefaultTuning& tuning) {
  const auto dim = initial_state.size();
  // Density slots lead the state and there is one pressure channel per node.
  const auto nodes = static_cast<Eigen::Index>(std::count_if(
      measurements.channels.begin(), measurements.channels.end(),
      [](const Channel& c) { return c.kind == ChannelKind::kPressure; }));
  if (nodes < 1 || nodes > dim) throw std::invalid_argument("series has no pressure channels");
  const double typical = std::sqrt(initial_state.head(nodes).squaredNorm() / static_cast<double>(nodes));
  const double q = std::pow(tuning.process_scale * typical, 2);

  EstimatorConfig cfg;
  cfg.process_noise = q * Eigen::MatrixXd::Identity(dim, dim);
  Eigen::VectorXd p0 = (tuning.initial_scale * initial_state.array()).square().max(q).matrix();
  cfg.initial_covariance = p0.asDiagonal();
  cfg.measurement_variance.resize(static_cast<Eigen::Index>(measurements.channels.size()));
  for (std::size_t c = 0; c < measurements.channels.size(); ++c) {
    cfg.measurement_variance(static_cast<Eigen::Index>(c)) = std::pow(measurements.channels[c].sigma, 2);
  }
  cfg.variant = variant;
  return cfg;
}

Prediction predict(const Eigen::VectorXd& state, const Eigen::MatrixXd& covariance,
                   const Eigen::MatrixXd& transition, const Eigen::VectorXd& input,
                   const Eigen::MatrixXd& process_noise) {
  Prediction out;
  out.state = transition * state + input;
  out.covariance = symmetrized(transition * covariance * transition.transpose() + process_noise);
  return out;
}

Update kf_update(const Eigen::VectorXd& predicted_state, const Eigen::MatrixXd& predicted_covariance,
                 const Eigen::VectorXd& measurement, const Eigen::MatrixXd& h,
                 const Eigen::VectorXd& variance) {
  const Eigen::MatrixXd hp = h * predicted_covariance;
  Eigen::MatrixXd s = hp * h.transpose();
  s.diagonal() += variance;

  Eigen::LLT<Eigen::MatrixXd> llt(s);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("innovation covariance is not positive definite");
  }

  Update out;
  out.innovation = measurement - h * predicted_state;
  // K^T = S^-1 H P since P and S are symmetric.
  out.gain = llt.solve(hp).transpose();
  out.state = predicted_state + out.gain * out.innovation;
  out.covariance = symmetrized(predicted_covariance - out.gain * hp);
  return out;
}

Eigen::MatrixXd innovation_covariance_estimate(std::span<const Eigen::VectorXd> window) {
  if (window.empty()) throw std::invalid_argument("innovation window is empty");
  const auto n = window.front().size();
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : window) c.noalias() += e * e.transpose();
  return c / static_cast<double>(window.size());
}

InnovationWindow::InnovationWindow(int capacity) : capacity_(capacity) {
  if (capacity < 1) throw std::invalid_argument("innovation window must hold at least one step");
}

void InnovationWindow::push(Eigen::VectorXd innovation) {
  entries_.push_back(std::move(innovation));
  if (static_cast<int>(entries_.size()) > capacity_) entries_.pop_front();
}

Eigen::MatrixXd InnovationWindow::covariance() const {
  std::vector<Eigen::VectorXd> copy(entries_.begin(), entries_.end());
  return innovation_covariance_estimate(copy);
}

Eigen::VectorXd compute_scalar(const Eigen::MatrixXd& innovation_covariance, const Eigen::MatrixXd& h,
                               const Eigen::MatrixXd& predicted_covariance,
                               const Eigen::VectorXd& variance, double mu_floor,
                               std::optional<double> mu_ceiling) {
  const Eigen::MatrixXd excess =
      innovation_covariance - h * predicted_covariance * h.transpose();
  // R is diagonal, so (excess R^-1)_ii = excess_ii / R_ii.
  Eigen::VectorXd mu = excess.diagonal().cwiseQuotient(variance);
  for (Eigen::Index i = 0; i < mu.size(); ++i) {
    mu(i) = std::max(mu(i), mu_floor);
    if (mu_ceiling) mu(i) = std::min(mu(i), *mu_ceiling);
  }
  return mu;
}

EstimationResult run_filter(const TransientModel& model, const GasNetwork& net,
                            const MeasurementSeries& measurements, const EstimatorConfig& config) {
  const int dim = model.index().dim();
  const int channels = static_cast<int>(measurements.channels.size());
  config.validate(dim, channels);
  if (std::abs(measurements.dt - model.dt()) > 1e-12 * model.dt()) {
    throw std::invalid_argument("measurement and model time steps differ");
  }
  if (static_cast<int>(measurements.loads.size()) != measurements.steps() + 1) {
    throw std::invalid_argument("measurement series needs loads for t = 0..T");
  }

  const Eigen::MatrixXd h = measurement_matrix(net, model.index());
  if (h.rows() != channels) throw std::invalid_argument("channel count does not match the network");

  EstimationResult result;
  result.variant = config.variant;
  result.initial_state = fixed_point(model, measurements.loads.front());

  Eigen::VectorXd x = result.initial_state;
  Eigen::MatrixXd p = config.initial_covariance;
  InnovationWindow window(config.window);
  const Eigen::VectorXd unit = Eigen::VectorXd::Ones(channels);

  result.steps.reserve(measurements.steps());
  for (int k = 0; k < measurements.steps(); ++k) {
    auto pred = predict(x, p, model.transition(), model.input(measurements.loads[k + 1]),
                        config.process_noise);
    const Eigen::VectorXd& z = measurements.measured[k];

    EstimationStep step;
    step.innovation = z - h * pred.state;
    step.innovation_variance = (h * pred.covariance * h.transpose()).diagonal() + config.measurement_variance;

    Eigen::VectorXd variance = config.measurement_variance;
    if (config.variant == Variant::kRobust) {
      window.push(step.innovation);
      step.scalar = compute_scalar(window.covariance(), h, pred.covariance,
                                   config.measurement_variance, config.mu_floor, config.mu_ceiling);
      variance = step.scalar.cwiseProduct(config.measurement_variance);
    } else {
      step.scalar = unit;
    }

    auto upd = kf_update(pred.state, pred.covariance, z, h, variance);
    x = std::move(upd.state);
    p = std::move(upd.covariance);
    if (!(p.diagonal().array() > 0.0).all() || !x.allFinite()) {
      throw NumericalError(fmt::format("filter diverged at step {}", k + 1));
    }

    step.state = x;
    step.covariance_diagonal = p.diagonal();
    step.estimate = h * x;
    result.steps.push_back(std::move(step));
  }
  return result;
}

}  // namespace gaspipe
