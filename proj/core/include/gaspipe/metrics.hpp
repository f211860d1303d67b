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
#include <optional>
#include <vector>

#include "gaspipe/estimation.hpp"
#include "gaspipe/simulator.hpp"

namespace gaspipe {

struct ChannelReport {
  int channel = 0;  // index into the series' channels
  int node = 0;
  ChannelKind kind = ChannelKind::kPressure;
  bool is_virtual = false;
  /// rmse_est / rmse_meas; empty when the measurement error is identically zero.
  std::optional<double> epsilon;
  double rmse_est = 0.0;
  double rmse_meas = 0.0;
};

/// Ratio of the root-sum-square estimation error to the root-sum-square
/// measurement error, per channel. Source pressure channels are skipped.
std::vector<ChannelReport> filter_coefficient(const std::vector<Eigen::VectorXd>& estimated,
                                              const std::vector<Eigen::VectorXd>& measured,
                                              const std::vector<Eigen::VectorXd>& truth,
                                              const std::vector<Channel>& channels);

std::vector<Eigen::VectorXd> estimates_of(const EstimationResult& result);

struct Comparison {
  std::vector<int> channels;
  std::vector<double> difference;  // eps_b - eps_a
  double fraction_b_better = 0.0;    // eps_b < eps_a
  double fraction_b_not_worse = 0.0; // eps_b <= eps_a
};

/// Channels without an epsilon on either side are left out. Throws
/// std::invalid_argument if the reports cover different channels.
Comparison compare(const std::vector<ChannelReport>& a, const std::vector<ChannelReport>& b,
                   bool include_virtual = false);

/// Largest |estimate - truth| on `channel` over the listed 1-based steps.
double max_abs_error(const std::vector<Eigen::VectorXd>& estimated,
                     const std::vector<Eigen::VectorXd>& truth, int channel,
                     const std::vector<int>& steps);

/// Mean |estimate - truth| and RMS error over the given channels and steps.
struct ErrorSummary {
  double mean_abs = 0.0;
  double rms = 0.0;
};
ErrorSummary error_summary(const std::vector<Eigen::VectorXd>& estimated,
                           const std::vector<Eigen::VectorXd>& truth,
                           const std::vector<int>& channels, const std::vector<int>& steps);

}  // namespace gaspipe
