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

#include "gaspipe/metrics.hpp"

#include <fmt/format.h>

#include <cmath>
#include <stdexcept>

namespace gaspipe {

std::vector<ChannelReport> filter_coefficient(const std::vector<Eigen::VectorXd>& estimated,
                                              const std::vector<Eigen::VectorXd>& measured,
                                              const std::vector<Eigen::VectorXd>& truth,
                                              const std::vector<Channel>& channels) {
  if (estimated.size() != truth.size() || measured.size() != truth.size()) {
    throw std::invalid_argument("estimated, measured and true series differ in length");
  }
  std::vector<ChannelReport> out;
  for (std::size_t c = 0; c < channels.size(); ++c) {
    const Channel& ch = channels[c];
    if (ch.kind == ChannelKind::kPressure && ch.source) continue;
    const auto i = static_cast<Eigen::Index>(c);
    double est = 0.0;
    double meas = 0.0;
    for (std::size_t k = 0; k < truth.size(); ++k) {
      est += std::pow(estimated[k](i) - truth[k](i), 2);
      meas += std::pow(measured[k](i) - truth[k](i), 2);
    }
    const double n = static_cast<double>(std::max<std::size_t>(truth.size(), 1));
    ChannelReport r{static_cast<int>(c), ch.node, ch.kind, ch.is_virtual, std::nullopt,
                    std::sqrt(est / n), std::sqrt(meas / n)};
    if (meas > 0.0) r.epsilon = std::sqrt(est) / std::sqrt(meas);
    out.push_back(r);
  }
  return out;
}

std::vector<Eigen::VectorXd> estimates_of(const EstimationResult& result) {
  std::vector<Eigen::VectorXd> out;
  out.reserve(result.steps.size());
  for (const auto& s : result.steps) out.push_back(s.estimate);
  return out;
}

Comparison compare(const std::vector<ChannelReport>& a, const std::vector<ChannelReport>& b,
                   bool include_virtual) {
  if (a.size() != b.size()) throw std::invalid_argument("reports cover different channels");
  Comparison out;
  int better = 0;
  int not_worse = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k].channel != b[k].channel) {
      throw std::invalid_argument(fmt::format("channel mismatch at row {}", k));
    }
    if (!a[k].epsilon || !b[k].epsilon) continue;
    if (a[k].is_virtual && !include_virtual) continue;
    const double d = *b[k].epsilon - *a[k].epsilon;
    out.channels.push_back(a[k].channel);
    out.difference.push_back(d);
    if (d < 0.0) ++better;
    if (d <= 0.0) ++not_worse;
  }
  if (!out.channels.empty()) {
    const double n = static_cast<double>(out.channels.size());
    out.fraction_b_better = better / n;
    out.fraction_b_not_worse = not_worse / n;
  }
  return out;
}

double max_abs_error(const std::vector<Eigen::VectorXd>& estimated,
                     const std::vector<Eigen::VectorXd>& truth, int channel,
                     const std::vector<int>& steps) {
  double worst = 0.0;
  for (int step : steps) {
    worst = std::max(worst, std::abs(estimated.at(step - 1)(channel) - truth.at(step - 1)(channel)));
  }
  return worst;
}

ErrorSummary error_summary(const std::vector<Eigen::VectorXd>& estimated,
                           const std::vector<Eigen::VectorXd>& truth,
                           const std::vector<int>& channels, const std::vector<int>& steps) {
  ErrorSummary out;
  std::size_t count = 0;
  for (int step : steps) {
    for (int c : channels) {
      const double e = std::abs(estimated.at(step - 1)(c) - truth.at(step - 1)(c));
      out.mean_abs += e;
      out.rms += e * e;
      ++count;
    }
  }
  if (count > 0) {
    out.mean_abs /= static_cast<double>(count);
    out.rms = std::sqrt(out.rms / static_cast<double>(count));
  }
  return out;
}

}  // namespace gaspipe
