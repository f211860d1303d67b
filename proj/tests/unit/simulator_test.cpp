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

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "gaspipe/network.hpp"
#include "gaspipe/scenario.hpp"
#include "gaspipe/simulator.hpp"

namespace gaspipe {
namespace {

Scenario constant_loads(const Scenario& base) {
  Scenario s = base;
  for (auto& [node, p] : s.loads) p = LoadProfile{{0.0}, {p.values.front()}};
  return s;
}

struct Fixture {
  GasNetwork net = builtin_benchmark();
  Scenario scenario = bundled_scenario(Condition::kNormal);
  StudyModel study = build_study_model(net, scenario);
  Eigen::MatrixXd h = measurement_matrix(net, study.model.index());
};

TEST(Simulate, DayHas96Steps) {
  Fixture f;
  auto traj = simulate(f.study.model, f.net, f.scenario);
  EXPECT_EQ(traj.steps(), 96);
  EXPECT_EQ(traj.states.size(), 97u);
  EXPECT_EQ(traj.loads.size(), 97u);
}

TEST(Simulate, ConstantLoadsStayAtTheFixedPoint) {
  Fixture f;
  auto s = constant_loads(f.scenario);
  auto traj = simulate(f.study.model, f.net, s);
  const double scale = traj.states[0].cwiseAbs().maxCoeff();
  for (const auto& x : traj.states) EXPECT_LE((x - traj.states[0]).cwiseAbs().maxCoeff(), 1e-9 * scale);
  // The initial steady state is a fixed point of the same frozen model.
  EXPECT_LE((traj.states[0] - f.study.initial.state).cwiseAbs().maxCoeff(), 1e-6 * scale);
}

TEST(Simulate, SourceDensitiesArePinned) {
  Fixture f;
  auto traj = simulate(f.study.model, f.net, f.scenario);
  for (const auto& x : traj.states) {
    EXPECT_EQ(x(0), f.net.source_density(1));
    EXPECT_EQ(x(1), f.net.source_density(2));
  }
}

// The one-element box scheme keeps an undamped period-two mode, so a step
// rings instead of settling. Averaging consecutive states removes the ringing
// and the average approaches the frozen model's new fixed point.
TEST(Simulate, StepLoadIncreaseMovesTowardNewFixedPoint) {
  Fixture f;
  Scenario s = constant_loads(f.scenario);
  s.horizon_s = 900.0 * 2000;
  const double before = s.loads[22].values.front();
  s.loads[22] = LoadProfile{{0.0, 0.25}, {before, before * 1.5}};

  auto traj = simulate(f.study.model, f.net, s);
  const Eigen::VectorXd target = fixed_point(f.study.model, traj.loads.back());
  const int t = traj.steps();
  const Eigen::VectorXd avg = 0.5 * (traj.states[t] + traj.states[t - 1]);
  EXPECT_LE((avg.head(30) - target.head(30)).cwiseAbs().maxCoeff(), 1e-4 * target.head(30).maxCoeff());
  EXPECT_LT(target(21), traj.states[0](21));
  EXPECT_LT(avg(21), traj.states[0](21));
}

TEST(MeasurementMatrix, TwoNodeStructure) {
  GasNetwork net({{1, NodeKind::kSource, 27.8}, {2, NodeKind::kSink, std::nullopt}},
                 {{1, 2, 5000.0, 0.6, 0.015}}, {});
  auto h = measurement_matrix(net, StateIndex(net));
  ASSERT_EQ(h.rows(), 4);
  ASSERT_EQ(h.cols(), 4);
  EXPECT_TRUE(h.topLeftCorner(2, 2).isIdentity());
  EXPECT_EQ(h(2, 2), -1.0);  // source: minus the outflow
  EXPECT_EQ(h(3, 3), 1.0);   // sink: to-end inflow
}

TEST(MeasurementMatrix, BenchmarkIncidence) {
  Fixture f;
  ASSERT_EQ(f.h.rows(), 60);
  ASSERT_EQ(f.h.cols(), 88);
  const auto& idx = f.study.model.index();
  for (int node : {3, 4, 5, 6, 7, 8, 18, 23, 28}) {
    const auto row = f.h.row(30 + node - 1);
    std::set<int> expected;
    for (int p = 0; p < f.net.pipeline_count(); ++p) {
      const auto& pipe = f.net.pipelines()[p];
      if (pipe.to == node) {
        EXPECT_EQ(row(idx.flow_slot(p, PipeEnd::kTo)), 1.0);
        expected.insert(idx.flow_slot(p, PipeEnd::kTo));
      }
      if (pipe.from == node) {
        EXPECT_EQ(row(idx.flow_slot(p, PipeEnd::kFrom)), -1.0);
        expected.insert(idx.flow_slot(p, PipeEnd::kFrom));
      }
    }
    int nonzero = 0;
    for (int c = 0; c < 88; ++c) nonzero += row(c) != 0.0;
    EXPECT_EQ(nonzero, static_cast<int>(expected.size())) << "node " << node;
  }
}

TEST(MeasurementMatrix, JunctionChannelsAreZeroOnTruth) {
  Fixture f;
  auto traj = simulate(f.study.model, f.net, f.scenario);
  for (const auto& x : traj.states) {
    const Eigen::VectorXd z = f.h * x;
    for (int node : {3, 4, 5, 6, 7, 8, 18, 23, 28}) EXPECT_NEAR(z(30 + node - 1), 0.0, 1e-10);
  }
}

TEST(Synthesize, NoiselessLimit) {
  Fixture f;
  Scenario s = f.scenario;
  s.noise = {1e-300, 1e-300, 1e-300};
  auto traj = simulate(f.study.model, f.net, s);
  auto series = synthesize_measurements(traj, f.h, s, f.net);
  ASSERT_EQ(series.steps(), 96);
  for (int k = 0; k < 96; ++k) {
    EXPECT_LE((series.measured[k] - f.h * traj.states[k + 1]).cwiseAbs().maxCoeff(), 1e-200);
  }
  EXPECT_TRUE(series.corruption.empty());
}

TEST(Synthesize, ChannelMetadata) {
  Fixture f;
  auto traj = simulate(f.study.model, f.net, f.scenario);
  auto series = synthesize_measurements(traj, f.h, f.scenario, f.net);
  ASSERT_EQ(series.channels.size(), 60u);
  EXPECT_EQ(series.channels[0].name(), "p_node1");
  EXPECT_EQ(series.channels[59].name(), "m_node30");
  EXPECT_NEAR(series.channels[5].sigma, 0.01e5 / 115600.0, 1e-15);
  EXPECT_TRUE(series.channels[30 + 2].is_virtual);
  EXPECT_DOUBLE_EQ(series.channels[30 + 2].sigma, 0.001);
  double mean_abs = 0.0;
  for (const auto& z : series.truth) mean_abs += std::abs(z(30 + 8));
  EXPECT_NEAR(series.channels[30 + 8].sigma, 0.02 * mean_abs / 96.0, 1e-15);
  for (const auto& z : series.measured) EXPECT_EQ(z.size(), 60);
}

TEST(Synthesize, BundledBadDataIsApplied) {
  Fixture f;
  auto s = bundled_scenario(Condition::kBadData);
  auto traj = simulate(f.study.model, f.net, s);
  auto series = synthesize_measurements(traj, f.h, s, f.net);
  EXPECT_NEAR(f.net.density_to_pressure(series.measured[event_step(s, 5.0) - 1](29)), 12.0, 1e-12);
  EXPECT_NEAR(f.net.density_to_pressure(series.measured[event_step(s, 13.75) - 1](29)), 23.0, 1e-12);
  EXPECT_EQ(series.measured[event_step(s, 16.25) - 1](30 + 10), 1.7);
  ASSERT_EQ(series.corruption.size(), 13u);
  for (const auto& r : series.corruption) {
    EXPECT_EQ(r.kind, CorruptionRecord::Kind::kBadData);
    EXPECT_EQ(series.measured[r.step - 1](r.channel), r.corrupted);
  }
}

TEST(Synthesize, BundledBiasIsApplied) {
  Fixture f;
  auto clean = f.scenario;
  auto biased = bundled_scenario(Condition::kBias);
  auto traj = simulate(f.study.model, f.net, clean);
  auto a = synthesize_measurements(traj, f.h, clean, f.net);
  auto b = synthesize_measurements(traj, f.h, biased, f.net);
  const double dp = f.net.pressure_to_density(0.2) - f.net.pressure_to_density(0.0);
  for (int step = 1; step <= 96; ++step) {
    const double t_h = step * 0.25;
    const Eigen::VectorXd d = b.measured[step - 1] - a.measured[step - 1];
    for (int c = 0; c < 30; ++c) {
      EXPECT_NEAR(d(c), (t_h >= 10.0 && t_h <= 19.75) ? dp : 0.0, 1e-12);
    }
    EXPECT_NEAR(d(30 + 10), (t_h >= 5.0 && t_h <= 12.5) ? 0.1 : 0.0, 1e-12);  // load node 11
    EXPECT_NEAR(d(30 + 0), (t_h >= 5.0 && t_h <= 12.5) ? 0.1 : 0.0, 1e-12);   // source node 1
    EXPECT_EQ(d(30 + 2), 0.0);                                                // junction node 3
  }
}

TEST(Synthesize, Deterministic) {
  Fixture f;
  auto s = bundled_scenario(Condition::kBadData, 42);
  auto traj = simulate(f.study.model, f.net, s);
  auto a = synthesize_measurements(traj, f.h, s, f.net);
  auto b = synthesize_measurements(traj, f.h, s, f.net);
  for (int k = 0; k < 96; ++k) EXPECT_EQ(a.measured[k], b.measured[k]);
  s.seed = 43;
  auto c = synthesize_measurements(traj, f.h, s, f.net);
  EXPECT_NE(a.measured[0], c.measured[0]);
}

// Long constant-load run: sample moments of z - Hx per channel. A 3 sigma
// bound on 60 channels still trips by chance about once in twelve seeds.
TEST(Synthesize, NoiseStatistics) {
  Fixture f;
  Scenario s = constant_loads(f.scenario);
  s.seed = 1;
  s.horizon_s = 900.0 * 12000;
  auto traj = simulate(f.study.model, f.net, s);
  auto series = synthesize_measurements(traj, f.h, s, f.net);
  const int n = series.steps();
  for (std::size_t c = 0; c < series.channels.size(); ++c) {
    double sum = 0.0, sq = 0.0;
    for (int k = 0; k < n; ++k) {
      const double r = series.measured[k](c) - series.truth[k](c);
      sum += r;
      sq += r * r;
    }
    const double mean = sum / n;
    const double sd = std::sqrt(sq / n - mean * mean);
    const double sigma = series.channels[c].sigma;
    EXPECT_NEAR(sd, sigma, 0.05 * sigma) << series.channels[c].name();
    EXPECT_LE(std::abs(mean), 3.0 * sigma / std::sqrt(n)) << series.channels[c].name();
  }
}

// Restoring the logged clean values leaves Gaussian-consistent residuals.
TEST(Synthesize, CorruptionLogRestoresCleanSeries) {
  Fixture f;
  Scenario s = constant_loads(bundled_scenario(Condition::kBias));
  s.horizon_s = 900.0 * 12000;
  auto traj = simulate(f.study.model, f.net, s);
  auto series = synthesize_measurements(traj, f.h, s, f.net);
  EXPECT_FALSE(series.corruption.empty());
  for (auto it = series.corruption.rbegin(); it != series.corruption.rend(); ++it) {
    series.measured[it->step - 1](it->channel) = it->clean;
  }
  const int n = series.steps();
  for (int c : {5, 29, 30, 40}) {
    double sum = 0.0, sq = 0.0;
    for (int k = 0; k < n; ++k) {
      const double r = series.measured[k](c) - series.truth[k](c);
      sum += r;
      sq += r * r;
    }
    const double sigma = series.channels[c].sigma;
    EXPECT_NEAR(std::sqrt(sq / n), sigma, 0.05 * sigma);
    EXPECT_LE(std::abs(sum / n), 3.0 * sigma / std::sqrt(n));
  }
}

TEST(Synthesize, FileUnitsRoundTrip) {
  auto net = builtin_benchmark();
  EXPECT_NEAR(to_file_units(net, ChannelKind::kPressure, net.pressure_to_density(25.0)), 25.0, 1e-12);
  EXPECT_EQ(to_file_units(net, ChannelKind::kFlow, 1.25), 1.25);
  EXPECT_NEAR(from_file_units(net, ChannelKind::kPressure, 25.0), 25e5 / 115600.0, 1e-12);
}

}  // namespace
}  // namespace gaspipe
