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
#include <numbers>
#include <random>
#include <set>

#include "gaspipe/errors.hpp"
#include "gaspipe/network.hpp"

namespace gaspipe {
namespace {

constexpr const char* kTwoNode = R"(
[nodes]
1 source 27.8
2 sink
[pipelines]
1 2 5 0.6
)";

const Pipeline& find_pipe(const GasNetwork& net, int from, int to) {
  for (const auto& p : net.pipelines()) {
    if (p.from == from && p.to == to) return p;
  }
  throw std::out_of_range("pipe not found");
}

TEST(ParseNetwork, MinimalNetwork) {
  auto net = parse_network(kTwoNode);
  EXPECT_EQ(net.node_count(), 2);
  EXPECT_EQ(net.pipeline_count(), 1);
  EXPECT_EQ(net.source_count(), 1);
  EXPECT_EQ(net.sink_count(), 1);
  EXPECT_DOUBLE_EQ(net.pipelines()[0].length_m, 5000.0);
  EXPECT_DOUBLE_EQ(net.pipelines()[0].friction_factor, 0.015);
  EXPECT_DOUBLE_EQ(net.sound_speed(), 340.0);
}

TEST(ParseNetwork, RejectsReversedOrientation) {
  EXPECT_THROW(parse_network(R"(
[nodes]
1 source 27.8
2 sink
3 sink
4 sink
5 sink
6 sink
7 sink
[pipelines]
1 2 5 0.6
2 3 5 0.6
3 4 5 0.6
4 5 5 0.6
5 6 5 0.6
7 2 5 0.6
)"),
               ValidationError);
}

TEST(ParseNetwork, ReportsLineOfSyntaxError) {
  try {
    parse_network("[nodes]\n1 source 27.8\n2 sink\n[pipelines]\n1 2 five 0.6\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 5u);
  }
}

TEST(ParseNetwork, RejectsInvalidNetworks) {
  // Gap in ids.
  EXPECT_THROW(parse_network("[nodes]\n1 source 27.8\n3 sink\n[pipelines]\n1 3 5 0.6\n"), ValidationError);
  // No source.
  EXPECT_THROW(parse_network("[nodes]\n1 sink\n2 sink\n[pipelines]\n1 2 5 0.6\n"), ValidationError);
  // Disconnected sink.
  EXPECT_THROW(parse_network("[nodes]\n1 source 27.8\n2 sink\n3 sink\n[pipelines]\n1 2 5 0.6\n"),
               ValidationError);
  // Sink with a pressure, source without one.
  EXPECT_THROW(parse_network("[nodes]\n1 source 27.8\n2 sink 20\n[pipelines]\n1 2 5 0.6\n"), ParseError);
  EXPECT_THROW(parse_network("[nodes]\n1 source\n2 sink\n[pipelines]\n1 2 5 0.6\n"), ParseError);
  EXPECT_THROW(GasNetwork({{1, NodeKind::kSource, std::nullopt}, {2, NodeKind::kSink, std::nullopt}},
                          {{1, 2, 5000.0, 0.6, 0.015}}, {}),
               ValidationError);
  // Nonpositive geometry.
  EXPECT_THROW(parse_network("[nodes]\n1 source 27.8\n2 sink\n[pipelines]\n1 2 0 0.6\n"), ValidationError);
  EXPECT_THROW(parse_network("[nodes]\n1 source 27.8\n2 sink\n[pipelines]\n1 2 5 -0.6\n"), ValidationError);
}

TEST(BuiltinBenchmark, Structure) {
  auto net = builtin_benchmark();
  EXPECT_EQ(net.node_count(), 30);
  EXPECT_EQ(net.pipeline_count(), 29);
  EXPECT_EQ(net.source_count(), 2);
  EXPECT_TRUE(net.node(1).is_source());
  EXPECT_TRUE(net.node(2).is_source());
  EXPECT_DOUBLE_EQ(*net.node(1).source_pressure_bar, 27.8);
  EXPECT_DOUBLE_EQ(*net.node(2).source_pressure_bar, 28.5);

  const std::set<double> allowed{0.2, 0.4, 0.5, 0.6};
  for (const auto& p : net.pipelines()) {
    EXPECT_TRUE(allowed.count(p.diameter_m)) << p.from << "-" << p.to;
    EXPECT_LT(p.from, p.to);
  }
  EXPECT_DOUBLE_EQ(find_pipe(net, 1, 3).length_m, 5000.0);
  EXPECT_DOUBLE_EQ(find_pipe(net, 1, 3).diameter_m, 0.6);
  EXPECT_DOUBLE_EQ(find_pipe(net, 28, 30).length_m, 5000.0);
  EXPECT_DOUBLE_EQ(find_pipe(net, 28, 30).diameter_m, 0.2);
}

TEST(BuiltinBenchmark, EverySinkIsAnEndpoint) {
  auto net = builtin_benchmark();
  std::set<int> endpoints;
  for (const auto& p : net.pipelines()) {
    endpoints.insert(p.from);
    endpoints.insert(p.to);
  }
  for (const auto& n : net.nodes()) {
    if (!n.is_source()) EXPECT_TRUE(endpoints.count(n.id)) << n.id;
  }
}

TEST(BuiltinBenchmark, RoundTrip) {
  auto net = builtin_benchmark();
  EXPECT_EQ(parse_network(serialize_network(net)), net);
}

TEST(Pipeline, CrossSectionArea) {
  for (double d : {0.2, 0.4, 0.5, 0.6, 1.234}) {
    Pipeline p{1, 2, 1000.0, d, 0.015};
    const double expected = std::numbers::pi * d * d / 4.0;
    EXPECT_NEAR(p.cross_section_area(), expected, 1e-12 * expected);
  }
}

TEST(GasNetwork, PressureDensityConversion) {
  auto net = builtin_benchmark();
  EXPECT_NEAR(net.source_density(1), 27.8e5 / 115600.0, 1e-12);
  EXPECT_NEAR(net.density_to_pressure(net.pressure_to_density(23.4)), 23.4, 1e-12);
}

// Random spanning trees with random sources round-trip through the text format.
TEST(GasNetwork, RandomRoundTrip) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = std::uniform_int_distribution<int>(2, 25)(rng);
    std::uniform_real_distribution<double> length(0.1, 80.0), pressure(5.0, 70.0), diameter(0.05, 1.5);
    std::vector<Node> nodes;
    for (int id = 1; id <= n; ++id) {
      const bool source = id == 1 || std::bernoulli_distribution(0.15)(rng);
      nodes.push_back({id, source ? NodeKind::kSource : NodeKind::kSink,
                       source ? std::optional<double>(pressure(rng)) : std::nullopt});
    }
    std::vector<Pipeline> pipes;
    for (int id = 2; id <= n; ++id) {
      const int parent = std::uniform_int_distribution<int>(1, id - 1)(rng);
      pipes.push_back({parent, id, 1000.0 * length(rng), diameter(rng), 0.01 + 0.01 * trial / 50.0});
    }
    GasNetwork net(nodes, pipes, {300.0 + trial, 0.015});
    EXPECT_EQ(parse_network(serialize_network(net)), net) << "trial " << trial;
  }
}

}  // namespace
}  // namespace gaspipe
