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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace gaspipe {

inline constexpr double kPascalPerBar = 1.0e5;

enum class NodeKind { kSource, kSink };

std::string_view to_string(NodeKind kind);

struct Node {
  int id = 0;
  NodeKind kind = NodeKind::kSink;
  /// Fixed supply pressure, sources only.
  std::optional<double> source_pressure_bar;

  bool is_source() const { return kind == NodeKind::kSource; }

  friend bool operator==(const Node&, const Node&) = default;
};

/// One pipe, oriented from the smaller node id to the larger one.
struct Pipeline {
  int from = 0;
  int to = 0;
  double length_m = 0.0;
  double diameter_m = 0.0;
  double friction_factor = 0.0;

  double cross_section_area() const;

  friend bool operator==(const Pipeline&, const Pipeline&) = default;
};

struct NetworkParams {
  double sound_speed = 340.0;  // m/s, p = c^2 rho
  double friction_factor = 0.015;

  friend bool operator==(const NetworkParams&, const NetworkParams&) = default;
};

/// Validated pipeline network. Immutable once constructed.
///
/// Node ids are exactly 1..n_nodes and `nodes()` is sorted by id, so node `id`
/// lives at `nodes()[id - 1]`. Pipelines keep their input order; that order
/// is the pipeline index used by the state layout.
class GasNetwork {
 public:
  /// Throws ValidationError naming the violated invariant.
  GasNetwork(std::vector<Node> nodes, std::vector<Pipeline> pipelines, NetworkParams params);

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Pipeline>& pipelines() const { return pipelines_; }
  const NetworkParams& params() const { return params_; }

  const Node& node(int id) const;
  int node_count() const { return static_cast<int>(nodes_.size()); }
  int pipeline_count() const { return static_cast<int>(pipelines_.size()); }
  int source_count() const { return n_source_; }
  int sink_count() const { return node_count() - n_source_; }

  double sound_speed() const { return params_.sound_speed; }
  double sound_speed_squared() const { return params_.sound_speed * params_.sound_speed; }

  /// rho = p / c^2 with p in pascals.
  double pressure_to_density(double pressure_bar) const;
  double density_to_pressure(double density) const;

  /// Gas density pinned at a source node, kg/m^3.
  double source_density(int id) const;

  friend bool operator==(const GasNetwork&, const GasNetwork&) = default;

 private:
  std::vector<Node> nodes_;
  std::vector<Pipeline> pipelines_;
  NetworkParams params_;
  int n_source_ = 0;
};

/// Reads the `[params]` / `[nodes]` / `[pipelines]` text format.
/// Throws ParseError (with line) on syntax problems, ValidationError otherwise.
GasNetwork parse_network(std::string_view text);
GasNetwork load_network(const std::string& path);

/// Inverse of parse_network.
std::string serialize_network(const GasNetwork& net);

/// The 30-node, 29-pipeline test system with sources at nodes 1 and 2.
GasNetwork builtin_benchmark();

}  // namespace gaspipe
