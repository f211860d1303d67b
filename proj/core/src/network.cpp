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

#include "gaspipe/network.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>

#include "gaspipe/errors.hpp"
#include "text_format.hpp"

namespace gaspipe {

namespace detail {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace detail

std::string_view to_string(NodeKind kind) {
  return kind == NodeKind::kSource ? "source" : "sink";
}

double Pipeline::cross_section_area() const {
  return std::numbers::pi * diameter_m * diameter_m / 4.0;
}

namespace {


class DisjointSet {
 public:
  explicit DisjointSet(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(int a, int b) { parent_[find(a)] = find(b); }

 private:
  std::vector<int> parent_;
};

}  // namespace

GasNetwork::GasNetwork(std::vector<Node> nodes, std::vector<Pipeline> pipelines,
                       NetworkParams params)
    : nodes_(std::move(nodes)), pipelines_(std::move(pipelines)), params_(params) {
  if (!(params_.sound_speed > 0.0)) throw ValidationError("sound speed must be positive");
  if (!(params_.friction_factor > 0.0)) throw ValidationError("friction factor must be positive");
  if (nodes_.empty()) throw ValidationError("network has no nodes");

  std::sort(nodes_.begin(), nodes_.end(), [](const Node& a, const Node& b) { return a.id < b.id; });
  for (std::size_t k = 0; k < nodes_.size(); ++k) {
    const Node& n = nodes_[k];
    if (k > 0 && nodes_[k - 1].id == n.id) {
      throw ValidationError(fmt::format("duplicate node id {}", n.id));
    }
    if (n.id != static_cast<int>(k) + 1) {
      throw ValidationError(fmt::format("node ids must be exactly 1..{} (found {})",
                                        nodes_.size(), n.id));
    }
    if (n.is_source()) {
      if (!n.source_pressure_bar || !(*n.source_pressure_bar > 0.0)) {
        throw ValidationError(fmt::format("source node {} needs a positive pressure", n.id));
      }
      ++n_source_;
    } else if (n.source_pressure_bar) {
      throw ValidationError(fmt::format("sink node {} cannot carry a source pressure", n.id));
    }
  }
  if (n_source_ == 0) throw ValidationError("network has no source node");

  const int n = node_count();
  DisjointSet components(n);
  for (const Pipeline& p : pipelines_) {
    if (p.from < 1 || p.from > n || p.to < 1 || p.to > n) {
      throw ValidationError(fmt::format("pipeline ({},{}) references an unknown node", p.from, p.to));
    }
    if (p.from >= p.to) {
      throw ValidationError(
          fmt::format("pipeline ({},{}) must be oriented from the smaller to the larger node id",
                      p.from, p.to));
    }
    if (!(p.length_m > 0.0) || !(p.diameter_m > 0.0) || !(p.friction_factor > 0.0)) {
      throw ValidationError(
          fmt::format("pipeline ({},{}) has a nonpositive length, diameter or friction factor",
                      p.from, p.to));
    }
    components.unite(p.from - 1, p.to - 1);
  }
  for (int k = 1; k < n; ++k) {
    if (components.find(k) != components.find(0)) {
      throw ValidationError(fmt::format("network is disconnected: node {} is not reachable from node 1",
                                        k + 1));
    }
  }
}

const Node& GasNetwork::node(int id) const {
  if (id < 1 || id > node_count()) throw std::out_of_range(fmt::format("no node {}", id));
  return nodes_[id - 1];
}

double GasNetwork::pressure_to_density(double pressure_bar) const {
  return pressure_bar * kPascalPerBar / sound_speed_squared();
}

double GasNetwork::density_to_pressure(double density) const {
  return density * sound_speed_squared() / kPascalPerBar;
}

double GasNetwork::source_density(int id) const {
  const Node& n = node(id);
  if (!n.is_source()) throw std::invalid_argument(fmt::format("node {} is not a source", id));
  return pressure_to_density(*n.source_pressure_bar);
}

GasNetwork parse_network(std::string_view text) {
  NetworkParams params;
  std::vector<Node> nodes;
  struct RawPipe {
    Pipeline pipe;
    bool explicit_friction;
  };
  std::vector<RawPipe> raw_pipes;

  for (const auto& line : detail::tokenize(text)) {
    const auto& tok = line.tokens;
    if (line.section == "params") {
      if (tok.size() != 2) throw ParseError(line.number, "expected 'key value'");
      double value = detail::to_double(tok[1], line.number);
      if (tok[0] == "c_m_per_s") {
        params.sound_speed = value;
      } else if (tok[0] == "friction_factor") {
        params.friction_factor = value;
      } else {
        throw ParseError(line.number, "unknown parameter '" + std::string(tok[0]) + "'");
      }
    } else if (line.section == "nodes") {
      if (tok.size() < 2 || tok.size() > 3) {
        throw ParseError(line.number, "expected 'id kind [pressure_bar]'");
      }
      Node node;
      node.id = static_cast<int>(detail::to_integer(tok[0], line.number));
      if (tok[1] == "source") {
        node.kind = NodeKind::kSource;
        if (tok.size() != 3) throw ParseError(line.number, "source node needs a pressure in bar");
        node.source_pressure_bar = detail::to_double(tok[2], line.number);
      } else if (tok[1] == "sink") {
        node.kind = NodeKind::kSink;
        if (tok.size() != 2) throw ParseError(line.number, "sink node takes no pressure");
      } else {
        throw ParseError(line.number, "node kind must be 'source' or 'sink'");
      }
      nodes.push_back(node);
    } else if (line.section == "pipelines") {
      if (tok.size() < 4 || tok.size() > 5) {
        throw ParseError(line.number, "expected 'from to length_km diameter_m [friction]'");
      }
      RawPipe raw{};
      raw.pipe.from = static_cast<int>(detail::to_integer(tok[0], line.number));
      raw.pipe.to = static_cast<int>(detail::to_integer(tok[1], line.number));
      raw.pipe.length_m = detail::to_double_scaled(tok[2], line.number, 3);
      raw.pipe.diameter_m = detail::to_double(tok[3], line.number);
      raw.explicit_friction = tok.size() == 5;
      if (raw.explicit_friction) raw.pipe.friction_factor = detail::to_double(tok[4], line.number);
      raw_pipes.push_back(raw);
    } else if (line.section.empty()) {
      throw ParseError(line.number, "content before the first section header");
    } else {
      throw ParseError(line.number, "unknown section [" + line.section + "]");
    }
  }

  std::vector<Pipeline> pipes;
  pipes.reserve(raw_pipes.size());
  for (auto& raw : raw_pipes) {
    if (!raw.explicit_friction) raw.pipe.friction_factor = params.friction_factor;
    pipes.push_back(raw.pipe);
  }
  return GasNetwork(std::move(nodes), std::move(pipes), params);
}

GasNetwork load_network(const std::string& path) {
  return parse_network(detail::read_file(path));
}

std::string serialize_network(const GasNetwork& net) {
  std::string out = "[params]\n";
  out += fmt::format("c_m_per_s {}\n", net.params().sound_speed);
  out += fmt::format("friction_factor {}\n", net.params().friction_factor);
  out += "\n[nodes]\n";
  for (const Node& n : net.nodes()) {
    if (n.is_source()) {
      out += fmt::format("{} source {}\n", n.id, *n.source_pressure_bar);
    } else {
      out += fmt::format("{} sink\n", n.id);
    }
  }
  out += "\n[pipelines]\n";
  for (const Pipeline& p : net.pipelines()) {
    out += fmt::format("{} {} {} {}", p.from, p.to, detail::format_scaled(p.length_m, -3), p.diameter_m);
    if (p.friction_factor != net.params().friction_factor) out += fmt::format(" {}", p.friction_factor);
    out += '\n';
  }
  return out;
}

GasNetwork builtin_benchmark() {
  struct Row {
    int from, to;
    double length_km, diameter_m;
  };
  // Pipes in table order (read column by column).
  static constexpr Row kRows[] = {
      {1, 3, 5, 0.6},   {3, 4, 3, 0.6},   {4, 5, 4, 0.5},    {5, 6, 6, 0.5},   {6, 7, 7, 0.5},
      {2, 7, 2, 0.5},   {3, 8, 3, 0.4},   {8, 9, 5, 0.2},    {8, 10, 7, 0.2},  {9, 11, 5, 0.4},
      {4, 12, 4, 0.4},  {12, 13, 8, 0.4}, {13, 14, 10, 0.4}, {14, 15, 9, 0.2}, {15, 16, 10, 0.2},
      {14, 17, 4, 0.2}, {5, 18, 10, 0.4}, {18, 20, 3, 0.2},  {20, 21, 7, 0.2}, {18, 19, 2, 0.2},
      {6, 22, 10, 0.4}, {22, 23, 6, 0.2}, {23, 24, 7, 0.2},  {23, 25, 4, 0.2}, {25, 26, 9, 0.2},
      {26, 27, 4, 0.2}, {7, 28, 2, 0.2},  {28, 29, 7, 0.2},  {28, 30, 5, 0.2},
  };

  NetworkParams params{.sound_speed = 340.0, .friction_factor = 0.015};

  std::vector<Node> nodes;
  for (int id = 1; id <= 30; ++id) nodes.push_back({id, NodeKind::kSink, std::nullopt});
  nodes[0] = {1, NodeKind::kSource, 27.8};
  nodes[1] = {2, NodeKind::kSource, 28.5};

  std::vector<Pipeline> pipes;
  for (const Row& r : kRows) {
    pipes.push_back({r.from, r.to, r.length_km * 1000.0, r.diameter_m, params.friction_factor});
  }
  return GasNetwork(std::move(nodes), std::move(pipes), params);
}

}  // namespace gaspipe
