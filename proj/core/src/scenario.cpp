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

#include "gaspipe/scenario.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "gaspipe/errors.hpp"
#include "text_format.hpp"

namespace gaspipe {

std::string_view to_string(ChannelKind kind) {
  return kind == ChannelKind::kPressure ? "pressure" : "flow";
}

std::string_view to_string(Condition condition) {
  switch (condition) {
    case Condition::kNormal:
      return "normal";
    case Condition::kBadData:
      return "bad_data";
    case Condition::kBias:
      return "bias";
  }
  return "unknown";
}

double LoadProfile::at_hours(double t_h) const {
  if (values.empty()) return 0.0;
  if (t_h <= times_h.front()) return values.front();
  if (t_h >= times_h.back()) return values.back();
  auto hi = std::upper_bound(times_h.begin(), times_h.end(), t_h);
  const auto k = static_cast<std::size_t>(hi - times_h.begin());
  const double w = (t_h - times_h[k - 1]) / (times_h[k] - times_h[k - 1]);
  return values[k - 1] + w * (values[k] - values[k - 1]);
}

bool LoadProfile::is_zero() const {
  return std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; });
}

int Scenario::steps() const {
  if (!(dt_s > 0.0) || !(horizon_s > 0.0)) {
    throw ValidationError("time step and horizon must be positive");
  }
  const double ratio = horizon_s / dt_s;
  const double rounded = std::round(ratio);
  if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
    throw ValidationError(
        fmt::format("horizon {} s is not a whole number of {} s steps", horizon_s, dt_s));
  }
  return static_cast<int>(rounded);
}

Eigen::VectorXd Scenario::loads_at_step(int k, int node_count) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(node_count);
  const double t_h = k * dt_s / 3600.0;
  for (const auto& [node, profile] : loads) {
    if (node >= 1 && node <= node_count) out(node - 1) = profile.at_hours(t_h);
  }
  return out;
}

bool is_junction(const Scenario& scenario, const Node& node) {
  if (node.is_source()) return false;
  auto it = scenario.loads.find(node.id);
  return it == scenario.loads.end() || it->second.is_zero();
}

int event_step(const Scenario& scenario, double time_h) {
  const double ratio = time_h * 3600.0 / scenario.dt_s;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) > 1e-9 * std::max(1.0, std::abs(ratio))) {
    throw ValidationError(fmt::format("event time {} h is not on the {} s grid", time_h,
                                      scenario.dt_s));
  }
  const int step = static_cast<int>(rounded);
  if (step < 1 || step > scenario.steps()) {
    throw ValidationError(fmt::format("event time {} h is outside the measured steps", time_h));
  }
  return step;
}

std::vector<int> resolve_node_set(std::string_view spec, const GasNetwork& net,
                                  const Scenario& scenario) {
  std::set<int> ids;
  while (!spec.empty()) {
    auto comma = spec.find(',');
    std::string_view item = spec.substr(0, comma);
    spec = comma == std::string_view::npos ? std::string_view{} : spec.substr(comma + 1);
    if (item.empty()) continue;

    auto add_if = [&](auto pred) {
      for (const Node& n : net.nodes()) {
        if (pred(n)) ids.insert(n.id);
      }
    };
    if (item == "all") {
      add_if([](const Node&) { return true; });
    } else if (item == "sources") {
      add_if([](const Node& n) { return n.is_source(); });
    } else if (item == "sinks") {
      add_if([](const Node& n) { return !n.is_source(); });
    } else if (item == "junctions") {
      add_if([&](const Node& n) { return is_junction(scenario, n); });
    } else if (item == "loads") {
      add_if([&](const Node& n) { return !n.is_source() && !is_junction(scenario, n); });
    } else if (item == "metered") {
      add_if([&](const Node& n) { return !is_junction(scenario, n); });
    } else {
      auto dash = item.find('-');
      try {
        const int lo = static_cast<int>(detail::to_integer(item.substr(0, dash), 0));
        const int hi = dash == std::string_view::npos
                           ? lo
                           : static_cast<int>(detail::to_integer(item.substr(dash + 1), 0));
        if (lo > hi) throw ValidationError(fmt::format("bad node range '{}'", item));
        for (int id = lo; id <= hi; ++id) {
          if (id < 1 || id > net.node_count()) {
            throw ValidationError(fmt::format("node set references unknown node {}", id));
          }
          ids.insert(id);
        }
      } catch (const ParseError&) {
        throw ValidationError(fmt::format("bad node set item '{}'", item));
      }
    }
  }
  if (ids.empty()) throw ValidationError("node set is empty");
  return {ids.begin(), ids.end()};
}

void validate_scenario(const Scenario& scenario, const GasNetwork& net) {
  scenario.steps();
  const auto& noise = scenario.noise;
  if (!(noise.pressure_sigma_bar > 0.0) || !(noise.flow_sigma_relative > 0.0) ||
      !(noise.virtual_sigma > 0.0)) {
    throw ValidationError("noise standard deviations must be positive");
  }
  for (const auto& [node, profile] : scenario.loads) {
    if (node < 1 || node > net.node_count()) {
      throw ValidationError(fmt::format("load profile for unknown node {}", node));
    }
    if (net.node(node).is_source()) {
      throw ValidationError(fmt::format("source node {} cannot have a load profile", node));
    }
    for (double v : profile.values) {
      if (!std::isfinite(v)) throw ValidationError(fmt::format("node {} has a non-finite load", node));
    }
  }
  for (const Node& n : net.nodes()) {
    if (!n.is_source() && !scenario.loads.contains(n.id)) {
      throw ValidationError(fmt::format("sink node {} has no load profile", n.id));
    }
  }
  for (const auto& e : scenario.bad_data) {
    if (e.node < 1 || e.node > net.node_count()) {
      throw ValidationError(fmt::format("bad-data event references unknown node {}", e.node));
    }
    event_step(scenario, e.time_h);
  }
  for (const auto& e : scenario.bias) {
    resolve_node_set(e.node_set, net, scenario);
    if (e.end_h < e.start_h) throw ValidationError("bias interval ends before it starts");
    event_step(scenario, e.start_h);
    event_step(scenario, e.end_h);
  }
}

namespace {

ChannelKind parse_kind(std::string_view token, std::size_t line) {
  if (token == "pressure" || token == "p") return ChannelKind::kPressure;
  if (token == "flow" || token == "m") return ChannelKind::kFlow;
  throw ParseError(line, "channel kind must be 'pressure' or 'flow'");
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  Scenario s;
  bool have_time = false;
  for (const auto& line : detail::tokenize(text)) {
    const auto& tok = line.tokens;
    const auto n = line.number;
    if (line.section == "time") {
      if (tok.size() != 3) throw ParseError(n, "expected 'dt_s horizon_s seed'");
      s.dt_s = detail::to_double(tok[0], n);
      s.horizon_s = detail::to_double(tok[1], n);
      s.seed = detail::to_u64(tok[2], n);
      have_time = true;
    } else if (line.section == "loads") {
      if (tok.size() < 3 || tok.size() % 2 == 0) {
        throw ParseError(n, "expected 'node t0 v0 [t1 v1 ...]'");
      }
      const int node = static_cast<int>(detail::to_integer(tok[0], n));
      LoadProfile profile;
      for (std::size_t k = 1; k < tok.size(); k += 2) {
        profile.times_h.push_back(detail::to_double(tok[k], n));
        profile.values.push_back(detail::to_double(tok[k + 1], n));
        const auto m = profile.times_h.size();
        if (m > 1 && !(profile.times_h[m - 1] > profile.times_h[m - 2])) {
          throw ParseError(n, "load knot times must increase");
        }
      }
      if (!s.loads.emplace(node, std::move(profile)).second) {
        throw ParseError(n, fmt::format("duplicate load profile for node {}", node));
      }
    } else if (line.section == "noise") {
      if (tok.size() != 3) throw ParseError(n, "expected 'pressure_sigma_bar flow_sigma_rel virtual_sigma'");
      s.noise.pressure_sigma_bar = detail::to_double(tok[0], n);
      s.noise.flow_sigma_relative = detail::to_double(tok[1], n);
      s.noise.virtual_sigma = detail::to_double(tok[2], n);
    } else if (line.section == "bad_data") {
      if (tok.size() != 4) throw ParseError(n, "expected 'channel_kind node t_hours value'");
      s.bad_data.push_back({parse_kind(tok[0], n), static_cast<int>(detail::to_integer(tok[1], n)),
                            detail::to_double(tok[2], n), detail::to_double(tok[3], n)});
    } else if (line.section == "bias") {
      if (tok.size() != 5) throw ParseError(n, "expected 'channel_kind node_set t_start t_end offset'");
      s.bias.push_back({parse_kind(tok[0], n), std::string(tok[1]), detail::to_double(tok[2], n),
                        detail::to_double(tok[3], n), detail::to_double(tok[4], n)});
    } else if (line.section.empty()) {
      throw ParseError(n, "content before the first section header");
    } else {
      throw ParseError(n, "unknown section [" + line.section + "]");
    }
  }
  if (!have_time) throw ParseError(0, "missing [time] section");
  s.steps();
  return s;
}

Scenario load_scenario(const std::string& path) {
  return parse_scenario(detail::read_file(path));
}

std::string serialize_scenario(const Scenario& s) {
  std::string out = "[time]\n";
  out += fmt::format("{} {} {}\n", s.dt_s, s.horizon_s, s.seed);
  out += "\n[noise]\n";
  out += fmt::format("{} {} {}\n", s.noise.pressure_sigma_bar, s.noise.flow_sigma_relative,
                     s.noise.virtual_sigma);
  out += "\n[loads]\n";
  for (const auto& [node, profile] : s.loads) {
    out += fmt::format("{}", node);
    for (std::size_t k = 0; k < profile.values.size(); ++k) {
      out += fmt::format(" {} {}", profile.times_h[k], profile.values[k]);
    }
    out += '\n';
  }
  if (!s.bad_data.empty()) {
    out += "\n[bad_data]\n";
    for (const auto& e : s.bad_data) {
      out += fmt::format("{} {} {} {}\n", to_string(e.kind), e.node, e.time_h, e.value);
    }
  }
  if (!s.bias.empty()) {
    out += "\n[bias]\n";
    for (const auto& e : s.bias) {
      out += fmt::format("{} {} {} {} {}\n", to_string(e.kind), e.node_set, e.start_h, e.end_h,
                         e.offset);
    }
  }
  return out;
}

Scenario bundled_scenario(Condition condition, std::uint64_t seed) {
  struct Load {
    int node;
    double base;     // kg/s
    double peak_h;   // hour of the daily maximum
  };
  static constexpr Load kLoads[] = {
      {9, 1.5, 18},  {10, 1.2, 19}, {11, 1.0, 8},  {12, 2.5, 17}, {13, 2.0, 9},
      {14, 1.5, 18}, {15, 1.0, 20}, {16, 0.8, 7},  {17, 1.2, 12}, {19, 1.0, 19},
      {20, 1.2, 8},  {21, 0.8, 18}, {22, 3.0, 14}, {24, 1.0, 9},  {25, 1.2, 19},
      {26, 1.0, 17}, {27, 0.8, 8},  {29, 1.2, 18}, {30, 1.5, 13},
  };
  constexpr double kSwing = 0.3;

  Scenario s;
  s.dt_s = 900.0;
  s.horizon_s = 24.0 * 3600.0;
  s.seed = seed;
  for (int id = 3; id <= 30; ++id) s.loads[id] = LoadProfile{{0.0}, {0.0}};
  for (const Load& l : kLoads) {
    LoadProfile p;
    for (int h = 0; h <= 24; ++h) {
      const double phase = 2.0 * std::numbers::pi * (h - l.peak_h + 6.0) / 24.0;
      const double v = l.base * (1.0 + kSwing * std::sin(phase));
      p.times_h.push_back(h);
      p.values.push_back(std::round(v * 1e4) / 1e4);
    }
    s.loads[l.node] = std::move(p);
  }

  if (condition == Condition::kBadData) {
    using K = ChannelKind;
    s.bad_data = {
        {K::kPressure, 30, 5.0, 12.0},   {K::kPressure, 30, 5.25, 10.7},
        {K::kPressure, 30, 5.5, 13.8},   {K::kPressure, 30, 13.25, 13.0},
        {K::kPressure, 30, 13.5, 15.5},  {K::kPressure, 30, 13.75, 23.0},
        {K::kFlow, 11, 7.5, 3.0},        {K::kFlow, 11, 7.75, 2.1},
        {K::kFlow, 11, 8.0, 3.0},        {K::kFlow, 11, 8.25, 2.2},
        {K::kFlow, 11, 15.75, 3.0},      {K::kFlow, 11, 16.0, 2.1},
        {K::kFlow, 11, 16.25, 1.7},
    };
  } else if (condition == Condition::kBias) {
    s.bias = {
        {ChannelKind::kPressure, "all", 10.0, 19.75, 0.2},
        {ChannelKind::kFlow, "metered", 5.0, 12.5, 0.1},
    };
  }
  return s;
}

}  // namespace gaspipe
