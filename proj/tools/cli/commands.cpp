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

#include "commands.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <map>
#include <set>

#include "gaspipe/csv.hpp"
#include "gaspipe/errors.hpp"
#include "gaspipe/matrix_io.hpp"
#include "gaspipe/metrics.hpp"
#include "gaspipe/simulator.hpp"

namespace gaspipe::cli {

namespace fs = std::filesystem;

VariantSelection parse_variant_selection(std::string_view text) {
  if (text == "kf") return VariantSelection::kClassic;
  if (text == "rkf") return VariantSelection::kRobust;
  if (text == "both") return VariantSelection::kBoth;
  throw UsageError(fmt::format("--variant must be kf, rkf or both, got '{}'", text));
}

bool includes(VariantSelection selection, Variant variant) {
  if (selection == VariantSelection::kBoth) return true;
  return (selection == VariantSelection::kClassic) == (variant == Variant::kClassic);
}

namespace {

constexpr Variant kVariants[] = {Variant::kClassic, Variant::kRobust};

template <typename T, typename Loader>
T load_with_context(const fs::path& path, Loader loader) {
  if (!fs::is_regular_file(path)) throw UsageError(fmt::format("{}: no such file", path.string()));
  try {
    return loader(path.string());
  } catch (const ParseError& e) {
    throw ParseError(e.line(), fmt::format("{}: {}", path.string(), e.what()));
  } catch (const ValidationError& e) {
    throw ValidationError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

fs::path write_file(const fs::path& dir, const std::string& name, std::string_view content) {
  const fs::path path = dir / name;
  write_text_file(path.string(), content);
  return path;
}

/// Everything downstream of the inputs that every command rebuilds the same way.
struct Pipeline {
  StudyModel study;
  Trajectory truth;
  Eigen::MatrixXd h;
  MeasurementSeries series;
};

Pipeline build_pipeline(const Inputs& in) {
  StudyModel study = build_study_model(in.net, in.scenario);
  Trajectory truth = simulate(study.model, in.net, in.scenario);
  Eigen::MatrixXd h = measurement_matrix(in.net, study.model.index());
  MeasurementSeries series = synthesize_measurements(truth, h, in.scenario, in.net);
  return {std::move(study), std::move(truth), std::move(h), std::move(series)};
}

std::vector<Eigen::VectorXd> read_series(const Inputs& in, const std::vector<Channel>& channels,
                                         const fs::path& path, std::string_view suffix) {
  if (!fs::is_regular_file(path)) {
    throw UsageError(fmt::format("missing input {}; run the earlier commands first", path.string()));
  }
  CsvTable table = load_with_context<CsvTable>(path, [](const std::string& p) { return read_csv(p); });
  if (table.header.size() != channels.size() + 1) {
    throw UsageError(fmt::format("{}: {} columns do not match the network's {} channels", path.string(),
                                 table.header.size() - 1, channels.size()));
  }
  if (static_cast<int>(table.rows.size()) != in.scenario.steps()) {
    throw UsageError(fmt::format("{}: {} rows, expected {}", path.string(), table.rows.size(),
                                 in.scenario.steps()));
  }
  try {
    return read_channel_series(in.net, channels, in.scenario.dt_s, table, suffix);
  } catch (const std::invalid_argument& e) {
    throw UsageError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

Written simulate_into(const Inputs& in, const fs::path& dir) {
  prepare_output(dir);
  const Pipeline p = build_pipeline(in);
  const auto& s = p.series;
  Written out;
  out.push_back(write_file(dir, "truth.csv", format_csv(channel_table(in.net, s.channels, s.dt, s.truth, "true"))));
  out.push_back(
      write_file(dir, "measurements.csv", format_csv(channel_table(in.net, s.channels, s.dt, s.measured, "meas"))));
  out.push_back(write_file(dir, "scenario_echo.scn", serialize_scenario(in.scenario)));
  return out;
}

CsvTable mu_table(const MeasurementSeries& series, const EstimationResult& result) {
  CsvTable t;
  t.header.push_back("t_s");
  for (const auto& c : series.channels) t.header.push_back(c.name() + "_mu");
  for (std::size_t k = 0; k < result.steps.size(); ++k) {
    std::vector<double> row{static_cast<double>(k + 1) * series.dt};
    const auto& mu = result.steps[k].scalar;
    row.insert(row.end(), mu.data(), mu.data() + mu.size());
    t.rows.push_back(std::move(row));
  }
  return t;
}

Written estimate_into(const Inputs& in, const RunManifest& m, const fs::path& dir) {
  prepare_output(dir);
  Pipeline p = build_pipeline(in);
  const fs::path measured = dir / "measurements.csv";
  if (fs::exists(measured)) p.series.measured = read_series(in, p.series.channels, measured, "meas");

  const Eigen::VectorXd x0 = fixed_point(p.study.model, p.series.loads.front());
  Written out;
  for (Variant v : kVariants) {
    if (!includes(m.variants, v)) continue;
    EstimatorConfig cfg = default_config(x0, p.series, v);
    if (m.window) cfg.window = *m.window;
    if (m.mu_floor) cfg.mu_floor = *m.mu_floor;
    const EstimationResult result = run_filter(p.study.model, in.net, p.series, cfg);
    const std::string suffix(to_string(v));
    out.push_back(write_file(dir, fmt::format("estimate_{}.csv", suffix),
                             format_csv(channel_table(in.net, p.series.channels, p.series.dt,
                                                      estimates_of(result), suffix))));
    if (v == Variant::kRobust) out.push_back(write_file(dir, "mu_trace.csv", format_csv(mu_table(p.series, result))));
  }
  return out;
}

std::string eps_line(std::string_view label, const std::vector<ChannelReport>& report) {
  int below = 0, total = 0;
  double worst = 0.0, vmin = INFINITY, vmax = -INFINITY;
  for (const auto& r : report) {
    if (!r.epsilon) continue;
    if (r.is_virtual) {
      vmin = std::min(vmin, *r.epsilon);
      vmax = std::max(vmax, *r.epsilon);
      continue;
    }
    ++total;
    below += *r.epsilon < 1.0;
    worst = std::max(worst, *r.epsilon);
  }
  std::string s = fmt::format("{}_nonvirtual_eps_below_one {}/{}\n", label, below, total);
  s += fmt::format("{}_nonvirtual_eps_max {:.4f}\n", label, worst);
  if (vmin <= vmax) s += fmt::format("{}_virtual_eps_range {:.4f} {:.4f}\n", label, vmin, vmax);
  return s;
}

double to_bar_or_kgs(const GasNetwork& net, ChannelKind kind, double error) {
  return kind == ChannelKind::kPressure ? net.density_to_pressure(error) : error;
}

Written evaluate_into(const Inputs& in, const RunManifest& m, const fs::path& dir) {
  prepare_output(dir);
  const std::vector<Channel> channels = measurement_channels(in.net, in.scenario, {});
  const auto truth = read_series(in, channels, dir / "truth.csv", "true");
  const auto measured = read_series(in, channels, dir / "measurements.csv", "meas");

  std::map<Variant, std::vector<Eigen::VectorXd>> estimates;
  std::map<Variant, std::vector<ChannelReport>> reports;
  for (Variant v : kVariants) {
    if (!includes(m.variants, v)) continue;
    const std::string suffix(to_string(v));
    estimates[v] = read_series(in, channels, dir / fmt::format("estimate_{}.csv", suffix), suffix);
    reports[v] = filter_coefficient(estimates[v], measured, truth, channels);
  }

  // report.csv: one row per node, NA where a coefficient is undefined.
  const int n = in.net.node_count();
  CsvTable report;
  report.header = {"node"};
  for (const char* kind : {"p", "m"}) {
    for (const auto& [v, r] : reports) report.header.push_back(fmt::format("{}_eps_{}", kind, to_string(v)));
  }
  report.header.push_back("m_virtual");
  const double na = std::numeric_limits<double>::quiet_NaN();
  for (int id = 1; id <= n; ++id) {
    std::vector<double> row{static_cast<double>(id)};
    for (int c : {id - 1, n + id - 1}) {
      for (const auto& [v, rep] : reports) {
        auto it = std::find_if(rep.begin(), rep.end(), [c](const ChannelReport& r) { return r.channel == c; });
        row.push_back(it != rep.end() && it->epsilon ? *it->epsilon : na);
      }
    }
    row.push_back(channels[n + id - 1].is_virtual ? 1.0 : 0.0);
    report.rows.push_back(std::move(row));
  }

  std::string summary;
  for (const auto& [v, rep] : reports) summary += eps_line(to_string(v), rep);
  const bool both = reports.size() == 2;
  if (both) {
    const Comparison cmp = compare(reports[Variant::kClassic], reports[Variant::kRobust]);
    const auto count = cmp.channels.size();
    summary += fmt::format("rkf_not_worse_than_kf {:.4f} of {} nonvirtual channels\n", cmp.fraction_b_not_worse, count);
    summary += fmt::format("rkf_better_than_kf {:.4f} of {} nonvirtual channels\n", cmp.fraction_b_better, count);
  }

  // Event windows: max error on each corrupted channel over its bad-data instants.
  std::map<int, std::vector<int>> bad_steps;
  for (const auto& e : in.scenario.bad_data) {
    const int c = e.kind == ChannelKind::kPressure ? e.node - 1 : n + e.node - 1;
    bad_steps[c].push_back(event_step(in.scenario, e.time_h));
  }
  for (const auto& [c, steps] : bad_steps) {
    summary += fmt::format("bad_data {} steps {}", channels[c].name(), fmt::join(steps, ","));
    for (const auto& [v, est] : estimates) {
      summary += fmt::format(" {}_max_error {:.6g}", to_string(v),
                             to_bar_or_kgs(in.net, channels[c].kind, max_abs_error(est, truth, c, steps)));
    }
    summary += '\n';
  }
  // Bias windows: mean error over the biased channels, source pressures excluded.
  for (const auto& e : in.scenario.bias) {
    std::vector<int> cs;
    for (int node : resolve_node_set(e.node_set, in.net, in.scenario)) {
      const int c = e.kind == ChannelKind::kPressure ? node - 1 : n + node - 1;
      if (!(channels[c].kind == ChannelKind::kPressure && channels[c].source)) cs.push_back(c);
    }
    std::vector<int> steps;
    for (int k = event_step(in.scenario, e.start_h); k <= event_step(in.scenario, e.end_h); ++k) steps.push_back(k);
    summary += fmt::format("bias {} {} {}-{}h", to_string(e.kind), e.node_set, e.start_h, e.end_h);
    for (const auto& [v, est] : estimates) {
      const ErrorSummary es = error_summary(est, truth, cs, steps);
      summary += fmt::format(" {}_mean_error {:.6g}", to_string(v), to_bar_or_kgs(in.net, e.kind, es.mean_abs));
    }
    summary += '\n';
  }

  Written out;
  out.push_back(write_file(dir, "report.csv", format_csv(report)));
  out.push_back(write_file(dir, "summary.txt", summary));
  return out;
}

}  // namespace

Inputs load_inputs(const RunManifest& m) {
  GasNetwork net = m.network ? load_with_context<GasNetwork>(*m.network, [](const std::string& p) {
    return load_network(p);
  })
                             : builtin_benchmark();
  Scenario scenario = m.scenario ? load_with_context<Scenario>(*m.scenario, [](const std::string& p) {
    return load_scenario(p);
  })
                                 : bundled_scenario(Condition::kNormal);
  if (m.seed) scenario.seed = *m.seed;
  validate_scenario(scenario, net);
  return {std::move(net), std::move(scenario)};
}

void prepare_output(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw UsageError(fmt::format("cannot create output directory {}", dir.string()));
  }
  const fs::path probe = dir / ".write_probe";
  {
    std::ofstream f(probe);
    if (!f) throw UsageError(fmt::format("output directory {} is not writable", dir.string()));
  }
  fs::remove(probe, ec);
}

Written cmd_simulate(const RunManifest& m) { return simulate_into(load_inputs(m), m.out_dir); }

Written cmd_estimate(const RunManifest& m) { return estimate_into(load_inputs(m), m, m.out_dir); }

Written cmd_evaluate(const RunManifest& m) { return evaluate_into(load_inputs(m), m, m.out_dir); }

Written cmd_demo(const RunManifest& m) {
  prepare_output(m.out_dir);
  const GasNetwork net = m.network ? load_inputs(m).net : builtin_benchmark();
  const std::uint64_t seed = m.seed.value_or(kDefaultSeed);

  constexpr Condition kConditions[] = {Condition::kNormal, Condition::kBadData, Condition::kBias};
  std::vector<std::future<Written>> tasks;
  for (Condition c : kConditions) {
    tasks.push_back(std::async(std::launch::async, [&m, &net, seed, c] {
      Inputs in{net, bundled_scenario(c, seed)};
      validate_scenario(in.scenario, in.net);
      const fs::path dir = m.out_dir / std::string(to_string(c));
      Written out = simulate_into(in, dir);
      for (auto&& p : estimate_into(in, m, dir)) out.push_back(std::move(p));
      for (auto&& p : evaluate_into(in, m, dir)) out.push_back(std::move(p));
      return out;
    }));
  }
  Written out;
  std::string summary;
  for (std::size_t k = 0; k < tasks.size(); ++k) {
    for (auto&& p : tasks[k].get()) out.push_back(std::move(p));
    const fs::path dir = m.out_dir / std::string(to_string(kConditions[k]));
    std::ifstream f(dir / "summary.txt");
    summary += fmt::format("[{}]\n", to_string(kConditions[k]));
    summary.append(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
    summary += '\n';
  }
  out.push_back(write_file(m.out_dir, "summary.txt", summary));
  return out;
}

Written cmd_model(const RunManifest& m) {
  const Inputs in = load_inputs(m);
  prepare_output(m.out_dir);
  const StudyModel study = build_study_model(in.net, in.scenario);
  const auto& model = study.model;
  Written out;
  auto dump = [&](const std::string& name, const Eigen::MatrixXd& mat) {
    std::ostringstream text;
    write_matrix(text, mat);
    out.push_back(write_file(m.out_dir, name, text.str()));
  };
  dump("lhs.txt", model.lhs());
  dump("rhs.txt", model.rhs());
  dump("transition.txt", model.transition());
  dump("input_gain.txt", model.input_gain());
  dump("measurement.txt", measurement_matrix(in.net, model.index()));
  dump("initial_state.txt", study.initial.state);
  return out;
}

}  // namespace gaspipe::cli
