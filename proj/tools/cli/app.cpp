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

#include <CLI11.hpp>

#include <cstdlib>
#include <ostream>

#include "commands.hpp"
#include "gaspipe/errors.hpp"

namespace gaspipe::cli {

namespace {

constexpr const char* kDefaultOut = "gaspipe_dse_out";

struct Flags {
  std::string network, scenario, out, variant = "both";
  std::uint64_t seed = 0;
  int window = 0;
  double mu_floor = 1.0;
  CLI::Option* network_opt = nullptr;
  CLI::Option* scenario_opt = nullptr;
  CLI::Option* out_opt = nullptr;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* window_opt = nullptr;
  CLI::Option* mu_floor_opt = nullptr;

  void attach(CLI::App* cmd) {
    network_opt = cmd->add_option("--network", network, "Network file (default: builtin 30-node benchmark)");
    scenario_opt = cmd->add_option("--scenario", scenario, "Scenario file (default: bundled normal condition)");
    out_opt = cmd->add_option("--out", out, "Output directory (default: $GASPIPE_DSE_OUT or ./gaspipe_dse_out)");
    cmd->add_option("--variant", variant, "Filters to run")->check(CLI::IsMember({"kf", "rkf", "both"}));
    seed_opt = cmd->add_option("--seed", seed, "Noise seed, overrides the scenario");
    window_opt = cmd->add_option("--mw", window, "Innovation window length in steps")->check(CLI::PositiveNumber);
    mu_floor_opt = cmd->add_option("--mu-floor", mu_floor, "Lower clamp of the robust scalar");
  }

  RunManifest manifest() const {
    RunManifest m;
    if (network_opt->count()) m.network = network;
    if (scenario_opt->count()) m.scenario = scenario;
    if (out_opt->count()) {
      m.out_dir = out;
    } else if (const char* env = std::getenv("GASPIPE_DSE_OUT"); env && *env) {
      m.out_dir = env;
    } else {
      m.out_dir = kDefaultOut;
    }
    m.variants = parse_variant_selection(variant);
    if (seed_opt->count()) m.seed = seed;
    if (window_opt->count()) m.window = window;
    if (mu_floor_opt->count()) m.mu_floor = mu_floor;
    return m;
  }
};

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dynamic state estimation for natural gas pipeline networks", "gaspipe-dse"};
  app.require_subcommand(1);

  struct Command {
    const char* name;
    const char* help;
    Written (*action)(const RunManifest&);
  };
  const Command commands[] = {
      {"simulate", "Simulate the truth and write synthetic measurements", cmd_simulate},
      {"estimate", "Run the classic and/or robust filter on the measurements", cmd_estimate},
      {"evaluate", "Write per-node filter coefficients and a comparison summary", cmd_evaluate},
      {"demo", "Run the normal, bad-data and bias conditions end to end", cmd_demo},
      {"model", "Dump the assembled model matrices", cmd_model},
  };
  std::vector<Flags> flags(std::size(commands));
  std::vector<CLI::App*> subs;
  for (std::size_t k = 0; k < std::size(commands); ++k) {
    subs.push_back(app.add_subcommand(commands[k].name, commands[k].help));
    flags[k].attach(subs.back());
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  try {
    for (std::size_t k = 0; k < subs.size(); ++k) {
      if (!subs[k]->parsed()) continue;
      for (const auto& path : commands[k].action(flags[k].manifest())) out << path.string() << '\n';
    }
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace gaspipe::cli
