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

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gaspipe/estimation.hpp"
#include "gaspipe/network.hpp"
#include "gaspipe/scenario.hpp"

namespace gaspipe::cli {

/// Bad flags, missing or unreadable inputs, unwritable output. Exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class VariantSelection { kClassic, kRobust, kBoth };

VariantSelection parse_variant_selection(std::string_view text);
bool includes(VariantSelection selection, Variant variant);

struct RunManifest {
  std::optional<std::filesystem::path> network;   // builtin benchmark when empty
  std::optional<std::filesystem::path> scenario;  // bundled normal scenario when empty
  std::filesystem::path out_dir;
  VariantSelection variants = VariantSelection::kBoth;
  std::optional<std::uint64_t> seed;
  std::optional<int> window;
  std::optional<double> mu_floor;
};

/// Resolved inputs of a manifest. Parse errors carry the file name and line.
struct Inputs {
  GasNetwork net;
  Scenario scenario;
};

Inputs load_inputs(const RunManifest& manifest);

/// Creates the output directory and checks that it accepts files.
void prepare_output(const std::filesystem::path& dir);

using Written = std::vector<std::filesystem::path>;

/// Writes truth.csv, measurements.csv and scenario_echo.scn.
Written cmd_simulate(const RunManifest& manifest);

/// Reads measurements.csv from the output directory when present, otherwise
/// synthesizes it in-run. Writes estimate_<variant>.csv and, with the robust
/// filter, mu_trace.csv.
Written cmd_estimate(const RunManifest& manifest);

/// Reads the truth, measurement and estimate CSVs and writes report.csv
/// (per-node filter coefficients) and summary.txt.
Written cmd_evaluate(const RunManifest& manifest);

/// Runs the normal, bad-data and bias conditions concurrently into
/// <out>/normal, <out>/bad_data and <out>/bias, then writes <out>/summary.txt.
Written cmd_demo(const RunManifest& manifest);

/// Writes the assembled lhs, rhs, transition, input gain and H as text matrices.
Written cmd_model(const RunManifest& manifest);

/// Entry point shared by the executable and the tests. Returns the exit code:
/// 0 success, 1 usage or configuration error, 2 numerical failure.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gaspipe::cli
