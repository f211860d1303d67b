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
#include <string>
#include <string_view>
#include <vector>

#include "gaspipe/network.hpp"
#include "gaspipe/simulator.hpp"

namespace gaspipe {

/// Numeric table with a header row. Missing cells are NaN and print as `NA`.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  /// Throws std::out_of_range if the column is absent.
  std::size_t column(std::string_view name) const;
};

/// Shortest round-trip formatting, so parse(format(t)) == t exactly.
std::string format_csv(const CsvTable& table);
CsvTable parse_csv(std::string_view text);

void write_text_file(const std::string& path, std::string_view content);
void write_csv(const std::string& path, const CsvTable& table);
CsvTable read_csv(const std::string& path);

/// `t_s` then one column per channel named `<channel>_<suffix>`, values in
/// file units (bar, kg/s). Row k holds grid step k + 1.
CsvTable channel_table(const GasNetwork& net, const std::vector<Channel>& channels, double dt,
                       const std::vector<Eigen::VectorXd>& series, std::string_view suffix);

/// Inverse of channel_table. Throws std::invalid_argument when a column is
/// missing or the time column is off the dt grid.
std::vector<Eigen::VectorXd> read_channel_series(const GasNetwork& net,
                                                 const std::vector<Channel>& channels, double dt,
                                                 const CsvTable& table, std::string_view suffix);

}  // namespace gaspipe
