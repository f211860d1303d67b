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

#include "gaspipe/csv.hpp"

#include <fmt/format.h>

#include <cmath>
#include <fstream>
#include <limits>

#include "gaspipe/errors.hpp"
#include "text_format.hpp"

namespace gaspipe {

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (header[k] == name) return k;
  }
  throw std::out_of_range(fmt::format("no column '{}'", name));
}

std::string format_csv(const CsvTable& table) {
  std::string out;
  for (std::size_t k = 0; k < table.header.size(); ++k) {
    if (k > 0) out += ',';
    out += table.header[k];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k > 0) out += ',';
      if (std::isnan(row[k])) {
        out += "NA";
      } else {
        out += fmt::format("{}", row[k]);
      }
    }
    out += '\n';
  }
  return out;
}

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> cells;
  while (true) {
    auto comma = line.find(',');
    cells.push_back(line.substr(0, comma));
    if (comma == std::string_view::npos) break;
    line = line.substr(comma + 1);
  }
  return cells;
}

}  // namespace

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  std::size_t number = 0;
  while (!text.empty()) {
    ++number;
    auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;

    auto cells = split(line);
    if (table.header.empty()) {
      for (auto c : cells) table.header.emplace_back(c);
      continue;
    }
    if (cells.size() != table.header.size()) {
      throw ParseError(number, fmt::format("expected {} cells, got {}", table.header.size(), cells.size()));
    }
    std::vector<double> row;
    row.reserve(cells.size());
    for (auto c : cells) {
      row.push_back(c == "NA" ? std::numeric_limits<double>::quiet_NaN() : detail::to_double(c, number));
    }
    table.rows.push_back(std::move(row));
  }
  if (table.header.empty()) throw ParseError(0, "empty CSV");
  return table;
}

void write_text_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

void write_csv(const std::string& path, const CsvTable& table) {
  write_text_file(path, format_csv(table));
}

CsvTable read_csv(const std::string& path) {
  try {
    return parse_csv(detail::read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(e.line(), path + ": " + e.what());
  }
}

CsvTable channel_table(const GasNetwork& net, const std::vector<Channel>& channels, double dt,
                       const std::vector<Eigen::VectorXd>& series, std::string_view suffix) {
  CsvTable table;
  table.header.push_back("t_s");
  for (const auto& c : channels) table.header.push_back(fmt::format("{}_{}", c.name(), suffix));
  for (std::size_t k = 0; k < series.size(); ++k) {
    std::vector<double> row;
    row.reserve(channels.size() + 1);
    row.push_back(static_cast<double>(k + 1) * dt);
    for (std::size_t c = 0; c < channels.size(); ++c) {
      row.push_back(to_file_units(net, channels[c].kind, series[k](static_cast<Eigen::Index>(c))));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

std::vector<Eigen::VectorXd> read_channel_series(const GasNetwork& net,
                                                 const std::vector<Channel>& channels, double dt,
                                                 const CsvTable& table, std::string_view suffix) {
  std::vector<std::size_t> cols;
  for (const auto& c : channels) {
    const auto name = fmt::format("{}_{}", c.name(), suffix);
    try {
      cols.push_back(table.column(name));
    } catch (const std::out_of_range&) {
      throw std::invalid_argument(fmt::format("column '{}' is missing", name));
    }
  }
  const std::size_t t_col = table.column("t_s");
  std::vector<Eigen::VectorXd> out;
  out.reserve(table.rows.size());
  for (std::size_t k = 0; k < table.rows.size(); ++k) {
    const auto& row = table.rows[k];
    const double expected_t = static_cast<double>(k + 1) * dt;
    if (std::abs(row[t_col] - expected_t) > 1e-9 * expected_t) {
      throw std::invalid_argument(fmt::format("row {} has t_s = {}, expected {}", k + 1, row[t_col], expected_t));
    }
    Eigen::VectorXd z(static_cast<Eigen::Index>(channels.size()));
    for (std::size_t c = 0; c < channels.size(); ++c) {
      z(static_cast<Eigen::Index>(c)) = from_file_units(net, channels[c].kind, row[cols[c]]);
    }
    out.push_back(std::move(z));
  }
  return out;
}

}  // namespace gaspipe
