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

#include "gaspipe/matrix_io.hpp"

#include <fmt/format.h>

#include <ostream>

#include "gaspipe/errors.hpp"
#include "text_format.hpp"

namespace gaspipe {

void write_matrix(std::ostream& out, const Eigen::MatrixXd& m) {
  out << m.rows() << ' ' << m.cols() << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::string line;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) line += ' ';
      line += fmt::format("{}", m(i, j));
    }
    out << line << '\n';
  }
}

Eigen::MatrixXd parse_matrix(std::string_view text) {
  auto lines = detail::tokenize(text);
  if (lines.empty() || lines.front().tokens.size() != 2) {
    throw ParseError(lines.empty() ? 0 : lines.front().number, "expected a 'rows cols' header");
  }
  const auto& head = lines.front();
  const auto rows = detail::to_integer(head.tokens[0], head.number);
  const auto cols = detail::to_integer(head.tokens[1], head.number);
  if (rows < 0 || cols < 0 || static_cast<long long>(lines.size()) != rows + 1) {
    throw ParseError(head.number, "row count does not match the header");
  }
  Eigen::MatrixXd m(rows, cols);
  for (long long i = 0; i < rows; ++i) {
    const auto& line = lines[i + 1];
    if (static_cast<long long>(line.tokens.size()) != cols) {
      throw ParseError(line.number, fmt::format("expected {} values", cols));
    }
    for (long long j = 0; j < cols; ++j) m(i, j) = detail::to_double(line.tokens[j], line.number);
  }
  return m;
}

}  // namespace gaspipe
