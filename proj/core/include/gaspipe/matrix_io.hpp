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
#include <iosfwd>
#include <string_view>

namespace gaspipe {

// Debug dump: a `rows cols` header line, then one whitespace-separated line
// per row (row-major) with round-trip precision.
void write_matrix(std::ostream& out, const Eigen::MatrixXd& m);
Eigen::MatrixXd parse_matrix(std::string_view text);

}  // namespace gaspipe
