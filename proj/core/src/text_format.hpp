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

// Shared helpers for the line-oriented `[section]` text formats.

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <fmt/format.h>

#include "gaspipe/errors.hpp"

namespace gaspipe::detail {

struct TextLine {
  std::size_t number = 0;  // 1-based
  std::string section;     // empty before the first header
  std::vector<std::string_view> tokens;
};

/// Splits into non-empty logical lines. `#` starts a comment; `[name]` switches section.
inline std::vector<TextLine> tokenize(std::string_view text) {
  std::vector<TextLine> out;
  std::string section;
  std::size_t number = 0;
  while (!text.empty()) {
    ++number;
    auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::vector<std::string_view> tokens;
    std::size_t pos = 0;
    while (pos < line.size()) {
      while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) ++pos;
      std::size_t start = pos;
      while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t' && line[pos] != '\r') ++pos;
      if (pos > start) tokens.push_back(line.substr(start, pos - start));
    }
    if (tokens.empty()) continue;

    if (tokens.front().starts_with('[')) {
      auto head = tokens.front();
      if (tokens.size() != 1 || !head.ends_with(']') || head.size() < 3) {
        throw ParseError(number, "malformed section header");
      }
      section = std::string(head.substr(1, head.size() - 2));
      continue;
    }
    out.push_back({number, section, std::move(tokens)});
  }
  return out;
}

inline double to_double(std::string_view token, std::size_t line) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ParseError(line, "expected a number, got '" + std::string(token) + "'");
  }
  return value;
}

inline long long to_integer(std::string_view token, std::size_t line) {
  long long value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ParseError(line, "expected an integer, got '" + std::string(token) + "'");
  }
  return value;
}

inline std::uint64_t to_u64(std::string_view token, std::size_t line) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ParseError(line, "expected an unsigned integer, got '" + std::string(token) + "'");
  }
  return value;
}

/// Parses `token` scaled by 10^shift. The shift is applied to the decimal
/// exponent, so the result is the correctly rounded value of the scaled text.
inline double to_double_scaled(std::string_view token, std::size_t line, int shift) {
  to_double(token, line);
  std::string text(token);
  auto e = text.find_first_of("eE");
  if (e == std::string::npos) return to_double(text + "e" + std::to_string(shift), line);
  const auto exponent = to_integer(std::string_view(text).substr(e + 1), line);
  return to_double(text.substr(0, e) + "e" + std::to_string(exponent + shift), line);
}

/// Shortest decimal text of value * 10^shift that to_double_scaled(., -shift)
/// maps back to `value` exactly.
inline std::string format_scaled(double value, int shift) {
  const std::string shortest = fmt::format("{}", value);
  std::string digits;
  bool negative = false;
  long long exponent = 0;  // value = digits * 10^exponent
  bool seen_point = false;
  for (std::size_t k = 0; k < shortest.size(); ++k) {
    const char c = shortest[k];
    if (c == '-') {
      negative = true;
    } else if (c == '.') {
      seen_point = true;
    } else if (c == 'e' || c == 'E') {
      exponent += std::stoll(shortest.substr(k + 1));
      break;
    } else {
      digits += c;
      if (seen_point) --exponent;
    }
  }
  if (shortest == "inf" || shortest == "-inf" || shortest == "nan") return shortest;
  digits.erase(0, std::min(digits.find_first_not_of('0'), digits.size()));
  if (digits.empty()) return "0";
  while (digits.back() == '0') {
    digits.pop_back();
    ++exponent;
  }
  exponent += shift;

  const long long size = static_cast<long long>(digits.size());
  const long long point = size + exponent;  // digits before the decimal point
  std::string out = negative ? "-" : "";
  if (exponent >= 0 && point <= 21) {
    out += digits + std::string(static_cast<std::size_t>(exponent), '0');
  } else if (exponent < 0 && point > 0) {
    out += digits.substr(0, point) + "." + digits.substr(point);
  } else if (exponent < 0 && point > -6) {
    out += "0." + std::string(static_cast<std::size_t>(-point), '0') + digits;
  } else {
    out += digits.substr(0, 1);
    if (size > 1) out += "." + digits.substr(1);
    out += "e" + std::to_string(point - 1);
  }
  return out;
}

std::string read_file(const std::string& path);

}  // namespace gaspipe::detail
