// Copyright 2026 The erasure-converse Authors.
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

// Command-line front end: parses a request, runs it, and writes the report
// as one JSON object or a CSV table.
//
// Exit statuses: 0 success, 2 usage, 3 resource guard or numerical failure,
// 4 I/O failure.

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace esc::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitGuard = 3;
inline constexpr int kExitIo = 4;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Format { json, csv };

struct Command {
  std::string name;
  std::size_t n = 1;
  std::size_t d = 2;
  double p = 0.5;
  std::optional<double> rate;
  std::vector<double> alphas{2.0};
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  double big_c = 1.0;
  double levy_c = 1.0;
  double tol = 1e-6;
  std::string state_path;
  std::string out_path;
  Format format = Format::json;
  std::vector<double> thresholds;
  std::size_t threads = 1;
  std::size_t grid_size = 64;
  std::size_t d_r = 2;
  std::size_t d_s = 2;
  std::size_t steps = 40;
  bool with_oracle = false;
  bool bound_proxy = false;
  bool help = false;
  std::string help_text;
};

/// Parses arguments without the program name. Throws UsageError naming the
/// offending flag.
Command parse(const std::vector<std::string>& args);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string to_csv(const CsvTable& table);
/// Inverse of to_csv; throws std::invalid_argument on malformed input.
CsvTable parse_csv(const std::string& text);

struct Report {
  nlohmann::json json;
  CsvTable csv;
};

Report execute(const Command& cmd);

/// Single-line JSON with sorted keys.
std::string render_json(const nlohmann::json& j);

/// Writes to `path`, or to `out` when path is empty. Throws IoError.
void emit(const Report& report, Format format, const std::string& path, std::ostream& out);

/// Number formatting shared by JSON and CSV: 12 significant digits,
/// non-finite values as "inf", "-inf" or "nan".
nlohmann::json number(double x);
std::string format_number(double x);

/// parse + execute + emit with exceptions mapped to exit statuses.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace esc::cli
