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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "esc/cli.hpp"

using namespace esc::cli;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

Outcome run_args(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int s = run(args, out, err);
  return {s, out.str(), err.str()};
}

std::string read_file(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "esc_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

const fs::path kGolden = ESC_GOLDEN_DIR;

// Command lines behind the golden CSV files.
const std::vector<std::pair<std::string, std::vector<std::string>>> kGoldenCases = {
    {"exponent.csv", {"exponent", "--d", "2", "--p", "0.25", "--rate", "0.6", "--n", "64", "--grid-size", "16"}},
    {"classical.csv", {"classical", "--d", "2", "--p", "0.5", "--rate", "1", "--n", "1", "--grid-size", "16"}},
    {"levy.csv", {"levy", "--n", "4", "--d", "2", "--rate", "1", "--steps", "8"}},
    {"bound.csv", {"bound", "--n", "1", "--d", "2", "--p", "0.5", "--alphas", "1.1,1.5,2", "--state", "bell.json"}},
    {"oracle.csv", {"oracle", "--n", "1", "--d", "2", "--p", "0.5", "--rate", "1", "--state", "bell.json"}},
    {"ensemble.csv", {"ensemble", "--n", "2", "--d", "2", "--p", "0.5", "--rate", "1", "--trials", "5", "--seed", "7",
                      "--alphas", "1.5,2"}},
    {"estimate_c.csv", {"estimate-c", "--dr", "2", "--ds", "3", "--trials", "50", "--seed", "3"}},
};

std::vector<std::string> with_golden_paths(std::vector<std::string> args) {
  for (auto& a : args)
    if (a == "bell.json") a = (kGolden / "bell.json").string();
  return args;
}

}  // namespace

TEST_CASE("parse examples") {
  const Command b = parse({"bound", "--n", "1", "--d", "2", "--p", "0.5", "--rate", "1"});
  CHECK(b.name == "bound");
  CHECK(b.n == 1);
  CHECK(b.d == 2);
  CHECK(b.p == 0.5);
  CHECK(*b.rate == 1.0);
  CHECK(b.alphas == std::vector<double>{2.0});
  CHECK(b.big_c == 1.0);
  CHECK(b.levy_c == 1.0);
  CHECK(b.tol == 1e-6);
  CHECK(b.seed == 0);
  CHECK(b.format == Format::json);

  const Command e = parse({"exponent", "--d", "2", "--p", "0.25", "--rate", "0.6", "--n", "64"});
  CHECK(e.name == "exponent");
  CHECK(e.n == 64);
  CHECK(*e.rate == 0.6);

  const Command a = parse({"ensemble", "--n", "2", "--rate", "1", "--alphas", "1.1,1.5", "--thresholds", "0.5,0.9"});
  CHECK(a.alphas == std::vector<double>{1.1, 1.5});
  CHECK(a.thresholds == std::vector<double>{0.5, 0.9});
}

TEST_CASE("usage errors name the flag and exit with status 2") {
  const Outcome p = run_args({"bound", "--p", "1.5"});
  CHECK(p.status == kExitUsage);
  CHECK(p.err.find("--p") != std::string::npos);
  CHECK(run_args({"bound", "--n", "1", "--rate", "1", "--bogus"}).status == kExitUsage);
  CHECK(run_args({}).status == kExitUsage);
  CHECK(run_args({"bound", "--n", "1"}).err.find("--rate") != std::string::npos);
  CHECK(run_args({"bound", "--n", "1", "--rate", "1", "--alpha", "2.5"}).status == kExitUsage);
  CHECK(run_args({"bound", "--n", "1", "--rate", "1", "--format", "xml"}).status == kExitUsage);
  CHECK(run_args({"bound", "--n", "x", "--rate", "1"}).status == kExitUsage);
  CHECK(run_args({"ensemble", "--n", "1", "--rate", "1", "--trials", "0"}).status == kExitUsage);
  CHECK(run_args({"bound", "--n", "1", "--rate", "0.5"}).status == kExitUsage);  // M = 1
  CHECK_THROWS_AS(parse({"bound", "--p", "-1"}), UsageError);
  CHECK(run_args({"bound", "--help"}).status == kExitOk);
}

TEST_CASE("guard errors exit with status 3 and name the guard") {
  const Outcome o = run_args({"oracle", "--n", "4", "--d", "2", "--p", "0.5", "--rate", "0.5"});
  CHECK(o.status == kExitGuard);
  CHECK(o.err.find("oracle_uses") != std::string::npos);
  const Outcome c = run_args({"estimate-c", "--dr", "64", "--ds", "128"});
  CHECK(c.status == kExitGuard);
  CHECK(c.err.find("opnorm_dim") != std::string::npos);
}

TEST_CASE("I/O errors exit with status 4") {
  CHECK(run_args({"bound", "--n", "1", "--rate", "1", "--state", "/nonexistent/s.json"}).status == kExitIo);
  CHECK(run_args({"bound", "--n", "1", "--rate", "1", "--out", "/nonexistent/dir/x.json"}).status == kExitIo);
}

TEST_CASE("oracle example on the Bell state") {
  const Outcome o = run_args(with_golden_paths(
      {"oracle", "--n", "1", "--d", "2", "--p", "0.5", "--rate", "1", "--seed", "0", "--state", "bell.json"}));
  REQUIRE(o.status == kExitOk);
  const auto j = nlohmann::json::parse(o.out);
  CHECK(std::abs(j["oracle_fidelity"].get<double>() - 0.625) <= 1e-5);
  CHECK(std::abs(j["bound"].get<double>() - 0.790569) <= 1e-6);
  CHECK(j["alpha"].get<double>() == 2.0);
}

TEST_CASE("exponent and classical examples") {
  const Outcome e = run_args({"exponent", "--d", "2", "--p", "0.5", "--rate", "0.5", "--n", "100"});
  REQUIRE(e.status == kExitOk);
  const auto je = nlohmann::json::parse(e.out);
  CHECK(je["best_exponent"].get<double>() > 0.0);
  CHECK(je["quantum_capacity"].get<double>() == 0.0);

  const Outcome c = run_args({"classical", "--d", "2", "--p", "0.5", "--rate", "1", "--n", "1"});
  REQUIRE(c.status == kExitOk);
  const auto jc = nlohmann::json::parse(c.out);
  CHECK(std::abs(jc["bound"].get<double>() - 0.866025403784) <= 1e-9);
  CHECK(std::abs(jc["ml_success"].get<double>() - 0.75) <= 1e-12);
}

TEST_CASE("JSON output is one sorted line with 12 significant digits") {
  const Outcome o = run_args({"bound", "--n", "2", "--d", "2", "--p", "0.3", "--rate", "1", "--seed", "5"});
  REQUIRE(o.status == kExitOk);
  CHECK(o.out.back() == '\n');
  CHECK(o.out.find('\n') == o.out.size() - 1);
  const auto j = nlohmann::json::parse(o.out);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(std::is_sorted(keys.begin(), keys.end()));
  CHECK(format_number(0.1234567890123456) == "0.123456789012");
  CHECK(number(2.0 / 3.0).get<double>() == 0.666666666667);
  CHECK(number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(render_json(nlohmann::json{{"b", 1}, {"a", 2}}) == R"({"a":2,"b":1})");
}

TEST_CASE("bound on a Haar state matches ensemble trial zero") {
  const Outcome b = run_args({"bound", "--n", "2", "--d", "2", "--p", "0.4", "--rate", "1", "--seed", "11"});
  const Outcome e =
      run_args({"ensemble", "--n", "2", "--d", "2", "--p", "0.4", "--rate", "1", "--seed", "11", "--trials", "1"});
  REQUIRE(b.status == kExitOk);
  REQUIRE(e.status == kExitOk);
  CHECK(nlohmann::json::parse(b.out)["bound"] == nlohmann::json::parse(e.out)["alphas"][0]["mean"]);
}

TEST_CASE("every CSV re-parses with the tool's own reader") {
  for (const auto& [name, args] : kGoldenCases) {
    auto a = with_golden_paths(args);
    a.insert(a.end(), {"--format", "csv"});
    const Outcome o = run_args(a);
    INFO(name);
    REQUIRE(o.status == kExitOk);
    const CsvTable t = parse_csv(o.out);
    CHECK_FALSE(t.header.empty());
    CHECK(to_csv(t) == o.out);
  }
  const Outcome f = run_args({"ensemble", "--n", "1", "--rate", "1", "--trials", "3", "--with-oracle",
                              "--thresholds", "0.5", "--format", "csv"});
  REQUIRE(f.status == kExitOk);
  const CsvTable t = parse_csv(f.out);
  CHECK(t.header == std::vector<std::string>{"trial", "seed_child", "alpha", "bound_value", "oracle_fidelity"});
  CHECK(t.rows.size() == 3);
  CHECK_FALSE(t.rows[0][4].empty());
}

TEST_CASE("csv reader handles quoting and rejects ragged rows") {
  CsvTable t;
  t.header = {"a", "b"};
  t.rows = {{"x,y", "say \"hi\""}, {"", "2"}};
  CHECK(parse_csv(to_csv(t)).rows == t.rows);
  CHECK_THROWS_AS(parse_csv("a,b\n1\n"), std::invalid_argument);
  CHECK_THROWS_AS(parse_csv(""), std::invalid_argument);
  CHECK_THROWS_AS(parse_csv("a\n\"open\n"), std::invalid_argument);
}

TEST_CASE("csv output to a file begins with the header and is byte-identical across runs") {
  const fs::path p1 = scratch("report1.csv");
  const fs::path p2 = scratch("report2.csv");
  const std::vector<std::string> base{"ensemble", "--n", "2", "--rate", "1", "--trials", "4", "--seed", "1",
                                      "--threads", "3", "--format", "csv", "--out"};
  auto a1 = base;
  a1.push_back(p1.string());
  auto a2 = base;
  a2.push_back(p2.string());
  REQUIRE(run_args(a1).status == kExitOk);
  REQUIRE(run_args(a2).status == kExitOk);
  const std::string s1 = read_file(p1);
  CHECK(s1.rfind("trial,seed_child,alpha,bound_value,oracle_fidelity\n", 0) == 0);
  CHECK(s1 == read_file(p2));
}

TEST_CASE("golden CSV files") {
  for (const auto& [name, args] : kGoldenCases) {
    auto a = with_golden_paths(args);
    a.insert(a.end(), {"--format", "csv"});
    const Outcome o = run_args(a);
    INFO(name);
    REQUIRE(o.status == kExitOk);
    CHECK(o.out == read_file(kGolden / name));
  }
}
