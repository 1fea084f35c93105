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

#include "esc/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "esc/bounds.hpp"
#include "esc/ensemble.hpp"
#include "esc/erasure.hpp"
#include "esc/error.hpp"
#include "esc/numeric.hpp"
#include "esc/oracle.hpp"
#include "esc/qcore.hpp"

namespace esc::cli {
namespace {

using nlohmann::json;

void add_code_options(CLI::App* sub, Command& cmd) {
  sub->add_option("--n", cmd.n, "number of channel uses")->capture_default_str();
  sub->add_option("--d", cmd.d, "input dimension")->capture_default_str();
  sub->add_option("--p", cmd.p, "erasure probability")->capture_default_str();
  sub->add_option("--rate", cmd.rate, "rate R; M = floor(2^{nR})");
}

void add_alpha_options(CLI::App* sub, Command& cmd, std::optional<double>& alpha) {
  auto* a = sub->add_option("--alpha", alpha, "Renyi order in (1,2] (default 2)");
  sub->add_option("--alphas", cmd.alphas, "comma-separated Renyi orders")->delimiter(',')->excludes(a);
}

void add_output_options(CLI::App* sub, Command& cmd, std::string& format) {
  sub->add_option("--out", cmd.out_path, "output file (default stdout)");
  sub->add_option("--format", format, "json or csv")->capture_default_str();
}

void require(bool ok, const std::string& message) {
  if (!ok) throw UsageError(message);
}

void validate(const Command& cmd) {
  const std::string& s = cmd.name;
  const bool coded = s != "estimate-c";
  if (coded) {
    require(cmd.n >= 1, "--n: must be >= 1");
    require(cmd.d >= 2, "--d: must be >= 2");
    require(std::isfinite(cmd.p) && cmd.p >= 0.0 && cmd.p <= 1.0, "--p: must lie in [0, 1]");
    if (cmd.rate) require(std::isfinite(*cmd.rate) && *cmd.rate > 0.0, "--rate: must be positive");
    const bool rate_optional = (s == "bound" || s == "oracle") && !cmd.state_path.empty();
    require(cmd.rate.has_value() || rate_optional, "--rate: required for " + s);
  }
  require(!cmd.alphas.empty(), "--alphas: must be nonempty");
  for (double a : cmd.alphas) require(std::isfinite(a) && a > 1.0 && a <= 2.0, "--alpha: must lie in (1, 2]");
  require(cmd.trials >= 1, "--trials: must be >= 1");
  require(std::isfinite(cmd.big_c) && cmd.big_c > 0.0, "--C: must be positive");
  require(std::isfinite(cmd.levy_c) && cmd.levy_c > 0.0, "--c: must be positive");
  require(std::isfinite(cmd.tol) && cmd.tol > 0.0, "--tol: must be positive");
  for (double t : cmd.thresholds) require(t > 0.0 && t <= 1.0, "--thresholds: must lie in (0, 1]");
  require(cmd.grid_size >= 16, "--grid-size: must be >= 16");
  require(cmd.d_r >= 2, "--dr: must be >= 2");
  require(cmd.d_s >= 2, "--ds: must be >= 2");
  require(cmd.steps >= 1, "--steps: must be >= 1");
  require(!(cmd.with_oracle && cmd.bound_proxy), "--bound-proxy: cannot be combined with --with-oracle");
}

json config_json(const Command& cmd, const CodeParams& code) {
  json j;
  j["command"] = cmd.name;
  j["n"] = code.n();
  j["d"] = cmd.d;
  j["p"] = number(cmd.p);
  j["rate"] = number(code.rate());
  j["r_eff"] = number(code.r_eff());
  j["log2_m"] = number(code.log2_m());
  if (code.m_exact()) j["m"] = code.m();
  return j;
}

CodeParams rate_code(const Command& cmd) { return CodeParams::from_rate(cmd.n, *cmd.rate); }

// Code parameters and state: from the state file when given, otherwise the
// Haar state of trial 0 under --seed.
std::pair<CodeParams, PureState> code_and_state(const Command& cmd, const ErasureParams& params,
                                                std::string& source) {
  if (!cmd.state_path.empty()) {
    PureState psi = load_state_file(cmd.state_path);
    const std::size_t n = code_uses(psi, params);
    if (n != cmd.n) throw ArgumentError("state file has " + std::to_string(n) + " channel uses but --n is " + std::to_string(cmd.n));
    const auto m = static_cast<std::uint64_t>(psi.layout().dim(0));
    if (cmd.rate) {
      const CodeParams code = rate_code(cmd);
      if (!code.m_exact() || code.m() != m)
        throw ArgumentError("state file dimension M = " + std::to_string(m) + " does not match --rate");
      source = "file";
      return {code, std::move(psi)};
    }
    source = "file";
    return {CodeParams::from_dimension(n, m), std::move(psi)};
  }
  const CodeParams code = rate_code(cmd);
  source = "haar";
  return {code, haar_random_pure(code_layout(code, params), child_seed(cmd.seed, 0))};
}

json bound_json(const BoundReport& r) {
  json j;
  j["alpha"] = number(r.alpha);
  j["value"] = number(r.value);
  j["exponent"] = number(r.exponent);
  for (const auto& [k, v] : r.components) j[k] = number(v);
  return j;
}

Report run_bound(const Command& cmd) {
  const ErasureParams params(cmd.p, cmd.d);
  std::string source;
  auto [code, psi] = code_and_state(cmd, params, source);
  const PatternSpectra spectra(psi, params);
  Report rep;
  rep.json = config_json(cmd, code);
  rep.json["state_source"] = source;
  rep.json["seed"] = cmd.seed;
  rep.csv.header = {"alpha", "bound", "exponent", "renyi_coherent_info"};
  json list = json::array();
  double best = 1.0;
  double best_alpha = cmd.alphas.front();
  for (double a : cmd.alphas) {
    const BoundReport r = fidelity_upper_bound(spectra, code, params, a);
    list.push_back(bound_json(r));
    if (r.value < best) {
      best = r.value;
      best_alpha = a;
    }
    rep.csv.rows.push_back({format_number(a), format_number(r.value), format_number(r.exponent),
                            format_number(r.components.at("renyi_coherent_info"))});
  }
  rep.json["alpha"] = number(cmd.alphas.front());
  rep.json["bound"] = list.front()["value"];
  rep.json["bounds"] = list;
  rep.json["min_bound"] = number(best);
  rep.json["min_bound_alpha"] = number(best_alpha);
  return rep;
}

Report run_exponent(const Command& cmd) {
  const ErasureParams params(cmd.p, cmd.d);
  const CodeParams code = rate_code(cmd);
  const ConstantEstimates consts(cmd.big_c, cmd.levy_c);
  const ExponentProfile prof = optimize_exponent(code, params, consts, cmd.grid_size);
  Report rep;
  rep.json = config_json(cmd, code);
  rep.json["C"] = number(cmd.big_c);
  rep.json["grid_size"] = cmd.grid_size;
  rep.json["best_alpha"] = number(prof.best_alpha);
  rep.json["best_exponent"] = number(prof.best_exponent);
  rep.json["quantum_capacity"] = number(quantum_capacity(params));
  rep.json["expected_bound"] = number(expected_fidelity_bound(code, params, prof.best_alpha, consts).value);
  json curve = json::array();
  rep.csv.header = {"alpha", "exponent"};
  for (std::size_t k = 0; k < prof.alphas.size(); ++k) {
    curve.push_back({{"alpha", number(prof.alphas[k])}, {"exponent", number(prof.exponents[k])}});
    rep.csv.rows.push_back({format_number(prof.alphas[k]), format_number(prof.exponents[k])});
  }
  rep.json["profile"] = curve;
  return rep;
}

json stats_json(const SampleStats& s) {
  return {{"mean", number(s.mean)}, {"stderr", number(s.stderr_mean)}, {"min", number(s.min)},
          {"max", number(s.max)}};
}

json numbers(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

Report run_ensemble(const Command& cmd) {
  const ErasureParams params(cmd.p, cmd.d);
  EnsembleConfig cfg(rate_code(cmd), params);
  cfg.trials = cmd.trials;
  cfg.seed = cmd.seed;
  cfg.alphas = cmd.alphas;
  cfg.with_oracle = cmd.with_oracle;
  cfg.bound_proxy = cmd.bound_proxy;
  cfg.tol = cmd.tol;
  cfg.thresholds = cmd.thresholds;
  cfg.consts = ConstantEstimates(cmd.big_c, cmd.levy_c);
  cfg.threads = cmd.threads;

  std::optional<FractionAudit> audit;
  EnsembleReport er;
  if (!cmd.thresholds.empty() && (cmd.with_oracle || cmd.bound_proxy)) {
    audit = fraction_audit(cfg, cmd.thresholds);
    er = std::move(audit->ensemble);
  } else {
    er = run_code_ensemble(cfg);
  }

  Report rep;
  rep.json = config_json(cmd, cfg.code);
  rep.json["trials"] = cmd.trials;
  rep.json["seed"] = cmd.seed;
  rep.json["C"] = number(cmd.big_c);
  rep.json["c"] = number(cmd.levy_c);
  rep.json["c_hat"] = number(er.c_hat);
  json alphas = json::array();
  for (const auto& a : er.alphas) {
    json j = stats_json(a.bound);
    j["alpha"] = number(a.alpha);
    j["expected_bound"] = number(a.expected_bound);
    j["expected_bound_c_hat"] = number(a.expected_bound_c_hat);
    j["dominated"] = a.dominated;
    alphas.push_back(j);
  }
  rep.json["alphas"] = alphas;
  json fr = json::array();
  for (const auto& f : er.fractions)
    fr.push_back({{"alpha", number(f.alpha)}, {"threshold", number(f.threshold)}, {"fraction", number(f.fraction)}});
  rep.json["bound_fractions"] = fr;
  json pats = json::array();
  for (const auto& p : er.patterns)
    pats.push_back({{"bits", p.bits},
                    {"erased", p.erased},
                    {"mean_lambda_max", number(p.mean_lambda_max)},
                    {"mean_purity", numbers(p.mean_purity)},
                    {"envelope", numbers(p.envelope)}});
  rep.json["patterns"] = pats;
  if (er.oracle) {
    json o = stats_json(*er.oracle);
    o["max_gap"] = number(er.oracle_max_gap);
    rep.json["oracle"] = o;
  }
  if (audit) {
    json a;
    a["bound_proxy"] = audit->bound_proxy;
    a["alpha"] = number(audit->alpha);
    a["expected_bound"] = number(audit->expected_bound);
    a["markov_threshold"] = number(audit->markov.threshold);
    a["markov_tail"] = number(audit->markov.tail);
    json rows = json::array();
    for (const auto& r : audit->rows)
      rows.push_back({{"threshold", number(r.threshold)},
                      {"fraction", number(r.fraction)},
                      {"fraction_stderr", number(r.fraction_stderr)},
                      {"empirical_mean", number(r.empirical_mean)},
                      {"markov_empirical", number(r.markov_empirical)},
                      {"markov_analytic", number(r.markov_analytic)},
                      {"levy", number(r.levy)},
                      {"consistent", r.consistent}});
    a["rows"] = rows;
    rep.json["fraction_audit"] = a;
  }
  rep.csv.header = {"trial", "seed_child", "alpha", "bound_value", "oracle_fidelity"};
  for (const auto& rec : er.records)
    for (std::size_t k = 0; k < cfg.alphas.size(); ++k)
      rep.csv.rows.push_back({std::to_string(rec.trial), std::to_string(rec.seed_child), format_number(cfg.alphas[k]),
                              format_number(rec.bounds[k]),
                              rec.oracle_fidelity ? format_number(*rec.oracle_fidelity) : std::string()});
  return rep;
}

Report run_oracle(const Command& cmd) {
  const ErasureParams params(cmd.p, cmd.d);
  std::string source;
  auto [code, psi] = code_and_state(cmd, params, source);
  const CodeFidelity f = optimal_code_fidelity(psi, code, params, cmd.tol);
  const PatternSpectra spectra(psi, params);
  Report rep;
  rep.json = config_json(cmd, code);
  rep.json["state_source"] = source;
  rep.json["seed"] = cmd.seed;
  rep.json["tol"] = number(cmd.tol);
  rep.json["oracle_fidelity"] = number(f.primal);
  rep.json["oracle_dual"] = number(f.dual);
  rep.json["max_gap"] = number(f.max_gap);
  json list = json::array();
  double best = 1.0;
  for (double a : cmd.alphas) {
    const BoundReport r = fidelity_upper_bound(spectra, code, params, a);
    best = std::min(best, r.value);
    list.push_back(bound_json(r));
  }
  rep.json["alpha"] = number(cmd.alphas.front());
  rep.json["bound"] = list.front()["value"];
  rep.json["bounds"] = list;
  rep.json["min_bound"] = number(best);
  json branches = json::array();
  rep.csv.header = {"pattern", "weight", "primal", "dual"};
  for (const auto& b : f.branches) {
    branches.push_back({{"pattern", b.pattern.bits()}, {"weight", number(b.weight)}, {"primal", number(b.primal)},
                        {"dual", number(b.dual)}});
    rep.csv.rows.push_back({std::to_string(b.pattern.bits()), format_number(b.weight), format_number(b.primal),
                            format_number(b.dual)});
  }
  rep.json["branches"] = branches;
  return rep;
}

Report run_classical(const Command& cmd) {
  const ErasureParams params(cmd.p, cmd.d);
  const CodeParams code = rate_code(cmd);
  Report rep;
  rep.json = config_json(cmd, code);
  const BoundReport head = classical_success_bound(code, params, cmd.alphas.front());
  rep.json["alpha"] = number(head.alpha);
  rep.json["bound"] = number(head.value);
  rep.json["classical_renyi_term"] = number(head.components.at("classical_renyi_term"));
  rep.json["classical_capacity"] = number(classical_capacity(params));
  json given = json::array();
  for (double a : cmd.alphas) given.push_back(bound_json(classical_success_bound(code, params, a)));
  rep.json["bounds"] = given;

  // The exhaustive oracle runs only inside its guards.
  std::size_t words = 1;
  for (std::size_t j = 0; j < code.n() && words <= 64; ++j) words *= cmd.d;
  if (code.n() <= 3 && words <= 64 && code.m_exact() && code.m() <= 8) {
    const ClassicalOptimum opt = optimal_classical_success(code.n(), cmd.d, static_cast<std::size_t>(code.m()), cmd.p);
    rep.json["ml_success"] = number(opt.success);
    rep.json["ml_codebook"] = opt.codebook;
  }

  json curve = json::array();
  rep.csv.header = {"alpha", "classical_renyi_term", "bound"};
  for (std::size_t k = 1; k <= cmd.grid_size; ++k) {
    const double a = 1.0 + static_cast<double>(k) / static_cast<double>(cmd.grid_size);
    const BoundReport r = classical_success_bound(code, params, a);
    const double term = r.components.at("classical_renyi_term");
    curve.push_back({{"alpha", number(a)}, {"classical_renyi_term", number(term)}, {"bound", number(r.value)}});
    rep.csv.rows.push_back({format_number(a), format_number(term), format_number(r.value)});
  }
  rep.json["curve"] = curve;
  return rep;
}

Report run_estimate_c(const Command& cmd) {
  const double est = estimate_opnorm_constant(cmd.d_r, cmd.d_s, cmd.trials, cmd.seed);
  Report rep;
  rep.json = {{"command", cmd.name}, {"d_r", cmd.d_r},   {"d_s", cmd.d_s},
              {"trials", cmd.trials}, {"seed", cmd.seed}, {"estimate", number(est)}};
  rep.csv.header = {"d_r", "d_s", "trials", "seed", "estimate"};
  rep.csv.rows.push_back({std::to_string(cmd.d_r), std::to_string(cmd.d_s), std::to_string(cmd.trials),
                          std::to_string(cmd.seed), format_number(est)});
  return rep;
}

Report run_levy(const Command& cmd) {
  const CodeParams code = rate_code(cmd);
  const ConstantEstimates consts(cmd.big_c, cmd.levy_c);
  Report rep;
  rep.json = config_json(cmd, code);
  rep.json.erase("p");
  rep.json["c"] = number(cmd.levy_c);
  rep.json["lipschitz"] = number(kFidelityLipschitz);
  json curve = json::array();
  rep.csv.header = {"delta", "levy_tail"};
  for (std::size_t k = 0; k <= cmd.steps; ++k) {
    const double delta = kFidelityLipschitz * static_cast<double>(k) / static_cast<double>(cmd.steps);
    const double v = levy_tail(code, cmd.d, delta, consts);
    curve.push_back({{"delta", number(delta)}, {"levy_tail", number(v)}});
    rep.csv.rows.push_back({format_number(delta), format_number(v)});
  }
  rep.json["curve"] = curve;
  return rep;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

nlohmann::json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return std::stod(format_number(x));
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

Command parse(const std::vector<std::string>& args) {
  Command cmd;
  std::optional<double> alpha;
  std::string format = "json";
  CLI::App app{"Strong-converse bounds and oracles for the quantum erasure channel", "esc"};
  app.require_subcommand(1, 1);

  auto* bound = app.add_subcommand("bound", "per-code fidelity bound");
  add_code_options(bound, cmd);
  add_alpha_options(bound, cmd, alpha);
  bound->add_option("--state", cmd.state_path, "JSON state file (default: Haar state from --seed)");
  bound->add_option("--seed", cmd.seed)->capture_default_str();

  auto* exponent = app.add_subcommand("exponent", "expected-fidelity exponent versus alpha");
  add_code_options(exponent, cmd);
  exponent->add_option("--C", cmd.big_c, "operator-norm constant")->capture_default_str();
  exponent->add_option("--grid-size", cmd.grid_size)->capture_default_str();

  auto* ensemble = app.add_subcommand("ensemble", "Haar code ensemble");
  add_code_options(ensemble, cmd);
  add_alpha_options(ensemble, cmd, alpha);
  ensemble->add_option("--trials", cmd.trials)->capture_default_str();
  ensemble->add_option("--seed", cmd.seed)->capture_default_str();
  ensemble->add_option("--C", cmd.big_c)->capture_default_str();
  ensemble->add_option("--c", cmd.levy_c)->capture_default_str();
  ensemble->add_option("--tol", cmd.tol)->capture_default_str();
  ensemble->add_option("--thresholds", cmd.thresholds, "comma-separated thresholds in (0,1]")->delimiter(',');
  ensemble->add_option("--threads", cmd.threads, "worker threads, 0 = all cores")->capture_default_str();
  ensemble->add_flag("--with-oracle", cmd.with_oracle, "solve the optimal decoder for each code");
  ensemble->add_flag("--bound-proxy", cmd.bound_proxy, "audit fractions of the bound instead of the oracle");

  auto* oracle = app.add_subcommand("oracle", "optimal decoder fidelity beside the bound");
  add_code_options(oracle, cmd);
  add_alpha_options(oracle, cmd, alpha);
  oracle->add_option("--state", cmd.state_path);
  oracle->add_option("--seed", cmd.seed)->capture_default_str();
  oracle->add_option("--tol", cmd.tol)->capture_default_str();

  auto* classical = app.add_subcommand("classical", "classical success-probability bound");
  add_code_options(classical, cmd);
  add_alpha_options(classical, cmd, alpha);
  classical->add_option("--grid-size", cmd.grid_size)->capture_default_str();

  auto* estimate = app.add_subcommand("estimate-c", "empirical operator-norm constant");
  estimate->add_option("--dr", cmd.d_r)->capture_default_str();
  estimate->add_option("--ds", cmd.d_s)->capture_default_str();
  estimate->add_option("--trials", cmd.trials)->capture_default_str();
  estimate->add_option("--seed", cmd.seed)->capture_default_str();

  auto* levy = app.add_subcommand("levy", "concentration tail versus delta");
  levy->add_option("--n", cmd.n)->capture_default_str();
  levy->add_option("--d", cmd.d)->capture_default_str();
  levy->add_option("--rate", cmd.rate);
  levy->add_option("--c", cmd.levy_c)->capture_default_str();
  levy->add_option("--steps", cmd.steps)->capture_default_str();

  for (auto* sub : app.get_subcommands({})) add_output_options(sub, cmd, format);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    cmd.help = true;
    const auto subs = app.get_subcommands();
    cmd.help_text = subs.empty() ? app.help() : subs.front()->help();
    return cmd;
  } catch (const CLI::ParseError& e) {
    throw UsageError(std::string(e.what()) + "\n" + app.help());
  }
  cmd.name = app.get_subcommands().front()->get_name();
  if (alpha) cmd.alphas = {*alpha};
  if (format == "json") {
    cmd.format = Format::json;
  } else if (format == "csv") {
    cmd.format = Format::csv;
  } else {
    throw UsageError("--format: must be json or csv");
  }
  validate(cmd);
  return cmd;
}

Report execute(const Command& cmd) {
  if (cmd.name == "bound") return run_bound(cmd);
  if (cmd.name == "exponent") return run_exponent(cmd);
  if (cmd.name == "ensemble") return run_ensemble(cmd);
  if (cmd.name == "oracle") return run_oracle(cmd);
  if (cmd.name == "classical") return run_classical(cmd);
  if (cmd.name == "estimate-c") return run_estimate_c(cmd);
  if (cmd.name == "levy") return run_levy(cmd);
  throw UsageError("unknown subcommand " + cmd.name);
}

std::string to_csv(const CsvTable& table) {
  std::string out;
  auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      out += csv_field(fields[i]);
    }
    out += '\n';
  };
  line(table.header);
  for (const auto& r : table.rows) line(r);
  return out;
}

CsvTable parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> lines;
  std::vector<std::string> fields;
  std::string field;
  bool quoted = false;
  bool line_open = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    line_open = true;
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      if (!field.empty()) throw std::invalid_argument("csv: quote inside unquoted field");
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      fields.push_back(std::move(field));
      field.clear();
      lines.push_back(std::move(fields));
      fields.clear();
      line_open = false;
    } else if (c != '\r') {
      field += c;
    }
  }
  if (quoted) throw std::invalid_argument("csv: unterminated quote");
  if (line_open) {
    fields.push_back(std::move(field));
    lines.push_back(std::move(fields));
  }
  if (lines.empty()) throw std::invalid_argument("csv: missing header");
  CsvTable t;
  t.header = std::move(lines.front());
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].size() != t.header.size())
      throw std::invalid_argument("csv: row " + std::to_string(i) + " has the wrong number of fields");
    t.rows.push_back(std::move(lines[i]));
  }
  return t;
}

std::string render_json(const nlohmann::json& j) { return j.dump(); }

void emit(const Report& report, Format format, const std::string& path, std::ostream& out) {
  const std::string body = format == Format::json ? render_json(report.json) + "\n" : to_csv(report.csv);
  if (path.empty()) {
    out << body;
    out.flush();
    if (!out) throw IoError("failed to write to standard output");
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open output file " + path);
  f << body;
  f.close();
  if (!f) throw IoError("failed to write output file " + path);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Command cmd;
  try {
    cmd = parse(args);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (cmd.help) {
    out << cmd.help_text;
    return kExitOk;
  }
  try {
    emit(execute(cmd), cmd.format, cmd.out_path, out);
    return kExitOk;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ArgumentError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ResourceError& e) {
    err << "resource guard " << e.what() << "\n";
    return kExitGuard;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << " (best primal " << format_number(e.best_primal()) << ", best dual "
        << format_number(e.best_dual()) << ")\n";
    return kExitGuard;
  } catch (const InvariantError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitGuard;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::ios_base::failure& e) {
    err << "i/o error: " << e.what() << "\n";
    return kExitIo;
  }
}

}  // namespace esc::cli
