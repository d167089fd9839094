// Copyright 2026 The qsd Authors
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

// Command-line front end: theta/overlap sweeps of the three discrimination
// protocols in ideal and Monte Carlo modes, the summary table, optimality
// oracles, and noise calibration.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qsd/harness.hpp"

namespace {

qsd::RunConfig load_config(const std::string& path) {
  if (path.empty()) return qsd::RunConfig{};
  return qsd::load_config_file(path);
}

void apply_protocols_flag(qsd::RunConfig& config, const std::string& value) {
  config.protocols.clear();
  std::string token;
  for (char c : value + ",") {
    if (c == ',') {
      if (!token.empty()) {
        if (token == "susd") {
          config.protocols.push_back(qsd::ProtocolKind::SusdRandomized);
        } else if (token == "idp") {
          config.protocols.push_back(qsd::ProtocolKind::Idp);
        } else if (token == "helstrom") {
          config.protocols.push_back(qsd::ProtocolKind::Helstrom);
        } else {
          throw std::invalid_argument("unknown protocol '" + token + "'");
        }
        token.clear();
      }
    } else {
      token += c;
    }
  }
}

void write_or_print(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw std::invalid_argument("cannot open output file: " + path);
  }
  out << content;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrimination of two non-orthogonal spin-1 states: "
               "minimum-error and unambiguous measurement simulations"};
  app.require_subcommand(1);

  std::string config_path;
  std::string protocols_flag;
  std::string mode_flag;
  std::string out_flag;
  std::optional<long> shots_flag;
  std::optional<std::uint64_t> seed_flag;
  std::optional<int> threads_flag;
  int resolution = 512;

  CLI::App* sweep = app.add_subcommand(
      "sweep", "Run the protocols over a theta/overlap grid and emit CSV");
  sweep->add_option("--config", config_path, "configuration file");
  sweep->add_option("--protocols", protocols_flag,
                    "comma list from {susd, idp, helstrom}");
  sweep->add_option("--shots", shots_flag, "Monte Carlo shots per grid cell");
  sweep->add_option("--seed", seed_flag, "master seed (required for "
                                         "montecarlo)");
  sweep->add_option("--mode", mode_flag, "ideal | montecarlo | both");
  sweep->add_option("--out", out_flag, "CSV output path (default: stdout)");
  sweep->add_option("--threads", threads_flag,
                    "worker threads per batch (0 = hardware)");

  CLI::App* table1 = app.add_subcommand(
      "table1", "Summarize simulated efficiency/error against the reference "
                "values");
  table1->add_option("--config", config_path, "configuration file");
  table1->add_option("--seed", seed_flag, "master seed");
  table1->add_option("--out", out_flag, "report output path");

  CLI::App* oracles = app.add_subcommand(
      "oracles", "Brute-force verification of the closed-form optima");
  oracles->add_option("--resolution", resolution, "grid resolution (>= 64)");
  oracles->add_option("--out", out_flag, "report output path");

  CLI::App* calibrate_cmd = app.add_subcommand(
      "calibrate", "Fit the noise profile against the reference targets");
  calibrate_cmd->add_option("--config", config_path, "configuration file");
  calibrate_cmd->add_option("--seed", seed_flag, "master seed");
  calibrate_cmd->add_option("--out", out_flag, "fitted profile output path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sweep->parsed()) {
      qsd::RunConfig config = load_config(config_path);
      if (!protocols_flag.empty()) apply_protocols_flag(config, protocols_flag);
      if (shots_flag) config.shots = *shots_flag;
      if (seed_flag) config.seed = *seed_flag;
      if (threads_flag) config.threads = *threads_flag;
      if (!mode_flag.empty()) {
        if (mode_flag == "ideal") config.mode = qsd::RunMode::Ideal;
        else if (mode_flag == "montecarlo") config.mode = qsd::RunMode::MonteCarlo;
        else if (mode_flag == "both") config.mode = qsd::RunMode::Both;
        else throw std::invalid_argument("unknown mode '" + mode_flag + "'");
      }
      if (!out_flag.empty()) config.output_path = out_flag;
      const auto rows = qsd::run_sweep(config);
      write_or_print(config.output_path, qsd::sweep_to_csv(rows));
    } else if (table1->parsed()) {
      qsd::RunConfig config = load_config(config_path);
      if (seed_flag) config.seed = *seed_flag;
      const qsd::Table1Report report = qsd::run_table1(config);
      write_or_print(out_flag, qsd::format_table1(report));
    } else if (oracles->parsed()) {
      const qsd::OracleReport report = qsd::run_oracles(resolution);
      write_or_print(out_flag, qsd::format_oracles(report));
    } else if (calibrate_cmd->parsed()) {
      qsd::RunConfig config = load_config(config_path);
      if (seed_flag) config.seed = *seed_flag;
      const qsd::CalibrateRunResult result = qsd::run_calibrate(config);
      if (out_flag.empty()) {
        std::cout << qsd::format_calibration(result);
      } else {
        write_or_print(out_flag,
                       qsd::noise_profile_to_config(result.fit.profile));
        std::cout << qsd::format_calibration(result);
      }
    }
  } catch (const std::exception& error) {
    std::cerr << "error: " << error.what() << "\n";
    return 1;
  }
  return 0;
}
