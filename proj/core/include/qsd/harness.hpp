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

#pragma once

// Run orchestration behind the command-line front end: configuration,
// theta/overlap sweeps in ideal and Monte Carlo modes, CSV emission, the
// summary table and the optimality-oracle report.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qsd/readout.hpp"

namespace qsd {

enum class RunMode { Ideal, MonteCarlo, Both };

std::string to_string(RunMode mode);

/// How the sweep obtains its noise parameters.
enum class NoiseSource { Zero, Calibrated, Explicit };

/// A fully resolved run request. Defaults follow the CLI documentation:
/// all three protocols, a 17-point overlap grid from 0 to 1, ideal mode.
struct RunConfig {
  std::vector<ProtocolKind> protocols{ProtocolKind::SusdRandomized,
                                      ProtocolKind::Idp,
                                      ProtocolKind::Helstrom};
  std::vector<double> theta_grid;  // filled with the default grid when empty
  long shots = 100000;
  RunMode mode = RunMode::Ideal;
  NoiseSource noise_source = NoiseSource::Zero;
  NoiseProfile noise;  // used when noise_source == Explicit
  std::optional<std::uint64_t> seed;
  std::string output_path;
  int threads = 0;
  long calibrate_shots = 20000;
  int calibrate_max_sweeps = 40;
  long table1_shots = 100000;

  /// The 17 equally spaced overlaps from 0 to 1, as theta values.
  static std::vector<double> default_theta_grid();

  /// Grid values in range, shots and seed present where the mode needs
  /// them. Throws std::invalid_argument with a diagnostic.
  void validate() const;
};

/// Parses a flat `key = value` configuration document. Unknown keys raise
/// std::invalid_argument; '#' starts a comment.
RunConfig parse_config_text(const std::string& text);
RunConfig load_config_file(const std::string& path);

/// One output row of a sweep; mode is "ideal" or "montecarlo".
struct SweepOutputRow {
  std::string mode;
  SweepRow row;
};

/// Runs every (protocol, theta, mode) cell of the request and returns the
/// rows sorted by (protocol, theta, mode). Ideal rows carry shots = 0 and
/// zero statistical error.
std::vector<SweepOutputRow> run_sweep(const RunConfig& config);

/// Renders rows as CSV: fixed header, 12 significant digits, LF endings.
std::string sweep_to_csv(const std::vector<SweepOutputRow>& rows);

/// Summary comparison against the reference measurement campaign.
struct Table1Row {
  ProtocolKind kind;
  int dimension;
  bool unambiguous;
  ProtocolTableMetrics sim;
  Table1Targets::Entry reference;
  std::string reference_error_note;
};

struct Table1Report {
  std::vector<Table1Row> rows;
  NoiseProfile profile_used;
  bool calibrated = false;
  double calibration_residual = 0.0;
};

Table1Report run_table1(const RunConfig& config);
std::string format_table1(const Table1Report& report);

/// Brute-force verification of the closed-form optima across a grid.
struct OracleReport {
  struct Point {
    double overlap;
    double theta;
    double min_error_closed_form;
    double min_error_search;
    double usd_failure_closed_form;
    double usd_failure_search;
  };
  std::vector<Point> points;
  int resolution = 0;
  double max_min_error_deviation = 0.0;
  double max_usd_failure_deviation = 0.0;
};

OracleReport run_oracles(int resolution,
                         const std::vector<double>& overlap_grid =
                             {0.0, 0.125, 0.25, 0.375, 0.5, 0.625, 0.75,
                              0.875, 1.0});
std::string format_oracles(const OracleReport& report);

/// Calibration entry point used by `qsd calibrate`.
struct CalibrateRunResult {
  CalibrationResult fit;
  Table1Targets targets;
};

CalibrateRunResult run_calibrate(const RunConfig& config);
std::string format_calibration(const CalibrateRunResult& result);

/// Renders a noise profile as configuration keys (round-trips through the
/// config parser).
std::string noise_profile_to_config(const NoiseProfile& profile);

}  // namespace qsd
