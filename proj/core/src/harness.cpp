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

#include "qsd/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qsd {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string::size_type pos = 0;
  while (pos <= s.size()) {
    const auto next = s.find(sep, pos);
    if (next == std::string::npos) {
      parts.push_back(trim(s.substr(pos)));
      break;
    }
    parts.push_back(trim(s.substr(pos, next - pos)));
    pos = next + 1;
  }
  return parts;
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double parsed = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return parsed;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad number for '" + key + "': " +
                                value);
  }
}

long parse_long(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long parsed = std::stol(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return parsed;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad integer for '" + key + "': " +
                                value);
  }
}

ProtocolKind parse_protocol(const std::string& name) {
  if (name == "susd") return ProtocolKind::SusdRandomized;
  if (name == "susd_a") return ProtocolKind::SusdA;
  if (name == "susd_b") return ProtocolKind::SusdB;
  if (name == "idp") return ProtocolKind::Idp;
  if (name == "helstrom") return ProtocolKind::Helstrom;
  throw std::invalid_argument("config: unknown protocol '" + name + "'");
}

Level parse_level(const std::string& name) {
  if (name == "m0") return Level::M0;
  if (name == "m-1") return Level::MMinus1;
  if (name == "m+1") return Level::MPlus1;
  throw std::invalid_argument("config: unknown level '" + name + "'");
}

std::vector<Level> parse_levels(const std::string& value) {
  std::vector<Level> levels;
  for (const std::string& part : split(value, ',')) {
    levels.push_back(parse_level(part));
  }
  return levels;
}

std::string format_levels(const std::vector<Level>& levels) {
  std::string out;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (i) out += ",";
    out += to_string(levels[i]);
  }
  return out;
}

// 12 significant digits, plain '.' decimal separator.
std::string format_probability(double value) {
  char buffer[48];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

Protocol build_protocol(ProtocolKind kind, double theta) {
  const StatePair pair = StatePair::equal_priors(theta);
  switch (kind) {
    case ProtocolKind::SusdA:
      return build_susd(pair, SusdBasis::ABasis);
    case ProtocolKind::SusdB:
      return build_susd(pair, SusdBasis::BBasis);
    case ProtocolKind::SusdRandomized:
      return build_susd_randomized(pair);
    case ProtocolKind::Idp:
      return build_idp(pair);
    case ProtocolKind::Helstrom:
      return build_helstrom(pair);
  }
  throw std::invalid_argument("unknown protocol kind");
}

NoiseProfile resolve_noise(const RunConfig& config, bool* calibrated,
                           double* residual) {
  switch (config.noise_source) {
    case NoiseSource::Zero:
      return NoiseProfile::zero();
    case NoiseSource::Explicit:
      config.noise.validate();
      return config.noise;
    case NoiseSource::Calibrated: {
      CalibrationOptions options;
      options.shots_per_point = config.calibrate_shots;
      options.max_sweeps = config.calibrate_max_sweeps;
      options.threads = config.threads;
      options.seed = derive_seed(config.seed.value(), 0xca11b8a7eull, 1);
      const CalibrationResult fit =
          calibrate(NoiseProfile::default_guess(), Table1Targets::reference(),
                    options);
      if (calibrated) *calibrated = true;
      if (residual) *residual = fit.residual;
      return fit.profile;
    }
  }
  throw std::invalid_argument("unknown noise source");
}

}  // namespace

std::string to_string(RunMode mode) {
  switch (mode) {
    case RunMode::Ideal:
      return "ideal";
    case RunMode::MonteCarlo:
      return "montecarlo";
    case RunMode::Both:
      return "both";
  }
  return "?";
}

std::vector<double> RunConfig::default_theta_grid() {
  std::vector<double> grid;
  grid.reserve(17);
  for (int k = 0; k <= 16; ++k) {
    grid.push_back(theta_from_overlap(static_cast<double>(k) / 16.0));
  }
  std::sort(grid.begin(), grid.end());
  return grid;
}

void RunConfig::validate() const {
  if (protocols.empty()) {
    throw std::invalid_argument("config: protocol set must not be empty");
  }
  constexpr double kQuarterPi = 0.78539816339744830961;
  for (double theta : theta_grid) {
    if (theta < -kConstructionTol || theta > kQuarterPi + kConstructionTol) {
      throw std::invalid_argument(
          "config: theta grid value outside [0, pi/4]: " +
          std::to_string(theta));
    }
  }
  const bool monte_carlo = mode != RunMode::Ideal;
  if (monte_carlo && shots < 1) {
    throw std::invalid_argument("config: shots must be at least 1");
  }
  if (monte_carlo && !seed.has_value()) {
    throw std::invalid_argument(
        "config: a seed is required in montecarlo mode; wall-clock seeding "
        "is not supported");
  }
  if (noise_source == NoiseSource::Explicit) {
    noise.validate();
  }
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig config;
  bool explicit_noise_field = false;
  std::optional<NoiseSource> declared_source;

  std::istringstream stream(text);
  std::string line;
  while (std::getline(stream, line)) {
    const auto comment = line.find('#');
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: expected 'key = value', got: " +
                                  line);
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "protocols") {
      config.protocols.clear();
      for (const std::string& name : split(value, ',')) {
        config.protocols.push_back(parse_protocol(name));
      }
    } else if (key == "mode") {
      if (value == "ideal") config.mode = RunMode::Ideal;
      else if (value == "montecarlo") config.mode = RunMode::MonteCarlo;
      else if (value == "both") config.mode = RunMode::Both;
      else throw std::invalid_argument("config: unknown mode '" + value + "'");
    } else if (key == "shots") {
      config.shots = parse_long(key, value);
    } else if (key == "seed") {
      config.seed = static_cast<std::uint64_t>(parse_long(key, value));
    } else if (key == "out") {
      config.output_path = value;
    } else if (key == "threads") {
      config.threads = static_cast<int>(parse_long(key, value));
    } else if (key == "theta_grid") {
      config.theta_grid.clear();
      for (const std::string& part : split(value, ',')) {
        config.theta_grid.push_back(parse_double(key, part));
      }
    } else if (key == "overlap_grid") {
      config.theta_grid.clear();
      for (const std::string& part : split(value, ',')) {
        config.theta_grid.push_back(
            theta_from_overlap(parse_double(key, part)));
      }
    } else if (key == "noise") {
      if (value == "zero") declared_source = NoiseSource::Zero;
      else if (value == "calibrated") declared_source = NoiseSource::Calibrated;
      else if (value == "explicit") declared_source = NoiseSource::Explicit;
      else throw std::invalid_argument("config: unknown noise '" + value + "'");
    } else if (key == "noise.p_init_fail") {
      config.noise.p_init_fail = parse_double(key, value);
      explicit_noise_field = true;
    } else if (key == "noise.p_true_positive") {
      config.noise.p_true_positive = parse_double(key, value);
      explicit_noise_field = true;
    } else if (key == "noise.p_false_positive_neighbor") {
      config.noise.p_false_positive_neighbor = parse_double(key, value);
      explicit_noise_field = true;
    } else if (key == "noise.p_false_positive_far") {
      config.noise.p_false_positive_far = parse_double(key, value);
      explicit_noise_field = true;
    } else if (key == "noise.p_flip_per_probe") {
      config.noise.p_flip_per_probe = parse_double(key, value);
      explicit_noise_field = true;
    } else if (key == "noise.usd_readout_order") {
      config.noise.usd_readout_order = parse_levels(value);
      explicit_noise_field = true;
    } else if (key == "noise.idp_readout_order") {
      config.noise.idp_readout_order = parse_levels(value);
      explicit_noise_field = true;
    } else if (key == "calibrate_shots") {
      config.calibrate_shots = parse_long(key, value);
    } else if (key == "calibrate_max_sweeps") {
      config.calibrate_max_sweeps = static_cast<int>(parse_long(key, value));
    } else if (key == "table1_shots") {
      config.table1_shots = parse_long(key, value);
    } else {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }

  if (declared_source.has_value()) {
    if (explicit_noise_field && *declared_source != NoiseSource::Explicit) {
      throw std::invalid_argument(
          "config: noise.* fields require 'noise = explicit'");
    }
    config.noise_source = *declared_source;
  } else if (explicit_noise_field) {
    config.noise_source = NoiseSource::Explicit;
  }
  return config;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("config: cannot open file: " + path);
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

std::vector<SweepOutputRow> run_sweep(const RunConfig& config_in) {
  RunConfig config = config_in;
  if (config.theta_grid.empty()) {
    config.theta_grid = RunConfig::default_theta_grid();
  }
  config.validate();

  NoiseProfile noise = NoiseProfile::zero();
  if (config.mode != RunMode::Ideal) {
    noise = resolve_noise(config, nullptr, nullptr);
  }

  std::vector<SweepOutputRow> rows;
  for (ProtocolKind kind : config.protocols) {
    for (std::size_t i = 0; i < config.theta_grid.size(); ++i) {
      const double theta = config.theta_grid[i];
      const Protocol protocol = build_protocol(kind, theta);
      if (config.mode != RunMode::MonteCarlo) {
        const IdealStats stats = ideal_stats(protocol);
        SweepRow row;
        row.kind = kind;
        row.theta = theta;
        row.overlap = overlap_from_theta(theta);
        row.shots = 0;
        row.p_corr = stats.p_corr;
        row.p_err = stats.p_err;
        row.p_inconclusive = stats.p_inconclusive;
        row.p_noresult = 0.0;
        row.p_multipositive = 0.0;
        row.efficiency = 1.0;
        rows.push_back(SweepOutputRow{"ideal", row});
      }
      if (config.mode != RunMode::Ideal) {
        const std::uint64_t cell_seed = derive_seed(
            config.seed.value(), static_cast<std::uint64_t>(kind), i);
        rows.push_back(SweepOutputRow{
            "montecarlo",
            run_batch(protocol, noise, config.shots, cell_seed,
                      config.threads)});
      }
    }
  }

  std::sort(rows.begin(), rows.end(),
            [](const SweepOutputRow& lhs, const SweepOutputRow& rhs) {
              const std::string ln = to_string(lhs.row.kind);
              const std::string rn = to_string(rhs.row.kind);
              if (ln != rn) return ln < rn;
              if (lhs.row.theta != rhs.row.theta)
                return lhs.row.theta < rhs.row.theta;
              return lhs.mode < rhs.mode;
            });
  return rows;
}

std::string sweep_to_csv(const std::vector<SweepOutputRow>& rows) {
  std::string csv =
      "protocol,mode,theta_rad,overlap,shots,p_corr,p_err,p_inconclusive,"
      "p_noresult,p_multipositive,efficiency,stderr_corr,stderr_err,"
      "stderr_inconclusive\n";
  for (const SweepOutputRow& out : rows) {
    const SweepRow& r = out.row;
    csv += to_string(r.kind);
    csv += ',';
    csv += out.mode;
    csv += ',';
    csv += format_probability(r.theta);
    csv += ',';
    csv += format_probability(r.overlap);
    csv += ',';
    csv += std::to_string(r.shots);
    for (double value :
         {r.p_corr, r.p_err, r.p_inconclusive, r.p_noresult,
          r.p_multipositive, r.efficiency, r.stderr_corr, r.stderr_err,
          r.stderr_inconclusive}) {
      csv += ',';
      csv += format_probability(value);
    }
    csv += '\n';
  }
  return csv;
}

Table1Report run_table1(const RunConfig& config_in) {
  RunConfig config = config_in;
  if (config.theta_grid.empty()) {
    config.theta_grid = RunConfig::default_theta_grid();
  }
  if (config.mode == RunMode::Ideal) config.mode = RunMode::MonteCarlo;
  config.validate();

  Table1Report report;
  report.profile_used =
      resolve_noise(config, &report.calibrated, &report.calibration_residual);

  std::vector<double> overlap_grid;
  overlap_grid.reserve(config.theta_grid.size());
  for (double theta : config.theta_grid) {
    overlap_grid.push_back(overlap_from_theta(theta));
  }

  const Table1Targets targets = Table1Targets::reference();
  const struct {
    ProtocolKind kind;
    int dimension;
    Table1Targets::Entry entry;
    const char* note;
  } spec_rows[] = {
      {ProtocolKind::SusdRandomized, 2, targets.susd, "~3.5"},
      {ProtocolKind::Idp, 3, targets.idp, "4-7.5"},
      {ProtocolKind::Helstrom, 2, targets.helstrom, ">3.5"},
  };
  for (const auto& spec_row : spec_rows) {
    Table1Row row;
    row.kind = spec_row.kind;
    row.dimension = spec_row.dimension;
    row.unambiguous = is_unambiguous(spec_row.kind);
    row.reference = spec_row.entry;
    row.reference_error_note = spec_row.note;
    row.sim = simulate_table_metrics(
        spec_row.kind, report.profile_used, overlap_grid, config.table1_shots,
        derive_seed(config.seed.value(), 0x7ab1e1ull,
                    static_cast<std::uint64_t>(spec_row.kind)),
        config.threads);
    report.rows.push_back(row);
  }
  return report;
}

std::string format_table1(const Table1Report& report) {
  std::string out;
  char line[256];
  out += "method     d  unambiguous  error% (sim mean [min..max] | ref)   "
         "efficiency% (sim | ref)   multi% (sim | ref)\n";
  for (const Table1Row& row : report.rows) {
    std::snprintf(
        line, sizeof(line),
        "%-9s  %d  %-11s  %5.2f [%5.2f..%5.2f] | %-6s        %5.1f | %4.1f"
        "              %5.2f | %4.1f\n",
        to_string(row.kind).c_str(), row.dimension,
        row.unambiguous ? "yes" : "no", 100.0 * row.sim.error_mean,
        100.0 * row.sim.error_min, 100.0 * row.sim.error_max,
        row.reference_error_note.c_str(), 100.0 * row.sim.efficiency,
        100.0 * row.reference.efficiency, 100.0 * row.sim.multi_positive,
        100.0 * row.reference.multi_positive);
    out += line;
  }
  std::snprintf(line, sizeof(line),
                "noise: %s (init_fail=%.4f tp=%.4f fp_neighbor=%.4f "
                "fp_far=%.4f flip=%.4f)\n",
                report.calibrated ? "calibrated" : "as configured",
                report.profile_used.p_init_fail,
                report.profile_used.p_true_positive,
                report.profile_used.p_false_positive_neighbor,
                report.profile_used.p_false_positive_far,
                report.profile_used.p_flip_per_probe);
  out += line;
  out += "error% and its range are conditioned on trials that produced a "
         "result\n";
  return out;
}

OracleReport run_oracles(int resolution,
                         const std::vector<double>& overlap_grid) {
  OracleReport report;
  report.resolution = resolution;
  for (double overlap : overlap_grid) {
    const double theta = theta_from_overlap(overlap);
    const StatePair pair = StatePair::equal_priors(theta);
    OracleReport::Point point;
    point.overlap = overlap;
    point.theta = theta;
    point.min_error_closed_form = helstrom_bound(pair);
    point.min_error_search = oracle_min_error_search(pair, resolution);
    point.usd_failure_closed_form = overlap_from_theta(theta);
    point.usd_failure_search = oracle_usd_failure_search(pair, resolution);
    report.points.push_back(point);
    report.max_min_error_deviation =
        std::max(report.max_min_error_deviation,
                 std::abs(point.min_error_search - point.min_error_closed_form));
    report.max_usd_failure_deviation = std::max(
        report.max_usd_failure_deviation,
        std::abs(point.usd_failure_search - point.usd_failure_closed_form));
  }
  return report;
}

std::string format_oracles(const OracleReport& report) {
  std::string out;
  char line[192];
  std::snprintf(line, sizeof(line), "resolution: %d\n", report.resolution);
  out += line;
  out += "overlap   min_err(closed)  min_err(search)  usd_fail(closed)  "
         "usd_fail(search)\n";
  for (const OracleReport::Point& p : report.points) {
    std::snprintf(line, sizeof(line),
                  "%7.4f   %14.9f   %14.9f   %15.9f   %15.9f\n", p.overlap,
                  p.min_error_closed_form, p.min_error_search,
                  p.usd_failure_closed_form, p.usd_failure_search);
    out += line;
  }
  std::snprintf(line, sizeof(line),
                "max deviation: min_error %.3e, usd_failure %.3e\n",
                report.max_min_error_deviation,
                report.max_usd_failure_deviation);
  out += line;
  return out;
}

CalibrateRunResult run_calibrate(const RunConfig& config_in) {
  RunConfig config = config_in;
  if (config.mode == RunMode::Ideal) config.mode = RunMode::MonteCarlo;
  config.validate();

  CalibrationOptions options;
  options.shots_per_point = config.calibrate_shots;
  options.max_sweeps = config.calibrate_max_sweeps;
  options.threads = config.threads;
  options.seed = derive_seed(config.seed.value(), 0xca11b8a7eull, 1);

  const NoiseProfile guess = config.noise_source == NoiseSource::Explicit
                                 ? config.noise
                                 : NoiseProfile::default_guess();
  CalibrateRunResult result{calibrate(guess, Table1Targets::reference(),
                                      options),
                            Table1Targets::reference()};
  return result;
}

std::string format_calibration(const CalibrateRunResult& result) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof(line),
                "residual: %.6f (%s after %d evaluations)\n",
                result.fit.residual,
                result.fit.converged ? "converged" : "budget exhausted",
                result.fit.evaluations);
  out += line;
  out += "fitted profile (config format):\n";
  out += noise_profile_to_config(result.fit.profile);
  return out;
}

std::string noise_profile_to_config(const NoiseProfile& profile) {
  std::string out = "noise = explicit\n";
  char line[96];
  const struct {
    const char* key;
    double value;
  } fields[] = {
      {"noise.p_init_fail", profile.p_init_fail},
      {"noise.p_true_positive", profile.p_true_positive},
      {"noise.p_false_positive_neighbor", profile.p_false_positive_neighbor},
      {"noise.p_false_positive_far", profile.p_false_positive_far},
      {"noise.p_flip_per_probe", profile.p_flip_per_probe},
  };
  for (const auto& field : fields) {
    std::snprintf(line, sizeof(line), "%s = %.12g\n", field.key, field.value);
    out += line;
  }
  out += "noise.usd_readout_order = " +
         format_levels(profile.usd_readout_order) + "\n";
  out += "noise.idp_readout_order = " +
         format_levels(profile.idp_readout_order) + "\n";
  return out;
}

}  // namespace qsd
