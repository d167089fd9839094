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

// Monte Carlo model of the experiment: prepare a state, run the protocol
// pulses (or fail to, when the electron initialization failed), collapse the
// spin onto a definite level, then probe the levels one by one. Each probe
// can fire on the occupied level, misfire on a neighboring or distant level,
// and kick the spin to an adjacent level. The first positive probe decides
// the assigned outcome; no positive probe means no result.

#include <cstdint>
#include <vector>

#include "qsd/protocols.hpp"
#include "qsd/rng.hpp"

namespace qsd {

/// Readout and initialization error parameters.
struct NoiseProfile {
  // Probability that the whole pulse sequence acts as the identity and the
  // spin stays on m0.
  double p_init_fail = 0.0;
  // Probability that probing the occupied level fires.
  double p_true_positive = 1.0;
  // Probability that probing a level adjacent to the occupied one fires.
  double p_false_positive_neighbor = 0.0;
  // Probability that probing a non-adjacent level fires.
  double p_false_positive_far = 0.0;
  // Probability per probe that the spin hops to an adjacent level after the
  // probe (from m0 to either side with equal chance).
  double p_flip_per_probe = 0.0;

  // Probe order per protocol family. The two-outcome measurements read the
  // two conclusive-or-inconclusive levels; the three-outcome measurement
  // reads all three.
  std::vector<Level> usd_readout_order{Level::MPlus1, Level::MMinus1};
  std::vector<Level> idp_readout_order{Level::M0, Level::MMinus1,
                                       Level::MPlus1};

  const std::vector<Level>& readout_order(ProtocolKind kind) const;

  /// All parameters in [0, 1] and
  /// p_false_positive_far <= p_false_positive_neighbor <= p_true_positive.
  /// Throws std::invalid_argument on violation.
  void validate() const;

  /// Ideal detector: every probe of the occupied level fires, nothing else
  /// ever does.
  static NoiseProfile zero();

  /// Starting guess for calibration; carries no physical claim.
  static NoiseProfile default_guess();
};

enum class Prepared { StateA, StateB };

enum class Assigned { A, B, Inconclusive, Unused, NoResult };

std::string to_string(Assigned assigned);

/// Outcome of a single shot.
struct TrialRecord {
  Prepared prepared;
  std::vector<Level> raw_positives;  // fired levels, in probe order
  Assigned assigned = Assigned::NoResult;
  int positive_count = 0;
};

/// Runs one shot of a protocol. The branch of a randomized protocol and all
/// stochastic events are drawn from the given trial stream.
TrialRecord run_trial(const Protocol& protocol, Prepared prepared,
                      const NoiseProfile& noise, TrialRng& rng);

/// Same, but takes the compiled pulse schedule realizing the protocol's
/// single pipeline and checks that it matches before delegating.
TrialRecord run_trial(const Protocol& protocol, const PulseSchedule& schedule,
                      Prepared prepared, const NoiseProfile& noise,
                      TrialRng& rng);

/// Aggregated rates of a batch of shots, with binomial standard errors.
struct SweepRow {
  ProtocolKind kind;
  double theta = 0.0;
  double overlap = 0.0;
  long shots = 0;
  double p_corr = 0.0;
  double p_err = 0.0;
  double p_inconclusive = 0.0;
  double p_noresult = 0.0;
  double p_multipositive = 0.0;
  double efficiency = 0.0;
  double stderr_corr = 0.0;
  double stderr_err = 0.0;
  double stderr_inconclusive = 0.0;
};

/// Runs `shots` trials, preparing |a> or |b> per the pair's priors. The
/// result is bit-identical for a fixed seed no matter how many threads are
/// used (0 = hardware default).
SweepRow run_batch(const Protocol& protocol, const NoiseProfile& noise,
                   long shots, std::uint64_t seed, int threads = 0);

/// Table-style summary of one protocol over an overlap grid. Rates with a
/// result are conditioned on obtaining one, matching how measured outcome
/// fractions are reported.
struct ProtocolTableMetrics {
  double efficiency = 0.0;      // mean over the grid
  double multi_positive = 0.0;  // mean over the grid
  double error_mean = 0.0;      // mean conditional error over the grid
  double error_min = 1.0;
  double error_max = 0.0;
  double error_at_orthogonal = 0.0;  // conditional error at overlap 0
};

ProtocolTableMetrics simulate_table_metrics(
    ProtocolKind kind, const NoiseProfile& noise,
    const std::vector<double>& overlap_grid, long shots_per_point,
    std::uint64_t seed, int threads = 0);

/// Calibration targets: per protocol, the efficiency, the fraction of
/// trials with more than one positive probe, and a representative error
/// rate.
struct Table1Targets {
  struct Entry {
    double efficiency;
    double multi_positive;
    double error;
  };
  Entry susd{0.846, 0.010, 0.035};
  Entry idp{0.902, 0.102, 0.0575};   // error midpoint of the reported range
  Entry helstrom{0.831, 0.011, 0.040};  // error floor at zero overlap

  static Table1Targets reference() { return Table1Targets{}; }
};

struct CalibrationOptions {
  long shots_per_point = 20000;
  int max_sweeps = 40;
  std::uint64_t seed = 0x9d2c5680u;
  std::vector<double> overlap_grid{0.0, 0.125, 0.25, 0.375, 0.5,
                                   0.625, 0.75, 0.875, 1.0};
  int threads = 0;
};

struct CalibrationResult {
  NoiseProfile profile;
  double residual = 0.0;  // sum of squared relative deviations
  bool converged = false;
  int evaluations = 0;
};

/// Coordinate-descent fit of the five noise probabilities against the
/// targets, simultaneously across the three protocols. Deterministic for a
/// fixed option set. When the sweep budget runs out before the step size
/// underflows, the best profile so far is returned with converged = false.
CalibrationResult calibrate(const NoiseProfile& guess,
                            const Table1Targets& targets,
                            const CalibrationOptions& options = {});

}  // namespace qsd
