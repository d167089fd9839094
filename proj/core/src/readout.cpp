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

#include "qsd/readout.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace qsd {

const std::vector<Level>& NoiseProfile::readout_order(ProtocolKind kind) const {
  return kind == ProtocolKind::Idp ? idp_readout_order : usd_readout_order;
}

void NoiseProfile::validate() const {
  const double probs[] = {p_init_fail, p_true_positive,
                          p_false_positive_neighbor, p_false_positive_far,
                          p_flip_per_probe};
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw std::invalid_argument("noise probabilities must lie in [0, 1]");
    }
  }
  if (p_false_positive_far > p_false_positive_neighbor ||
      p_false_positive_neighbor > p_true_positive) {
    throw std::invalid_argument(
        "expected p_false_positive_far <= p_false_positive_neighbor <= "
        "p_true_positive");
  }
  for (const std::vector<Level>* order :
       {&usd_readout_order, &idp_readout_order}) {
    if (order->empty()) {
      throw std::invalid_argument("readout order must not be empty");
    }
    for (std::size_t i = 0; i < order->size(); ++i) {
      for (std::size_t j = i + 1; j < order->size(); ++j) {
        if ((*order)[i] == (*order)[j]) {
          throw std::invalid_argument("readout order repeats a level");
        }
      }
    }
  }
}

NoiseProfile NoiseProfile::zero() { return NoiseProfile{}; }

NoiseProfile NoiseProfile::default_guess() {
  NoiseProfile profile;
  profile.p_init_fail = 0.06;
  profile.p_true_positive = 0.92;
  profile.p_false_positive_neighbor = 0.03;
  profile.p_false_positive_far = 0.003;
  profile.p_flip_per_probe = 0.02;
  return profile;
}

std::string to_string(Assigned assigned) {
  switch (assigned) {
    case Assigned::A:
      return "A";
    case Assigned::B:
      return "B";
    case Assigned::Inconclusive:
      return "inconclusive";
    case Assigned::Unused:
      return "unused";
    case Assigned::NoResult:
      return "no_result";
  }
  return "?";
}

namespace {

constexpr Assigned to_assigned(LevelLabel label) {
  switch (label) {
    case LevelLabel::A:
      return Assigned::A;
    case LevelLabel::B:
      return Assigned::B;
    case LevelLabel::Inconclusive:
      return Assigned::Inconclusive;
    case LevelLabel::Unused:
      return Assigned::Unused;
  }
  return Assigned::Unused;
}

// Probed levels must be exactly the levels the protocol can assign; a
// positive on an off-protocol level would have no defined outcome.
void check_order_against_labels(const std::vector<Level>& order,
                                const ProtocolPipeline& pipeline) {
  int labeled = 0;
  for (int level = 0; level < 3; ++level) {
    const bool used =
        pipeline.level_labels[level] != LevelLabel::Unused;
    const bool probed =
        std::find(order.begin(), order.end(), static_cast<Level>(level)) !=
        order.end();
    if (used != probed) {
      throw std::invalid_argument(
          "readout order must probe exactly the labeled levels");
    }
    labeled += used ? 1 : 0;
  }
  if (static_cast<std::size_t>(labeled) != order.size()) {
    throw std::invalid_argument(
        "readout order must probe exactly the labeled levels");
  }
}

std::array<double, 3> populations_after(const ProtocolPipeline& pipeline,
                                        const StateVector& state) {
  const VectorC out = pipeline.unitary.entries() * state.amplitudes();
  return {std::norm(out(0)), std::norm(out(1)), std::norm(out(2))};
}

Level sample_level(const std::array<double, 3>& populations, TrialRng& rng) {
  const double u = rng.uniform();
  double cumulative = 0.0;
  for (int level = 0; level < 2; ++level) {
    cumulative += populations[level];
    if (u < cumulative) return static_cast<Level>(level);
  }
  return Level::MPlus1;
}

Level hop_to_adjacent(Level occupied, TrialRng& rng) {
  if (occupied == Level::M0) {
    return rng.with_probability(0.5) ? Level::MMinus1 : Level::MPlus1;
  }
  return Level::M0;
}

// Sequential single-shot probes over `order` with the spin starting on
// `occupied`; fills raw_positives and the first-positive assignment.
void run_probe_sequence(Level occupied, const ProtocolPipeline& pipeline,
                        const std::vector<Level>& order,
                        const NoiseProfile& noise, TrialRng& rng,
                        TrialRecord& record) {
  for (Level probe : order) {
    double p_fire;
    if (probe == occupied) {
      p_fire = noise.p_true_positive;
    } else if (adjacent(probe, occupied)) {
      p_fire = noise.p_false_positive_neighbor;
    } else {
      p_fire = noise.p_false_positive_far;
    }
    if (rng.with_probability(p_fire)) {
      record.raw_positives.push_back(probe);
    }
    if (rng.with_probability(noise.p_flip_per_probe)) {
      occupied = hop_to_adjacent(occupied, rng);
    }
  }
  record.positive_count = static_cast<int>(record.raw_positives.size());
  record.assigned = record.raw_positives.empty()
                        ? Assigned::NoResult
                        : to_assigned(pipeline.label(record.raw_positives.front()));
}

struct Tally {
  long correct = 0;
  long error = 0;
  long inconclusive = 0;
  long no_result = 0;
  long multi_positive = 0;

  void add(Prepared prepared, Assigned assigned, int positives) {
    if (positives > 1) ++multi_positive;
    switch (assigned) {
      case Assigned::A:
        (prepared == Prepared::StateA ? correct : error) += 1;
        break;
      case Assigned::B:
        (prepared == Prepared::StateB ? correct : error) += 1;
        break;
      case Assigned::Inconclusive:
        ++inconclusive;
        break;
      case Assigned::Unused:
      case Assigned::NoResult:
        ++no_result;
        break;
    }
  }

  void merge(const Tally& other) {
    correct += other.correct;
    error += other.error;
    inconclusive += other.inconclusive;
    no_result += other.no_result;
    multi_positive += other.multi_positive;
  }
};

// Everything a trial needs, precomputed once per batch.
struct BatchPlan {
  const Protocol* protocol;
  const NoiseProfile* noise;
  const std::vector<Level>* order;
  // populations[branch][prepared][level]
  std::vector<std::array<std::array<double, 3>, 2>> populations;

  explicit BatchPlan(const Protocol& p, const NoiseProfile& n)
      : protocol(&p), noise(&n), order(&n.readout_order(p.kind())) {
    n.validate();
    const auto [state_a, state_b] = prepare_pair(p.pair().theta);
    for (const ProtocolPipeline& branch : p.branches()) {
      check_order_against_labels(*order, branch);
      populations.push_back(
          {populations_after(branch, state_a), populations_after(branch, state_b)});
    }
  }

  TrialRecord run(Prepared prepared, TrialRng& rng) const {
    TrialRecord record;
    record.prepared = prepared;
    std::size_t branch = 0;
    if (populations.size() > 1) {
      const double u = rng.uniform();
      branch = std::min(populations.size() - 1,
                        static_cast<std::size_t>(u * populations.size()));
    }
    Level occupied;
    if (rng.with_probability(noise->p_init_fail)) {
      occupied = Level::M0;  // the pulses had no effect
    } else {
      occupied = sample_level(
          populations[branch][prepared == Prepared::StateA ? 0 : 1], rng);
    }
    run_probe_sequence(occupied, protocol->branches()[branch], *order, *noise,
                       rng, record);
    return record;
  }
};

int resolve_threads(int threads, long shots) {
  if (threads <= 0) {
    threads = static_cast<int>(std::thread::hardware_concurrency());
  }
  threads = std::max(1, std::min(threads, 64));
  const long per_thread_floor = 4096;
  const long useful =
      std::max<long>(1, (shots + per_thread_floor - 1) / per_thread_floor);
  return static_cast<int>(std::min<long>(threads, useful));
}

}  // namespace

TrialRecord run_trial(const Protocol& protocol, Prepared prepared,
                      const NoiseProfile& noise, TrialRng& rng) {
  const BatchPlan plan(protocol, noise);
  return plan.run(prepared, rng);
}

TrialRecord run_trial(const Protocol& protocol, const PulseSchedule& schedule,
                      Prepared prepared, const NoiseProfile& noise,
                      TrialRng& rng) {
  if (protocol.branches().size() != 1) {
    throw std::invalid_argument(
        "a single schedule cannot drive a randomized protocol");
  }
  if (phase_invariant_distance(schedule.full_product(),
                               protocol.branches().front().unitary) >
      kMatrixTol * 10) {
    throw std::invalid_argument(
        "pulse schedule does not realize the protocol pipeline");
  }
  return run_trial(protocol, prepared, noise, rng);
}

SweepRow run_batch(const Protocol& protocol, const NoiseProfile& noise,
                   long shots, std::uint64_t seed, int threads) {
  if (shots < 1) {
    throw std::invalid_argument("shots must be at least 1");
  }
  const BatchPlan plan(protocol, noise);
  const double prior_a = protocol.pair().prior_a;

  const int workers = resolve_threads(threads, shots);
  std::vector<Tally> tallies(workers);
  auto run_range = [&](long begin, long end, Tally& tally) {
    for (long trial = begin; trial < end; ++trial) {
      TrialRng rng(seed, static_cast<std::uint64_t>(trial));
      const Prepared prepared = rng.with_probability(prior_a)
                                    ? Prepared::StateA
                                    : Prepared::StateB;
      const TrialRecord record = plan.run(prepared, rng);
      tally.add(prepared, record.assigned, record.positive_count);
    }
  };

  if (workers == 1) {
    run_range(0, shots, tallies[0]);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      const long begin = shots * w / workers;
      const long end = shots * (w + 1) / workers;
      pool.emplace_back(run_range, begin, end, std::ref(tallies[w]));
    }
    for (std::thread& t : pool) t.join();
  }

  Tally total;
  for (const Tally& tally : tallies) total.merge(tally);

  SweepRow row;
  row.kind = protocol.kind();
  row.theta = protocol.pair().theta;
  row.overlap = overlap_from_theta(row.theta);
  row.shots = shots;
  const double n = static_cast<double>(shots);
  row.p_corr = total.correct / n;
  row.p_err = total.error / n;
  row.p_inconclusive = total.inconclusive / n;
  row.p_noresult = total.no_result / n;
  row.p_multipositive = total.multi_positive / n;
  row.efficiency = 1.0 - row.p_noresult;
  auto binom = [n](double p) { return std::sqrt(p * (1.0 - p) / n); };
  row.stderr_corr = binom(row.p_corr);
  row.stderr_err = binom(row.p_err);
  row.stderr_inconclusive = binom(row.p_inconclusive);
  return row;
}

namespace {

Protocol build_protocol(ProtocolKind kind, const StatePair& pair) {
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

}  // namespace

ProtocolTableMetrics simulate_table_metrics(
    ProtocolKind kind, const NoiseProfile& noise,
    const std::vector<double>& overlap_grid, long shots_per_point,
    std::uint64_t seed, int threads) {
  if (overlap_grid.empty()) {
    throw std::invalid_argument("overlap grid must not be empty");
  }
  ProtocolTableMetrics metrics;
  double min_overlap = 2.0;
  for (std::size_t i = 0; i < overlap_grid.size(); ++i) {
    const double overlap = overlap_grid[i];
    const StatePair pair =
        StatePair::equal_priors(theta_from_overlap(overlap));
    const Protocol protocol = build_protocol(kind, pair);
    const std::uint64_t cell_seed =
        derive_seed(seed, static_cast<std::uint64_t>(kind), i);
    const SweepRow row =
        run_batch(protocol, noise, shots_per_point, cell_seed, threads);
    metrics.efficiency += row.efficiency;
    metrics.multi_positive += row.p_multipositive;
    const double err_cond =
        row.efficiency > 1e-12 ? row.p_err / row.efficiency : 0.0;
    metrics.error_mean += err_cond;
    metrics.error_min = std::min(metrics.error_min, err_cond);
    metrics.error_max = std::max(metrics.error_max, err_cond);
    if (overlap < min_overlap) {
      min_overlap = overlap;
      metrics.error_at_orthogonal = err_cond;
    }
  }
  const double count = static_cast<double>(overlap_grid.size());
  metrics.efficiency /= count;
  metrics.multi_positive /= count;
  metrics.error_mean /= count;
  return metrics;
}

namespace {

double objective(const NoiseProfile& profile, const Table1Targets& targets,
                 const CalibrationOptions& options) {
  auto rel_sq = [](double value, double target) {
    const double d = (value - target) / target;
    return d * d;
  };
  double total = 0.0;
  const struct {
    ProtocolKind kind;
    Table1Targets::Entry entry;
    bool error_at_zero_overlap;
  } rows[] = {
      {ProtocolKind::SusdRandomized, targets.susd, false},
      {ProtocolKind::Idp, targets.idp, false},
      {ProtocolKind::Helstrom, targets.helstrom, true},
  };
  for (const auto& row : rows) {
    const ProtocolTableMetrics metrics = simulate_table_metrics(
        row.kind, profile, options.overlap_grid, options.shots_per_point,
        options.seed, options.threads);
    total += rel_sq(metrics.efficiency, row.entry.efficiency);
    total += rel_sq(metrics.multi_positive, row.entry.multi_positive);
    const double err = row.error_at_zero_overlap
                           ? metrics.error_at_orthogonal
                           : metrics.error_mean;
    total += rel_sq(err, row.entry.error);
  }
  return total;
}

NoiseProfile profile_from_params(const std::array<double, 5>& params,
                                 const NoiseProfile& base) {
  NoiseProfile profile = base;  // keeps the readout orders
  profile.p_init_fail = params[0];
  profile.p_true_positive = params[1];
  profile.p_false_positive_neighbor = std::min(params[2], params[1]);
  profile.p_false_positive_far =
      std::min(params[3], profile.p_false_positive_neighbor);
  profile.p_flip_per_probe = params[4];
  return profile;
}

}  // namespace

CalibrationResult calibrate(const NoiseProfile& guess,
                            const Table1Targets& targets,
                            const CalibrationOptions& options) {
  guess.validate();
  std::array<double, 5> params = {
      guess.p_init_fail, guess.p_true_positive,
      guess.p_false_positive_neighbor, guess.p_false_positive_far,
      guess.p_flip_per_probe};
  const std::array<double, 5> lower = {0.0, 0.5, 0.0, 0.0, 0.0};
  const std::array<double, 5> upper = {0.5, 1.0, 0.5, 0.5, 0.5};
  std::array<double, 5> step = {0.02, 0.02, 0.01, 0.004, 0.01};

  CalibrationResult result;
  result.profile = profile_from_params(params, guess);
  result.residual = objective(result.profile, targets, options);
  result.evaluations = 1;

  for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
    bool improved = false;
    for (std::size_t k = 0; k < params.size(); ++k) {
      for (double direction : {+1.0, -1.0}) {
        std::array<double, 5> candidate = params;
        candidate[k] = std::clamp(candidate[k] + direction * step[k],
                                  lower[k], upper[k]);
        if (candidate[k] == params[k]) continue;
        const NoiseProfile profile = profile_from_params(candidate, guess);
        const double value = objective(profile, targets, options);
        ++result.evaluations;
        if (value < result.residual) {
          result.residual = value;
          result.profile = profile;
          params = candidate;
          improved = true;
          break;  // keep sweeping from the improved point
        }
      }
    }
    if (!improved) {
      double max_step = 0.0;
      for (double& s : step) {
        s /= 2.0;
        max_step = std::max(max_step, s);
      }
      if (max_step < 1e-4) {
        result.converged = true;
        break;
      }
    }
  }
  return result;
}

}  // namespace qsd
