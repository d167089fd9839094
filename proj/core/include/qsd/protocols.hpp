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

// The three discrimination protocols for a pair of non-orthogonal states
//
//   |a> = cos(theta) |m0> - sin(theta) |m-1>
//   |b> = cos(theta) |m0> + sin(theta) |m-1>,   theta in [0, pi/4],
//
// each expressed as a pipeline: a working unitary that rotates the
// measurement basis onto the readout levels, a projective level measurement,
// and a relabeling of levels to outcomes. Closed-form ideal statistics and
// independent brute-force optimality oracles live here as well.

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qsd/pulses.hpp"
#include "qsd/qudit.hpp"

namespace qsd {

/// A prepared pair: half-angle theta and prior preparation probabilities.
struct StatePair {
  double theta;
  double prior_a;
  double prior_b;

  /// Validates theta in [0, pi/4] and prior_a + prior_b = 1 with both
  /// non-negative. Throws std::domain_error / std::invalid_argument.
  static StatePair make(double theta, double prior_a, double prior_b);
  static StatePair equal_priors(double theta) {
    return make(theta, 0.5, 0.5);
  }

  bool has_equal_priors() const;
};

/// |<a|b>| = cos(2 theta).
double overlap_from_theta(double theta);
/// Inverse of the above; overlap must lie in [0, 1].
double theta_from_overlap(double overlap);

/// The non-orthogonal pair of Eq.-style preparation, as qutrit states.
/// Throws std::domain_error for theta outside [0, pi/4].
std::pair<StateVector, StateVector> prepare_pair(double theta);

enum class ProtocolKind { SusdA, SusdB, SusdRandomized, Idp, Helstrom };

std::string to_string(ProtocolKind kind);
bool is_unambiguous(ProtocolKind kind);

/// What a positive result on a readout level means for a given protocol.
enum class LevelLabel { A, B, Inconclusive, Unused };

std::string to_string(LevelLabel label);

/// One concrete measurement branch: the unitary applied before the level
/// measurement (final relabeling pulse included) and the outcome label of
/// each level.
struct ProtocolPipeline {
  Operator unitary;
  std::array<LevelLabel, 3> level_labels;

  LevelLabel label(Level level) const {
    return level_labels[static_cast<int>(level)];
  }
};

/// A discrimination protocol. SusdRandomized carries two equally weighted
/// branches (the a-basis and b-basis measurements); every other kind has
/// exactly one.
class Protocol {
 public:
  Protocol(ProtocolKind kind, StatePair pair,
           std::vector<ProtocolPipeline> branches);

  ProtocolKind kind() const { return kind_; }
  const StatePair& pair() const { return pair_; }
  const std::vector<ProtocolPipeline>& branches() const { return branches_; }

  /// The branch-averaged POVM in the prepared-state space. Levels labeled
  /// Unused carry no weight for valid inputs and are folded into the
  /// inconclusive element so the set stays complete.
  Povm effective_povm() const;

 private:
  ProtocolKind kind_;
  StatePair pair_;
  std::vector<ProtocolPipeline> branches_;
};

/// Orthonormal measurement basis of the optimal unambiguous measurement:
/// detect_a is orthogonal to |b>, detect_b to |a>, and inconclusive spans
/// the failure direction.
struct DiscriminationBasis {
  StateVector detect_a;
  StateVector detect_b;
  StateVector inconclusive;
};

DiscriminationBasis idp_basis(double theta);

/// The 3x3 unitary carrying (detect_a, detect_b, inconclusive) onto the
/// levels (m0, m-1, m+1), before the final relabeling pulse.
Operator idp_level_unitary(double theta);

/// Standard unambiguous discrimination measuring in {|a>, |a_perp>} or
/// {|b>, |b_perp>}: the orthogonal-complement outcome identifies the other
/// state conclusively, the parallel outcome is inconclusive.
Protocol build_susd(const StatePair& pair, SusdBasis which_basis);

/// SUSD that draws the a-basis or b-basis with probability 1/2 per trial,
/// symmetrizing the conditional statistics.
Protocol build_susd_randomized(const StatePair& pair);

/// Optimal unambiguous (IDP) measurement. Equal priors only; throws
/// std::invalid_argument otherwise.
Protocol build_idp(const StatePair& pair);

/// Minimum-error measurement. For equal priors the basis is the symmetric
/// pair (|m0> -/+ |m-1>)/sqrt(2); for unequal priors it is the eigenbasis
/// of prior_a |a><a| - prior_b |b><b| with the positive-eigenvalue vector
/// labeled A.
Protocol build_helstrom(const StatePair& pair);

/// Exact Born-rule statistics of a protocol.
struct IdealStats {
  double p_corr = 0.0;
  double p_err = 0.0;
  double p_inconclusive = 0.0;
  // conditional[prepared][outcome], prepared in {a=0, b=1},
  // outcome in {A, B, Inconclusive}.
  std::array<std::array<double, 3>, 2> conditional{};

  double p_given_a(Outcome j) const {
    return conditional[0][static_cast<int>(j)];
  }
  double p_given_b(Outcome j) const {
    return conditional[1][static_cast<int>(j)];
  }
};

IdealStats ideal_stats(const Protocol& protocol);

/// Minimum average error probability of any measurement on the pair:
/// (1 - sqrt(1 - 4 p_a p_b |<a|b>|^2)) / 2.
double helstrom_bound(const StatePair& pair);

/// Eigenbasis construction behind the unequal-prior minimum-error
/// measurement: returns the (positive, negative) eigenvalue eigenvectors of
/// the Hermitian weight operator. Invariant under positive rescaling of the
/// weight. Exposed for property tests.
std::pair<StateVector, StateVector> min_error_basis(const Operator& weight);

/// Brute-force minimum of the average error probability over two-outcome
/// orthonormal projective bases in the span of the pair, on a grid over the
/// rotation angle and relative phase. grid_resolution >= 64.
double oracle_min_error_search(const StatePair& pair, int grid_resolution);

/// Brute-force minimum of the inconclusive probability over three-outcome
/// orthonormal bases of the full space obeying the unambiguity constraints
/// p(A|b) = p(B|a) = 0. The inconclusive direction is swept over its
/// feasible one-parameter family and the conclusive projectors are derived
/// from it. Equal priors only; grid_resolution >= 64.
double oracle_usd_failure_search(const StatePair& pair, int grid_resolution);

}  // namespace qsd
