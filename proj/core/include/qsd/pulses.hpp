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

// Compilation of the discrimination unitaries into ordered two-level
// rotations on the RF-addressable transitions m0 <-> m-1 and m0 <-> m+1.
//
// Rotation convention, used for every angle in this repository:
// a pulse of angle alpha and phase phi on transition (i, j) maps
//
//   |i> ->              cos(alpha/2) |i> + e^{+i phi} sin(alpha/2) |j>
//   |j> -> -e^{-i phi} sin(alpha/2) |i> +              cos(alpha/2) |j>
//
// and acts as the identity on the third level. With phi = 0 a "2 theta"
// pulse on m0 <-> m-1 carries |m0> to cos(theta)|m0> + sin(theta)|m-1>, and
// a "pi/2" pulse on the same transition is the balanced beam-splitter-like
// rotation used by the Helstrom measurement.

#include <cstddef>
#include <string>
#include <vector>

#include "qsd/qudit.hpp"

namespace qsd {

/// RF-addressable two-level transition.
enum class Transition { T0Minus1, T0Plus1 };

std::string to_string(Transition transition);

/// One rotation pulse. Angle is the full rotation angle (a "theta pulse"
/// has angle theta); angle and phase are kept in [0, 2 pi).
struct TwoLevelRotation {
  Transition transition;
  double angle;
  double phase;
};

/// Builds a rotation with angle and phase normalized into [0, 2 pi).
TwoLevelRotation make_rotation(Transition transition, double angle,
                               double phase = 0.0);

/// 3x3 unitary matrix of a pulse, per the convention above.
Operator rotation_matrix(const TwoLevelRotation& rotation);

/// Ordered pulse sequence. The first core_pulse_count pulses realize
/// intended_unitary (up to a global phase); trailing pulses only relabel
/// which level carries which outcome and are excluded from reconstruction.
struct PulseSchedule {
  std::vector<TwoLevelRotation> pulses;
  Operator intended_unitary;
  std::size_t core_pulse_count;

  /// Product of the first core_pulse_count pulse matrices, in execution
  /// order (later pulses multiply from the left).
  Operator core_product() const;
  /// Product of every pulse in the schedule.
  Operator full_product() const;
};

enum class SusdBasis { ABasis, BBasis };

/// Pulse sequence for the optimal unambiguous (IDP) measurement: a transfer
/// pulse on m0 <-> m+1 whose angle is 2 asin(sqrt(1 - tan^2 theta)), a pi/2
/// pulse on m0 <-> m-1, then the final pi relabeling pulse on m0 <-> m+1.
/// Throws std::domain_error for theta outside [0, pi/4].
PulseSchedule compile_idp(double theta);

/// Pulse sequence for standard unambiguous discrimination: a +/- 2 theta
/// pulse on m0 <-> m-1 selecting the measurement basis, then the final pi
/// relabeling pulse on m0 <-> m+1.
PulseSchedule compile_susd(double theta, SusdBasis which_basis);

/// Pulse sequence for the equal-prior minimum-error measurement: a pi/2
/// pulse on m0 <-> m-1, then the final pi relabeling pulse. Theta-independent.
PulseSchedule compile_helstrom(double theta_unused = 0.0);

/// Max entrywise deviation between the core pulse product and the intended
/// unitary, minimized over a global phase. A schedule passes verification
/// when the residual is at most kMatrixTol.
double verify_schedule(const PulseSchedule& schedule);

/// Plain-text export, one pulse per line in execution order:
/// `<transition> <angle_rad:.12f> <phase_rad:.12f>`.
std::string schedule_to_text(const PulseSchedule& schedule);

/// The final pi pulse on m0 <-> m+1. It parks the would-be m0 outcome on
/// m+1 so that a spin left untouched on m0 by a failed sequence reads out
/// as unused (SUSD, Helstrom) or inconclusive (IDP).
TwoLevelRotation relabeling_pulse();

}  // namespace qsd
