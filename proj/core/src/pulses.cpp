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

#include "qsd/pulses.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

namespace qsd {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double x) {
  double r = std::fmod(x, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  // fmod can land exactly on 2 pi after the correction.
  if (r >= kTwoPi) r = 0.0;
  return r;
}

// 1 - tan^2(theta) with a clamp for the representable neighborhood of
// theta = pi/4, where rounding of tan can push the difference barely
// negative.
double one_minus_tan_sq(double theta) {
  const double t = std::tan(theta);
  const double value = 1.0 - t * t;
  if (value < 0.0) {
    if (value < -kConstructionTol) {
      throw std::domain_error(
          "theta beyond pi/4: 1 - tan^2(theta) is negative");
    }
    return 0.0;
  }
  return value;
}

void check_theta_range(double theta) {
  if (theta < -kConstructionTol || theta > kPi / 4.0 + kConstructionTol) {
    throw std::domain_error("theta must lie in [0, pi/4], got " +
                            std::to_string(theta));
  }
}

// Closed-form targets for the compiled sequences, written entrywise so that
// reconstruction checks are independent of rotation_matrix.

// Maps the optimal unambiguous measurement basis onto the levels
// (m0 <- detect-a, m-1 <- detect-b, m+1 <- inconclusive).
Operator idp_target_unitary(double theta) {
  const double t = std::tan(theta);
  const double r = std::sqrt(one_minus_tan_sq(theta));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  MatrixC m(3, 3);
  m << Complex(t * inv_sqrt2), Complex(-inv_sqrt2), Complex(-r * inv_sqrt2),
      Complex(t * inv_sqrt2), Complex(inv_sqrt2), Complex(-r * inv_sqrt2),
      Complex(r), Complex(0.0), Complex(t);
  return Operator(std::move(m));
}

// Maps {|a>, |a_perp>} (or {|b>, |b_perp>}) onto (m0, m-1).
Operator susd_target_unitary(double theta, SusdBasis which_basis) {
  const double c = std::cos(theta);
  const double s =
      which_basis == SusdBasis::ABasis ? std::sin(theta) : -std::sin(theta);
  MatrixC m(3, 3);
  m << Complex(c), Complex(-s), Complex(0.0),  //
      Complex(s), Complex(c), Complex(0.0),    //
      Complex(0.0), Complex(0.0), Complex(1.0);
  return Operator(std::move(m));
}

// Maps the equal-prior minimum-error basis onto (m0, m-1).
Operator helstrom_target_unitary() {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  MatrixC m(3, 3);
  m << Complex(inv_sqrt2), Complex(-inv_sqrt2), Complex(0.0),
      Complex(inv_sqrt2), Complex(inv_sqrt2), Complex(0.0),  //
      Complex(0.0), Complex(0.0), Complex(1.0);
  return Operator(std::move(m));
}

}  // namespace

std::string to_string(Transition transition) {
  return transition == Transition::T0Minus1 ? "T0_minus1" : "T0_plus1";
}

TwoLevelRotation make_rotation(Transition transition, double angle,
                               double phase) {
  return TwoLevelRotation{transition, wrap_angle(angle), wrap_angle(phase)};
}

Operator rotation_matrix(const TwoLevelRotation& rotation) {
  if (rotation.angle < 0.0 || rotation.angle >= kTwoPi ||
      rotation.phase < 0.0 || rotation.phase >= kTwoPi) {
    throw std::invalid_argument(
        "rotation angle and phase must lie in [0, 2 pi)");
  }
  const int i = static_cast<int>(Level::M0);
  const int j = rotation.transition == Transition::T0Minus1
                    ? static_cast<int>(Level::MMinus1)
                    : static_cast<int>(Level::MPlus1);
  const double half = rotation.angle / 2.0;
  const Complex c(std::cos(half), 0.0);
  const Complex s(std::sin(half), 0.0);
  const Complex up = std::polar(1.0, rotation.phase);
  const Complex down = std::polar(1.0, -rotation.phase);

  MatrixC m = MatrixC::Identity(3, 3);
  m(i, i) = c;
  m(j, i) = up * s;
  m(i, j) = -down * s;
  m(j, j) = c;
  return Operator(std::move(m));
}

Operator PulseSchedule::core_product() const {
  Operator product = Operator::identity(intended_unitary.dimension());
  for (std::size_t k = 0; k < core_pulse_count && k < pulses.size(); ++k) {
    product = rotation_matrix(pulses[k]) * product;
  }
  return product;
}

Operator PulseSchedule::full_product() const {
  Operator product = Operator::identity(intended_unitary.dimension());
  for (const TwoLevelRotation& pulse : pulses) {
    product = rotation_matrix(pulse) * product;
  }
  return product;
}

TwoLevelRotation relabeling_pulse() {
  return make_rotation(Transition::T0Plus1, kPi);
}

PulseSchedule compile_idp(double theta) {
  check_theta_range(theta);
  const double root = std::sqrt(one_minus_tan_sq(theta));
  const double transfer_angle = 2.0 * std::asin(root);

  return PulseSchedule{
      {make_rotation(Transition::T0Plus1, transfer_angle),
       make_rotation(Transition::T0Minus1, kPi / 2.0), relabeling_pulse()},
      idp_target_unitary(theta),
      2};
}

PulseSchedule compile_susd(double theta, SusdBasis which_basis) {
  check_theta_range(theta);
  const double phase = which_basis == SusdBasis::ABasis ? 0.0 : kPi;
  return PulseSchedule{
      {make_rotation(Transition::T0Minus1, 2.0 * theta, phase),
       relabeling_pulse()},
      susd_target_unitary(theta, which_basis),
      1};
}

PulseSchedule compile_helstrom(double theta_unused) {
  (void)theta_unused;
  return PulseSchedule{
      {make_rotation(Transition::T0Minus1, kPi / 2.0), relabeling_pulse()},
      helstrom_target_unitary(),
      1};
}

double verify_schedule(const PulseSchedule& schedule) {
  return phase_invariant_distance(schedule.core_product(),
                                  schedule.intended_unitary);
}

std::string schedule_to_text(const PulseSchedule& schedule) {
  std::string text;
  char line[96];
  for (const TwoLevelRotation& pulse : schedule.pulses) {
    std::snprintf(line, sizeof(line), "%s %.12f %.12f\n",
                  to_string(pulse.transition).c_str(), pulse.angle,
                  pulse.phase);
    text += line;
  }
  return text;
}

}  // namespace qsd
