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
#include <numbers>
#include <random>
#include <sstream>

#include "gtest/gtest.h"
#include "qsd/protocols.hpp"

namespace qsd {
namespace {

constexpr double kPi = std::numbers::pi;

// The target unitary written out entrywise: rows are the discrimination
// basis vectors expressed through tan(theta), independent of both
// rotation_matrix and idp_level_unitary.
Operator expected_level_mapping(double theta) {
  const double t = std::tan(theta);
  const double r = std::sqrt(std::max(0.0, 1.0 - t * t));
  const double w = 1.0 / std::sqrt(2.0);
  MatrixC m(3, 3);
  m << Complex(t * w), Complex(-w), Complex(-r * w),  //
      Complex(t * w), Complex(w), Complex(-r * w),    //
      Complex(r), Complex(0.0), Complex(t);
  return Operator(std::move(m));
}

TEST(RotationMatrixTest, ZeroAngleIsIdentity) {
  const Operator m =
      rotation_matrix(make_rotation(Transition::T0Minus1, 0.0));
  EXPECT_LE(max_abs_difference(m, Operator::identity(3)), 1e-15);
}

TEST(RotationMatrixTest, BalancedPulseOnLowerTransition) {
  const Operator m =
      rotation_matrix(make_rotation(Transition::T0Minus1, kPi / 2.0));
  const double w = 1.0 / std::sqrt(2.0);
  MatrixC expected(3, 3);
  expected << Complex(w), Complex(-w), Complex(0.0),  //
      Complex(w), Complex(w), Complex(0.0),           //
      Complex(0.0), Complex(0.0), Complex(1.0);
  EXPECT_LE(max_abs_difference(m, Operator(expected)), 1e-15);
}

TEST(RotationMatrixTest, TransferPulseOnUpperTransition) {
  // The transfer pulse of the three-outcome sequence at theta = pi/8,
  // compared entrywise against its tan/sqrt closed form.
  const double theta = kPi / 8.0;
  const double t = std::tan(theta);
  const double r = std::sqrt(1.0 - t * t);
  const Operator m = rotation_matrix(
      make_rotation(Transition::T0Plus1, 2.0 * std::asin(r)));
  MatrixC expected(3, 3);
  expected << Complex(t), Complex(0.0), Complex(-r),  //
      Complex(0.0), Complex(1.0), Complex(0.0),       //
      Complex(r), Complex(0.0), Complex(t);
  EXPECT_LE(max_abs_difference(m, Operator(expected)), 1e-12);
}

TEST(RotationMatrixTest, UnitaryForRandomAnglesAndPhases) {
  std::mt19937 gen(23);
  std::uniform_real_distribution<double> uniform(0.0, 2.0 * kPi);
  for (int trial = 0; trial < 50; ++trial) {
    const Transition transition =
        trial % 2 ? Transition::T0Minus1 : Transition::T0Plus1;
    const Operator m = rotation_matrix(
        make_rotation(transition, uniform(gen), uniform(gen)));
    EXPECT_TRUE(m.is_unitary(1e-12));
  }
}

TEST(RotationMatrixTest, NormalizationWrapsIntoRange) {
  const TwoLevelRotation r = make_rotation(Transition::T0Plus1, -kPi / 2.0);
  EXPECT_NEAR(r.angle, 3.0 * kPi / 2.0, 1e-12);
  EXPECT_THROW(
      rotation_matrix(TwoLevelRotation{Transition::T0Plus1, -1.0, 0.0}),
      std::invalid_argument);
}

TEST(CompileIdpTest, TransferAngleVanishesAtQuarterPi) {
  const PulseSchedule schedule = compile_idp(kPi / 4.0);
  EXPECT_NEAR(schedule.pulses[0].angle, 0.0, 1e-7);
}

TEST(CompileIdpTest, TransferAngleAtEighthPi) {
  const PulseSchedule schedule = compile_idp(kPi / 8.0);
  const double expected =
      2.0 * std::asin(std::sqrt(1.0 - std::pow(std::tan(kPi / 8.0), 2)));
  EXPECT_NEAR(schedule.pulses[0].angle, expected, 1e-12);
  EXPECT_NEAR(schedule.pulses[0].angle, 2.2874, 5e-4);
  EXPECT_LE(verify_schedule(schedule), 1e-10);
}

TEST(CompileIdpTest, FullTransferAtZeroTheta) {
  const PulseSchedule schedule = compile_idp(0.0);
  EXPECT_NEAR(schedule.pulses[0].angle, kPi, 1e-12);
}

TEST(CompileIdpTest, ScheduleShape) {
  const PulseSchedule schedule = compile_idp(0.3);
  ASSERT_EQ(schedule.pulses.size(), 3u);
  EXPECT_EQ(schedule.pulses[0].transition, Transition::T0Plus1);
  EXPECT_EQ(schedule.pulses[1].transition, Transition::T0Minus1);
  EXPECT_NEAR(schedule.pulses[1].angle, kPi / 2.0, 1e-15);
  EXPECT_EQ(schedule.pulses[2].transition, Transition::T0Plus1);
  EXPECT_NEAR(schedule.pulses[2].angle, kPi, 1e-15);
  EXPECT_EQ(schedule.core_pulse_count, 2u);
}

TEST(CompileIdpTest, RejectsThetaOutsideRange) {
  EXPECT_THROW(compile_idp(-0.1), std::domain_error);
  EXPECT_THROW(compile_idp(kPi / 4.0 + 0.01), std::domain_error);
}

TEST(CompileIdpTest, CoreProductReconstructsLevelMappingOnDenseGrid) {
  for (int k = 0; k <= 100; ++k) {
    const double theta = (kPi / 4.0) * k / 100.0;
    const PulseSchedule schedule = compile_idp(theta);
    EXPECT_LE(phase_invariant_distance(schedule.core_product(),
                                       expected_level_mapping(theta)),
              1e-10)
        << "theta=" << theta;
    EXPECT_LE(verify_schedule(schedule), 1e-10) << "theta=" << theta;
  }
}

TEST(CompileIdpTest, PulsePairProductMatchesRandomThetas) {
  std::mt19937 gen(29);
  std::uniform_real_distribution<double> uniform(0.0, kPi / 4.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double theta = uniform(gen);
    const double t = std::tan(theta);
    const double r = std::sqrt(1.0 - t * t);
    const Operator lower =
        rotation_matrix(make_rotation(Transition::T0Minus1, kPi / 2.0));
    const Operator upper = rotation_matrix(
        make_rotation(Transition::T0Plus1, 2.0 * std::asin(r)));
    EXPECT_LE(
        max_abs_difference(lower * upper, expected_level_mapping(theta)),
        1e-12)
        << "theta=" << theta;
  }
}

TEST(CompileSusdTest, ZeroThetaFirstPulseIsIdentity) {
  const PulseSchedule schedule = compile_susd(0.0, SusdBasis::ABasis);
  EXPECT_NEAR(schedule.pulses[0].angle, 0.0, 1e-15);
  EXPECT_LE(max_abs_difference(rotation_matrix(schedule.pulses[0]),
                               Operator::identity(3)),
            1e-15);
}

TEST(CompileSusdTest, ABasisPutsNoAStateWeightOnConclusiveLevel) {
  const auto [a, b] = prepare_pair(kPi / 8.0);
  const PulseSchedule schedule = compile_susd(kPi / 8.0, SusdBasis::ABasis);
  const StateVector out = apply_unitary(schedule.full_product(), a);
  EXPECT_NEAR(std::abs(out.amplitude(Level::MMinus1)), 0.0, 1e-12);
  EXPECT_LE(verify_schedule(schedule), 1e-10);
}

TEST(CompileSusdTest, BBasisMirrorsABasisWithOppositePhase) {
  const PulseSchedule a = compile_susd(kPi / 8.0, SusdBasis::ABasis);
  const PulseSchedule b = compile_susd(kPi / 8.0, SusdBasis::BBasis);
  EXPECT_NEAR(a.pulses[0].angle, b.pulses[0].angle, 1e-15);
  EXPECT_NEAR(a.pulses[0].phase, 0.0, 1e-15);
  EXPECT_NEAR(b.pulses[0].phase, kPi, 1e-15);
  const auto [state_a, state_b] = prepare_pair(kPi / 8.0);
  const StateVector out = apply_unitary(b.full_product(), state_b);
  EXPECT_NEAR(std::abs(out.amplitude(Level::MMinus1)), 0.0, 1e-12);
}

TEST(CompileHelstromTest, CoreMatchesBalancedRotation) {
  const PulseSchedule schedule = compile_helstrom();
  EXPECT_LE(verify_schedule(schedule), 1e-12);
  const double w = 1.0 / std::sqrt(2.0);
  MatrixC expected(3, 3);
  expected << Complex(w), Complex(-w), Complex(0.0),  //
      Complex(w), Complex(w), Complex(0.0),           //
      Complex(0.0), Complex(0.0), Complex(1.0);
  EXPECT_LE(max_abs_difference(schedule.core_product(), Operator(expected)),
            1e-15);
}

TEST(CompileHelstromTest, MeasurementBasisStateLandsOnOneLevel) {
  const double w = 1.0 / std::sqrt(2.0);
  const StateVector a_prime{Complex(w), Complex(-w), Complex(0.0)};
  const StateVector out =
      apply_unitary(compile_helstrom().full_product(), a_prime);
  EXPECT_NEAR(std::norm(out.amplitude(Level::MPlus1)), 1.0, 1e-12);
}

TEST(CompileHelstromTest, MZeroSplitsEvenlyAcrossConclusiveLevels) {
  const StateVector m0{Complex(1.0), Complex(0.0), Complex(0.0)};
  const StateVector out =
      apply_unitary(compile_helstrom().full_product(), m0);
  EXPECT_NEAR(std::norm(out.amplitude(Level::MPlus1)), 0.5, 1e-12);
  EXPECT_NEAR(std::norm(out.amplitude(Level::MMinus1)), 0.5, 1e-12);
}

TEST(VerifyScheduleTest, PerturbedAngleIsDetected) {
  PulseSchedule schedule = compile_idp(kPi / 8.0);
  schedule.pulses[0].angle += 1e-3;
  EXPECT_GT(verify_schedule(schedule), 1e-4);
}

TEST(VerifyScheduleTest, EmptyScheduleWithIdentityIntentIsExact) {
  const PulseSchedule schedule{{}, Operator::identity(3), 0};
  EXPECT_EQ(verify_schedule(schedule), 0.0);
}

TEST(ScheduleTextTest, FormatIsTransitionAnglePhase) {
  const PulseSchedule schedule = compile_helstrom();
  const std::string text = schedule_to_text(schedule);
  EXPECT_EQ(text,
            "T0_minus1 1.570796326795 0.000000000000\n"
            "T0_plus1 3.141592653590 0.000000000000\n");
}

TEST(ScheduleTextTest, RoundTripsThroughParsing) {
  const PulseSchedule schedule = compile_idp(0.21);
  std::istringstream in(schedule_to_text(schedule));
  std::string transition;
  double angle = 0.0, phase = 0.0;
  std::size_t index = 0;
  while (in >> transition >> angle >> phase) {
    ASSERT_LT(index, schedule.pulses.size());
    EXPECT_EQ(transition, to_string(schedule.pulses[index].transition));
    EXPECT_NEAR(angle, schedule.pulses[index].angle, 1e-12);
    EXPECT_NEAR(phase, schedule.pulses[index].phase, 1e-12);
    ++index;
  }
  EXPECT_EQ(index, schedule.pulses.size());
}

// Consistency between the abstract pipelines and the compiled pulses: the
// full pulse product equals the pipeline unitary up to a global phase, so
// the two routes share their statistics exactly.
TEST(CompilerProtocolConsistencyTest, SchedulesRealizeProtocolPipelines) {
  for (int k = 0; k <= 40; ++k) {
    const double theta = (kPi / 4.0) * k / 40.0;
    const StatePair pair = StatePair::equal_priors(theta);

    EXPECT_LE(phase_invariant_distance(
                  compile_idp(theta).full_product(),
                  build_idp(pair).branches().front().unitary),
              1e-10);
    EXPECT_LE(
        phase_invariant_distance(
            compile_susd(theta, SusdBasis::ABasis).full_product(),
            build_susd(pair, SusdBasis::ABasis).branches().front().unitary),
        1e-10);
    EXPECT_LE(
        phase_invariant_distance(
            compile_susd(theta, SusdBasis::BBasis).full_product(),
            build_susd(pair, SusdBasis::BBasis).branches().front().unitary),
        1e-10);
    EXPECT_LE(phase_invariant_distance(
                  compile_helstrom(theta).full_product(),
                  build_helstrom(pair).branches().front().unitary),
              1e-10);
  }
}

TEST(CompilerProtocolConsistencyTest, CompiledIdpLevelsMatchIdealStats) {
  for (const double theta : {0.0, 0.2, kPi / 8.0, 0.6, kPi / 4.0}) {
    const StatePair pair = StatePair::equal_priors(theta);
    const IdealStats stats = ideal_stats(build_idp(pair));
    const Operator compiled = compile_idp(theta).full_product();
    const auto [a, b] = prepare_pair(theta);

    // After the compiled sequence, m+1 detects a, m-1 detects b and m0 is
    // inconclusive.
    const StateVector out_a = apply_unitary(compiled, a);
    const StateVector out_b = apply_unitary(compiled, b);
    EXPECT_NEAR(std::norm(out_a.amplitude(Level::MPlus1)),
                stats.p_given_a(Outcome::A), 1e-10);
    EXPECT_NEAR(std::norm(out_a.amplitude(Level::M0)),
                stats.p_given_a(Outcome::Inconclusive), 1e-10);
    EXPECT_NEAR(std::norm(out_b.amplitude(Level::MMinus1)),
                stats.p_given_b(Outcome::B), 1e-10);
    EXPECT_NEAR(std::norm(out_b.amplitude(Level::MPlus1)),
                stats.p_given_b(Outcome::A), 1e-10);
  }
}

}  // namespace
}  // namespace qsd
