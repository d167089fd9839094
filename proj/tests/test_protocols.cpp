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

#include "qsd/protocols.hpp"

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"

namespace qsd {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(StatePairTest, ValidatesThetaAndPriors) {
  EXPECT_NO_THROW(StatePair::make(kPi / 8.0, 0.3, 0.7));
  EXPECT_THROW(StatePair::make(-0.2, 0.5, 0.5), std::domain_error);
  EXPECT_THROW(StatePair::make(1.0, 0.5, 0.5), std::domain_error);
  EXPECT_THROW(StatePair::make(0.2, 0.6, 0.6), std::invalid_argument);
  EXPECT_THROW(StatePair::make(0.2, -0.1, 1.1), std::invalid_argument);
}

TEST(PreparePairTest, ZeroThetaGivesIdenticalStates) {
  const auto [a, b] = prepare_pair(0.0);
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(a.amplitude(i), b.amplitude(i));
  }
  EXPECT_EQ(a.amplitude(Level::M0), Complex(1.0));
}

TEST(PreparePairTest, QuarterPiGivesOrthogonalPair) {
  const auto [a, b] = prepare_pair(kPi / 4.0);
  const double w = 1.0 / std::sqrt(2.0);
  EXPECT_NEAR(a.amplitude(Level::M0).real(), w, 1e-15);
  EXPECT_NEAR(a.amplitude(Level::MMinus1).real(), -w, 1e-15);
  EXPECT_NEAR(b.amplitude(Level::MMinus1).real(), w, 1e-15);
  EXPECT_NEAR(std::abs(inner_product(a, b)), 0.0, 1e-15);
}

TEST(PreparePairTest, SixthPiComponents) {
  const auto [a, b] = prepare_pair(kPi / 6.0);
  EXPECT_NEAR(a.amplitude(Level::M0).real(), 0.8660254037844387, 1e-12);
  EXPECT_NEAR(a.amplitude(Level::MMinus1).real(), -0.5, 1e-12);
  EXPECT_NEAR(std::abs(a.amplitude(Level::MPlus1)), 0.0, 1e-15);
}

TEST(BuildSusdTest, OrthogonalCaseIsDeterministic) {
  const Protocol protocol = build_susd(StatePair::equal_priors(kPi / 4.0),
                                       SusdBasis::ABasis);
  const IdealStats stats = ideal_stats(protocol);
  // With orthogonal states the complement outcome always fires on |b>.
  EXPECT_NEAR(stats.p_given_b(Outcome::B), 1.0, 1e-12);
  EXPECT_NEAR(stats.p_given_b(Outcome::Inconclusive), 0.0, 1e-12);
}

TEST(BuildSusdTest, EighthPiConclusiveRate) {
  // |<a_perp|b>|^2 = sin^2(pi/4) = 1/2, frozen from the Born-rule oracle.
  const Protocol protocol = build_susd(StatePair::equal_priors(kPi / 8.0),
                                       SusdBasis::ABasis);
  const IdealStats stats = ideal_stats(protocol);
  EXPECT_NEAR(stats.p_given_b(Outcome::B), 0.5, 1e-12);
  EXPECT_NEAR(stats.p_given_a(Outcome::B), 0.0, 1e-13);
}

TEST(BuildSusdTest, EighthPiInconclusiveRate) {
  // (1 + cos^2(pi/4)) / 2 = 0.75 for equal priors.
  const Protocol protocol =
      build_susd_randomized(StatePair::equal_priors(kPi / 8.0));
  const IdealStats stats = ideal_stats(protocol);
  EXPECT_NEAR(stats.p_inconclusive, 0.75, 1e-12);
}

TEST(BuildIdpTest, QuarterPiNeverFails) {
  const DiscriminationBasis basis = idp_basis(kPi / 4.0);
  // The failure direction collapses onto m+1 when the pair is orthogonal.
  EXPECT_NEAR(std::norm(basis.inconclusive.amplitude(Level::MPlus1)), 1.0,
              1e-12);
  const IdealStats stats =
      ideal_stats(build_idp(StatePair::equal_priors(kPi / 4.0)));
  EXPECT_NEAR(stats.p_inconclusive, 0.0, 1e-12);
  EXPECT_NEAR(stats.p_corr, 1.0, 1e-12);
}

TEST(BuildIdpTest, EighthPiMatchesClosedFormAndBornOracle) {
  const StatePair pair = StatePair::equal_priors(kPi / 8.0);
  const IdealStats stats = ideal_stats(build_idp(pair));
  EXPECT_NEAR(stats.p_inconclusive, 0.7071067811865476, 1e-12);
  EXPECT_NEAR(stats.p_given_a(Outcome::A), 0.2928932188134524, 1e-12);
  EXPECT_NEAR(stats.p_err, 0.0, 1e-13);

  // Independent route: Born probabilities against the projector POVM built
  // straight from the measurement basis.
  const DiscriminationBasis basis = idp_basis(kPi / 8.0);
  const Povm povm({{Outcome::A, Operator::projector(basis.detect_a)},
                   {Outcome::B, Operator::projector(basis.detect_b)},
                   {Outcome::Inconclusive,
                    Operator::projector(basis.inconclusive)}});
  const auto [a, b] = prepare_pair(kPi / 8.0);
  const OutcomeDistribution dist = born_probabilities(a, povm);
  EXPECT_NEAR(dist[Outcome::A], stats.p_given_a(Outcome::A), 1e-12);
  EXPECT_NEAR(dist[Outcome::Inconclusive],
              stats.p_given_a(Outcome::Inconclusive), 1e-12);
}

TEST(BuildIdpTest, ZeroThetaAlwaysInconclusive) {
  const IdealStats stats =
      ideal_stats(build_idp(StatePair::equal_priors(0.0)));
  EXPECT_NEAR(stats.p_inconclusive, 1.0, 1e-12);
  EXPECT_NEAR(stats.p_corr, 0.0, 1e-12);
}

TEST(BuildIdpTest, UnequalPriorsUnsupported) {
  EXPECT_THROW(build_idp(StatePair::make(0.3, 0.6, 0.4)),
               std::invalid_argument);
}

TEST(BuildIdpTest, EffectivePovmIsValid) {
  const PovmReport report =
      validate_povm(build_idp(StatePair::equal_priors(0.37)).effective_povm());
  EXPECT_TRUE(report.pass());
}

TEST(BuildSusdTest, EffectivePovmIsValidIncludingRandomized) {
  const StatePair pair = StatePair::equal_priors(0.22);
  EXPECT_TRUE(
      validate_povm(build_susd(pair, SusdBasis::ABasis).effective_povm())
          .pass());
  EXPECT_TRUE(
      validate_povm(build_susd_randomized(pair).effective_povm()).pass());
}

TEST(BuildHelstromTest, EighthPiErrorRate) {
  // (1 - sqrt(1 - cos^2(pi/4))) / 2, frozen; cross-checked by the search
  // oracle below.
  const IdealStats stats =
      ideal_stats(build_helstrom(StatePair::equal_priors(kPi / 8.0)));
  EXPECT_NEAR(stats.p_err, 0.1464466094067262, 1e-12);
  EXPECT_NEAR(stats.p_inconclusive, 0.0, 1e-13);
}

TEST(BuildHelstromTest, DegenerateAndOrthogonalEndpoints) {
  EXPECT_NEAR(ideal_stats(build_helstrom(StatePair::equal_priors(0.0))).p_err,
              0.5, 1e-12);
  EXPECT_NEAR(
      ideal_stats(build_helstrom(StatePair::equal_priors(kPi / 4.0))).p_err,
      0.0, 1e-12);
}

TEST(BuildHelstromTest, UnequalPriorsReachTheBound) {
  for (const double prior_a : {0.9, 0.7, 0.55, 0.2}) {
    for (const double theta : {0.05, kPi / 8.0, 0.6, kPi / 4.0}) {
      const StatePair pair = StatePair::make(theta, prior_a, 1.0 - prior_a);
      const IdealStats stats = ideal_stats(build_helstrom(pair));
      EXPECT_NEAR(stats.p_err, helstrom_bound(pair), 1e-12)
          << "prior_a=" << prior_a << " theta=" << theta;
    }
  }
}

TEST(IdealStatsTest, RandomizedSusdAtEighthPi) {
  const IdealStats stats =
      ideal_stats(build_susd_randomized(StatePair::equal_priors(kPi / 8.0)));
  EXPECT_NEAR(stats.p_corr, 0.25, 1e-12);
  EXPECT_NEAR(stats.p_inconclusive, 0.75, 1e-12);
  EXPECT_NEAR(stats.p_err, 0.0, 1e-13);
}

TEST(IdealStatsTest, HelstromAtEighthPi) {
  const IdealStats stats =
      ideal_stats(build_helstrom(StatePair::equal_priors(kPi / 8.0)));
  EXPECT_NEAR(stats.p_corr, 0.8535533905932738, 1e-12);
  EXPECT_NEAR(stats.p_err, 0.1464466094067262, 1e-12);
}

TEST(IdealStatsTest, ConditionalRowsSumToOne) {
  for (const double theta : {0.0, 0.1, kPi / 8.0, 0.5, kPi / 4.0}) {
    const StatePair pair = StatePair::equal_priors(theta);
    for (const Protocol& protocol :
         {build_susd_randomized(pair), build_idp(pair),
          build_helstrom(pair)}) {
      const IdealStats stats = ideal_stats(protocol);
      for (int prepared = 0; prepared < 2; ++prepared) {
        double row = 0.0;
        for (int outcome = 0; outcome < 3; ++outcome) {
          row += stats.conditional[prepared][outcome];
        }
        EXPECT_NEAR(row, 1.0, 1e-10);
      }
      EXPECT_NEAR(stats.p_corr + stats.p_err + stats.p_inconclusive, 1.0,
                  1e-10);
    }
  }
}

TEST(HelstromBoundTest, TrivialEndpoints) {
  EXPECT_NEAR(helstrom_bound(StatePair::equal_priors(kPi / 4.0)), 0.0, 1e-15);
  EXPECT_NEAR(helstrom_bound(StatePair::equal_priors(0.0)), 0.5, 1e-15);
}

TEST(HelstromBoundTest, SkewedPriorsValue) {
  // (1 - sqrt(1 - 4 * 0.9 * 0.1 * cos^2(pi/4))) / 2 = (1 - sqrt(0.82)) / 2.
  const StatePair pair = StatePair::make(kPi / 8.0, 0.9, 0.1);
  const double expected = (1.0 - std::sqrt(0.82)) / 2.0;
  EXPECT_NEAR(expected, 0.0472307430931291, 1e-12);
  EXPECT_NEAR(helstrom_bound(pair), expected, 1e-12);
}

// Closed-form identities across theta, the library-wide exactness contract.
TEST(ProtocolInvariantTest, ClosedFormsAcrossDenseGrid) {
  for (int k = 0; k <= 100; ++k) {
    const double theta = (kPi / 4.0) * k / 100.0;
    const double overlap = std::cos(2.0 * theta);
    const StatePair pair = StatePair::equal_priors(theta);

    const IdealStats idp = ideal_stats(build_idp(pair));
    EXPECT_NEAR(idp.p_inconclusive, overlap, 1e-12) << "theta=" << theta;

    const IdealStats susd = ideal_stats(build_susd_randomized(pair));
    EXPECT_NEAR(susd.p_inconclusive, (1.0 + overlap * overlap) / 2.0, 1e-12)
        << "theta=" << theta;

    const IdealStats helstrom = ideal_stats(build_helstrom(pair));
    EXPECT_NEAR(helstrom.p_err, helstrom_bound(pair), 1e-12)
        << "theta=" << theta;
  }
}

TEST(ProtocolInvariantTest, UnambiguityAcrossDenseGrid) {
  for (int k = 0; k <= 100; ++k) {
    const double theta = (kPi / 4.0) * k / 100.0;
    const StatePair pair = StatePair::equal_priors(theta);
    for (const Protocol& protocol :
         {build_susd(pair, SusdBasis::ABasis),
          build_susd(pair, SusdBasis::BBasis), build_susd_randomized(pair),
          build_idp(pair)}) {
      const IdealStats stats = ideal_stats(protocol);
      EXPECT_LE(stats.p_given_b(Outcome::A), 1e-12);
      EXPECT_LE(stats.p_given_a(Outcome::B), 1e-12);
    }
  }
}

TEST(ProtocolInvariantTest, OptimalFailureDominatesStandard) {
  // Strict improvement except for identical states.
  for (int k = 0; k <= 100; ++k) {
    const double theta = (kPi / 4.0) * k / 100.0;
    const StatePair pair = StatePair::equal_priors(theta);
    const double p_idp = ideal_stats(build_idp(pair)).p_inconclusive;
    const double p_susd =
        ideal_stats(build_susd_randomized(pair)).p_inconclusive;
    EXPECT_LE(p_idp, p_susd + 1e-12);
    if (theta > 1e-3) {
      EXPECT_LT(p_idp, p_susd);
    }
  }
}

TEST(ProtocolInvariantTest, CorrectRateMonotoneInOverlap) {
  double previous_idp = 2.0, previous_susd = 2.0, previous_helstrom = 2.0;
  for (int k = 0; k <= 64; ++k) {
    // Ascending overlap.
    const double overlap = static_cast<double>(k) / 64.0;
    const StatePair pair =
        StatePair::equal_priors(theta_from_overlap(overlap));
    const double p_idp = ideal_stats(build_idp(pair)).p_corr;
    const double p_susd = ideal_stats(build_susd_randomized(pair)).p_corr;
    const double p_helstrom = ideal_stats(build_helstrom(pair)).p_corr;
    EXPECT_LE(p_idp, previous_idp + 1e-12);
    EXPECT_LE(p_susd, previous_susd + 1e-12);
    EXPECT_LE(p_helstrom, previous_helstrom + 1e-12);
    previous_idp = p_idp;
    previous_susd = p_susd;
    previous_helstrom = p_helstrom;
  }
}

TEST(MinErrorBasisTest, InvariantUnderPositiveRescaling) {
  const StatePair pair = StatePair::make(0.31, 0.7, 0.3);
  const auto [a, b] = prepare_pair(pair.theta);
  const MatrixC weight =
      pair.prior_a * (a.amplitudes() * a.amplitudes().adjoint()) -
      pair.prior_b * (b.amplitudes() * b.amplitudes().adjoint());
  const auto [plus, minus] = min_error_basis(Operator(weight));
  const auto [plus_scaled, minus_scaled] =
      min_error_basis(Operator(MatrixC(3.7 * weight)));
  // The eigenvectors agree up to phase: |<v|w>| = 1.
  EXPECT_NEAR(std::abs(inner_product(plus, plus_scaled)), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(inner_product(minus, minus_scaled)), 1.0, 1e-12);
}

TEST(OracleMinErrorTest, MatchesClosedFormOnExamples) {
  EXPECT_LE(oracle_min_error_search(StatePair::equal_priors(kPi / 4.0), 128),
            1e-6);
  EXPECT_NEAR(
      oracle_min_error_search(StatePair::equal_priors(kPi / 8.0), 256),
      0.1464466094067262, 1e-4);
  EXPECT_NEAR(oracle_min_error_search(StatePair::make(kPi / 8.0, 0.9, 0.1),
                                      256),
              0.0472307430931291, 1e-4);
}

TEST(OracleMinErrorTest, NeverBeatsTheBound) {
  for (const double prior_a : {0.5, 0.75, 0.9}) {
    for (const double theta : {0.1, kPi / 8.0, 0.55}) {
      const StatePair pair = StatePair::make(theta, prior_a, 1.0 - prior_a);
      EXPECT_GE(oracle_min_error_search(pair, 128),
                helstrom_bound(pair) - 1e-6);
    }
  }
}

TEST(OracleMinErrorTest, RejectsCoarseGrid) {
  EXPECT_THROW(oracle_min_error_search(StatePair::equal_priors(0.1), 32),
               std::invalid_argument);
}

TEST(OracleUsdFailureTest, MatchesOverlapOnExamples) {
  EXPECT_LE(oracle_usd_failure_search(StatePair::equal_priors(kPi / 4.0), 128),
            1e-6);
  EXPECT_NEAR(
      oracle_usd_failure_search(StatePair::equal_priors(kPi / 8.0), 256),
      0.7071067811865476, 1e-4);
  EXPECT_NEAR(oracle_usd_failure_search(StatePair::equal_priors(0.0), 128),
              1.0, 1e-12);
}

TEST(OracleUsdFailureTest, NeverBeatsTheOverlapBound) {
  for (const double theta : {0.05, 0.2, kPi / 8.0, 0.5, kPi / 4.0}) {
    const StatePair pair = StatePair::equal_priors(theta);
    EXPECT_GE(oracle_usd_failure_search(pair, 96),
              overlap_from_theta(theta) - 1e-6);
  }
}

TEST(OracleUsdFailureTest, RequiresEqualPriorsAndFineGrid) {
  EXPECT_THROW(oracle_usd_failure_search(StatePair::make(0.2, 0.6, 0.4), 128),
               std::invalid_argument);
  EXPECT_THROW(oracle_usd_failure_search(StatePair::equal_priors(0.2), 63),
               std::invalid_argument);
}

}  // namespace
}  // namespace qsd
