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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace qsd {

namespace {

constexpr double kPi = std::numbers::pi;

void check_theta_range(double theta) {
  if (theta < -kConstructionTol || theta > kPi / 4.0 + kConstructionTol) {
    throw std::domain_error("theta must lie in [0, pi/4], got " +
                            std::to_string(theta));
  }
}

double clamped_one_minus_tan_sq(double theta) {
  const double t = std::tan(theta);
  return std::max(0.0, 1.0 - t * t);
}

// Populations over the three levels after running one pipeline on a state.
std::array<double, 3> level_populations(const ProtocolPipeline& pipeline,
                                        const StateVector& state) {
  const VectorC out = pipeline.unitary.entries() * state.amplitudes();
  return {std::norm(out(0)), std::norm(out(1)), std::norm(out(2))};
}

void enforce_unambiguity(const Protocol& protocol) {
  const IdealStats stats = ideal_stats(protocol);
  if (stats.p_given_b(Outcome::A) > kConstructionTol ||
      stats.p_given_a(Outcome::B) > kConstructionTol) {
    throw std::logic_error("unambiguous pipeline leaks a conclusive error");
  }
}

}  // namespace

StatePair StatePair::make(double theta, double prior_a, double prior_b) {
  check_theta_range(theta);
  if (prior_a < 0.0 || prior_b < 0.0 ||
      std::abs(prior_a + prior_b - 1.0) > kConstructionTol) {
    throw std::invalid_argument("priors must be non-negative and sum to 1");
  }
  return StatePair{theta, prior_a, prior_b};
}

bool StatePair::has_equal_priors() const {
  return std::abs(prior_a - prior_b) <= kConstructionTol;
}

double overlap_from_theta(double theta) { return std::cos(2.0 * theta); }

double theta_from_overlap(double overlap) {
  if (overlap < -kConstructionTol || overlap > 1.0 + kConstructionTol) {
    throw std::domain_error("overlap must lie in [0, 1], got " +
                            std::to_string(overlap));
  }
  return std::acos(std::clamp(overlap, 0.0, 1.0)) / 2.0;
}

std::pair<StateVector, StateVector> prepare_pair(double theta) {
  check_theta_range(theta);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {StateVector{Complex(c), Complex(-s), Complex(0.0)},
          StateVector{Complex(c), Complex(s), Complex(0.0)}};
}

std::string to_string(ProtocolKind kind) {
  switch (kind) {
    case ProtocolKind::SusdA:
      return "susd_a";
    case ProtocolKind::SusdB:
      return "susd_b";
    case ProtocolKind::SusdRandomized:
      return "susd";
    case ProtocolKind::Idp:
      return "idp";
    case ProtocolKind::Helstrom:
      return "helstrom";
  }
  return "?";
}

bool is_unambiguous(ProtocolKind kind) {
  return kind != ProtocolKind::Helstrom;
}

std::string to_string(LevelLabel label) {
  switch (label) {
    case LevelLabel::A:
      return "A";
    case LevelLabel::B:
      return "B";
    case LevelLabel::Inconclusive:
      return "inconclusive";
    case LevelLabel::Unused:
      return "unused";
  }
  return "?";
}

Protocol::Protocol(ProtocolKind kind, StatePair pair,
                   std::vector<ProtocolPipeline> branches)
    : kind_(kind), pair_(pair), branches_(std::move(branches)) {
  if (branches_.empty()) {
    throw std::invalid_argument("protocol needs at least one branch");
  }
  for (const ProtocolPipeline& branch : branches_) {
    if (branch.unitary.dimension() != 3 || !branch.unitary.is_unitary()) {
      throw std::invalid_argument("branch unitary must be a 3x3 unitary");
    }
  }
}

Povm Protocol::effective_povm() const {
  const double weight = 1.0 / static_cast<double>(branches_.size());
  std::array<MatrixC, 3> sums = {MatrixC::Zero(3, 3), MatrixC::Zero(3, 3),
                                 MatrixC::Zero(3, 3)};
  for (const ProtocolPipeline& branch : branches_) {
    const MatrixC& u = branch.unitary.entries();
    for (int level = 0; level < 3; ++level) {
      LevelLabel label = branch.level_labels[level];
      // Unused levels never fire on valid inputs; fold them into the
      // inconclusive element so the POVM stays complete.
      const Outcome outcome =
          label == LevelLabel::A   ? Outcome::A
          : label == LevelLabel::B ? Outcome::B
                                   : Outcome::Inconclusive;
      const VectorC row = u.row(level).adjoint();
      sums[static_cast<int>(outcome)] += weight * (row * row.adjoint());
    }
  }
  std::vector<PovmElement> elements;
  elements.reserve(3);
  for (int k = 0; k < 3; ++k) {
    elements.push_back(
        PovmElement{static_cast<Outcome>(k), Operator(sums[k])});
  }
  return Povm(std::move(elements));
}

DiscriminationBasis idp_basis(double theta) {
  check_theta_range(theta);
  const double t = std::tan(theta);
  const double r = std::sqrt(clamped_one_minus_tan_sq(theta));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  return DiscriminationBasis{
      StateVector{Complex(t * inv_sqrt2), Complex(-inv_sqrt2),
                  Complex(-r * inv_sqrt2)},
      StateVector{Complex(t * inv_sqrt2), Complex(inv_sqrt2),
                  Complex(-r * inv_sqrt2)},
      StateVector{Complex(r), Complex(0.0), Complex(t)}};
}

Operator idp_level_unitary(double theta) {
  const DiscriminationBasis basis = idp_basis(theta);
  MatrixC m(3, 3);
  m.row(0) = basis.detect_a.amplitudes().adjoint();
  m.row(1) = basis.detect_b.amplitudes().adjoint();
  m.row(2) = basis.inconclusive.amplitudes().adjoint();
  return Operator(std::move(m));
}

Protocol build_susd(const StatePair& pair, SusdBasis which_basis) {
  const PulseSchedule schedule = compile_susd(pair.theta, which_basis);
  const Operator unitary = schedule.full_product();
  // The orthogonal-complement outcome sits on m-1 and conclusively names
  // the other state; the parallel outcome is parked on m+1, inconclusive.
  const LevelLabel conclusive =
      which_basis == SusdBasis::ABasis ? LevelLabel::B : LevelLabel::A;
  Protocol protocol(
      which_basis == SusdBasis::ABasis ? ProtocolKind::SusdA
                                       : ProtocolKind::SusdB,
      pair,
      {ProtocolPipeline{
          unitary,
          {LevelLabel::Unused, conclusive, LevelLabel::Inconclusive}}});
  enforce_unambiguity(protocol);
  return protocol;
}

Protocol build_susd_randomized(const StatePair& pair) {
  const Protocol a = build_susd(pair, SusdBasis::ABasis);
  const Protocol b = build_susd(pair, SusdBasis::BBasis);
  Protocol protocol(ProtocolKind::SusdRandomized, pair,
                    {a.branches().front(), b.branches().front()});
  enforce_unambiguity(protocol);
  return protocol;
}

Protocol build_idp(const StatePair& pair) {
  if (!pair.has_equal_priors()) {
    throw std::invalid_argument(
        "the optimal unambiguous measurement is built for equal priors only");
  }
  const Operator unitary =
      rotation_matrix(relabeling_pulse()) * idp_level_unitary(pair.theta);
  // After the relabeling pulse the detect-a outcome sits on m+1, the
  // detect-b outcome on m-1 and the failure direction on m0.
  Protocol protocol(ProtocolKind::Idp, pair,
                    {ProtocolPipeline{unitary,
                                      {LevelLabel::Inconclusive, LevelLabel::B,
                                       LevelLabel::A}}});
  enforce_unambiguity(protocol);
  return protocol;
}

std::pair<StateVector, StateVector> min_error_basis(const Operator& weight) {
  if (!weight.is_hermitian(kMatrixTol)) {
    throw std::invalid_argument("weight operator must be Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<MatrixC> solver(weight.entries());
  const int last = weight.dimension() - 1;
  // Eigenvalues come out ascending.
  return {StateVector(VectorC(solver.eigenvectors().col(last))),
          StateVector(VectorC(solver.eigenvectors().col(0)))};
}

Protocol build_helstrom(const StatePair& pair) {
  Operator unitary = Operator::identity(3);
  if (pair.has_equal_priors()) {
    unitary = compile_helstrom(pair.theta).full_product();
  } else {
    const auto [a, b] = prepare_pair(pair.theta);
    const MatrixC weight =
        pair.prior_a * (a.amplitudes() * a.amplitudes().adjoint()) -
        pair.prior_b * (b.amplitudes() * b.amplitudes().adjoint());
    Eigen::SelfAdjointEigenSolver<MatrixC> solver(weight);
    MatrixC rows(3, 3);
    rows.row(0) = solver.eigenvectors().col(2).adjoint();  // outcome A on m0
    rows.row(1) = solver.eigenvectors().col(0).adjoint();  // outcome B on m-1
    rows.row(2) = solver.eigenvectors().col(1).adjoint();
    unitary = rotation_matrix(relabeling_pulse()) * Operator(std::move(rows));
  }
  return Protocol(
      ProtocolKind::Helstrom, pair,
      {ProtocolPipeline{
          unitary, {LevelLabel::Unused, LevelLabel::B, LevelLabel::A}}});
}

IdealStats ideal_stats(const Protocol& protocol) {
  const StatePair& pair = protocol.pair();
  const auto [state_a, state_b] = prepare_pair(pair.theta);
  const double weight = 1.0 / static_cast<double>(protocol.branches().size());

  IdealStats stats;
  for (int prepared = 0; prepared < 2; ++prepared) {
    const StateVector& state = prepared == 0 ? state_a : state_b;
    for (const ProtocolPipeline& branch : protocol.branches()) {
      const std::array<double, 3> pops = level_populations(branch, state);
      for (int level = 0; level < 3; ++level) {
        const LevelLabel label = branch.level_labels[level];
        if (label == LevelLabel::Unused) {
          if (pops[level] > kConstructionTol) {
            throw std::logic_error("population leaked onto an unused level");
          }
          continue;
        }
        stats.conditional[prepared][static_cast<int>(label)] +=
            weight * pops[level];
      }
    }
  }
  stats.p_corr = pair.prior_a * stats.p_given_a(Outcome::A) +
                 pair.prior_b * stats.p_given_b(Outcome::B);
  stats.p_err = pair.prior_a * stats.p_given_a(Outcome::B) +
                pair.prior_b * stats.p_given_b(Outcome::A);
  stats.p_inconclusive =
      pair.prior_a * stats.p_given_a(Outcome::Inconclusive) +
      pair.prior_b * stats.p_given_b(Outcome::Inconclusive);
  return stats;
}

double helstrom_bound(const StatePair& pair) {
  const double overlap = overlap_from_theta(pair.theta);
  const double discriminant = std::max(
      0.0, 1.0 - 4.0 * pair.prior_a * pair.prior_b * overlap * overlap);
  return (1.0 - std::sqrt(discriminant)) / 2.0;
}

double oracle_min_error_search(const StatePair& pair, int grid_resolution) {
  if (grid_resolution < 64) {
    throw std::invalid_argument("grid resolution must be at least 64");
  }
  const double c = std::cos(pair.theta);
  const double s = std::sin(pair.theta);
  // 2D amplitudes of the pair in the span of (m0, m-1).
  const Complex a0(c), a1(-s), b0(c), b1(s);

  double best = 1.0;
  for (int i = 0; i < grid_resolution; ++i) {
    const double phi = kPi * static_cast<double>(i) / grid_resolution;
    const double cos_phi = std::cos(phi);
    const double sin_phi = std::sin(phi);
    for (int j = 0; j < grid_resolution; ++j) {
      const double chi = 2.0 * kPi * static_cast<double>(j) / grid_resolution;
      // Candidate basis: v1 = cos(phi) e0 + e^{i chi} sin(phi) e1 labeled A,
      // its orthogonal complement labeled B.
      const Complex back = std::polar(sin_phi, -chi);
      const double p_a_given_a = std::norm(cos_phi * a0 + back * a1);
      const double p_a_given_b = std::norm(cos_phi * b0 + back * b1);
      const double p_err = pair.prior_a * (1.0 - p_a_given_a) +
                           pair.prior_b * p_a_given_b;
      best = std::min(best, p_err);
    }
  }
  return best;
}

double oracle_usd_failure_search(const StatePair& pair, int grid_resolution) {
  if (grid_resolution < 64) {
    throw std::invalid_argument("grid resolution must be at least 64");
  }
  if (!pair.has_equal_priors()) {
    throw std::invalid_argument("unambiguous failure search expects equal priors");
  }
  const double c = std::cos(pair.theta);
  const double s = std::sin(pair.theta);
  const double overlap = overlap_from_theta(pair.theta);
  const Eigen::Vector3d a(c, -s, 0.0);
  const Eigen::Vector3d b(c, s, 0.0);

  // Unambiguity forces (q.a)(q.b) = <a|b> for the inconclusive direction q;
  // in the (m0, m-1) components that reads q0^2 c^2 - q1^2 s^2 = cos(2 theta).
  // Sweeping q1 over its feasible interval [-s, s] and solving for q0
  // enumerates every feasible basis; the conclusive directions follow as
  // cross products.
  double best = 1.0;
  for (int k = 0; k <= grid_resolution; ++k) {
    const double q1 =
        -s + 2.0 * s * static_cast<double>(k) / grid_resolution;
    const double q0_sq = (overlap + q1 * q1 * s * s) / (c * c);
    const double q0 = std::sqrt(std::max(0.0, q0_sq));
    const double q2_sq = 1.0 - q0 * q0 - q1 * q1;
    const double q2 = std::sqrt(std::max(0.0, q2_sq));
    const Eigen::Vector3d q(q0, q1, q2);

    Eigen::Vector3d detect_a = q.cross(b);
    Eigen::Vector3d detect_b = q.cross(a);
    const double na = detect_a.norm();
    const double nb = detect_b.norm();
    if (na > 1e-12 && nb > 1e-12) {
      detect_a /= na;
      detect_b /= nb;
      // The feasibility constraint makes the derived conclusive directions
      // orthogonal; skip any point where rounding breaks that.
      if (std::abs(detect_a.dot(detect_b)) > 1e-6 ||
          std::abs(detect_a.dot(b)) > 1e-9 ||
          std::abs(detect_b.dot(a)) > 1e-9) {
        continue;
      }
    }
    const double p_fail = pair.prior_a * (q.dot(a) * q.dot(a)) +
                          pair.prior_b * (q.dot(b) * q.dot(b));
    best = std::min(best, p_fail);
  }
  return best;
}

}  // namespace qsd
