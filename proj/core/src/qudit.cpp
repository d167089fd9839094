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

#include "qsd/qudit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qsd {

std::string to_string(Level level) {
  switch (level) {
    case Level::M0:
      return "m0";
    case Level::MMinus1:
      return "m-1";
    case Level::MPlus1:
      return "m+1";
  }
  return "?";
}

bool adjacent(Level a, Level b) {
  if (a == b) return false;
  return a == Level::M0 || b == Level::M0;
}

std::string to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::A:
      return "A";
    case Outcome::B:
      return "B";
    case Outcome::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

namespace {

void check_dimension(int dim) {
  if (dim != 2 && dim != 3) {
    throw std::invalid_argument("state dimension must be 2 or 3, got " +
                                std::to_string(dim));
  }
}

}  // namespace

StateVector::StateVector(VectorC amplitudes) : amplitudes_(std::move(amplitudes)) {
  check_dimension(static_cast<int>(amplitudes_.size()));
  const double norm_sq = amplitudes_.squaredNorm();
  if (std::abs(norm_sq - 1.0) > kConstructionTol) {
    throw std::invalid_argument("state vector is not unit norm: |v|^2 = " +
                                std::to_string(norm_sq));
  }
}

StateVector::StateVector(std::initializer_list<Complex> amplitudes)
    : StateVector([&] {
        VectorC v(static_cast<int>(amplitudes.size()));
        int i = 0;
        for (const Complex& a : amplitudes) v(i++) = a;
        return v;
      }()) {}

StateVector StateVector::embedded_in_qutrit() const {
  if (dimension() == 3) return *this;
  VectorC v(3);
  v << amplitudes_(0), amplitudes_(1), Complex(0.0, 0.0);
  return StateVector(std::move(v));
}

Operator::Operator(MatrixC entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) {
    throw std::invalid_argument("operator must be square");
  }
  check_dimension(static_cast<int>(entries_.rows()));
}

bool Operator::is_unitary(double tol) const {
  const MatrixC gram = entries_.adjoint() * entries_;
  const MatrixC eye = MatrixC::Identity(entries_.rows(), entries_.cols());
  return (gram - eye).cwiseAbs().maxCoeff() <= tol;
}

bool Operator::is_hermitian(double tol) const {
  return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

Operator Operator::identity(int dimension) {
  check_dimension(dimension);
  return Operator(MatrixC::Identity(dimension, dimension));
}

Operator Operator::projector(const StateVector& v) {
  return Operator(v.amplitudes() * v.amplitudes().adjoint());
}

Operator operator*(const Operator& lhs, const Operator& rhs) {
  if (lhs.dimension() != rhs.dimension()) {
    throw std::invalid_argument("operator dimension mismatch");
  }
  return Operator(lhs.entries_ * rhs.entries_);
}

Povm::Povm(std::vector<PovmElement> elements) : elements_(std::move(elements)) {
  if (elements_.empty()) {
    throw std::invalid_argument("POVM must have at least one element");
  }
  const int dim = elements_.front().op.dimension();
  for (const PovmElement& e : elements_) {
    if (e.op.dimension() != dim) {
      throw std::invalid_argument("POVM elements must share one dimension");
    }
  }
}

int Povm::dimension() const { return elements_.front().op.dimension(); }

PovmReport validate_povm(const Povm& povm) {
  PovmReport report;
  const int dim = povm.dimension();
  MatrixC sum = MatrixC::Zero(dim, dim);
  double min_eig = std::numeric_limits<double>::infinity();
  double herm = 0.0;
  for (const PovmElement& e : povm.elements()) {
    const MatrixC& m = e.op.entries();
    herm = std::max(herm, (m - m.adjoint()).cwiseAbs().maxCoeff());
    // Eigenvalues of the Hermitian part; for near-Hermitian inputs this is
    // the PSD check the invariants ask for.
    const MatrixC sym = (m + m.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<MatrixC> solver(sym);
    min_eig = std::min(min_eig, solver.eigenvalues().minCoeff());
    sum += m;
  }
  report.hermiticity_residual = herm;
  report.min_eigenvalue = min_eig;
  report.completeness_residual =
      (sum - MatrixC::Identity(dim, dim)).cwiseAbs().maxCoeff();
  report.hermitian = herm <= kConstructionTol;
  report.positive_semidefinite = min_eig >= -kPsdTol;
  report.complete = report.completeness_residual <= kMatrixTol;
  return report;
}

Complex inner_product(const StateVector& x, const StateVector& y) {
  if (x.dimension() != y.dimension()) {
    throw std::invalid_argument("inner_product: dimension mismatch");
  }
  return x.amplitudes().dot(y.amplitudes());
}

StateVector apply_unitary(const Operator& u, const StateVector& s) {
  if (u.dimension() != s.dimension()) {
    throw std::invalid_argument("apply_unitary: dimension mismatch");
  }
  if (!u.is_unitary()) {
    throw std::invalid_argument("apply_unitary: operator is not unitary");
  }
  return StateVector(VectorC(u.entries() * s.amplitudes()));
}

OutcomeDistribution born_probabilities(const StateVector& s, const Povm& m) {
  if (s.dimension() != m.dimension()) {
    throw std::invalid_argument("born_probabilities: dimension mismatch");
  }
  const PovmReport report = validate_povm(m);
  if (!report.pass()) {
    throw std::invalid_argument("born_probabilities: POVM failed validation");
  }
  OutcomeDistribution dist;
  for (const PovmElement& e : m.elements()) {
    const Complex expectation =
        s.amplitudes().dot(e.op.entries() * s.amplitudes());
    dist[e.label] += std::max(0.0, expectation.real());
  }
  return dist;
}

double max_abs_difference(const Operator& lhs, const Operator& rhs) {
  if (lhs.dimension() != rhs.dimension()) {
    throw std::invalid_argument("max_abs_difference: dimension mismatch");
  }
  return (lhs.entries() - rhs.entries()).cwiseAbs().maxCoeff();
}

double phase_invariant_distance(const Operator& lhs, const Operator& rhs) {
  if (lhs.dimension() != rhs.dimension()) {
    throw std::invalid_argument("phase_invariant_distance: dimension mismatch");
  }
  // Align the phase on the largest entry of rhs, then compare entrywise.
  int row = 0, col = 0;
  rhs.entries().cwiseAbs().maxCoeff(&row, &col);
  const Complex ref = rhs.entry(row, col);
  if (std::abs(ref) < 1e-300) {
    return max_abs_difference(lhs, rhs);
  }
  Complex phase = lhs.entry(row, col) / ref;
  const double mag = std::abs(phase);
  phase = (mag < 1e-300) ? Complex(1.0, 0.0) : phase / mag;
  return (lhs.entries() - phase * rhs.entries()).cwiseAbs().maxCoeff();
}

}  // namespace qsd
