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

// Exact complex linear algebra on the two- and three-level Hilbert spaces of
// a spin-1 nucleus: states, operators, POVMs, Born-rule probabilities and
// validity checks. The basis ordering is fixed everywhere in this library as
// (m_I = 0, m_I = -1, m_I = +1); a two-level state uses the first two labels
// and embeds into three levels by zero-padding the m_I = +1 amplitude.

#include <array>
#include <complex>
#include <initializer_list>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qsd {

using Complex = std::complex<double>;

// Fixed-capacity dynamic types: dimension 2 or 3, storage on the stack.
using VectorC =
    Eigen::Matrix<Complex, Eigen::Dynamic, 1, Eigen::ColMajor, 3, 1>;
using MatrixC =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 3, 3>;

// Tolerance for values constructed in closed form (norms, orthogonality).
inline constexpr double kConstructionTol = 1e-12;
// Tolerance for accumulated matrix arithmetic (products, POVM sums).
inline constexpr double kMatrixTol = 1e-10;
// PSD slack for POVM eigenvalues.
inline constexpr double kPsdTol = 1e-10;

/// Nuclear spin level, in the library-wide basis order.
enum class Level : int { M0 = 0, MMinus1 = 1, MPlus1 = 2 };

std::string to_string(Level level);

/// True when the two levels differ by one unit of m_I. M0 is adjacent to
/// both MMinus1 and MPlus1; MMinus1 and MPlus1 are not adjacent.
bool adjacent(Level a, Level b);

/// Measurement outcome label.
enum class Outcome : int { A = 0, B = 1, Inconclusive = 2 };

std::string to_string(Outcome outcome);

/// Unit-norm complex amplitude vector over 2 or 3 levels.
///
/// The constructor rejects vectors whose squared norm deviates from one by
/// more than kConstructionTol, and dimensions other than 2 or 3.
class StateVector {
 public:
  explicit StateVector(VectorC amplitudes);
  StateVector(std::initializer_list<Complex> amplitudes);

  int dimension() const { return static_cast<int>(amplitudes_.size()); }
  const VectorC& amplitudes() const { return amplitudes_; }
  Complex amplitude(int index) const { return amplitudes_(index); }
  Complex amplitude(Level level) const {
    return amplitudes_(static_cast<int>(level));
  }

  /// Explicit embedding of a two-level state into three levels; the m_I = +1
  /// amplitude is zero-padded. Identity on states that are already
  /// three-dimensional.
  StateVector embedded_in_qutrit() const;

 private:
  VectorC amplitudes_;
};

/// Square complex matrix over the same ordered basis as StateVector.
class Operator {
 public:
  explicit Operator(MatrixC entries);

  int dimension() const { return static_cast<int>(entries_.rows()); }
  const MatrixC& entries() const { return entries_; }
  Complex entry(int row, int col) const { return entries_(row, col); }

  Operator adjoint() const { return Operator(entries_.adjoint()); }
  bool is_unitary(double tol = kMatrixTol) const;
  bool is_hermitian(double tol = kConstructionTol) const;

  static Operator identity(int dimension);
  /// Rank-1 projector |v><v|.
  static Operator projector(const StateVector& v);

  friend Operator operator*(const Operator& lhs, const Operator& rhs);

 private:
  MatrixC entries_;
};

/// One labeled element of a generalized measurement.
struct PovmElement {
  Outcome label;
  Operator op;
};

/// Ordered set of labeled measurement operators. Construction does not
/// validate; see validate_povm.
class Povm {
 public:
  explicit Povm(std::vector<PovmElement> elements);

  int dimension() const;
  const std::vector<PovmElement>& elements() const { return elements_; }

 private:
  std::vector<PovmElement> elements_;
};

/// Report-style result of checking POVM validity.
struct PovmReport {
  double hermiticity_residual = 0.0;  // max entrywise |E - E^dagger|
  double min_eigenvalue = 0.0;        // smallest eigenvalue over all elements
  double completeness_residual = 0.0; // max entrywise |sum E - I|
  bool hermitian = false;
  bool positive_semidefinite = false;
  bool complete = false;

  bool pass() const { return hermitian && positive_semidefinite && complete; }
};

/// Checks Hermiticity (within kConstructionTol), positive semidefiniteness
/// (eigenvalues >= -kPsdTol) and completeness (sum equals identity within
/// kMatrixTol, entrywise). Never throws; returns the residuals.
PovmReport validate_povm(const Povm& povm);

/// Probability per outcome label. Labels with several POVM elements
/// accumulate.
struct OutcomeDistribution {
  std::array<double, 3> p{0.0, 0.0, 0.0};

  double operator[](Outcome outcome) const {
    return p[static_cast<int>(outcome)];
  }
  double& operator[](Outcome outcome) { return p[static_cast<int>(outcome)]; }
  double sum() const { return p[0] + p[1] + p[2]; }
};

/// Hermitian inner product <x|y>, conjugate-linear in the first argument.
/// Throws std::invalid_argument on dimension mismatch.
Complex inner_product(const StateVector& x, const StateVector& y);

/// Applies a unitary to a state. Throws std::invalid_argument if u is not
/// unitary within kMatrixTol or if dimensions mismatch.
StateVector apply_unitary(const Operator& u, const StateVector& s);

/// Born-rule probabilities of a unit state against a valid POVM.
/// Throws std::invalid_argument if the POVM fails validation or the
/// dimensions mismatch.
OutcomeDistribution born_probabilities(const StateVector& s, const Povm& m);

/// Max entrywise absolute difference.
double max_abs_difference(const Operator& lhs, const Operator& rhs);

/// Max entrywise absolute difference minimized over a global phase applied
/// to rhs. Measurement statistics are invariant under that phase.
double phase_invariant_distance(const Operator& lhs, const Operator& rhs);

}  // namespace qsd
