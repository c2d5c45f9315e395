// Copyright 2026 The qswitch Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QSWITCH_LINALG_HPP
#define QSWITCH_LINALG_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qswitch/errors.hpp"

namespace qswitch {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// A 2x2 unitary. Construction validates U U^dagger = I to within the given
/// Frobenius tolerance, so every Unitary2 in flight is a genuine gate.
class Unitary2 {
 public:
  static constexpr double kDefaultTolerance = 1e-10;

  explicit Unitary2(const Eigen::Matrix2cd& m, double tol = kDefaultTolerance);

  const Eigen::Matrix2cd& matrix() const noexcept { return m_; }
  Complex operator()(int row, int col) const { return m_(row, col); }

  Unitary2 adjoint() const;
  /// e^{i phase} U
  Unitary2 with_phase(double phase) const;

  friend Unitary2 operator*(const Unitary2& a, const Unitary2& b);

  /// ||U U^dagger - I||_F of an arbitrary 2x2 matrix.
  static double unitarity_residual(const Eigen::Matrix2cd& m);

 private:
  struct Trusted {};
  Unitary2(const Eigen::Matrix2cd& m, Trusted) : m_(m) {}
  Eigen::Matrix2cd m_;
};

/// A unit-norm complex vector.
class StateVector {
 public:
  static constexpr double kDefaultTolerance = 1e-10;

  explicit StateVector(ComplexVector amplitudes, double tol = kDefaultTolerance);
  /// Rescales to unit norm; rejects the zero vector.
  static StateVector normalized(ComplexVector amplitudes);
  /// Computational basis state |index> of the given dimension.
  static StateVector basis(std::size_t dim, std::size_t index);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(v_.size()); }
  const ComplexVector& amplitudes() const noexcept { return v_; }
  Complex operator[](std::size_t i) const { return v_(static_cast<Eigen::Index>(i)); }

 private:
  ComplexVector v_;
};

namespace gates {
Unitary2 identity();
Unitary2 pauli_x();
Unitary2 pauli_y();
Unitary2 pauli_z();
Unitary2 hadamard();
}  // namespace gates

namespace states {
StateVector zero();
StateVector one();
StateVector plus();
StateVector minus();
}  // namespace states

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b);

/// Kronecker product; the left factor is the more significant index.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

/// Reduced operator on the subsystems not listed in `traced`. Subsystem 0 is
/// the most significant tensor factor. Tracing every subsystem yields a 1x1
/// matrix holding tr(m).
ComplexMatrix partial_trace(const ComplexMatrix& m,
                            std::span<const std::size_t> dims,
                            std::span<const std::size_t> traced);

/// Transpose on the listed subsystems only.
ComplexMatrix partial_transpose(const ComplexMatrix& m,
                                std::span<const std::size_t> dims,
                                std::span<const std::size_t> transposed);

/// Reorders tensor factors: factor k of the result is factor perm[k] of m.
ComplexMatrix permute_subsystems(const ComplexMatrix& m,
                                 std::span<const std::size_t> dims,
                                 std::span<const std::size_t> perm);

/// Replaces the listed subsystems by their maximally mixed state:
/// (tr_S m) (x) I_S / d_S, with factors kept in their original positions.
ComplexMatrix replace_with_identity(const ComplexMatrix& m,
                                    std::span<const std::size_t> dims,
                                    std::span<const std::size_t> replaced);

/// min over phi of ||a - e^{i phi} b||_F, evaluated in closed form.
double frobenius_distance_up_to_phase(const ComplexMatrix& a, const ComplexMatrix& b);

/// Unnormalized Choi operator sum_ij |i><j| (x) U|i><j|U^dagger on
/// (input (x) output). Trace 2, rank 1.
ComplexMatrix choi(const Unitary2& u);

struct HermitianEigen {
  Eigen::VectorXd values;  // ascending
  ComplexMatrix vectors;   // columns
};

/// Rejects inputs with ||m - m^dagger||_F > tol * max(1, ||m||_F).
HermitianEigen eig_hermitian(const ComplexMatrix& m, double tol = 1e-10);

bool is_hermitian(const ComplexMatrix& m, double tol);
void require_finite(const ComplexMatrix& m, const char* what);

}  // namespace qswitch

#endif  // QSWITCH_LINALG_HPP
