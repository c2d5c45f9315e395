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

#ifndef QSWITCH_COMB_SDP_HPP
#define QSWITCH_COMB_SDP_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "qswitch/gate_factory.hpp"
#include "qswitch/linalg.hpp"

namespace qswitch {

// Fixed-order two-slot combs live on five qubits, most significant first:
//   P1 (into U1), P2 (out of U1), P3 (into U2), P4 (out of U2), P5 (measured).
//
// Convention: probabilities are tr(S W) with S = C(U1) (x) C(U2) (x) |i><i|
// and C the input-first Choi operator. For that product to be exact the
// stored W is the transpose (equivalently the complex conjugate) of the
// operator w w^dagger assembled from the circuit amplitudes. The statevector
// oracle in the tests pins this placement.

inline constexpr std::size_t kCombDim = 32;
inline constexpr std::array<std::size_t, 5> kCombDims{2, 2, 2, 2, 2};

struct CombResiduals {
  double min_eigenvalue = 0.0;
  double last_slot = 0.0;   // ||tr_P5 W - I_P4 (x) W2||_F
  double first_slot = 0.0;  // ||tr_P3 W2 - I_P2 (x) W1||_F
  double trace = 0.0;       // |tr W1 - 1|
  double hermiticity = 0.0;

  /// Largest equality residual, with negative eigenvalues counted as violations.
  double worst() const;
};

/// Residuals of an arbitrary 32x32 matrix against the comb constraints.
CombResiduals comb_residuals(const ComplexMatrix& w);

class CombOperator {
 public:
  /// Rejects matrices whose worst residual exceeds `tol`.
  explicit CombOperator(ComplexMatrix w, double tol = 1e-6);

  const ComplexMatrix& matrix() const noexcept { return w_; }
  CombResiduals residuals() const { return comb_residuals(w_); }

  /// I_32 / 8: the comb that discards everything and outputs a fair coin.
  static CombOperator maximally_mixed();

 private:
  ComplexMatrix w_;
};

/// Linear part of the projection onto the comb subspace (acts on differences
/// of combs). Built from the maps "replace subsystems X by I/d".
ComplexMatrix project_onto_comb_directions(const ComplexMatrix& m);

/// Hilbert-Schmidt orthogonal projection of a Hermitian matrix onto the affine
/// set of matrices obeying the comb equalities (positivity is not enforced).
ComplexMatrix project_onto_comb_subspace(const ComplexMatrix& m);

enum class PairClass { commuting, anticommuting };

std::string_view to_string(PairClass c);

struct ScoreOperator {
  ComplexMatrix matrix;
  std::size_t samples = 0;       // 0 for exact operators
  Eigen::MatrixXd standard_error;  // entrywise, empty for exact operators
  double max_standard_error = 0.0;
};

/// C(U1) (x) C(U2) (x) |i><i|
ScoreOperator score_operator(const Unitary2& u1, const Unitary2& u2, int outcome);

inline constexpr std::size_t kDefaultScoreSamples = 200000;
inline constexpr std::size_t kMinScoreSamples = 10000;

/// Monte Carlo average of score_operator over the pair measure of the class.
/// The commuting eigenphases are averaged analytically; for the
/// anti-commuting class the residual U(1) freedom R -> R diag(1, e^{ia}) is
/// also averaged analytically. Work is split into fixed chunks with streams
/// derived from one draw of `rng`, so the result does not depend on the
/// number of worker threads.
ScoreOperator averaged_score(PairClass cls, int outcome, std::size_t n_samples, RandomSource& rng);

/// The same average evaluated exactly: the Haar twirl is the orthogonal
/// projection onto the span of the 24 qubit permutation operators, partially
/// transposed on the conjugated factors P1 and P3.
ScoreOperator exact_averaged_score(PairClass cls, int outcome);

/// (S_commute + S_anticommute) / 2
ScoreOperator success_objective(const ScoreOperator& s_commute, const ScoreOperator& s_anticommute);

/// Exchanges the roles of the two slots: (P1 P2)(P3 P4) -> (P3 P4)(P1 P2).
ComplexMatrix swap_slots(const ComplexMatrix& m);

/// Comb of "prepare `prep` on system (x) ancilla, slot 1 on the system, apply
/// V2, slot 2 on the system, apply V3, measure `measured_wire` in Z".
/// Wire 0 is the system qubit, wire 1 the ancilla (which must then be a
/// qubit). The unmeasured wire is traced out.
CombOperator build_comb_from_circuit(const StateVector& prep, const ComplexMatrix& v2, const ComplexMatrix& v3,
                                     int measured_wire, std::size_t ancilla_dim = 2);

/// tr(S W). Values within 1e-8 of [0, 1] are clamped; anything further out
/// means W is not a valid comb and raises NumericalError.
double probability_from_comb(const CombOperator& w, const Unitary2& u1, const Unitary2& u2, int outcome);

struct SdpOptions {
  double rho = 1.0;
  std::size_t max_iterations = 20000;
  double primal_tolerance = 1e-7;
  double objective_tolerance = 1e-8;
  std::size_t objective_window = 100;
  double gap_tolerance = 1e-3;
};

struct FixedOrderResult {
  double p_succ = 0.0;       // tr(omega W_star), a certified lower bound
  double upper_bound = 0.0;  // dual certificate
  CombOperator w_star = CombOperator::maximally_mixed();
  std::size_t iterations = 0;
  double primal_residual = 0.0;
  CombResiduals residuals;
};

/// max tr(W omega) over fixed-order combs by ADMM: exact affine projection,
/// PSD projection by eigendecomposition, scaled dual update. The returned W
/// is strictly feasible (a small admixture of I/8 repairs negative
/// eigenvalues) and the dual bound certifies the gap. Throws NumericalError
/// with diagnostics if the budget runs out or the gap exceeds the tolerance.
FixedOrderResult optimize_fixed_order(const ScoreOperator& omega, const SdpOptions& options = {});

/// Mean of probability_from_comb with the correct outcome per pair
/// (0 for COMMUTE, 1 for ANTICOMMUTE). NEITHER pairs are rejected.
double evaluate_comb(const CombOperator& w, std::span<const GatePair> pairs);

/// {"dims": [...], "re": [...], "im": [...]} with row-major entries.
std::string operator_to_json(const ComplexMatrix& m, std::span<const std::size_t> dims);
ComplexMatrix operator_from_json(std::string_view text);

}  // namespace qswitch

#endif  // QSWITCH_COMB_SDP_HPP
