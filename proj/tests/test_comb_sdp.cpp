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


#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "qswitch/comb_sdp.hpp"
#include "qswitch/switch_sim.hpp"
#include "qswitch/waveplate.hpp"

using namespace qswitch;

namespace {

const std::string kDataDir = QSWITCH_DATA_DIR;

ComplexMatrix random_unitary(RandomSource& rng, Eigen::Index n) {
  ComplexMatrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = Complex(rng.standard_normal(), rng.standard_normal());
  }
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  return qr.householderQ();
}

StateVector random_state(RandomSource& rng, Eigen::Index n) {
  ComplexVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = Complex(rng.standard_normal(), rng.standard_normal());
  return StateVector::normalized(v);
}

ComplexMatrix random_hermitian(RandomSource& rng) {
  ComplexMatrix g(kCombDim, kCombDim);
  for (Eigen::Index i = 0; i < g.rows(); ++i) {
    for (Eigen::Index j = 0; j < g.cols(); ++j) g(i, j) = Complex(rng.standard_normal(), rng.standard_normal());
  }
  return g + g.adjoint();
}

double inner(const ComplexMatrix& a, const ComplexMatrix& b) { return (a.adjoint() * b).trace().real(); }

// The exact objective and its optimum are shared by several cases.
const ScoreOperator& exact_omega() {
  static const ScoreOperator om = success_objective(exact_averaged_score(PairClass::commuting, 0),
                                                    exact_averaged_score(PairClass::anticommuting, 1));
  return om;
}

const FixedOrderResult& exact_optimum() {
  static const FixedOrderResult r = optimize_fixed_order(exact_omega());
  return r;
}

// The unitary channel X -> M X M^dagger with M = (R* (x) R) (x) (R* (x) R) (x) I.
ComplexMatrix conjugate_slots(const ComplexMatrix& s, const Eigen::Matrix2cd& r) {
  const ComplexMatrix m1 = oracle::kron(r.conjugate(), r);
  const ComplexMatrix m = oracle::kron(oracle::kron(m1, m1), Eigen::Matrix2cd::Identity());
  return m * s * m.adjoint();
}

}  // namespace

TEST_CASE("score operators") {
  const ComplexMatrix s = score_operator(gates::identity(), gates::identity(), 0).matrix;
  CHECK(std::abs(s.trace() - Complex(4.0, 0.0)) <= 1e-12);
  const HermitianEigen e = eig_hermitian(s);
  CHECK(std::abs(e.values(30)) <= 1e-12);
  CHECK(e.values(31) == doctest::Approx(4.0));

  const ComplexMatrix xz = score_operator(gates::pauli_x(), gates::pauli_z(), 1).matrix;
  CHECK(eig_hermitian(xz).values(0) >= -1e-12);
  CHECK(std::abs(xz.trace() - Complex(4.0, 0.0)) <= 1e-12);

  RandomSource rng(1);
  const Unitary2 u1 = haar_random_unitary(rng), u2 = haar_random_unitary(rng);
  const ComplexMatrix sum = score_operator(u1, u2, 0).matrix + score_operator(u1, u2, 1).matrix;
  CHECK(std::abs(sum.trace() - Complex(8.0, 0.0)) <= 1e-12);
  CHECK_THROWS_AS(score_operator(u1, u2, 2), InputError);
}

TEST_CASE("circuit combs reproduce statevector probabilities") {
  RandomSource rng(2);
  SUBCASE("trivial circuit") {
    const ComplexVector zero = StateVector::basis(4, 0).amplitudes();
    const CombOperator w = build_comb_from_circuit(StateVector(zero), ComplexMatrix::Identity(4, 4),
                                                   ComplexMatrix::Identity(4, 4), 0);
    for (int k = 0; k < 100; ++k) {
      const Unitary2 u1 = haar_random_unitary(rng), u2 = haar_random_unitary(rng);
      const Eigen::Vector2cd out = u2.matrix() * u1.matrix() * Eigen::Vector2cd(1.0, 0.0);
      for (int i = 0; i < 2; ++i) CHECK(std::abs(probability_from_comb(w, u1, u2, i) - std::norm(out(i))) <= 1e-12);
    }
  }
  SUBCASE("random circuits with a qubit ancilla") {
    for (int k = 0; k < 100; ++k) {
      const StateVector prep = random_state(rng, 4);
      const ComplexMatrix v2 = random_unitary(rng, 4), v3 = random_unitary(rng, 4);
      const int wire = k % 2;
      const CombOperator w = build_comb_from_circuit(prep, v2, v3, wire);
      CHECK(w.residuals().worst() <= 1e-10);
      const Unitary2 u1 = haar_random_unitary(rng), u2 = haar_random_unitary(rng);
      double total = 0.0;
      for (int i = 0; i < 2; ++i) {
        const double p = probability_from_comb(w, u1, u2, i);
        CHECK(std::abs(p - oracle::circuit_probability(prep.amplitudes(), v2, v3, u1.matrix(), u2.matrix(), wire, i)) <=
              1e-12);
        total += p;
      }
      CHECK(std::abs(total - 1.0) <= 1e-10);
    }
  }
  SUBCASE("other ancilla dimensions") {
    for (std::size_t da : {1u, 3u}) {
      const auto d = static_cast<Eigen::Index>(2 * da);
      const StateVector prep = random_state(rng, d);
      const ComplexMatrix v2 = random_unitary(rng, d), v3 = random_unitary(rng, d);
      const CombOperator w = build_comb_from_circuit(prep, v2, v3, 0, da);
      const Unitary2 u1 = haar_random_unitary(rng), u2 = haar_random_unitary(rng);
      CHECK(std::abs(probability_from_comb(w, u1, u2, 1) -
                     oracle::circuit_probability(prep.amplitudes(), v2, v3, u1.matrix(), u2.matrix(), 0, 1)) <= 1e-12);
    }
  }
}

TEST_CASE("circuit comb input validation") {
  RandomSource rng(3);
  const StateVector prep = random_state(rng, 4);
  const ComplexMatrix v = random_unitary(rng, 4);
  CHECK_THROWS_AS(build_comb_from_circuit(random_state(rng, 6), v, v, 0), InputError);
  CHECK_THROWS_AS(build_comb_from_circuit(prep, random_unitary(rng, 6), v, 0), InputError);
  CHECK_THROWS_AS(build_comb_from_circuit(prep, 2.0 * v, v, 0), InputError);
  CHECK_THROWS_AS(build_comb_from_circuit(prep, v, v, 2), InputError);
  CHECK_THROWS_AS(build_comb_from_circuit(random_state(rng, 6), random_unitary(rng, 6), random_unitary(rng, 6), 1, 3),
                  InputError);
}

TEST_CASE("comb validation") {
  CHECK(CombOperator::maximally_mixed().residuals().worst() <= 1e-15);
  ComplexMatrix bad = ComplexMatrix::Identity(kCombDim, kCombDim) / 4.0;
  CHECK_THROWS_AS(CombOperator{bad}, InputError);
  ComplexMatrix neg = ComplexMatrix::Identity(kCombDim, kCombDim) / 8.0;
  neg(0, 0) = -0.1;
  neg(1, 1) = 0.35;
  CHECK(comb_residuals(neg).min_eigenvalue < 0.0);
  CHECK_THROWS_AS(CombOperator{neg}, InputError);
  CHECK_THROWS_AS(comb_residuals(ComplexMatrix::Identity(4, 4)), InputError);
}

TEST_CASE("affine comb projection") {
  RandomSource rng(4);
  for (int k = 0; k < 20; ++k) {
    const ComplexMatrix h = random_hermitian(rng);
    const ComplexMatrix p = project_onto_comb_subspace(h);
    CHECK((project_onto_comb_subspace(p) - p).norm() <= 1e-10);
    // Fixed points of the projection satisfy the recursive trace conditions.
    const CombResiduals r = comb_residuals(p);
    CHECK(r.last_slot <= 1e-10);
    CHECK(r.first_slot <= 1e-10);
    CHECK(r.trace <= 1e-10);
    // The linear part is an orthogonal projector.
    const ComplexMatrix g = random_hermitian(rng);
    const ComplexMatrix ph = project_onto_comb_directions(h), pg = project_onto_comb_directions(g);
    CHECK(std::abs(inner(ph, g) - inner(h, pg)) <= 1e-9);
    CHECK((project_onto_comb_directions(ph) - ph).norm() <= 1e-10);
  }
  // Matrices that satisfy the recursion are left alone.
  for (int k = 0; k < 10; ++k) {
    const CombOperator w = build_comb_from_circuit(random_state(rng, 4), random_unitary(rng, 4), random_unitary(rng, 4), 0);
    CHECK((project_onto_comb_subspace(w.matrix()) - w.matrix()).norm() <= 1e-10);
  }
  // A Hermitian matrix violating the recursion is moved.
  ComplexMatrix off = ComplexMatrix::Identity(kCombDim, kCombDim) / 8.0;
  off(0, 0) += 0.05;
  CHECK((project_onto_comb_subspace(off) - off).norm() > 1e-3);
}

TEST_CASE("slot swap") {
  RandomSource rng(5);
  const Unitary2 u1 = haar_random_unitary(rng), u2 = haar_random_unitary(rng);
  const ComplexMatrix s = score_operator(u1, u2, 1).matrix;
  CHECK((swap_slots(s) - score_operator(u2, u1, 1).matrix).norm() <= 1e-12);
  CHECK((swap_slots(swap_slots(s)) - s).norm() <= 1e-15);
}

TEST_CASE("exact averaged scores") {
  for (PairClass cls : {PairClass::commuting, PairClass::anticommuting}) {
    const int outcome = cls == PairClass::commuting ? 0 : 1;
    const ComplexMatrix s = exact_averaged_score(cls, outcome).matrix;
    CHECK(std::abs(s.trace() - Complex(4.0, 0.0)) <= 1e-10);
    CHECK((s - s.adjoint()).norm() <= 1e-12);
    CHECK(eig_hermitian(s).values(0) >= -1e-10);
    RandomSource rng(6);
    for (int k = 0; k < 5; ++k) {
      CHECK((conjugate_slots(s, haar_random_unitary(rng).matrix()) - s).norm() <= 1e-10);
    }
  }
}

TEST_CASE("Monte Carlo averaged scores") {
  RandomSource rng(7);
  CHECK_THROWS_AS(averaged_score(PairClass::commuting, 0, 100, rng), InputError);

  const std::size_t n = kDefaultScoreSamples;
  for (PairClass cls : {PairClass::commuting, PairClass::anticommuting}) {
    const int outcome = cls == PairClass::commuting ? 0 : 1;
    RandomSource a(100), b(200);
    const ScoreOperator sa = averaged_score(cls, outcome, n, a);
    const ScoreOperator sb = averaged_score(cls, outcome, n, b);
    CHECK(sa.samples == n);
    CHECK(std::abs(sa.matrix.trace() - Complex(4.0, 0.0)) <= 1e-10);
    CHECK((sa.matrix - sa.matrix.adjoint()).norm() <= 1e-12);
    CHECK(eig_hermitian(sa.matrix).values(0) >= -1e-10);
    CHECK((sa.matrix - sb.matrix).norm() <= 0.01);
    CHECK(sa.max_standard_error > 0.0);
    CHECK(sa.max_standard_error < 2e-3);

    // Agreement with the exact average, entry by entry, in units of the reported error.
    const ComplexMatrix exact = exact_averaged_score(cls, outcome).matrix;
    const ComplexMatrix diff = sa.matrix - exact;
    int outliers = 0;
    for (Eigen::Index i = 0; i < diff.rows(); ++i) {
      for (Eigen::Index j = 0; j < diff.cols(); ++j) {
        if (sa.standard_error(i, j) > 0.0 && std::abs(diff(i, j)) > 5.0 * sa.standard_error(i, j)) ++outliers;
        if (sa.standard_error(i, j) == 0.0) CHECK(std::abs(diff(i, j)) <= 1e-12);
      }
    }
    CHECK(outliers == 0);

    // Haar invariance holds within sampling error.
    RandomSource r(8);
    CHECK((conjugate_slots(sa.matrix, haar_random_unitary(r).matrix()) - sa.matrix).norm() <= 0.02);
  }

  // Same seed, same operator.
  RandomSource c(9), d(9);
  CHECK((averaged_score(PairClass::anticommuting, 1, 20000, c).matrix -
         averaged_score(PairClass::anticommuting, 1, 20000, d).matrix).norm() == 0.0);
}

TEST_CASE("probabilities are linear in the score") {
  // Averaging per-pair probabilities equals the probability of the averaged score.
  RandomSource rng(10);
  const CombOperator w = build_comb_from_circuit(random_state(rng, 4), random_unitary(rng, 4), random_unitary(rng, 4), 0);
  const ComplexMatrix sc = exact_averaged_score(PairClass::commuting, 0).matrix;
  const double expected = (sc * w.matrix()).trace().real();
  const int n = 20000;
  double sum = 0.0, sumsq = 0.0;
  for (int k = 0; k < n; ++k) {
    const GatePair p = commuting_pair(rng);
    const double v = probability_from_comb(w, p.u1, p.u2, 0);
    sum += v;
    sumsq += v * v;
  }
  const double mean = sum / n;
  const double se = std::sqrt((sumsq / n - mean * mean) / n);
  CHECK(std::abs(mean - expected) <= 4.0 * se);
}

TEST_CASE("fixed-order optimum") {
  const FixedOrderResult& r = exact_optimum();
  CHECK(std::abs(r.p_succ - 0.9288) <= 0.003);
  CHECK(r.upper_bound >= r.p_succ - 1e-9);
  CHECK(r.upper_bound - r.p_succ <= 1e-3);
  CHECK(r.residuals.worst() <= 1e-6);
  CHECK(r.w_star.residuals().min_eigenvalue >= -1e-8);

  // Deterministic for a fixed objective.
  const FixedOrderResult again = optimize_fixed_order(exact_omega());
  CHECK((again.w_star.matrix() - r.w_star.matrix()).norm() == 0.0);

  // No concrete circuit beats it.
  RandomSource rng(11);
  for (int k = 0; k < 50; ++k) {
    const CombOperator w = build_comb_from_circuit(random_state(rng, 4), random_unitary(rng, 4), random_unitary(rng, 4), k % 2);
    CHECK((exact_omega().matrix * w.matrix()).trace().real() <= r.p_succ + 1e-6);
  }

  // The constant "commute" guess is worth exactly one half.
  ComplexMatrix guess = ComplexMatrix::Zero(kCombDim, kCombDim);
  for (Eigen::Index k = 0; k < 16; ++k) guess(2 * k, 2 * k) = 0.25;
  const CombOperator constant(guess);
  CHECK(std::abs((exact_omega().matrix * constant.matrix()).trace().real() - 0.5) <= 1e-12);
}

TEST_CASE("always-commute objective") {
  const ScoreOperator om = success_objective(exact_averaged_score(PairClass::commuting, 0),
                                             exact_averaged_score(PairClass::anticommuting, 0));
  const FixedOrderResult r = optimize_fixed_order(om);
  CHECK(r.p_succ >= 0.5 - 1e-6);
  CHECK(r.residuals.worst() <= 1e-6);
}

TEST_CASE("slot order does not matter") {
  ScoreOperator swapped = exact_omega();
  swapped.matrix = swap_slots(swapped.matrix);
  const FixedOrderResult r = optimize_fixed_order(swapped);
  CHECK(std::abs(r.p_succ - exact_optimum().p_succ) <= 2e-3);
}

TEST_CASE("optimizer input validation") {
  ScoreOperator bad;
  bad.matrix = ComplexMatrix::Identity(4, 4);
  CHECK_THROWS_AS(optimize_fixed_order(bad), InputError);
  ScoreOperator skew = exact_omega();
  skew.matrix(0, 1) += Complex(0.0, 1.0);
  CHECK_THROWS_AS(optimize_fixed_order(skew), InputError);
  SdpOptions tiny;
  tiny.max_iterations = 3;
  CHECK_THROWS_AS(optimize_fixed_order(exact_omega(), tiny), NumericalError);
}

TEST_CASE("evaluation of the optimal comb") {
  const CombOperator& w = exact_optimum().w_star;
  const auto table = load_angle_table_file(kDataDir + "/table2_random_pairs.csv");
  const auto pairs = random_table_pairs(table);
  const double on_table = evaluate_comb(w, pairs);
  CHECK(std::abs(on_table - 0.9390) <= 0.005);

  RandomSource rng(12);
  std::vector<GatePair> fresh;
  for (int k = 0; k < 5000; ++k) {
    fresh.push_back(commuting_pair(rng));
    fresh.push_back(anticommuting_pair(rng));
  }
  const double on_fresh = evaluate_comb(w, fresh);
  CHECK(std::abs(on_fresh - 0.9288) <= 0.005);

  double switch_success = 0.0;
  for (const auto& p : pairs) {
    const SwitchOutcome out = exit_probabilities(p.u1, p.u2, states::plus());
    switch_success += (p.label == PairLabel::commute ? out.p0 : out.p1) / static_cast<double>(pairs.size());
  }
  CHECK(switch_success == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(switch_success > on_table);
  CHECK(switch_success > on_fresh);

  std::vector<GatePair> unlabelled{GatePair{gates::pauli_x(), gates::hadamard(), PairLabel::neither, {}}};
  CHECK_THROWS_AS(evaluate_comb(w, unlabelled), InputError);
  CHECK_THROWS_AS(evaluate_comb(w, {}), InputError);
}

TEST_CASE("operator JSON") {
  RandomSource rng(13);
  const ComplexMatrix h = random_hermitian(rng);
  const ComplexMatrix back = operator_from_json(operator_to_json(h, kCombDims));
  CHECK((back - h).norm() == 0.0);
  CHECK_THROWS_AS(operator_from_json(R"({"dims": [2], "re": [1, 0, 0], "im": [0, 0, 0, 0]})"), InputError);
  CHECK_THROWS_AS(operator_from_json("not json"), InputError);
  const std::array<std::size_t, 1> wrong{3};
  CHECK_THROWS_AS(operator_to_json(h, wrong), InputError);
}
