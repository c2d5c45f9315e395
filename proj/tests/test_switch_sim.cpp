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

#include <complex>

#include "oracles.hpp"
#include "qswitch/gate_factory.hpp"
#include "qswitch/switch_sim.hpp"

using namespace qswitch;
using namespace std::complex_literals;

namespace {

StateVector random_state(RandomSource& rng) {
  ComplexVector v(2);
  v << Complex(rng.standard_normal(), rng.standard_normal()), Complex(rng.standard_normal(), rng.standard_normal());
  return StateVector::normalized(v);
}

}  // namespace

TEST_CASE("closed-form output matches the explicit circuit") {
  RandomSource rng(101);
  for (int k = 0; k < 1000; ++k) {
    const Unitary2 u1 = haar_random_unitary(rng), u2 = haar_random_unitary(rng);
    const StateVector psi = random_state(rng);
    const Eigen::Vector4cd brute = oracle::switch_circuit(u1.matrix(), u2.matrix(), psi.amplitudes());
    CHECK((two_switch_output(u1, u2, psi).amplitudes() - brute).norm() <= 1e-12);
  }
}

TEST_CASE("two_switch_output examples") {
  const JointState ii = two_switch_output(gates::identity(), gates::identity(), states::plus());
  CHECK(ii.control_probability(0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((ii.branch(0) - states::plus().amplitudes()).norm() <= 1e-12);

  const JointState xy = two_switch_output(gates::pauli_x(), gates::pauli_y(), states::zero());
  CHECK(xy.control_probability(1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(xy.amplitude(1, 0) - 1i) <= 1e-12);
  CHECK(std::abs(xy.amplitude(1, 1)) <= 1e-12);

  RandomSource rng(7);
  for (int k = 0; k < 20; ++k) {
    const JointState xh = two_switch_output(gates::pauli_x(), gates::hadamard(), random_state(rng));
    CHECK(xh.control_probability(0) == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("exit probabilities and verdicts") {
  const SwitchOutcome xx = exit_probabilities(gates::pauli_x(), gates::pauli_x(), states::plus());
  CHECK(xx.p0 == doctest::Approx(1.0));
  CHECK(xx.p1 == doctest::Approx(0.0));
  CHECK(xx.verdict == Verdict::commute);

  const SwitchOutcome xz = exit_probabilities(gates::pauli_x(), gates::pauli_z(), states::zero());
  CHECK(xz.p0 == doctest::Approx(0.0));
  CHECK(xz.p1 == doctest::Approx(1.0));
  CHECK(xz.verdict == Verdict::anticommute);
  CHECK_FALSE(xz.degenerate);

  RandomSource rng(9);
  for (int k = 0; k < 20; ++k) {
    const SwitchOutcome xh = exit_probabilities(gates::pauli_x(), gates::hadamard(), random_state(rng));
    CHECK(xh.p0 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(xh.degenerate);
    CHECK(xh.verdict == Verdict::commute);
  }
  CHECK(to_string(Verdict::anticommute) == "ANTICOMMUTE");
}

TEST_CASE("switch properties on random inputs") {
  RandomSource rng(77);
  for (int k = 0; k < 500; ++k) {
    const Unitary2 u1 = haar_random_unitary(rng), u2 = haar_random_unitary(rng);
    const StateVector psi = random_state(rng);
    const SwitchOutcome out = exit_probabilities(u1, u2, psi);
    CHECK(std::abs(out.p0 + out.p1 - 1.0) <= 1e-12);
    const double anti = (anticommutator(u1.matrix(), u2.matrix()) * psi.amplitudes()).squaredNorm();
    const double comm = (commutator(u1.matrix(), u2.matrix()) * psi.amplitudes()).squaredNorm();
    CHECK(std::abs(anti + comm - 4.0) <= 1e-12);
    const SwitchOutcome phased = exit_probabilities(u1.with_phase(rng.uniform(0, 7)), u2.with_phase(-1.3), psi);
    CHECK(std::abs(phased.p0 - out.p0) <= 1e-12);
  }
}

TEST_CASE("state independence on the promise") {
  RandomSource rng(4242);
  for (int k = 0; k < 20; ++k) {
    const GatePair c = commuting_pair(rng);
    const GatePair a = anticommuting_pair(rng);
    for (int s = 0; s < 100; ++s) {
      const StateVector psi = random_state(rng);
      CHECK(exit_probabilities(c.u1, c.u2, psi).p0 >= 1.0 - 1e-10);
      CHECK(exit_probabilities(a.u1, a.u2, psi).p1 >= 1.0 - 1e-10);
    }
  }
}

TEST_CASE("fixed-order application") {
  RandomSource rng(21);
  const Unitary2 u2 = haar_random_unitary(rng);
  const StateVector psi = random_state(rng);
  CHECK((fixed_order_apply(gates::identity(), u2, psi, GateOrder::u1_first).amplitudes() -
         u2.matrix() * psi.amplitudes()).norm() <= 1e-12);
  for (GateOrder order : {GateOrder::u1_first, GateOrder::u2_first}) {
    const StateVector out = fixed_order_apply(gates::pauli_z(), gates::pauli_z(), states::zero(), order);
    CHECK(std::abs(std::abs(out[0]) - 1.0) <= 1e-12);
  }
  const StateVector xz = fixed_order_apply(gates::pauli_x(), gates::pauli_z(), states::zero(), GateOrder::u1_first);
  CHECK(std::abs(xz[1] + 1.0) <= 1e-12);
  const StateVector zx = fixed_order_apply(gates::pauli_x(), gates::pauli_z(), states::zero(), GateOrder::u2_first);
  CHECK(std::abs(zx[1] - 1.0) <= 1e-12);
}

TEST_CASE("inputs of the wrong dimension are rejected") {
  CHECK_THROWS_AS(exit_probabilities(gates::identity(), gates::identity(), StateVector::basis(4, 0)), InputError);
  CHECK_THROWS_AS(JointState(Eigen::Vector4cd(1.0, 1.0, 0.0, 0.0)), InputError);
}
