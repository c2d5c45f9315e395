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
#include <numbers>

#include <nlohmann/json.hpp>

#include "qswitch/gate_factory.hpp"
#include "qswitch/switch_sim.hpp"

using namespace qswitch;

TEST_CASE("Haar sampler: unitarity and determinism") {
  RandomSource rng(1);
  for (int k = 0; k < 10000; ++k) CHECK(Unitary2::unitarity_residual(haar_random_unitary(rng).matrix()) <= 1e-10);

  RandomSource a(42), b(42);
  for (int k = 0; k < 10; ++k) CHECK((haar_random_unitary(a).matrix() - haar_random_unitary(b).matrix()).norm() == 0.0);
  CHECK(a.draws() == b.draws());
  CHECK(RandomSource::algorithm() == "mt19937_64");
}

TEST_CASE("Haar sampler: second moment of the trace") {
  RandomSource rng(2);
  const int n = 100000;
  double acc = 0.0;
  for (int k = 0; k < n; ++k) acc += std::norm(haar_random_unitary(rng).matrix().trace());
  CHECK(std::abs(acc / n - 1.0) <= 0.02);
}

TEST_CASE("Haar sampler: entry distribution") {
  // |U_00|^2 is uniform on [0, 1] under Haar measure on U(2).
  RandomSource rng(3);
  const int n = 40000;
  std::array<int, 10> bins{};
  for (int k = 0; k < n; ++k) {
    const double x = std::norm(haar_random_unitary(rng)(0, 0));
    ++bins[std::min(9, static_cast<int>(x * 10))];
  }
  double chi2 = 0.0;
  for (int c : bins) chi2 += (c - n / 10.0) * (c - n / 10.0) / (n / 10.0);
  CHECK(chi2 < 27.9);  // 99.9th percentile, 9 degrees of freedom
}

TEST_CASE("Ginibre QR step") {
  CHECK_FALSE(unitary_from_ginibre(Eigen::Matrix2cd::Zero()).has_value());
  Eigen::Matrix2cd g;
  g << Complex(1, 2), Complex(0.5, -1), Complex(-0.3, 0.1), Complex(2, 0);
  const auto u = unitary_from_ginibre(g);
  REQUIRE(u.has_value());
  // Q^dagger G must be upper triangular with a positive real diagonal.
  const Eigen::Matrix2cd r = u->matrix().adjoint() * g;
  CHECK(std::abs(r(1, 0)) <= 1e-12);
  CHECK(std::abs(r(0, 0).imag()) <= 1e-12);
  CHECK(r(0, 0).real() > 0.0);
  CHECK(r(1, 1).real() > 0.0);
}

TEST_CASE("commuting pairs") {
  RandomSource rng(10);
  double min_anti = 1e300;
  for (int k = 0; k < 10000; ++k) {
    const GatePair p = commuting_pair(rng);
    CHECK(p.label == PairLabel::commute);
    CHECK(commutator(p.u1.matrix(), p.u2.matrix()).norm() <= 1e-10);
    min_anti = std::min(min_anti, anticommutator(p.u1.matrix(), p.u2.matrix()).norm());
    if (k < 200) CHECK(exit_probabilities(p.u1, p.u2, states::plus()).p0 >= 1.0 - 1e-10);
  }
  CHECK(min_anti > 0.0);

  const GatePair ii = commuting_pair_from(gates::identity(), 0.0, 0.0);
  CHECK(frobenius_distance_up_to_phase(ii.u1.matrix(), Eigen::Matrix2cd::Identity()) <= 1e-12);
  CHECK(frobenius_distance_up_to_phase(ii.u2.matrix(), Eigen::Matrix2cd::Identity()) <= 1e-12);
  const GatePair z = commuting_pair_from(gates::identity(), std::numbers::pi, 0.3);
  CHECK(frobenius_distance_up_to_phase(z.u1.matrix(), gates::pauli_z().matrix()) <= 1e-12);
}

TEST_CASE("anti-commuting pairs") {
  RandomSource rng(11);
  for (int k = 0; k < 10000; ++k) {
    const GatePair p = anticommuting_pair(rng);
    CHECK(p.label == PairLabel::anticommute);
    CHECK(anticommutator(p.u1.matrix(), p.u2.matrix()).norm() <= 1e-10);
    if (k < 200) {
      CHECK((p.u1.matrix() - p.u1.matrix().adjoint()).norm() <= 1e-12);
      CHECK((p.u2.matrix() - p.u2.matrix().adjoint()).norm() <= 1e-12);
      CHECK(exit_probabilities(p.u1, p.u2, states::plus()).p1 >= 1.0 - 1e-10);
      const Eigen::Matrix2cd half = commutator(p.u1.matrix(), p.u2.matrix()) / 2.0;
      CHECK(Unitary2::unitarity_residual(half) <= 1e-10);
    }
  }
  const GatePair r = anticommuting_pair_from(gates::identity());
  CHECK((r.u1.matrix() - gates::pauli_z().matrix()).norm() <= 1e-12);
  CHECK((r.u2.matrix() - gates::pauli_y().matrix()).norm() <= 1e-12);
}

TEST_CASE("classification") {
  CHECK(classify_pair(gates::pauli_x(), gates::identity()) == PairLabel::commute);
  CHECK(classify_pair(gates::pauli_x(), gates::pauli_y()) == PairLabel::anticommute);
  CHECK(classify_pair(gates::pauli_x(), gates::hadamard()) == PairLabel::neither);
  CHECK_THROWS_AS(classify_pair(gates::pauli_x(), gates::pauli_y(), 0.0), InputError);
  CHECK_THROWS_AS(classify_pair(gates::pauli_x(), gates::pauli_y(), 10.0), InputError);

  RandomSource rng(12);
  for (int k = 0; k < 100; ++k) {
    const Eigen::Matrix2cd r = haar_random_unitary(rng).matrix();
    for (const auto& [a, b] : {std::pair{gates::pauli_x(), gates::pauli_y()}, std::pair{gates::pauli_x(), gates::pauli_x()},
                               std::pair{gates::pauli_x(), gates::hadamard()}}) {
      const Unitary2 ra(r * a.matrix() * r.adjoint());
      const Unitary2 rb(r * b.matrix() * r.adjoint());
      CHECK(classify_pair(ra, rb) == classify_pair(a, b));
    }
  }
  CHECK(parse_pair_label("ANTICOMMUTE") == PairLabel::anticommute);
  CHECK_THROWS_AS(parse_pair_label("maybe"), InputError);
}

TEST_CASE("derived streams") {
  const RandomSource base(5);
  RandomSource a = base.derive(0), b = base.derive(0), c = base.derive(1);
  const auto x = a.next_u64();
  CHECK(x == b.next_u64());
  CHECK(x != c.next_u64());
}

TEST_CASE("pair export") {
  RandomSource rng(9);
  std::vector<GatePair> pairs{commuting_pair(rng), anticommuting_pair(rng)};
  const std::string csv = pairs_to_csv(pairs);
  CHECK(csv.starts_with("index,label,u1_00_re,u1_00_im"));
  CHECK(csv.find("1,ANTICOMMUTE,") != std::string::npos);
  std::size_t lines = 0;
  for (char ch : csv) lines += ch == '\n';
  CHECK(lines == 3);

  const auto j = nlohmann::json::parse(pairs_to_json(pairs));
  REQUIRE(j.size() == 2);
  CHECK(j[0]["label"] == "COMMUTE");
  CHECK(j[0]["seed"] == 9);
  CHECK(j[1]["draw_index"].get<std::uint64_t>() > 0);
  CHECK(j[0]["u1"][0][0].get<double>() == pairs[0].u1(0, 0).real());
}
