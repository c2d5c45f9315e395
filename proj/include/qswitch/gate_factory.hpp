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

#ifndef QSWITCH_GATE_FACTORY_HPP
#define QSWITCH_GATE_FACTORY_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qswitch/linalg.hpp"

namespace qswitch {

/// Seeded 64-bit Mersenne Twister with a running count of variates drawn.
/// Single owner; give each worker its own source via `derive`.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed);

  static constexpr std::string_view algorithm() { return "mt19937_64"; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t draws() const noexcept { return draws_; }

  double uniform01();
  double uniform(double lo, double hi);
  double standard_normal();
  std::uint64_t poisson(double mean);
  std::uint64_t binomial(std::uint64_t trials, double p);
  std::uint64_t next_u64();

  /// Independent child stream, a pure function of (seed, stream id).
  RandomSource derive(std::uint64_t stream) const;

 private:
  std::uint64_t seed_;
  std::uint64_t draws_ = 0;
  std::mt19937_64 engine_;
};

enum class PairLabel { commute, anticommute, neither };

std::string_view to_string(PairLabel label);
PairLabel parse_pair_label(std::string_view text);

struct SeedRecord {
  std::uint64_t seed = 0;
  std::uint64_t draw_index = 0;  // variates consumed before this item was drawn
};

struct GatePair {
  Unitary2 u1;
  Unitary2 u2;
  PairLabel label;
  SeedRecord seed_record;
};

/// Haar-distributed U(2) element: Ginibre matrix, QR, column phases fixed
/// by diag(r_ii / |r_ii|).
Unitary2 haar_random_unitary(RandomSource& rng);

/// The QR-with-phase-fix step on a given Ginibre draw. Returns nullopt when
/// the draw is numerically singular.
std::optional<Unitary2> unitary_from_ginibre(const Eigen::Matrix2cd& g);

/// C_k = R diag(1, e^{i theta_k}) R^dagger.
GatePair commuting_pair(RandomSource& rng);
GatePair commuting_pair_from(const Unitary2& r, double theta1, double theta2);

/// A_1 = R sigma_z R^dagger, A_2 = R sigma_y R^dagger.
GatePair anticommuting_pair(RandomSource& rng);
GatePair anticommuting_pair_from(const Unitary2& r);

inline constexpr double kClassifyTolerance = 1e-8;

/// COMMUTE if ||[u1,u2]||_F <= tol, ANTICOMMUTE if ||{u1,u2}||_F <= tol,
/// NEITHER otherwise. Throws InputError when both hold.
PairLabel classify_pair(const Unitary2& u1, const Unitary2& u2, double tol = kClassifyTolerance);

/// Pair export. CSV columns: index,label,u1 entries (re,im row-major),
/// u2 entries, seed, draw_index.
std::string pairs_to_csv(std::span<const GatePair> pairs);
std::string pairs_to_json(std::span<const GatePair> pairs);

}  // namespace qswitch

#endif  // QSWITCH_GATE_FACTORY_HPP
