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

#include "qswitch/gate_factory.hpp"

#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>

#include <nlohmann/json.hpp>

namespace qswitch {

namespace {

// splitmix64 finalizer
std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Unitary2 conjugate_by(const Unitary2& r, const Eigen::Matrix2cd& m) {
  return Unitary2(r.matrix() * m * r.matrix().adjoint());
}

}  // namespace

RandomSource::RandomSource(std::uint64_t seed) : seed_(seed), engine_(seed) {}

double RandomSource::uniform01() {
  ++draws_;
  return std::uniform_real_distribution<double>(0.0, 1.0)(engine_);
}

double RandomSource::uniform(double lo, double hi) {
  ++draws_;
  return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

double RandomSource::standard_normal() {
  ++draws_;
  return std::normal_distribution<double>(0.0, 1.0)(engine_);
}

std::uint64_t RandomSource::poisson(double mean) {
  ++draws_;
  if (mean <= 0.0) return 0;
  return std::poisson_distribution<std::uint64_t>(mean)(engine_);
}

std::uint64_t RandomSource::binomial(std::uint64_t trials, double p) {
  ++draws_;
  if (trials == 0 || p <= 0.0) return 0;
  if (p >= 1.0) return trials;
  return std::binomial_distribution<std::uint64_t>(trials, p)(engine_);
}

std::uint64_t RandomSource::next_u64() {
  ++draws_;
  return engine_();
}

RandomSource RandomSource::derive(std::uint64_t stream) const {
  return RandomSource(mix(seed_ ^ mix(stream + 1)));
}

std::string_view to_string(PairLabel label) {
  switch (label) {
    case PairLabel::commute:
      return "COMMUTE";
    case PairLabel::anticommute:
      return "ANTICOMMUTE";
    case PairLabel::neither:
      return "NEITHER";
  }
  return "NEITHER";
}

PairLabel parse_pair_label(std::string_view text) {
  if (text == "COMMUTE") return PairLabel::commute;
  if (text == "ANTICOMMUTE") return PairLabel::anticommute;
  if (text == "NEITHER") return PairLabel::neither;
  throw InputError("unknown pair label '" + std::string(text) + "'");
}

std::optional<Unitary2> unitary_from_ginibre(const Eigen::Matrix2cd& g) {
  Eigen::HouseholderQR<Eigen::Matrix2cd> qr(g);
  const Eigen::Matrix2cd r = qr.matrixQR().triangularView<Eigen::Upper>();
  Eigen::Matrix2cd q = qr.householderQ();
  for (int k = 0; k < 2; ++k) {
    const double mag = std::abs(r(k, k));
    if (!(mag > 1e-12)) return std::nullopt;
    q.col(k) *= r(k, k) / mag;
  }
  return Unitary2(q);
}

Unitary2 haar_random_unitary(RandomSource& rng) {
  const double s = 1.0 / std::sqrt(2.0);
  for (;;) {
    Eigen::Matrix2cd g;
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        const double re = rng.standard_normal();
        const double im = rng.standard_normal();
        g(i, j) = Complex(re, im) * s;
      }
    }
    if (auto u = unitary_from_ginibre(g)) return *u;
  }
}

GatePair commuting_pair_from(const Unitary2& r, double theta1, double theta2) {
  const Eigen::Matrix2cd d1 = Eigen::Vector2cd(1.0, std::polar(1.0, theta1)).asDiagonal();
  const Eigen::Matrix2cd d2 = Eigen::Vector2cd(1.0, std::polar(1.0, theta2)).asDiagonal();
  return GatePair{conjugate_by(r, d1), conjugate_by(r, d2), PairLabel::commute, {}};
}

GatePair commuting_pair(RandomSource& rng) {
  const SeedRecord record{rng.seed(), rng.draws()};
  const Unitary2 r = haar_random_unitary(rng);
  const double two_pi = 2.0 * std::numbers::pi;
  const double theta1 = rng.uniform(0.0, two_pi);
  const double theta2 = rng.uniform(0.0, two_pi);
  GatePair pair = commuting_pair_from(r, theta1, theta2);
  pair.seed_record = record;
  return pair;
}

GatePair anticommuting_pair_from(const Unitary2& r) {
  return GatePair{conjugate_by(r, gates::pauli_z().matrix()), conjugate_by(r, gates::pauli_y().matrix()),
                  PairLabel::anticommute, {}};
}

GatePair anticommuting_pair(RandomSource& rng) {
  const SeedRecord record{rng.seed(), rng.draws()};
  GatePair pair = anticommuting_pair_from(haar_random_unitary(rng));
  pair.seed_record = record;
  return pair;
}

PairLabel classify_pair(const Unitary2& u1, const Unitary2& u2, double tol) {
  if (!(tol > 0.0)) throw InputError("classify_pair: tolerance must be positive");
  const double c = commutator(u1.matrix(), u2.matrix()).norm();
  const double a = anticommutator(u1.matrix(), u2.matrix()).norm();
  const bool commutes = c <= tol;
  const bool anticommutes = a <= tol;
  if (commutes && anticommutes) {
    std::ostringstream msg;
    msg << "classify_pair: both ||[u1,u2]|| = " << c << " and ||{u1,u2}|| = " << a
        << " are within tolerance " << tol << "; inputs are inconsistent";
    throw InputError(msg.str());
  }
  if (commutes) return PairLabel::commute;
  if (anticommutes) return PairLabel::anticommute;
  return PairLabel::neither;
}

std::string pairs_to_csv(std::span<const GatePair> pairs) {
  std::ostringstream out;
  out << "index,label";
  for (const char* g : {"u1", "u2"}) {
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) out << ',' << g << '_' << r << c << "_re," << g << '_' << r << c << "_im";
    }
  }
  out << ",seed,draw_index\n";
  out << std::setprecision(17);
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const GatePair& p = pairs[k];
    out << k << ',' << to_string(p.label);
    for (const Unitary2* u : {&p.u1, &p.u2}) {
      for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) out << ',' << (*u)(r, c).real() << ',' << (*u)(r, c).imag();
      }
    }
    out << ',' << p.seed_record.seed << ',' << p.seed_record.draw_index << '\n';
  }
  return out.str();
}

std::string pairs_to_json(std::span<const GatePair> pairs) {
  nlohmann::json arr = nlohmann::json::array();
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const GatePair& p = pairs[k];
    auto entries = [](const Unitary2& u) {
      nlohmann::json e = nlohmann::json::array();
      for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) e.push_back({u(r, c).real(), u(r, c).imag()});
      }
      return e;
    };
    arr.push_back({{"index", k},
                   {"label", to_string(p.label)},
                   {"u1", entries(p.u1)},
                   {"u2", entries(p.u2)},
                   {"seed", p.seed_record.seed},
                   {"draw_index", p.seed_record.draw_index}});
  }
  return arr.dump(2);
}

}  // namespace qswitch
