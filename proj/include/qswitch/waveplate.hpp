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

#ifndef QSWITCH_WAVEPLATE_HPP
#define QSWITCH_WAVEPLATE_HPP

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "qswitch/gate_factory.hpp"
#include "qswitch/linalg.hpp"

namespace qswitch {

// Jones convention used throughout:
//   QWP(t) = R(t) diag(1, i)  R(-t)
//   HWP(t) = R(t) diag(1, -1) R(-t)
// with R(t) the real rotation by t. The first-listed plate of a triple acts
// first on the photon. This reproduces every Pauli row of the published
// angle table up to global phase.

struct WaveplateTriple {
  double q_first = 0.0;  // degrees
  double h = 0.0;
  double q_last = 0.0;
};

/// Quarter-wave plate with fast axis at `theta_deg`.
Unitary2 qwp(double theta_deg);
/// Half-wave plate with fast axis at `theta_deg`.
Unitary2 hwp(double theta_deg);

/// qwp(q_last) * hwp(h) * qwp(q_first)
Unitary2 triple_to_unitary(const WaveplateTriple& t);

struct WaveplateDecomposition {
  WaveplateTriple angles;
  /// frobenius_distance_up_to_phase(triple_to_unitary(angles), target)
  double residual = 0.0;
  /// true when the closed form missed 1e-10 and the numerical polish ran
  bool refined = false;
};

inline constexpr double kDecomposeTolerance = 1e-8;

/// Quarter-half-quarter angles realizing `u` up to global phase. Throws
/// NumericalError (with the residual) if the result misses 1e-8.
WaveplateDecomposition decompose(const Unitary2& u);

/// Published angles are rounded to 0.01 degrees; reconstructed gates are
/// classified with this looser tolerance.
inline constexpr double kTableTolerance = 0.05;

enum class TableKind { empty, pauli, random_pairs };

struct AngleRow {
  int index = 0;     // 1-based row number within the table
  std::string name;  // gate name (Pauli table) or the printed index
  /// Pauli table: {U1 setting, U2 setting}.
  /// Random table: {C1, C2, A1, A2}.
  std::vector<WaveplateTriple> triples;
  std::size_t line = 0;  // 1-based source line
};

struct AngleTable {
  TableKind kind = TableKind::empty;
  std::vector<AngleRow> rows;
  /// Non-fatal remarks, e.g. angles printed outside [-180, 180].
  std::vector<std::string> diagnostics;
};

/// Parses either table layout, chosen by column count:
///   7 columns:  gate,Q1,H1,Q2,Q3,H2,Q4
///   13 columns: index,Q1,H1,Q2,Q3,H2,Q4 (commuting pair), then the same six
///               for the anti-commuting pair
/// Blank lines and lines starting with '#' are skipped; a leading header row
/// is recognised by a non-numeric second field.
AngleTable load_angle_table(std::string_view text);
AngleTable load_angle_table_file(const std::string& path);

/// Named gate of a Pauli-table row ("I", "X", "Y", "Z").
Unitary2 pauli_by_name(std::string_view name);

/// The 2 * rows.size() labelled pairs of a random-pairs table: the commuting
/// pairs first (row order), then the anti-commuting pairs.
std::vector<GatePair> random_table_pairs(const AngleTable& table);

std::string to_string(const WaveplateTriple& t);

}  // namespace qswitch

#endif  // QSWITCH_WAVEPLATE_HPP
