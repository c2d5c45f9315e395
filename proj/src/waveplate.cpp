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

#include "qswitch/waveplate.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <sstream>

namespace qswitch {

namespace {

constexpr double kPi = std::numbers::pi;

double to_rad(double deg) { return deg * kPi / 180.0; }
double to_deg(double rad) { return rad * 180.0 / kPi; }

Eigen::Matrix2cd rotation(double rad) {
  const double c = std::cos(rad);
  const double s = std::sin(rad);
  Eigen::Matrix2cd r;
  r << c, -s, s, c;
  return r;
}

Eigen::Matrix2cd retarder(double theta_deg, Complex slow_axis_phase) {
  const double t = to_rad(theta_deg);
  const Eigen::Matrix2cd d = Eigen::Vector2cd(1.0, slow_axis_phase).asDiagonal();
  return rotation(t) * d * rotation(-t);
}

// Wraps into [-90, 90): both plate types are 180-degree periodic.
double wrap_half_turn(double deg) {
  double w = std::fmod(deg + 90.0, 180.0);
  if (w < 0) w += 180.0;
  return w - 90.0;
}

// 2 - |tr(U^dagger T(angles))|; zero iff T realizes U up to phase.
double phase_blind_loss(const Eigen::Matrix2cd& target, const std::array<double, 3>& rad) {
  const WaveplateTriple t{to_deg(rad[0]), to_deg(rad[1]), to_deg(rad[2])};
  return 2.0 - std::abs((target.adjoint() * triple_to_unitary(t).matrix()).trace());
}

// Damped Newton with central-difference derivatives on the three angles.
std::array<double, 3> polish(const Eigen::Matrix2cd& target, std::array<double, 3> x) {
  constexpr double h = 1e-5;
  double f = phase_blind_loss(target, x);
  double damping = 1e-3;
  for (int iter = 0; iter < 200 && f > 1e-22; ++iter) {
    Eigen::Vector3d grad;
    Eigen::Matrix3d hess;
    for (int i = 0; i < 3; ++i) {
      auto xp = x;
      auto xm = x;
      xp[i] += h;
      xm[i] -= h;
      const double fp = phase_blind_loss(target, xp);
      const double fm = phase_blind_loss(target, xm);
      grad(i) = (fp - fm) / (2 * h);
      hess(i, i) = (fp - 2 * f + fm) / (h * h);
      for (int j = 0; j < i; ++j) {
        auto a = x, b = x, c = x, d = x;
        a[i] += h, a[j] += h;
        b[i] += h, b[j] -= h;
        c[i] -= h, c[j] += h;
        d[i] -= h, d[j] -= h;
        const double v = (phase_blind_loss(target, a) - phase_blind_loss(target, b) -
                          phase_blind_loss(target, c) + phase_blind_loss(target, d)) /
                         (4 * h * h);
        hess(i, j) = hess(j, i) = v;
      }
    }
    bool improved = false;
    for (int attempt = 0; attempt < 30; ++attempt) {
      const Eigen::Matrix3d reg = hess + damping * Eigen::Matrix3d::Identity();
      const Eigen::Vector3d step = reg.ldlt().solve(-grad);
      std::array<double, 3> trial{x[0] + step(0), x[1] + step(1), x[2] + step(2)};
      const double ft = phase_blind_loss(target, trial);
      if (ft < f) {
        x = trial;
        f = ft;
        damping = std::max(damping * 0.3, 1e-12);
        improved = true;
        break;
      }
      damping *= 10.0;
    }
    if (!improved) break;
  }
  return x;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_csv(std::string_view line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    cells.push_back(trim(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return cells;
}

bool parse_number(const std::string& cell, double& out) {
  if (cell.empty()) return false;
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  if (*first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

constexpr std::array<const char*, 6> kColumnNames{"Q1", "H1", "Q2", "Q3", "H2", "Q4"};

}  // namespace

Unitary2 qwp(double theta_deg) { return Unitary2(retarder(theta_deg, Complex(0.0, 1.0))); }

Unitary2 hwp(double theta_deg) { return Unitary2(retarder(theta_deg, Complex(-1.0, 0.0))); }

Unitary2 triple_to_unitary(const WaveplateTriple& t) { return qwp(t.q_last) * hwp(t.h) * qwp(t.q_first); }

// Writing R(t) = exp(-i t sigma_y), the stack collapses to
//   QWP(a) HWP(b) QWP(c) ~ exp(-i a sigma_y) exp(i (2b - a - c) sigma_x) exp(i c sigma_y),
// a Y-X-Y Euler form whose angles are read off the SU(2) coefficients.
WaveplateDecomposition decompose(const Unitary2& u) {
  const Eigen::Matrix2cd& m = u.matrix();
  const Eigen::Matrix2cd v = m / std::sqrt(m.determinant());
  const Eigen::Matrix2cd sx = gates::pauli_x().matrix();
  const Eigen::Matrix2cd sy = gates::pauli_y().matrix();
  const Eigen::Matrix2cd sz = gates::pauli_z().matrix();
  // v = v0 I - i (v1 sx + v2 sy + v3 sz)
  const double v0 = 0.5 * v.trace().real();
  const double v1 = -0.5 * (v * sx).trace().imag();
  const double v2 = -0.5 * (v * sy).trace().imag();
  const double v3 = -0.5 * (v * sz).trace().imag();
  // v0 = cos(phi) cos(s), v2 = cos(phi) sin(s), v1 = -sin(phi) cos(d), v3 = sin(phi) sin(d)
  // with s = alpha + gamma, d = alpha - gamma. A vanishing radius leaves its
  // angle free; zero is as good as any.
  const double rc = std::hypot(v0, v2);
  const double rs = std::hypot(v1, v3);
  const double s = rc > 1e-14 ? std::atan2(v2, v0) : 0.0;
  const double d = rs > 1e-14 ? std::atan2(v3, -v1) : 0.0;
  const double phi = std::atan2(rs, rc);
  const double alpha = 0.5 * (s + d);
  const double gamma = 0.5 * (s - d);
  const double a = alpha;
  const double c = -gamma;
  const double b = 0.5 * (phi + a + c);

  WaveplateDecomposition out;
  out.angles = {wrap_half_turn(to_deg(c)), wrap_half_turn(to_deg(b)), wrap_half_turn(to_deg(a))};
  out.residual = frobenius_distance_up_to_phase(triple_to_unitary(out.angles).matrix(), m);
  if (out.residual > 1e-10) {
    const auto x = polish(m, {to_rad(out.angles.q_first), to_rad(out.angles.h), to_rad(out.angles.q_last)});
    WaveplateTriple t{wrap_half_turn(to_deg(x[0])), wrap_half_turn(to_deg(x[1])), wrap_half_turn(to_deg(x[2]))};
    const double r = frobenius_distance_up_to_phase(triple_to_unitary(t).matrix(), m);
    out.refined = true;
    if (r < out.residual) {
      out.angles = t;
      out.residual = r;
    }
  }
  if (!(out.residual <= kDecomposeTolerance)) {
    std::ostringstream msg;
    msg << "decompose: waveplate angles miss the target by " << out.residual << " (angles "
        << to_string(out.angles) << ")";
    throw NumericalError(msg.str());
  }
  return out;
}

std::string to_string(const WaveplateTriple& t) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(6) << t.q_first << ',' << t.h << ',' << t.q_last;
  return out.str();
}

AngleTable load_angle_table(std::string_view text) {
  AngleTable table;
  std::size_t line_no = 0;
  std::size_t start = 0;
  bool seen_first = false;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    const std::string_view raw = text.substr(start, nl == std::string_view::npos ? text.npos : nl - start);
    start = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    const auto cells = split_csv(line);
    double probe = 0.0;
    if (!seen_first) {
      seen_first = true;
      if (cells.size() >= 2 && !parse_number(cells[1], probe)) continue;  // header
    }
    const std::size_t expected_cols =
        table.kind == TableKind::pauli ? 7 : table.kind == TableKind::random_pairs ? 13 : cells.size();
    const int row_index = static_cast<int>(table.rows.size()) + 1;
    auto fail = [&](const std::string& why) {
      std::ostringstream msg;
      msg << "angle table row " << row_index << " (line " << line_no << "): " << why;
      throw InputError(msg.str());
    };
    if (cells.size() != expected_cols || (cells.size() != 7 && cells.size() != 13)) {
      std::ostringstream why;
      why << "expected " << (table.kind == TableKind::empty ? std::string("7 or 13") : std::to_string(expected_cols))
          << " columns, found " << cells.size();
      fail(why.str());
    }
    if (table.kind == TableKind::empty) table.kind = cells.size() == 7 ? TableKind::pauli : TableKind::random_pairs;

    AngleRow row;
    row.index = row_index;
    row.name = cells[0];
    row.line = line_no;
    if (row.name.empty()) fail("missing row name");
    std::vector<double> angles;
    for (std::size_t k = 1; k < cells.size(); ++k) {
      double v = 0.0;
      if (!parse_number(cells[k], v)) fail("non-numeric angle '" + cells[k] + "' in column " + std::to_string(k + 1));
      if (std::abs(v) > 180.0) {
        std::ostringstream note;
        note << "row " << row_index << " (" << row.name << ") column " << kColumnNames[(k - 1) % 6] << ": "
             << cells[k] << " lies outside [-180, 180]; used as printed (plates are 180-degree periodic)";
        table.diagnostics.push_back(note.str());
      }
      angles.push_back(v);
    }
    for (std::size_t k = 0; k + 2 < angles.size(); k += 3) {
      row.triples.push_back({angles[k], angles[k + 1], angles[k + 2]});
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

AngleTable load_angle_table_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open angle table '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_angle_table(buf.str());
}

Unitary2 pauli_by_name(std::string_view name) {
  if (name == "I") return gates::identity();
  if (name == "X") return gates::pauli_x();
  if (name == "Y") return gates::pauli_y();
  if (name == "Z") return gates::pauli_z();
  throw InputError("unknown Pauli gate '" + std::string(name) + "'");
}

std::vector<GatePair> random_table_pairs(const AngleTable& table) {
  if (table.kind != TableKind::random_pairs && table.kind != TableKind::empty) {
    throw InputError("random_table_pairs: table does not have the 13-column random-pair layout");
  }
  std::vector<GatePair> pairs;
  pairs.reserve(2 * table.rows.size());
  for (const auto& row : table.rows) {
    pairs.push_back({triple_to_unitary(row.triples[0]), triple_to_unitary(row.triples[1]), PairLabel::commute, {}});
  }
  for (const auto& row : table.rows) {
    pairs.push_back(
        {triple_to_unitary(row.triples[2]), triple_to_unitary(row.triples[3]), PairLabel::anticommute, {}});
  }
  return pairs;
}

}  // namespace qswitch
