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

#include "qswitch/switch_sim.hpp"

#include <algorithm>
#include <cmath>

namespace qswitch {

namespace {

constexpr double kTieTolerance = 1e-12;

Eigen::Vector2cd as_qubit(const StateVector& psi) {
  if (psi.dim() != 2) throw InputError("target state must be a qubit (dimension 2)");
  return psi.amplitudes();
}

}  // namespace

JointState::JointState(const Eigen::Vector4cd& amplitudes) : v_(amplitudes) {
  if (std::abs(v_.norm() - 1.0) > 1e-10) throw InputError("joint state is not normalized");
}

double JointState::control_probability(int control) const {
  if (control != 0 && control != 1) throw InputError("control value must be 0 or 1");
  return v_.segment<2>(2 * control).squaredNorm();
}

std::string_view to_string(Verdict v) { return v == Verdict::commute ? "COMMUTE" : "ANTICOMMUTE"; }

JointState two_switch_output(const Unitary2& u1, const Unitary2& u2, const StateVector& psi) {
  const Eigen::Vector2cd target = as_qubit(psi);
  const Eigen::Matrix2cd ab = u1.matrix() * u2.matrix();
  const Eigen::Matrix2cd ba = u2.matrix() * u1.matrix();
  Eigen::Vector4cd out;
  out.head<2>() = 0.5 * (ab + ba) * target;
  out.tail<2>() = 0.5 * (ab - ba) * target;
  return JointState(out);
}

SwitchOutcome exit_probabilities(const Unitary2& u1, const Unitary2& u2, const StateVector& psi) {
  const JointState out = two_switch_output(u1, u2, psi);
  const double n0 = out.branch(0).squaredNorm();
  const double n1 = out.branch(1).squaredNorm();
  // The branch norms already sum to one up to rounding; renormalizing makes
  // p0 + p1 = 1 hold to the last bit.
  SwitchOutcome r;
  r.p0 = std::clamp(n0 / (n0 + n1), 0.0, 1.0);
  r.p1 = 1.0 - r.p0;
  r.degenerate = std::abs(r.p0 - r.p1) <= kTieTolerance;
  r.verdict = (r.degenerate || r.p0 > r.p1) ? Verdict::commute : Verdict::anticommute;
  return r;
}

StateVector fixed_order_apply(const Unitary2& u1, const Unitary2& u2, const StateVector& psi,
                              GateOrder order) {
  const Eigen::Vector2cd target = as_qubit(psi);
  const Eigen::Matrix2cd op =
      order == GateOrder::u1_first ? u2.matrix() * u1.matrix() : u1.matrix() * u2.matrix();
  return StateVector(ComplexVector(op * target));
}

}  // namespace qswitch
