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

#ifndef QSWITCH_SWITCH_SIM_HPP
#define QSWITCH_SWITCH_SIM_HPP

#include <string_view>

#include "qswitch/linalg.hpp"

namespace qswitch {

/// Control (x) target state of the two-gate switch, index = 2 * control + target.
class JointState {
 public:
  explicit JointState(const Eigen::Vector4cd& amplitudes);

  const Eigen::Vector4cd& amplitudes() const noexcept { return v_; }
  Complex amplitude(int control, int target) const { return v_(2 * control + target); }
  /// Probability of finding the control qubit in |control>.
  double control_probability(int control) const;
  /// Unnormalized target-qubit branch conditioned on the control value.
  Eigen::Vector2cd branch(int control) const { return v_.segment<2>(2 * control); }
  StateVector as_state() const { return StateVector(ComplexVector(v_)); }

 private:
  Eigen::Vector4cd v_;
};

enum class Verdict { commute, anticommute };

std::string_view to_string(Verdict v);

struct SwitchOutcome {
  double p0 = 0.0;  // exit port 0: control found in |0> after the final Hadamard
  double p1 = 0.0;
  Verdict verdict = Verdict::commute;
  /// p0 == p1: the promise is violated and the verdict carries no information.
  bool degenerate = false;
};

/// 1/2 |0> (x) {U1,U2} psi + 1/2 |1> (x) [U1,U2] psi.
JointState two_switch_output(const Unitary2& u1, const Unitary2& u2, const StateVector& psi);

/// Port probabilities p0 = ||{U1,U2} psi||^2 / 4 and p1 = ||[U1,U2] psi||^2 / 4.
SwitchOutcome exit_probabilities(const Unitary2& u1, const Unitary2& u2, const StateVector& psi);

/// `u1_first` applies U1 then U2 (returns U2 U1 psi); `u2_first` returns U1 U2 psi.
enum class GateOrder { u1_first, u2_first };

StateVector fixed_order_apply(const Unitary2& u1, const Unitary2& u2, const StateVector& psi,
                              GateOrder order);

}  // namespace qswitch

#endif  // QSWITCH_SWITCH_SIM_HPP
