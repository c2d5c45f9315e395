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

#ifndef QSWITCH_EXPERIMENT_HPP
#define QSWITCH_EXPERIMENT_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qswitch/gate_factory.hpp"
#include "qswitch/linalg.hpp"
#include "qswitch/waveplate.hpp"

namespace qswitch {

/// Summary noise model of the two-path interferometer.
struct NoiseParams {
  double visibility = 1.0;              // fringe visibility in [0, 1]
  double phase_setpoint = 3.141592653589793;  // radians; pi realizes the ideal switch
  double phase_drift_per_degree = 0.0;  // radians per degree of net waveplate rotation
  double phase_drift_per_minute = 0.0;  // radians per minute since the last re-zeroing
  double eta = 1.0;                     // port-1 detection efficiency relative to port 0, (0, 1]
  double pairs_per_setting = 40000.0;   // mean heralded photons per setting
  int repeats = 5;                      // measurements per setting
  double seconds_per_setting = 6.0;     // wall time per setting, including plate motion

  /// Throws InputError naming the first out-of-range field.
  void validate() const;

  static NoiseParams noiseless();
  /// V = 0.994, 0.002 rad/deg, 9 mrad/min, eta = 0.7, 40000 pairs, 5 repeats.
  static NoiseParams calibrated();
};

/// Strict parse: unknown keys and wrong types are rejected. Missing keys keep
/// the values from `base`.
NoiseParams noise_from_json(std::string_view json_text, const NoiseParams& base = NoiseParams::noiseless());
std::string to_json(const NoiseParams& noise);

struct PortProbabilities {
  double p0 = 0.0;
  double p1 = 0.0;
};

/// Two-path interference of the branches a = U1 U2 psi / sqrt2 and
/// b = U2 U1 psi / sqrt2 with relative phase
///   phi = phase_setpoint + drift_per_degree * rotation + drift_per_minute * minutes
/// and visibility V:
///   p1 = (|a|^2 + |b|^2) / 2 + V Re(e^{i phi} <a|b>).
/// At V = 1 and phi = pi this is exactly exit_probabilities.
PortProbabilities ideal_port_probabilities_with_noise(const Unitary2& u1, const Unitary2& u2,
                                                      const StateVector& psi, const NoiseParams& noise,
                                                      double accumulated_rotation_deg,
                                                      double elapsed_minutes = 0.0);

struct CountRecord {
  std::uint64_t c0 = 0;
  std::uint64_t c1 = 0;
  std::string setting;
  PairLabel true_label = PairLabel::neither;
  double wall_time = 0.0;  // seconds since the last re-zeroing
};

struct SettingContext {
  std::string id;
  PairLabel label = PairLabel::neither;
  double accumulated_rotation_deg = 0.0;
  double wall_time = 0.0;  // seconds
};

/// N ~ Poisson(pairs_per_setting) heralded photons, each routed to port 1 with
/// the noisy probability; port-1 detections are thinned by eta.
CountRecord simulate_counts(const Unitary2& u1, const Unitary2& u2, const StateVector& psi,
                            const NoiseParams& noise, RandomSource& rng, const SettingContext& ctx = {});

/// P0 = C0 / (C0 + C1 / eta).
double corrected_probability(std::uint64_t c0, std::uint64_t c1, double eta);

/// Counts recorded while the interferometer phase is scanned through the
/// given values (drift terms disabled).
std::vector<CountRecord> simulate_phase_sweep(const Unitary2& u1, const Unitary2& u2, const StateVector& psi,
                                              const NoiseParams& noise, std::span<const double> phases,
                                              RandomSource& rng);

/// eta minimizing the spread of C0 + C1/eta over a phase sweep. Requires at
/// least three points and fringe contrast well above Poisson noise.
double calibrate_eta(std::span<const CountRecord> sweep);

struct SettingResult {
  std::string id;
  std::string group;
  PairLabel label = PairLabel::neither;
  std::uint64_t c0 = 0;  // summed over repeats
  std::uint64_t c1 = 0;
  std::vector<double> p0_repeats;
  double p0 = 0.0;       // mean over repeats
  double p0_std = 0.0;   // sample standard deviation over repeats
  double correct_port_probability = 0.0;
  double accumulated_rotation_deg = 0.0;
};

struct GroupSummary {
  std::string group;
  double mean_success = 0.0;
  double std_success = 0.0;
};

struct SuiteReport {
  std::string suite;
  std::vector<SettingResult> settings;
  double mean_success = 0.0;
  double std_success = 0.0;  // across settings
  double error_bar = 0.0;    // largest per-setting standard deviation
  std::vector<GroupSummary> groups;

  /// setting_id,label,c0,c1,p0_corrected,correct_port_probability
  std::string to_csv() const;
  std::string to_json() const;
};

/// (|H> + |V>) / sqrt2, the input state of the Pauli and random-pair runs.
StateVector diagonal_input_state();

/// hwp(theta) |H>
StateVector prepared_input_state(double hwp_deg);

/// All 16 ordered Pauli pairs, angles from the 7-column table.
SuiteReport run_pauli_suite(const AngleTable& pauli_table, const NoiseParams& noise, RandomSource& rng,
                            const StateVector& psi = diagonal_input_state());

/// The 100 pairs of the 13-column table, taken in groups of ten with the
/// phase re-zeroed before each group.
SuiteReport run_random_suite(const AngleTable& random_table, const NoiseParams& noise, RandomSource& rng,
                             const StateVector& psi = diagonal_input_state());

/// The Pauli suite repeated for input states hwp(0, 10, 20, 30, 40 deg) |H>.
SuiteReport run_state_sweep(const AngleTable& pauli_table, const NoiseParams& noise, RandomSource& rng);

}  // namespace qswitch

#endif  // QSWITCH_EXPERIMENT_HPP
