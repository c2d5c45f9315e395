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

#include "qswitch/experiment.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "qswitch/switch_sim.hpp"

namespace qswitch {

namespace {

using json = nlohmann::json;

double wrap_half_turn(double deg) {
  double w = std::fmod(deg + 90.0, 180.0);
  if (w < 0) w += 180.0;
  return w - 90.0;
}

// Net signed rotation of the six plates away from the zeroing configuration
// (all plates at 0, which realizes identity on both arms). Plates are
// 180-degree periodic, so each takes the short way round.
double net_rotation(const WaveplateTriple& a, const WaveplateTriple& b) {
  double total = 0.0;
  for (double deg : {a.q_first, a.h, a.q_last, b.q_first, b.h, b.q_last}) total += wrap_half_turn(deg);
  return total;
}

double mean_of(std::span<const double> v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double sample_std(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

struct Setting {
  std::string id;
  std::string group;
  PairLabel label;
  WaveplateTriple u1;
  WaveplateTriple u2;
};

// Runs settings in order. A new group re-zeroes the phase and the wall clock.
SuiteReport run_settings(std::string suite, std::span<const Setting> settings, std::span<const StateVector> inputs,
                         const NoiseParams& noise, RandomSource& rng) {
  noise.validate();
  SuiteReport report;
  report.suite = std::move(suite);
  const std::uint64_t base_stream = rng.next_u64();
  const RandomSource base(base_stream);

  std::string current_group;
  int position = 0;
  for (std::size_t k = 0; k < settings.size(); ++k) {
    const Setting& s = settings[k];
    if (k == 0 || s.group != current_group) {
      current_group = s.group;
      position = 0;
    }
    ++position;
    const Unitary2 u1 = triple_to_unitary(s.u1);
    const Unitary2 u2 = triple_to_unitary(s.u2);
    const StateVector& psi = inputs[k];
    const SettingContext ctx{s.id, s.label, net_rotation(s.u1, s.u2), position * noise.seconds_per_setting};

    SettingResult r;
    r.id = s.id;
    r.group = s.group;
    r.label = s.label;
    r.accumulated_rotation_deg = ctx.accumulated_rotation_deg;
    for (int rep = 0; rep < noise.repeats; ++rep) {
      RandomSource stream = base.derive(k * 1024 + static_cast<std::uint64_t>(rep));
      const CountRecord rec = simulate_counts(u1, u2, psi, noise, stream, ctx);
      r.c0 += rec.c0;
      r.c1 += rec.c1;
      r.p0_repeats.push_back(corrected_probability(rec.c0, rec.c1, noise.eta));
    }
    r.p0 = mean_of(r.p0_repeats);
    r.p0_std = sample_std(r.p0_repeats);
    r.correct_port_probability = s.label == PairLabel::anticommute ? 1.0 - r.p0 : r.p0;
    report.settings.push_back(std::move(r));
  }

  std::vector<double> success;
  for (const auto& r : report.settings) {
    success.push_back(r.correct_port_probability);
    report.error_bar = std::max(report.error_bar, r.p0_std);
  }
  report.mean_success = mean_of(success);
  report.std_success = sample_std(success);
  return report;
}

std::vector<Setting> pauli_settings(const AngleTable& table, const std::string& group) {
  if (table.kind != TableKind::pauli || table.rows.size() != 4) {
    throw InputError("Pauli suite needs the 4-row, 7-column Pauli angle table");
  }
  std::vector<Setting> out;
  for (const auto& first : table.rows) {
    for (const auto& second : table.rows) {
      const PairLabel label = classify_pair(pauli_by_name(first.name), pauli_by_name(second.name));
      out.push_back({first.name + second.name, group, label, first.triples[0], second.triples[1]});
    }
  }
  return out;
}

}  // namespace

void NoiseParams::validate() const {
  auto bad = [](const char* field, double v) {
    std::ostringstream msg;
    msg << "noise parameter " << field << " out of range: " << v;
    throw InputError(msg.str());
  };
  if (!(visibility >= 0.0 && visibility <= 1.0)) bad("visibility", visibility);
  if (!std::isfinite(phase_setpoint)) bad("phase_setpoint", phase_setpoint);
  if (!(std::isfinite(phase_drift_per_degree) && phase_drift_per_degree >= 0.0)) {
    bad("phase_drift_per_degree", phase_drift_per_degree);
  }
  if (!(std::isfinite(phase_drift_per_minute) && phase_drift_per_minute >= 0.0)) {
    bad("phase_drift_per_minute", phase_drift_per_minute);
  }
  if (!(eta > 0.0 && eta <= 1.0)) bad("eta", eta);
  if (!(pairs_per_setting > 0.0 && std::isfinite(pairs_per_setting))) bad("pairs_per_setting", pairs_per_setting);
  if (repeats < 1) bad("repeats", repeats);
  if (!(seconds_per_setting >= 0.0 && std::isfinite(seconds_per_setting))) {
    bad("seconds_per_setting", seconds_per_setting);
  }
}

NoiseParams NoiseParams::noiseless() { return NoiseParams{}; }

NoiseParams NoiseParams::calibrated() {
  NoiseParams n;
  n.visibility = 0.994;
  n.phase_drift_per_degree = 0.002;
  n.phase_drift_per_minute = 0.009;
  n.eta = 0.7;
  n.pairs_per_setting = 40000.0;
  n.repeats = 5;
  return n;
}

NoiseParams noise_from_json(std::string_view json_text, const NoiseParams& base) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("noise config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw InputError("noise config must be a JSON object");
  NoiseParams n = base;
  for (const auto& [key, value] : j.items()) {
    auto number = [&]() {
      if (!value.is_number()) throw InputError("noise config key '" + key + "' must be a number");
      return value.get<double>();
    };
    if (key == "visibility") {
      n.visibility = number();
    } else if (key == "phase_setpoint") {
      n.phase_setpoint = number();
    } else if (key == "phase_drift_per_degree") {
      n.phase_drift_per_degree = number();
    } else if (key == "phase_drift_per_minute") {
      n.phase_drift_per_minute = number();
    } else if (key == "eta") {
      n.eta = number();
    } else if (key == "pairs_per_setting") {
      n.pairs_per_setting = number();
    } else if (key == "repeats") {
      if (!value.is_number_integer()) throw InputError("noise config key 'repeats' must be an integer");
      n.repeats = value.get<int>();
    } else if (key == "seconds_per_setting") {
      n.seconds_per_setting = number();
    } else {
      throw InputError("unknown noise config key '" + key + "'");
    }
  }
  n.validate();
  return n;
}

std::string to_json(const NoiseParams& n) {
  const json j{{"visibility", n.visibility},
               {"phase_setpoint", n.phase_setpoint},
               {"phase_drift_per_degree", n.phase_drift_per_degree},
               {"phase_drift_per_minute", n.phase_drift_per_minute},
               {"eta", n.eta},
               {"pairs_per_setting", n.pairs_per_setting},
               {"repeats", n.repeats},
               {"seconds_per_setting", n.seconds_per_setting}};
  return j.dump(2);
}

PortProbabilities ideal_port_probabilities_with_noise(const Unitary2& u1, const Unitary2& u2,
                                                      const StateVector& psi, const NoiseParams& noise,
                                                      double accumulated_rotation_deg, double elapsed_minutes) {
  noise.validate();
  if (psi.dim() != 2) throw InputError("target state must be a qubit (dimension 2)");
  const double s = 1.0 / std::sqrt(2.0);
  const Eigen::Vector2cd a = s * (u1.matrix() * u2.matrix() * psi.amplitudes());
  const Eigen::Vector2cd b = s * (u2.matrix() * u1.matrix() * psi.amplitudes());
  const double phi = noise.phase_setpoint + noise.phase_drift_per_degree * accumulated_rotation_deg +
                     noise.phase_drift_per_minute * elapsed_minutes;
  const double p1 = 0.5 * (a.squaredNorm() + b.squaredNorm()) +
                    noise.visibility * (std::polar(1.0, phi) * a.dot(b)).real();
  PortProbabilities out;
  out.p1 = std::clamp(p1, 0.0, 1.0);
  out.p0 = 1.0 - out.p1;
  return out;
}

CountRecord simulate_counts(const Unitary2& u1, const Unitary2& u2, const StateVector& psi,
                            const NoiseParams& noise, RandomSource& rng, const SettingContext& ctx) {
  const PortProbabilities p =
      ideal_port_probabilities_with_noise(u1, u2, psi, noise, ctx.accumulated_rotation_deg, ctx.wall_time / 60.0);
  const std::uint64_t photons = rng.poisson(noise.pairs_per_setting);
  const std::uint64_t to_port1 = rng.binomial(photons, p.p1);
  CountRecord rec;
  rec.c0 = photons - to_port1;
  rec.c1 = rng.binomial(to_port1, noise.eta);
  rec.setting = ctx.id;
  rec.true_label = ctx.label;
  rec.wall_time = ctx.wall_time;
  return rec;
}

double corrected_probability(std::uint64_t c0, std::uint64_t c1, double eta) {
  if (!(eta > 0.0 && eta <= 1.0)) throw InputError("corrected_probability: eta must lie in (0, 1]");
  if (c0 + c1 == 0) throw InputError("corrected_probability: no counts recorded");
  const double n0 = static_cast<double>(c0);
  return n0 / (n0 + static_cast<double>(c1) / eta);
}

std::vector<CountRecord> simulate_phase_sweep(const Unitary2& u1, const Unitary2& u2, const StateVector& psi,
                                              const NoiseParams& noise, std::span<const double> phases,
                                              RandomSource& rng) {
  std::vector<CountRecord> out;
  for (std::size_t k = 0; k < phases.size(); ++k) {
    NoiseParams point = noise;
    point.phase_setpoint = phases[k];
    point.phase_drift_per_degree = 0.0;
    point.phase_drift_per_minute = 0.0;
    out.push_back(simulate_counts(u1, u2, psi, point, rng, {"phase-" + std::to_string(k), PairLabel::neither, 0.0, 0.0}));
  }
  return out;
}

double calibrate_eta(std::span<const CountRecord> sweep) {
  if (sweep.size() < 3) throw InputError("calibrate_eta: need at least three sweep points");
  std::vector<double> c0, c1;
  for (const auto& r : sweep) {
    c0.push_back(static_cast<double>(r.c0));
    c1.push_back(static_cast<double>(r.c1));
  }
  const double m0 = mean_of(c0);
  const double m1 = mean_of(c1);
  double cov = 0.0, var1 = 0.0;
  for (std::size_t k = 0; k < c0.size(); ++k) {
    cov += (c0[k] - m0) * (c1[k] - m1);
    var1 += (c1[k] - m1) * (c1[k] - m1);
  }
  var1 /= static_cast<double>(c1.size() - 1);
  cov /= static_cast<double>(c1.size() - 1);
  // A genuine fringe moves C1 by far more than its Poisson spread (variance ~ mean).
  if (!(var1 > 25.0 * std::max(m1, 1.0))) {
    throw InputError("calibrate_eta: sweep shows no fringe contrast");
  }
  // Var(C0 + x C1) is minimized at x = -Cov(C0, C1) / Var(C1); eta = 1 / x.
  const double x = -cov / var1;
  if (!(x > 0.0)) throw InputError("calibrate_eta: port counts are not anti-correlated");
  return 1.0 / x;
}

std::string SuiteReport::to_csv() const {
  std::ostringstream out;
  out << "setting_id,label,c0,c1,p0_corrected,correct_port_probability\n";
  out << std::setprecision(10);
  for (const auto& s : settings) {
    out << s.id << ',' << to_string(s.label) << ',' << s.c0 << ',' << s.c1 << ',' << s.p0 << ','
        << s.correct_port_probability << '\n';
  }
  return out.str();
}

std::string SuiteReport::to_json() const {
  json j;
  j["suite"] = suite;
  j["mean_success"] = mean_success;
  j["std_success"] = std_success;
  j["error_bar"] = error_bar;
  j["n_settings"] = settings.size();
  json groups_json = json::array();
  for (const auto& g : groups) {
    groups_json.push_back({{"group", g.group}, {"mean_success", g.mean_success}, {"std_success", g.std_success}});
  }
  j["groups"] = groups_json;
  json rows = json::array();
  for (const auto& s : settings) {
    rows.push_back({{"id", s.id},
                    {"group", s.group},
                    {"label", to_string(s.label)},
                    {"c0", s.c0},
                    {"c1", s.c1},
                    {"p0", s.p0},
                    {"p0_std", s.p0_std},
                    {"p0_repeats", s.p0_repeats},
                    {"correct_port_probability", s.correct_port_probability},
                    {"accumulated_rotation_deg", s.accumulated_rotation_deg}});
  }
  j["settings"] = rows;
  return j.dump(2);
}

StateVector diagonal_input_state() { return states::plus(); }

StateVector prepared_input_state(double hwp_deg) {
  return StateVector(ComplexVector(hwp(hwp_deg).matrix() * states::zero().amplitudes()));
}

SuiteReport run_pauli_suite(const AngleTable& pauli_table, const NoiseParams& noise, RandomSource& rng,
                            const StateVector& psi) {
  const auto settings = pauli_settings(pauli_table, "pauli");
  const std::vector<StateVector> inputs(settings.size(), psi);
  SuiteReport report = run_settings("pauli", settings, inputs, noise, rng);
  report.groups.push_back({"pauli", report.mean_success, report.std_success});
  return report;
}

SuiteReport run_random_suite(const AngleTable& random_table, const NoiseParams& noise, RandomSource& rng,
                             const StateVector& psi) {
  if (random_table.kind != TableKind::random_pairs) {
    throw InputError("random suite needs the 13-column random-pair angle table");
  }
  constexpr std::size_t kGroupSize = 10;
  std::vector<Setting> settings;
  for (const PairLabel label : {PairLabel::commute, PairLabel::anticommute}) {
    const bool commuting = label == PairLabel::commute;
    for (std::size_t k = 0; k < random_table.rows.size(); ++k) {
      const AngleRow& row = random_table.rows[k];
      const std::string prefix = commuting ? "C" : "A";
      const std::string group = prefix + "-group-" + std::to_string(k / kGroupSize + 1);
      settings.push_back({prefix + row.name, group, label, row.triples[commuting ? 0 : 2],
                          row.triples[commuting ? 1 : 3]});
    }
  }
  const std::vector<StateVector> inputs(settings.size(), psi);
  SuiteReport report = run_settings("random100", settings, inputs, noise, rng);

  for (const PairLabel label : {PairLabel::commute, PairLabel::anticommute}) {
    std::vector<double> v;
    for (const auto& s : report.settings) {
      if (s.label == label) v.push_back(s.correct_port_probability);
    }
    report.groups.push_back({label == PairLabel::commute ? "commuting" : "anticommuting", mean_of(v), sample_std(v)});
  }
  return report;
}

SuiteReport run_state_sweep(const AngleTable& pauli_table, const NoiseParams& noise, RandomSource& rng) {
  constexpr std::array<double, 5> kPrepAngles{0.0, 10.0, 20.0, 30.0, 40.0};
  std::vector<Setting> settings;
  std::vector<StateVector> inputs;
  for (double angle : kPrepAngles) {
    std::ostringstream group;
    group << "hwp" << angle;
    for (auto s : pauli_settings(pauli_table, group.str())) {
      s.id = group.str() + ":" + s.id;
      settings.push_back(std::move(s));
      inputs.push_back(prepared_input_state(angle));
    }
  }
  SuiteReport report = run_settings("statesweep", settings, inputs, noise, rng);
  for (double angle : kPrepAngles) {
    std::ostringstream group;
    group << "hwp" << angle;
    std::vector<double> v;
    for (const auto& s : report.settings) {
      if (s.group == group.str()) v.push_back(s.correct_port_probability);
    }
    report.groups.push_back({group.str(), mean_of(v), sample_std(v)});
  }
  return report;
}

}  // namespace qswitch
