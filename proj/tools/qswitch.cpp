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


// qswitch: command-line front end.
//   discriminate  run the ideal 2-switch on two gates
//   suite         simulate a measurement campaign (pauli, random100, statesweep)
//   bound         fixed-order success bound and its evaluation on the table pairs
//   compile       quarter-half-quarter waveplate angles for a gate
//   sample-pairs  draw labelled commuting / anti-commuting pairs
// Exit codes: 0 success, 1 usage or input error, 2 numerical failure.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "gate_spec.hpp"
#include "qswitch/comb_sdp.hpp"
#include "qswitch/errors.hpp"
#include "qswitch/experiment.hpp"
#include "qswitch/gate_factory.hpp"
#include "qswitch/switch_sim.hpp"
#include "qswitch/waveplate.hpp"

namespace {

using namespace qswitch;
using json = nlohmann::json;

constexpr std::uint64_t kDefaultSeed = 20190522;

struct Common {
  std::uint64_t seed = kDefaultSeed;
  bool json = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << text;
}

NoiseParams load_noise(const std::string& path, bool calibrated) {
  const NoiseParams base = calibrated ? NoiseParams::calibrated() : NoiseParams::noiseless();
  if (path.empty()) return base;
  return noise_from_json(read_file(path), base);
}

int cmd_discriminate(const Common& c, const std::string& u1_spec, const std::string& u2_spec,
                     const std::string& state_spec) {
  const Unitary2 u1 = cli::parse_gate_spec(u1_spec);
  const Unitary2 u2 = cli::parse_gate_spec(u2_spec);
  const StateVector psi = cli::parse_state_spec(state_spec);
  const SwitchOutcome out = exit_probabilities(u1, u2, psi);
  const double comm = commutator(u1.matrix(), u2.matrix()).norm();
  const double anti = anticommutator(u1.matrix(), u2.matrix()).norm();
  const PairLabel promise = classify_pair(u1, u2);
  if (promise == PairLabel::neither) {
    std::cerr << "warning: the gates neither commute nor anti-commute; the verdict carries no promise\n";
  }
  if (c.json) {
    std::cout << json{{"p0", out.p0},
                      {"p1", out.p1},
                      {"verdict", to_string(out.verdict)},
                      {"degenerate", out.degenerate},
                      {"promise", to_string(promise)},
                      {"commutator_norm", comm},
                      {"anticommutator_norm", anti}}
                     .dump(2)
              << '\n';
  } else {
    std::cout << std::setprecision(12) << "p0 " << out.p0 << "\np1 " << out.p1 << "\nverdict "
              << to_string(out.verdict) << (out.degenerate ? " (tie)" : "") << "\npromise " << to_string(promise)
              << '\n';
  }
  return 0;
}

int cmd_suite(const Common& c, const std::string& which, const std::string& noise_path, bool calibrated,
              const std::string& out_dir, const std::string& pauli_path, const std::string& random_path) {
  const NoiseParams noise = load_noise(noise_path, calibrated);
  RandomSource rng(c.seed);
  SuiteReport report;
  if (which == "pauli") {
    report = run_pauli_suite(load_angle_table_file(pauli_path), noise, rng);
  } else if (which == "random100") {
    report = run_random_suite(load_angle_table_file(random_path), noise, rng);
  } else {
    report = run_state_sweep(load_angle_table_file(pauli_path), noise, rng);
  }
  const std::filesystem::path dir(out_dir);
  write_file(dir / (which + "_settings.csv"), report.to_csv());
  write_file(dir / (which + "_summary.json"), report.to_json());
  if (c.json) {
    std::cout << json{{"suite", which},
                      {"mean_success", report.mean_success},
                      {"std_success", report.std_success},
                      {"error_bar", report.error_bar},
                      {"seed", c.seed},
                      {"noise", json::parse(to_json(noise))}}
                     .dump(2)
              << '\n';
  } else {
    std::cout << std::setprecision(6) << which << " mean success " << report.mean_success << " +- "
              << report.std_success << " (error bar " << report.error_bar << ", " << report.settings.size()
              << " settings)\n";
    for (const auto& g : report.groups) {
      std::cout << "  " << g.group << ' ' << g.mean_success << " +- " << g.std_success << '\n';
    }
  }
  return 0;
}

int cmd_bound(const Common& c, double samples, bool exact, const std::string& noise_path,
              const std::string& random_path, const std::string& out_dir) {
  if (!(samples >= static_cast<double>(kMinScoreSamples)) || !std::isfinite(samples)) {
    throw InputError("--samples must be at least " + std::to_string(kMinScoreSamples));
  }
  RandomSource rng(c.seed);
  ScoreOperator omega;
  if (exact) {
    omega = success_objective(exact_averaged_score(PairClass::commuting, 0),
                              exact_averaged_score(PairClass::anticommuting, 1));
  } else {
    const auto n = static_cast<std::size_t>(std::llround(samples));
    const ScoreOperator sc = averaged_score(PairClass::commuting, 0, n, rng);
    const ScoreOperator sa = averaged_score(PairClass::anticommuting, 1, n, rng);
    omega = success_objective(sc, sa);
  }
  const FixedOrderResult opt = optimize_fixed_order(omega);

  // First-order Monte Carlo error of tr(omega W*) with entries treated as independent.
  double mc_error = 0.0;
  if (omega.standard_error.size() > 0) {
    mc_error = std::sqrt((omega.standard_error.array().square() * opt.w_star.matrix().array().abs2()).sum());
  }

  const AngleTable table = load_angle_table_file(random_path);
  const std::vector<GatePair> pairs = random_table_pairs(table);
  const double evaluation = evaluate_comb(opt.w_star, pairs);

  std::ostringstream csv;
  csv << "pair,label,comb_correct_probability,switch_correct_probability\n" << std::setprecision(10);
  const StateVector psi = diagonal_input_state();
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const int outcome = pairs[k].label == PairLabel::commute ? 0 : 1;
    const SwitchOutcome sw = exit_probabilities(pairs[k].u1, pairs[k].u2, psi);
    csv << (outcome == 0 ? "C" : "A") << (k % table.rows.size() + 1) << ',' << to_string(pairs[k].label) << ','
        << probability_from_comb(opt.w_star, pairs[k].u1, pairs[k].u2, outcome) << ','
        << (outcome == 0 ? sw.p0 : sw.p1) << '\n';
  }

  const NoiseParams noise = load_noise(noise_path, true);
  RandomSource suite_rng = rng.derive(1);
  const SuiteReport suite = run_random_suite(table, noise, suite_rng);
  const double gap = suite.mean_success - opt.p_succ;

  if (!out_dir.empty()) {
    const std::filesystem::path dir(out_dir);
    write_file(dir / "bound_evaluation.csv", csv.str());
    write_file(dir / "w_star.json", operator_to_json(opt.w_star.matrix(), kCombDims));
  }

  const json report{{"p_succ", opt.p_succ},
                    {"upper_bound", opt.upper_bound},
                    {"monte_carlo_error", mc_error},
                    {"samples", exact ? 0.0 : samples},
                    {"exact", exact},
                    {"iterations", opt.iterations},
                    {"primal_residual", opt.primal_residual},
                    {"comb_residual", opt.residuals.worst()},
                    {"evaluation_100_pairs", evaluation},
                    {"switch_success", suite.mean_success},
                    {"switch_error_bar", suite.error_bar},
                    {"switch_std_across_settings", suite.std_success},
                    {"gap", gap},
                    {"seed", c.seed}};
  if (c.json) {
    std::cout << report.dump(2) << '\n';
  } else {
    std::cout << std::setprecision(6) << "p_succ " << opt.p_succ << " (dual bound " << opt.upper_bound
              << ", Monte Carlo error " << mc_error << ")\n"
              << "iterations " << opt.iterations << ", comb residual " << opt.residuals.worst() << '\n'
              << "evaluation on the 100 table pairs " << evaluation << '\n'
              << "simulated switch success " << suite.mean_success << " +- " << suite.error_bar
              << " (spread across settings " << suite.std_success << ")\n"
              << "gap " << gap << " = " << gap / suite.std_success << " x spread across settings, "
              << gap / suite.error_bar << " x repeat error bar\n"
              << csv.str();
  }
  return 0;
}

int cmd_compile(const Common& c, const std::string& spec) {
  const Unitary2 u = cli::parse_gate_spec(spec);
  const WaveplateDecomposition d = decompose(u);
  if (c.json) {
    std::cout << json{{"q_first", d.angles.q_first},
                      {"h", d.angles.h},
                      {"q_last", d.angles.q_last},
                      {"residual", d.residual},
                      {"refined", d.refined}}
                     .dump(2)
              << '\n';
  } else {
    std::cout << std::setprecision(10) << "Q " << d.angles.q_first << "  H " << d.angles.h << "  Q "
              << d.angles.q_last << "\nresidual " << d.residual << '\n';
  }
  return 0;
}

int cmd_sample_pairs(const Common& c, std::size_t n, const std::string& cls, const std::string& out_path) {
  RandomSource rng(c.seed);
  std::vector<GatePair> pairs;
  for (std::size_t k = 0; k < n; ++k) {
    const bool commuting = cls == "commuting" || (cls == "mixed" && k % 2 == 0);
    pairs.push_back(commuting ? commuting_pair(rng) : anticommuting_pair(rng));
  }
  const std::string text = c.json ? pairs_to_json(pairs) + "\n" : pairs_to_csv(pairs);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_file(out_path, text);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum switch commutation-discrimination toolkit"};
  app.require_subcommand(1);
  Common common;
  app.add_option("--seed", common.seed, "64-bit RNG seed")->capture_default_str();
  app.add_flag("--json", common.json, "Machine-readable JSON on stdout");

  std::string u1 = "I", u2 = "I", state = "+";
  auto* disc = app.add_subcommand("discriminate", "Run the ideal 2-switch on two gates");
  disc->add_option("--u1", u1, "First gate spec")->required();
  disc->add_option("--u2", u2, "Second gate spec")->required();
  disc->add_option("--state", state, "Target state spec")->capture_default_str();

  std::string which, noise_path, out_dir = "out";
  std::string pauli_path = std::string(QSWITCH_DATA_DIR) + "/table1_pauli.csv";
  std::string random_path = std::string(QSWITCH_DATA_DIR) + "/table2_random_pairs.csv";
  bool calibrated = false;
  auto* suite = app.add_subcommand("suite", "Simulate a measurement campaign");
  suite->add_option("which", which, "pauli, random100 or statesweep")
      ->required()
      ->check(CLI::IsMember({"pauli", "random100", "statesweep"}));
  suite->add_option("--noise", noise_path, "JSON noise overrides")->check(CLI::ExistingFile);
  suite->add_flag("--calibrated", calibrated, "Start from the calibrated noise model instead of the noiseless one");
  suite->add_option("--out", out_dir, "Output directory")->capture_default_str();
  suite->add_option("--pauli-table", pauli_path, "Pauli angle table")->capture_default_str();
  suite->add_option("--random-table", random_path, "Random-pair angle table")->capture_default_str();

  double samples = static_cast<double>(kDefaultScoreSamples);
  bool exact = false;
  std::string bound_out;
  auto* bound = app.add_subcommand("bound", "Fixed-order success bound");
  bound->add_option("--samples", samples, "Haar samples per class")->capture_default_str();
  bound->add_flag("--exact", exact, "Use the exact Haar average instead of sampling");
  bound->add_option("--noise", noise_path, "JSON overrides of the calibrated noise model")->check(CLI::ExistingFile);
  bound->add_option("--random-table", random_path, "Random-pair angle table")->capture_default_str();
  bound->add_option("--out", bound_out, "Directory for the evaluation CSV and W*");

  std::string gate;
  auto* compile = app.add_subcommand("compile", "Waveplate angles for a gate");
  compile->add_option("gate", gate, "Gate spec")->required();

  std::size_t n_pairs = 10;
  std::string pair_class = "mixed", pairs_out;
  auto* sample = app.add_subcommand("sample-pairs", "Draw labelled gate pairs");
  sample->add_option("--n", n_pairs, "Number of pairs")->capture_default_str();
  sample->add_option("--class", pair_class, "commuting, anticommuting or mixed")
      ->check(CLI::IsMember({"commuting", "anticommuting", "mixed"}))
      ->capture_default_str();
  sample->add_option("--out", pairs_out, "Output file (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*disc) return cmd_discriminate(common, u1, u2, state);
    if (*suite) return cmd_suite(common, which, noise_path, calibrated, out_dir, pauli_path, random_path);
    if (*bound) return cmd_bound(common, samples, exact, noise_path, random_path, bound_out);
    if (*compile) return cmd_compile(common, gate);
    if (*sample) return cmd_sample_pairs(common, n_pairs, pair_class, pairs_out);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 2;
  }
  return 1;
}
