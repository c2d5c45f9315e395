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


#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "qswitch/comb_sdp.hpp"
#include "qswitch/experiment.hpp"
#include "qswitch/switch_sim.hpp"
#include "qswitch/waveplate.hpp"

namespace py = pybind11;
using namespace qswitch;

namespace {

Unitary2 as_unitary(const Eigen::Matrix2cd& m) { return Unitary2(m); }

PairClass parse_class(const std::string& name) {
  if (name == "commuting") return PairClass::commuting;
  if (name == "anticommuting") return PairClass::anticommuting;
  throw InputError("pair class must be 'commuting' or 'anticommuting', got '" + name + "'");
}

py::dict report_to_dict(const SuiteReport& r) {
  py::dict d;
  d["suite"] = r.suite;
  d["mean_success"] = r.mean_success;
  d["std_success"] = r.std_success;
  d["error_bar"] = r.error_bar;
  std::vector<double> success;
  std::vector<std::string> ids;
  for (const auto& s : r.settings) {
    success.push_back(s.correct_port_probability);
    ids.push_back(s.id);
  }
  d["setting_ids"] = ids;
  d["correct_port_probability"] = success;
  d["csv"] = r.to_csv();
  return d;
}

std::vector<GatePair> to_pairs(const std::vector<std::tuple<Eigen::Matrix2cd, Eigen::Matrix2cd, std::string>>& in) {
  std::vector<GatePair> out;
  for (const auto& [u1, u2, label] : in) out.push_back({Unitary2(u1), Unitary2(u2), parse_pair_label(label), {}});
  return out;
}

}  // namespace

PYBIND11_MODULE(_qswitch, m) {
  m.doc() = "Quantum switch simulation, waveplate compilation and fixed-order comb bounds";

  m.def("exit_probabilities",
        [](const Eigen::Matrix2cd& u1, const Eigen::Matrix2cd& u2, const Eigen::VectorXcd& psi) {
          const SwitchOutcome o = exit_probabilities(as_unitary(u1), as_unitary(u2), StateVector(psi));
          return py::make_tuple(o.p0, o.p1, std::string(to_string(o.verdict)), o.degenerate);
        },
        py::arg("u1"), py::arg("u2"), py::arg("psi"), "(p0, p1, verdict, degenerate) of the ideal 2-switch.");
  m.def("two_switch_output",
        [](const Eigen::Matrix2cd& u1, const Eigen::Matrix2cd& u2, const Eigen::VectorXcd& psi) {
          return Eigen::VectorXcd(two_switch_output(as_unitary(u1), as_unitary(u2), StateVector(psi)).amplitudes());
        },
        py::arg("u1"), py::arg("u2"), py::arg("psi"));
  m.def("choi", [](const Eigen::Matrix2cd& u) { return choi(as_unitary(u)); }, py::arg("u"));
  m.def("classify_pair",
        [](const Eigen::Matrix2cd& u1, const Eigen::Matrix2cd& u2, double tol) {
          return std::string(to_string(classify_pair(as_unitary(u1), as_unitary(u2), tol)));
        },
        py::arg("u1"), py::arg("u2"), py::arg("tol") = kClassifyTolerance);

  m.def("haar_random_unitary",
        [](std::uint64_t seed) {
          RandomSource rng(seed);
          return Eigen::Matrix2cd(haar_random_unitary(rng).matrix());
        },
        py::arg("seed"));
  m.def("sample_pair",
        [](const std::string& cls, std::uint64_t seed) {
          RandomSource rng(seed);
          const GatePair p = parse_class(cls) == PairClass::commuting ? commuting_pair(rng) : anticommuting_pair(rng);
          return py::make_tuple(Eigen::Matrix2cd(p.u1.matrix()), Eigen::Matrix2cd(p.u2.matrix()),
                                std::string(to_string(p.label)));
        },
        py::arg("cls"), py::arg("seed"));

  m.def("qwp", [](double t) { return Eigen::Matrix2cd(qwp(t).matrix()); }, py::arg("theta_deg"));
  m.def("hwp", [](double t) { return Eigen::Matrix2cd(hwp(t).matrix()); }, py::arg("theta_deg"));
  m.def("triple_to_unitary",
        [](double q1, double h, double q2) { return Eigen::Matrix2cd(triple_to_unitary({q1, h, q2}).matrix()); },
        py::arg("q_first"), py::arg("h"), py::arg("q_last"));
  m.def("decompose",
        [](const Eigen::Matrix2cd& u) {
          const WaveplateDecomposition d = decompose(as_unitary(u));
          return py::make_tuple(d.angles.q_first, d.angles.h, d.angles.q_last, d.residual);
        },
        py::arg("u"), "(q_first, h, q_last, residual) in degrees.");
  m.def("load_angle_table",
        [](const std::string& path) {
          const AngleTable t = load_angle_table_file(path);
          py::list rows;
          for (const auto& r : t.rows) {
            py::list triples;
            for (const auto& tr : r.triples) triples.append(py::make_tuple(tr.q_first, tr.h, tr.q_last));
            rows.append(py::make_tuple(r.name, triples));
          }
          return py::make_tuple(rows, t.diagnostics);
        },
        py::arg("path"));

  m.def("run_suite",
        [](const std::string& which, const std::string& table_path, bool calibrated,
           std::optional<std::string> noise_json, std::uint64_t seed) {
          const NoiseParams base = calibrated ? NoiseParams::calibrated() : NoiseParams::noiseless();
          const NoiseParams noise = noise_json ? noise_from_json(*noise_json, base) : base;
          const AngleTable table = load_angle_table_file(table_path);
          RandomSource rng(seed);
          if (which == "pauli") return report_to_dict(run_pauli_suite(table, noise, rng));
          if (which == "random100") return report_to_dict(run_random_suite(table, noise, rng));
          if (which == "statesweep") return report_to_dict(run_state_sweep(table, noise, rng));
          throw InputError("unknown suite '" + which + "'");
        },
        py::arg("which"), py::arg("table_path"), py::arg("calibrated") = false, py::arg("noise_json") = py::none(),
        py::arg("seed") = 20190522);
  m.def("corrected_probability", &corrected_probability, py::arg("c0"), py::arg("c1"), py::arg("eta"));

  m.def("score_operator",
        [](const Eigen::Matrix2cd& u1, const Eigen::Matrix2cd& u2, int outcome) {
          return score_operator(as_unitary(u1), as_unitary(u2), outcome).matrix;
        },
        py::arg("u1"), py::arg("u2"), py::arg("outcome"));
  m.def("averaged_score",
        [](const std::string& cls, int outcome, std::size_t n, std::uint64_t seed) {
          RandomSource rng(seed);
          const ScoreOperator s = averaged_score(parse_class(cls), outcome, n, rng);
          return py::make_tuple(s.matrix, s.max_standard_error);
        },
        py::arg("cls"), py::arg("outcome"), py::arg("n_samples") = kDefaultScoreSamples, py::arg("seed") = 20190522);
  m.def("exact_averaged_score",
        [](const std::string& cls, int outcome) { return exact_averaged_score(parse_class(cls), outcome).matrix; },
        py::arg("cls"), py::arg("outcome"));
  m.def("optimize_fixed_order",
        [](const Eigen::MatrixXcd& omega) {
          ScoreOperator s;
          s.matrix = omega;
          const FixedOrderResult r = optimize_fixed_order(s);
          py::dict d;
          d["p_succ"] = r.p_succ;
          d["upper_bound"] = r.upper_bound;
          d["w_star"] = r.w_star.matrix();
          d["iterations"] = r.iterations;
          d["comb_residual"] = r.residuals.worst();
          return d;
        },
        py::arg("omega"));
  m.def("comb_residual", [](const Eigen::MatrixXcd& w) { return comb_residuals(w).worst(); }, py::arg("w"));
  m.def("project_onto_comb_subspace", &project_onto_comb_subspace, py::arg("m"));
  m.def("build_comb_from_circuit",
        [](const Eigen::VectorXcd& prep, const Eigen::MatrixXcd& v2, const Eigen::MatrixXcd& v3, int wire,
           std::size_t ancilla_dim) {
          return build_comb_from_circuit(StateVector(prep), v2, v3, wire, ancilla_dim).matrix();
        },
        py::arg("prep"), py::arg("v2"), py::arg("v3"), py::arg("measured_wire"), py::arg("ancilla_dim") = 2);
  m.def("probability_from_comb",
        [](const Eigen::MatrixXcd& w, const Eigen::Matrix2cd& u1, const Eigen::Matrix2cd& u2, int outcome) {
          return probability_from_comb(CombOperator(w), as_unitary(u1), as_unitary(u2), outcome);
        },
        py::arg("w"), py::arg("u1"), py::arg("u2"), py::arg("outcome"));
  m.def("evaluate_comb",
        [](const Eigen::MatrixXcd& w,
           const std::vector<std::tuple<Eigen::Matrix2cd, Eigen::Matrix2cd, std::string>>& pairs) {
          return evaluate_comb(CombOperator(w), to_pairs(pairs));
        },
        py::arg("w"), py::arg("pairs"), "pairs: list of (u1, u2, 'COMMUTE' | 'ANTICOMMUTE').");
  m.def("table_pairs",
        [](const std::string& path) {
          py::list out;
          for (const auto& p : random_table_pairs(load_angle_table_file(path))) {
            out.append(py::make_tuple(Eigen::Matrix2cd(p.u1.matrix()), Eigen::Matrix2cd(p.u2.matrix()),
                                      std::string(to_string(p.label))));
          }
          return out;
        },
        py::arg("path"));
}
