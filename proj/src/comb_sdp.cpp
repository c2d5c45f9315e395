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

#include "qswitch/comb_sdp.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <exception>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>
#include <vector>

#include <nlohmann/json.hpp>

namespace qswitch {

namespace {

using Subsystems = std::vector<std::size_t>;

ComplexMatrix hermitian_part(const ComplexMatrix& m) { return 0.5 * (m + m.adjoint()); }

ComplexMatrix replace(const ComplexMatrix& m, const Subsystems& sub) {
  return replace_with_identity(m, kCombDims, sub);
}

ComplexMatrix outcome_projector(int outcome) {
  if (outcome != 0 && outcome != 1) throw InputError("outcome must be 0 or 1");
  ComplexMatrix p = ComplexMatrix::Zero(2, 2);
  p(outcome, outcome) = 1.0;
  return p;
}

// Commutant basis of R* (x) R (x) R* (x) R on four qubits.
struct TwirlBasis {
  std::vector<ComplexMatrix> ops;
  Eigen::MatrixXd gram_pinv;
};

const TwirlBasis& twirl_basis() {
  static const TwirlBasis basis = [] {
    TwirlBasis b;
    const std::array<std::size_t, 4> dims{2, 2, 2, 2};
    const std::array<std::size_t, 2> conjugated{0, 2};
    std::array<int, 4> p{0, 1, 2, 3};
    do {
      ComplexMatrix op = ComplexMatrix::Zero(16, 16);
      for (int idx = 0; idx < 16; ++idx) {
        std::array<int, 4> in{(idx >> 3) & 1, (idx >> 2) & 1, (idx >> 1) & 1, idx & 1};
        std::array<int, 4> out{};
        for (int k = 0; k < 4; ++k) out[p[k]] = in[k];
        op((out[0] << 3) | (out[1] << 2) | (out[2] << 1) | out[3], idx) = 1.0;
      }
      b.ops.push_back(partial_transpose(op, dims, conjugated));
    } while (std::next_permutation(p.begin(), p.end()));

    const auto n = static_cast<Eigen::Index>(b.ops.size());
    Eigen::MatrixXd gram(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = 0; j < n; ++j) gram(i, j) = (b.ops[i].adjoint() * b.ops[j]).trace().real();
    }
    // The 24 operators are linearly dependent for qubits; use the pseudo-inverse.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    const double cutoff = 1e-10 * es.eigenvalues().cwiseAbs().maxCoeff();
    Eigen::VectorXd inv = es.eigenvalues();
    for (Eigen::Index k = 0; k < n; ++k) inv(k) = std::abs(inv(k)) > cutoff ? 1.0 / inv(k) : 0.0;
    b.gram_pinv = es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
    return b;
  }();
  return basis;
}

ComplexMatrix twirl(const ComplexMatrix& x) {
  const TwirlBasis& b = twirl_basis();
  const auto n = static_cast<Eigen::Index>(b.ops.size());
  Eigen::VectorXcd c(n);
  for (Eigen::Index j = 0; j < n; ++j) c(j) = (b.ops[j].adjoint() * x).trace();
  const Eigen::VectorXcd w = b.gram_pinv.cast<Complex>() * c;
  ComplexMatrix out = ComplexMatrix::Zero(16, 16);
  for (Eigen::Index j = 0; j < n; ++j) out += w(j) * b.ops[j];
  return out;
}

// Per-sample Choi-pair operators with the analytic averages already applied.
ComplexMatrix commuting_diagonal_average() {
  ComplexMatrix d = ComplexMatrix::Zero(4, 4);
  d(0, 0) = 1.0;
  d(3, 3) = 1.0;
  return d;
}

struct ChunkSums {
  ComplexMatrix sum;
  Eigen::MatrixXd sum_sq_re;
  Eigen::MatrixXd sum_sq_im;
};

ChunkSums sample_chunk(PairClass cls, std::size_t count, RandomSource stream) {
  ChunkSums s{ComplexMatrix::Zero(16, 16), Eigen::MatrixXd::Zero(16, 16), Eigen::MatrixXd::Zero(16, 16)};
  const ComplexMatrix d0 = commuting_diagonal_average();
  const ComplexMatrix cz = choi(gates::pauli_z());
  const ComplexMatrix cxy = 0.5 * (choi(gates::pauli_y()) + choi(gates::pauli_x()));
  for (std::size_t k = 0; k < count; ++k) {
    const Eigen::Matrix2cd r = haar_random_unitary(stream).matrix();
    const ComplexMatrix m = tensor(r.conjugate(), r);
    ComplexMatrix sample;
    if (cls == PairClass::commuting) {
      const ComplexMatrix kk = m * d0 * m.adjoint();
      sample = tensor(kk, kk);
    } else {
      sample = tensor(m * cz * m.adjoint(), m * cxy * m.adjoint());
    }
    s.sum += sample;
    s.sum_sq_re += sample.real().cwiseAbs2();
    s.sum_sq_im += sample.imag().cwiseAbs2();
  }
  return s;
}

constexpr std::size_t kChunkSize = 5000;

std::string describe(const CombResiduals& r) {
  std::ostringstream msg;
  msg << "min eigenvalue " << r.min_eigenvalue << ", last-slot residual " << r.last_slot
      << ", first-slot residual " << r.first_slot << ", trace residual " << r.trace << ", hermiticity "
      << r.hermiticity;
  return msg.str();
}

bool is_unitary(const ComplexMatrix& v, double tol) {
  if (v.rows() != v.cols()) return false;
  return (v.adjoint() * v - ComplexMatrix::Identity(v.rows(), v.cols())).norm() <= tol;
}

}  // namespace

double CombResiduals::worst() const {
  return std::max({last_slot, first_slot, trace, hermiticity, std::max(0.0, -min_eigenvalue)});
}

CombResiduals comb_residuals(const ComplexMatrix& w) {
  if (w.rows() != static_cast<Eigen::Index>(kCombDim) || w.cols() != static_cast<Eigen::Index>(kCombDim)) {
    throw InputError("comb operators are 32x32");
  }
  require_finite(w, "comb operator");
  CombResiduals r;
  r.hermiticity = (w - w.adjoint()).norm();
  const ComplexMatrix h = hermitian_part(w);
  r.min_eigenvalue = eig_hermitian(h).values(0);

  const std::array<std::size_t, 4> dims4{2, 2, 2, 2};
  const std::array<std::size_t, 1> p5{4};
  const ComplexMatrix a = partial_trace(h, kCombDims, p5);
  const std::array<std::size_t, 1> p4{3};
  r.last_slot = (a - replace_with_identity(a, dims4, p4)).norm();

  const ComplexMatrix w2 = partial_trace(a, dims4, p4) / 2.0;
  const std::array<std::size_t, 3> dims3{2, 2, 2};
  const std::array<std::size_t, 1> p3{2};
  const ComplexMatrix b = partial_trace(w2, dims3, p3);
  const std::array<std::size_t, 2> dims2{2, 2};
  const std::array<std::size_t, 1> p2{1};
  r.first_slot = (b - replace_with_identity(b, dims2, p2)).norm();

  const ComplexMatrix w1 = partial_trace(b, dims2, p2) / 2.0;
  r.trace = std::abs(w1.trace() - Complex(1.0, 0.0));
  return r;
}

CombOperator::CombOperator(ComplexMatrix w, double tol) : w_(std::move(w)) {
  const CombResiduals r = comb_residuals(w_);
  if (!(r.worst() <= tol)) {
    std::ostringstream msg;
    msg << "not a valid comb (tolerance " << tol << "): " << describe(r);
    throw InputError(msg.str());
  }
}

CombOperator CombOperator::maximally_mixed() {
  return CombOperator(ComplexMatrix::Identity(kCombDim, kCombDim) / 8.0);
}

ComplexMatrix project_onto_comb_directions(const ComplexMatrix& m) {
  // (1 - Q3)(1 - Q2)(1 - Q1) with
  //   Q1 = _P5 (1 - _P4), Q2 = _P3P4P5 (1 - _P2), Q3 = _all,
  // where _X replaces the factors X by I/d. The three factors commute.
  ComplexMatrix x = m - replace(m, {4}) + replace(m, {3, 4});
  x = x - replace(x, {2, 3, 4}) + replace(x, {1, 2, 3, 4});
  return x - replace(x, {0, 1, 2, 3, 4});
}

ComplexMatrix project_onto_comb_subspace(const ComplexMatrix& m) {
  if (m.rows() != static_cast<Eigen::Index>(kCombDim) || m.cols() != static_cast<Eigen::Index>(kCombDim)) {
    throw InputError("comb subspace projection expects a 32x32 matrix");
  }
  const ComplexMatrix w0 = ComplexMatrix::Identity(kCombDim, kCombDim) / 8.0;
  return w0 + project_onto_comb_directions(m - w0);
}

std::string_view to_string(PairClass c) { return c == PairClass::commuting ? "COMMUTING" : "ANTICOMMUTING"; }

ScoreOperator score_operator(const Unitary2& u1, const Unitary2& u2, int outcome) {
  ScoreOperator s;
  s.matrix = tensor(tensor(choi(u1), choi(u2)), outcome_projector(outcome));
  return s;
}

ScoreOperator averaged_score(PairClass cls, int outcome, std::size_t n_samples, RandomSource& rng) {
  if (n_samples < kMinScoreSamples) {
    throw InputError("averaged_score needs at least " + std::to_string(kMinScoreSamples) + " samples");
  }
  const ComplexMatrix proj = outcome_projector(outcome);
  const RandomSource base(rng.next_u64());
  const std::size_t chunks = (n_samples + kChunkSize - 1) / kChunkSize;
  std::vector<ChunkSums> results(chunks);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t c = next++; c < chunks; c = next++) {
      try {
        const std::size_t count = std::min(kChunkSize, n_samples - c * kChunkSize);
        results[c] = sample_chunk(cls, count, base.derive(c));
      } catch (...) {
        const std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const std::size_t n_threads = std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, chunks);
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  // Fixed reduction order keeps the result independent of scheduling.
  ChunkSums total{ComplexMatrix::Zero(16, 16), Eigen::MatrixXd::Zero(16, 16), Eigen::MatrixXd::Zero(16, 16)};
  for (const auto& r : results) {
    total.sum += r.sum;
    total.sum_sq_re += r.sum_sq_re;
    total.sum_sq_im += r.sum_sq_im;
  }
  const double n = static_cast<double>(n_samples);
  const ComplexMatrix mean = total.sum / n;
  const Eigen::MatrixXd var_re = (total.sum_sq_re / n - mean.real().cwiseAbs2()) * (n / (n - 1.0));
  const Eigen::MatrixXd var_im = (total.sum_sq_im / n - mean.imag().cwiseAbs2()) * (n / (n - 1.0));
  const Eigen::MatrixXd se16 = ((var_re + var_im).cwiseMax(0.0) / n).cwiseSqrt();

  ScoreOperator s;
  s.matrix = tensor(hermitian_part(mean), proj);
  s.samples = n_samples;
  s.standard_error = Eigen::MatrixXd::Zero(kCombDim, kCombDim);
  for (Eigen::Index r = 0; r < 16; ++r) {
    for (Eigen::Index c = 0; c < 16; ++c) s.standard_error(2 * r + outcome, 2 * c + outcome) = se16(r, c);
  }
  s.max_standard_error = se16.maxCoeff();
  return s;
}

ScoreOperator exact_averaged_score(PairClass cls, int outcome) {
  ComplexMatrix inner;
  if (cls == PairClass::commuting) {
    const ComplexMatrix d0 = commuting_diagonal_average();
    inner = twirl(tensor(d0, d0));
  } else {
    inner = twirl(tensor(choi(gates::pauli_z()), choi(gates::pauli_y())));
  }
  ScoreOperator s;
  s.matrix = tensor(hermitian_part(inner), outcome_projector(outcome));
  return s;
}

ScoreOperator success_objective(const ScoreOperator& s_commute, const ScoreOperator& s_anticommute) {
  if (s_commute.matrix.rows() != static_cast<Eigen::Index>(kCombDim) ||
      s_anticommute.matrix.rows() != static_cast<Eigen::Index>(kCombDim)) {
    throw InputError("score operators are 32x32");
  }
  ScoreOperator s;
  s.matrix = 0.5 * (s_commute.matrix + s_anticommute.matrix);
  s.samples = std::min(s_commute.samples, s_anticommute.samples);
  if (s_commute.standard_error.size() > 0 && s_anticommute.standard_error.size() > 0) {
    s.standard_error = 0.5 * (s_commute.standard_error.cwiseAbs2() + s_anticommute.standard_error.cwiseAbs2()).cwiseSqrt();
    s.max_standard_error = s.standard_error.maxCoeff();
  }
  return s;
}

ComplexMatrix swap_slots(const ComplexMatrix& m) {
  const std::array<std::size_t, 5> perm{2, 3, 0, 1, 4};
  return permute_subsystems(m, kCombDims, perm);
}

CombOperator build_comb_from_circuit(const StateVector& prep, const ComplexMatrix& v2, const ComplexMatrix& v3,
                                     int measured_wire, std::size_t ancilla_dim) {
  if (ancilla_dim < 1) throw InputError("ancilla dimension must be at least 1");
  const auto da = static_cast<Eigen::Index>(ancilla_dim);
  const Eigen::Index d = 2 * da;
  if (static_cast<Eigen::Index>(prep.dim()) != d) {
    throw InputError("prep must live on system (x) ancilla, dimension " + std::to_string(d));
  }
  if (v2.rows() != d || v2.cols() != d || v3.rows() != d || v3.cols() != d) {
    throw InputError("V2 and V3 must be " + std::to_string(d) + "x" + std::to_string(d));
  }
  if (!is_unitary(v2, 1e-10) || !is_unitary(v3, 1e-10)) throw InputError("V2 and V3 must be unitary");
  if (measured_wire != 0 && measured_wire != 1) throw InputError("measured wire must be 0 (system) or 1 (ancilla)");
  if (measured_wire == 1 && ancilla_dim != 2) throw InputError("a measured ancilla must be a qubit");

  // Amplitude tensor with the slots left open:
  //   w[p1 p2 p3 p4 s a] = sum phi[p1 a0] V2[(p3 a1),(p2 a0)] V3[(s a),(p4 a1)]
  // so that the outcome amplitude is its contraction with |U1>> (x) |U2>>.
  const ComplexVector& phi = prep.amplitudes();
  auto at = [da](int p1, int p2, int p3, int p4, int s, Eigen::Index a) {
    return ((((static_cast<Eigen::Index>(p1) * 2 + p2) * 2 + p3) * 2 + p4) * 2 + s) * da + a;
  };
  ComplexVector w = ComplexVector::Zero(16 * 2 * da);
  for (int p1 = 0; p1 < 2; ++p1) {
    for (int p2 = 0; p2 < 2; ++p2) {
      for (int p3 = 0; p3 < 2; ++p3) {
        for (int p4 = 0; p4 < 2; ++p4) {
          for (int s = 0; s < 2; ++s) {
            for (Eigen::Index a = 0; a < da; ++a) {
              Complex acc = 0.0;
              for (Eigen::Index a0 = 0; a0 < da; ++a0) {
                for (Eigen::Index a1 = 0; a1 < da; ++a1) {
                  acc += phi(p1 * da + a0) * v2(p3 * da + a1, p2 * da + a0) * v3(s * da + a, p4 * da + a1);
                }
              }
              w(at(p1, p2, p3, p4, s, a)) = acc;
            }
          }
        }
      }
    }
  }

  // Trace out the unmeasured wire; the measured one becomes P5. The stored
  // operator is the conjugate of w w^dagger (see the header).
  ComplexMatrix m = ComplexMatrix::Zero(kCombDim, kCombDim);
  for (int row = 0; row < 32; ++row) {
    for (int col = 0; col < 32; ++col) {
      const int pr = row >> 1, pc = col >> 1;
      const int kr = row & 1, kc = col & 1;
      Complex acc = 0.0;
      if (measured_wire == 0) {
        for (Eigen::Index a = 0; a < da; ++a) {
          acc += std::conj(w(at(pr >> 3, (pr >> 2) & 1, (pr >> 1) & 1, pr & 1, kr, a))) *
                 w(at(pc >> 3, (pc >> 2) & 1, (pc >> 1) & 1, pc & 1, kc, a));
        }
      } else {
        for (int s = 0; s < 2; ++s) {
          acc += std::conj(w(at(pr >> 3, (pr >> 2) & 1, (pr >> 1) & 1, pr & 1, s, kr))) *
                 w(at(pc >> 3, (pc >> 2) & 1, (pc >> 1) & 1, pc & 1, s, kc));
        }
      }
      m(row, col) = acc;
    }
  }
  return CombOperator(std::move(m), 1e-8);
}

double probability_from_comb(const CombOperator& w, const Unitary2& u1, const Unitary2& u2, int outcome) {
  const ComplexMatrix s = score_operator(u1, u2, outcome).matrix;
  const double p = (s * w.matrix()).trace().real();
  if (p < -1e-8 || p > 1.0 + 1e-8) {
    std::ostringstream msg;
    msg << "probability " << p << " outside [0, 1]: the comb is invalid";
    throw NumericalError(msg.str());
  }
  return std::clamp(p, 0.0, 1.0);
}

FixedOrderResult optimize_fixed_order(const ScoreOperator& omega, const SdpOptions& options) {
  if (omega.matrix.rows() != static_cast<Eigen::Index>(kCombDim) ||
      omega.matrix.cols() != static_cast<Eigen::Index>(kCombDim)) {
    throw InputError("the objective must be 32x32");
  }
  if (!is_hermitian(omega.matrix, 1e-10)) throw InputError("the objective must be Hermitian");
  if (!(options.rho > 0.0) || options.objective_window == 0) throw InputError("invalid SDP options");
  const ComplexMatrix om = hermitian_part(omega.matrix);
  const double rho = options.rho;

  ComplexMatrix z = ComplexMatrix::Identity(kCombDim, kCombDim) / 8.0;
  ComplexMatrix u = ComplexMatrix::Zero(kCombDim, kCombDim);
  ComplexMatrix x = z;
  std::deque<double> history;
  double primal = 0.0;
  std::size_t it = 0;
  bool converged = false;
  for (; it < options.max_iterations; ++it) {
    x = project_onto_comb_subspace(z - u + om / rho);
    const HermitianEigen e = eig_hermitian(hermitian_part(x + u), 1e-8);
    const ComplexMatrix z_next =
        e.vectors * e.values.cwiseMax(0.0).cast<Complex>().asDiagonal() * e.vectors.adjoint();
    u += x - z_next;
    primal = (x - z_next).norm();
    z = z_next;
    history.push_back((om * x).trace().real());
    if (history.size() > options.objective_window + 1) history.pop_front();
    if (history.size() == options.objective_window + 1 && primal <= options.primal_tolerance &&
        std::abs(history.back() - history.front()) <= options.objective_tolerance) {
      converged = true;
      ++it;
      break;
    }
  }
  if (!converged) {
    std::ostringstream msg;
    msg << "fixed-order SDP did not converge in " << options.max_iterations << " iterations; primal residual "
        << primal << ", last objective " << (history.empty() ? 0.0 : history.back());
    throw NumericalError(msg.str());
  }

  // Feasible point: x already satisfies the equalities; mixing in I/8 lifts
  // any slightly negative eigenvalue to zero.
  const double lambda_min = eig_hermitian(hermitian_part(x)).values(0);
  const double eps = std::max(0.0, -lambda_min);
  const double t = eps / (eps + 1.0 / 8.0);
  const ComplexMatrix w0 = ComplexMatrix::Identity(kCombDim, kCombDim) / 8.0;
  ComplexMatrix feasible = hermitian_part((1.0 - t) * x + t * w0);

  // Dual certificate: for Y orthogonal to the comb directions, tr(Y W) is the
  // same for every comb, so tr(omega W) <= tr(Y W0) + tr(W) lambda_max(omega - Y).
  const ComplexMatrix g = om - rho * u;
  const ComplexMatrix y = hermitian_part(g - project_onto_comb_directions(g));
  const double lambda_max = eig_hermitian(hermitian_part(om - y)).values.maxCoeff();
  const double upper = (y * w0).trace().real() + 4.0 * lambda_max;

  FixedOrderResult result;
  result.p_succ = (om * feasible).trace().real();
  result.upper_bound = upper;
  result.iterations = it;
  result.primal_residual = primal;
  result.residuals = comb_residuals(feasible);
  result.w_star = CombOperator(std::move(feasible));
  if (!(upper - result.p_succ <= options.gap_tolerance)) {
    std::ostringstream msg;
    msg << "fixed-order SDP gap too large: feasible value " << result.p_succ << ", dual bound " << upper;
    throw NumericalError(msg.str());
  }
  return result;
}

double evaluate_comb(const CombOperator& w, std::span<const GatePair> pairs) {
  if (pairs.empty()) throw InputError("evaluate_comb needs at least one pair");
  double total = 0.0;
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const GatePair& p = pairs[k];
    if (p.label == PairLabel::neither) {
      throw InputError("evaluate_comb: pair " + std::to_string(k) + " is not labelled COMMUTE or ANTICOMMUTE");
    }
    total += probability_from_comb(w, p.u1, p.u2, p.label == PairLabel::commute ? 0 : 1);
  }
  return total / static_cast<double>(pairs.size());
}

std::string operator_to_json(const ComplexMatrix& m, std::span<const std::size_t> dims) {
  const std::size_t n = std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
  if (static_cast<Eigen::Index>(n) != m.rows() || m.rows() != m.cols()) {
    throw InputError("operator_to_json: dims do not match the matrix");
  }
  nlohmann::json j;
  j["dims"] = std::vector<std::size_t>(dims.begin(), dims.end());
  std::vector<double> re, im;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      re.push_back(m(r, c).real());
      im.push_back(m(r, c).imag());
    }
  }
  j["re"] = re;
  j["im"] = im;
  return j.dump();
}

ComplexMatrix operator_from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("operator JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("dims") || !j.contains("re") || !j.contains("im")) {
    throw InputError("operator JSON needs dims, re and im");
  }
  std::vector<std::size_t> dims;
  std::vector<double> re, im;
  try {
    dims = j.at("dims").get<std::vector<std::size_t>>();
    re = j.at("re").get<std::vector<double>>();
    im = j.at("im").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("operator JSON: ") + e.what());
  }
  const std::size_t n = std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
  if (dims.empty() || re.size() != n * n || im.size() != n * n) {
    throw InputError("operator JSON: entry count does not match dims");
  }
  ComplexMatrix m(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) m(r, c) = Complex(re[r * n + c], im[r * n + c]);
  }
  return m;
}

}  // namespace qswitch
