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

#include "qswitch/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qswitch {

namespace {

using Index = Eigen::Index;

// Mixed-radix bookkeeping for a tensor product of subsystems.
struct Layout {
  std::vector<std::size_t> dims;
  std::vector<std::size_t> strides;
  std::size_t total = 1;

  explicit Layout(std::span<const std::size_t> d) : dims(d.begin(), d.end()), strides(d.size()) {
    for (std::size_t k = dims.size(); k-- > 0;) {
      strides[k] = total;
      total *= dims[k];
    }
  }

  std::size_t digit(std::size_t index, std::size_t k) const { return (index / strides[k]) % dims[k]; }
};

Layout checked_layout(const ComplexMatrix& m, std::span<const std::size_t> dims, const char* op) {
  if (m.rows() != m.cols()) {
    throw InputError(std::string(op) + ": matrix must be square");
  }
  for (auto d : dims) {
    if (d == 0) throw InputError(std::string(op) + ": zero subsystem dimension");
  }
  Layout layout(dims);
  if (layout.total != static_cast<std::size_t>(m.rows())) {
    std::ostringstream msg;
    msg << op << ": subsystem dimensions multiply to " << layout.total << " but matrix is "
        << m.rows() << "x" << m.cols();
    throw InputError(msg.str());
  }
  return layout;
}

std::vector<bool> subsystem_mask(std::span<const std::size_t> which, std::size_t n, const char* op) {
  std::vector<bool> mask(n, false);
  for (auto k : which) {
    if (k >= n) throw InputError(std::string(op) + ": subsystem index out of range");
    mask[k] = true;
  }
  return mask;
}

// Splits every full index into (kept index, traced index).
struct Split {
  std::vector<std::size_t> kept;
  std::vector<std::size_t> traced;
  std::size_t kept_dim = 1;
  std::size_t traced_dim = 1;
};

Split split_indices(const Layout& layout, const std::vector<bool>& traced_mask) {
  Split s;
  const std::size_t n = layout.dims.size();
  for (std::size_t k = 0; k < n; ++k) (traced_mask[k] ? s.traced_dim : s.kept_dim) *= layout.dims[k];
  s.kept.resize(layout.total);
  s.traced.resize(layout.total);
  for (std::size_t i = 0; i < layout.total; ++i) {
    std::size_t kept = 0;
    std::size_t traced = 0;
    for (std::size_t k = 0; k < n; ++k) {
      const std::size_t dig = layout.digit(i, k);
      if (traced_mask[k]) {
        traced = traced * layout.dims[k] + dig;
      } else {
        kept = kept * layout.dims[k] + dig;
      }
    }
    s.kept[i] = kept;
    s.traced[i] = traced;
  }
  return s;
}

}  // namespace

// ---------------------------------------------------------------------------
// Unitary2 / StateVector

double Unitary2::unitarity_residual(const Eigen::Matrix2cd& m) {
  if (!m.allFinite()) return std::numeric_limits<double>::infinity();
  return (m * m.adjoint() - Eigen::Matrix2cd::Identity()).norm();
}

Unitary2::Unitary2(const Eigen::Matrix2cd& m, double tol) : m_(m) {
  const double r = unitarity_residual(m);
  if (!(r <= tol)) {
    std::ostringstream msg;
    msg << "matrix is not unitary: ||U U^dagger - I||_F = " << r << " exceeds " << tol;
    throw InputError(msg.str());
  }
}

Unitary2 Unitary2::adjoint() const { return Unitary2(m_.adjoint(), Trusted{}); }

Unitary2 Unitary2::with_phase(double phase) const {
  return Unitary2(m_ * std::polar(1.0, phase), Trusted{});
}

Unitary2 operator*(const Unitary2& a, const Unitary2& b) {
  return Unitary2(a.m_ * b.m_, Unitary2::Trusted{});
}

StateVector::StateVector(ComplexVector amplitudes, double tol) : v_(std::move(amplitudes)) {
  if (v_.size() == 0) throw InputError("state vector must be non-empty");
  if (!v_.allFinite()) throw InputError("state vector has non-finite amplitudes");
  const double err = std::abs(v_.norm() - 1.0);
  if (!(err <= tol)) {
    std::ostringstream msg;
    msg << "state vector is not normalized: | ||psi|| - 1 | = " << err;
    throw InputError(msg.str());
  }
}

StateVector StateVector::normalized(ComplexVector amplitudes) {
  const double n = amplitudes.norm();
  if (!(n > 0.0) || !std::isfinite(n)) throw InputError("cannot normalize a zero or non-finite vector");
  return StateVector(amplitudes / n);
}

StateVector StateVector::basis(std::size_t dim, std::size_t index) {
  if (index >= dim) throw InputError("basis index out of range");
  ComplexVector v = ComplexVector::Zero(static_cast<Index>(dim));
  v(static_cast<Index>(index)) = 1.0;
  return StateVector(std::move(v));
}

namespace gates {

Unitary2 identity() { return Unitary2(Eigen::Matrix2cd::Identity()); }

Unitary2 pauli_x() {
  Eigen::Matrix2cd m;
  m << 0, 1, 1, 0;
  return Unitary2(m);
}

Unitary2 pauli_y() {
  const Complex i(0, 1);
  Eigen::Matrix2cd m;
  m << 0, -i, i, 0;
  return Unitary2(m);
}

Unitary2 pauli_z() {
  Eigen::Matrix2cd m;
  m << 1, 0, 0, -1;
  return Unitary2(m);
}

Unitary2 hadamard() {
  const double s = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd m;
  m << s, s, s, -s;
  return Unitary2(m);
}

}  // namespace gates

namespace states {

StateVector zero() { return StateVector::basis(2, 0); }
StateVector one() { return StateVector::basis(2, 1); }

StateVector plus() {
  const double s = 1.0 / std::sqrt(2.0);
  return StateVector(Eigen::Vector2cd(s, s));
}

StateVector minus() {
  const double s = 1.0 / std::sqrt(2.0);
  return StateVector(Eigen::Vector2cd(s, -s));
}

}  // namespace states

// ---------------------------------------------------------------------------
// Matrix operations

ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

ComplexMatrix anticommutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b + b * a; }

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix partial_trace(const ComplexMatrix& m, std::span<const std::size_t> dims,
                            std::span<const std::size_t> traced) {
  const Layout layout = checked_layout(m, dims, "partial_trace");
  const auto mask = subsystem_mask(traced, dims.size(), "partial_trace");
  const Split s = split_indices(layout, mask);
  ComplexMatrix out = ComplexMatrix::Zero(static_cast<Index>(s.kept_dim), static_cast<Index>(s.kept_dim));
  for (std::size_t i = 0; i < layout.total; ++i) {
    for (std::size_t j = 0; j < layout.total; ++j) {
      if (s.traced[i] == s.traced[j]) {
        out(static_cast<Index>(s.kept[i]), static_cast<Index>(s.kept[j])) +=
            m(static_cast<Index>(i), static_cast<Index>(j));
      }
    }
  }
  return out;
}

ComplexMatrix replace_with_identity(const ComplexMatrix& m, std::span<const std::size_t> dims,
                                    std::span<const std::size_t> replaced) {
  const Layout layout = checked_layout(m, dims, "replace_with_identity");
  const auto mask = subsystem_mask(replaced, dims.size(), "replace_with_identity");
  const Split s = split_indices(layout, mask);
  ComplexMatrix reduced = ComplexMatrix::Zero(static_cast<Index>(s.kept_dim), static_cast<Index>(s.kept_dim));
  for (std::size_t i = 0; i < layout.total; ++i) {
    for (std::size_t j = 0; j < layout.total; ++j) {
      if (s.traced[i] == s.traced[j]) {
        reduced(static_cast<Index>(s.kept[i]), static_cast<Index>(s.kept[j])) +=
            m(static_cast<Index>(i), static_cast<Index>(j));
      }
    }
  }
  reduced /= static_cast<double>(s.traced_dim);
  ComplexMatrix out = ComplexMatrix::Zero(m.rows(), m.cols());
  for (std::size_t i = 0; i < layout.total; ++i) {
    for (std::size_t j = 0; j < layout.total; ++j) {
      if (s.traced[i] == s.traced[j]) {
        out(static_cast<Index>(i), static_cast<Index>(j)) =
            reduced(static_cast<Index>(s.kept[i]), static_cast<Index>(s.kept[j]));
      }
    }
  }
  return out;
}

ComplexMatrix partial_transpose(const ComplexMatrix& m, std::span<const std::size_t> dims,
                                std::span<const std::size_t> transposed) {
  const Layout layout = checked_layout(m, dims, "partial_transpose");
  const auto mask = subsystem_mask(transposed, dims.size(), "partial_transpose");
  ComplexMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < layout.total; ++i) {
    for (std::size_t j = 0; j < layout.total; ++j) {
      std::size_t ri = 0;
      std::size_t cj = 0;
      for (std::size_t k = 0; k < layout.dims.size(); ++k) {
        const std::size_t a = layout.digit(i, k);
        const std::size_t b = layout.digit(j, k);
        ri += (mask[k] ? b : a) * layout.strides[k];
        cj += (mask[k] ? a : b) * layout.strides[k];
      }
      out(static_cast<Index>(ri), static_cast<Index>(cj)) = m(static_cast<Index>(i), static_cast<Index>(j));
    }
  }
  return out;
}

ComplexMatrix permute_subsystems(const ComplexMatrix& m, std::span<const std::size_t> dims,
                                 std::span<const std::size_t> perm) {
  const Layout in = checked_layout(m, dims, "permute_subsystems");
  const std::size_t n = dims.size();
  if (perm.size() != n) throw InputError("permute_subsystems: permutation has wrong length");
  std::vector<std::size_t> sorted(perm.begin(), perm.end());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < n; ++k) {
    if (sorted[k] != k) throw InputError("permute_subsystems: not a permutation");
  }
  std::vector<std::size_t> out_dims(n);
  for (std::size_t k = 0; k < n; ++k) out_dims[k] = dims[perm[k]];
  const Layout out_layout(out_dims);
  // source index for every output index
  std::vector<Index> source(in.total);
  for (std::size_t o = 0; o < in.total; ++o) {
    std::size_t src = 0;
    for (std::size_t k = 0; k < n; ++k) src += out_layout.digit(o, k) * in.strides[perm[k]];
    source[o] = static_cast<Index>(src);
  }
  ComplexMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < in.total; ++i) {
    for (std::size_t j = 0; j < in.total; ++j) {
      out(static_cast<Index>(i), static_cast<Index>(j)) = m(source[i], source[j]);
    }
  }
  return out;
}

double frobenius_distance_up_to_phase(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw InputError("frobenius_distance_up_to_phase: dimension mismatch");
  }
  // The optimal phase aligns b with a; subtracting explicitly keeps full
  // precision where |a|^2 + |b|^2 - 2|<a,b>| would cancel to ~1e-8.
  const Complex overlap = (b.adjoint() * a).trace();
  const Complex phase = std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex(1.0, 0.0);
  return (a - phase * b).norm();
}

ComplexMatrix choi(const Unitary2& u) {
  // |U>> = sum_i |i> (x) U|i>
  Eigen::Vector4cd v;
  for (int i = 0; i < 2; ++i) {
    for (int k = 0; k < 2; ++k) v(2 * i + k) = u(k, i);
  }
  return v * v.adjoint();
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).norm() <= tol * std::max(1.0, m.norm());
}

void require_finite(const ComplexMatrix& m, const char* what) {
  if (!m.allFinite()) throw InputError(std::string(what) + ": non-finite entries");
}

HermitianEigen eig_hermitian(const ComplexMatrix& m, double tol) {
  require_finite(m, "eig_hermitian");
  if (!is_hermitian(m, tol)) throw InputError("eig_hermitian: matrix is not Hermitian");
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success) throw NumericalError("eig_hermitian: eigensolver did not converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

}  // namespace qswitch
