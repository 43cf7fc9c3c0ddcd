// Copyright 2026 The nanomech Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "nanomech/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace nanomech::linalg {

CompositeSpace::CompositeSpace(std::vector<std::size_t> dims)
    : dims_(std::move(dims)) {
  if (dims_.empty()) {
    throw DimensionError("CompositeSpace: at least one subsystem required");
  }
  for (std::size_t i = 0; i < dims_.size(); ++i) {
    if (dims_[i] < 2) {
      std::ostringstream msg;
      msg << "CompositeSpace: subsystem " << i << " has dimension " << dims_[i]
          << " (must be >= 2)";
      throw DimensionError(msg.str());
    }
    total_ *= dims_[i];
  }
}

CompositeSpace CompositeSpace::qubits_and_resonator(std::size_t n_qubits,
                                                    std::size_t n_max) {
  std::vector<std::size_t> dims(n_qubits, 2);
  dims.push_back(n_max + 1);
  return CompositeSpace(std::move(dims));
}

std::size_t CompositeSpace::total_of(std::span<const std::size_t> sites) const {
  std::size_t d = 1;
  for (auto s : sites) d *= dim(s);
  return d;
}

ComplexMatrix identity(std::size_t dim) {
  return ComplexMatrix::Identity(static_cast<Eigen::Index>(dim),
                                 static_cast<Eigen::Index>(dim));
}

ComplexMatrix sigma_x() {
  ComplexMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

ComplexMatrix sigma_y() {
  const Complex i{0.0, 1.0};
  ComplexMatrix m(2, 2);
  m << 0.0, -i, i, 0.0;
  return m;
}

ComplexMatrix sigma_z() {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

ComplexMatrix sigma_plus() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 1) = 1.0;
  return m;
}

ComplexMatrix sigma_minus() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(1, 0) = 1.0;
  return m;
}

ComplexMatrix destroy(std::size_t n_max) {
  const auto d = static_cast<Eigen::Index>(n_max + 1);
  ComplexMatrix a = ComplexMatrix::Zero(d, d);
  for (Eigen::Index n = 1; n < d; ++n) {
    a(n - 1, n) = std::sqrt(static_cast<double>(n));
  }
  return a;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix embed(const ComplexMatrix& op, std::size_t site,
                    const CompositeSpace& space) {
  if (site >= space.size()) {
    std::ostringstream msg;
    msg << "embed: site " << site << " out of range for " << space.size()
        << " subsystems";
    throw DimensionError(msg.str());
  }
  const auto expected = static_cast<Eigen::Index>(space.dim(site));
  if (op.rows() != expected || op.cols() != expected) {
    std::ostringstream msg;
    msg << "embed: operator is " << op.rows() << "x" << op.cols()
        << " but subsystem " << site << " has dimension " << expected;
    throw DimensionError(msg.str());
  }
  std::size_t left = 1;
  std::size_t right = 1;
  for (std::size_t i = 0; i < site; ++i) left *= space.dim(i);
  for (std::size_t i = site + 1; i < space.size(); ++i) right *= space.dim(i);
  return kron(kron(identity(left), op), identity(right));
}

ComplexMatrix partial_trace(const ComplexMatrix& rho,
                            const CompositeSpace& space,
                            std::vector<std::size_t> keep) {
  if (keep.empty()) {
    throw DimensionError("partial_trace: keep set is empty");
  }
  std::sort(keep.begin(), keep.end());
  if (std::adjacent_find(keep.begin(), keep.end()) != keep.end()) {
    throw DimensionError("partial_trace: duplicate subsystem in keep set");
  }
  if (keep.back() >= space.size()) {
    throw DimensionError("partial_trace: subsystem index out of range");
  }
  const auto total = static_cast<Eigen::Index>(space.total());
  if (rho.rows() != total || rho.cols() != total) {
    std::ostringstream msg;
    msg << "partial_trace: matrix is " << rho.rows() << "x" << rho.cols()
        << " but space has dimension " << total;
    throw DimensionError(msg.str());
  }

  std::vector<bool> kept(space.size(), false);
  for (auto s : keep) kept[s] = true;

  // Split every flat index into (kept index, traced index).
  std::vector<Eigen::Index> kept_index(space.total());
  std::vector<Eigen::Index> traced_index(space.total());
  for (std::size_t flat = 0; flat < space.total(); ++flat) {
    std::size_t rem = flat;
    std::size_t k = 0, k_stride = 1, t = 0, t_stride = 1;
    for (std::size_t s = space.size(); s-- > 0;) {
      const std::size_t digit = rem % space.dim(s);
      rem /= space.dim(s);
      if (kept[s]) {
        k += digit * k_stride;
        k_stride *= space.dim(s);
      } else {
        t += digit * t_stride;
        t_stride *= space.dim(s);
      }
    }
    kept_index[flat] = static_cast<Eigen::Index>(k);
    traced_index[flat] = static_cast<Eigen::Index>(t);
  }

  const auto reduced = static_cast<Eigen::Index>(space.total_of(keep));
  ComplexMatrix out = ComplexMatrix::Zero(reduced, reduced);
  for (Eigen::Index col = 0; col < total; ++col) {
    for (Eigen::Index row = 0; row < total; ++row) {
      if (traced_index[row] == traced_index[col]) {
        out(kept_index[row], kept_index[col]) += rho(row, col);
      }
    }
  }
  return out;
}

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermiticity_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    throw DimensionError("hermiticity_defect: matrix is not square");
  }
  return max_abs(m - m.adjoint());
}

bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return max_abs(a - b) <= tol;
}

HermitianEigen hermitian_eigs(const ComplexMatrix& m, double herm_tol) {
  const double defect = hermiticity_defect(m);
  if (defect > herm_tol) {
    std::ostringstream msg;
    msg << "hermitian_eigs: Hermiticity defect " << defect << " exceeds "
        << herm_tol;
    throw NotHermitianError(msg.str());
  }
  const ComplexMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("hermitian_eigs: eigensolver did not converge");
  }
  // Eigen returns ascending order.
  HermitianEigen out;
  out.values = solver.eigenvalues().reverse();
  out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

double min_eigenvalue(const ComplexMatrix& m) {
  const ComplexMatrix sym = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(sym,
                                                      Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

PsdSqrt psd_sqrt(const ComplexMatrix& m, double clamp_tol) {
  auto eig = hermitian_eigs(m, std::max(clamp_tol, 1e-9));
  PsdSqrt out;
  RealVector roots(eig.values.size());
  // Eigenvalues at the rounding level of the spectrum are exact zeros; their
  // square roots would otherwise inject ~1e-8 noise.
  const double scale = eig.values.size() ? eig.values.cwiseAbs().maxCoeff() : 0.0;
  const double noise = 64.0 * std::numeric_limits<double>::epsilon() * scale;
  for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
    double lambda = eig.values(k);
    if (std::abs(lambda) <= noise) lambda = 0.0;
    if (lambda < 0.0) {
      if (lambda < -clamp_tol) {
        std::ostringstream msg;
        msg << "psd_sqrt: eigenvalue " << lambda << " below -" << clamp_tol;
        throw NotPositiveError(msg.str());
      }
      out.clamped = std::max(out.clamped, -lambda);
      lambda = 0.0;
    }
    roots(k) = std::sqrt(lambda);
  }
  out.root = eig.vectors * roots.asDiagonal() * eig.vectors.adjoint();
  return out;
}

std::vector<Complex> general_eigenvalues(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) {
    throw DimensionError("general_eigenvalues: matrix is not square");
  }
  Eigen::ComplexEigenSolver<ComplexMatrix> solver(m, false);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("general_eigenvalues: solver did not converge");
  }
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

ComplexVector vec(const ComplexMatrix& m) {
  return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

ComplexMatrix unvec(const ComplexVector& v, std::size_t rows) {
  const auto r = static_cast<Eigen::Index>(rows);
  if (r == 0 || v.size() % r != 0) {
    throw DimensionError("unvec: length is not a multiple of the row count");
  }
  return Eigen::Map<const ComplexMatrix>(v.data(), r, v.size() / r);
}

}  // namespace nanomech::linalg
