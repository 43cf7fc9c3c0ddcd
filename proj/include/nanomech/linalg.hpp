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

#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace nanomech::linalg {

using Complex = std::complex<double>;

// Dense complex matrix. Entries are stored column-major (Eigen default);
// every routine that flattens a matrix (vec, CSV dumps) states its order.
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

class DimensionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class NotHermitianError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

class NotPositiveError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Ordered tensor-product structure of the simulated Hilbert space.
///
/// The ordering is qubit 1, ..., qubit N, resonator. Subsystem 0 is the most
/// significant factor of a flat basis index, matching kron(a, b) where `a`
/// acts on the first factor.
class CompositeSpace {
public:
  CompositeSpace() = default;
  explicit CompositeSpace(std::vector<std::size_t> dims);
  CompositeSpace(std::initializer_list<std::size_t> dims)
      : CompositeSpace(std::vector<std::size_t>(dims)) {}

  /// N qubits followed by a resonator truncated to |0>..|n_max>.
  static CompositeSpace qubits_and_resonator(std::size_t n_qubits,
                                             std::size_t n_max);

  std::size_t size() const { return dims_.size(); }
  std::size_t dim(std::size_t site) const { return dims_.at(site); }
  std::size_t total() const { return total_; }
  std::span<const std::size_t> dims() const { return dims_; }

  /// Dimension of the product of the listed subsystems.
  std::size_t total_of(std::span<const std::size_t> sites) const;

  bool operator==(const CompositeSpace&) const = default;

private:
  std::vector<std::size_t> dims_;
  std::size_t total_ = 1;
};

// Pauli and ladder operators in the basis {|e>, |g>}: sigma_z|e> = |e>.
ComplexMatrix identity(std::size_t dim);
ComplexMatrix sigma_x();
ComplexMatrix sigma_y();
ComplexMatrix sigma_z();
ComplexMatrix sigma_plus();   // |e><g|
ComplexMatrix sigma_minus();  // |g><e|
/// Truncated annihilation operator on |0>..|n_max>.
ComplexMatrix destroy(std::size_t n_max);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Identity on every factor except `site`, where `op` acts.
ComplexMatrix embed(const ComplexMatrix& op, std::size_t site,
                    const CompositeSpace& space);

/// Reduced matrix on the `keep` factors, kept in their original relative
/// order. `keep` may be given in any order; duplicates are rejected.
ComplexMatrix partial_trace(const ComplexMatrix& rho,
                            const CompositeSpace& space,
                            std::vector<std::size_t> keep);

double max_abs(const ComplexMatrix& m);
double hermiticity_defect(const ComplexMatrix& m);
bool approx_equal(const ComplexMatrix& a, const ComplexMatrix& b, double tol);

struct HermitianEigen {
  RealVector values;      // descending
  ComplexMatrix vectors;  // column k pairs with values[k]
};

/// Spectrum of a Hermitian matrix, sorted descending. Inputs whose
/// Hermiticity defect exceeds `herm_tol` are rejected.
HermitianEigen hermitian_eigs(const ComplexMatrix& m, double herm_tol = 1e-9);

/// Smallest eigenvalue of the Hermitian part of `m`.
double min_eigenvalue(const ComplexMatrix& m);

struct PsdSqrt {
  ComplexMatrix root;
  /// Largest magnitude of a negative eigenvalue that was clamped to zero.
  double clamped = 0.0;
};

/// Principal square root of a positive semidefinite matrix. Eigenvalues in
/// [-clamp_tol, 0) are clamped to zero; anything lower is rejected.
PsdSqrt psd_sqrt(const ComplexMatrix& m, double clamp_tol = 1e-9);

/// Full complex spectrum of a square matrix, unsorted.
std::vector<Complex> general_eigenvalues(const ComplexMatrix& m);

/// Column-stacking vectorization: vec(A X B) = (B^T kron A) vec(X).
ComplexVector vec(const ComplexMatrix& m);
ComplexMatrix unvec(const ComplexVector& v, std::size_t rows);

}  // namespace nanomech::linalg
