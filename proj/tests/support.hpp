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

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "nanomech/linalg.hpp"

namespace nanomech::testing {

using linalg::Complex;
using linalg::ComplexMatrix;
using linalg::ComplexVector;

inline ComplexMatrix random_matrix(std::mt19937_64& rng, std::size_t rows,
                                   std::size_t cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  ComplexMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = Complex{n(rng), n(rng)};
  }
  return m;
}

inline ComplexMatrix random_hermitian(std::mt19937_64& rng, std::size_t dim) {
  const ComplexMatrix a = random_matrix(rng, dim, dim);
  return 0.5 * (a + a.adjoint());
}

// Unit-trace PSD matrix of the given rank (full rank when rank == 0).
inline ComplexMatrix random_density(std::mt19937_64& rng, std::size_t dim,
                                    std::size_t rank = 0) {
  const ComplexMatrix g = random_matrix(rng, dim, rank ? rank : dim);
  ComplexMatrix rho = g * g.adjoint();
  return rho / rho.trace().real();
}

inline ComplexVector random_pure(std::mt19937_64& rng, std::size_t dim) {
  ComplexVector v = random_matrix(rng, dim, 1).col(0);
  return v / v.norm();
}

// Concurrence from the square roots of the eigenvalues of rho (sy sy) rho* (sy sy),
// taken through the general non-Hermitian eigensolver.
inline double wootters_reference(const ComplexMatrix& rho) {
  const ComplexMatrix yy = linalg::kron(linalg::sigma_y(), linalg::sigma_y());
  const ComplexMatrix r = rho * yy * rho.conjugate() * yy;
  std::vector<double> l;
  for (const auto& ev : linalg::general_eigenvalues(r)) {
    l.push_back(std::sqrt(std::max(0.0, ev.real())));
  }
  std::sort(l.rbegin(), l.rend());
  return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

inline ComplexMatrix werner(double p) {
  ComplexVector psi = ComplexVector::Zero(4);
  psi(1) = 1.0 / std::sqrt(2.0);
  psi(2) = -1.0 / std::sqrt(2.0);
  return p * psi * psi.adjoint() + (1.0 - p) * linalg::identity(4) / 4.0;
}

inline ComplexMatrix projector(const ComplexVector& psi) { return psi * psi.adjoint(); }

inline ComplexMatrix basis_projector(std::size_t dim, std::size_t k) {
  ComplexMatrix m = ComplexMatrix::Zero(static_cast<Eigen::Index>(dim),
                                        static_cast<Eigen::Index>(dim));
  m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = 1.0;
  return m;
}

}  // namespace nanomech::testing
