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

#include <cstddef>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "nanomech/linalg.hpp"

namespace nanomech::entanglement {

using linalg::ComplexMatrix;
using linalg::CompositeSpace;

enum class Reduction { none, resonator_two_level };

/// Two disjoint groups of subsystems. Subsystems in neither group are
/// traced out.
struct BipartitionSpec {
  std::vector<std::size_t> side_a;
  std::vector<std::size_t> side_b;
  Reduction reduction = Reduction::none;

  /// `resonator_site` is the index of the resonator in `space`.
  void validate(const CompositeSpace& space, std::size_t resonator_site) const;
};

/// Wootters concurrence of a 4x4 two-qubit density matrix. Eigenvalues down
/// to -neg_tol are accepted and clamped to zero.
double concurrence(const ComplexMatrix& rho, double neg_tol = 1e-7);

/// Squared concurrence.
double tangle_two_qubit(const ComplexMatrix& rho, double neg_tol = 1e-7);

struct TwoLevelReduction {
  ComplexMatrix rho;     // 4x4, basis ordered (qubit, resonator) {e,g}x{0,1}
  double leakage = 0.0;  // weight outside resonator levels {0, 1}
  bool flagged = false;  // leakage above the configured bound
};

/// Traces out every qubit but `qubit`, then restricts the resonator to
/// span{|0>, |1>} and renormalizes. The resonator must be the last factor.
TwoLevelReduction effective_two_level_reduce(const ComplexMatrix& rho,
                                             const CompositeSpace& space,
                                             std::size_t qubit,
                                             double leakage_bound = 0.05);

/// Tangle between one qubit and the resonator via the two-level reduction.
struct QubitResonatorTangle {
  double tangle = 0.0;
  double leakage = 0.0;
  bool flagged = false;
};

QubitResonatorTangle qubit_resonator_tangle(const ComplexMatrix& rho,
                                            const CompositeSpace& space,
                                            std::size_t qubit,
                                            double leakage_bound = 0.05);

struct ConvexRoofOptions {
  std::size_t starts = 8;
  std::size_t extra_members = 2;   // ensemble size = rank + extra_members
  double tolerance = 1e-6;         // required improvement ...
  std::size_t patience = 50;       // ... within this many iterations
  std::size_t max_iterations = 4000;
  std::uint64_t seed = 0x5eed;
  double rank_cutoff = 1e-12;
  double neg_tol = 1e-7;           // input eigenvalues accepted down to -neg_tol
};

/// Approximate upper bound on the convex roof; global optimality is not
/// guaranteed.
struct ConvexRoofResult {
  double value = 0.0;
  double eigen_ensemble_value = 0.0;  // value of the spectral decomposition
  std::vector<double> best_so_far;    // running minimum after each start
  std::size_t rank = 0;
  std::size_t iterations = 0;
  bool converged = false;
};

/// tau(rho) = 2 min_{p_i, psi_i} sum_i p_i (1 - Tr[(rho_a^{(i)})^2]) over pure
/// state decompositions of a bipartite rho on dims (dim_a, dim_b).
ConvexRoofResult i_tangle_convex_roof(const ComplexMatrix& rho,
                                      std::size_t dim_a, std::size_t dim_b,
                                      const ConvexRoofOptions& opt = {});

/// 2 (1 - Tr rho_a^2) for the pure state psi on dims (dim_a, dim_b).
double pure_state_tangle(const linalg::ComplexVector& psi, std::size_t dim_a,
                         std::size_t dim_b);

/// -sum lambda log2 lambda.
double von_neumann_entropy(const ComplexMatrix& rho);

using QubitPair = std::pair<std::size_t, std::size_t>;

/// Tangle of every unordered qubit pair (i < j) of the first `n_qubits`
/// subsystems, all other factors traced out.
std::map<QubitPair, double> pairwise_tangles(const ComplexMatrix& rho,
                                             const CompositeSpace& space,
                                             std::size_t n_qubits);

}  // namespace nanomech::entanglement
