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
#include <string>
#include <vector>

#include "nanomech/linalg.hpp"

namespace nanomech::model {

using linalg::ComplexMatrix;
using linalg::CompositeSpace;

/// Physical constants of the qubit-resonator model. Every energy is divided
/// by hbar, so all fields are angular frequencies in one common unit; the
/// scenario layer picks that unit so that omega == 1 and time reads as
/// omega*t.
struct ModelParams {
  std::size_t n_qubits = 1;
  double nu = 10.0;           // resonator frequency
  double omega = 1.0;         // qubit-resonator coupling
  double v_gate = 1.0;        // gate-voltage energy V
  double e_j = 10.0;          // Josephson energy E_J
  double chi = 0.0;           // dipole-dipole coupling, ordered-pair sum
  double kappa = 0.0;         // resonator decay
  double gamma = 0.0;         // single-qubit decay (gamma_jj)
  double gamma_cross = 0.0;   // correlated decay (gamma_ij, i != j)
  double n_bar = 0.0;         // thermal phonon number of the qubit bath
  std::size_t n_max = 10;     // Fock cutoff
  bool rwa = false;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  /// Site index of the resonator factor.
  std::size_t resonator_site() const { return n_qubits; }
  CompositeSpace space() const {
    return CompositeSpace::qubits_and_resonator(n_qubits, n_max);
  }

  bool operator==(const ModelParams&) const = default;
};

/// Lumped device parameters entering the coupling formula, in SI units
/// (farads, rad/s). The electron charge and hbar are fixed SI constants.
struct DeviceParams {
  double c_j = 0.0;  // junction capacitance
  double c_g = 0.0;  // gate capacitance
  double c_f = 0.0;  // thickness-dependent capacitance parameter
  double nu = 0.0;   // resonator angular frequency

  static constexpr double e_charge = 1.602176634e-19;  // C
  static constexpr double hbar = 1.054571817e-34;      // J s
};

/// omega = e C_J / (2 (C_g + C_J)) * sqrt(nu / (2 hbar C_F)), in rad/s.
double effective_coupling(const DeviceParams& d);

enum class ResonatorOrdering {
  normal,      // nu a^dag a
  antinormal,  // nu a a^dag, as written in the model; differs by nu * I
};

/// Full Hamiltonian in the bare basis {|e>, |g>} per qubit:
///   nu a^dag a + sum_{i != j} chi sx_i sx_j
///     + sum_j [V sz_j - E_J/2 sx_j + omega (a^dag + a) sz_j].
/// The chi sum runs over ordered pairs, so each unordered pair carries
/// 2 chi.
ComplexMatrix build_hamiltonian(
    const ModelParams& p,
    ResonatorOrdering ordering = ResonatorOrdering::normal);

/// Eigenbasis of the single-qubit part V sz - E_J/2 sx.
struct DressedQubit {
  double splitting = 0.0;      // Omega = sqrt((2V)^2 + E_J^2)
  double longitudinal = 0.0;   // sz = longitudinal * sz' + transverse * sx'
  double transverse = 0.0;
  ComplexMatrix rotation;      // columns: dressed |e'>, |g'> in bare basis
};

DressedQubit dressed_qubit(const ModelParams& p);

/// Transverse dressed-basis coupling omega * transverse.
double rwa_coupling(const ModelParams& p);

/// Excitation-conserving Hamiltonian, expressed in the dressed qubit basis
/// (index 0 of every qubit factor is the dressed excited state):
///   nu a^dag a + sum_j Omega/2 sz'_j + g_eff sum_j (a^dag S-_j + a S+_j)
///     + chi sum_{i != j} [l^2 sz'_i sz'_j + t^2 (S+_i S-_j + S-_i S+_j)]
/// where sx = l sz' + t (S+ + S-) in the dressed basis. Longitudinal
/// resonator coupling and all counter-rotating terms are dropped.
ComplexMatrix build_hamiltonian_rwa(const ModelParams& p);

/// Total excitation number a^dag a + sum_j |e'><e'|_j in the dressed basis.
ComplexMatrix excitation_number(const ModelParams& p);

/// One Lindblad channel contributing rate * (L rho L^dag - {L^dag L, rho}/2).
struct CollapseChannel {
  std::string label;
  double rate = 0.0;
  ComplexMatrix op;
};

/// Non-unitary part of the master equation.
///
/// The resonator term -kappa (a^dag a rho - 2 a rho a^dag + rho a^dag a) is a
/// single channel of rate 2 kappa. The qubit terms are written with the
/// matrix gamma_ij (diagonal gamma, off-diagonal gamma_cross); they are
/// realized as collective channels obtained by diagonalizing gamma_ij, which
/// reproduces every cross term sigma-_i rho sigma+_j with weight gamma_ij.
struct Dissipator {
  double kappa = 0.0;
  double n_bar = 0.0;
  Eigen::MatrixXd qubit_rates;  // gamma_ij
  std::vector<CollapseChannel> channels;
};

/// Channels for the model. In RWA mode the qubit operators are rotated into
/// the dressed basis used by build_hamiltonian_rwa.
Dissipator build_collapse_set(const ModelParams& p);

/// Hamiltonian selected by p.rwa.
ComplexMatrix hamiltonian_for(const ModelParams& p);

/// exp(i H t) rho exp(-i H t), computed from the eigendecomposition of H.
ComplexMatrix interaction_picture_transform(const ComplexMatrix& rho,
                                            const ComplexMatrix& h, double t);

}  // namespace nanomech::model
