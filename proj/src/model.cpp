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

#include "nanomech/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace nanomech::model {

using linalg::Complex;
using linalg::embed;
using linalg::identity;

namespace {

void require_nonnegative(double value, const char* name) {
  if (!(value >= 0.0) || !std::isfinite(value)) {
    std::ostringstream msg;
    msg << "ModelParams: " << name << " must be finite and >= 0 (got "
        << value << ")";
    throw std::invalid_argument(msg.str());
  }
}

void require_finite(double value, const char* name) {
  if (!std::isfinite(value)) {
    std::ostringstream msg;
    msg << "ModelParams: " << name << " must be finite";
    throw std::invalid_argument(msg.str());
  }
}

struct QubitOps {
  std::vector<ComplexMatrix> sx, sz, sp, sm;
  ComplexMatrix a;
};

QubitOps site_operators(const ModelParams& p, const ComplexMatrix& qx,
                        const ComplexMatrix& qz, const ComplexMatrix& qp,
                        const ComplexMatrix& qm) {
  const auto space = p.space();
  QubitOps ops;
  for (std::size_t j = 0; j < p.n_qubits; ++j) {
    ops.sx.push_back(embed(qx, j, space));
    ops.sz.push_back(embed(qz, j, space));
    ops.sp.push_back(embed(qp, j, space));
    ops.sm.push_back(embed(qm, j, space));
  }
  ops.a = embed(linalg::destroy(p.n_max), p.resonator_site(), space);
  return ops;
}

}  // namespace

void ModelParams::validate() const {
  if (n_qubits < 1) {
    throw std::invalid_argument("ModelParams: n_qubits must be >= 1");
  }
  if (n_max < 1) {
    throw std::invalid_argument("ModelParams: n_max must be >= 1");
  }
  require_finite(nu, "nu");
  require_finite(omega, "omega");
  require_finite(v_gate, "v_gate");
  require_finite(e_j, "e_j");
  require_finite(chi, "chi");
  require_nonnegative(kappa, "kappa");
  require_nonnegative(gamma, "gamma");
  require_nonnegative(gamma_cross, "gamma_cross");
  require_nonnegative(n_bar, "n_bar");
  // gamma_ij must be positive semidefinite for a physical dissipator.
  if (n_qubits >= 2 && gamma_cross > gamma) {
    std::ostringstream msg;
    msg << "ModelParams: gamma_cross (" << gamma_cross
        << ") exceeds gamma (" << gamma
        << "); the decay-rate matrix would not be positive semidefinite";
    throw std::invalid_argument(msg.str());
  }
}

double effective_coupling(const DeviceParams& d) {
  if (!(d.c_j > 0.0) || !(d.c_g > 0.0) || !(d.c_f > 0.0)) {
    throw std::invalid_argument(
        "effective_coupling: capacitances must be positive");
  }
  if (!(d.nu >= 0.0)) {
    throw std::invalid_argument("effective_coupling: nu must be >= 0");
  }
  const double prefactor =
      DeviceParams::e_charge * d.c_j / (2.0 * (d.c_g + d.c_j));
  return prefactor * std::sqrt(d.nu / (2.0 * DeviceParams::hbar * d.c_f));
}

ComplexMatrix build_hamiltonian(const ModelParams& p,
                                ResonatorOrdering ordering) {
  p.validate();
  const auto ops = site_operators(p, linalg::sigma_x(), linalg::sigma_z(),
                                  linalg::sigma_plus(), linalg::sigma_minus());
  const ComplexMatrix& a = ops.a;
  const ComplexMatrix ad = a.adjoint();

  // a a^dag is taken as a^dag a + 1: the truncated product a * ad would
  // misplace the top Fock level.
  ComplexMatrix h = p.nu * ad * a;
  if (ordering == ResonatorOrdering::antinormal) {
    h += p.nu * identity(p.space().total());
  }

  for (std::size_t i = 0; i < p.n_qubits; ++i) {
    for (std::size_t j = 0; j < p.n_qubits; ++j) {
      if (i != j) h += p.chi * ops.sx[i] * ops.sx[j];
    }
  }
  const ComplexMatrix displacement = ad + a;
  for (std::size_t j = 0; j < p.n_qubits; ++j) {
    h += p.v_gate * ops.sz[j];
    h -= 0.5 * p.e_j * ops.sx[j];
    h += p.omega * displacement * ops.sz[j];
  }
  return h;
}

DressedQubit dressed_qubit(const ModelParams& p) {
  DressedQubit q;
  q.splitting = std::hypot(2.0 * p.v_gate, p.e_j);
  const double theta = std::atan2(p.e_j, 2.0 * p.v_gate);
  const double c = std::cos(0.5 * theta);
  const double s = std::sin(0.5 * theta);
  q.rotation.resize(2, 2);
  q.rotation << c, s, -s, c;
  q.longitudinal = std::cos(theta);
  q.transverse = std::sin(theta);
  return q;
}

double rwa_coupling(const ModelParams& p) {
  return p.omega * dressed_qubit(p).transverse;
}

ComplexMatrix build_hamiltonian_rwa(const ModelParams& p) {
  p.validate();
  const auto dq = dressed_qubit(p);
  const auto ops = site_operators(p, linalg::sigma_x(), linalg::sigma_z(),
                                  linalg::sigma_plus(), linalg::sigma_minus());
  const ComplexMatrix& a = ops.a;
  const ComplexMatrix ad = a.adjoint();
  const double g_eff = p.omega * dq.transverse;

  // sigma_x in the dressed basis: -sin(theta) sz' + cos(theta) sx'.
  const double sx_long = -dq.transverse;
  const double sx_trans = dq.longitudinal;

  ComplexMatrix h = p.nu * ad * a;
  for (std::size_t j = 0; j < p.n_qubits; ++j) {
    h += 0.5 * dq.splitting * ops.sz[j];
    h += g_eff * (ad * ops.sm[j] + a * ops.sp[j]);
  }
  for (std::size_t i = 0; i < p.n_qubits; ++i) {
    for (std::size_t j = 0; j < p.n_qubits; ++j) {
      if (i == j) continue;
      h += p.chi * sx_long * sx_long * ops.sz[i] * ops.sz[j];
      h += p.chi * sx_trans * sx_trans *
           (ops.sp[i] * ops.sm[j] + ops.sm[i] * ops.sp[j]);
    }
  }
  return h;
}

ComplexMatrix excitation_number(const ModelParams& p) {
  const auto space = p.space();
  const ComplexMatrix a = embed(linalg::destroy(p.n_max), p.resonator_site(),
                                space);
  ComplexMatrix n = a.adjoint() * a;
  ComplexMatrix excited = ComplexMatrix::Zero(2, 2);
  excited(0, 0) = 1.0;
  for (std::size_t j = 0; j < p.n_qubits; ++j) n += embed(excited, j, space);
  return n;
}

Dissipator build_collapse_set(const ModelParams& p) {
  p.validate();
  const auto space = p.space();
  Dissipator d;
  d.kappa = p.kappa;
  d.n_bar = p.n_bar;

  const auto n = static_cast<Eigen::Index>(p.n_qubits);
  d.qubit_rates = Eigen::MatrixXd::Constant(n, n, p.gamma_cross);
  d.qubit_rates.diagonal().setConstant(p.gamma);

  if (p.kappa > 0.0) {
    d.channels.push_back({"resonator", 2.0 * p.kappa,
                          embed(linalg::destroy(p.n_max), p.resonator_site(),
                                space)});
  }

  ComplexMatrix lower = linalg::sigma_minus();
  if (p.rwa) {
    const ComplexMatrix r = dressed_qubit(p).rotation;
    lower = r.adjoint() * lower * r;
  }
  std::vector<ComplexMatrix> sm;
  for (std::size_t j = 0; j < p.n_qubits; ++j) sm.push_back(embed(lower, j, space));

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(d.qubit_rates);
  for (Eigen::Index m = 0; m < n; ++m) {
    const double lambda = eig.eigenvalues()(m);
    if (std::abs(lambda) <= 1e-15) continue;
    ComplexMatrix collective = ComplexMatrix::Zero(space.total(), space.total());
    for (Eigen::Index j = 0; j < n; ++j) {
      collective += eig.eigenvectors()(j, m) * sm[static_cast<std::size_t>(j)];
    }
    const std::string suffix = std::to_string(m);
    d.channels.push_back(
        {"qubit_down_" + suffix, lambda * (1.0 + p.n_bar), collective});
    if (p.n_bar > 0.0) {
      d.channels.push_back(
          {"qubit_up_" + suffix, lambda * p.n_bar, collective.adjoint()});
    }
  }
  return d;
}

ComplexMatrix hamiltonian_for(const ModelParams& p) {
  return p.rwa ? build_hamiltonian_rwa(p) : build_hamiltonian(p);
}

ComplexMatrix interaction_picture_transform(const ComplexMatrix& rho,
                                            const ComplexMatrix& h, double t) {
  if (rho.rows() != h.rows() || rho.cols() != h.cols()) {
    throw linalg::DimensionError(
        "interaction_picture_transform: rho and H dimensions differ");
  }
  const auto eig = linalg::hermitian_eigs(h, 1e-12);
  linalg::ComplexVector phases(eig.values.size());
  for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
    phases(k) = std::exp(Complex{0.0, eig.values(k) * t});
  }
  const ComplexMatrix u = eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
  return u * rho * u.adjoint();
}

}  // namespace nanomech::model
