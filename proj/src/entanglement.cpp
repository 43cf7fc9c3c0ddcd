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

#include "nanomech/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include <Eigen/SVD>

namespace nanomech::entanglement {

using linalg::Complex;
using linalg::ComplexVector;

namespace {

// Tolerances for accepting a matrix produced by integration as a state.
constexpr double kHermTol = 1e-8;
constexpr double kTraceTol = 1e-6;
constexpr double kNegTol = 1e-7;
// Reduced states of evolved matrices: the evolution monitor admits global
// negativity down to -1e-5, which partial traces and renormalization amplify.
constexpr double kEvolvedNegTol = 1e-4;

void require_density(const ComplexMatrix& rho, Eigen::Index dim,
                     const char* who, double neg_tol = kNegTol) {
  if (rho.rows() != dim || rho.cols() != dim) {
    std::ostringstream msg;
    msg << who << ": expected a " << dim << "x" << dim << " matrix, got "
        << rho.rows() << "x" << rho.cols();
    throw linalg::DimensionError(msg.str());
  }
  const double herm = linalg::hermiticity_defect(rho);
  if (herm > kHermTol) {
    std::ostringstream msg;
    msg << who << ": not Hermitian (defect " << herm << ")";
    throw std::invalid_argument(msg.str());
  }
  const double tr = std::abs(rho.trace() - Complex{1.0, 0.0});
  if (tr > kTraceTol) {
    std::ostringstream msg;
    msg << who << ": trace deviates from 1 by " << tr;
    throw std::invalid_argument(msg.str());
  }
  const double min_eig = linalg::min_eigenvalue(rho);
  if (min_eig < -neg_tol) {
    std::ostringstream msg;
    msg << who << ": negative eigenvalue " << min_eig;
    throw std::invalid_argument(msg.str());
  }
}

// Reshape a pure state on (dim_a, dim_b) into its dim_a x dim_b coefficient
// matrix; the first factor is the most significant index.
ComplexMatrix coefficient_matrix(const Complex* psi, std::size_t dim_a,
                                 std::size_t dim_b) {
  ComplexMatrix m(static_cast<Eigen::Index>(dim_a),
                  static_cast<Eigen::Index>(dim_b));
  for (std::size_t a = 0; a < dim_a; ++a) {
    for (std::size_t b = 0; b < dim_b; ++b) {
      m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          psi[a * dim_b + b];
    }
  }
  return m;
}

ComplexMatrix polar_orthonormalize(const ComplexMatrix& a) {
  Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeThinU |
                                             Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

// Ensemble objective over isometries W (m x r): with unnormalized members
// psi_i = sum_k W_ik phi_k, returns 2 (1 - sum_i P_i / p_i) where
// p_i = |psi_i|^2 and P_i = Tr[(Tr_b psi_i psi_i^dag)^2].
class EnsembleObjective {
public:
  EnsembleObjective(ComplexMatrix phi, std::size_t dim_a, std::size_t dim_b)
      : phi_(std::move(phi)), dim_a_(dim_a), dim_b_(dim_b) {}

  double value(const ComplexMatrix& w) const {
    const ComplexMatrix members = phi_ * w.transpose();
    double sum = 0.0;
    for (Eigen::Index i = 0; i < members.cols(); ++i) {
      const auto m = coefficient_matrix(members.col(i).data(), dim_a_, dim_b_);
      const double p = m.squaredNorm();
      if (p <= std::numeric_limits<double>::min()) continue;
      sum += (m * m.adjoint()).squaredNorm() / p;
    }
    return 2.0 * (1.0 - sum);
  }

  // Euclidean gradient with respect to conj(W).
  ComplexMatrix gradient(const ComplexMatrix& w) const {
    const ComplexMatrix members = phi_ * w.transpose();
    ComplexMatrix g = ComplexMatrix::Zero(members.rows(), members.cols());
    for (Eigen::Index i = 0; i < members.cols(); ++i) {
      const auto m = coefficient_matrix(members.col(i).data(), dim_a_, dim_b_);
      const double p = m.squaredNorm();
      if (p <= std::numeric_limits<double>::min()) continue;
      const ComplexMatrix mmd = m * m.adjoint();
      const double purity = mmd.squaredNorm();
      const ComplexMatrix d = -2.0 * (2.0 * mmd * m / p - purity * m / (p * p));
      for (std::size_t a = 0; a < dim_a_; ++a) {
        for (std::size_t b = 0; b < dim_b_; ++b) {
          g(static_cast<Eigen::Index>(a * dim_b_ + b), i) =
              d(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
        }
      }
    }
    return g.transpose() * phi_.conjugate();
  }

private:
  ComplexMatrix phi_;
  std::size_t dim_a_, dim_b_;
};

struct DescentResult {
  double value;
  std::size_t iterations;
  bool converged;
};

DescentResult descend(const EnsembleObjective& f, ComplexMatrix w,
                      const ConvexRoofOptions& opt) {
  double current = f.value(w);
  std::vector<double> history{current};
  double step = 1.0;
  std::size_t it = 0;
  for (; it < opt.max_iterations; ++it) {
    const ComplexMatrix egrad = f.gradient(w);
    const ComplexMatrix wg = w.adjoint() * egrad;
    const ComplexMatrix xi = egrad - w * (0.5 * (wg + wg.adjoint()));
    const double slope = xi.squaredNorm();
    if (slope < 1e-24) return {current, it, true};

    // Armijo backtracking along the retracted curve.
    step = std::min(step * 2.0, 1e3);
    bool accepted = false;
    for (int tries = 0; tries < 60; ++tries) {
      const ComplexMatrix trial = polar_orthonormalize(w - step * xi);
      const double v = f.value(trial);
      if (v <= current - 1e-4 * step * slope) {
        w = trial;
        current = v;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) return {current, it, true};

    history.push_back(current);
    if (history.size() > opt.patience &&
        history[history.size() - 1 - opt.patience] - current < opt.tolerance) {
      return {current, it + 1, true};
    }
  }
  return {current, it, false};
}

ComplexMatrix random_isometry(std::size_t rows, std::size_t cols,
                              std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  ComplexMatrix a(static_cast<Eigen::Index>(rows),
                  static_cast<Eigen::Index>(cols));
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      a(i, j) = Complex{normal(rng), normal(rng)};
    }
  }
  return polar_orthonormalize(a);
}

}  // namespace

void BipartitionSpec::validate(const CompositeSpace& space,
                               std::size_t resonator_site) const {
  if (side_a.empty() || side_b.empty()) {
    throw std::invalid_argument("BipartitionSpec: both sides must be non-empty");
  }
  std::vector<bool> used(space.size(), false);
  for (const auto* side : {&side_a, &side_b}) {
    for (auto s : *side) {
      if (s >= space.size()) {
        throw std::invalid_argument("BipartitionSpec: subsystem out of range");
      }
      if (used[s]) {
        throw std::invalid_argument(
            "BipartitionSpec: sides overlap or repeat a subsystem");
      }
      used[s] = true;
    }
  }
  if (reduction == Reduction::resonator_two_level && !used[resonator_site]) {
    throw std::invalid_argument(
        "BipartitionSpec: resonator_two_level reduction requires the "
        "resonator in the partition");
  }
}

double concurrence(const ComplexMatrix& rho, double neg_tol) {
  require_density(rho, 4, "concurrence", neg_tol);
  const ComplexMatrix yy = linalg::kron(linalg::sigma_y(), linalg::sigma_y());
  const ComplexMatrix flipped = yy * rho.conjugate() * yy;
  const ComplexMatrix root = linalg::psd_sqrt(rho, neg_tol).root;
  const ComplexMatrix inner = root * flipped * root;
  const auto eig = linalg::hermitian_eigs(inner, 1e-8);
  const double noise =
      64.0 * std::numeric_limits<double>::epsilon() * eig.values.cwiseAbs().maxCoeff();
  double lambda[4];
  for (int k = 0; k < 4; ++k) {
    double mu = eig.values(k);
    if (std::abs(mu) <= noise) mu = 0.0;
    if (mu < 0.0) {
      if (mu < -std::max(1e-10, neg_tol)) {
        std::ostringstream msg;
        msg << "concurrence: eigenvalue " << mu
            << " of sqrt(rho) rho~ sqrt(rho) is below tolerance";
        throw std::invalid_argument(msg.str());
      }
      mu = 0.0;
    }
    lambda[k] = std::sqrt(mu);
  }
  return std::max(0.0, lambda[0] - lambda[1] - lambda[2] - lambda[3]);
}

double tangle_two_qubit(const ComplexMatrix& rho, double neg_tol) {
  const double c = concurrence(rho, neg_tol);
  return c * c;
}

TwoLevelReduction effective_two_level_reduce(const ComplexMatrix& rho,
                                             const CompositeSpace& space,
                                             std::size_t qubit,
                                             double leakage_bound) {
  if (space.size() < 2) {
    throw linalg::DimensionError(
        "effective_two_level_reduce: need a qubit and a resonator");
  }
  const std::size_t resonator = space.size() - 1;
  if (qubit >= resonator || space.dim(qubit) != 2) {
    std::ostringstream msg;
    msg << "effective_two_level_reduce: subsystem " << qubit
        << " is not a qubit";
    throw linalg::DimensionError(msg.str());
  }
  const ComplexMatrix pair = linalg::partial_trace(rho, space, {qubit, resonator});
  const auto levels = static_cast<Eigen::Index>(space.dim(resonator));
  // (qubit, phonon) pairs in the order (e,0), (e,1), (g,0), (g,1).
  const Eigen::Index idx[4] = {0, 1, levels, levels + 1};
  ComplexMatrix block(4, 4);
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) block(r, c) = pair(idx[r], idx[c]);
  }
  const double kept = block.trace().real();
  const double total = pair.trace().real();
  TwoLevelReduction out;
  out.leakage = std::max(0.0, 1.0 - kept / total);
  if (kept <= 1e-12) {
    throw std::domain_error(
        "effective_two_level_reduce: state lies entirely outside the "
        "resonator levels {|0>, |1>} (leakage 1)");
  }
  out.rho = block / kept;
  out.flagged = out.leakage > leakage_bound;
  return out;
}

QubitResonatorTangle qubit_resonator_tangle(const ComplexMatrix& rho,
                                            const CompositeSpace& space,
                                            std::size_t qubit,
                                            double leakage_bound) {
  const auto red = effective_two_level_reduce(rho, space, qubit, leakage_bound);
  return {tangle_two_qubit(red.rho, kEvolvedNegTol), red.leakage, red.flagged};
}

double pure_state_tangle(const ComplexVector& psi, std::size_t dim_a,
                         std::size_t dim_b) {
  if (static_cast<std::size_t>(psi.size()) != dim_a * dim_b) {
    throw linalg::DimensionError("pure_state_tangle: state length mismatch");
  }
  const auto m = coefficient_matrix(psi.data(), dim_a, dim_b);
  const double norm = m.squaredNorm();
  const ComplexMatrix rho_a = m * m.adjoint() / norm;
  return 2.0 * (1.0 - rho_a.squaredNorm());
}

ConvexRoofResult i_tangle_convex_roof(const ComplexMatrix& rho,
                                      std::size_t dim_a, std::size_t dim_b,
                                      const ConvexRoofOptions& opt) {
  const auto total = static_cast<Eigen::Index>(dim_a * dim_b);
  if (rho.rows() != total || rho.cols() != total) {
    std::ostringstream msg;
    msg << "i_tangle_convex_roof: dims " << dim_a << "x" << dim_b
        << " do not match a " << rho.rows() << "x" << rho.cols() << " matrix";
    throw linalg::DimensionError(msg.str());
  }
  if (std::min(dim_a, dim_b) > 4) {
    throw linalg::DimensionError(
        "i_tangle_convex_roof: one side must have dimension <= 4");
  }
  require_density(rho, total, "i_tangle_convex_roof", opt.neg_tol);

  const auto eig = linalg::hermitian_eigs(rho, kHermTol);
  std::size_t rank = 0;
  while (rank < static_cast<std::size_t>(eig.values.size()) &&
         eig.values(static_cast<Eigen::Index>(rank)) > opt.rank_cutoff) {
    ++rank;
  }
  const auto r = static_cast<Eigen::Index>(rank);
  ComplexMatrix phi(total, r);
  for (Eigen::Index k = 0; k < r; ++k) {
    phi.col(k) = std::sqrt(eig.values(k)) * eig.vectors.col(k);
  }

  ConvexRoofResult out;
  out.rank = rank;
  const EnsembleObjective objective(phi, dim_a, dim_b);
  if (rank == 1) {
    out.value = pure_state_tangle(eig.vectors.col(0), dim_a, dim_b);
    out.eigen_ensemble_value = out.value;
    out.best_so_far = {out.value};
    out.converged = true;
    return out;
  }

  const std::size_t members = rank + opt.extra_members;
  ComplexMatrix spectral = ComplexMatrix::Zero(static_cast<Eigen::Index>(members), r);
  spectral.topRows(r).setIdentity();
  out.eigen_ensemble_value = objective.value(spectral);

  out.value = std::numeric_limits<double>::infinity();
  out.converged = true;
  for (std::size_t s = 0; s < std::max<std::size_t>(opt.starts, 1); ++s) {
    ComplexMatrix start = spectral;
    if (s > 0) {
      std::mt19937_64 rng(opt.seed + s);
      start = random_isometry(members, rank, rng);
    }
    const auto res = descend(objective, start, opt);
    out.iterations += res.iterations;
    out.converged = out.converged && res.converged;
    out.value = std::min(out.value, res.value);
    out.best_so_far.push_back(out.value);
  }
  out.value = std::max(0.0, out.value);
  return out;
}

double von_neumann_entropy(const ComplexMatrix& rho) {
  require_density(rho, rho.rows(), "von_neumann_entropy");
  const auto eig = linalg::hermitian_eigs(rho, kHermTol);
  double s = 0.0;
  for (Eigen::Index k = 0; k < eig.values.size(); ++k) {
    const double p = eig.values(k);
    if (p > 0.0) s -= p * std::log2(p);
  }
  return std::max(0.0, s);
}

std::map<QubitPair, double> pairwise_tangles(const ComplexMatrix& rho,
                                             const CompositeSpace& space,
                                             std::size_t n_qubits) {
  if (n_qubits < 2) {
    throw std::invalid_argument("pairwise_tangles: need at least two qubits");
  }
  std::map<QubitPair, double> out;
  for (std::size_t i = 0; i < n_qubits; ++i) {
    for (std::size_t j = i + 1; j < n_qubits; ++j) {
      out[{i, j}] = tangle_two_qubit(linalg::partial_trace(rho, space, {i, j}),
                                     kEvolvedNegTol);
    }
  }
  return out;
}

}  // namespace nanomech::entanglement
