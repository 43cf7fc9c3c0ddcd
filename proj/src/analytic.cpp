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

#include "nanomech/analytic.hpp"

#include <cmath>
#include <stdexcept>

#include "nanomech/entanglement.hpp"

namespace nanomech::analytic {

using linalg::Complex;

double eq4_tangle(const Eq4Params& p) {
  if (!(p.omega_t >= 0.0) || !(p.kappa_over_omega >= 0.0)) {
    throw std::invalid_argument("eq4_tangle: omega_t and kappa/omega must be >= 0");
  }
  const double kt = p.kappa_over_omega * p.omega_t;
  // 2 cosh x + cosh 3x - 2 sinh x - sinh 3x, written without cancellation.
  const double envelope = 2.0 * std::exp(-kt) + std::exp(-3.0 * kt);
  return std::max(0.0, std::sin(2.0 * p.omega_t) * envelope);
}

std::vector<double> eq4_series(std::span<const double> omega_t,
                               double kappa_over_omega) {
  std::vector<double> out;
  out.reserve(omega_t.size());
  for (double t : omega_t) out.push_back(eq4_tangle({t, kappa_over_omega}));
  return out;
}

namespace {

using Matrix3 = Eigen::Matrix3cd;

// Sector basis: 0 = |e',0>, 1 = |g',1>, 2 = |g',0>.
struct Sector {
  Matrix3 h;
  double decay;  // rate of |g',1> -> |g',0>

  Matrix3 derivative(const Matrix3& rho) const {
    const Complex i{0.0, 1.0};
    Matrix3 d = -i * (h * rho - rho * h);
    // 2 kappa (L rho L^dag - {L^dag L, rho} / 2) with L = |2><1|.
    d(2, 2) += decay * rho(1, 1);
    for (int k = 0; k < 3; ++k) {
      d(1, k) -= 0.5 * decay * rho(1, k);
      d(k, 1) -= 0.5 * decay * rho(k, 1);
    }
    return d;
  }

  void rk4(Matrix3& rho, double h_step) const {
    const Matrix3 k1 = derivative(rho);
    const Matrix3 k2 = derivative(rho + 0.5 * h_step * k1);
    const Matrix3 k3 = derivative(rho + 0.5 * h_step * k2);
    const Matrix3 k4 = derivative(rho + h_step * k3);
    rho += (h_step / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
};

double sector_tangle(const Matrix3& rho) {
  // Two-qubit order (e,0), (e,1), (g,0), (g,1).
  const int map[3] = {0, 3, 2};
  linalg::ComplexMatrix four = linalg::ComplexMatrix::Zero(4, 4);
  for (int r = 0; r < 3; ++r) {
    for (int c = 0; c < 3; ++c) four(map[r], map[c]) = rho(r, c);
  }
  four /= four.trace().real();
  return entanglement::tangle_two_qubit(four);
}

}  // namespace

SingleExcitationTrajectory single_excitation_oracle(
    const model::ModelParams& p, std::span<const double> grid) {
  p.validate();
  if (p.n_qubits != 1 || p.chi != 0.0 || p.gamma != 0.0 ||
      p.gamma_cross != 0.0 || p.n_bar != 0.0) {
    throw std::invalid_argument(
        "single_excitation_oracle: requires one qubit and "
        "chi = gamma = gamma_cross = n_bar = 0");
  }
  if (grid.size() < 2 || grid.front() != 0.0) {
    throw std::invalid_argument(
        "single_excitation_oracle: grid must start at 0 with >= 2 points");
  }

  const auto dq = model::dressed_qubit(p);
  const double g = p.omega * dq.transverse;
  Sector sector;
  sector.h = Matrix3::Zero();
  sector.h(0, 0) = dq.splitting - p.nu;
  sector.h(0, 1) = g;
  sector.h(1, 0) = g;
  sector.decay = 2.0 * p.kappa;

  Matrix3 rho = Matrix3::Zero();
  rho(0, 0) = 1.0;

  SingleExcitationTrajectory out;
  auto record = [&](double t) {
    out.times.push_back(t);
    out.pop_e0.push_back(rho(0, 0).real());
    out.pop_g1.push_back(rho(1, 1).real());
    out.pop_g0.push_back(rho(2, 2).real());
    out.tangle.push_back(sector_tangle(rho));
  };
  record(grid[0]);
  constexpr double kMaxStep = 1e-3;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double span = grid[i] - grid[i - 1];
    if (!(span > 0.0)) {
      throw std::invalid_argument(
          "single_excitation_oracle: grid must be strictly increasing");
    }
    const auto n = static_cast<std::size_t>(std::ceil(span / kMaxStep));
    const double h = span / static_cast<double>(n);
    for (std::size_t s = 0; s < n; ++s) sector.rk4(rho, h);
    record(grid[i]);
  }
  return out;
}

TangleFeatures tangle_features(std::span<const double> times,
                               std::span<const double> values,
                               double zero_tol) {
  if (times.size() != values.size()) {
    throw std::invalid_argument("tangle_features: length mismatch");
  }
  TangleFeatures f;
  bool seen_positive = false;
  bool in_zero_run = false;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const bool positive = values[i] > zero_tol;
    if (positive && !f.first_nonzero_time && times[i] > 0.0) {
      f.first_nonzero_time = times[i];
    }
    if (positive) {
      if (in_zero_run && seen_positive) {
        ++f.sudden_deaths;
        f.birth_times.push_back(times[i]);
      } else if (!seen_positive && i > 0) {
        f.birth_times.push_back(times[i]);
      }
      seen_positive = true;
      in_zero_run = false;
    } else {
      if (seen_positive && !in_zero_run) f.death_times.push_back(times[i]);
      in_zero_run = true;
    }
  }
  return f;
}

}  // namespace nanomech::analytic
