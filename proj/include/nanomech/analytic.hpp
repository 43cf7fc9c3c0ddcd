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
#include <optional>
#include <span>
#include <vector>

#include "nanomech/model.hpp"

namespace nanomech::analytic {

struct Eq4Params {
  double omega_t = 0.0;           // dimensionless time, >= 0
  double kappa_over_omega = 0.0;  // >= 0
};

/// Closed-form single-qubit tangle for the lossless-qubit RWA regime at zero
/// temperature, evaluated exactly as written:
///   max[0, sin(2 wt) (2 cosh(k wt) + cosh(3 k wt) - 2 sinh(k wt) - sinh(3 k wt))]
/// with k = kappa/omega. Its amplitude reaches 3 at k = 0, outside the
/// tangle's [0, 1] range, so only its zero structure is meaningful.
double eq4_tangle(const Eq4Params& p);

/// eq4_tangle over a grid of omega*t values.
std::vector<double> eq4_series(std::span<const double> omega_t,
                               double kappa_over_omega);

struct SingleExcitationTrajectory {
  std::vector<double> times;
  std::vector<double> tangle;
  std::vector<double> pop_e0;  // dressed |e,0>
  std::vector<double> pop_g1;
  std::vector<double> pop_g0;
};

/// Master equation restricted to span{|e',0>, |g',1>, |g',0>} of the dressed
/// RWA model, integrated with a fixed-step fourth-order Runge-Kutta scheme
/// (step <= 1e-3) in the frame co-rotating with the bare sector energies.
/// Requires one qubit and chi = gamma = gamma_cross = n_bar = 0. The tangle
/// is computed on the {|0>, |1>} x {|e'>, |g'>} basis.
SingleExcitationTrajectory single_excitation_oracle(
    const model::ModelParams& p, std::span<const double> grid);

/// Zero structure of a sampled tangle curve.
struct TangleFeatures {
  std::optional<double> first_nonzero_time;  // first t > 0 with value > tol
  std::size_t sudden_deaths = 0;  // zero runs entered from and left to > tol
  std::vector<double> death_times;
  std::vector<double> birth_times;
};

TangleFeatures tangle_features(std::span<const double> times,
                               std::span<const double> values,
                               double zero_tol = 1e-10);

}  // namespace nanomech::analytic
