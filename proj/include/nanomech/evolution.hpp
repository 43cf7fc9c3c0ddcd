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
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/SparseCore>

#include "nanomech/linalg.hpp"
#include "nanomech/model.hpp"

namespace nanomech::evolution {

using linalg::ComplexMatrix;
using linalg::CompositeSpace;

/// Thresholds a state must meet to be accepted as a density matrix.
struct StateTolerance {
  double hermiticity = 1e-9;
  double trace = 1e-8;
  double min_eigenvalue = -1e-8;
};

class InvalidStateError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a run leaves the physical state space; the message carries
/// the time and the offending diagnostic.
class PhysicalityError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A density matrix bound to its tensor-product structure. Construction
/// checks Hermiticity, unit trace and positivity; nothing is repaired.
class DensityMatrix {
public:
  DensityMatrix(ComplexMatrix matrix, CompositeSpace space,
                const StateTolerance& tol = {});

  const ComplexMatrix& matrix() const { return matrix_; }
  const CompositeSpace& space() const { return space_; }

  double trace_deviation() const;
  double hermiticity_defect() const;
  double min_eigenvalue() const;

private:
  ComplexMatrix matrix_;
  CompositeSpace space_;
};

/// Compiled right-hand side of the master equation,
///   d rho/dt = K rho + rho K^dag + sum_k c_k L_k rho L_k^dag,
/// with K = -i H - 1/2 sum_k c_k L_k^dag L_k. Operators are compiled to a
/// sparse form for application; inputs and outputs stay dense.
class Liouvillian {
public:
  Liouvillian(const ComplexMatrix& h, const model::Dissipator& d);

  std::size_t dim() const { return dim_; }

  void apply(const ComplexMatrix& rho, ComplexMatrix& out) const;
  ComplexMatrix apply(const ComplexMatrix& rho) const;

  /// Dense dim^2 x dim^2 generator acting on column-stacked vec(rho).
  ComplexMatrix generator() const;

private:
  using Sparse = Eigen::SparseMatrix<linalg::Complex>;
  struct Jump {
    double rate;
    Sparse op;
    Sparse op_adj;
  };

  std::size_t dim_ = 0;
  ComplexMatrix h_;
  ComplexMatrix k_dense_;
  Sparse k_;
  Sparse k_adj_;
  std::vector<Jump> jumps_;
  mutable ComplexMatrix scratch_;
};

/// d rho/dt for the given Hamiltonian and dissipator.
ComplexMatrix rhs(const DensityMatrix& rho, const ComplexMatrix& h,
                  const model::Dissipator& d);

/// Propagates vec(rho) with exp(G dt), G the dense generator. Refuses
/// Hilbert spaces larger than `max_dim`.
class ExponentialPropagator {
public:
  explicit ExponentialPropagator(const Liouvillian& l,
                                 std::size_t max_dim = 64);

  ComplexMatrix propagator(double dt) const;
  ComplexMatrix propagate(const ComplexMatrix& rho, double dt) const;

private:
  std::size_t dim_;
  ComplexMatrix generator_;
  mutable std::map<double, ComplexMatrix> cache_;
};

enum class Method { direct, exponential };

std::string to_string(Method m);
Method method_from_string(const std::string& s);

struct EvolveOptions {
  Method method = Method::direct;
  double atol = 1e-9;          // per-component absolute error per step
  double rtol = 0.0;
  double initial_step = 1e-3;
  double max_step = 0.1;
  std::optional<double> fixed_step;  // disables error control when set
  std::size_t max_exponential_dim = 64;
  bool store_states = false;
  bool abort_on_violation = true;
  double abort_trace = 1e-6;
  double abort_min_eigenvalue = -1e-5;
  /// Called once per grid point with the state at that time.
  std::function<void(std::size_t, double, const ComplexMatrix&)> observer;
};

struct Diagnostics {
  double trace_deviation = 0.0;
  double hermiticity_defect = 0.0;
  double min_eigenvalue = 0.0;
  double mean_n = 0.0;  // occupation of the last subsystem
};

struct Series {
  std::string name;
  std::vector<double> values;
};

struct Trajectory {
  CompositeSpace space;
  std::vector<double> times;
  std::vector<ComplexMatrix> states;  // filled when store_states is set
  std::vector<Diagnostics> diagnostics;
  std::vector<Series> observables;
  std::size_t steps = 0;
  std::size_t rejected_steps = 0;
  std::optional<bool> cutoff_converged;
  std::optional<double> cutoff_delta;

  const Series* find(const std::string& name) const;
};

/// n_points equally spaced times on [0, t_max].
std::vector<double> uniform_grid(double t_max, std::size_t n_points);

/// Evolves rho0 over `grid` (which must start at 0 and increase strictly).
Trajectory evolve(const DensityMatrix& rho0, const ComplexMatrix& h,
                  const model::Dissipator& d, const std::vector<double>& grid,
                  const EvolveOptions& options = {});

/// Builds H (RWA or full, per p.rwa) and the dissipator from p, then evolves.
Trajectory evolve(const DensityMatrix& rho0, const model::ModelParams& p,
                  const std::vector<double>& grid,
                  const EvolveOptions& options = {});

struct PhysicalityReport {
  double max_trace_deviation = 0.0;
  double max_hermiticity_defect = 0.0;
  double min_eigenvalue = 0.0;
  std::optional<bool> cutoff_converged;

  /// True when every monitor is inside `tol`.
  bool within(const StateTolerance& tol = {}) const;
};

PhysicalityReport physicality_report(const Trajectory& traj);

}  // namespace nanomech::evolution
