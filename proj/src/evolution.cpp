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

#include "nanomech/evolution.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

namespace nanomech::evolution {

using linalg::Complex;

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(ComplexMatrix matrix, CompositeSpace space,
                             const StateTolerance& tol)
    : matrix_(std::move(matrix)), space_(std::move(space)) {
  const auto d = static_cast<Eigen::Index>(space_.total());
  if (matrix_.rows() != d || matrix_.cols() != d) {
    std::ostringstream msg;
    msg << "DensityMatrix: matrix is " << matrix_.rows() << "x"
        << matrix_.cols() << " but the space has dimension " << d;
    throw linalg::DimensionError(msg.str());
  }
  if (const double h = hermiticity_defect(); h > tol.hermiticity) {
    std::ostringstream msg;
    msg << "DensityMatrix: Hermiticity defect " << h << " exceeds "
        << tol.hermiticity;
    throw InvalidStateError(msg.str());
  }
  if (const double t = trace_deviation(); t > tol.trace) {
    std::ostringstream msg;
    msg << "DensityMatrix: trace deviates from 1 by " << t;
    throw InvalidStateError(msg.str());
  }
  if (const double m = min_eigenvalue(); m < tol.min_eigenvalue) {
    std::ostringstream msg;
    msg << "DensityMatrix: negative eigenvalue " << m;
    throw InvalidStateError(msg.str());
  }
}

double DensityMatrix::trace_deviation() const {
  return std::abs(matrix_.trace() - Complex{1.0, 0.0});
}

double DensityMatrix::hermiticity_defect() const {
  return linalg::hermiticity_defect(matrix_);
}

double DensityMatrix::min_eigenvalue() const {
  return linalg::min_eigenvalue(matrix_);
}

// ---------------------------------------------------------------------------
// Liouvillian

Liouvillian::Liouvillian(const ComplexMatrix& h, const model::Dissipator& d)
    : dim_(static_cast<std::size_t>(h.rows())), h_(h) {
  if (h.rows() != h.cols()) {
    throw linalg::DimensionError("Liouvillian: Hamiltonian is not square");
  }
  k_dense_ = Complex{0.0, -1.0} * h;
  for (const auto& ch : d.channels) {
    if (ch.op.rows() != h.rows() || ch.op.cols() != h.cols()) {
      std::ostringstream msg;
      msg << "Liouvillian: channel '" << ch.label << "' is " << ch.op.rows()
          << "x" << ch.op.cols() << ", Hamiltonian is " << h.rows() << "x"
          << h.cols();
      throw linalg::DimensionError(msg.str());
    }
    k_dense_ -= 0.5 * ch.rate * ch.op.adjoint() * ch.op;
    Jump j{ch.rate, ch.op.sparseView(), Sparse{}};
    j.op_adj = j.op.adjoint();
    jumps_.push_back(std::move(j));
  }
  k_ = k_dense_.sparseView();
  k_adj_ = k_.adjoint();
}

void Liouvillian::apply(const ComplexMatrix& rho, ComplexMatrix& out) const {
  if (static_cast<std::size_t>(rho.rows()) != dim_ ||
      static_cast<std::size_t>(rho.cols()) != dim_) {
    throw linalg::DimensionError("Liouvillian::apply: dimension mismatch");
  }
  out.noalias() = k_ * rho;
  out.noalias() += rho * k_adj_;
  for (const auto& j : jumps_) {
    scratch_.noalias() = j.op * rho;
    out.noalias() += j.rate * (scratch_ * j.op_adj);
  }
}

ComplexMatrix Liouvillian::apply(const ComplexMatrix& rho) const {
  ComplexMatrix out(rho.rows(), rho.cols());
  apply(rho, out);
  return out;
}

ComplexMatrix Liouvillian::generator() const {
  using linalg::kron;
  const ComplexMatrix id = linalg::identity(dim_);
  // vec(K rho) = (I (x) K) vec(rho); vec(rho K^dag) = (conj(K) (x) I) vec(rho)
  ComplexMatrix g = kron(id, k_dense_) + kron(k_dense_.conjugate(), id);
  for (const auto& j : jumps_) {
    const ComplexMatrix op = j.op;
    g += j.rate * kron(op.conjugate(), op);
  }
  return g;
}

ComplexMatrix rhs(const DensityMatrix& rho, const ComplexMatrix& h,
                  const model::Dissipator& d) {
  return Liouvillian(h, d).apply(rho.matrix());
}

// ---------------------------------------------------------------------------
// ExponentialPropagator

ExponentialPropagator::ExponentialPropagator(const Liouvillian& l,
                                             std::size_t max_dim)
    : dim_(l.dim()) {
  if (dim_ > max_dim) {
    std::ostringstream msg;
    msg << "exponential method refused: Hilbert-space dimension " << dim_
        << " exceeds the bound " << max_dim << " (generator would be "
        << dim_ * dim_ << "x" << dim_ * dim_
        << "); use the direct method or raise max_exponential_dim";
    throw std::invalid_argument(msg.str());
  }
  generator_ = l.generator();
}

ComplexMatrix ExponentialPropagator::propagator(double dt) const {
  if (auto it = cache_.find(dt); it != cache_.end()) return it->second;
  ComplexMatrix scaled = generator_ * dt;
  ComplexMatrix p = scaled.exp();
  cache_.emplace(dt, p);
  return p;
}

ComplexMatrix ExponentialPropagator::propagate(const ComplexMatrix& rho,
                                               double dt) const {
  const linalg::ComplexVector v = propagator(dt) * linalg::vec(rho);
  return linalg::unvec(v, dim_);
}

// ---------------------------------------------------------------------------
// Integration

std::string to_string(Method m) {
  return m == Method::direct ? "direct" : "exponential";
}

Method method_from_string(const std::string& s) {
  if (s == "direct") return Method::direct;
  if (s == "exponential") return Method::exponential;
  throw std::invalid_argument("unknown integration method '" + s +
                              "' (expected direct or exponential)");
}

const Series* Trajectory::find(const std::string& name) const {
  for (const auto& s : observables) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

std::vector<double> uniform_grid(double t_max, std::size_t n_points) {
  if (n_points < 2) {
    throw std::invalid_argument("uniform_grid: need at least 2 points");
  }
  if (!(t_max > 0.0)) {
    throw std::invalid_argument("uniform_grid: t_max must be positive");
  }
  std::vector<double> grid(n_points);
  const double dt = t_max / static_cast<double>(n_points - 1);
  for (std::size_t i = 0; i < n_points; ++i) {
    grid[i] = static_cast<double>(i) * dt;
  }
  grid.back() = t_max;
  return grid;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr std::array<double, 7> kC{0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9,
                                   1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176,
     -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr std::array<double, 7> kErr{71.0 / 57600,      0.0,
                                     -71.0 / 16695,     71.0 / 1920,
                                     -17253.0 / 339200, 22.0 / 525,
                                     -1.0 / 40};

class DormandPrince {
public:
  DormandPrince(const Liouvillian& l, const EvolveOptions& opt)
      : l_(l), opt_(opt) {
    const auto d = static_cast<Eigen::Index>(l.dim());
    for (auto& k : k_) k.resize(d, d);
    stage_.resize(d, d);
    h_ = opt.fixed_step.value_or(opt.initial_step);
  }

  // Advances rho from t0 to t1 in place.
  void advance(ComplexMatrix& rho, double t0, double t1) {
    if (!have_fsal_) {
      l_.apply(rho, k_[0]);
      have_fsal_ = true;
    }
    double t = t0;
    while (t < t1) {
      const double remaining = t1 - t;
      double h = std::min(h_, remaining);
      const bool clipped = h < h_;
      if (remaining - h < 1e-12 * std::max(1.0, t1)) h = remaining;

      const double err = attempt(rho, h);
      if (opt_.fixed_step || err <= 1.0) {
        rho.swap(y_new_);
        std::swap(k_[0], k_[6]);
        t = (h == remaining) ? t1 : t + h;
        ++steps;
        if (!opt_.fixed_step && !clipped) h_ = next_step(h, err);
      } else {
        ++rejected;
        h_ = next_step(h, err);
      }
    }
  }

  std::size_t steps = 0;
  std::size_t rejected = 0;

private:
  double attempt(const ComplexMatrix& y, double h) {
    for (int s = 1; s < 7; ++s) {
      stage_ = y;
      for (int j = 0; j < s; ++j) {
        if (kA[s][j] != 0.0) stage_.noalias() += (h * kA[s][j]) * k_[j];
      }
      if (s == 6) y_new_ = stage_;
      l_.apply(stage_, k_[s]);
    }
    if (opt_.fixed_step) return 0.0;
    err_.setZero(y.rows(), y.cols());
    for (int s = 0; s < 7; ++s) {
      if (kErr[s] != 0.0) err_.noalias() += (h * kErr[s]) * k_[s];
    }
    double worst = 0.0;
    for (Eigen::Index i = 0; i < err_.size(); ++i) {
      const double scale =
          opt_.atol + opt_.rtol * std::max(std::abs(y.data()[i]),
                                           std::abs(y_new_.data()[i]));
      worst = std::max(worst, std::abs(err_.data()[i]) / scale);
    }
    return worst;
  }

  double next_step(double h, double err) const {
    const double factor =
        err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    return std::min(h * factor, opt_.max_step);
  }

  const Liouvillian& l_;
  const EvolveOptions& opt_;
  std::array<ComplexMatrix, 7> k_;
  ComplexMatrix stage_, y_new_, err_;
  double h_ = 1e-3;
  bool have_fsal_ = false;
};

Diagnostics diagnose(const ComplexMatrix& rho, const CompositeSpace& space) {
  Diagnostics d;
  d.trace_deviation = std::abs(rho.trace() - Complex{1.0, 0.0});
  d.hermiticity_defect = linalg::hermiticity_defect(rho);
  d.min_eigenvalue = linalg::min_eigenvalue(rho);
  const std::size_t last = space.dim(space.size() - 1);
  for (Eigen::Index i = 0; i < rho.rows(); ++i) {
    d.mean_n += static_cast<double>(static_cast<std::size_t>(i) % last) *
                rho(i, i).real();
  }
  return d;
}

void check_grid(const std::vector<double>& grid) {
  if (grid.size() < 2) {
    throw std::invalid_argument("evolve: time grid needs at least 2 points");
  }
  if (grid.front() != 0.0) {
    throw std::invalid_argument("evolve: time grid must start at 0");
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw std::invalid_argument("evolve: time grid must be strictly increasing");
    }
  }
}

}  // namespace

Trajectory evolve(const DensityMatrix& rho0, const ComplexMatrix& h,
                  const model::Dissipator& d, const std::vector<double>& grid,
                  const EvolveOptions& options) {
  check_grid(grid);
  const Liouvillian l(h, d);
  if (l.dim() != rho0.space().total()) {
    throw linalg::DimensionError("evolve: state and Hamiltonian dimensions differ");
  }

  Trajectory traj;
  traj.space = rho0.space();
  traj.times = grid;
  traj.diagnostics.reserve(grid.size());

  std::optional<ExponentialPropagator> expo;
  std::optional<DormandPrince> rk;
  if (options.method == Method::exponential) {
    expo.emplace(l, options.max_exponential_dim);
  } else {
    rk.emplace(l, options);
  }

  ComplexMatrix rho = rho0.matrix();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (i > 0) {
      if (expo) {
        rho = expo->propagate(rho, grid[i] - grid[i - 1]);
        ++traj.steps;
      } else {
        rk->advance(rho, grid[i - 1], grid[i]);
      }
    }
    const Diagnostics diag = diagnose(rho, traj.space);
    traj.diagnostics.push_back(diag);
    if (options.abort_on_violation &&
        (diag.trace_deviation > options.abort_trace ||
         diag.min_eigenvalue < options.abort_min_eigenvalue ||
         !std::isfinite(diag.trace_deviation))) {
      std::ostringstream msg;
      msg << "physicality abort at t = " << grid[i]
          << ": trace deviation " << diag.trace_deviation
          << ", min eigenvalue " << diag.min_eigenvalue
          << " (limits " << options.abort_trace << ", "
          << options.abort_min_eigenvalue
          << "); check the Fock cutoff or the step size";
      throw PhysicalityError(msg.str());
    }
    if (options.store_states) traj.states.push_back(rho);
    if (options.observer) options.observer(i, grid[i], rho);
  }
  if (rk) {
    traj.steps = rk->steps;
    traj.rejected_steps = rk->rejected;
  }
  return traj;
}

Trajectory evolve(const DensityMatrix& rho0, const model::ModelParams& p,
                  const std::vector<double>& grid,
                  const EvolveOptions& options) {
  if (rho0.space() != p.space()) {
    throw linalg::DimensionError(
        "evolve: initial state space does not match the model parameters");
  }
  return evolve(rho0, model::hamiltonian_for(p), model::build_collapse_set(p),
                grid, options);
}

bool PhysicalityReport::within(const StateTolerance& tol) const {
  return max_trace_deviation <= tol.trace &&
         max_hermiticity_defect <= tol.hermiticity &&
         min_eigenvalue >= tol.min_eigenvalue;
}

PhysicalityReport physicality_report(const Trajectory& traj) {
  PhysicalityReport r;
  r.min_eigenvalue = traj.diagnostics.empty() ? 0.0 : 1.0;
  constexpr double inf = std::numeric_limits<double>::infinity();
  // Non-finite diagnostics count as the worst possible value.
  auto worst = [](double v, double bad) { return std::isfinite(v) ? v : bad; };
  for (const auto& d : traj.diagnostics) {
    r.max_trace_deviation =
        std::max(r.max_trace_deviation, worst(d.trace_deviation, inf));
    r.max_hermiticity_defect =
        std::max(r.max_hermiticity_defect, worst(d.hermiticity_defect, inf));
    r.min_eigenvalue = std::min(r.min_eigenvalue, worst(d.min_eigenvalue, -inf));
  }
  r.cutoff_converged = traj.cutoff_converged;
  return r;
}

}  // namespace nanomech::evolution
