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

#include "nanomech/scenarios.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <sstream>
#include <thread>

namespace nanomech::scenarios {

using evolution::Series;
using linalg::Complex;

ComplexMatrix eq5_matrix(const MixedEq5& m) {
  // Basis |ee>, |eg>, |ge>, |gg>.
  ComplexMatrix rho = ComplexMatrix::Zero(4, 4);
  rho(0, 0) = m.a;
  rho(1, 1) = m.b;
  rho(2, 2) = m.c;
  rho(3, 3) = 1.0 - m.a;
  rho(1, 2) = m.f;
  rho(2, 1) = std::conj(m.f);
  const double trace = rho.trace().real();
  if (m.normalize) {
    if (!(trace > 0.0)) {
      throw ConfigError("mixed_eq5: trace " + std::to_string(trace) +
                        " cannot be normalized");
    }
    rho /= trace;
  } else if (std::abs(trace - 1.0) > 1e-12) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "mixed_eq5: trace is %.17g (1 + b + c), not 1; set "
                  "initial.eq5.normalize = true or b = c = 0",
                  trace);
    throw ConfigError(buf);
  }
  const double min_eig = linalg::min_eigenvalue(rho);
  if (min_eig < -1e-10) {
    char buf[120];
    std::snprintf(buf, sizeof buf,
                  "mixed_eq5: not positive semidefinite (eigenvalue %.17g)",
                  min_eig);
    throw ConfigError(buf);
  }
  return rho;
}

std::vector<double> thermal_populations(double n_bar, std::size_t n_max,
                                        double* truncated_mass) {
  if (!(n_bar >= 0.0)) {
    throw std::invalid_argument("thermal_populations: n_bar must be >= 0");
  }
  std::vector<double> p(n_max + 1);
  const double ratio = n_bar / (1.0 + n_bar);
  double weight = 1.0 / (1.0 + n_bar);
  double sum = 0.0;
  for (auto& pn : p) {
    pn = weight;
    sum += weight;
    weight *= ratio;
  }
  if (truncated_mass) *truncated_mass = 1.0 - sum;
  for (auto& pn : p) pn /= sum;
  return p;
}

InitialState build_initial_state(const ScenarioConfig& cfg) {
  cfg.validate();
  const auto& m = cfg.model;
  ComplexMatrix qubits;
  if (cfg.qubits.kind == QubitInit::Kind::mixed_eq5) {
    qubits = eq5_matrix(cfg.qubits.eq5);
  } else {
    std::size_t index = 0;
    for (char c : cfg.qubits.basis) index = 2 * index + (c == 'g' ? 1 : 0);
    const auto d = static_cast<Eigen::Index>(std::size_t{1} << m.n_qubits);
    qubits = ComplexMatrix::Zero(d, d);
    qubits(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)) = 1.0;
  }

  const auto levels = static_cast<Eigen::Index>(m.n_max + 1);
  ComplexMatrix resonator = ComplexMatrix::Zero(levels, levels);
  double truncated = 0.0;
  switch (cfg.resonator.kind) {
    case ResonatorInit::Kind::vacuum:
      resonator(0, 0) = 1.0;
      break;
    case ResonatorInit::Kind::fock: {
      const auto n = static_cast<Eigen::Index>(cfg.resonator.fock);
      resonator(n, n) = 1.0;
      break;
    }
    case ResonatorInit::Kind::thermal: {
      const auto p = thermal_populations(cfg.resonator.n_bar, m.n_max, &truncated);
      for (Eigen::Index n = 0; n < levels; ++n) {
        resonator(n, n) = p[static_cast<std::size_t>(n)];
      }
      break;
    }
  }
  return {evolution::DensityMatrix(linalg::kron(qubits, resonator), m.space()),
          truncated};
}

namespace {

std::string pair_column(std::size_t i, std::size_t j) {
  return "tangle_q" + std::to_string(i + 1) + "q" + std::to_string(j + 1);
}

// Qubit `first` moved to the front of an n-qubit register.
ComplexMatrix qubit_to_front(const ComplexMatrix& rho, std::size_t n,
                             std::size_t first) {
  if (first == 0) return rho;
  const std::size_t dim = std::size_t{1} << n;
  std::vector<Eigen::Index> perm(dim);
  for (std::size_t idx = 0; idx < dim; ++idx) {
    const std::size_t bit = (idx >> (n - 1 - first)) & 1U;
    std::size_t rest = 0;
    for (std::size_t q = 0; q < n; ++q) {
      if (q == first) continue;
      rest = 2 * rest + ((idx >> (n - 1 - q)) & 1U);
    }
    perm[idx] = static_cast<Eigen::Index>((bit << (n - 1)) | rest);
  }
  ComplexMatrix out(rho.rows(), rho.cols());
  for (std::size_t r = 0; r < dim; ++r) {
    for (std::size_t c = 0; c < dim; ++c) {
      out(perm[r], perm[c]) = rho(static_cast<Eigen::Index>(r),
                                  static_cast<Eigen::Index>(c));
    }
  }
  return out;
}

struct SingleRun {
  evolution::Trajectory traj;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> data;
  double truncated_mass = 0.0;
  double max_leakage = 0.0;
  bool leakage_flagged = false;
  bool has_itangle = false;
};

SingleRun run_once(const ScenarioConfig& cfg, const model::ModelParams& p) {
  ScenarioConfig at_cutoff = cfg;
  at_cutoff.model.n_max = p.n_max;
  const auto init = build_initial_state(at_cutoff);
  const auto space = p.space();
  const auto measures = cfg.effective_measures();
  const std::size_t n = p.n_qubits;

  SingleRun run;
  run.truncated_mass = init.truncated_mass;
  const auto grid = evolution::uniform_grid(cfg.t_max, cfg.n_points);

  // Column layout.
  std::vector<std::string> names{"omega_t"};
  bool want_qr = false, want_pairs = false;
  std::vector<std::size_t> itangle_sites, entropy_sites;
  for (const auto& m : measures) {
    switch (m.kind) {
      case MeasureSpec::Kind::qubit_resonator_tangle: want_qr = true; break;
      case MeasureSpec::Kind::pairwise_tangles: want_pairs = true; break;
      case MeasureSpec::Kind::i_tangle: itangle_sites.push_back(m.site); break;
      case MeasureSpec::Kind::entropy: entropy_sites.push_back(m.site); break;
    }
  }
  if (want_qr) names.push_back("tangle_qr");
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (want_pairs) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        pairs.emplace_back(i, j);
        names.push_back(pair_column(i, j));
      }
    }
  }
  for (auto s : itangle_sites) {
    names.push_back("itangle_q" + std::to_string(s + 1) + "_rest");
  }
  for (auto s : entropy_sites) {
    names.push_back(s == 0 ? std::string("entropy") : "entropy_s" + std::to_string(s));
  }
  names.insert(names.end(), {"mean_n", "trace_dev", "min_eig"});
  if (want_qr) names.push_back("leakage");
  run.has_itangle = !itangle_sites.empty();

  std::vector<std::vector<double>> cols(names.size());
  for (auto& c : cols) c.reserve(grid.size());
  std::vector<std::size_t> all_qubits(n);
  for (std::size_t q = 0; q < n; ++q) all_qubits[q] = q;

  std::vector<double> leakage_col;
  evolution::EvolveOptions opt;
  opt.method = cfg.numerics.method;
  opt.atol = cfg.numerics.atol;
  opt.observer = [&](std::size_t, double t, const ComplexMatrix& rho) {
    std::size_t c = 0;
    cols[c++].push_back(t);
    if (want_qr) {
      const auto qr = entanglement::qubit_resonator_tangle(rho, space, 0);
      cols[c++].push_back(qr.tangle);
      leakage_col.push_back(qr.leakage);
      run.max_leakage = std::max(run.max_leakage, qr.leakage);
      run.leakage_flagged = run.leakage_flagged || qr.flagged;
    }
    if (!pairs.empty()) {
      const auto tangles = entanglement::pairwise_tangles(rho, space, n);
      for (const auto& pr : pairs) cols[c++].push_back(tangles.at(pr));
    }
    if (!itangle_sites.empty()) {
      const ComplexMatrix reg = linalg::partial_trace(rho, space, all_qubits);
      entanglement::ConvexRoofOptions roof;
      roof.neg_tol = 1e-4;
      for (auto s : itangle_sites) {
        const ComplexMatrix front = qubit_to_front(reg, n, s);
        cols[c++].push_back(entanglement::i_tangle_convex_roof(
                                front, 2, std::size_t{1} << (n - 1), roof)
                                .value);
      }
    }
    for (auto s : entropy_sites) {
      cols[c++].push_back(entanglement::von_neumann_entropy(
          linalg::partial_trace(rho, space, {s})));
    }
  };

  run.traj = evolution::evolve(init.rho, p, grid, opt);
  for (const auto& d : run.traj.diagnostics) {
    std::size_t c = names.size() - (want_qr ? 4 : 3);
    cols[c++].push_back(d.mean_n);
    cols[c++].push_back(d.trace_deviation);
    cols[c++].push_back(d.min_eigenvalue);
  }
  if (want_qr) cols.back() = std::move(leakage_col);

  run.columns = names;
  run.data = cols;
  for (std::size_t c = 1; c < names.size(); ++c) {
    run.traj.observables.push_back({names[c], cols[c]});
  }
  return run;
}

double tangle_delta(const SingleRun& a, const SingleRun& b) {
  double delta = 0.0;
  for (std::size_t c = 0; c < a.columns.size(); ++c) {
    const auto& name = a.columns[c];
    if (name.rfind("tangle_", 0) != 0 && name.rfind("itangle_", 0) != 0) continue;
    for (std::size_t i = 0; i < a.data[c].size(); ++i) {
      delta = std::max(delta, std::abs(a.data[c][i] - b.data[c][i]));
    }
  }
  return delta;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) {
      throw std::runtime_error("cannot create directory " +
                               path.parent_path().string() + ": " + ec.message());
    }
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

std::filesystem::path resolve(const RunOptions& o, const std::string& p) {
  std::filesystem::path path(p);
  if (path.is_relative() && !o.output_dir.empty()) return o.output_dir / path;
  return path;
}

}  // namespace

ScenarioResult run_scenario(const ScenarioConfig& cfg, const RunOptions& options) {
  cfg.validate();
  model::ModelParams p = cfg.normalized_model();

  SingleRun run = run_once(cfg, p);
  std::optional<bool> converged;
  std::optional<double> delta;
  if (cfg.numerics.convergence_check) {
    while (true) {
      model::ModelParams finer = p;
      finer.n_max += 4;
      SingleRun check = run_once(cfg, finer);
      delta = tangle_delta(run, check);
      if (*delta <= cfg.numerics.convergence_tol) {
        converged = true;
        break;
      }
      if (finer.n_max + 4 > cfg.numerics.n_max_limit) {
        converged = false;
        break;
      }
      p = finer;
      run = std::move(check);
    }
  }
  run.traj.cutoff_converged = converged;
  run.traj.cutoff_delta = delta;

  ScenarioResult result;
  result.config = cfg;
  result.n_max_used = p.n_max;
  result.report = evolution::physicality_report(run.traj);
  result.truncated_mass = run.truncated_mass;
  result.max_leakage = run.max_leakage;

  std::vector<std::string> footer{
      "name: " + cfg.name,
      "units: omega = 1; time column is omega*t; chi summed over ordered pairs",
      "n_qubits: " + std::to_string(p.n_qubits),
      "n_max: " + std::to_string(p.n_max),
      "rwa: " + std::string(p.rwa ? "true (qubit labels refer to the dressed basis)"
                                  : "false"),
      "method: " + evolution::to_string(cfg.numerics.method),
      "steps: " + std::to_string(run.traj.steps) +
          ", rejected: " + std::to_string(run.traj.rejected_steps),
      "physicality.max_trace_deviation: " + fmt(result.report.max_trace_deviation),
      "physicality.max_hermiticity_defect: " +
          fmt(result.report.max_hermiticity_defect),
      "physicality.min_eigenvalue: " + fmt(result.report.min_eigenvalue),
      "physicality.within_tolerance: " +
          std::string(result.report.within() ? "true" : "false"),
      "cutoff_converged: " +
          std::string(!converged ? "unchecked" : (*converged ? "true" : "false")),
  };
  if (delta) footer.push_back("cutoff_delta: " + fmt(*delta));
  if (cfg.resonator.kind == ResonatorInit::Kind::thermal) {
    footer.push_back("thermal_truncated_mass: " + fmt(run.truncated_mass));
  }
  if (std::find(run.columns.begin(), run.columns.end(), "leakage") !=
      run.columns.end()) {
    footer.push_back("max_leakage: " + fmt(run.max_leakage) +
                     (run.leakage_flagged ? " (above bound 0.05)" : ""));
  }
  if (run.has_itangle) {
    footer.push_back("itangle: approximate upper bound from the convex-roof optimizer");
  }
  result.csv_text = format_csv(run.columns, run.data, footer);
  result.trajectory = std::move(run.traj);

  if (options.write_files) {
    if (!cfg.csv.empty()) {
      const auto path = resolve(options, cfg.csv);
      write_text(path, result.csv_text);
      result.written.push_back(path);
    }
    if (!cfg.svg.empty()) {
      std::vector<Series> plotted;
      for (const auto& s : result.trajectory.observables) {
        if (s.name.find("tangle") != std::string::npos) plotted.push_back(s);
      }
      const auto path = resolve(options, cfg.svg);
      write_text(path, format_svg(cfg.name, result.trajectory.times, plotted));
      result.written.push_back(path);
    }
  }
  return result;
}

std::vector<ScenarioConfig> make_sweep(const ScenarioConfig& base,
                                       const std::string& key,
                                       const std::vector<std::string>& values) {
  const auto& keys = config_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
    throw ConfigError("sweep: unknown key '" + key + "'");
  }
  const std::string leaf = key.substr(key.rfind('.') + 1);
  auto tagged = [&](const std::string& path, const std::string& tag) {
    if (path.empty()) return path;
    const std::filesystem::path p(path);
    return (p.parent_path() / (p.stem().string() + tag + p.extension().string()))
        .string();
  };
  std::vector<ScenarioConfig> out;
  for (const auto& v : values) {
    ScenarioConfig cfg = base;
    set_config_value(cfg, key, v);
    const std::string tag = "_" + leaf + "_" + v;
    cfg.name = base.name + tag;
    cfg.csv = tagged(base.csv, tag);
    cfg.svg = tagged(base.svg, tag);
    out.push_back(std::move(cfg));
  }
  return out;
}

std::vector<ScenarioResult> run_all(const std::vector<ScenarioConfig>& cfgs,
                                    const RunOptions& options) {
  std::vector<ScenarioResult> results(cfgs.size());
  std::vector<std::exception_ptr> errors(cfgs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cfgs.size(); i = next++) {
      try {
        results[i] = run_scenario(cfgs[i], options);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t n_workers = std::clamp<std::size_t>(
      std::thread::hardware_concurrency(), 1, std::max<std::size_t>(cfgs.size(), 1));
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 1; w < n_workers; ++w) pool.emplace_back(worker);
    worker();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

const std::vector<std::string>& default_kappa_sweep() {
  static const std::vector<std::string> values = {"0.01", "0.05", "0.1",
                                                  "0.5",  "1",    "5"};
  return values;
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"fig1", "fig2", "fig3", "fig4",
                                                 "fig5", "fig6", "fig7"};
  return names;
}

namespace {

// Shared figure parameters: E_J = nu, V/omega = 1, nu/omega = 10.
ScenarioConfig figure_base(const std::string& name, std::size_t n_qubits) {
  ScenarioConfig cfg;
  cfg.name = name;
  cfg.model.n_qubits = n_qubits;
  cfg.model.nu = 10.0;
  cfg.model.e_j = 10.0;
  cfg.model.v_gate = 1.0;
  cfg.model.omega = 1.0;
  cfg.model.n_max = 10;
  cfg.qubits.basis = std::string(n_qubits, 'e');
  cfg.t_max = 50.0;
  cfg.n_points = 2001;
  cfg.numerics.atol = 1e-11;
  cfg.csv = name + ".csv";
  cfg.svg = name + ".svg";
  return cfg;
}

// Qubit-bath parameters shared by the thermal-bath figures.
void thermal_bath(ScenarioConfig& cfg, double n_bar) {
  cfg.model.gamma = 0.1;
  cfg.model.gamma_cross = 0.001;
  cfg.model.n_bar = n_bar;
  cfg.model.kappa = 0.0;
  cfg.model.chi = 0.0;
}

}  // namespace

std::vector<ScenarioConfig> preset(const std::string& name) {
  if (name == "fig1") {
    auto cfg = figure_base("fig1", 1);
    return make_sweep(cfg, "dissipation.kappa", default_kappa_sweep());
  }
  if (name == "fig2") {
    auto cfg = figure_base("fig2", 2);
    cfg.qubits.basis = "eg";
    return make_sweep(cfg, "dissipation.kappa", default_kappa_sweep());
  }
  if (name == "fig3") {
    auto cfg = figure_base("fig3", 2);
    cfg.qubits.kind = QubitInit::Kind::mixed_eq5;
    cfg.qubits.basis.clear();
    cfg.qubits.eq5 = {0.1, 0.45, 0.45, {0.0, 0.0}, true};
    cfg.model.kappa = 0.0;
    cfg.model.n_bar = 0.5;
    cfg.model.gamma_cross = 0.001;
    return make_sweep(cfg, "dissipation.gamma", {"0.01", "0.1", "0.7"});
  }
  if (name == "fig4") {
    auto cfg = figure_base("fig4", 2);
    return make_sweep(cfg, "model.chi", {"30", "15", "0.01"});
  }
  if (name == "fig5") {
    auto cfg = figure_base("fig5", 2);
    thermal_bath(cfg, 0.5);
    return make_sweep(cfg, "dissipation.n_bar", {"0.01", "0.1", "0.5"});
  }
  if (name == "fig6") {
    // Only the resonator is thermal; the qubits see no bath. A tighter
    // tolerance keeps the three-qubit state well inside the positivity bound.
    auto cfg = figure_base("fig6", 3);
    cfg.resonator = {ResonatorInit::Kind::thermal, 0, 0.5};
    cfg.numerics.atol = 1e-12;
    return {cfg};
  }
  if (name == "fig7") {
    // Three qubits against their two-qubit counterpart at identical settings.
    auto three = preset("fig6").front();
    three.name = "fig7_n_qubits_3";
    three.csv = three.name + ".csv";
    three.svg = three.name + ".svg";
    auto two = three;
    two.model.n_qubits = 2;
    two.qubits.basis = "ee";
    two.name = "fig7_n_qubits_2";
    two.csv = two.name + ".csv";
    two.svg = two.name + ".svg";
    return {two, three};
  }
  throw ConfigError("unknown preset '" + name + "' (expected fig1..fig7)");
}

}  // namespace nanomech::scenarios
