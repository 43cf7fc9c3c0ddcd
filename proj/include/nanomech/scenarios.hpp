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

#include <complex>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nanomech/entanglement.hpp"
#include "nanomech/evolution.hpp"
#include "nanomech/model.hpp"

namespace nanomech::scenarios {

using linalg::ComplexMatrix;
using linalg::CompositeSpace;

class ConfigError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Two-qubit mixed state
///   a|ee><ee| + b|eg><eg| + (1-a)|gg><gg| + f|eg><ge| + f*|ge><eg| + c|ge><ge|.
struct MixedEq5 {
  double a = 1.0;
  double b = 0.0;
  double c = 0.0;
  std::complex<double> f{0.0, 0.0};
  bool normalize = false;

  bool operator==(const MixedEq5&) const = default;
};

struct QubitInit {
  enum class Kind { basis, mixed_eq5 };
  Kind kind = Kind::basis;
  std::string basis = "e";  // one of 'e'/'g' per qubit
  MixedEq5 eq5;

  bool operator==(const QubitInit&) const = default;
};

struct ResonatorInit {
  enum class Kind { vacuum, fock, thermal };
  Kind kind = Kind::vacuum;
  std::size_t fock = 0;
  double n_bar = 0.0;

  bool operator==(const ResonatorInit&) const = default;
};

struct MeasureSpec {
  enum class Kind { qubit_resonator_tangle, pairwise_tangles, i_tangle, entropy };
  Kind kind = Kind::pairwise_tangles;
  std::size_t site = 0;  // entropy subsystem, or the qubit of i_tangle

  bool operator==(const MeasureSpec&) const = default;
};

struct Numerics {
  evolution::Method method = evolution::Method::direct;
  double atol = 1e-9;
  bool convergence_check = false;
  std::size_t n_max_limit = 22;
  double convergence_tol = 1e-4;

  bool operator==(const Numerics&) const = default;
};

/// One declarative run. Energies and rates are read in arbitrary consistent
/// units and normalized by model.omega before evolution; t_max is in omega*t.
struct ScenarioConfig {
  std::string name = "run";
  model::ModelParams model;
  QubitInit qubits;
  ResonatorInit resonator;
  double t_max = 50.0;
  std::size_t n_points = 2001;
  Numerics numerics;
  std::vector<MeasureSpec> measures;  // empty: defaults for n_qubits
  std::string csv;
  std::string svg;

  /// Throws ConfigError on any violated invariant.
  void validate() const;

  /// Model parameters rescaled so that omega == 1.
  model::ModelParams normalized_model() const;

  std::vector<MeasureSpec> effective_measures() const;

  bool operator==(const ScenarioConfig&) const = default;
};

// Flat "section.key = value" text format; '#' starts a comment.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const ScenarioConfig& cfg);

/// Sets one dotted key from its textual value; the parser uses the same
/// entry point.
void set_config_value(ScenarioConfig& cfg, const std::string& key,
                      const std::string& value);

/// Every key accepted by set_config_value, in serialization order.
const std::vector<std::string>& config_keys();

ComplexMatrix eq5_matrix(const MixedEq5& m);

struct InitialState {
  evolution::DensityMatrix rho;
  /// Thermal weight lost to the Fock cutoff before renormalization.
  double truncated_mass = 0.0;
};

/// Truncated geometric distribution with mean n_bar on |0>..|n_max>,
/// renormalized. Returns the populations and the truncated mass.
std::vector<double> thermal_populations(double n_bar, std::size_t n_max,
                                        double* truncated_mass = nullptr);

InitialState build_initial_state(const ScenarioConfig& cfg);

struct ScenarioResult {
  ScenarioConfig config;
  evolution::Trajectory trajectory;
  evolution::PhysicalityReport report;
  double truncated_mass = 0.0;
  double max_leakage = 0.0;
  std::size_t n_max_used = 0;
  std::string csv_text;
  std::vector<std::filesystem::path> written;
};

struct RunOptions {
  bool write_files = true;
  std::filesystem::path output_dir;  // relative csv/svg paths resolve here
};

/// Builds the model, evolves, computes the requested measures and writes
/// CSV/SVG when paths are configured.
ScenarioResult run_scenario(const ScenarioConfig& cfg,
                            const RunOptions& options = {});

/// Configs for one parameter sweep; the sweep value is embedded in each
/// name and output filename.
std::vector<ScenarioConfig> make_sweep(const ScenarioConfig& base,
                                       const std::string& key,
                                       const std::vector<std::string>& values);

/// Runs configs as independent jobs (one worker per hardware thread).
std::vector<ScenarioResult> run_all(const std::vector<ScenarioConfig>& cfgs,
                                    const RunOptions& options = {});

/// kappa/omega grid used when a preset sweeps the resonator loss.
const std::vector<std::string>& default_kappa_sweep();

const std::vector<std::string>& preset_names();

/// Figure presets fig1..fig7, one config per sweep point.
std::vector<ScenarioConfig> preset(const std::string& name);

// ---------------------------------------------------------------------------
// Output formats

/// Column-oriented CSV: header "omega_t, col, ..." then one row per time with
/// 17 significant digits, then '#'-prefixed metadata lines.
std::string format_csv(const std::vector<std::string>& columns,
                       const std::vector<std::vector<double>>& data,
                       const std::vector<std::string>& footer);

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> data;  // data[column][row]
  std::vector<std::string> footer;        // without the leading '#'
};

CsvTable parse_csv(const std::string& text);

/// Minimal SVG line plot of the given series against x.
std::string format_svg(const std::string& title, const std::vector<double>& x,
                       const std::vector<evolution::Series>& series,
                       const std::string& x_label = "omega t");

}  // namespace nanomech::scenarios
