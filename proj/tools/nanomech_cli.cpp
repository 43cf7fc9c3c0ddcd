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

// Command-line front end: run, preset, sweep, oracle.

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>

#include "nanomech/analytic.hpp"
#include "nanomech/scenarios.hpp"

namespace {

using namespace nanomech;

constexpr int kExitError = 1;
constexpr int kExitPhysicality = 2;

void summarize(const scenarios::ScenarioResult& r) {
  std::printf("%s: n_max=%zu steps=%zu max|tr-1|=%.3g min_eig=%.3g%s\n",
              r.config.name.c_str(), r.n_max_used, r.trajectory.steps,
              r.report.max_trace_deviation, r.report.min_eigenvalue,
              r.report.within() ? "" : "  [outside physicality tolerance]");
  for (const auto& path : r.written) std::printf("  wrote %s\n", path.string().c_str());
}

int run_configs(const std::vector<scenarios::ScenarioConfig>& cfgs,
                const std::string& out_dir) {
  scenarios::RunOptions opt;
  opt.output_dir = out_dir;
  for (const auto& r : scenarios::run_all(cfgs, opt)) summarize(r);
  return 0;
}

int oracle_compare(const std::string& path) {
  auto cfg = scenarios::load_config(path);
  cfg.model.rwa = true;
  cfg.measures = {{scenarios::MeasureSpec::Kind::qubit_resonator_tangle, 0}};
  cfg.csv.clear();
  cfg.svg.clear();
  const auto result = scenarios::run_scenario(cfg, {false, {}});
  const auto* pipeline = result.trajectory.find("tangle_qr");
  const auto oracle = analytic::single_excitation_oracle(
      cfg.normalized_model(), result.trajectory.times);

  double worst = 0.0;
  double worst_t = 0.0;
  for (std::size_t i = 0; i < oracle.tangle.size(); ++i) {
    const double d = std::abs(oracle.tangle[i] - pipeline->values[i]);
    if (d > worst) {
      worst = d;
      worst_t = oracle.times[i];
    }
  }
  std::printf("max |tangle_pipeline - tangle_oracle| = %.3e at omega_t = %.4f over %zu points\n",
              worst, worst_t, oracle.tangle.size());
  return 0;
}

std::vector<std::string> split_values(const std::string& list) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const auto comma = std::min(list.find(',', start), list.size());
    std::string v = list.substr(start, comma - start);
    v.erase(0, v.find_first_not_of(' '));
    v.erase(v.find_last_not_of(' ') + 1);
    if (!v.empty()) out.push_back(v);
    start = comma + 1;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Charge qubits coupled to a damped nanomechanical resonator"};
  app.require_subcommand(1);

  std::string config_path, out_dir, preset_name, param, values, compare_path;

  auto* run = app.add_subcommand("run", "Evolve one configuration file");
  run->add_option("--config", config_path, "Configuration file")->required();
  run->add_option("--out", out_dir, "Directory for relative output paths");

  auto* pre = app.add_subcommand("preset", "Run a figure preset and all its sweep points");
  pre->add_option("--name", preset_name, "fig1..fig7")
      ->required()
      ->check(CLI::IsMember(scenarios::preset_names()));
  pre->add_option("--out", out_dir, "Output directory")->required();

  auto* sweep = app.add_subcommand("sweep", "Sweep one configuration key");
  sweep->add_option("--config", config_path, "Base configuration file")->required();
  sweep->add_option("--param", param, "Dotted key, e.g. dissipation.kappa")->required();
  sweep->add_option("--values", values, "Comma-separated values")->required();
  sweep->add_option("--out", out_dir, "Directory for relative output paths");

  auto* oracle = app.add_subcommand(
      "oracle", "Compare the single-excitation oracle with the full RWA pipeline");
  oracle->add_option("--compare", compare_path, "Configuration file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return run_configs({scenarios::load_config(config_path)}, out_dir);
    if (*pre) return run_configs(scenarios::preset(preset_name), out_dir);
    if (*sweep) {
      return run_configs(scenarios::make_sweep(scenarios::load_config(config_path),
                                               param, split_values(values)),
                         out_dir);
    }
    if (*oracle) return oracle_compare(compare_path);
  } catch (const evolution::PhysicalityError& e) {
    std::cerr << "physicality abort: " << e.what() << '\n';
    return kExitPhysicality;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
