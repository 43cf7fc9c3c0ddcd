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

#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "nanomech/scenarios.hpp"
#include "support.hpp"

using namespace nanomech;
using namespace nanomech::scenarios;

namespace {

ScenarioConfig quick(std::size_t n_qubits) {
  ScenarioConfig cfg;
  cfg.name = "quick";
  cfg.model.n_qubits = n_qubits;
  cfg.model.n_max = 3;
  cfg.model.kappa = 0.1;
  cfg.qubits.basis = std::string(n_qubits, 'e');
  cfg.t_max = 2.0;
  cfg.n_points = 41;
  return cfg;
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("nanomech_test_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

std::string body(const std::string& csv) { return csv.substr(0, csv.find("\n#")); }

}  // namespace

TEST_CASE("mixed two-qubit state") {
  MixedEq5 m;
  const auto ee = eq5_matrix(m);
  CHECK(linalg::approx_equal(ee, testing::basis_projector(4, 0), 0.0));

  m = {0.3, 0.2, 0.2, {0.0, 0.0}, false};
  CHECK_THROWS_WITH_AS(eq5_matrix(m), doctest::Contains("1.3999999999999999"), ConfigError);
  m.normalize = true;
  const auto normalized = eq5_matrix(m);
  CHECK(normalized.trace().real() == doctest::Approx(1.0));
  CHECK(normalized(3, 3).real() == doctest::Approx(0.7 / 1.4));

  m.f = {0.5, 0.1};
  CHECK_THROWS_WITH_AS(eq5_matrix(m), doctest::Contains("eigenvalue"), ConfigError);

  MixedEq5 coherent{0.0, 0.0, 0.0, {0.0, 0.0}, false};
  CHECK(linalg::approx_equal(eq5_matrix(coherent), testing::basis_projector(4, 3), 0.0));
}

TEST_CASE("truncated thermal populations") {
  double lost = 0.0;
  const auto p = thermal_populations(0.5, 10, &lost);
  CHECK(p.size() == 11);
  CHECK(lost == doctest::Approx(std::pow(1.0 / 3.0, 11)));
  CHECK(p[0] == doctest::Approx((2.0 / 3.0) / (1.0 - lost)));
  CHECK(p[1] / p[0] == doctest::Approx(1.0 / 3.0));
  double sum = 0.0;
  for (double v : p) sum += v;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(thermal_populations(0.0, 4)[0] == 1.0);
  CHECK_THROWS(thermal_populations(-0.1, 4));
}

TEST_CASE("initial states") {
  auto cfg = quick(2);
  cfg.qubits.basis = "eg";
  cfg.resonator = {ResonatorInit::Kind::fock, 2, 0.0};
  const auto init = build_initial_state(cfg);
  // |e,g,2> = (0 * 2 + 1) * 4 + 2
  CHECK(init.rho.matrix()(6, 6).real() == 1.0);

  cfg.resonator = {ResonatorInit::Kind::thermal, 0, 0.5};
  const auto thermal = build_initial_state(cfg);
  CHECK(thermal.truncated_mass == doctest::Approx(std::pow(1.0 / 3.0, 4)));
  CHECK(thermal.rho.trace_deviation() < 1e-15);

  cfg.resonator = {ResonatorInit::Kind::fock, 4, 0.0};
  CHECK_THROWS_AS(build_initial_state(cfg), ConfigError);

  auto mixed = quick(3);
  mixed.qubits.kind = QubitInit::Kind::mixed_eq5;
  CHECK_THROWS_AS(build_initial_state(mixed), ConfigError);

  auto short_grid = quick(1);
  short_grid.n_points = 1;
  CHECK_THROWS_AS(short_grid.validate(), ConfigError);

  auto wrong_basis = quick(2);
  wrong_basis.qubits.basis = "e";
  CHECK_THROWS_AS(wrong_basis.validate(), ConfigError);
}

TEST_CASE("every preset builds a valid initial state") {
  for (const auto& name : preset_names()) {
    for (const auto& cfg : preset(name)) {
      CAPTURE(cfg.name);
      CHECK_NOTHROW(build_initial_state(cfg));
    }
  }
  CHECK_THROWS_AS(preset("fig8"), ConfigError);
}

TEST_CASE("preset parameters") {
  const auto fig1 = preset("fig1");
  CHECK(fig1.size() == 6);
  CHECK(fig1[0].model.gamma == 0.0);
  CHECK(fig1[0].model.gamma_cross == 0.0);
  CHECK(fig1[0].model.e_j == fig1[0].model.nu);
  CHECK(fig1[2].model.kappa == doctest::Approx(0.1));

  const auto fig4 = preset("fig4");
  REQUIRE(fig4.size() == 3);
  CHECK(fig4[0].model.chi == 30.0);
  CHECK(fig4[1].model.chi == 15.0);
  CHECK(fig4[2].model.chi == 0.01);
  CHECK(fig4[0].qubits.basis == "ee");

  const auto fig5 = preset("fig5");
  REQUIRE(fig5.size() == 3);
  CHECK(fig5[0].model.n_bar == 0.01);
  CHECK(fig5[1].model.n_bar == 0.1);
  CHECK(fig5[2].model.n_bar == 0.5);
  CHECK(fig5[0].model.kappa == 0.0);

  const auto fig3 = preset("fig3");
  CHECK(fig3[2].model.gamma == 0.7);
  CHECK(fig3[0].model.gamma_cross == 0.001);
  CHECK(fig3[0].model.n_bar == 0.5);

  const auto fig6 = preset("fig6");
  CHECK(fig6[0].model.n_qubits == 3);
  CHECK(fig6[0].qubits.basis == "eee");
  CHECK(fig6[0].resonator.kind == ResonatorInit::Kind::thermal);
  CHECK(fig6[0].resonator.n_bar == 0.5);
}

TEST_CASE("config text round trip") {
  for (const auto& name : preset_names()) {
    for (const auto& cfg : preset(name)) {
      const std::string text = serialize_config(cfg);
      const auto parsed = parse_config(text);
      CHECK(parsed == cfg);
      CHECK(serialize_config(parsed) == text);
    }
  }
  const auto cfg = parse_config(
      "# comment\n"
      "model.n_qubits = 2\n"
      "initial.qubits = mixed_eq5\n"
      "initial.eq5.a = 0.5\n"
      "initial.eq5.f_im = 0.25   # trailing\n"
      "initial.resonator = thermal:0.25\n"
      "output.measures = pairwise_tangles, entropy:2\n");
  CHECK(cfg.qubits.kind == QubitInit::Kind::mixed_eq5);
  CHECK(cfg.qubits.eq5.f == std::complex<double>(0.0, 0.25));
  CHECK(cfg.resonator.n_bar == 0.25);
  CHECK(cfg.measures.size() == 2);
  CHECK(cfg.measures[1].site == 2);
  CHECK_THROWS_WITH_AS(parse_config("model.nu = 1\nmodel.bogus = 2\n"),
                       doctest::Contains("line 2"), ConfigError);
  CHECK_THROWS_AS(parse_config("model.nu = ten\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("initial.resonator = squeezed\n"), ConfigError);
}

TEST_CASE("rates and energies are rescaled by the coupling") {
  auto cfg = quick(1);
  cfg.model.omega = 2.0;
  cfg.model.nu = 20.0;
  cfg.model.kappa = 0.4;
  const auto p = cfg.normalized_model();
  CHECK(p.omega == 1.0);
  CHECK(p.nu == 10.0);
  CHECK(p.kappa == doctest::Approx(0.2));
}

TEST_CASE("csv round trip") {
  const std::vector<std::string> cols{"omega_t", "x"};
  const std::vector<std::vector<double>> data{{0.0, 0.1, 1.0 / 3.0}, {1e-300, -2.5, M_PI}};
  const auto text = format_csv(cols, data, {"note: a", "b"});
  const auto t = parse_csv(text);
  CHECK(t.columns == cols);
  CHECK(t.data == data);
  CHECK(t.footer == std::vector<std::string>{"note: a", "b"});
  CHECK_THROWS(format_csv(cols, {{0.0}}, {}));
  CHECK_THROWS(parse_csv("a, b\n1, 2, 3\n"));
}

TEST_CASE("output columns follow the qubit count") {
  const auto one = parse_csv(run_scenario(quick(1), {false, {}}).csv_text);
  CHECK(one.columns == std::vector<std::string>{"omega_t", "tangle_qr", "entropy", "mean_n",
                                                 "trace_dev", "min_eig", "leakage"});
  const auto two = parse_csv(run_scenario(quick(2), {false, {}}).csv_text);
  CHECK(two.columns == std::vector<std::string>{"omega_t", "tangle_q1q2", "entropy",
                                                 "mean_n", "trace_dev", "min_eig"});
  auto three_cfg = quick(3);
  three_cfg.model.n_max = 2;
  three_cfg.n_points = 5;
  three_cfg.t_max = 0.2;
  three_cfg.measures = {{MeasureSpec::Kind::pairwise_tangles, 0},
                        {MeasureSpec::Kind::i_tangle, 1},
                        {MeasureSpec::Kind::entropy, 3}};
  const auto three = run_scenario(three_cfg, {false, {}});
  const auto t3 = parse_csv(three.csv_text);
  CHECK(t3.columns == std::vector<std::string>{"omega_t", "tangle_q1q2", "tangle_q1q3",
                                                "tangle_q2q3", "itangle_q2_rest",
                                                "entropy_s3", "mean_n", "trace_dev",
                                                "min_eig"});
  CHECK(t3.data[0].size() == 5);
  bool labelled = false;
  for (const auto& f : t3.footer) labelled |= f.find("approximate upper bound") != std::string::npos;
  CHECK(labelled);
}

TEST_CASE("fig1 preset emits the documented columns") {
  auto cfg = preset("fig1").front();
  cfg.t_max = 0.5;
  cfg.n_points = 21;
  const auto t = parse_csv(run_scenario(cfg, {false, {}}).csv_text);
  CHECK(t.columns == std::vector<std::string>{"omega_t", "tangle_qr", "entropy", "mean_n",
                                               "trace_dev", "min_eig", "leakage"});
  CHECK(t.data[0][1] == doctest::Approx(0.025));
}

TEST_CASE("runs are deterministic") {
  auto cfg = quick(2);
  cfg.measures = {{MeasureSpec::Kind::pairwise_tangles, 0}, {MeasureSpec::Kind::i_tangle, 0}};
  cfg.n_points = 9;
  const auto a = run_scenario(cfg, {false, {}});
  const auto b = run_scenario(cfg, {false, {}});
  CHECK(body(a.csv_text) == body(b.csv_text));
  CHECK(a.csv_text == b.csv_text);
}

TEST_CASE("footer carries the physicality report and cutoff check") {
  auto cfg = quick(1);
  cfg.numerics.convergence_check = true;
  cfg.numerics.convergence_tol = 1.0;
  const auto r = run_scenario(cfg, {false, {}});
  const auto t = parse_csv(r.csv_text);
  auto has = [&](const std::string& s) {
    return std::any_of(t.footer.begin(), t.footer.end(),
                       [&](const std::string& f) { return f.rfind(s, 0) == 0; });
  };
  CHECK(has("physicality.max_trace_deviation: "));
  CHECK(has("physicality.min_eigenvalue: "));
  CHECK(has("cutoff_converged: true"));
  CHECK(has("max_leakage: "));
  CHECK(r.report.cutoff_converged == std::optional<bool>(true));
  CHECK(r.n_max_used == 3);

  cfg.numerics.convergence_tol = 0.0;
  cfg.numerics.n_max_limit = 7;
  const auto strict = run_scenario(cfg, {false, {}});
  CHECK(strict.report.cutoff_converged == std::optional<bool>(false));
  CHECK(strict.n_max_used == 3);
}

TEST_CASE("sweeps embed the value in names and files") {
  auto base = quick(1);
  base.name = "run";
  base.csv = "out/run.csv";
  const auto sweep = make_sweep(base, "dissipation.kappa", {"0.01", "0.1", "1.0"});
  REQUIRE(sweep.size() == 3);
  CHECK(sweep[0].csv == "out/run_kappa_0.01.csv");
  CHECK(sweep[2].name == "run_kappa_1.0");
  CHECK(sweep[1].model.kappa == 0.1);
  CHECK(sweep[0].svg.empty());
  CHECK_THROWS_AS(make_sweep(base, "model.bogus", {"1"}), ConfigError);

  const auto dir = scratch_dir("sweep");
  const auto results = run_all(sweep, {true, dir});
  CHECK(results.size() == 3);
  for (const char* f : {"run_kappa_0.01.csv", "run_kappa_0.1.csv", "run_kappa_1.0.csv"}) {
    CHECK(std::filesystem::exists(dir / "out" / f));
  }
  std::ifstream in(dir / "out" / "run_kappa_0.1.csv");
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(text == results[1].csv_text);
  std::filesystem::remove_all(dir);
}

TEST_CASE("svg output and file errors") {
  const auto dir = scratch_dir("svg");
  auto cfg = quick(1);
  cfg.svg = "plot.svg";
  const auto r = run_scenario(cfg, {true, dir});
  REQUIRE(r.written.size() == 1);
  std::ifstream in(r.written[0]);
  std::string first;
  std::getline(in, first);
  CHECK(first.rfind("<svg", 0) == 0);

  // A regular file where a directory is needed.
  std::ofstream(dir / "blocker") << "x";
  cfg.svg.clear();
  cfg.csv = "blocker/out.csv";
  CHECK_THROWS_WITH(run_scenario(cfg, {true, dir}), doctest::Contains("blocker"));
  std::filesystem::remove_all(dir);
}
