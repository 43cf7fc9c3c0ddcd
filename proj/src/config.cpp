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

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "nanomech/scenarios.hpp"

namespace nanomech::scenarios {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& value) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(value.c_str(), &end);
  if (value.empty() || end != value.c_str() + value.size() || errno != 0) {
    throw ConfigError("config: " + key + " expects a number, got '" + value + "'");
  }
  return v;
}

std::size_t to_count(const std::string& key, const std::string& value) {
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(value.c_str(), &end, 10);
  if (value.empty() || end != value.c_str() + value.size() || errno != 0 ||
      v < 0) {
    throw ConfigError("config: " + key + " expects a non-negative integer, got '" +
                      value + "'");
  }
  return static_cast<std::size_t>(v);
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("config: " + key + " expects true/false, got '" + value + "'");
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt_bool(bool b) { return b ? "true" : "false"; }

ResonatorInit parse_resonator(const std::string& value) {
  ResonatorInit r;
  if (value == "vacuum") return r;
  const auto colon = value.find(':');
  const std::string kind = value.substr(0, colon);
  if (colon == std::string::npos) {
    throw ConfigError("config: initial.resonator must be vacuum, fock:N or "
                      "thermal:NBAR (got '" + value + "')");
  }
  const std::string arg = value.substr(colon + 1);
  if (kind == "fock") {
    r.kind = ResonatorInit::Kind::fock;
    r.fock = to_count("initial.resonator", arg);
  } else if (kind == "thermal") {
    r.kind = ResonatorInit::Kind::thermal;
    r.n_bar = to_double("initial.resonator", arg);
  } else {
    throw ConfigError("config: unknown resonator state '" + value + "'");
  }
  return r;
}

std::string format_resonator(const ResonatorInit& r) {
  switch (r.kind) {
    case ResonatorInit::Kind::vacuum: return "vacuum";
    case ResonatorInit::Kind::fock: return "fock:" + std::to_string(r.fock);
    case ResonatorInit::Kind::thermal: return "thermal:" + fmt(r.n_bar);
  }
  return "vacuum";
}

MeasureSpec parse_measure(const std::string& token) {
  const auto colon = token.find(':');
  const std::string kind = token.substr(0, colon);
  MeasureSpec m;
  if (kind == "qubit_resonator_tangle") {
    m.kind = MeasureSpec::Kind::qubit_resonator_tangle;
  } else if (kind == "pairwise_tangles") {
    m.kind = MeasureSpec::Kind::pairwise_tangles;
  } else if (kind == "i_tangle") {
    m.kind = MeasureSpec::Kind::i_tangle;
  } else if (kind == "entropy") {
    m.kind = MeasureSpec::Kind::entropy;
  } else {
    throw ConfigError("config: unknown measure '" + token + "'");
  }
  if (colon != std::string::npos) {
    m.site = to_count("output.measures", token.substr(colon + 1));
  }
  return m;
}

std::string format_measure(const MeasureSpec& m) {
  switch (m.kind) {
    case MeasureSpec::Kind::qubit_resonator_tangle: return "qubit_resonator_tangle";
    case MeasureSpec::Kind::pairwise_tangles: return "pairwise_tangles";
    case MeasureSpec::Kind::i_tangle: return "i_tangle:" + std::to_string(m.site);
    case MeasureSpec::Kind::entropy: return "entropy:" + std::to_string(m.site);
  }
  return {};
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "output.name",
      "model.n_qubits",
      "model.nu",
      "model.omega",
      "model.v_gate",
      "model.e_j",
      "model.chi",
      "dissipation.kappa",
      "dissipation.gamma",
      "dissipation.gamma_cross",
      "dissipation.n_bar",
      "numerics.n_max",
      "numerics.t_max",
      "numerics.n_points",
      "numerics.method",
      "numerics.rwa",
      "numerics.atol",
      "numerics.convergence_check",
      "numerics.n_max_limit",
      "numerics.convergence_tol",
      "initial.qubits",
      "initial.eq5.a",
      "initial.eq5.b",
      "initial.eq5.c",
      "initial.eq5.f_re",
      "initial.eq5.f_im",
      "initial.eq5.normalize",
      "initial.resonator",
      "output.csv",
      "output.svg",
      "output.measures",
  };
  return keys;
}

void set_config_value(ScenarioConfig& cfg, const std::string& key,
                      const std::string& raw) {
  const std::string value = trim(raw);
  auto& m = cfg.model;
  if (key == "output.name") cfg.name = value;
  else if (key == "model.n_qubits") m.n_qubits = to_count(key, value);
  else if (key == "model.nu") m.nu = to_double(key, value);
  else if (key == "model.omega") m.omega = to_double(key, value);
  else if (key == "model.v_gate") m.v_gate = to_double(key, value);
  else if (key == "model.e_j") m.e_j = to_double(key, value);
  else if (key == "model.chi") m.chi = to_double(key, value);
  else if (key == "dissipation.kappa") m.kappa = to_double(key, value);
  else if (key == "dissipation.gamma") m.gamma = to_double(key, value);
  else if (key == "dissipation.gamma_cross") m.gamma_cross = to_double(key, value);
  else if (key == "dissipation.n_bar") m.n_bar = to_double(key, value);
  else if (key == "numerics.n_max") m.n_max = to_count(key, value);
  else if (key == "numerics.t_max") cfg.t_max = to_double(key, value);
  else if (key == "numerics.n_points") cfg.n_points = to_count(key, value);
  else if (key == "numerics.method") {
    try {
      cfg.numerics.method = evolution::method_from_string(value);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config: ") + e.what());
    }
  }
  else if (key == "numerics.rwa") m.rwa = to_bool(key, value);
  else if (key == "numerics.atol") cfg.numerics.atol = to_double(key, value);
  else if (key == "numerics.convergence_check")
    cfg.numerics.convergence_check = to_bool(key, value);
  else if (key == "numerics.n_max_limit")
    cfg.numerics.n_max_limit = to_count(key, value);
  else if (key == "numerics.convergence_tol")
    cfg.numerics.convergence_tol = to_double(key, value);
  else if (key == "initial.qubits") {
    if (value == "mixed_eq5") {
      cfg.qubits.kind = QubitInit::Kind::mixed_eq5;
      cfg.qubits.basis.clear();
    } else {
      cfg.qubits.kind = QubitInit::Kind::basis;
      cfg.qubits.basis = value;
    }
  }
  else if (key == "initial.eq5.a") cfg.qubits.eq5.a = to_double(key, value);
  else if (key == "initial.eq5.b") cfg.qubits.eq5.b = to_double(key, value);
  else if (key == "initial.eq5.c") cfg.qubits.eq5.c = to_double(key, value);
  else if (key == "initial.eq5.f_re")
    cfg.qubits.eq5.f.real(to_double(key, value));
  else if (key == "initial.eq5.f_im")
    cfg.qubits.eq5.f.imag(to_double(key, value));
  else if (key == "initial.eq5.normalize")
    cfg.qubits.eq5.normalize = to_bool(key, value);
  else if (key == "initial.resonator") cfg.resonator = parse_resonator(value);
  else if (key == "output.csv") cfg.csv = value;
  else if (key == "output.svg") cfg.svg = value;
  else if (key == "output.measures") {
    cfg.measures.clear();
    std::stringstream ss(value);
    std::string token;
    while (std::getline(ss, token, ',')) {
      token = trim(token);
      if (!token.empty()) cfg.measures.push_back(parse_measure(token));
    }
  }
  else throw ConfigError("config: unknown key '" + key + "'");
}

ScenarioConfig parse_config(const std::string& text) {
  ScenarioConfig cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(line_no) +
                        ": expected 'key = value'");
    }
    try {
      set_config_value(cfg, trim(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError("config line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const ScenarioConfig& cfg) {
  const auto& m = cfg.model;
  std::ostringstream out;
  auto line = [&](const std::string& k, const std::string& v) {
    out << k << " = " << v << '\n';
  };
  line("output.name", cfg.name);
  line("model.n_qubits", std::to_string(m.n_qubits));
  line("model.nu", fmt(m.nu));
  line("model.omega", fmt(m.omega));
  line("model.v_gate", fmt(m.v_gate));
  line("model.e_j", fmt(m.e_j));
  line("model.chi", fmt(m.chi));
  line("dissipation.kappa", fmt(m.kappa));
  line("dissipation.gamma", fmt(m.gamma));
  line("dissipation.gamma_cross", fmt(m.gamma_cross));
  line("dissipation.n_bar", fmt(m.n_bar));
  line("numerics.n_max", std::to_string(m.n_max));
  line("numerics.t_max", fmt(cfg.t_max));
  line("numerics.n_points", std::to_string(cfg.n_points));
  line("numerics.method", evolution::to_string(cfg.numerics.method));
  line("numerics.rwa", fmt_bool(m.rwa));
  line("numerics.atol", fmt(cfg.numerics.atol));
  line("numerics.convergence_check", fmt_bool(cfg.numerics.convergence_check));
  line("numerics.n_max_limit", std::to_string(cfg.numerics.n_max_limit));
  line("numerics.convergence_tol", fmt(cfg.numerics.convergence_tol));
  line("initial.qubits", cfg.qubits.kind == QubitInit::Kind::mixed_eq5
                             ? std::string("mixed_eq5")
                             : cfg.qubits.basis);
  line("initial.eq5.a", fmt(cfg.qubits.eq5.a));
  line("initial.eq5.b", fmt(cfg.qubits.eq5.b));
  line("initial.eq5.c", fmt(cfg.qubits.eq5.c));
  line("initial.eq5.f_re", fmt(cfg.qubits.eq5.f.real()));
  line("initial.eq5.f_im", fmt(cfg.qubits.eq5.f.imag()));
  line("initial.eq5.normalize", fmt_bool(cfg.qubits.eq5.normalize));
  line("initial.resonator", format_resonator(cfg.resonator));
  line("output.csv", cfg.csv);
  line("output.svg", cfg.svg);
  std::string measures;
  for (const auto& ms : cfg.measures) {
    if (!measures.empty()) measures += ",";
    measures += format_measure(ms);
  }
  line("output.measures", measures);
  return out.str();
}

void ScenarioConfig::validate() const {
  try {
    model.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!(model.omega > 0.0)) {
    throw ConfigError("config: model.omega must be positive (it sets the time unit)");
  }
  if (n_points < 2) throw ConfigError("config: numerics.n_points must be >= 2");
  if (!(t_max > 0.0)) throw ConfigError("config: numerics.t_max must be positive");
  if (qubits.kind == QubitInit::Kind::basis) {
    if (qubits.basis.size() != model.n_qubits) {
      throw ConfigError("config: initial.qubits '" + qubits.basis + "' must have one "
                        "letter per qubit (" + std::to_string(model.n_qubits) + ")");
    }
    for (char c : qubits.basis) {
      if (c != 'e' && c != 'g') {
        throw ConfigError("config: initial.qubits letters must be 'e' or 'g'");
      }
    }
  } else if (model.n_qubits != 2) {
    throw ConfigError("config: mixed_eq5 initial state requires model.n_qubits = 2");
  }
  if (resonator.kind == ResonatorInit::Kind::fock && resonator.fock > model.n_max) {
    throw ConfigError("config: fock:" + std::to_string(resonator.fock) +
                      " exceeds numerics.n_max = " + std::to_string(model.n_max));
  }
  if (resonator.kind == ResonatorInit::Kind::thermal && !(resonator.n_bar >= 0.0)) {
    throw ConfigError("config: thermal resonator needs n_bar >= 0");
  }
  for (const auto& m : effective_measures()) {
    switch (m.kind) {
      case MeasureSpec::Kind::pairwise_tangles:
        if (model.n_qubits < 2) {
          throw ConfigError("config: pairwise_tangles needs at least two qubits");
        }
        break;
      case MeasureSpec::Kind::i_tangle:
        if (model.n_qubits < 2 || m.site >= model.n_qubits) {
          throw ConfigError("config: i_tangle:k needs k to be a qubit and N >= 2");
        }
        break;
      case MeasureSpec::Kind::entropy:
        if (m.site > model.n_qubits) {
          throw ConfigError("config: entropy subsystem out of range");
        }
        break;
      case MeasureSpec::Kind::qubit_resonator_tangle:
        break;
    }
  }
}

model::ModelParams ScenarioConfig::normalized_model() const {
  model::ModelParams p = model;
  const double w = model.omega;
  p.nu /= w;
  p.omega = 1.0;
  p.v_gate /= w;
  p.e_j /= w;
  p.chi /= w;
  p.kappa /= w;
  p.gamma /= w;
  p.gamma_cross /= w;
  return p;
}

std::vector<MeasureSpec> ScenarioConfig::effective_measures() const {
  if (!measures.empty()) return measures;
  std::vector<MeasureSpec> out;
  if (model.n_qubits == 1) {
    out.push_back({MeasureSpec::Kind::qubit_resonator_tangle, 0});
  } else {
    out.push_back({MeasureSpec::Kind::pairwise_tangles, 0});
  }
  out.push_back({MeasureSpec::Kind::entropy, 0});
  return out;
}

}  // namespace nanomech::scenarios
