// Copyright 2026 The qoct Authors
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

// Run configuration: flat "dotted.key = value" lines, '#' starts a comment.
//
//   grid.x_max = 20
//   grid.n_points = 256
//   time.T = 400
//   time.dt = 0.005
//   scheme.kind = combined
//   scheme.e0 = 0.16
//   filter.kind = gaussian_pass
//   filter.centers = w02, w12     # numbers or transition tokens wMN
//
// Transition tokens are resolved against the computed eigenset.

#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qoct/error.hpp"
#include "qoct/filters.hpp"
#include "qoct/grid.hpp"
#include "qoct/model.hpp"
#include "qoct/oct.hpp"
#include "qoct/stationary.hpp"

namespace qoct {

class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

/// A frequency given either numerically or as a transition wMN = E_M - E_N.
struct FrequencyRef {
  double value = 0.0;
  int upper = -1;
  int lower = -1;

  bool symbolic() const { return upper >= 0; }
  double resolve(const EigenSet& e) const {
    if (!symbolic()) return value;
    if (static_cast<std::size_t>(std::max(upper, lower)) >= e.size())
      throw ConfigError("transition w" + std::to_string(upper) + std::to_string(lower) +
                        " needs more states than eigen.n_states");
    return std::abs(e.energies[static_cast<std::size_t>(upper)] - e.energies[static_cast<std::size_t>(lower)]);
  }
};

struct RunConfig {
  double x_max = 30.0;
  std::size_t n_points = 512;
  double T = 400.0;
  double dt = 0.001;
  PotentialParams potential;
  double guess_amplitude = -0.2;

  std::string scheme = "fixed_fluence";  // fixed_fluence | spectral | combined
  double e0 = 0.080;
  double alpha = 0.05;

  std::string filter = "all_pass";  // all_pass | gaussian_pass | gaussian_stop | band | single_bin
  std::vector<FrequencyRef> centers;
  double gamma = 500.0;
  double omega_a = 0.0;
  double omega_b = 0.0;

  std::string target = "projection";  // projection | weighted | local_density
  std::size_t target_index = 1;
  std::vector<std::pair<std::size_t, double>> target_weights;
  double target_x0 = 0.0;
  double target_width = 0.0;  // 0: two grid spacings
  std::size_t initial_state = 0;

  std::size_t max_iters = 1000;
  double stop_yield = 0.9999;
  std::size_t stride = 100;

  std::size_t n_states = 5;
  double dt_imag = 0.01;
  std::size_t max_relax_steps = 1'000'000;

  std::string output_dir = "out";

  Grid grid() const { return Grid::symmetric(n_points, x_max); }
  TimeGrid time_grid() const { return TimeGrid::make(T, dt); }

  EigenSolveOptions eigen_options() const {
    EigenSolveOptions o;
    o.relaxation.dt_imag = dt_imag;
    o.relaxation.max_steps = max_relax_steps;
    return o;
  }

  /// Checks every precondition that does not need the eigenset.
  void validate() const {
    (void)grid();
    (void)time_grid();
    potential.validate();
    if (n_states < 1 || n_states > EigenSolveOptions::kMaxStates)
      throw ConfigError("eigen.n_states must be in [1, " + std::to_string(EigenSolveOptions::kMaxStates) + "]");
    if (!(dt_imag > 0.0)) throw ConfigError("eigen.dt_imag must be positive");
    if (max_iters < 1) throw ConfigError("run.max_iters must be >= 1");
    if (stride < 1) throw ConfigError("run.stride must be >= 1");
    if (scheme != "fixed_fluence" && scheme != "spectral" && scheme != "combined")
      throw ConfigError("scheme.kind must be fixed_fluence, spectral or combined, got '" + scheme + "'");
    if (scheme != "spectral" && !(e0 > 0.0)) throw ConfigError("scheme.e0 must be positive");
    if (scheme == "spectral" && !(alpha > 0.0)) throw ConfigError("scheme.alpha must be positive");
    if (filter == "gaussian_pass" && centers.empty()) throw ConfigError("filter.centers required for gaussian_pass");
    if ((filter == "gaussian_stop" || filter == "single_bin") && centers.size() != 1)
      throw ConfigError("filter.centers must hold exactly one frequency for " + filter);
    if ((filter == "gaussian_pass" || filter == "gaussian_stop") && !(gamma > 0.0))
      throw ConfigError("filter.gamma must be positive");
    if (filter == "band" && !(omega_a >= 0.0 && omega_a < omega_b))
      throw ConfigError("filter.omega_a/omega_b must satisfy 0 <= omega_a < omega_b");
    if (filter != "all_pass" && filter != "gaussian_pass" && filter != "gaussian_stop" && filter != "band" &&
        filter != "single_bin")
      throw ConfigError("unknown filter.kind '" + filter + "'");
    if (target != "projection" && target != "weighted" && target != "local_density")
      throw ConfigError("unknown target.kind '" + target + "'");
    if (target == "weighted" && target_weights.empty()) throw ConfigError("target.weights required for weighted target");
    if (target_width < 0.0) throw ConfigError("target.width must be positive");
    const std::size_t needed = std::max(initial_state, target == "projection" ? target_index : 0);
    if (needed >= n_states) throw ConfigError("initial/target state index exceeds eigen.n_states");
    for (const auto& [k, w] : target_weights)
      if (k >= n_states) throw ConfigError("target.weights index exceeds eigen.n_states");
    for (const auto& c : centers)
      if (c.symbolic() && static_cast<std::size_t>(std::max(c.upper, c.lower)) >= n_states)
        throw ConfigError("filter.centers transition exceeds eigen.n_states");
    if (guess_amplitude == 0.0)
      throw ConfigError("guess.amplitude = 0 rejected: a zero field is a stationary point of the functional "
                        "(initial and target states are orthogonal) and the iteration can get stuck");
  }

  FilterSpec filter_spec(const EigenSet& e) const {
    if (filter == "all_pass") return AllPass{};
    if (filter == "band") return Band{omega_a, omega_b};
    if (filter == "gaussian_stop") return GaussianStop{centers.at(0).resolve(e), gamma};
    if (filter == "single_bin") return single_bin(centers.at(0).resolve(e), time_grid());
    GaussianPass p;
    p.gamma = gamma;
    for (const auto& c : centers) p.centers.push_back(c.resolve(e));
    return p;
  }

  TargetSpec target_spec() const {
    if (target == "weighted") return WeightedProjections{target_weights};
    if (target == "local_density") {
      const Grid g = grid();
      return target_width > 0.0 ? LocalDensity{target_x0, target_width} : LocalDensity::sharp(target_x0, g);
    }
    return Projection{target_index};
  }

  Scheme scheme_spec(const EigenSet& e) const {
    if (scheme == "spectral") return SpectralPenalty{alpha, filter_spec(e)};
    if (scheme == "combined") return Combined{e0, filter_spec(e)};
    return FixedFluence{e0};
  }

  OctConfig oct_config(const EigenSet& e) const {
    OctConfig c;
    c.scheme = scheme_spec(e);
    c.target = target_spec();
    c.guess = Field::constant(time_grid(), guess_amplitude);
    c.initial_state = initial_state;
    c.max_iters = max_iters;
    c.stop_yield = stop_yield;
    c.sample_stride = stride;
    return c;
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    auto tok = trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (!tok.empty()) out.push_back(std::move(tok));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::vector<std::string> split_lines(std::string_view s) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= s.size()) {
    const auto pos = s.find('\n', start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline double parse_double(const std::string& v, const std::string& key) {
  double out = 0.0;
  const char* end = v.data() + v.size();
  auto [p, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || p != end || !std::isfinite(out))
    throw ConfigError("'" + key + "': expected a number, got '" + v + "'");
  return out;
}

inline std::size_t parse_count(const std::string& v, const std::string& key) {
  // accepts 1e6 style as well as plain integers
  const double d = parse_double(v, key);
  if (d < 0.0 || d != std::floor(d) || d > 1e15) throw ConfigError("'" + key + "': expected a non-negative integer");
  return static_cast<std::size_t>(d);
}

inline FrequencyRef parse_frequency(const std::string& v, const std::string& key) {
  if (v.size() == 3 && (v[0] == 'w' || v[0] == 'W') && std::isdigit(static_cast<unsigned char>(v[1])) &&
      std::isdigit(static_cast<unsigned char>(v[2]))) {
    FrequencyRef r;
    r.upper = std::max(v[1], v[2]) - '0';
    r.lower = std::min(v[1], v[2]) - '0';
    if (r.upper == r.lower) throw ConfigError("'" + key + "': transition needs two different states");
    return r;
  }
  return {parse_double(v, key), -1, -1};
}

}  // namespace detail

/// Applies one key = value assignment.
inline void set_option(RunConfig& c, const std::string& key, const std::string& value) {
  using detail::parse_count;
  using detail::parse_double;
  static const std::map<std::string, std::function<void(RunConfig&, const std::string&)>> setters = {
      {"grid.x_max", [](RunConfig& c, const std::string& v) { c.x_max = parse_double(v, "grid.x_max"); }},
      {"grid.n_points", [](RunConfig& c, const std::string& v) { c.n_points = parse_count(v, "grid.n_points"); }},
      {"time.T", [](RunConfig& c, const std::string& v) { c.T = parse_double(v, "time.T"); }},
      {"time.dt", [](RunConfig& c, const std::string& v) { c.dt = parse_double(v, "time.dt"); }},
      {"potential.omega0", [](RunConfig& c, const std::string& v) { c.potential.omega0 = parse_double(v, "potential.omega0"); }},
      {"potential.B", [](RunConfig& c, const std::string& v) { c.potential.B = parse_double(v, "potential.B"); }},
      {"potential.beta", [](RunConfig& c, const std::string& v) { c.potential.beta = parse_double(v, "potential.beta"); }},
      {"guess.amplitude", [](RunConfig& c, const std::string& v) { c.guess_amplitude = parse_double(v, "guess.amplitude"); }},
      {"scheme.kind", [](RunConfig& c, const std::string& v) { c.scheme = v; }},
      {"scheme.e0", [](RunConfig& c, const std::string& v) { c.e0 = parse_double(v, "scheme.e0"); }},
      {"scheme.alpha", [](RunConfig& c, const std::string& v) { c.alpha = parse_double(v, "scheme.alpha"); }},
      {"filter.kind", [](RunConfig& c, const std::string& v) { c.filter = v; }},
      {"filter.centers",
       [](RunConfig& c, const std::string& v) {
         c.centers.clear();
         for (const auto& tok : detail::split(v, ',')) c.centers.push_back(detail::parse_frequency(tok, "filter.centers"));
       }},
      {"filter.gamma", [](RunConfig& c, const std::string& v) { c.gamma = parse_double(v, "filter.gamma"); }},
      {"filter.omega_a", [](RunConfig& c, const std::string& v) { c.omega_a = parse_double(v, "filter.omega_a"); }},
      {"filter.omega_b", [](RunConfig& c, const std::string& v) { c.omega_b = parse_double(v, "filter.omega_b"); }},
      {"target.kind", [](RunConfig& c, const std::string& v) { c.target = v; }},
      {"target.index", [](RunConfig& c, const std::string& v) { c.target_index = parse_count(v, "target.index"); }},
      {"target.weights",
       [](RunConfig& c, const std::string& v) {
         c.target_weights.clear();
         for (const auto& tok : detail::split(v, ',')) {
           const auto parts = detail::split(tok, ':');
           if (parts.size() != 2) throw ConfigError("target.weights: expected index:weight pairs, got '" + tok + "'");
           c.target_weights.emplace_back(parse_count(parts[0], "target.weights"), parse_double(parts[1], "target.weights"));
         }
       }},
      {"target.x0", [](RunConfig& c, const std::string& v) { c.target_x0 = parse_double(v, "target.x0"); }},
      {"target.width", [](RunConfig& c, const std::string& v) { c.target_width = parse_double(v, "target.width"); }},
      {"initial.state", [](RunConfig& c, const std::string& v) { c.initial_state = parse_count(v, "initial.state"); }},
      {"run.max_iters", [](RunConfig& c, const std::string& v) { c.max_iters = parse_count(v, "run.max_iters"); }},
      {"run.stop_yield", [](RunConfig& c, const std::string& v) { c.stop_yield = parse_double(v, "run.stop_yield"); }},
      {"run.stride", [](RunConfig& c, const std::string& v) { c.stride = parse_count(v, "run.stride"); }},
      {"eigen.n_states", [](RunConfig& c, const std::string& v) { c.n_states = parse_count(v, "eigen.n_states"); }},
      {"eigen.dt_imag", [](RunConfig& c, const std::string& v) { c.dt_imag = parse_double(v, "eigen.dt_imag"); }},
      {"eigen.max_relax_steps",
       [](RunConfig& c, const std::string& v) { c.max_relax_steps = parse_count(v, "eigen.max_relax_steps"); }},
      {"output.dir", [](RunConfig& c, const std::string& v) { c.output_dir = v; }},
  };
  const auto it = setters.find(key);
  if (it == setters.end()) throw ConfigError("unknown key '" + key + "'");
  it->second(c, value);
}

inline RunConfig parse_config(std::string_view text, RunConfig base = {}) {
  std::size_t lineno = 0;
  for (const auto& raw : detail::split_lines(text)) {
    ++lineno;
    std::string line = raw;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
    const auto key = detail::trim(std::string_view(line).substr(0, eq));
    const auto value = detail::trim(std::string_view(line).substr(eq + 1));
    if (key.empty() || value.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
    try {
      set_option(base, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return base;
}

inline RunConfig load_config(const std::filesystem::path& path, RunConfig base = {}) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config(ss.str(), std::move(base));
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

}  // namespace qoct
