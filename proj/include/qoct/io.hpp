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

// CSV artifacts. Every file starts with a one-line header; dimensioned
// columns carry "(a.u.)". Numbers are written as %.10e.

#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "qoct/analysis.hpp"
#include "qoct/error.hpp"
#include "qoct/field.hpp"
#include "qoct/filters.hpp"
#include "qoct/model.hpp"
#include "qoct/oct.hpp"
#include "qoct/stationary.hpp"

namespace qoct::io {

inline std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10e", v);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    out_.open(path);
    if (!out_) throw Error("cannot open " + path.string() + " for writing");
    row(header);
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out_ << (i ? "," : "") << cells[i];
    out_ << '\n';
  }
  void row(std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
      out_ << (first ? "" : ",") << num(v);
      first = false;
    }
    out_ << '\n';
  }
  void row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) out_ << (i ? "," : "") << num(values[i]);
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

inline void write_field(const std::filesystem::path& path, const Field& f) {
  CsvWriter w(path, {"t (a.u.)", "eps (a.u.)"});
  const auto& tg = f.time_grid();
  for (std::size_t n = 0; n < f.size(); ++n) w.row({tg.t(n), f[n]});
}

/// Reads a two-column t,eps file; t must start at 0 and be uniformly spaced.
inline Field read_field(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open field file " + path.string());
  std::string line;
  std::vector<double> t, eps;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw InvalidArgument(path.string() + ":" + std::to_string(lineno) + ": expected t,eps");
    try {
      const double a = std::stod(line.substr(0, comma));
      const double b = std::stod(line.substr(comma + 1));
      t.push_back(a);
      eps.push_back(b);
    } catch (const std::invalid_argument&) {
      if (t.empty() && lineno == 1) continue;  // header
      throw InvalidArgument(path.string() + ":" + std::to_string(lineno) + ": not a number");
    }
  }
  if (t.size() < 2) throw InvalidArgument(path.string() + ": need at least two samples");
  const double dt = t[1] - t[0];
  if (t[0] != 0.0 || !(dt > 0.0)) throw InvalidArgument(path.string() + ": time axis must start at 0 and increase");
  for (std::size_t n = 1; n < t.size(); ++n)
    if (std::abs(t[n] - static_cast<double>(n) * dt) > 1e-6 * dt)
      throw GridMismatch(path.string() + ": non-uniform time axis at row " + std::to_string(n));
  const auto tg = TimeGrid::make(t.back(), dt);
  if (tg.n_samples() != t.size()) throw GridMismatch(path.string() + ": inconsistent time axis");
  return Field(tg, std::move(eps));
}

inline void write_spectrum(const std::filesystem::path& path, const Field& f) {
  CsvWriter w(path, {"omega (a.u.)", "re (a.u.)", "im (a.u.)", "abs (a.u.)"});
  for (const auto& s : spectrum(f)) w.row({s.omega, s.amplitude.real(), s.amplitude.imag(), std::abs(s.amplitude)});
}

inline void write_filter(const std::filesystem::path& path, const FilterSpec& filter, const TimeGrid& tg) {
  CsvWriter w(path, {"omega (a.u.)", "f"});
  const std::size_t n = tg.n_samples();
  const std::size_t neg = n / 2;
  for (std::size_t i = 0; i < n; ++i) {
    const double om = bin_frequency((i + n - neg) % n, n, tg.dt());
    w.row({om, evaluate(filter, om)});
  }
}

inline void write_convergence(const std::filesystem::path& path, const std::vector<IterationRecord>& records) {
  CsvWriter w(path, {"k", "yield", "fluence (a.u.)", "alpha (a.u.)"});
  for (const auto& r : records) w.row({static_cast<double>(r.k), r.yield, r.fluence, r.alpha});
}

inline void write_eigenset(const std::filesystem::path& dir, const EigenSet& e) {
  {
    CsvWriter w(dir / "energies.csv", {"n", "E_n (a.u.)"});
    for (std::size_t n = 0; n < e.size(); ++n) w.row({static_cast<double>(n), e.energies[n]});
  }
  const auto omega = excitation_matrix(e);
  {
    CsvWriter w(dir / "excitations.csv", {"m", "n", "omega_mn (a.u.)"});
    for (std::size_t m = 0; m < e.size(); ++m)
      for (std::size_t n = 0; n < m; ++n) w.row({static_cast<double>(m), static_cast<double>(n), omega(m, n)});
  }
  const auto mu = dipole_matrix(e);
  {
    CsvWriter w(dir / "dipoles.csv", {"m", "n", "mu_mn (a.u.)"});
    for (std::size_t m = 0; m < e.size(); ++m)
      for (std::size_t n = 0; n <= m; ++n) w.row({static_cast<double>(m), static_cast<double>(n), mu(m, n)});
  }
  {
    std::vector<std::string> header{"x (a.u.)"};
    for (std::size_t n = 0; n < e.size(); ++n) header.push_back("phi_" + std::to_string(n) + " (a.u.)");
    CsvWriter w(dir / "states.csv", header);
    if (e.size() == 0) return;
    const Grid& g = e.states[0].grid();
    for (std::size_t i = 0; i < g.size(); ++i) {
      std::vector<double> row{g.x(i)};
      for (const auto& s : e.states) row.push_back(s[i].real());
      w.row(row);
    }
  }
}

inline void write_occupations(const std::filesystem::path& path, const OccupationSeries& s) {
  const std::size_t n_states = s.occupations.empty() ? 0 : s.occupations.front().size();
  std::vector<std::string> header{"t (a.u.)"};
  for (std::size_t n = 0; n < n_states; ++n) header.push_back("p" + std::to_string(n));
  header.push_back("residual");
  CsvWriter w(path, header);
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    std::vector<double> row{s.times[i]};
    row.insert(row.end(), s.occupations[i].begin(), s.occupations[i].end());
    row.push_back(s.residual[i]);
    w.row(row);
  }
}

inline void write_dressed(const std::filesystem::path& path, const DressedAnalysis& d) {
  CsvWriter w(path, {"t (a.u.)", "d0", "d1"});
  for (std::size_t i = 0; i < d.times.size(); ++i) w.row({d.times[i], d.d0[i], d.d1[i]});
}

}  // namespace qoct::io
