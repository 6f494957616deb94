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

// qoct command line driver.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "qoct.hpp"

namespace fs = std::filesystem;
using namespace qoct;

namespace {

enum Exit { kOk = 0, kUserError = 1, kEigenFailure = 2, kOptimizationFailure = 3 };

void kv(const std::string& key, double v) { std::cout << key << '=' << io::num(v) << '\n'; }
void kv(const std::string& key, const std::string& v) { std::cout << key << '=' << v << '\n'; }

struct Common {
  std::string config;
  std::string out;

  RunConfig load() const {
    RunConfig c = config.empty() ? RunConfig{} : load_config(config);
    if (!out.empty()) c.output_dir = out;
    c.validate();
    return c;
  }
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "run configuration file")->check(CLI::ExistingFile);
  sub->add_option("--out", c.out, "output directory (overrides output.dir)");
}

struct Problem {
  Hamiltonian h;
  EigenSet eigen;
};

Problem setup(const RunConfig& c) {
  Hamiltonian h = Hamiltonian::double_well(c.grid(), c.potential);
  EigenSet e = solve_eigenset(h, c.n_states, 0.0, c.eigen_options());
  return {std::move(h), std::move(e)};
}

void write_run(const fs::path& dir, const RunConfig& c, const Problem& p, const OctResult& r) {
  io::write_convergence(dir / "convergence.csv", r.records);
  io::write_field(dir / "best_field.csv", r.best_field);
  io::write_spectrum(dir / "best_spectrum.csv", r.best_field);
  if (c.filter != "all_pass") io::write_filter(dir / "filter.csv", c.filter_spec(p.eigen), c.time_grid());
  const auto occ = occupations(p.h, p.eigen.at(c.initial_state), r.best_field, p.eigen, c.stride);
  io::write_occupations(dir / "occupations.csv", occ);
}

void write_dressed(const fs::path& dir, const RunConfig& c, const Problem& p, const Field& f) {
  DressedOptions opt;
  opt.stride = c.stride;
  opt.eigen = c.eigen_options();
  const auto d = dressed_analysis(p.h, f, p.eigen.at(c.initial_state), opt);
  io::write_dressed(dir / "dressed.csv", d);
  kv("epsilon_bar", d.epsilon_bar);
  kv("dressed_gap", d.gap);
  kv("overlap_psi0_dressed0", d.d0.front());
  kv("phase_change", d.phase_change);
}

int cmd_eigen(const Common& common) {
  const RunConfig c = common.load();
  const Problem p = setup(c);
  io::write_eigenset(c.output_dir, p.eigen);
  for (std::size_t n = 0; n < p.eigen.size(); ++n) kv("E" + std::to_string(n), p.eigen.energies[n]);
  return kOk;
}

int cmd_optimize(const Common& common, bool dressed) {
  const RunConfig c = common.load();
  const Problem p = setup(c);
  OctConfig oc = c.oct_config(p.eigen);
  oc.on_iteration = [](const IterationRecord& r, const Field&) {
    std::fprintf(stderr, "k=%zu yield=%.6f fluence=%.6f\n", r.k, r.yield, r.fluence);
  };
  const OctResult r = optimize(oc, p.h, p.eigen);
  write_run(c.output_dir, c, p, r);
  kv("scheme", scheme_name(oc.scheme));
  kv("status", to_string(r.status));
  kv("best_yield", r.best_yield);
  kv("best_iteration", static_cast<double>(r.best_iteration));
  kv("iterations", static_cast<double>(r.records.size()));
  kv("final_fluence", fluence(r.best_field));
  kv("time_average", r.best_field.time_average());
  if (r.failed()) {
    std::cerr << "optimization failed: " << r.message << '\n';
    return kOptimizationFailure;
  }
  if (dressed) write_dressed(c.output_dir, c, p, r.best_field);
  return kOk;
}

std::string value_tag(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

int cmd_scan(const Common& common, const std::string& param, std::vector<double> values, std::optional<double> from,
             std::optional<double> to, std::optional<std::size_t> steps) {
  if (param != "e0") throw ConfigError("scan: only --param e0 is supported");
  if (values.empty()) {
    if (!from || !to || !steps) throw ConfigError("scan: give --values or all of --from/--to/--steps");
    if (*steps < 1) throw ConfigError("scan: --steps must be >= 1");
    for (std::size_t i = 0; i < *steps; ++i)
      values.push_back(*steps == 1 ? *from : *from + (*to - *from) * static_cast<double>(i) / static_cast<double>(*steps - 1));
  } else if (from || to || steps) {
    throw ConfigError("scan: --values cannot be combined with --from/--to/--steps");
  }
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] > 0.0)) throw ConfigError("scan: e0 values must be positive");
    if (i && !(values[i] > values[i - 1])) throw ConfigError("scan: e0 values must be ascending");
  }
  RunConfig base = common.load();
  if (base.scheme == "spectral") throw ConfigError("scan: e0 has no meaning for the spectral scheme");
  const Problem p = setup(base);

  std::size_t threads = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("QOCT_THREADS")) {
    try {
      const long n = std::stol(env);
      if (n < 1) throw std::invalid_argument("");
      threads = static_cast<std::size_t>(n);
    } catch (const std::exception&) {
      throw ConfigError(std::string("QOCT_THREADS must be a positive integer, got '") + env + "'");
    }
  }
  threads = std::min(threads, values.size());

  std::vector<OctResult> results(values.size());
  std::vector<std::string> errors(values.size());
  std::atomic<std::size_t> next{0};
  std::mutex log;
  auto worker = [&] {
    for (std::size_t i; (i = next++) < values.size();) {
      try {
        RunConfig c = base;
        c.e0 = values[i];
        c.output_dir = (fs::path(base.output_dir) / ("e0_" + value_tag(values[i]))).string();
        results[i] = optimize(c.oct_config(p.eigen), p.h, p.eigen);
        write_run(c.output_dir, c, p, results[i]);
        std::lock_guard lock(log);
        std::fprintf(stderr, "e0=%g best_yield=%.6f iterations=%zu\n", values[i], results[i].best_yield,
                     results[i].records.size());
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  bool ok = true;
  io::CsvWriter w(fs::path(base.output_dir) / "scan.csv",
                  {"e0 (a.u.)", "best_yield", "best_iteration", "iterations_used", "status"});
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto& r = results[i];
    const bool failed = !errors[i].empty() || r.failed();
    ok = ok && !failed;
    w.row({io::num(values[i]), io::num(r.best_yield), std::to_string(r.best_iteration), std::to_string(r.records.size()),
           errors[i].empty() ? to_string(r.status) : "error"});
    kv("e0_" + value_tag(values[i]) + ".best_yield", r.best_yield);
    if (failed) std::cerr << "run e0=" << values[i] << " failed: " << (errors[i].empty() ? r.message : errors[i]) << '\n';
  }
  return ok ? kOk : kOptimizationFailure;
}

Field load_field(const std::string& path, const RunConfig& c) {
  Field f = io::read_field(path);
  const TimeGrid tg = c.time_grid();
  if (f.time_grid().n_steps() != tg.n_steps() || std::abs(f.time_grid().dt() - tg.dt()) > 1e-9 * tg.dt())
    throw GridMismatch("field " + path + " does not match the configured time grid (T=" + std::to_string(tg.T()) +
                       ", dt=" + std::to_string(tg.dt()) + ")");
  // snap onto the configured grid; the file carries only 11 significant digits of t
  return Field(tg, std::vector<double>(f.values().begin(), f.values().end()));
}

int cmd_propagate(const Common& common, const std::string& field_path, bool dressed) {
  const RunConfig c = common.load();
  const Field f = load_field(field_path, c);
  const Problem p = setup(c);
  const auto occ = occupations(p.h, p.eigen.at(c.initial_state), f, p.eigen, c.stride);
  io::write_occupations(fs::path(c.output_dir) / "occupations.csv", occ);
  io::write_spectrum(fs::path(c.output_dir) / "spectrum.csv", f);
  kv("yield", final_yield(p.h, p.eigen.at(c.initial_state), f, c.target_spec(), p.eigen));
  kv("fluence", fluence(f));
  kv("time_average", f.time_average());
  if (dressed) write_dressed(c.output_dir, c, p, f);
  return kOk;
}

int cmd_postfilter(const Common& common, const std::string& field_path, std::vector<double> band,
                   std::optional<double> rescale) {
  const RunConfig c = common.load();
  if (band.size() != 2) throw ConfigError("postfilter: --band needs two values omega_a omega_b");
  const Band b{band[0], band[1]};
  validate(FilterSpec{b});
  const Field f = load_field(field_path, c);
  const Problem p = setup(c);
  const auto r = postfilter_experiment(p.h, f, b, rescale, p.eigen.at(c.initial_state), p.eigen, c.target_spec());
  const fs::path dir = c.output_dir;
  io::write_filter(dir / "filter.csv", b, f.time_grid());
  io::write_field(dir / "filtered_field.csv", r.filtered);
  kv("yield_raw", r.yield_raw);
  kv("fluence_filtered", fluence(r.filtered));
  if (r.rescaled) {
    io::write_field(dir / "rescaled_field.csv", *r.rescaled);
    kv("yield_rescaled", *r.yield_rescaled);
  }
  return kOk;
}

int cmd_twolevel(const Common& common, std::optional<double> T) {
  RunConfig c = common.load();
  if (T) c.T = *T;
  c.validate();
  const Problem p = setup(c);
  if (p.eigen.size() < 2) throw ConfigError("twolevel: needs eigen.n_states >= 2");
  const double mu01 = dipole_matrix(p.eigen)(1, 0);
  const double w01 = p.eigen.energies[1] - p.eigen.energies[0];
  const TimeGrid tg = c.time_grid();
  const auto est = two_level_estimate(mu01, w01, tg.T());
  const Field pulse = est.pulse(tg);
  io::write_field(fs::path(c.output_dir) / "twolevel_field.csv", pulse);
  kv("T", tg.T());
  kv("mu01", mu01);
  kv("omega01", w01);
  kv("amplitude", est.amplitude);
  kv("e0_estimate", est.fluence);
  kv("fluence", fluence(pulse));
  kv("yield", final_yield(p.h, p.eigen.at(0), pulse, Projection{1}, p.eigen));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimal control of a particle in an asymmetric double well"};
  app.require_subcommand(1);

  Common common;
  bool dressed = false;
  std::string field_path, param = "e0";
  std::vector<double> values, band;
  std::optional<double> from, to, rescale, T;
  std::optional<std::size_t> steps;

  auto* eigen = app.add_subcommand("eigen", "eigenstates, excitation energies and dipole elements");
  add_common(eigen, common);

  auto* opt = app.add_subcommand("optimize", "run one optimization");
  add_common(opt, common);
  opt->add_flag("--dressed", dressed, "also write the dressed-state analysis of the best field");

  auto* scan = app.add_subcommand("scan", "independent optimizations over a parameter");
  add_common(scan, common);
  scan->add_option("--param", param, "scanned parameter (e0)");
  scan->add_option("--values", values, "explicit values")->delimiter(',');
  scan->add_option("--from", from);
  scan->add_option("--to", to);
  scan->add_option("--steps", steps);

  auto* prop = app.add_subcommand("propagate", "propagate the ground state with a field from CSV");
  add_common(prop, common);
  prop->add_option("--field", field_path, "field CSV (t,eps)")->required()->check(CLI::ExistingFile);
  prop->add_flag("--dressed", dressed);

  auto* post = app.add_subcommand("postfilter", "band-filter a finished pulse and re-propagate");
  add_common(post, common);
  post->add_option("--field", field_path)->required()->check(CLI::ExistingFile);
  post->add_option("--band", band, "omega_a,omega_b")->required()->delimiter(',')->expected(2);
  post->add_option("--rescale", rescale, "rescale the filtered pulse to this fluence");

  auto* two = app.add_subcommand("twolevel", "resonant pi-pulse estimate");
  add_common(two, common);
  two->add_option("--T", T, "pulse duration (defaults to time.T)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUserError;
  }

  try {
    if (*eigen) return cmd_eigen(common);
    if (*opt) return cmd_optimize(common, dressed);
    if (*scan) return cmd_scan(common, param, values, from, to, steps);
    if (*prop) return cmd_propagate(common, field_path, dressed);
    if (*post) return cmd_postfilter(common, field_path, band, rescale);
    if (*two) return cmd_twolevel(common, T);
  } catch (const ConvergenceError& e) {
    std::cerr << "eigensolver failed: " << e.what() << '\n';
    return kEigenFailure;
  } catch (const NumericalBlowup& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kOptimizationFailure;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUserError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUserError;
  }
  return kUserError;
}
