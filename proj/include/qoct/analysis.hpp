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

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "qoct/error.hpp"
#include "qoct/field.hpp"
#include "qoct/filters.hpp"
#include "qoct/grid.hpp"
#include "qoct/model.hpp"
#include "qoct/propagator.hpp"
#include "qoct/stationary.hpp"

namespace qoct {

// ---------------------------------------------------------------------------
// Occupation numbers along a propagation.

struct OccupationSeries {
  std::vector<double> times;
  std::vector<std::vector<double>> occupations;  ///< [sample][state] = |<n|psi(t)>|^2
  std::vector<double> residual;                  ///< 1 - sum_n occupations

  /// Largest occupation of `state` over the whole series.
  double peak(std::size_t state) const {
    double m = 0.0;
    for (const auto& row : occupations) m = std::max(m, row.at(state));
    return m;
  }
};

inline OccupationSeries occupations(const Hamiltonian& h, const Wavefunction& psi0, const Field& field,
                                    const EigenSet& eigenset, std::size_t stride = 100) {
  if (stride < 1) throw InvalidArgument("occupations: stride must be >= 1");
  OccupationSeries s;
  Propagator prop(h, field.time_grid().dt());
  prop.propagate(
      psi0, field, Direction::forward,
      [&](std::size_t, double t, const Wavefunction& psi) {
        std::vector<double> row(eigenset.size());
        double total = 0.0;
        for (std::size_t n = 0; n < eigenset.size(); ++n) {
          row[n] = std::norm(inner(eigenset.states[n], psi));
          total += row[n];
        }
        s.times.push_back(t);
        s.occupations.push_back(std::move(row));
        s.residual.push_back(1.0 - total);
      },
      stride);
  return s;
}

/// Final-time J1 of psi0 driven by `field`.
inline double final_yield(const Hamiltonian& h, const Wavefunction& psi0, const Field& field, const TargetSpec& target,
                          const EigenSet& eigenset) {
  Propagator prop(h, field.time_grid().dt());
  return target_expectation(target, prop.propagate(psi0, field, Direction::forward), eigenset);
}

/// (dw / 2 pi) sum |eps(w_k)|^2, equal to dt sum eps_n^2.
inline double spectral_energy(const Field& field) {
  const auto s = field_dft(field);
  double sum = 0.0;
  for (const auto& v : s) sum += std::norm(v);
  return sum * frequency_spacing(field.time_grid()) / (2.0 * std::numbers::pi);
}

/// Share of the spectral energy sitting at frequencies the filter blocks
/// (mask below `threshold`). Zero for a field confined to the filter support.
inline double out_of_band_fraction(const Field& field, const FilterSpec& filter, double threshold = 1e-6) {
  const auto s = field_dft(field);
  const auto mask = mask_values(filter, field.time_grid());
  double total = 0.0, outside = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double e = std::norm(s[k]);
    total += e;
    if (mask[k] < threshold) outside += e;
  }
  return total > 0.0 ? outside / total : 0.0;
}

/// Up to `count` local maxima of |eps(w)| at w > min_omega, largest first,
/// each at least `separation` away from every larger one.
inline std::vector<SpectralSample> distinct_peaks(const Field& field, std::size_t count, double separation,
                                                  double min_omega = 0.0) {
  const auto s = spectrum(field);
  std::vector<SpectralSample> cand;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    if (s[i].omega <= min_omega) continue;
    const double a = std::abs(s[i].amplitude);
    if (a > std::abs(s[i - 1].amplitude) && a >= std::abs(s[i + 1].amplitude)) cand.push_back(s[i]);
  }
  std::sort(cand.begin(), cand.end(),
            [](const auto& a, const auto& b) { return std::abs(a.amplitude) > std::abs(b.amplitude); });
  std::vector<SpectralSample> out;
  for (const auto& c : cand) {
    if (out.size() == count) break;
    if (std::all_of(out.begin(), out.end(), [&](const auto& o) { return std::abs(o.omega - c.omega) >= separation; }))
      out.push_back(c);
  }
  return out;
}

/// Local maxima of |eps(w)| at w > min_omega, largest first.
inline std::vector<SpectralSample> spectral_peaks(const Field& field, std::size_t count, double min_omega = 0.0) {
  const auto s = spectrum(field);
  std::vector<SpectralSample> peaks;
  for (std::size_t i = 1; i + 1 < s.size(); ++i) {
    if (s[i].omega <= min_omega) continue;
    const double a = std::abs(s[i].amplitude);
    if (a > std::abs(s[i - 1].amplitude) && a >= std::abs(s[i + 1].amplitude)) peaks.push_back(s[i]);
  }
  std::sort(peaks.begin(), peaks.end(),
            [](const auto& a, const auto& b) { return std::abs(a.amplitude) > std::abs(b.amplitude); });
  if (peaks.size() > count) peaks.resize(count);
  return peaks;
}

// ---------------------------------------------------------------------------
// Two-level (rotating wave) estimate: eps(t) = A sin(omega01 t), A = pi / (mu01 T).

struct TwoLevelEstimate {
  double amplitude = 0.0;
  double fluence = 0.0;  ///< A^2 T / 2
  double omega01 = 0.0;
  double T = 0.0;

  Field pulse(const TimeGrid& tg) const {
    return Field::from_function(tg, [this](double t) { return amplitude * std::sin(omega01 * t); });
  }
};

inline TwoLevelEstimate two_level_estimate(double mu01, double omega01, double T) {
  if (mu01 == 0.0 || !std::isfinite(mu01)) throw InvalidArgument("two_level_estimate: mu01 must be nonzero");
  if (!(T > 0.0)) throw InvalidArgument("two_level_estimate: T must be positive");
  TwoLevelEstimate e;
  e.amplitude = std::numbers::pi / (std::abs(mu01) * T);
  e.fluence = 0.5 * e.amplitude * e.amplitude * T;
  e.omega01 = omega01;
  e.T = T;
  return e;
}

// ---------------------------------------------------------------------------
// Filtering a finished pulse, optionally restoring its fluence.

struct PostfilterResult {
  Field filtered;
  double yield_raw = 0.0;
  std::optional<Field> rescaled;
  std::optional<double> yield_rescaled;
};

/// Multiplies a field by a constant so that its fluence equals e0.
inline Field rescale_fluence(Field f, double e0) {
  const double cur = fluence(f);
  if (!(cur > 0.0)) throw InvalidArgument("rescale: field has zero fluence");
  if (!(e0 > 0.0)) throw InvalidArgument("rescale: target fluence must be positive");
  f *= std::sqrt(e0 / cur);
  return f;
}

inline PostfilterResult postfilter_experiment(const Hamiltonian& h, const Field& field, const FilterSpec& band,
                                              std::optional<double> rescale_to, const Wavefunction& psi0,
                                              const EigenSet& eigenset, const TargetSpec& target) {
  PostfilterResult r;
  r.filtered = apply_filter(band, field);
  r.yield_raw = final_yield(h, psi0, r.filtered, target, eigenset);
  if (rescale_to) {
    if (!(fluence(r.filtered) > 0.0)) throw InvalidArgument("postfilter: filtered field vanished, cannot rescale");
    r.rescaled = rescale_fluence(r.filtered, *rescale_to);
    r.yield_rescaled = final_yield(h, psi0, *r.rescaled, target, eigenset);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Dressed-state picture of a low-frequency pulse.

struct DressedOptions {
  /// Coarse scan of the static field used to bracket the gap minimum.
  double scan_from = -0.1;
  double scan_to = 0.1;
  std::size_t scan_points = 21;
  /// Binary digits of precision requested from Brent's method.
  int bits = 24;
  std::size_t stride = 100;
  EigenSolveOptions eigen;
};

struct DressedAnalysis {
  double epsilon_bar = 0.0;
  double gap = 0.0;  ///< E1 - E0 at epsilon_bar
  EigenSet dressed;  ///< two lowest eigenstates of H(epsilon_bar)
  std::vector<double> times;
  std::vector<double> d0;  ///< |<phi0^eps_bar|psi(t)>|^2
  std::vector<double> d1;
  double field_average = 0.0;
  /// Change of arg(c1 / c0) between t = 0 and t = T, wrapped to (-pi, pi].
  double phase_change = 0.0;
};

/// E1 - E0 of H(eps).
inline double dressed_gap(const Hamiltonian& h, double eps, const EigenSolveOptions& opt = {},
                          const EigenSet* warm = nullptr) {
  const auto e = solve_eigenset(h, 2, eps, opt, warm);
  return e.energies[1] - e.energies[0];
}

/// Static field minimizing the dressed gap (the avoided crossing of the two
/// lowest levels), bracketed by a coarse scan and refined with Brent's method.
inline std::pair<double, double> minimize_dressed_gap(const Hamiltonian& h, const DressedOptions& opt = {}) {
  if (opt.scan_points < 3 || !(opt.scan_to > opt.scan_from)) throw InvalidArgument("dressed: bad scan range");
  const EigenSet warm = solve_eigenset(h, 2, 0.0, opt.eigen);
  std::vector<double> eps(opt.scan_points), gap(opt.scan_points);
  for (std::size_t i = 0; i < opt.scan_points; ++i) {
    eps[i] = opt.scan_from + (opt.scan_to - opt.scan_from) * static_cast<double>(i) / static_cast<double>(opt.scan_points - 1);
    gap[i] = dressed_gap(h, eps[i], opt.eigen, &warm);
  }
  const auto best = static_cast<std::size_t>(std::min_element(gap.begin(), gap.end()) - gap.begin());
  if (best == 0 || best + 1 == opt.scan_points)
    throw Error("dressed: gap minimum not bracketed inside [" + std::to_string(opt.scan_from) + ", " +
                std::to_string(opt.scan_to) + "]");
  auto f = [&](double e) { return dressed_gap(h, e, opt.eigen, &warm); };
  const auto [x, fx] = boost::math::tools::brent_find_minima(f, eps[best - 1], eps[best + 1], opt.bits);
  return {x, fx};
}

inline DressedAnalysis dressed_analysis(const Hamiltonian& h, const Field& field, const Wavefunction& psi0,
                                        const DressedOptions& opt = {}) {
  DressedAnalysis d;
  std::tie(d.epsilon_bar, d.gap) = minimize_dressed_gap(h, opt);
  d.dressed = solve_eigenset(h, 2, d.epsilon_bar, opt.eigen);
  d.field_average = field.time_average();

  std::vector<cplx> c0, c1;
  Propagator prop(h, field.time_grid().dt());
  prop.propagate(
      psi0, field, Direction::forward,
      [&](std::size_t, double t, const Wavefunction& psi) {
        const cplx a = inner(d.dressed.states[0], psi);
        const cplx b = inner(d.dressed.states[1], psi);
        d.times.push_back(t);
        d.d0.push_back(std::norm(a));
        d.d1.push_back(std::norm(b));
        c0.push_back(a);
        c1.push_back(b);
      },
      opt.stride);
  const double rel0 = std::arg(c1.front() / c0.front());
  const double rel1 = std::arg(c1.back() / c0.back());
  d.phase_change = std::remainder(rel1 - rel0, 2.0 * std::numbers::pi);
  return d;
}

}  // namespace qoct
