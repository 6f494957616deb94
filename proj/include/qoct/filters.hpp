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
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "qoct/error.hpp"
#include "qoct/field.hpp"
#include "qoct/grid.hpp"

namespace qoct {

/// f(w) = 1
struct AllPass {};

/// f(w) = sum_c exp(-gamma (w - w_c)^2) + exp(-gamma (w + w_c)^2)
struct GaussianPass {
  std::vector<double> centers;
  double gamma = 500.0;
};

/// f(w) = 1 - exp(-gamma (w - w0)^2) - exp(-gamma (w + w0)^2)
struct GaussianStop {
  double center = 0.0;
  double gamma = 500.0;
};

/// f(w) = 1 for omega_a <= |w| <= omega_b, else 0
struct Band {
  double omega_a = 0.0;
  double omega_b = 0.0;
};

using FilterSpec = std::variant<AllPass, GaussianPass, GaussianStop, Band>;

/// Masks above 1 by more than this (overlapping Gaussians) are clamped to 1.
inline constexpr double kMaskOvershoot = 1e-6;

inline void validate(const FilterSpec& f) {
  std::visit(
      [](const auto& v) {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, GaussianPass>) {
          if (v.centers.empty()) throw InvalidArgument("filter: gaussian pass needs at least one center");
          if (!(v.gamma > 0.0)) throw InvalidArgument("filter: gamma must be positive");
        } else if constexpr (std::is_same_v<V, GaussianStop>) {
          if (!(v.gamma > 0.0)) throw InvalidArgument("filter: gamma must be positive");
        } else if constexpr (std::is_same_v<V, Band>) {
          if (!(v.omega_a >= 0.0 && v.omega_a < v.omega_b)) throw InvalidArgument("filter: band needs 0 <= omega_a < omega_b");
        }
      },
      f);
}

/// Mask value f(omega); symmetric in omega by construction.
inline double evaluate(const FilterSpec& f, double omega) {
  const double w = std::abs(omega);
  auto pair = [w](double c, double gamma) {
    return std::exp(-gamma * (w - c) * (w - c)) + std::exp(-gamma * (w + c) * (w + c));
  };
  double v = std::visit(
      [&](const auto& s) -> double {
        using V = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<V, AllPass>) {
          return 1.0;
        } else if constexpr (std::is_same_v<V, GaussianPass>) {
          double sum = 0.0;
          for (double c : s.centers) sum += pair(c, s.gamma);
          return sum;
        } else if constexpr (std::is_same_v<V, GaussianStop>) {
          return 1.0 - pair(s.center, s.gamma);
        } else {
          return (w >= s.omega_a && w <= s.omega_b) ? 1.0 : 0.0;
        }
      },
      f);
  v = std::max(v, 0.0);
  if (v > 1.0 + kMaskOvershoot) v = 1.0;
  return v;
}

/// Frequency spacing 2 pi / (N dt) of the unpadded sample grid.
inline double frequency_spacing(const TimeGrid& tg) {
  return 2.0 * std::numbers::pi / (static_cast<double>(tg.n_samples()) * tg.dt());
}

/// A band exactly one frequency bin wide around the bin nearest omega0
/// (a discrete delta in the spectrum).
inline Band single_bin(double omega0, const TimeGrid& tg) {
  const double dw = frequency_spacing(tg);
  const double center = std::round(std::abs(omega0) / dw) * dw;
  return Band{std::max(0.0, center - 0.5 * dw), center + 0.5 * dw};
}

inline std::vector<double> mask_values(const FilterSpec& f, const TimeGrid& tg) {
  const std::size_t n = tg.n_samples();
  std::vector<double> m(n);
  for (std::size_t k = 0; k < n; ++k) m[k] = evaluate(f, bin_frequency(k, n, tg.dt()));
  return m;
}

/// Spectrum of a real field in FFT bin order.
inline std::vector<cplx> field_dft(const Field& field) {
  std::vector<cplx> s(field.values().begin(), field.values().end());
  return dft(s, field.time_grid().dt());
}

/// eps' = idft[f(w) dft[eps]].
inline Field apply_filter(const FilterSpec& f, const Field& field) {
  validate(f);
  if (std::holds_alternative<AllPass>(f)) return field;
  const TimeGrid& tg = field.time_grid();
  auto spec = field_dft(field);
  const auto mask = mask_values(f, tg);
  for (std::size_t k = 0; k < spec.size(); ++k) spec[k] *= mask[k];
  const auto back = idft(spec, tg.dt());
  Field out(tg);
  double residue = 0.0;
  for (std::size_t n = 0; n < back.size(); ++n) {
    out[n] = back[n].real();
    residue = std::max(residue, std::abs(back[n].imag()));
  }
  if (!(residue < 1e-10)) throw NumericalBlowup("apply_filter: imaginary residue " + std::to_string(residue));
  return out;
}

struct SpectralSample {
  double omega = 0.0;
  cplx amplitude;
};

/// Spectrum of a field in ascending frequency order.
inline std::vector<SpectralSample> spectrum(const Field& field) {
  const TimeGrid& tg = field.time_grid();
  const std::size_t n = tg.n_samples();
  const auto s = field_dft(field);
  std::vector<SpectralSample> out(n);
  const std::size_t neg = n / 2;  // bins n - neg .. n-1 carry negative frequencies
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t k = (i + n - neg) % n;
    out[i] = {bin_frequency(k, n, tg.dt()), s[k]};
  }
  return out;
}

}  // namespace qoct
