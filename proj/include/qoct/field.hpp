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

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qoct/error.hpp"

namespace qoct {

/// Uniform time axis t_n = n dt, n = 0..n_steps, with n_steps dt == T.
class TimeGrid {
 public:
  TimeGrid() = default;

  /// Rounds T/dt to the nearest integer step count and adjusts T to match.
  static TimeGrid make(double T, double dt) {
    if (!(dt > 0.0) || !(T > 0.0) || !std::isfinite(T) || !std::isfinite(dt))
      throw InvalidArgument("time grid: T and dt must be positive and finite");
    const auto steps = static_cast<std::size_t>(std::llround(T / dt));
    if (steps == 0) throw InvalidArgument("time grid: T shorter than one step");
    TimeGrid g;
    g.dt_ = dt;
    g.n_steps_ = steps;
    g.T_ = static_cast<double>(steps) * dt;
    return g;
  }

  double T() const { return T_; }
  double dt() const { return dt_; }
  std::size_t n_steps() const { return n_steps_; }
  std::size_t n_samples() const { return n_steps_ + 1; }
  double t(std::size_t n) const { return static_cast<double>(n) * dt_; }

  bool operator==(const TimeGrid&) const = default;

 private:
  double T_ = 0.0;
  double dt_ = 0.0;
  std::size_t n_steps_ = 0;
};

/// Real laser amplitude sampled at every point of a TimeGrid (both ends included).
class Field {
 public:
  Field() = default;
  explicit Field(TimeGrid tg) : tg_(tg), values_(tg.n_samples(), 0.0) {}
  Field(TimeGrid tg, std::vector<double> values) : tg_(tg), values_(std::move(values)) {
    if (values_.size() != tg_.n_samples())
      throw GridMismatch("field: expected " + std::to_string(tg_.n_samples()) + " samples, got " +
                         std::to_string(values_.size()));
  }

  static Field constant(TimeGrid tg, double value) { return Field(tg, std::vector<double>(tg.n_samples(), value)); }

  template <class F>
  static Field from_function(TimeGrid tg, F&& f) {
    Field out(tg);
    for (std::size_t n = 0; n < tg.n_samples(); ++n) out.values_[n] = f(tg.t(n));
    return out;
  }

  const TimeGrid& time_grid() const { return tg_; }
  std::size_t size() const { return values_.size(); }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  double& operator[](std::size_t n) { return values_[n]; }
  double operator[](std::size_t n) const { return values_[n]; }

  /// Field value held constant over the step [t_n, t_{n+1}].
  double step_value(std::size_t n) const { return 0.5 * (values_[n] + values_[n + 1]); }

  Field& operator*=(double s) {
    for (auto& v : values_) v *= s;
    return *this;
  }

  bool all_finite() const {
    for (double v : values_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  double time_average() const {
    // trapezoid mean over [0, T]
    double s = 0.0;
    for (double v : values_) s += v;
    s -= 0.5 * (values_.front() + values_.back());
    return s * tg_.dt() / tg_.T();
  }

  bool operator==(const Field&) const = default;

 private:
  TimeGrid tg_;
  std::vector<double> values_;
};

/// Fluence: trapezoidal integral of eps^2 over [0, T].
inline double fluence(const Field& f) {
  const auto v = f.values();
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double e : v) s += e * e;
  s -= 0.5 * (v.front() * v.front() + v.back() * v.back());
  return s * f.time_grid().dt();
}

}  // namespace qoct
