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
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qoct/error.hpp"
#include "qoct/fft.hpp"

namespace qoct {

using cplx = std::complex<double>;

/// Uniform periodic grid on [x_min, x_max) with n_points samples.
/// The conjugate momenta follow FFT ordering: 0, dk, ..., -dk.
class Grid {
 public:
  Grid() = default;
  Grid(std::size_t n_points, double x_min, double x_max)
      : n_(n_points), x_min_(x_min), x_max_(x_max) {
    if (n_ < 2 || !std::has_single_bit(n_))
      throw InvalidArgument("grid: n_points must be a power of two >= 2, got " + std::to_string(n_));
    if (!(x_max_ > x_min_) || !std::isfinite(x_min_) || !std::isfinite(x_max_))
      throw InvalidArgument("grid: require finite x_min < x_max");
    dx_ = (x_max_ - x_min_) / static_cast<double>(n_);
  }

  /// Symmetric grid [-x_max, x_max).
  static Grid symmetric(std::size_t n_points, double x_max) { return Grid(n_points, -x_max, x_max); }

  /// Symmetric grid whose spacing is as close to `dx` as a power-of-two point
  /// count allows.
  static Grid with_spacing(double x_max, double dx) {
    if (!(dx > 0.0) || !(x_max > 0.0)) throw InvalidArgument("grid: x_max and dx must be positive");
    const double exact = std::log2(2.0 * x_max / dx);
    return symmetric(std::size_t{1} << static_cast<int>(std::lround(exact)), x_max);
  }

  std::size_t size() const { return n_; }
  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  double dx() const { return dx_; }
  double dk() const { return 2.0 * std::numbers::pi / (static_cast<double>(n_) * dx_); }

  double x(std::size_t i) const { return x_min_ + static_cast<double>(i) * dx_; }
  double k(std::size_t i) const {
    const auto n = static_cast<std::ptrdiff_t>(n_);
    const auto s = static_cast<std::ptrdiff_t>(i);
    return dk() * static_cast<double>(2 * s < n ? s : s - n);
  }

  std::vector<double> positions() const {
    std::vector<double> out(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = x(i);
    return out;
  }
  std::vector<double> momenta() const {
    std::vector<double> out(n_);
    for (std::size_t i = 0; i < n_; ++i) out[i] = k(i);
    return out;
  }

  bool operator==(const Grid&) const = default;

 private:
  std::size_t n_ = 0;
  double x_min_ = 0.0;
  double x_max_ = 0.0;
  double dx_ = 0.0;
};

/// Complex amplitudes on a Grid; |psi|^2 dx sums to the norm squared.
class Wavefunction {
 public:
  Wavefunction() = default;
  explicit Wavefunction(Grid grid) : grid_(std::move(grid)), amps_(grid_.size()) {}
  Wavefunction(Grid grid, std::vector<cplx> amplitudes) : grid_(std::move(grid)), amps_(std::move(amplitudes)) {
    if (amps_.size() != grid_.size()) throw GridMismatch("wavefunction: amplitude count does not match grid");
  }

  template <class F>
  static Wavefunction from_function(const Grid& grid, F&& f) {
    Wavefunction out(grid);
    for (std::size_t i = 0; i < grid.size(); ++i) out.amps_[i] = cplx(f(grid.x(i)));
    return out;
  }

  /// Normalized Gaussian exp(-(x-x0)^2 / (2 sigma^2)).
  static Wavefunction gaussian(const Grid& grid, double x0, double sigma) {
    auto g = from_function(grid, [&](double x) { return std::exp(-0.5 * (x - x0) * (x - x0) / (sigma * sigma)); });
    g.normalize();
    return g;
  }

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return amps_.size(); }
  std::span<cplx> amplitudes() { return amps_; }
  std::span<const cplx> amplitudes() const { return amps_; }
  cplx& operator[](std::size_t i) { return amps_[i]; }
  const cplx& operator[](std::size_t i) const { return amps_[i]; }

  double norm_squared() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s * grid_.dx();
  }
  double norm() const { return std::sqrt(norm_squared()); }

  Wavefunction& normalize() {
    const double n = norm();
    if (!(n > 0.0)) throw InvalidArgument("wavefunction: cannot normalize a zero state");
    for (auto& a : amps_) a /= n;
    return *this;
  }

  Wavefunction& operator*=(cplx c) {
    for (auto& a : amps_) a *= c;
    return *this;
  }
  Wavefunction& operator+=(const Wavefunction& o) {
    check_same_grid(o);
    for (std::size_t i = 0; i < amps_.size(); ++i) amps_[i] += o.amps_[i];
    return *this;
  }
  Wavefunction& operator-=(const Wavefunction& o) {
    check_same_grid(o);
    for (std::size_t i = 0; i < amps_.size(); ++i) amps_[i] -= o.amps_[i];
    return *this;
  }
  /// this += c * o
  Wavefunction& axpy(cplx c, const Wavefunction& o) {
    check_same_grid(o);
    for (std::size_t i = 0; i < amps_.size(); ++i) amps_[i] += c * o.amps_[i];
    return *this;
  }

  friend Wavefunction operator*(cplx c, Wavefunction w) { return w *= c; }
  friend Wavefunction operator+(Wavefunction a, const Wavefunction& b) { return a += b; }
  friend Wavefunction operator-(Wavefunction a, const Wavefunction& b) { return a -= b; }

  void check_same_grid(const Wavefunction& o) const {
    if (!(grid_ == o.grid_) || amps_.size() != o.amps_.size())
      throw GridMismatch("wavefunctions live on different grids");
  }

 private:
  Grid grid_;
  std::vector<cplx> amps_;
};

/// <a|b> = sum conj(a) b dx
inline cplx inner(const Wavefunction& a, const Wavefunction& b) {
  a.check_same_grid(b);
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s * a.grid().dx();
}

/// <a|x|b>
inline cplx position_element(const Wavefunction& a, const Wavefunction& b) {
  a.check_same_grid(b);
  const Grid& g = a.grid();
  cplx s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * g.x(i) * b[i];
  return s * g.dx();
}

inline double expectation_position(const Wavefunction& psi) { return position_element(psi, psi).real(); }

/// L2 distance ||a - b||.
inline double distance(const Wavefunction& a, const Wavefunction& b) {
  a.check_same_grid(b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s * a.grid().dx());
}

// ---------------------------------------------------------------------------
// Time-frequency transform of sampled signals.
//
//   X(w_k) = dt * sum_n x(t_n) exp(-i w_k t_n),   t_n = n dt,
//   w_k    = 2 pi k / (N dt),  k in FFT ordering (0, 1, ..., -1),
//
// so that dt sum |x_n|^2 = (dw / 2 pi) sum |X_k|^2.

/// Signed angular frequency of FFT bin k for N samples spaced dt.
inline double bin_frequency(std::size_t k, std::size_t n, double dt) {
  const auto s = static_cast<std::ptrdiff_t>(k);
  const auto nn = static_cast<std::ptrdiff_t>(n);
  const std::ptrdiff_t m = 2 * s < nn ? s : s - nn;
  return 2.0 * std::numbers::pi * static_cast<double>(m) / (static_cast<double>(n) * dt);
}

inline std::vector<cplx> dft(std::span<const cplx> samples, double dt) {
  const std::size_t n = samples.size();
  if (n == 0) return {};
  detail::AlignedArray buf(n);
  std::copy(samples.begin(), samples.end(), buf.data());
  detail::FftPlan(n, detail::FftSign::forward)(buf);
  std::vector<cplx> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = buf[i] * dt;
  return out;
}

inline std::vector<cplx> idft(std::span<const cplx> spectrum, double dt) {
  const std::size_t n = spectrum.size();
  if (n == 0) return {};
  detail::AlignedArray buf(n);
  std::copy(spectrum.begin(), spectrum.end(), buf.data());
  detail::FftPlan(n, detail::FftSign::backward)(buf);
  const double scale = 1.0 / (static_cast<double>(n) * dt);
  std::vector<cplx> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = buf[i] * scale;
  return out;
}

}  // namespace qoct
