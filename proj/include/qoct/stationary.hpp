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
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "qoct/error.hpp"
#include "qoct/grid.hpp"
#include "qoct/model.hpp"
#include "qoct/propagator.hpp"

namespace qoct {

/// Dense row-major square matrix of reals.
class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(std::size_t n) : n_(n), data_(n * n, 0.0) {}
  std::size_t size() const { return n_; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * n_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * n_ + c]; }

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

struct EigenSolveOptions {
  RelaxationOptions relaxation;
  /// Upper bound on the number of states; beyond it the double well has no
  /// well-separated bound states.
  static constexpr std::size_t kMaxStates = 8;
};

/// Rotates psi so that its largest-magnitude amplitude is real and positive.
inline void fix_phase(Wavefunction& psi) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < psi.size(); ++i)
    if (std::norm(psi[i]) > std::norm(psi[best])) best = i;
  const double mag = std::abs(psi[best]);
  if (mag > 0.0) psi *= std::conj(psi[best]) / mag;
}

/// Starting guesses for relaxation: Gaussians alternating between the
/// left and right halves of the grid, moving outward with n.
inline Wavefunction relaxation_guess(const Grid& grid, std::size_t n) {
  const double side = n % 2 == 0 ? -1.0 : 1.0;
  const double x0 = side * (1.0 + 0.75 * static_cast<double>(n / 2)) + 0.1 * static_cast<double>(n);
  return Wavefunction::gaussian(grid, x0, 1.0);
}

/// Lowest n_states eigenpairs of H(static_field) by imaginary-time relaxation
/// with deflation against the states already found.
inline EigenSet solve_eigenset(const Hamiltonian& h, std::size_t n_states, double static_field,
                               const EigenSolveOptions& opt = {}, const EigenSet* warm_start = nullptr) {
  if (n_states == 0 || n_states > EigenSolveOptions::kMaxStates)
    throw InvalidArgument("eigenset: n_states must be in [1, " + std::to_string(EigenSolveOptions::kMaxStates) + "]");
  EigenSet out;
  out.static_field = static_field;
  for (std::size_t n = 0; n < n_states; ++n) {
    Wavefunction guess = (warm_start && n < warm_start->size()) ? warm_start->states[n] : relaxation_guess(h.grid(), n);
    auto relaxed = propagate_imaginary(h, std::move(guess), static_field, out.states, opt.relaxation);
    fix_phase(relaxed.state);
    if (!out.energies.empty() && !(relaxed.energy > out.energies.back()))
      throw ConvergenceError("eigenset: energies not strictly increasing at state " + std::to_string(n), 0.0);
    out.states.push_back(std::move(relaxed.state));
    out.energies.push_back(relaxed.energy);
  }
  return out;
}

inline EigenSet solve_eigenset(const Grid& grid, const PotentialParams& p, std::size_t n_states, double static_field,
                               const EigenSolveOptions& opt = {}) {
  return solve_eigenset(Hamiltonian::double_well(grid, p), n_states, static_field, opt);
}

/// omega(m, n) = E_m - E_n (lower triangle, m >= n; zero elsewhere).
inline Matrix excitation_matrix(const EigenSet& e) {
  Matrix w(e.size());
  for (std::size_t m = 0; m < e.size(); ++m)
    for (std::size_t n = 0; n < m; ++n) w(m, n) = e.energies[m] - e.energies[n];
  return w;
}

/// Position matrix elements <phi_m|x|phi_n>.
inline Matrix dipole_matrix(const EigenSet& e) {
  Matrix mu(e.size());
  for (std::size_t m = 0; m < e.size(); ++m)
    for (std::size_t n = 0; n <= m; ++n) {
      const double v = position_element(e.states[m], e.states[n]).real();
      mu(m, n) = v;
      mu(n, m) = v;
    }
  return mu;
}

}  // namespace qoct
