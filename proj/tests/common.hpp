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

// Shared fixtures for the unit tests.

#pragma once

#include <complex>
#include <numbers>
#include <vector>

#include "qoct.hpp"

namespace qoct::fixture {

// The coarse grid used for parameter scans: x in [-20, 20), 256 points.
inline const Grid& scan_grid() {
  static const Grid g = Grid::symmetric(256, 20.0);
  return g;
}

inline const Hamiltonian& scan_hamiltonian() {
  static const Hamiltonian h = Hamiltonian::double_well(scan_grid(), PotentialParams{});
  return h;
}

inline const EigenSet& scan_eigenset() {
  static const EigenSet e = solve_eigenset(scan_hamiltonian(), 5, 0.0);
  return e;
}

// O(N^2) reference transform with the library's convention
// X(w_k) = dt sum_n x_n exp(-i w_k t_n).
inline std::vector<cplx> direct_dft(const std::vector<cplx>& x, double dt) {
  const std::size_t n = x.size();
  std::vector<cplx> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    cplx s = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double phase = -2.0 * std::numbers::pi * static_cast<double>(k * j % n) / static_cast<double>(n);
      s += x[j] * std::polar(1.0, phase);
    }
    out[k] = dt * s;
  }
  return out;
}

}  // namespace qoct::fixture
