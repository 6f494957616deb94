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
#include <numbers>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "qoct/error.hpp"
#include "qoct/fft.hpp"
#include "qoct/grid.hpp"

namespace qoct {

/// V(x) = omega0^4/(64 B) x^4 - omega0^2/4 x^2 + beta x^3
struct PotentialParams {
  double omega0 = 1.0;
  double B = 1.0;
  double beta = 1.0 / 256.0;

  void validate() const {
    if (!(omega0 > 0.0)) throw InvalidArgument("potential: omega0 must be positive");
    if (!(B > 0.0)) throw InvalidArgument("potential: B must be positive");
    if (!std::isfinite(beta)) throw InvalidArgument("potential: beta must be finite");
  }
};

inline double potential_value(double x, const PotentialParams& p) {
  const double w2 = p.omega0 * p.omega0;
  const double x2 = x * x;
  return w2 * w2 / (64.0 * p.B) * x2 * x2 - 0.25 * w2 * x2 + p.beta * x2 * x;
}

/// Dipole operator of the electron (charge -1): mu(x) = -x.
inline double dipole(double x) { return -x; }

/// Interaction energy -mu(x) eps added to V(x) at every grid point.
inline std::vector<double> dipole_coupling(double eps, const Grid& grid) {
  std::vector<double> w(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) w[i] = -dipole(grid.x(i)) * eps;
  return w;
}

/// <a|mu|b>
inline cplx dipole_element(const Wavefunction& a, const Wavefunction& b) { return -position_element(a, b); }

/// H(eps) = T + V(x) - mu(x) eps on a fixed grid.
class Hamiltonian {
 public:
  Hamiltonian(Grid grid, std::vector<double> potential)
      : grid_(std::move(grid)),
        potential_(std::move(potential)),
        fwd_(grid_.size(), detail::FftSign::forward),
        bwd_(grid_.size(), detail::FftSign::backward) {
    if (potential_.size() != grid_.size()) throw GridMismatch("hamiltonian: potential size does not match grid");
  }

  static Hamiltonian double_well(const Grid& grid, const PotentialParams& p) {
    p.validate();
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = potential_value(grid.x(i), p);
    return Hamiltonian(grid, std::move(v));
  }

  template <class F>
  static Hamiltonian from_function(const Grid& grid, F&& f) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) v[i] = f(grid.x(i));
    return Hamiltonian(grid, std::move(v));
  }

  const Grid& grid() const { return grid_; }
  std::span<const double> potential() const { return potential_; }

  /// Total multiplicative potential at static field eps.
  double total_potential(std::size_t i, double eps) const { return potential_[i] - dipole(grid_.x(i)) * eps; }

  /// H(eps) psi, kinetic part evaluated spectrally.
  Wavefunction apply(const Wavefunction& psi, double eps) const {
    check(psi);
    const std::size_t n = grid_.size();
    detail::AlignedArray buf(n);
    std::copy(psi.amplitudes().begin(), psi.amplitudes().end(), buf.data());
    fwd_(buf);
    for (std::size_t i = 0; i < n; ++i) {
      const double k = grid_.k(i);
      buf[i] *= 0.5 * k * k / static_cast<double>(n);
    }
    bwd_(buf);
    Wavefunction out(grid_);
    for (std::size_t i = 0; i < n; ++i) out[i] = buf[i] + total_potential(i, eps) * psi[i];
    return out;
  }

  /// Rayleigh quotient <psi|H(eps)|psi> / <psi|psi>.
  double energy(const Wavefunction& psi, double eps) const {
    check(psi);
    const std::size_t n = grid_.size();
    detail::AlignedArray buf(n);
    std::copy(psi.amplitudes().begin(), psi.amplitudes().end(), buf.data());
    fwd_(buf);
    double kinetic = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double k = grid_.k(i);
      kinetic += 0.5 * k * k * std::norm(buf[i]);
    }
    kinetic /= static_cast<double>(n);
    double pot = 0.0;
    double nrm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double p = std::norm(psi[i]);
      pot += total_potential(i, eps) * p;
      nrm += p;
    }
    return (kinetic + pot) / nrm;
  }

 private:
  void check(const Wavefunction& psi) const {
    if (!(psi.grid() == grid_)) throw GridMismatch("hamiltonian: wavefunction grid differs");
  }

  Grid grid_;
  std::vector<double> potential_;
  detail::FftPlan fwd_;
  detail::FftPlan bwd_;
};

/// Eigenstates of H(static_field), lowest first.
struct EigenSet {
  double static_field = 0.0;
  std::vector<Wavefunction> states;
  std::vector<double> energies;

  std::size_t size() const { return states.size(); }
  const Wavefunction& at(std::size_t k) const {
    if (k >= states.size())
      throw InvalidArgument("eigenset: state index " + std::to_string(k) + " out of range (have " +
                            std::to_string(states.size()) + ")");
    return states[k];
  }
};

// ---------------------------------------------------------------------------
// Target operators O, with J1 = <psi(T)|O|psi(T)>.

/// |phi_f><phi_f|
struct Projection {
  std::size_t index = 1;
};

/// sum_k beta_k |phi_k><phi_k|; negative weights penalize a state.
struct WeightedProjections {
  std::vector<std::pair<std::size_t, double>> terms;
};

/// delta(x - x0), approximated by a normalized Gaussian of width sigma.
struct LocalDensity {
  double x0 = 0.0;
  double width = 0.0;

  static LocalDensity sharp(double x0, const Grid& grid) { return {x0, 2.0 * grid.dx()}; }
};

using TargetSpec = std::variant<Projection, WeightedProjections, LocalDensity>;

namespace detail {
inline double gaussian_delta(double x, const LocalDensity& d) {
  const double u = (x - d.x0) / d.width;
  return std::exp(-0.5 * u * u) / (d.width * std::sqrt(2.0 * std::numbers::pi));
}
}  // namespace detail

inline void validate(const TargetSpec& t, const EigenSet& eigenset) {
  std::visit(
      [&](const auto& v) {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, Projection>) {
          (void)eigenset.at(v.index);
        } else if constexpr (std::is_same_v<V, WeightedProjections>) {
          if (v.terms.empty()) throw InvalidArgument("target: weighted projection needs at least one term");
          for (const auto& [k, w] : v.terms) {
            (void)eigenset.at(k);
            if (!std::isfinite(w)) throw InvalidArgument("target: non-finite weight");
          }
        } else {
          if (!(v.width > 0.0)) throw InvalidArgument("target: local density width must be positive");
        }
      },
      t);
}

/// O psi
inline Wavefunction apply_target(const TargetSpec& t, const Wavefunction& psi, const EigenSet& eigenset) {
  validate(t, eigenset);
  return std::visit(
      [&](const auto& v) -> Wavefunction {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, Projection>) {
          const auto& phi = eigenset.at(v.index);
          return inner(phi, psi) * phi;
        } else if constexpr (std::is_same_v<V, WeightedProjections>) {
          Wavefunction out(psi.grid());
          for (const auto& [k, w] : v.terms) {
            const auto& phi = eigenset.at(k);
            out.axpy(w * inner(phi, psi), phi);
          }
          return out;
        } else {
          Wavefunction out = psi;
          const Grid& g = psi.grid();
          for (std::size_t i = 0; i < g.size(); ++i) out[i] *= detail::gaussian_delta(g.x(i), v);
          return out;
        }
      },
      t);
}

/// J1 = <psi|O|psi>; for a projection this is the yield |<phi_f|psi>|^2.
inline double target_expectation(const TargetSpec& t, const Wavefunction& psi, const EigenSet& eigenset) {
  if (const auto* p = std::get_if<Projection>(&t)) return std::norm(inner(eigenset.at(p->index), psi));
  return inner(psi, apply_target(t, psi, eigenset)).real();
}

}  // namespace qoct
