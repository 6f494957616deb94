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

// Iterative pulse optimization with immediate feedback.
//
// Iteration k:
//   1. propagate psi(0) forward with eps_k to psi(T); yield J1 = <psi(T)|O|psi(T)>
//   2. chi(T) = O psi(T)
//   3. sweep backward from T to 0, carrying psi with eps_k (no trajectory is
//      stored) and chi with the feedback field
//        eps~(t) = -Im<chi(t)|mu|psi(t)> / alpha_k
//   4. build eps_{k+1} from eps~:
//        fixed fluence : rescale so that the fluence equals E0
//        spectral      : eps_{k+1} = F^-1[f(w) F[eps~]], alpha fixed
//        combined      : filter, then rescale to E0
// The rescale sets alpha_{k+1} = sqrt(int (alpha_k eps~)^2 dt / E0) and
// eps_{k+1} = (alpha_k / alpha_{k+1}) eps~.

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "qoct/error.hpp"
#include "qoct/field.hpp"
#include "qoct/filters.hpp"
#include "qoct/grid.hpp"
#include "qoct/model.hpp"
#include "qoct/propagator.hpp"

namespace qoct {

/// Fluence held at E0 by the Lagrange multiplier alpha.
struct FixedFluence {
  double e0 = 0.0;
};

/// Fixed penalty alpha on the fluence, spectrum restricted by a filter.
struct SpectralPenalty {
  double alpha = 0.0;
  FilterSpec filter = AllPass{};
};

/// Spectrum restricted by a filter and fluence held at E0.
struct Combined {
  double e0 = 0.0;
  FilterSpec filter = AllPass{};
};

using Scheme = std::variant<FixedFluence, SpectralPenalty, Combined>;

inline const char* scheme_name(const Scheme& s) {
  switch (s.index()) {
    case 0: return "fixed_fluence";
    case 1: return "spectral";
    default: return "combined";
  }
}

struct IterationRecord {
  std::size_t k = 0;
  double yield = 0.0;    ///< J1 of the forward propagation with eps_k
  double fluence = 0.0;  ///< fluence of eps_k
  double alpha = 0.0;    ///< multiplier / penalty used for the sweep of iteration k
  double j_total = 0.0;  ///< J1 minus the fluence term
};

struct OctConfig {
  Scheme scheme = FixedFluence{};
  TargetSpec target = Projection{1};
  Field guess;
  std::size_t initial_state = 0;
  std::size_t max_iters = 1000;
  double stop_yield = 0.9999;
  /// Keep psi snapshots of the best field's final re-propagation.
  bool store_trajectory = false;
  std::size_t sample_stride = 100;
  /// Called after every forward propagation with the record and the field eps_k.
  std::function<void(const IterationRecord&, const Field&)> on_iteration;
};

enum class OctStatus { reached_stop_yield, max_iterations, stalled, numerical_failure };

inline const char* to_string(OctStatus s) {
  switch (s) {
    case OctStatus::reached_stop_yield: return "reached_stop_yield";
    case OctStatus::max_iterations: return "max_iterations";
    case OctStatus::stalled: return "stalled";
    default: return "numerical_failure";
  }
}

struct OctResult {
  Field best_field;
  double best_yield = -std::numeric_limits<double>::infinity();
  std::size_t best_iteration = 0;
  std::vector<IterationRecord> records;
  Wavefunction final_state;
  OctStatus status = OctStatus::max_iterations;
  std::string message;
  std::vector<std::pair<double, Wavefunction>> trajectory;

  bool failed() const { return status == OctStatus::stalled || status == OctStatus::numerical_failure; }
};

/// alpha_0 = sqrt(fluence(guess) / E0)
inline double initial_alpha(const Field& guess, double e0) {
  if (!(e0 > 0.0)) throw InvalidArgument("initial_alpha: E0 must be positive");
  const double f = fluence(guess);
  if (!(f > 0.0))
    throw InvalidArgument("initial_alpha: the guess field has zero fluence; a zero field is a stationary point "
                          "of the functional (initial and target states are orthogonal) and the iteration can stall");
  return std::sqrt(f / e0);
}

/// -Im<chi|mu|psi> on the propagator's buffers.
inline double feedback_overlap(const Propagator::Buffer& chi, const Propagator::Buffer& psi, const Grid& grid) {
  double s = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const cplx c = chi[i];
    const cplx p = psi[i];
    // Im(conj(c) p)
    s += dipole(grid.x(i)) * (c.real() * p.imag() - c.imag() * p.real());
  }
  return -s * grid.dx();
}

/// Backward sweep of the storage-free scheme. Returns eps~ sampled on the
/// time grid of old_field.
inline Field backward_sweep(Propagator& prop, const Wavefunction& psi_T, const TargetSpec& target,
                            const Field& old_field, double alpha, const EigenSet& eigenset) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw InvalidArgument("backward_sweep: alpha must be positive");
  prop.check_field(old_field);
  const Grid& grid = prop.grid();
  auto psi = prop.load(psi_T);
  auto chi = prop.load(apply_target(target, psi_T, eigenset));
  const std::size_t steps = old_field.time_grid().n_steps();
  Field eps(old_field.time_grid());
  for (std::size_t n = steps; n > 0; --n) {
    eps[n] = feedback_overlap(chi, psi, grid) / alpha;
    prop.step(chi, eps[n], Direction::backward);
    prop.step(psi, old_field.step_value(n - 1), Direction::backward);
    if (n % Propagator::kNanCheckInterval == 0 && !(std::isfinite(eps[n]) && detail::all_finite(chi)))
      throw NumericalBlowup("backward_sweep: non-finite values at t = " + std::to_string(old_field.time_grid().t(n)));
  }
  eps[0] = feedback_overlap(chi, psi, grid) / alpha;
  if (!eps.all_finite()) throw NumericalBlowup("backward_sweep: non-finite feedback field");
  return eps;
}

struct FieldUpdate {
  Field field;
  double alpha = 0.0;
};

namespace detail {
// eps_{k+1} = (alpha_k / alpha_{k+1}) eps,  alpha_{k+1} = sqrt(int (alpha_k eps)^2 / E0)
inline FieldUpdate rescale_to_fluence(Field eps, double alpha_k, double e0, const char* what) {
  if (!(e0 > 0.0)) throw InvalidArgument("fluence update: E0 must be positive");
  Field scaled = eps;
  scaled *= alpha_k;
  const double f = fluence(scaled);
  if (!(f > 0.0) || !std::isfinite(f)) throw StalledError(what);
  const double alpha_next = std::sqrt(f / e0);
  eps *= alpha_k / alpha_next;
  return {std::move(eps), alpha_next};
}
}  // namespace detail

inline FieldUpdate update_fixed_fluence(const Field& eps_tilde, double alpha_k, double e0) {
  return detail::rescale_to_fluence(eps_tilde, alpha_k, e0, "optimization stalled: feedback field vanished");
}

/// Filtered fields keeping less than this share of the input fluence are
/// roundoff; the filter has annihilated the feedback.
inline constexpr double kAnnihilated = 1e-24;

namespace detail {
inline Field filter_feedback(const Field& eps_tilde, const FilterSpec& filter, const char* what) {
  Field out = apply_filter(filter, eps_tilde);
  if (!(fluence(out) > kAnnihilated * fluence(eps_tilde))) throw StalledError(what);
  return out;
}
}  // namespace detail

inline Field update_spectral(const Field& eps_tilde, const FilterSpec& filter) {
  return detail::filter_feedback(eps_tilde, filter, "optimization stalled: filtered field vanished");
}

inline FieldUpdate update_combined(const Field& eps_tilde, const FilterSpec& filter, double alpha_k, double e0) {
  constexpr const char* what = "constraint infeasible from current iterate: filtered field vanished";
  return detail::rescale_to_fluence(detail::filter_feedback(eps_tilde, filter, what), alpha_k, e0, what);
}

inline void validate(const Scheme& s) {
  std::visit(
      [](const auto& v) {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, SpectralPenalty>) {
          if (!(v.alpha > 0.0)) throw InvalidArgument("scheme: penalty alpha must be positive");
          validate(v.filter);
        } else {
          if (!(v.e0 > 0.0)) throw InvalidArgument("scheme: E0 must be positive");
          if constexpr (std::is_same_v<V, Combined>) validate(v.filter);
        }
      },
      s);
}

/// Runs the optimization. Failures inside the loop (stall, blow-up) end the
/// run early; the result carries the records gathered so far and the status.
inline OctResult optimize(const OctConfig& c, const Hamiltonian& h, const EigenSet& eigenset) {
  validate(c.scheme);
  validate(c.target, eigenset);
  if (c.max_iters < 1) throw InvalidArgument("optimize: max_iters must be >= 1");
  if (c.sample_stride < 1) throw InvalidArgument("optimize: sample_stride must be >= 1");
  if (!c.guess.all_finite()) throw InvalidArgument("optimize: guess field is not finite");
  if (!(fluence(c.guess) > 0.0))
    throw InvalidArgument("optimize: zero guess field rejected; it is a stationary point of the functional "
                          "(initial and target states are orthogonal) and the iteration can get stuck");
  const Wavefunction& psi0 = eigenset.at(c.initial_state);

  Propagator prop(h, c.guess.time_grid().dt());
  const bool penalty = std::holds_alternative<SpectralPenalty>(c.scheme);
  const double e0 = penalty ? 0.0 : (std::holds_alternative<FixedFluence>(c.scheme) ? std::get<FixedFluence>(c.scheme).e0
                                                                                      : std::get<Combined>(c.scheme).e0);
  double alpha = penalty ? std::get<SpectralPenalty>(c.scheme).alpha : initial_alpha(c.guess, e0);

  OctResult r;
  r.best_field = c.guess;
  Field eps = c.guess;
  try {
    for (std::size_t k = 0; k < c.max_iters; ++k) {
      const Wavefunction psi_T = prop.propagate(psi0, eps, Direction::forward);
      IterationRecord rec;
      rec.k = k;
      rec.yield = target_expectation(c.target, psi_T, eigenset);
      rec.fluence = fluence(eps);
      rec.alpha = alpha;
      rec.j_total = rec.yield - alpha * (rec.fluence - e0);
      r.records.push_back(rec);
      if (rec.yield > r.best_yield) {
        r.best_yield = rec.yield;
        r.best_iteration = k;
        r.best_field = eps;
      }
      if (c.on_iteration) c.on_iteration(rec, eps);
      if (rec.yield >= c.stop_yield) {
        r.status = OctStatus::reached_stop_yield;
        break;
      }
      if (k + 1 == c.max_iters) break;

      const Field eps_tilde = backward_sweep(prop, psi_T, c.target, eps, alpha, eigenset);
      std::visit(
          [&](const auto& s) {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, FixedFluence>) {
              auto u = update_fixed_fluence(eps_tilde, alpha, s.e0);
              eps = std::move(u.field);
              alpha = u.alpha;
            } else if constexpr (std::is_same_v<S, SpectralPenalty>) {
              eps = update_spectral(eps_tilde, s.filter);
            } else {
              auto u = update_combined(eps_tilde, s.filter, alpha, s.e0);
              eps = std::move(u.field);
              alpha = u.alpha;
            }
          },
          c.scheme);
    }
  } catch (const StalledError& e) {
    r.status = OctStatus::stalled;
    r.message = e.what();
  } catch (const NumericalBlowup& e) {
    r.status = OctStatus::numerical_failure;
    r.message = e.what();
  }

  Propagator::Observer keep;
  if (c.store_trajectory)
    keep = [&r](std::size_t, double t, const Wavefunction& psi) { r.trajectory.emplace_back(t, psi); };
  if (r.records.empty()) {
    r.final_state = psi0;
  } else {
    r.final_state = prop.propagate(psi0, r.best_field, Direction::forward, keep, c.sample_stride);
  }
  return r;
}

}  // namespace qoct
