#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gonosim/cross_table.hpp"
#include "gonosim/errors.hpp"
#include "gonosim/operators.hpp"
#include "gonosim/state.hpp"

namespace gonosim {

enum class StopReason { Converged, BudgetExhausted, DegenerateSex, ExactCapExceeded };

inline const char* to_string(StopReason r) noexcept {
  switch (r) {
    case StopReason::Converged: return "Converged";
    case StopReason::BudgetExhausted: return "BudgetExhausted";
    case StopReason::DegenerateSex: return "DegenerateSex";
    case StopReason::ExactCapExceeded: return "ExactCapExceeded";
  }
  return "Unknown";
}

struct TrajectoryOptions {
  std::size_t max_steps = 1000;
  // eps <= 0 disables the convergence test. With a target the test is L1
  // distance to it (checked before the first step as well); without one it is
  // the successive-step L1 difference.
  double eps = 0.0;
  double sum_tol = kDefaultSumTol;
  // Exact-mode guards. Canonical state size roughly doubles every step, so a
  // step cap alone does not bound memory; the bit cap does.
  std::size_t exact_step_cap = 64;
  std::size_t exact_bit_cap = std::size_t(1) << 20;
};

template <class S>
struct Trajectory {
  std::vector<PopulationState<S>> states;  // states[0] is the initial state
  // reduced[k] = reduce(states[k + 2]); ratio coordinates are meaningful from
  // the second iterate onward. May be shorter than states.size() - 2 if a
  // later state has a vanishing x or u (impossible for the hemophilia table).
  std::vector<ReducedState<S>> reduced;
  StopReason stop_reason = StopReason::BudgetExhausted;
  std::size_t steps_taken = 0;
};

// Iterates the normalized operator, recording every state. Cap hits are
// reported through stop_reason, never as failures.
template <class S>
Trajectory<S> iterate(const GonosomalOperator<S>& op, const PopulationState<S>& start,
                      const TrajectoryOptions& opts = {},
                      const std::optional<PopulationState<S>>& target = std::nullopt) {
  Trajectory<S> traj;
  traj.states.push_back(validate_population(start, opts.sum_tol));
  traj.states.reserve(std::min<std::size_t>(opts.max_steps + 1, 1 << 16));

  auto record_reduced = [&traj](const PopulationState<S>& s) {
    if (s.x == 0 || s.u == 0) return false;
    traj.reduced.push_back(reduce(s));
    return true;
  };

  bool reduced_open = true;
  auto converged = [&](const PopulationState<S>& s, const PopulationState<S>* prev) {
    if (opts.eps <= 0) return false;
    if (target) return scalar_traits<S>::to_double(l1_distance(s, *target)) < opts.eps;
    if (!prev) return false;
    return scalar_traits<S>::to_double(l1_distance(s, *prev)) < opts.eps;
  };

  if (converged(traj.states[0], nullptr)) {
    traj.stop_reason = StopReason::Converged;
    return traj;
  }
  // The closed-form step is the hemophilia table evaluated with fewer
  // rational operations; both agree exactly for that table.
  const bool closed_form = op.table == hemophilia_cross_table<S>();
  while (traj.steps_taken < opts.max_steps) {
    if constexpr (scalar_traits<S>::exact) {
      if (traj.steps_taken >= opts.exact_step_cap) {
        traj.stop_reason = StopReason::ExactCapExceeded;
        return traj;
      }
    }
    PopulationState<S> next;
    try {
      next = closed_form ? apply_W(traj.states.back()) : apply_general(op, traj.states.back());
    } catch (const Error& e) {
      if (e.code() == ErrorCode::DegenerateSex) {
        traj.stop_reason = StopReason::DegenerateSex;
        return traj;
      }
      throw;
    }
    traj.states.push_back(next);
    ++traj.steps_taken;
    if (traj.states.size() >= 3 && reduced_open)
      reduced_open = record_reduced(traj.states.back());
    if (converged(next, &traj.states[traj.states.size() - 2])) {
      traj.stop_reason = StopReason::Converged;
      return traj;
    }
    if constexpr (scalar_traits<S>::exact) {
      if (state_bits(next) > opts.exact_bit_cap) {
        traj.stop_reason = StopReason::ExactCapExceeded;
        return traj;
      }
    }
  }
  traj.stop_reason = StopReason::BudgetExhausted;
  return traj;
}

enum class UnnormalizedVerdict { Origin, Infinity, Undecided };

inline const char* to_string(UnnormalizedVerdict v) noexcept {
  switch (v) {
    case UnnormalizedVerdict::Origin: return "Origin";
    case UnnormalizedVerdict::Infinity: return "Infinity";
    case UnnormalizedVerdict::Undecided: return "Undecided";
  }
  return "Unknown";
}

struct UnnormalizedOptions {
  std::size_t max_steps = 1000;
  double origin_eps = 1e-12;   // max coordinate below this decides Origin
  double infinity_cap = 1e12;  // max coordinate above this decides Infinity
  std::size_t exact_step_cap = 64;
  std::size_t exact_bit_cap = std::size_t(1) << 20;
};

template <class S>
struct UnnormalizedOrbit {
  std::vector<RawState4<S>> states;
  UnnormalizedVerdict verdict = UnnormalizedVerdict::Undecided;
  std::size_t steps_taken = 0;
};

template <class S>
std::size_t state_bits(const RawState4<S>& s) {
  return scalar_bits(s.x) + scalar_bits(s.y) + scalar_bits(s.u) + scalar_bits(s.v);
}

// Iterates the unnormalized variant and reports which attractor the orbit
// reached. The homogeneous degree-2 structure sends orbits to the origin or
// to infinity; Undecided means the budget (or exact cap) ran out first.
template <class S>
UnnormalizedOrbit<S> iterate_unnormalized(const GonosomalOperator<S>& op, const RawState4<S>& start,
                                          const UnnormalizedOptions& opts = {}) {
  using T = scalar_traits<S>;
  UnnormalizedOrbit<S> orbit;
  orbit.states.push_back(start);
  auto decide = [&opts](const RawState4<S>& s) {
    S mx = s.x;
    for (const S& c : {s.y, s.u, s.v})
      if (c > mx) mx = c;
    if (mx < opts.origin_eps) return UnnormalizedVerdict::Origin;
    if (mx > opts.infinity_cap) return UnnormalizedVerdict::Infinity;
    return UnnormalizedVerdict::Undecided;
  };
  orbit.verdict = decide(start);
  while (orbit.verdict == UnnormalizedVerdict::Undecided && orbit.steps_taken < opts.max_steps) {
    if constexpr (T::exact) {
      if (orbit.steps_taken >= opts.exact_step_cap ||
          state_bits(orbit.states.back()) > opts.exact_bit_cap)
        break;
    }
    orbit.states.push_back(apply_unnormalized(op, orbit.states.back()));
    ++orbit.steps_taken;
    orbit.verdict = decide(orbit.states.back());
  }
  return orbit;
}

}  // namespace gonosim
