#pragma once

#include <array>

#include "gonosim/errors.hpp"
#include "gonosim/numeric.hpp"
#include "gonosim/state.hpp"

namespace gonosim {

// Closed forms for the hemophilia system. apply_W agrees exactly with the
// table-driven apply_general; keeping both lets each serve as the other's
// oracle.

namespace detail {

// One evolution step as a plain map on R^4, no validation or renormalization.
// Works for any field-like scalar; jacobian code instantiates it with
// extended precision types.
template <class R>
std::array<R, 4> evolution_map(const std::array<R, 4>& s) {
  const R x = s[0], y = s[1], u = s[2], v = s[3];
  const R d = (x + y) * (u + v);
  return {
      (2 * x * u + y * u) / (4 * d),
      (6 * x * v + 3 * y * u + 4 * y * v) / (12 * d),
      (6 * x * u + 6 * x * v + 3 * y * u + 4 * y * v) / (12 * d),
      (3 * y * u + 4 * y * v) / (12 * d),
  };
}

// One reduced-system step on the ratio coordinates, no domain gate.
template <class R>
std::array<R, 2> ratio_map(const std::array<R, 2>& r) {
  const R a = r[0], b = r[1];
  const R t = 3 * a + 4 * a * b;
  return {(6 * b + t) / (6 + 3 * a), t / (6 + 6 * b + t)};
}

}  // namespace detail

template <class S>
PopulationState<S> apply_W(const PopulationState<S>& s) {
  bool degenerate;
  if constexpr (scalar_traits<S>::exact)
    degenerate = (s.x + s.y == 0 || s.u + s.v == 0);
  else
    degenerate = !(s.x + s.y >= kDegenerateGuard && s.u + s.v >= kDegenerateGuard);
  if (degenerate) fail(ErrorCode::DegenerateSex, "input frequencies at " + format_state(s));
  auto out = detail::evolution_map<S>({s.x, s.y, s.u, s.v});
  return validate_population(out[0], out[1], out[2], out[3]);
}

// Domain gate for the reduced system: the closed positive quadrant. The
// rectangle {alpha<=4, beta<=1} is where twice-iterated orbits live, but the
// map itself (and the round trip with reduce on arbitrary valid states) is
// defined for any nonnegative ratios.
template <class S>
void require_ratio_domain(const ReducedState<S>& r) {
  using T = scalar_traits<S>;
  if (!T::finite(r.alpha) || !T::finite(r.beta))
    fail(ErrorCode::DomainViolation, "reduced state " + format_state(r));
  if (r.alpha < 0 || r.beta < 0)
    fail(ErrorCode::DomainViolation, "reduced state " + format_state(r));
}

template <class S>
ReducedState<S> apply_F(const ReducedState<S>& r) {
  require_ratio_domain(r);
  auto out = detail::ratio_map<S>({r.alpha, r.beta});
  return {out[0], out[1]};
}

// (alpha, beta) = (y/x, v/u); requires positive sex-wise healthy frequencies.
template <class S>
ReducedState<S> reduce(const PopulationState<S>& s) {
  if (s.x == 0 || s.u == 0)
    fail(ErrorCode::ZeroDenominator, "reduce at " + format_state(s));
  return {S(s.y / s.x), S(s.v / s.u)};
}

// The successor state shared by every state with ratios r: returns W(s) for
// any valid s with reduce(s) = r.
template <class S>
PopulationState<S> reconstruct_next(const ReducedState<S>& r) {
  require_ratio_domain(r);
  const S a = r.alpha, b = r.beta;
  const S scale = S(4 * (1 + a) * (1 + b));
  const S xn = S((2 + a) / scale);
  const S un = S((6 + 6 * b + 3 * a + 4 * a * b) / (3 * scale));
  const ReducedState<S> next = apply_F(r);
  return validate_population(xn, S(next.alpha * xn), un, S(next.beta * un));
}

}  // namespace gonosim
