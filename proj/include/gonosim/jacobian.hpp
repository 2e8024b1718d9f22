#pragma once

#include <array>

#include "gonosim/linalg.hpp"
#include "gonosim/numeric.hpp"
#include "gonosim/operators.hpp"
#include "gonosim/state.hpp"

namespace gonosim {

// Hand-differentiated Jacobian of the ratio map. With t = 3a + 4ab and
// d = 6 + 6b + t:
//   da'/da = (18 + 6b) / (6 + 3a)^2      da'/db = (6 + 4a) / (6 + 3a)
//   db'/da = (3 + 4b)(6 + 6b) / d^2      db'/db = 6a / d^2
template <class S>
Mat2<S> jacobian_F(const ReducedState<S>& r) {
  require_ratio_domain(r);
  const S a = r.alpha, b = r.beta;
  const S p = S(6 + 3 * a);
  const S d = S(6 + 6 * b + 3 * a + 4 * a * b);
  Mat2<S> j;
  j.a11 = S((18 + 6 * b) / (p * p));
  j.a12 = S((6 + 4 * a) / p);
  j.a21 = S(((3 + 4 * b) * (6 + 6 * b)) / (d * d));
  j.a22 = S((6 * a) / (d * d));
  return j;
}

namespace detail {

// Central difference of the evolution map viewed as a map on R^4 near s.
template <class R>
Mat4<R> evolution_jacobian_central(const std::array<R, 4>& s, const R& h) {
  Mat4<R> j{};
  for (int col = 0; col < 4; ++col) {
    auto hi = s, lo = s;
    hi[col] += h;
    lo[col] -= h;
    const auto fh = evolution_map<R>(hi);
    const auto fl = evolution_map<R>(lo);
    for (int row = 0; row < 4; ++row) j[row][col] = (fh[row] - fl[row]) / (2 * h);
  }
  return j;
}

}  // namespace detail

// Finite-difference Jacobian of the evolution operator with one Richardson
// extrapolation step (h and h/2), leading error O(h^4).
template <class R>
Mat4<R> jacobian_W(const std::array<R, 4>& s, const R& h) {
  const R guard = R(1e-6) * h;
  if (!(s[0] + s[1] > h + guard) || !(s[2] + s[3] > h + guard))
    fail(ErrorCode::DegenerateSex, "finite differences would cross the degenerate set");
  const auto coarse = detail::evolution_jacobian_central<R>(s, h);
  const auto fine = detail::evolution_jacobian_central<R>(s, h / 2);
  Mat4<R> j{};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) j[r][c] = (4 * fine[r][c] - coarse[r][c]) / 3;
  return j;
}

inline Mat4d jacobian_W(const PopulationState<double>& s, double h = 1e-4) {
  return jacobian_W<double>({s.x, s.y, s.u, s.v}, h);
}

}  // namespace gonosim
