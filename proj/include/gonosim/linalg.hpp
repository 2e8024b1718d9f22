#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <optional>

#include "gonosim/errors.hpp"
#include "gonosim/numeric.hpp"

namespace gonosim {

template <class S>
struct Mat2 {
  // row-major: [[a11, a12], [a21, a22]]
  S a11{}, a12{}, a21{}, a22{};

  friend bool operator==(const Mat2&, const Mat2&) = default;
};

template <class R>
using Mat4 = std::array<std::array<R, 4>, 4>;

using Mat2d = Mat2<double>;
using Mat4d = Mat4<double>;

// Stable quadratic-formula eigenvalues, largest modulus first.
std::array<std::complex<double>, 2> eigenvalues_2x2(const Mat2d& m);

// Rational spectrum when the characteristic discriminant is a perfect square
// (nonnegative with square numerator and denominator); nullopt otherwise.
// Result ordered largest first.
std::optional<std::array<Rational, 2>> eigenvalues_2x2_exact(const Mat2<Rational>& m);

// Monic characteristic polynomial coefficients [1, c1, c2, c3, c4] of a 4x4
// matrix (Faddeev-LeVerrier).
std::array<double, 5> characteristic_polynomial(const Mat4d& m);

struct RootOptions {
  std::size_t max_sweeps = 10000;
  double residual_tol = 1e-12;
};

// All roots of a monic quartic via Durand-Kerner simultaneous iteration.
// Deterministic start configuration; raises RootFindingStalled if the sweep
// budget runs out before every residual is below tolerance.
std::array<std::complex<double>, 4> quartic_roots(const std::array<double, 5>& coeffs,
                                                  const RootOptions& opts = {});

// Eigenvalues sorted by modulus descending, ties by argument ascending.
std::array<std::complex<double>, 4> eigenvalues_4x4(const Mat4d& m, const RootOptions& opts = {});

// Gaussian elimination with partial pivoting; templated so the fixed point
// refinement can run the same solve in extended precision.
template <class R>
std::array<R, 3> solve3(std::array<std::array<R, 3>, 3> a, std::array<R, 3> b) {
  auto abs_r = [](const R& v) { return v < 0 ? R(-v) : v; };
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int row = col + 1; row < 3; ++row)
      if (abs_r(a[row][col]) > abs_r(a[pivot][col])) pivot = row;
    if (!(abs_r(a[pivot][col]) > R(0)))
      fail(ErrorCode::NoConvergence, "singular linear system in refinement");
    if (pivot != col) {
      std::swap(a[pivot], a[col]);
      std::swap(b[pivot], b[col]);
    }
    for (int row = col + 1; row < 3; ++row) {
      const R f = a[row][col] / a[col][col];
      for (int k = col; k < 3; ++k) a[row][k] -= f * a[col][k];
      b[row] -= f * b[col];
    }
  }
  std::array<R, 3> x{};
  for (int row = 2; row >= 0; --row) {
    R acc = b[row];
    for (int k = row + 1; k < 3; ++k) acc -= a[row][k] * x[k];
    x[row] = acc / a[row][row];
  }
  return x;
}

}  // namespace gonosim
