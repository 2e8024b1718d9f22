#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "gonosim/errors.hpp"
#include "gonosim/numeric.hpp"

namespace gonosim {

// Genotype frequencies (XX, XX^h, XY, X^hY). Valid states are nonnegative,
// sum to 1 and avoid the degenerate set {x+y=0 or u+v=0} where the evolution
// operator is undefined.
template <class S>
struct PopulationState {
  S x{}, y{}, u{}, v{};

  friend bool operator==(const PopulationState&, const PopulationState&) = default;
};

// Carrier-to-healthy ratios (alpha, beta) = (y/x, v/u). Values produced by
// twice-iterated states lie in the rectangle {0<=alpha<=4, 0<=beta<=1};
// the type itself only requires the closed positive quadrant.
template <class S>
struct ReducedState {
  S alpha{}, beta{};

  friend bool operator==(const ReducedState&, const ReducedState&) = default;
};

// Unconstrained nonnegative coordinates for the unnormalized variant.
template <class S>
struct RawState4 {
  S x{}, y{}, u{}, v{};

  friend bool operator==(const RawState4&, const RawState4&) = default;
};

// Float-mode guard against the degenerate set; exact mode tests equality with
// zero instead.
inline constexpr double kDegenerateGuard = 1e-300;
inline constexpr double kDefaultSumTol = 1e-12;

template <class S>
S state_sum(const PopulationState<S>& s) {
  return S(s.x + s.y + s.u + s.v);
}

template <class S>
PopulationState<S> equilibrium() {
  using T = scalar_traits<S>;
  return {T::from_fraction(1, 2), T::from_fraction(0, 1),
          T::from_fraction(1, 2), T::from_fraction(0, 1)};
}

template <class S>
S l1_distance(const PopulationState<S>& a, const PopulationState<S>& b) {
  using T = scalar_traits<S>;
  return S(T::abs(a.x - b.x) + T::abs(a.y - b.y) + T::abs(a.u - b.u) + T::abs(a.v - b.v));
}

template <class S>
S l1_distance(const ReducedState<S>& a, const ReducedState<S>& b) {
  using T = scalar_traits<S>;
  return S(T::abs(a.alpha - b.alpha) + T::abs(a.beta - b.beta));
}

// Checks nonnegativity, the simplex constraint and distance from the
// degenerate set. Float sums within tol of 1 are renormalized so downstream
// arithmetic sees an exact-simplex state; exact sums must equal 1.
template <class S>
PopulationState<S> validate_population(const S& x, const S& y, const S& u, const S& v,
                                       double tol = kDefaultSumTol) {
  using T = scalar_traits<S>;
  const S* comps[4] = {&x, &y, &u, &v};
  const char* names[4] = {"x", "y", "u", "v"};
  for (int i = 0; i < 4; ++i) {
    if (!T::finite(*comps[i]))
      fail(ErrorCode::NonFiniteComponent, std::string(names[i]) + " is not finite");
    if (*comps[i] < 0)
      fail(ErrorCode::NegativeComponent,
           std::string(names[i]) + " = " + format_scalar(*comps[i]));
  }
  S sum = S(x + y + u + v);
  PopulationState<S> s{x, y, u, v};
  if constexpr (T::exact) {
    if (sum != 1)
      fail(ErrorCode::SumOutOfTolerance, "sum = " + format_scalar(sum));
    if (x + y == 0 || u + v == 0)
      fail(ErrorCode::DegenerateSex, "x+y or u+v vanishes");
  } else {
    if (T::abs(sum - 1) > tol)
      fail(ErrorCode::SumOutOfTolerance, "sum = " + format_scalar(sum));
    s.x = x / sum;
    s.y = y / sum;
    s.u = u / sum;
    s.v = v / sum;
    if (s.x + s.y < kDegenerateGuard || s.u + s.v < kDegenerateGuard)
      fail(ErrorCode::DegenerateSex, "x+y or u+v vanishes");
  }
  return s;
}

template <class S>
PopulationState<S> validate_population(const PopulationState<S>& s, double tol = kDefaultSumTol) {
  return validate_population(s.x, s.y, s.u, s.v, tol);
}

template <class S>
std::string format_state(const PopulationState<S>& s) {
  return "(" + format_scalar(s.x) + ", " + format_scalar(s.y) + ", " +
         format_scalar(s.u) + ", " + format_scalar(s.v) + ")";
}

template <class S>
std::string format_state(const ReducedState<S>& r) {
  return "(" + format_scalar(r.alpha) + ", " + format_scalar(r.beta) + ")";
}

template <class S>
std::string format_state(const RawState4<S>& s) {
  return "(" + format_scalar(s.x) + ", " + format_scalar(s.y) + ", " +
         format_scalar(s.u) + ", " + format_scalar(s.v) + ")";
}

namespace detail {

inline std::vector<std::string_view> split_csv(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = text.find(',', start);
    if (pos == std::string_view::npos) {
      out.push_back(text.substr(start));
      break;
    }
    out.push_back(text.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

}  // namespace detail

// Parses "x,y,u,v" where each entry is a decimal or a fraction, normalizes by
// the sum (which must be within tol of 1) and validates.
template <class S>
PopulationState<S> parse_population(std::string_view text, double tol = kDefaultSumTol) {
  auto parts = detail::split_csv(text);
  if (parts.size() != 4)
    fail(ErrorCode::BadInput, "expected 4 comma-separated components");
  std::array<S, 4> c;
  for (int i = 0; i < 4; ++i) c[i] = parse_scalar<S>(parts[i]);
  if constexpr (scalar_traits<S>::exact) {
    S sum = S(c[0] + c[1] + c[2] + c[3]);
    for (auto& q : c)
      if (q < 0) fail(ErrorCode::NegativeComponent, "component " + format_scalar(q));
    if (sum == 0) fail(ErrorCode::SumOutOfTolerance, "sum = 0");
    if (scalar_traits<S>::abs(S(sum - 1)) > tol)
      fail(ErrorCode::SumOutOfTolerance, "sum = " + format_scalar(sum));
    for (auto& q : c) q /= sum;
  }
  return validate_population(c[0], c[1], c[2], c[3], tol);
}

template <class S>
std::size_t state_bits(const PopulationState<S>& s) {
  return scalar_bits(s.x) + scalar_bits(s.y) + scalar_bits(s.u) + scalar_bits(s.v);
}

}  // namespace gonosim
