#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "gonosim/numeric.hpp"
#include "gonosim/operators.hpp"
#include "gonosim/state.hpp"
#include "gonosim/trajectory.hpp"

namespace gonosim {

struct CheckResult {
  std::string check_id;
  std::size_t samples = 0;
  std::size_t failures = 0;  // number of offending samples
  // Signed margin of the tightest constraint: positive means violated by that
  // amount, negative means satisfied with that much slack.
  double worst_violation = -std::numeric_limits<double>::infinity();
  double tolerance = 0;
  std::string witness;  // offending input and constraint, when failures > 0
  std::string note;     // diagnostics: depth stats, tightness, refinements

  bool passed() const { return failures == 0; }
};

struct SuiteConfig {
  std::size_t sample_count = 1000;
  std::uint64_t seed = 42;
  Arithmetic arithmetic = Arithmetic::Exact;
  std::size_t orbit_length = 30;
  unsigned workers = 1;
  std::size_t exact_step_cap = 64;
  std::size_t exact_bit_cap = std::size_t(1) << 20;
  std::string filter;  // substring over check ids; empty selects every check
};

// Per-check float tolerances; exact mode uses zero everywhere.
inline double lemma_slack(Arithmetic a) { return a == Arithmetic::Exact ? 0.0 : 1e-12; }
inline double commutation_slack(Arithmetic a) { return a == Arithmetic::Exact ? 0.0 : 1e-10; }

namespace verify_detail {

template <class R>
using Vec4 = std::array<R, 4>;
template <class R>
using Vec2 = std::array<R, 2>;

// Inequality margins are decided from binary64 shadows of the orbit when the
// value is clearly away from zero, and certified in exact arithmetic inside
// this band. The shadow expressions involve a handful of operations on
// [0, 4]-sized values, so their absolute error stays below 1e-13; decisions
// remain exact while skipping almost all big-rational subtractions.
inline constexpr double kCertifyBand = 1e-12;

struct Finding {
  double margin = -std::numeric_limits<double>::infinity();
  bool violated = false;
  std::string witness;
};

template <class S, class ExactFn, class WitnessFn>
void certified_record(Finding& f, double approx, double tol, ExactFn&& exact, WitnessFn&& wit) {
  bool over;
  double m = approx;
  if constexpr (scalar_traits<S>::exact) {
    if (approx > kCertifyBand) {
      over = true;
    } else if (approx < -kCertifyBand) {
      over = false;
    } else {
      const S em = exact();
      over = em > 0;
      m = scalar_traits<S>::to_double(em);
    }
    if (over && m <= tol)
      m = std::nextafter(tol, std::numeric_limits<double>::infinity());
  } else {
    over = approx > tol;
  }
  if (m > f.margin) {
    f.margin = m;
    f.witness = wit();
  }
  f.violated = f.violated || over;
}

template <class S>
Vec4<double> shadow4(const PopulationState<S>& s) {
  using T = scalar_traits<S>;
  return {T::to_double(s.x), T::to_double(s.y), T::to_double(s.u), T::to_double(s.v)};
}

template <class S>
Vec4<S> lift4(const PopulationState<S>& s) {
  return {s.x, s.y, s.u, s.v};
}

template <class S>
Vec2<double> shadow2(const ReducedState<S>& r) {
  using T = scalar_traits<S>;
  return {T::to_double(r.alpha), T::to_double(r.beta)};
}

template <class S>
Vec2<S> lift2(const ReducedState<S>& r) {
  return {r.alpha, r.beta};
}

// Image ordering x <= u, v <= y <= u, holding from the first iterate on.
inline const char* const kOrderingLabels[3] = {"x<=u", "v<=y", "y<=u"};

template <class R>
R ordering_constraint(int k, const Vec4<R>& s) {
  switch (k) {
    case 0: return R(s[0] - s[2]);
    case 1: return R(s[3] - s[1]);
    default: return R(s[1] - s[2]);
  }
}

// The four two-step chains with the middle expressions evaluated literally
// from the previous state's coordinates.
inline const char* const kChainLabels[16] = {
    "1/8 <= u/(4(u+v))",
    "u/(4(u+v)) <= x_next",
    "x_next <= u/(2(u+v))",
    "u/(2(u+v)) <= 1/2",
    "0 <= v/(3(u+v))",
    "v/(3(u+v)) <= y_next",
    "y_next <= (u+2v)/(4(u+v))",
    "(u+2v)/(4(u+v)) <= 1/2",
    "1/4 <= (2x+y)/(4(x+y))",
    "(2x+y)/(4(x+y)) <= u_next",
    "u_next <= (3x+2y)/(6(x+y))",
    "(3x+2y)/(6(x+y)) <= 1/2",
    "0 <= y/(4(x+y))",
    "y/(4(x+y)) <= v_next",
    "v_next <= y/(3(x+y))",
    "y/(3(x+y)) <= 1/3",
};

template <class R>
R chain_constraint(int k, const Vec4<R>& s, const Vec4<R>& n) {
  const R x = s[0], y = s[1], u = s[2], v = s[3];
  const R males = u + v;
  const R females = x + y;
  switch (k) {
    case 0: return R(R(1) / 8 - u / (4 * males));
    case 1: return R(u / (4 * males) - n[0]);
    case 2: return R(n[0] - u / (2 * males));
    case 3: return R(u / (2 * males) - R(1) / 2);
    case 4: return R(R(0) - v / (3 * males));
    case 5: return R(v / (3 * males) - n[1]);
    case 6: return R(n[1] - (u + 2 * v) / (4 * males));
    case 7: return R((u + 2 * v) / (4 * males) - R(1) / 2);
    case 8: return R(R(1) / 4 - (2 * x + y) / (4 * females));
    case 9: return R((2 * x + y) / (4 * females) - n[2]);
    case 10: return R(n[2] - (3 * x + 2 * y) / (6 * females));
    case 11: return R((3 * x + 2 * y) / (6 * females) - R(1) / 2);
    case 12: return R(R(0) - y / (4 * females));
    case 13: return R(y / (4 * females) - n[3]);
    case 14: return R(n[3] - y / (3 * females));
    default: return R(y / (3 * females) - R(1) / 3);
  }
}

// Ratio rectangle membership {0 <= alpha <= 4, 0 <= beta <= 1}.
inline const char* const kRatioLabels[4] = {"0<=alpha", "alpha<=4", "0<=beta", "beta<=1"};

template <class R>
R ratio_constraint(int k, const Vec2<R>& r) {
  switch (k) {
    case 0: return R(R(0) - r[0]);
    case 1: return R(r[0] - 4);
    case 2: return R(R(0) - r[1]);
    default: return R(r[1] - 1);
  }
}

// Carrier coordinates against half their own ratios: y at step m+2 against
// alpha at reduced index m, and v against beta.
inline const char* const kCarrierLabels[2] = {"y<=alpha/2", "v<=beta/2"};

template <class R>
R carrier_constraint(int k, const Vec2<R>& r, const Vec4<R>& s) {
  if (k == 0) return R(s[1] - r[0] / 2);
  return R(s[3] - r[1] / 2);
}

template <class S>
std::string orbit_witness(const std::vector<PopulationState<S>>& states, std::size_t step,
                          const char* label) {
  return "start=" + format_state(states[0]) + " step=" + std::to_string(step) + " " + label;
}

template <class S>
Finding ordering_finding(const std::vector<PopulationState<S>>& states, double tol) {
  Finding f;
  for (std::size_t t = 1; t < states.size(); ++t) {
    const auto sd = shadow4(states[t]);
    for (int k = 0; k < 3; ++k)
      certified_record<S>(
          f, ordering_constraint<double>(k, sd), tol,
          [&, t, k] { return ordering_constraint<S>(k, lift4(states[t])); },
          [&, t, k] { return orbit_witness(states, t, kOrderingLabels[k]); });
  }
  return f;
}

template <class S>
Finding chain_finding(const std::vector<PopulationState<S>>& states, double tol) {
  Finding f;
  for (std::size_t t = 1; t + 1 < states.size(); ++t) {
    const auto sd = shadow4(states[t]);
    const auto nd = shadow4(states[t + 1]);
    for (int k = 0; k < 16; ++k)
      certified_record<S>(
          f, chain_constraint<double>(k, sd, nd), tol,
          [&, t, k] { return chain_constraint<S>(k, lift4(states[t]), lift4(states[t + 1])); },
          [&, t, k] { return orbit_witness(states, t, kChainLabels[k]); });
  }
  return f;
}

template <class S>
Finding ratio_domain_finding(const std::vector<ReducedState<S>>& reduced, double tol,
                             const std::string& origin) {
  Finding f;
  for (std::size_t m = 0; m < reduced.size(); ++m) {
    const auto rd = shadow2(reduced[m]);
    for (int k = 0; k < 4; ++k)
      certified_record<S>(
          f, ratio_constraint<double>(k, rd), tol,
          [&, m, k] { return ratio_constraint<S>(k, lift2(reduced[m])); },
          [&, m, k] {
            return origin + " reduced_index=" + std::to_string(m) + " value=" +
                   format_state(reduced[m]) + " " + kRatioLabels[k];
          });
  }
  return f;
}

// Reduced sums nonincreasing from reduced index 1 on; the first reduced step
// may still increase the sum.
template <class S>
Finding monotone_finding(const std::vector<ReducedState<S>>& reduced, double tol,
                         const std::string& origin, std::size_t* comparisons = nullptr) {
  Finding f;
  for (std::size_t m = 1; m + 1 < reduced.size(); ++m) {
    const auto a = shadow2(reduced[m]);
    const auto b = shadow2(reduced[m + 1]);
    if (comparisons) ++(*comparisons);
    certified_record<S>(
        f, (b[0] + b[1]) - (a[0] + a[1]), tol,
        [&, m] {
          return S((reduced[m + 1].alpha + reduced[m + 1].beta) -
                   (reduced[m].alpha + reduced[m].beta));
        },
        [&, m] { return origin + " reduced_index=" + std::to_string(m + 1) + " sum increased"; });
  }
  return f;
}

template <class S>
Finding carrier_bound_finding(const std::vector<PopulationState<S>>& states,
                              const std::vector<ReducedState<S>>& reduced, double tol,
                              double* tightness = nullptr) {
  Finding f;
  for (std::size_t m = 0; m < reduced.size() && m + 2 < states.size(); ++m) {
    const auto rd = shadow2(reduced[m]);
    const auto sd = shadow4(states[m + 2]);
    for (int k = 0; k < 2; ++k)
      certified_record<S>(
          f, carrier_constraint<double>(k, rd, sd), tol,
          [&, m, k] { return carrier_constraint<S>(k, lift2(reduced[m]), lift4(states[m + 2])); },
          [&, m, k] { return orbit_witness(states, m + 2, kCarrierLabels[k]); });
    if (tightness) {
      if (rd[0] > 0) *tightness = std::max(*tightness, sd[1] / (rd[0] / 2));
      if (rd[1] > 0) *tightness = std::max(*tightness, sd[3] / (rd[1] / 2));
    }
  }
  return f;
}

}  // namespace verify_detail

CheckResult check_lemma1(const SuiteConfig& cfg);
CheckResult check_lemma2(const SuiteConfig& cfg);
CheckResult check_lemma3(const SuiteConfig& cfg);
CheckResult check_monotone_sum(const SuiteConfig& cfg);
CheckResult check_commutation(const SuiteConfig& cfg);
CheckResult check_y_v_decay(const SuiteConfig& cfg);
CheckResult check_boundary_stress(const SuiteConfig& cfg);
CheckResult check_fixed_point(const SuiteConfig& cfg);
CheckResult check_eigenvalues(const SuiteConfig& cfg);

// Pointwise residual |a + b - (alpha' + beta')| of the stationary-sum
// equation, defined on the cone {0 <= b <= a} inside the ratio rectangle.
double check_limit_equation(double a, double b);
CheckResult check_limit_equation_scan(const SuiteConfig& cfg);

// All checks in fixed order (boundary stress only in float mode), sharing one
// sampled orbit pool across the orbit-driven checks.
std::vector<CheckResult> run_suite(const SuiteConfig& cfg);

std::string format_report(const SuiteConfig& cfg, const std::vector<CheckResult>& results);

}  // namespace gonosim
