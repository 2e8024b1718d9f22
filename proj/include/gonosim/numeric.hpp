#pragma once

#include <gmpxx.h>

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>

#include "gonosim/errors.hpp"

namespace gonosim {

// Run-wide arithmetic mode. Exact computes with canonical arbitrary-precision
// rationals, F64 with IEEE binary64. The mode is chosen once per run; types
// never mix within a computation.
enum class Arithmetic { Exact, F64 };

inline const char* to_string(Arithmetic a) noexcept {
  return a == Arithmetic::Exact ? "exact" : "f64";
}

using Rational = mpq_class;

template <class S>
struct scalar_traits;

template <>
struct scalar_traits<double> {
  static constexpr bool exact = false;
  static double from_fraction(long num, long den) { return double(num) / double(den); }
  static bool finite(double v) { return std::isfinite(v); }
  static double abs(double v) { return std::fabs(v); }
  static double to_double(double v) { return v; }
};

template <>
struct scalar_traits<Rational> {
  static constexpr bool exact = true;
  static Rational from_fraction(long num, long den) {
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  static bool finite(const Rational&) { return true; }
  static Rational abs(const Rational& v) { return v < 0 ? Rational(-v) : v; }
  static double to_double(const Rational& v) { return v.get_d(); }
};

// Shortest decimal string that round-trips through binary64.
inline std::string format_scalar(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

// Canonical "p" or "p/q".
inline std::string format_scalar(const Rational& v) {
  return v.get_str();
}

inline std::size_t scalar_bits(double) { return 64; }

// Total size of the canonical representation, in bits.
inline std::size_t scalar_bits(const Rational& v) {
  return mpz_sizeinbase(v.get_num().get_mpz_t(), 2) +
         mpz_sizeinbase(v.get_den().get_mpz_t(), 2);
}

// The exact binary64 value as a rational, no decimal re-interpretation.
inline Rational rational_from_double(double v) {
  if (!std::isfinite(v)) fail(ErrorCode::NonFiniteComponent, "cannot convert to rational");
  return Rational(v);
}

namespace detail {

inline bool parse_long(std::string_view text, long& out) {
  auto res = std::from_chars(text.data(), text.data() + text.size(), out);
  return res.ec == std::errc() && res.ptr == text.data() + text.size();
}

}  // namespace detail

// Accepts "p/q" fractions and decimal literals. Decimals are taken at their
// binary64 value, so both modes agree on what a given literal means.
template <class S>
S parse_scalar(std::string_view text) {
  if (text.empty()) fail(ErrorCode::BadInput, "empty numeric token");
  auto slash = text.find('/');
  if (slash != std::string_view::npos) {
    std::string num(text.substr(0, slash));
    std::string den(text.substr(slash + 1));
    if (num.empty() || den.empty()) fail(ErrorCode::BadInput, "malformed fraction '" + std::string(text) + "'");
    mpz_class n, d;
    if (n.set_str(num, 10) != 0 || d.set_str(den, 10) != 0)
      fail(ErrorCode::BadInput, "malformed fraction '" + std::string(text) + "'");
    if (d == 0) fail(ErrorCode::ZeroDenominator, "fraction '" + std::string(text) + "'");
    Rational q(n, d);
    q.canonicalize();
    if constexpr (scalar_traits<S>::exact)
      return q;
    else
      return q.get_d();
  }
  std::string buf(text);
  char* end = nullptr;
  double v = std::strtod(buf.c_str(), &end);
  if (end != buf.c_str() + buf.size())
    fail(ErrorCode::BadInput, "malformed number '" + buf + "'");
  if (!std::isfinite(v)) fail(ErrorCode::NonFiniteComponent, "number '" + buf + "'");
  if constexpr (scalar_traits<S>::exact)
    return rational_from_double(v);
  else
    return v;
}

}  // namespace gonosim
