#include "gonosim/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace gonosim {

std::array<std::complex<double>, 2> eigenvalues_2x2(const Mat2d& m) {
  const double tr = m.a11 + m.a22;
  const double det = m.a11 * m.a22 - m.a12 * m.a21;
  const double disc = tr * tr - 4 * det;
  std::array<std::complex<double>, 2> out;
  if (disc >= 0) {
    // roots of z^2 - tr z + det with the cancellation-free branch
    const double b = -tr;
    double r1, r2;
    if (b == 0 && det == 0) {
      r1 = r2 = 0;
    } else {
      const double q = -(b + std::copysign(std::sqrt(disc), b)) / 2;
      r1 = q;
      r2 = q != 0 ? det / q : 0;
    }
    out = {std::complex<double>(r1, 0), std::complex<double>(r2, 0)};
  } else {
    const double re = tr / 2, im = std::sqrt(-disc) / 2;
    out = {std::complex<double>(re, im), std::complex<double>(re, -im)};
  }
  if (std::abs(out[1]) > std::abs(out[0])) std::swap(out[0], out[1]);
  return out;
}

namespace {

bool exact_sqrt(const mpz_class& n, mpz_class& root) {
  if (n < 0) return false;
  if (mpz_perfect_square_p(n.get_mpz_t()) == 0) return false;
  mpz_sqrt(root.get_mpz_t(), n.get_mpz_t());
  return true;
}

}  // namespace

std::optional<std::array<Rational, 2>> eigenvalues_2x2_exact(const Mat2<Rational>& m) {
  const Rational tr = m.a11 + m.a22;
  const Rational det = m.a11 * m.a22 - m.a12 * m.a21;
  Rational disc = tr * tr - 4 * det;
  disc.canonicalize();
  if (disc < 0) return std::nullopt;
  mpz_class num_root, den_root;
  if (!exact_sqrt(disc.get_num(), num_root) || !exact_sqrt(disc.get_den(), den_root))
    return std::nullopt;
  Rational sqrt_disc(num_root, den_root);
  sqrt_disc.canonicalize();
  Rational hi = (tr + sqrt_disc) / 2;
  Rational lo = (tr - sqrt_disc) / 2;
  hi.canonicalize();
  lo.canonicalize();
  return std::array<Rational, 2>{hi, lo};
}

std::array<double, 5> characteristic_polynomial(const Mat4d& a) {
  auto mul = [](const Mat4d& p, const Mat4d& q) {
    Mat4d r{};
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 4; ++k)
        for (int j = 0; j < 4; ++j) r[i][j] += p[i][k] * q[k][j];
    return r;
  };
  auto trace = [](const Mat4d& p) { return p[0][0] + p[1][1] + p[2][2] + p[3][3]; };

  std::array<double, 5> c{1, 0, 0, 0, 0};
  Mat4d m = a;
  for (int k = 1; k <= 4; ++k) {
    c[k] = -trace(m) / k;
    if (k == 4) break;
    for (int i = 0; i < 4; ++i) m[i][i] += c[k];
    m = mul(a, m);
  }
  return c;
}

std::array<std::complex<double>, 4> quartic_roots(const std::array<double, 5>& coeffs,
                                                  const RootOptions& opts) {
  using C = std::complex<double>;
  auto eval = [&coeffs](C z) {
    C acc(coeffs[0]);
    for (int k = 1; k <= 4; ++k) acc = acc * z + coeffs[k];
    return acc;
  };
  // standard start configuration: powers of a non-real point off the unit circle
  const C seed(0.4, 0.9);
  std::array<C, 4> z{seed, seed * seed, seed * seed * seed, seed * seed * seed * seed};
  for (std::size_t sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    double worst = 0;
    for (int k = 0; k < 4; ++k) {
      C denom(1, 0);
      for (int j = 0; j < 4; ++j)
        if (j != k) denom *= z[k] - z[j];
      if (denom == C(0, 0)) denom = C(1e-30, 0);
      z[k] -= eval(z[k]) / denom;
    }
    for (int k = 0; k < 4; ++k) worst = std::max(worst, std::abs(eval(z[k])));
    if (worst < opts.residual_tol) return z;
  }
  fail(ErrorCode::RootFindingStalled,
       "root residuals above " + format_scalar(opts.residual_tol) + " after " +
           std::to_string(opts.max_sweeps) + " sweeps");
}

std::array<std::complex<double>, 4> eigenvalues_4x4(const Mat4d& m, const RootOptions& opts) {
  auto roots = quartic_roots(characteristic_polynomial(m), opts);
  std::sort(roots.begin(), roots.end(), [](const auto& a, const auto& b) {
    const double ma = std::abs(a), mb = std::abs(b);
    if (ma != mb) return ma > mb;
    return std::arg(a) < std::arg(b);
  });
  return roots;
}

}  // namespace gonosim
