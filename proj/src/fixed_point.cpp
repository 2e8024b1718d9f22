#include "gonosim/fixed_point.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "gonosim/jacobian.hpp"

namespace gonosim {

namespace {

// The evolution map on R^4 without validation, usable in extended precision.
// Table probabilities are binary64 and convert exactly.
template <class R>
std::array<R, 4> general_map_raw(const CrossTable<double>& t, const std::array<R, 4>& s) {
  const R f[2] = {s[0], s[1]};
  const R m[2] = {s[2], s[3]};
  const R denom = (s[0] + s[1]) * (s[2] + s[3]);
  std::array<R, 4> out{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const R w = f[i] * m[j];
      const auto& row = t.row(i, j);
      for (int k = 0; k < 4; ++k) out[k] += R(row[k]) * w;
    }
  for (auto& c : out) c /= denom;
  return out;
}

template <class R>
R abs_r(const R& v) {
  return v < 0 ? R(-v) : v;
}

template <class R>
struct NewtonResult {
  std::array<R, 3> q{};
  R residual{};
  bool converged = false;
};

// Damped Newton for W(s) = s in slice coordinates q = (x, y, u), with
// v = 1 - x - y - u. The map preserves the coordinate sum identically, so the
// fourth residual component is redundant.
template <class R>
NewtonResult<R> newton_slice(const CrossTable<double>& table, std::array<R, 3> q,
                             std::size_t max_iter, const R& target, const R& fd_h) {
  auto expand = [](const std::array<R, 3>& p) {
    return std::array<R, 4>{p[0], p[1], p[2], R(1) - p[0] - p[1] - p[2]};
  };
  auto feasible = [&](const std::array<R, 3>& p) {
    const auto s = expand(p);
    return s[0] + s[1] > R(1e-12) && s[2] + s[3] > R(1e-12);
  };
  auto residual = [&](const std::array<R, 3>& p, std::array<R, 3>& g) {
    const auto s = expand(p);
    const auto img = general_map_raw<R>(table, s);
    R norm{};
    for (int i = 0; i < 3; ++i) {
      g[i] = img[i] - s[i];
      norm += abs_r(g[i]);
    }
    return norm;
  };

  NewtonResult<R> out;
  if (!feasible(q)) return out;
  std::array<R, 3> g{};
  R norm = residual(q, g);
  for (std::size_t iter = 0; iter < max_iter; ++iter) {
    if (norm < target) break;
    std::array<std::array<R, 3>, 3> jac{};
    for (int col = 0; col < 3; ++col) {
      auto hi = q, lo = q;
      hi[col] += fd_h;
      lo[col] -= fd_h;
      if (!feasible(hi) || !feasible(lo)) return out;
      std::array<R, 3> gh{}, gl{};
      residual(hi, gh);
      residual(lo, gl);
      for (int row = 0; row < 3; ++row) jac[row][col] = (gh[row] - gl[row]) / (2 * fd_h);
    }
    std::array<R, 3> step;
    try {
      std::array<R, 3> rhs{-g[0], -g[1], -g[2]};
      step = solve3<R>(jac, rhs);
    } catch (const Error&) {
      break;
    }
    R lambda(1);
    bool improved = false;
    for (int halving = 0; halving < 30; ++halving) {
      std::array<R, 3> trial{q[0] + lambda * step[0], q[1] + lambda * step[1],
                             q[2] + lambda * step[2]};
      if (feasible(trial)) {
        std::array<R, 3> gt{};
        const R nt = residual(trial, gt);
        if (nt < norm) {
          q = trial;
          g = gt;
          norm = nt;
          improved = true;
          break;
        }
      }
      lambda /= 2;
    }
    if (!improved) break;
  }
  out.q = q;
  out.residual = norm;
  out.converged = norm < target;
  return out;
}

struct Candidate {
  std::array<double, 4> point;
  std::array<std::size_t, 4> lattice;
};

}  // namespace

FixedPointSearch find_fixed_points(const GonosomalOperator<double>& op,
                                   const FixedPointOptions& opts) {
  detail::require_2x2(op.table);
  if (opts.grid_per_axis < 4) fail(ErrorCode::BadInput, "grid_per_axis must be at least 4");
  const std::size_t n = opts.grid_per_axis;
  const CrossTable<double>& table = op.table;

  auto point_of = [n](std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    return std::array<double, 4>{double(i) / n, double(j) / n, double(k) / n, double(l) / n};
  };
  auto res_of = [&table](const std::array<double, 4>& p) {
    const auto img = general_map_raw<double>(table, p);
    double r = 0;
    for (int c = 0; c < 4; ++c) r += std::fabs(img[c] - p[c]);
    return r;
  };

  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, double> residuals;
  for (std::size_t i = 0; i <= n; ++i)
    for (std::size_t j = 0; i + j <= n; ++j)
      for (std::size_t k = 0; i + j + k <= n; ++k) {
        const std::size_t l = n - i - j - k;
        if (i + j == 0 || k + l == 0) continue;
        residuals[{i, j, k}] = res_of(point_of(i, j, k, l));
      }

  std::vector<Candidate> candidates;
  for (const auto& [key, r] : residuals) {
    const auto [i, j, k] = key;
    const std::size_t l = n - i - j - k;
    long coords[4] = {long(i), long(j), long(k), long(l)};
    bool is_min = true;
    for (int a = 0; a < 4 && is_min; ++a)
      for (int b = 0; b < 4 && is_min; ++b) {
        if (a == b) continue;
        long nb[4] = {coords[0], coords[1], coords[2], coords[3]};
        nb[a] += 1;
        nb[b] -= 1;
        if (nb[b] < 0) continue;
        auto it = residuals.find({std::size_t(nb[0]), std::size_t(nb[1]), std::size_t(nb[2])});
        if (it == residuals.end()) continue;
        if (it->second < r) is_min = false;
      }
    if (is_min) candidates.push_back({point_of(i, j, k, l), {i, j, k, l}});
  }

  FixedPointSearch search;
  std::vector<std::pair<std::array<double, 4>, double>> accepted;
  for (const auto& cand : candidates) {
    auto stage1 = newton_slice<double>(table, {cand.point[0], cand.point[1], cand.point[2]},
                                       opts.newton_max_iter, 1e-13, 1e-6);
    // The equilibrium is nonhyperbolic with a quadratic center direction, so
    // binary64 Newton bottoms out around 1e-8 in position. A quad precision
    // polish recovers the remaining digits with the identical algorithm.
    auto stage2 = newton_slice<__float128>(
        table, {stage1.q[0], stage1.q[1], stage1.q[2]}, 60, __float128(1e-28), __float128(1e-12));
    std::array<double, 4> refined = {
        double(stage2.q[0]), double(stage2.q[1]), double(stage2.q[2]),
        double(__float128(1) - stage2.q[0] - stage2.q[1] - stage2.q[2])};
    // a component that converged to an exact zero may round a hair negative
    for (auto& c : refined)
      if (c < 0 && c > -1e-9) c = 0;
    const double resid = res_of(refined);
    if (!(resid < opts.refine_tol)) {
      search.warnings.push_back(
          "candidate at lattice (" + std::to_string(cand.lattice[0]) + "," +
          std::to_string(cand.lattice[1]) + "," + std::to_string(cand.lattice[2]) + "," +
          std::to_string(cand.lattice[3]) + ") dropped: residual " + format_scalar(resid) +
          " after refinement");
      continue;
    }
    accepted.push_back({refined, resid});
  }

  // merge duplicates, keeping the best residual per cluster
  std::vector<std::pair<std::array<double, 4>, double>> merged;
  for (const auto& [p, r] : accepted) {
    bool absorbed = false;
    for (auto& [mp, mr] : merged) {
      double dist = 0;
      for (int c = 0; c < 4; ++c) dist += std::fabs(p[c] - mp[c]);
      if (dist <= opts.merge_tol) {
        if (r < mr) {
          mp = p;
          mr = r;
        }
        absorbed = true;
        break;
      }
    }
    if (!absorbed) merged.push_back({p, r});
  }
  std::sort(merged.begin(), merged.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  for (const auto& [p, r] : merged) {
    FixedPointReport report;
    report.location = validate_population(p[0], p[1], p[2], p[3], 1e-9);
    report.residual = r;
    report.jacobian = jacobian_W<double>({p[0], p[1], p[2], p[3]}, opts.fd_step);
    report.eigenvalues = eigenvalues_4x4(report.jacobian);
    report.classification = Stability::Hyperbolic;
    for (const auto& ev : report.eigenvalues)
      if (std::fabs(std::abs(ev) - 1.0) <= opts.unit_circle_tol)
        report.classification = Stability::Nonhyperbolic;
    search.points.push_back(report);
  }
  return search;
}

}  // namespace gonosim
