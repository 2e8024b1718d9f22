#include "gonosim/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "gonosim/fixed_point.hpp"
#include "gonosim/jacobian.hpp"
#include "gonosim/linalg.hpp"
#include "gonosim/sampling.hpp"

namespace gonosim {
namespace {

using verify_detail::Finding;

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

template <class T>
struct type_tag {
  using type = T;
};

void require_config(const SuiteConfig& cfg) {
  if (cfg.sample_count < 1) fail(ErrorCode::BadInput, "sample_count must be >= 1");
  if (cfg.orbit_length < 3) fail(ErrorCode::BadInput, "orbit_length must be >= 3");
}

// Per-sample findings folded with a deterministic rule: largest margin wins,
// ties keep the smallest sample index. Merging partial aggregates in any
// order yields the same result, so worker count cannot change a report.
struct Agg {
  std::size_t samples = 0;
  std::size_t failures = 0;
  double margin = kNegInf;
  std::uint64_t index = std::numeric_limits<std::uint64_t>::max();
  std::string witness;

  void take(std::uint64_t idx, double m, const std::string& w) {
    if (m > margin || (m == margin && idx < index)) {
      margin = m;
      index = idx;
      witness = w;
    }
  }
  void absorb(std::uint64_t idx, const Finding& f) {
    ++samples;
    if (f.violated) ++failures;
    take(idx, f.margin, f.witness);
  }
  void merge(const Agg& o) {
    samples += o.samples;
    failures += o.failures;
    take(o.index, o.margin, o.witness);
  }
};

Finding fold(Finding a, const Finding& b) {
  if (b.margin > a.margin) {
    a.margin = b.margin;
    a.witness = b.witness;
  }
  a.violated = a.violated || b.violated;
  return a;
}

CheckResult from_agg(const char* id, const Agg& a, double tol) {
  CheckResult r;
  r.check_id = id;
  r.samples = a.samples;
  r.failures = a.failures;
  r.worst_violation = a.margin;
  r.tolerance = tol;
  if (a.failures > 0) r.witness = "sample=" + std::to_string(a.index) + " " + a.witness;
  return r;
}

struct OrbitNeeds {
  bool lemma1 = false;
  bool lemma2 = false;
  bool monotone = false;
  bool carrier = false;
  bool any() const { return lemma1 || lemma2 || monotone || carrier; }
};

struct OrbitPool {
  Agg lemma1, lemma2, monotone, carrier;
  std::size_t monotone_comparisons = 0;
  double tightness = 0;
  std::vector<std::size_t> depths;
  std::size_t cap_hits = 0;

  void merge(const OrbitPool& o) {
    lemma1.merge(o.lemma1);
    lemma2.merge(o.lemma2);
    monotone.merge(o.monotone);
    carrier.merge(o.carrier);
    monotone_comparisons += o.monotone_comparisons;
    tightness = std::max(tightness, o.tightness);
    depths.insert(depths.end(), o.depths.begin(), o.depths.end());
    cap_hits += o.cap_hits;
  }
};

template <class S>
void eval_orbit_sample(const SuiteConfig& cfg, std::uint64_t idx, const OrbitNeeds& needs,
                       OrbitPool& out) {
  auto rng = sample_rng(cfg.seed, SampleStream::Orbit, idx);
  const auto start = sample_state<S>(rng);
  TrajectoryOptions topt;
  topt.max_steps = cfg.orbit_length;
  topt.exact_step_cap = cfg.exact_step_cap;
  topt.exact_bit_cap = cfg.exact_bit_cap;
  const auto traj = iterate(hemophilia_operator<S>(), start, topt);
  const double tol = lemma_slack(cfg.arithmetic);
  const std::string origin = "start=" + format_state(start);

  if (needs.lemma1)
    out.lemma1.absorb(idx, fold(verify_detail::ordering_finding(traj.states, tol),
                                verify_detail::chain_finding(traj.states, tol)));
  if (needs.lemma2)
    out.lemma2.absorb(idx, verify_detail::ratio_domain_finding(traj.reduced, tol, origin));
  if (needs.monotone)
    out.monotone.absorb(
        idx, verify_detail::monotone_finding(traj.reduced, tol, origin, &out.monotone_comparisons));
  if (needs.carrier)
    out.carrier.absorb(
        idx, verify_detail::carrier_bound_finding(traj.states, traj.reduced, tol, &out.tightness));
  out.depths.push_back(traj.steps_taken);
  if (traj.stop_reason == StopReason::ExactCapExceeded) ++out.cap_hits;
}

OrbitPool run_orbit_pool(const SuiteConfig& cfg, const OrbitNeeds& needs) {
  require_config(cfg);
  const auto run = [&](auto tag) {
    using S = typename decltype(tag)::type;
    const unsigned workers =
        std::max<unsigned>(1, std::min<std::uint64_t>(cfg.workers, cfg.sample_count));
    if (workers == 1) {
      OrbitPool out;
      for (std::uint64_t i = 0; i < cfg.sample_count; ++i) eval_orbit_sample<S>(cfg, i, needs, out);
      return out;
    }
    std::vector<OrbitPool> parts(workers);
    std::atomic<std::uint64_t> cursor{0};
    std::exception_ptr first_error;
    std::mutex error_mu;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          while (true) {
            const std::uint64_t i = cursor.fetch_add(1);
            if (i >= cfg.sample_count) return;
            eval_orbit_sample<S>(cfg, i, needs, parts[w]);
          }
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!first_error) first_error = std::current_exception();
        }
      });
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
    OrbitPool out = std::move(parts[0]);
    for (unsigned w = 1; w < workers; ++w) out.merge(parts[w]);
    return out;
  };
  return cfg.arithmetic == Arithmetic::Exact ? run(type_tag<Rational>{}) : run(type_tag<double>{});
}

std::string depth_note(const SuiteConfig& cfg, const OrbitPool& pool) {
  std::vector<std::size_t> d = pool.depths;
  if (d.empty()) return "no orbits";
  std::sort(d.begin(), d.end());
  std::string s = "orbits=" + std::to_string(d.size()) + " depth_min=" + std::to_string(d.front()) +
                  " depth_median=" + std::to_string(d[(d.size() - 1) / 2]) +
                  " depth_max=" + std::to_string(d.back());
  if (cfg.arithmetic == Arithmetic::Exact)
    s += " bit_cap=" + std::to_string(cfg.exact_bit_cap) +
         " cap_hits=" + std::to_string(pool.cap_hits);
  return s;
}

CheckResult lemma1_result(const SuiteConfig& cfg, const OrbitPool& pool) {
  CheckResult r = from_agg("lemma1_orbit_bounds", pool.lemma1, lemma_slack(cfg.arithmetic));
  r.note = depth_note(cfg, pool);
  return r;
}

CheckResult lemma2_result(const SuiteConfig& cfg, const OrbitPool& pool) {
  CheckResult r = from_agg("lemma2_ratio_domain", pool.lemma2, lemma_slack(cfg.arithmetic));
  r.note = "ratio coordinates recorded from iterate 2 on";
  return r;
}

CheckResult monotone_result(const SuiteConfig& cfg, const OrbitPool& pool) {
  if (pool.monotone_comparisons == 0)
    fail(ErrorCode::InsufficientData, "no reduced-sum comparisons; increase orbit_length");
  CheckResult r = from_agg("monotone_sum", pool.monotone, lemma_slack(cfg.arithmetic));
  r.note = "comparisons=" + std::to_string(pool.monotone_comparisons) + " from reduced index 1";
  return r;
}

CheckResult y_v_decay_result(const SuiteConfig& cfg, const OrbitPool& pool) {
  CheckResult r = from_agg("y_v_decay", pool.carrier, lemma_slack(cfg.arithmetic));

  // Long reference orbit, always binary64: the carrier coordinates over the
  // final tenth must sit below 1e-3.
  TrajectoryOptions topt;
  topt.max_steps = 10000;
  const auto ref =
      iterate(hemophilia_operator<double>(), validate_population(0.0, 0.5, 0.5, 0.0), topt);
  double tail = 0;
  for (std::size_t t = ref.states.size() - ref.states.size() / 10; t < ref.states.size(); ++t)
    tail = std::max(tail, std::max(ref.states[t].y, ref.states[t].v));
  const double tail_margin = tail - 1e-3;
  ++r.samples;
  if (tail_margin > lemma_slack(Arithmetic::F64)) {
    ++r.failures;
    r.witness = "reference orbit tail above 1e-3";
  }
  r.worst_violation = std::max(r.worst_violation, tail_margin);
  r.note = "tightness=" + format_scalar(pool.tightness) + " reference_tail=" + format_scalar(tail) +
           " (binary64, 10^4 steps from (0,1/2,1/2,0))";
  return r;
}

template <class S>
Finding lemma3_finding(const ReducedState<S>& r, double tol) {
  static const char* const labels[6] = {"0<=alpha'",     "alpha'<=2",       "0<=beta'",
                                        "beta'<=1",      "beta'<=alpha'",   "sum(FF(r))<=sum(F(r))"};
  Finding f;
  const auto rd = verify_detail::shadow2(r);
  const auto r1 = detail::ratio_map<double>({rd[0], rd[1]});
  const auto r2 = detail::ratio_map<double>(r1);
  const double vals[6] = {-r1[0],        r1[0] - 2, -r1[1],
                          r1[1] - 1,     r1[1] - r1[0],
                          (r2[0] + r2[1]) - (r1[0] + r1[1])};
  for (int k = 0; k < 6; ++k)
    verify_detail::certified_record<S>(
        f, vals[k], tol,
        [&r, k] {
          const auto e1 = detail::ratio_map<S>({r.alpha, r.beta});
          const auto e2 = detail::ratio_map<S>(e1);
          switch (k) {
            case 0: return S(-e1[0]);
            case 1: return S(e1[0] - 2);
            case 2: return S(-e1[1]);
            case 3: return S(e1[1] - 1);
            case 4: return S(e1[1] - e1[0]);
            default: return S((e2[0] + e2[1]) - (e1[0] + e1[1]));
          }
        },
        [&r, k] { return "point=" + format_state(r) + " " + labels[k]; });
  return f;
}

template <class S>
CheckResult lemma3_impl(const SuiteConfig& cfg) {
  const double tol = lemma_slack(cfg.arithmetic);
  Agg agg;
  for (std::uint64_t i = 0; i < cfg.sample_count; ++i) {
    auto rng = sample_rng(cfg.seed, SampleStream::RatioRectangle, i);
    agg.absorb(i, lemma3_finding(sample_ratio_point<S>(rng), tol));
  }
  const ReducedState<S> corners[4] = {{S(0), S(0)}, {S(4), S(0)}, {S(0), S(1)}, {S(4), S(1)}};
  for (std::uint64_t c = 0; c < 4; ++c)
    agg.absorb(cfg.sample_count + c, lemma3_finding(corners[c], tol));
  CheckResult r = from_agg("lemma3_absorption", agg, tol);
  r.note = "sampled rectangle points plus the four corners";
  return r;
}

template <class S>
Finding commutation_finding(const PopulationState<S>& s, double tol) {
  using T = scalar_traits<S>;
  Finding f;
  const auto r = reduce(s);
  const auto ws = apply_W(s);
  const auto lhs = reduce(ws);
  const auto rhs = apply_F(r);
  const S diff_reduced = l1_distance(lhs, rhs);
  const double scale1 =
      std::max(1.0, T::to_double(rhs.alpha) + T::to_double(rhs.beta));
  verify_detail::certified_record<S>(
      f, T::to_double(diff_reduced) / scale1, tol, [&] { return diff_reduced; },
      [&] { return "state=" + format_state(s) + " reduce(W(s)) != F(reduce(s))"; });
  const S diff_recon = l1_distance(reconstruct_next(r), ws);
  verify_detail::certified_record<S>(
      f, T::to_double(diff_recon), tol, [&] { return diff_recon; },
      [&] { return "state=" + format_state(s) + " reconstruct_next(reduce(s)) != W(s)"; });
  return f;
}

template <class S>
CheckResult commutation_impl(const SuiteConfig& cfg) {
  const double tol = commutation_slack(cfg.arithmetic);
  Agg agg;
  for (std::uint64_t i = 0; i < cfg.sample_count; ++i) {
    auto rng = sample_rng(cfg.seed, SampleStream::Commutation, i);
    const auto s = sample_state<S>(rng, /*require_positive_xu=*/true);
    agg.absorb(i, commutation_finding(s, tol));
  }
  CheckResult r = from_agg("commutation", agg, tol);
  r.note = "both identities: reduce after step, and successor reconstruction";
  return r;
}

CheckResult boundary_stress_impl(const SuiteConfig& cfg) {
  require_config(cfg);
  const double tol = lemma_slack(Arithmetic::F64);
  Agg agg;
  for (std::uint64_t i = 0; i < cfg.sample_count; ++i) {
    auto rng = sample_rng(cfg.seed, SampleStream::Boundary, i);
    const double total = std::pow(10.0, -9.0 + 6.0 * rng.uniform01());
    const double wx = rng.uniform01();
    const double x = total * wx;
    const double y = total - x;
    const double rest = 1.0 - total;
    const double wu = rng.uniform01();
    const double u = rest * wu;
    const double v = rest - u;
    Finding f;
    try {
      const auto s0 = validate_population(x, y, u, v);
      std::vector<PopulationState<double>> states{s0, apply_W(s0)};
      states.push_back(apply_W(states[1]));
      f = fold(verify_detail::ordering_finding(states, tol),
               verify_detail::chain_finding(states, tol));
      if (states[2].x > 0 && states[2].u > 0) {
        const std::vector<ReducedState<double>> reduced{reduce(states[2])};
        f = fold(f, verify_detail::ratio_domain_finding(reduced, tol,
                                                        "start=" + format_state(s0)));
      }
    } catch (const Error& e) {
      f.violated = true;
      f.margin = 1.0;
      f.witness = std::string("threw ") + to_string(e.code()) + " near x+y=" +
                  format_scalar(total);
    }
    agg.absorb(i, f);
  }
  CheckResult r = from_agg("boundary_stress", agg, tol);
  r.note = "x+y log-uniform in [1e-9,1e-3], two steps, binary64 only";
  return r;
}

void add_constraint(CheckResult& r, double margin, bool violated, const std::string& witness) {
  if (violated) {
    ++r.failures;
    if (margin <= r.tolerance)
      margin = std::nextafter(r.tolerance, std::numeric_limits<double>::infinity());
  }
  if (margin > r.worst_violation) {
    r.worst_violation = margin;
    if (violated) r.witness = witness;
  }
}

CheckResult fixed_point_impl() {
  CheckResult r;
  r.check_id = "fixed_point";
  r.samples = 1;
  r.tolerance = 0;

  const auto s0d = equilibrium<double>();
  FixedPointOptions fopts;
  const auto search = find_fixed_points(hemophilia_operator<double>(), fopts);
  std::size_t hits = 0;
  const FixedPointReport* hit = nullptr;
  for (const auto& p : search.points)
    if (l1_distance(p.location, s0d) <= 1e-10) {
      ++hits;
      if (!hit) hit = &p;
    }
  add_constraint(r, hits == 1 ? -0.5 : 0.5, hits != 1,
                 "points within 1e-10 of equilibrium: " + std::to_string(hits));

  const auto s0q = equilibrium<Rational>();
  const Rational resid = l1_distance(apply_W(s0q), s0q);
  add_constraint(r, resid == 0 ? -1.0 : scalar_traits<Rational>::to_double(resid), resid != 0,
                 "equilibrium image differs, residual=" + format_scalar(resid));

  const bool nonhyp = hit != nullptr && hit->classification == Stability::Nonhyperbolic;
  add_constraint(r, nonhyp ? -1.0 : 1.0, !nonhyp, "located point not classified Nonhyperbolic");

  r.note = "points_found=" + std::to_string(search.points.size()) +
           " warnings=" + std::to_string(search.warnings.size()) +
           " best_residual=" + format_scalar(hit ? hit->residual : -1.0) +
           " exact_residual_at_equilibrium=" + format_scalar(resid);
  return r;
}

CheckResult eigenvalues_impl() {
  CheckResult r;
  r.check_id = "eigenvalues";
  r.samples = 1;
  r.tolerance = 0;

  const Mat2<Rational> jf = jacobian_F<Rational>({Rational(0), Rational(0)});
  const Mat2<Rational> want{Rational(1, 2), Rational(1), Rational(1, 2), Rational(0)};
  const bool entries_ok =
      jf.a11 == want.a11 && jf.a12 == want.a12 && jf.a21 == want.a21 && jf.a22 == want.a22;
  add_constraint(r, entries_ok ? -1.0 : 1.0, !entries_ok,
                 "analytic reduced Jacobian at the origin has unexpected entries");

  const auto exact_eigs = eigenvalues_2x2_exact(jf);
  const bool eigs_ok =
      exact_eigs && (*exact_eigs)[0] == Rational(1) && (*exact_eigs)[1] == Rational(-1, 2);
  add_constraint(r, eigs_ok ? -1.0 : 1.0, !eigs_ok,
                 "exact reduced spectrum is not {1, -1/2}");

  const Mat4d jw = jacobian_W(equilibrium<double>());
  const auto spec = eigenvalues_4x4(jw);
  const double band = 1e-6;
  add_constraint(r, std::abs(spec[0] - std::complex<double>(1, 0)) - band,
                 std::abs(spec[0] - std::complex<double>(1, 0)) > band,
                 "leading eigenvalue away from 1");
  add_constraint(r, std::abs(spec[1] - std::complex<double>(-0.5, 0)) - band,
                 std::abs(spec[1] - std::complex<double>(-0.5, 0)) > band,
                 "second eigenvalue away from -1/2");
  const double rest = std::max(std::abs(spec[2]), std::abs(spec[3]));
  add_constraint(r, rest - band, rest > band, "trailing eigenvalues away from 0");

  // Scale invariance in each sex block forces the direction (1,0,-1,0) into
  // the kernel at the equilibrium.
  const double w[4] = {1, 0, -1, 0};
  double kmax = 0;
  for (int i = 0; i < 4; ++i) {
    double sum = 0;
    for (int j = 0; j < 4; ++j) sum += jw[i][j] * w[j];
    kmax = std::max(kmax, std::abs(sum));
  }
  add_constraint(r, kmax - band, kmax > band, "J*(1,0,-1,0) not near zero");

  std::string spectrum;
  for (int i = 0; i < 4; ++i) {
    if (i) spectrum += ", ";
    spectrum += format_scalar(spec[i].real()) + (spec[i].imag() < 0 ? "-" : "+") +
                format_scalar(std::abs(spec[i].imag())) + "i";
  }
  r.note = "full-map spectrum {" + spectrum + "} kernel_residual=" + format_scalar(kmax);
  return r;
}

struct ScanAccum {
  std::size_t points = 0;
  std::size_t flagged = 0;
  double max_flagged_linf = 0;
  std::size_t imin = std::numeric_limits<std::size_t>::max(), imax = 0;
  std::size_t jmin = std::numeric_limits<std::size_t>::max(), jmax = 0;
  Agg agg;
};

void scan_grid(ScanAccum& acc, std::size_t i_lo, std::size_t i_hi, std::size_t j_cap, double denom,
               double flag_tol, double locality) {
  for (std::size_t i = i_lo; i <= i_hi; ++i) {
    const double a = double(i) / denom;
    const std::size_t j_hi = std::min(i, j_cap);
    for (std::size_t j = 0; j <= j_hi; ++j) {
      const double b = double(j) / denom;
      const auto next = detail::ratio_map<double>({a, b});
      const double resid = std::abs(a + b - (next[0] + next[1]));
      ++acc.points;
      if (resid < flag_tol) {
        ++acc.flagged;
        const double linf = std::max(a, b);
        acc.max_flagged_linf = std::max(acc.max_flagged_linf, linf);
        acc.imin = std::min(acc.imin, i);
        acc.imax = std::max(acc.imax, i);
        acc.jmin = std::min(acc.jmin, j);
        acc.jmax = std::max(acc.jmax, j);
        Finding f;
        f.margin = linf - locality;
        f.violated = f.margin > 0;
        f.witness = "root candidate at (" + format_scalar(a) + ", " + format_scalar(b) +
                    ") residual=" + format_scalar(resid);
        acc.agg.take(acc.points, f.margin, f.witness);
        if (f.violated) ++acc.agg.failures;
      }
    }
  }
}

CheckResult limit_equation_scan_impl() {
  const double flag_tol = 1e-9;
  const double locality = 2e-3;

  ScanAccum coarse;
  scan_grid(coarse, 0, 4000, 1000, 1000.0, flag_tol, locality);

  // Refine one coarse cell around the flagged box at 100x the resolution.
  ScanAccum fine;
  if (coarse.flagged > 0) {
    const std::size_t i_lo = coarse.imin > 0 ? (coarse.imin - 1) * 100 : 0;
    const std::size_t i_hi = std::min<std::size_t>((coarse.imax + 1) * 100, 400000);
    const std::size_t j_cap = std::min<std::size_t>((coarse.jmax + 1) * 100, 100000);
    scan_grid(fine, i_lo, i_hi, j_cap, 100000.0, flag_tol, locality);
  }

  CheckResult r;
  r.check_id = "limit_equation";
  r.tolerance = 0;
  r.samples = coarse.points + fine.points;
  r.failures = coarse.agg.failures + fine.agg.failures;
  Agg worst = coarse.agg;
  worst.merge(fine.agg);
  r.worst_violation = worst.margin;
  if (r.failures > 0) r.witness = worst.witness;
  r.note = "coarse_flagged=" + std::to_string(coarse.flagged) +
           " max_linf=" + format_scalar(coarse.max_flagged_linf) +
           " refined_points=" + std::to_string(fine.points) +
           " refined_flagged=" + std::to_string(fine.flagged) +
           " refined_max_linf=" + format_scalar(fine.max_flagged_linf);
  return r;
}

}  // namespace

CheckResult check_lemma1(const SuiteConfig& cfg) {
  OrbitNeeds needs;
  needs.lemma1 = true;
  return lemma1_result(cfg, run_orbit_pool(cfg, needs));
}

CheckResult check_lemma2(const SuiteConfig& cfg) {
  OrbitNeeds needs;
  needs.lemma2 = true;
  return lemma2_result(cfg, run_orbit_pool(cfg, needs));
}

CheckResult check_lemma3(const SuiteConfig& cfg) {
  require_config(cfg);
  return cfg.arithmetic == Arithmetic::Exact ? lemma3_impl<Rational>(cfg)
                                             : lemma3_impl<double>(cfg);
}

CheckResult check_monotone_sum(const SuiteConfig& cfg) {
  if (cfg.orbit_length < 4)
    fail(ErrorCode::BadInput, "monotone sum needs orbit_length >= 4");
  OrbitNeeds needs;
  needs.monotone = true;
  return monotone_result(cfg, run_orbit_pool(cfg, needs));
}

CheckResult check_commutation(const SuiteConfig& cfg) {
  require_config(cfg);
  return cfg.arithmetic == Arithmetic::Exact ? commutation_impl<Rational>(cfg)
                                             : commutation_impl<double>(cfg);
}

CheckResult check_y_v_decay(const SuiteConfig& cfg) {
  OrbitNeeds needs;
  needs.carrier = true;
  return y_v_decay_result(cfg, run_orbit_pool(cfg, needs));
}

CheckResult check_boundary_stress(const SuiteConfig& cfg) {
  if (cfg.arithmetic != Arithmetic::F64)
    fail(ErrorCode::BadInput, "boundary stress runs in f64 mode only");
  return boundary_stress_impl(cfg);
}

CheckResult check_fixed_point(const SuiteConfig&) { return fixed_point_impl(); }

CheckResult check_eigenvalues(const SuiteConfig&) { return eigenvalues_impl(); }

double check_limit_equation(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b) || a < 0 || a > 4 || b < 0 || b > 1 || b > a)
    fail(ErrorCode::DomainViolation,
         "(" + format_scalar(a) + ", " + format_scalar(b) + ") outside the cone 0<=b<=a in Delta");
  const auto next = detail::ratio_map<double>({a, b});
  return std::abs(a + b - (next[0] + next[1]));
}

CheckResult check_limit_equation_scan(const SuiteConfig&) { return limit_equation_scan_impl(); }

std::vector<CheckResult> run_suite(const SuiteConfig& cfg) {
  require_config(cfg);
  const auto want = [&cfg](const char* id) {
    return cfg.filter.empty() || std::string(id).find(cfg.filter) != std::string::npos;
  };

  OrbitNeeds needs;
  needs.lemma1 = want("lemma1_orbit_bounds");
  needs.lemma2 = want("lemma2_ratio_domain");
  needs.monotone = want("monotone_sum");
  needs.carrier = want("y_v_decay");
  if (needs.monotone && cfg.orbit_length < 4)
    fail(ErrorCode::BadInput, "monotone sum needs orbit_length >= 4");

  OrbitPool pool;
  if (needs.any()) pool = run_orbit_pool(cfg, needs);

  std::vector<CheckResult> out;
  if (needs.lemma1) out.push_back(lemma1_result(cfg, pool));
  if (needs.lemma2) out.push_back(lemma2_result(cfg, pool));
  if (want("lemma3_absorption")) out.push_back(check_lemma3(cfg));
  if (needs.monotone) out.push_back(monotone_result(cfg, pool));
  if (want("commutation")) out.push_back(check_commutation(cfg));
  if (needs.carrier) out.push_back(y_v_decay_result(cfg, pool));
  if (want("limit_equation")) out.push_back(check_limit_equation_scan(cfg));
  if (cfg.arithmetic == Arithmetic::F64 && want("boundary_stress"))
    out.push_back(check_boundary_stress(cfg));
  if (want("fixed_point")) out.push_back(check_fixed_point(cfg));
  if (want("eigenvalues")) out.push_back(check_eigenvalues(cfg));

  if (out.empty()) fail(ErrorCode::BadInput, "filter '" + cfg.filter + "' matches no checks");
  return out;
}

std::string format_report(const SuiteConfig& cfg, const std::vector<CheckResult>& results) {
  std::string s;
  s += "verification report\n";
  s += "arithmetic: " + std::string(to_string(cfg.arithmetic)) + "\n";
  s += "seed: " + std::to_string(cfg.seed) + "\n";
  s += "sample_count: " + std::to_string(cfg.sample_count) + "\n";
  s += "orbit_length: " + std::to_string(cfg.orbit_length) + "\n";
  s += "exact_step_cap: " + std::to_string(cfg.exact_step_cap) + "\n";
  s += "exact_bit_cap: " + std::to_string(cfg.exact_bit_cap) + "\n";
  s += "filter: " + (cfg.filter.empty() ? std::string("(all)") : cfg.filter) + "\n";
  if (cfg.arithmetic == Arithmetic::Exact)
    s += "tolerances: exact checks zero; scan_flag=1e-09 scan_locality=0.002 spectrum_band=1e-06\n";
  else
    s += "tolerances: lemma_slack=1e-12 commutation_slack=1e-10 scan_flag=1e-09 "
         "scan_locality=0.002 spectrum_band=1e-06\n";
  s += "checks: " + std::to_string(results.size()) + "\n";

  bool all_pass = true;
  for (const auto& r : results) {
    all_pass = all_pass && r.passed();
    s += "\n";
    s += "check: " + r.check_id + "\n";
    s += "verdict: " + std::string(r.passed() ? "PASS" : "FAIL") + "\n";
    s += "samples: " + std::to_string(r.samples) + "\n";
    s += "failures: " + std::to_string(r.failures) + "\n";
    s += "tolerance: " + format_scalar(r.tolerance) + "\n";
    s += "worst_violation: " + format_scalar(r.worst_violation) + "\n";
    s += "witness: " + (r.witness.empty() ? std::string("(none)") : r.witness) + "\n";
    s += "note: " + (r.note.empty() ? std::string("(none)") : r.note) + "\n";
  }
  s += "\nsuite: " + std::string(all_pass ? "PASS" : "FAIL") + "\n";
  return s;
}

}  // namespace gonosim
