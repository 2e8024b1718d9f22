#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>

#include "gonosim/decay.hpp"
#include "gonosim/fixed_point.hpp"
#include "gonosim/jacobian.hpp"
#include "gonosim/linalg.hpp"
#include "gonosim/sampling.hpp"
#include "gonosim/sweep.hpp"
#include "gonosim/trajectory.hpp"

using namespace gonosim;

namespace {

const PopulationState<Rational> kCorner{Rational(0), Rational(1, 2), Rational(1, 2), Rational(0)};

}  // namespace

TEST_CASE("trajectories record every state and the ratio tail") {
  const auto op = hemophilia_operator<Rational>();
  TrajectoryOptions opts;
  opts.max_steps = 5;
  const auto traj = iterate(op, kCorner, opts);
  REQUIRE(traj.states.size() == 6);
  CHECK(traj.steps_taken == 5);
  CHECK(traj.stop_reason == StopReason::BudgetExhausted);
  CHECK(traj.states[1] ==
        PopulationState<Rational>{Rational(1, 4), Rational(1, 4), Rational(1, 4), Rational(1, 4)});
  CHECK(traj.states[2] == PopulationState<Rational>{Rational(3, 16), Rational(13, 48),
                                                    Rational(19, 48), Rational(7, 48)});
  REQUIRE(traj.reduced.size() == 4);
  CHECK(traj.reduced[0] == ReducedState<Rational>{Rational(13, 9), Rational(7, 19)});
  CHECK(traj.reduced[0] == reduce(traj.states[2]));
  CHECK(traj.reduced[3] == reduce(traj.states[5]));
}

TEST_CASE("an orbit starting at the target converges in zero steps") {
  const auto op = hemophilia_operator<Rational>();
  TrajectoryOptions opts;
  opts.eps = 1e-9;
  const auto traj = iterate(op, equilibrium<Rational>(), opts,
                            std::optional<PopulationState<Rational>>(equilibrium<Rational>()));
  CHECK(traj.stop_reason == StopReason::Converged);
  CHECK(traj.steps_taken == 0);
  CHECK(traj.states.size() == 1);
}

TEST_CASE("successive-difference convergence triggers without a target") {
  const auto op = hemophilia_operator<double>();
  TrajectoryOptions opts;
  opts.max_steps = 100000;
  opts.eps = 1e-9;
  const PopulationState<double> start{0.0, 0.5, 0.5, 0.0};
  const auto traj = iterate(op, start, opts);
  CHECK(traj.stop_reason == StopReason::Converged);
  REQUIRE(traj.states.size() >= 2);
  const auto& last = traj.states.back();
  const auto& prev = traj.states[traj.states.size() - 2];
  CHECK(l1_distance(last, prev) < 1e-9);
}

TEST_CASE("exact orbits stop at the step cap") {
  const auto op = hemophilia_operator<Rational>();
  TrajectoryOptions opts;
  opts.max_steps = 10;
  opts.exact_step_cap = 3;
  const auto traj = iterate(op, kCorner, opts);
  CHECK(traj.stop_reason == StopReason::ExactCapExceeded);
  CHECK(traj.steps_taken == 3);
}

TEST_CASE("exact orbits stop once the representation outgrows the bit cap") {
  const auto op = hemophilia_operator<Rational>();
  TrajectoryOptions opts;
  opts.max_steps = 64;
  opts.exact_bit_cap = 200;
  const auto traj = iterate(op, kCorner, opts);
  CHECK(traj.stop_reason == StopReason::ExactCapExceeded);
  CHECK(traj.steps_taken < 64);
  CHECK(state_bits(traj.states.back()) > 200);
}

TEST_CASE("a table that extinguishes one sex stops the orbit cleanly") {
  const char* text =
      "female: A B\nmale: C D\n"
      "cross A x C -> C:1\ncross A x D -> C:1\ncross B x C -> C:1\ncross B x D -> C:1\n";
  const GonosomalOperator<double> op{parse_cross_table<double>(text)};
  const auto start = validate_population(0.25, 0.25, 0.25, 0.25);
  const auto traj = iterate(op, start, {});
  CHECK(traj.stop_reason == StopReason::DegenerateSex);
  CHECK(traj.steps_taken == 0);
  CHECK(traj.states.size() == 1);
}

TEST_CASE("analytic ratio-map jacobian matches the exact formulas in float") {
  for (std::uint64_t i = 0; i < 100; ++i) {
    auto rng = sample_rng(23, SampleStream::RatioRectangle, i);
    const auto rq = sample_ratio_point<Rational>(rng);
    const ReducedState<double> rd{rq.alpha.get_d(), rq.beta.get_d()};
    const auto jq = jacobian_F(rq);
    const auto jd = jacobian_F(rd);
    CHECK(std::abs(jd.a11 - jq.a11.get_d()) < 1e-13);
    CHECK(std::abs(jd.a12 - jq.a12.get_d()) < 1e-13);
    CHECK(std::abs(jd.a21 - jq.a21.get_d()) < 1e-13);
    CHECK(std::abs(jd.a22 - jq.a22.get_d()) < 1e-13);
  }
}

TEST_CASE("analytic ratio-map jacobian matches central differences") {
  const double h = 1e-5;
  for (std::uint64_t i = 0; i < 100; ++i) {
    auto rng = sample_rng(29, SampleStream::RatioRectangle, i);
    auto r = sample_ratio_point<double>(rng);
    r.alpha += 2 * h;  // keep the stencil inside the domain
    r.beta += 2 * h;
    const auto j = jacobian_F(r);
    auto diff = [&](int out, int in) {
      auto hi = r, lo = r;
      (in == 0 ? hi.alpha : hi.beta) += h;
      (in == 0 ? lo.alpha : lo.beta) -= h;
      const auto fh = apply_F(hi), fl = apply_F(lo);
      return ((out == 0 ? fh.alpha : fh.beta) - (out == 0 ? fl.alpha : fl.beta)) / (2 * h);
    };
    CHECK(std::abs(j.a11 - diff(0, 0)) < 1e-6);
    CHECK(std::abs(j.a12 - diff(0, 1)) < 1e-6);
    CHECK(std::abs(j.a21 - diff(1, 0)) < 1e-6);
    CHECK(std::abs(j.a22 - diff(1, 1)) < 1e-6);
  }
}

TEST_CASE("the ratio-map jacobian at the origin has the known exact spectrum") {
  const auto j = jacobian_F(ReducedState<Rational>{Rational(0), Rational(0)});
  CHECK(j.a11 == Rational(1, 2));
  CHECK(j.a12 == 1);
  CHECK(j.a21 == Rational(1, 2));
  CHECK(j.a22 == 0);
  const auto eig = eigenvalues_2x2_exact(j);
  REQUIRE(eig.has_value());
  CHECK((*eig)[0] == 1);
  CHECK((*eig)[1] == Rational(-1, 2));
}

TEST_CASE("exact 2x2 eigenvalues decline irrational spectra") {
  const Mat2<Rational> m{Rational(0), Rational(1), Rational(1), Rational(1)};
  CHECK(!eigenvalues_2x2_exact(m).has_value());
}

TEST_CASE("float 2x2 eigenvalues handle real and rotational cases") {
  const auto real = eigenvalues_2x2(Mat2d{2, 0, 0, 1});
  CHECK(real[0].real() == doctest::Approx(2));
  CHECK(real[1].real() == doctest::Approx(1));
  const auto rot = eigenvalues_2x2(Mat2d{0, -1, 1, 0});
  CHECK(rot[0].real() == doctest::Approx(0));
  CHECK(std::abs(rot[0].imag()) == doctest::Approx(1));
  CHECK(rot[1] == std::conj(rot[0]));
}

TEST_CASE("characteristic polynomial of the identity is the binomial expansion") {
  Mat4d id{};
  for (int i = 0; i < 4; ++i) id[i][i] = 1;
  const auto c = characteristic_polynomial(id);
  CHECK(c[0] == doctest::Approx(1));
  CHECK(c[1] == doctest::Approx(-4));
  CHECK(c[2] == doctest::Approx(6));
  CHECK(c[3] == doctest::Approx(-4));
  CHECK(c[4] == doctest::Approx(1));
}

TEST_CASE("quartic roots recover a known spectrum") {
  // (z - 2)(z + 3)(z^2 + 1)
  const std::array<double, 5> coeffs{1, 1, -5, 1, -6};
  auto roots = quartic_roots(coeffs);
  std::sort(roots.begin(), roots.end(),
            [](const auto& a, const auto& b) { return std::abs(a) > std::abs(b); });
  CHECK(std::abs(roots[0] - std::complex<double>(-3, 0)) < 1e-9);
  CHECK(std::abs(roots[1] - std::complex<double>(2, 0)) < 1e-9);
  CHECK(std::abs(roots[2].real()) < 1e-9);
  CHECK(std::abs(std::abs(roots[2].imag()) - 1) < 1e-9);
  CHECK(std::abs(roots[3] - std::conj(roots[2])) < 1e-9);
}

TEST_CASE("an empty sweep budget reports a stall instead of bad roots") {
  const std::array<double, 5> coeffs{1, 1, -5, 1, -6};
  RootOptions opts;
  opts.max_sweeps = 0;
  CHECK_THROWS_WITH_AS(quartic_roots(coeffs, opts), doctest::Contains("RootFindingStalled"),
                       Error);
}

TEST_CASE("4x4 eigenvalues of a diagonal matrix come back sorted") {
  Mat4d m{};
  m[0][0] = 1;
  m[1][1] = 4;
  m[2][2] = 2;
  m[3][3] = 3;
  const auto eig = eigenvalues_4x4(m);
  CHECK(eig[0].real() == doctest::Approx(4).epsilon(1e-9));
  CHECK(eig[1].real() == doctest::Approx(3).epsilon(1e-9));
  CHECK(eig[2].real() == doctest::Approx(2).epsilon(1e-9));
  CHECK(eig[3].real() == doctest::Approx(1).epsilon(1e-9));
  for (const auto& z : eig) CHECK(std::abs(z.imag()) < 1e-9);
}

TEST_CASE("full-map jacobian at the equilibrium has the frozen structure") {
  const auto j = jacobian_W(equilibrium<double>());
  // perturbing a healthy frequency only rescales one sex block, which the
  // normalization cancels, so those two columns vanish identically
  for (int r = 0; r < 4; ++r) {
    CHECK(j[r][0] == 0.0);
    CHECK(j[r][2] == 0.0);
  }
  const auto eig = eigenvalues_4x4(j);
  CHECK(std::abs(eig[0] - std::complex<double>(1, 0)) < 1e-6);
  CHECK(std::abs(eig[1] - std::complex<double>(-0.5, 0)) < 1e-6);
  CHECK(std::abs(eig[2]) < 1e-5);
  CHECK(std::abs(eig[3]) < 1e-5);
  // direction fixed by the vanishing columns
  const double kern[4] = {1, 0, -1, 0};
  for (int r = 0; r < 4; ++r) {
    double acc = 0;
    for (int c = 0; c < 4; ++c) acc += j[r][c] * kern[c];
    CHECK(std::abs(acc) < 1e-9);
  }
}

TEST_CASE("finite differencing refuses stencils that cross the degenerate set") {
  const PopulationState<double> s{5e-5, 0.0, 0.5, 0.49995};
  CHECK_THROWS_WITH_AS(jacobian_W(s, 1e-4), doctest::Contains("DegenerateSex"), Error);
}

TEST_CASE("the fixed point search finds exactly one point, at equilibrium") {
  const auto search = find_fixed_points(hemophilia_operator<double>());
  const auto sq = equilibrium<double>();
  std::size_t near = 0;
  for (const auto& p : search.points) {
    if (l1_distance(p.location, sq) < 1e-6) {
      ++near;
      CHECK(p.residual <= 1e-10);
      CHECK(p.classification == Stability::Nonhyperbolic);
      CHECK(std::abs(p.eigenvalues[0] - std::complex<double>(1, 0)) < 1e-6);
      CHECK(std::abs(p.eigenvalues[1] - std::complex<double>(-0.5, 0)) < 1e-6);
    }
  }
  CHECK(near == 1);
  CHECK(search.points.size() == 1);
}

TEST_CASE("the uniform state is no fixed point: its exact residual is one third") {
  const auto s =
      validate_population(Rational(1, 4), Rational(1, 4), Rational(1, 4), Rational(1, 4));
  CHECK(l1_distance(apply_W(s), s) == Rational(1, 3));
}

TEST_CASE("power-law fit recovers a pure reciprocal series") {
  std::vector<double> series;
  for (int m = 1; m <= 2000; ++m) series.push_back(1.0 / m);
  const auto fit = fit_power_law(series);
  CHECK(fit.exponent == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(fit.power_law);
  CHECK(fit.fit_residual < 1e-9);
}

TEST_CASE("geometric decay is flagged as inconsistent with a power law") {
  std::vector<double> series;
  for (int m = 1; m <= 500; ++m) series.push_back(std::pow(2.0, -0.05 * m));
  const auto fit = fit_power_law(series);
  CHECK(!fit.power_law);
}

TEST_CASE("short series are rejected as insufficient") {
  std::vector<double> series(50, 1.0);
  CHECK_THROWS_WITH_AS(fit_power_law(series), doctest::Contains("InsufficientData"), Error);
}

TEST_CASE("orbit carrier mass decays like the reciprocal of the step count") {
  const auto op = hemophilia_operator<double>();
  TrajectoryOptions opts;
  opts.max_steps = 10000;
  const auto traj = iterate(op, PopulationState<double>{0.0, 0.5, 0.5, 0.0}, opts);
  const auto fit = estimate_decay_exponent(traj);
  CHECK(fit.power_law);
  CHECK(fit.exponent > 0.9);
  CHECK(fit.exponent < 1.1);
}

TEST_CASE("sweeping from the equilibrium itself takes zero iterations") {
  const auto rec = sweep_point(hemophilia_operator<double>(), equilibrium<double>(), 1e-4, 100);
  REQUIRE(rec.iterations_to_eps.has_value());
  CHECK(*rec.iterations_to_eps == 0);
  CHECK(rec.stop == StopReason::Converged);
  CHECK(rec.final_distance == 0.0);
}

TEST_CASE("a far corner converges within the standard budget") {
  const PopulationState<double> start{0.0, 0.5, 0.5, 0.0};
  const auto rec = sweep_point(hemophilia_operator<double>(), start, 1e-4, 100000);
  REQUIRE(rec.iterations_to_eps.has_value());
  CHECK(*rec.iterations_to_eps > 100);
  CHECK(rec.final_distance < 1e-4);
}

TEST_CASE("an exhausted sweep budget is reported, not hidden") {
  const PopulationState<double> start{0.0, 0.5, 0.5, 0.0};
  const auto rec = sweep_point(hemophilia_operator<double>(), start, 1e-4, 10);
  CHECK(!rec.iterations_to_eps.has_value());
  CHECK(rec.stop == StopReason::BudgetExhausted);
  CHECK(rec.final_distance > 1e-4);
}

TEST_CASE("the basin sweep covers the lattice and is worker-count invariant") {
  const auto op = hemophilia_operator<double>();
  SweepOptions opts;
  opts.grid_per_axis = 4;
  opts.eps = 1e-2;
  opts.max_iter = 100000;
  const auto serial = basin_sweep(op, opts);
  CHECK(serial.size() == 25);  // 35 compositions minus 2*5 degenerate ones
  for (const auto& rec : serial) {
    CHECK(rec.lattice[0] + rec.lattice[1] + rec.lattice[2] + rec.lattice[3] == 4);
    REQUIRE(rec.iterations_to_eps.has_value());
  }
  opts.workers = 4;
  const auto parallel = basin_sweep(op, opts);
  REQUIRE(parallel.size() == serial.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].lattice == parallel[i].lattice);
    CHECK(serial[i].initial == parallel[i].initial);
    CHECK(serial[i].iterations_to_eps == parallel[i].iterations_to_eps);
    CHECK(serial[i].final_distance == parallel[i].final_distance);
  }
}

TEST_CASE("unnormalized orbits fall into the origin from small starts") {
  const auto op = hemophilia_operator<double>(OperatorMode::Unnormalized);
  const auto orbit = iterate_unnormalized(op, RawState4<double>{0.5, 0.0, 0.5, 0.0});
  CHECK(orbit.verdict == UnnormalizedVerdict::Origin);
  CHECK(orbit.steps_taken >= 4);  // components square-and-halve each step
}

TEST_CASE("unnormalized orbits escape to infinity from large starts") {
  const auto op = hemophilia_operator<double>(OperatorMode::Unnormalized);
  const auto orbit = iterate_unnormalized(op, RawState4<double>{4.0, 0.0, 4.0, 0.0});
  CHECK(orbit.verdict == UnnormalizedVerdict::Infinity);
}

TEST_CASE("unnormalized verdicts trigger immediately outside the bands") {
  const auto op = hemophilia_operator<double>(OperatorMode::Unnormalized);
  const auto low = iterate_unnormalized(op, RawState4<double>{1e-13, 0, 1e-13, 0});
  CHECK(low.verdict == UnnormalizedVerdict::Origin);
  CHECK(low.steps_taken == 0);
  const auto high = iterate_unnormalized(op, RawState4<double>{1e13, 0, 0, 0});
  CHECK(high.verdict == UnnormalizedVerdict::Infinity);
  CHECK(high.steps_taken == 0);
}

TEST_CASE("exact unnormalized orbits reach the origin verdict under the caps") {
  const auto op = hemophilia_operator<Rational>(OperatorMode::Unnormalized);
  const RawState4<Rational> start{Rational(1, 2), Rational(0), Rational(1, 2), Rational(0)};
  const auto orbit = iterate_unnormalized(op, start);
  CHECK(orbit.verdict == UnnormalizedVerdict::Origin);
}

TEST_CASE("exact unnormalized orbits respect the step cap") {
  const auto op = hemophilia_operator<Rational>(OperatorMode::Unnormalized);
  UnnormalizedOptions opts;
  opts.exact_step_cap = 2;
  auto rng = sample_rng(31, SampleStream::UnnormalizedStart, 0);
  const auto start = sample_raw4<Rational>(rng);
  const auto orbit = iterate_unnormalized(op, start, opts);
  CHECK(orbit.steps_taken <= 2);
}
