#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "gonosim/csv.hpp"
#include "gonosim/decay.hpp"
#include "gonosim/fixed_point.hpp"
#include "gonosim/jacobian.hpp"
#include "gonosim/linalg.hpp"
#include "gonosim/svg.hpp"
#include "gonosim/sweep.hpp"
#include "gonosim/verify.hpp"

namespace {

using namespace gonosim;

// Exit codes: 0 success, 1 check failure, 2 invalid input, 3 numeric failure.
int exit_code_for(ErrorCode c) {
  switch (c) {
    case ErrorCode::BadInput:
    case ErrorCode::NegativeComponent:
    case ErrorCode::NonFiniteComponent:
    case ErrorCode::SumOutOfTolerance:
    case ErrorCode::DegenerateSex:
    case ErrorCode::DomainViolation:
      return 2;
    default:
      return 3;
  }
}

Arithmetic parse_arith(const std::string& s) {
  if (s == "exact") return Arithmetic::Exact;
  if (s == "f64") return Arithmetic::F64;
  fail(ErrorCode::BadInput, "unknown arithmetic '" + s + "' (use exact or f64)");
}

double parse_slice_share(const std::string& slice) {
  if (slice == "y=v") return 0.5;
  if (slice == "y=0") return 0.0;
  if (slice == "v=0") return 1.0;
  char* end = nullptr;
  const double v = std::strtod(slice.c_str(), &end);
  if (end == slice.c_str() || *end != '\0' || !(v >= 0.0 && v <= 1.0))
    fail(ErrorCode::BadInput, "slice must be y=v, y=0, v=0, or a share in [0,1]");
  return v;
}

// Artifact to --out (summary on stdout) or to stdout (summary on stderr).
void emit(const std::string& out_path, const std::string& content, const std::string& what) {
  if (out_path.empty()) {
    std::cout << content;
  } else {
    write_text_file(out_path, content);
    std::cout << "wrote " << what << " to " << out_path << "\n";
  }
}

std::ostream& summary_stream(const std::string& out_path) {
  return out_path.empty() ? std::cerr : std::cout;
}

struct SimulateArgs {
  std::string initial;
  std::string arith = "exact";
  std::string out, svg, table;
  std::size_t steps = 1000;
  double eps = 0.0;
  std::size_t step_cap = 64;
  std::size_t bit_cap = std::size_t(1) << 20;
};

Trajectory<double> shadow_trajectory(const Trajectory<Rational>& traj) {
  using T = scalar_traits<Rational>;
  Trajectory<double> out;
  out.stop_reason = traj.stop_reason;
  out.steps_taken = traj.steps_taken;
  out.states.reserve(traj.states.size());
  for (const auto& s : traj.states)
    out.states.push_back({T::to_double(s.x), T::to_double(s.y), T::to_double(s.u),
                          T::to_double(s.v)});
  out.reduced.reserve(traj.reduced.size());
  for (const auto& r : traj.reduced)
    out.reduced.push_back({T::to_double(r.alpha), T::to_double(r.beta)});
  return out;
}

template <class S>
int run_simulate_mode(const SimulateArgs& a) {
  GonosomalOperator<S> op;
  if (a.table.empty())
    op = hemophilia_operator<S>();
  else
    op = {parse_cross_table<S>(read_text_file(a.table)), OperatorMode::Normalized};
  const auto start = parse_population<S>(a.initial);

  TrajectoryOptions topt;
  topt.max_steps = a.steps;
  topt.eps = a.eps;
  topt.exact_step_cap = a.step_cap;
  topt.exact_bit_cap = a.bit_cap;
  std::optional<PopulationState<S>> target;
  if (a.eps > 0 && op.table == hemophilia_cross_table<S>()) target = equilibrium<S>();
  const auto traj = iterate(op, start, topt, target);

  emit(a.out, trajectory_csv(traj), "trajectory");
  if (!a.svg.empty()) {
    if constexpr (scalar_traits<S>::exact)
      write_text_file(a.svg, trajectory_svg(shadow_trajectory(traj)));
    else
      write_text_file(a.svg, trajectory_svg(traj));
    std::cout << "wrote plot to " << a.svg << "\n";
  }
  summary_stream(a.out) << "steps=" << traj.steps_taken << " stop=" << to_string(traj.stop_reason)
                        << "\n";
  return 0;
}

int run_simulate(const SimulateArgs& a) {
  return parse_arith(a.arith) == Arithmetic::Exact ? run_simulate_mode<Rational>(a)
                                                   : run_simulate_mode<double>(a);
}

struct VerifyArgs {
  std::size_t samples = 1000;
  std::uint64_t seed = 42;
  std::string arith = "exact";
  std::size_t orbit_length = 30;
  unsigned workers = 1;
  std::size_t step_cap = 64;
  std::size_t bit_cap = std::size_t(1) << 20;
  std::string suite, out;
};

int run_verify(const VerifyArgs& a) {
  SuiteConfig cfg;
  cfg.sample_count = a.samples;
  cfg.seed = a.seed;
  cfg.arithmetic = parse_arith(a.arith);
  cfg.orbit_length = a.orbit_length;
  cfg.workers = a.workers;
  cfg.exact_step_cap = a.step_cap;
  cfg.exact_bit_cap = a.bit_cap;
  cfg.filter = a.suite;

  const auto results = run_suite(cfg);
  emit(a.out, format_report(cfg, results), "verification report");
  for (const auto& r : results)
    if (!r.passed()) {
      std::cerr << "first failing check: " << r.check_id << "\n";
      return 1;
    }
  return 0;
}

struct SweepArgs {
  std::size_t grid = 10;
  double eps = 1e-4;
  std::size_t max_iter = 100000;
  unsigned workers = 1;
  std::string arith = "f64";
  std::string out, svg, slice = "y=v";
};

int run_sweep(const SweepArgs& a) {
  if (parse_arith(a.arith) != Arithmetic::F64)
    fail(ErrorCode::BadInput, "sweep supports f64 arithmetic only");
  if (a.grid < 2) fail(ErrorCode::BadInput, "grid must be at least 2 per axis");
  if (a.eps <= 0) fail(ErrorCode::BadInput, "eps must be positive");
  if (a.max_iter < 1) fail(ErrorCode::BadInput, "max_iter must be at least 1");

  const auto op = hemophilia_operator<double>();
  SweepOptions opts;
  opts.grid_per_axis = a.grid;
  opts.eps = a.eps;
  opts.max_iter = a.max_iter;
  opts.workers = a.workers;
  const auto records = basin_sweep(op, opts);
  emit(a.out, sweep_csv(records), "sweep");

  std::size_t missed = 0;
  for (const auto& r : records)
    if (!r.iterations_to_eps) {
      ++missed;
      summary_stream(a.out) << "not reached: lattice (" << r.lattice[0] << "," << r.lattice[1]
                            << "," << r.lattice[2] << "," << r.lattice[3]
                            << ") stop=" << to_string(r.stop)
                            << " final_distance=" << format_scalar(r.final_distance) << "\n";
    }
  summary_stream(a.out) << "points=" << records.size() << " reached=" << records.size() - missed
                        << " missed=" << missed << "\n";

  if (!a.svg.empty()) {
    const double share = parse_slice_share(a.slice);
    Heatmap h;
    h.grid = a.grid;
    h.slice_label = a.slice;
    h.eps = a.eps;
    h.max_iter = a.max_iter;
    for (std::size_t i = 0; i <= a.grid; ++i)
      for (std::size_t j = 0; j <= a.grid; ++j) {
        const double x = double(i) / double(a.grid);
        const double u = double(j) / double(a.grid);
        const double rest = 1.0 - x - u;
        if (rest < -1e-12) continue;
        const double y = share * std::max(rest, 0.0);
        const double v = std::max(rest, 0.0) - y;
        try {
          const auto cell_start = validate_population(x, y, u, v);
          const auto rec = sweep_point(op, cell_start, a.eps, a.max_iter);
          h.cells.push_back({i, j, rec.iterations_to_eps});
        } catch (const Error&) {
          // degenerate corner of the slice, left unplotted
        }
      }
    write_text_file(a.svg, heatmap_svg(h));
    std::cout << "wrote heatmap to " << a.svg << "\n";
  }
  return 0;
}

struct AnalyzeArgs {
  std::size_t grid = 20;
  std::size_t decay_steps = 10000;
  std::string out;
};

std::string complex_str(const std::complex<double>& z) {
  return format_scalar(z.real()) + (z.imag() < 0 ? "-" : "+") + format_scalar(std::abs(z.imag())) +
         "i";
}

int run_analyze(const AnalyzeArgs& a) {
  std::string s = "analysis report\n\n";

  s += "[fixed points, full map]\n";
  FixedPointOptions fopts;
  fopts.grid_per_axis = a.grid;
  const auto search = find_fixed_points(hemophilia_operator<double>(), fopts);
  s += "points: " + std::to_string(search.points.size()) + "\n";
  for (std::size_t k = 0; k < search.points.size(); ++k) {
    const auto& p = search.points[k];
    s += "point " + std::to_string(k) + ": location=" + format_state(p.location) +
         " residual=" + format_scalar(p.residual) + "\n";
    s += "  classification: " + std::string(to_string(p.classification)) + "\n";
    s += "  eigenvalues:";
    for (const auto& z : p.eigenvalues) s += " " + complex_str(z);
    s += "\n  jacobian (finite differences):\n";
    for (int r = 0; r < 4; ++r) {
      s += "   ";
      for (int c = 0; c < 4; ++c) s += " " + format_scalar(p.jacobian[r][c]);
      s += "\n";
    }
  }
  for (const auto& w : search.warnings) s += "warning: " + w + "\n";

  const auto s0q = equilibrium<Rational>();
  s += "exact residual at (1/2, 0, 1/2, 0): " +
       format_scalar(Rational(l1_distance(apply_W(s0q), s0q))) + "\n";

  s += "\n[reduced system at the origin]\n";
  const auto jf = jacobian_F<Rational>({Rational(0), Rational(0)});
  s += "analytic jacobian: [[" + format_scalar(jf.a11) + ", " + format_scalar(jf.a12) + "], [" +
       format_scalar(jf.a21) + ", " + format_scalar(jf.a22) + "]]\n";
  if (const auto eigs = eigenvalues_2x2_exact(jf))
    s += "exact eigenvalues: " + format_scalar((*eigs)[0]) + ", " + format_scalar((*eigs)[1]) +
         "\n";
  else
    s += "exact eigenvalues: not rational\n";

  s += "\n[ratio-sum decay along a reference orbit]\n";
  TrajectoryOptions topt;
  topt.max_steps = a.decay_steps;
  const auto traj =
      iterate(hemophilia_operator<double>(), validate_population(0.0, 0.5, 0.5, 0.0), topt);
  const auto fit = estimate_decay_exponent(traj);
  s += "orbit steps: " + std::to_string(traj.steps_taken) + "\n";
  s += "fitted exponent: " + format_scalar(fit.exponent) + "\n";
  s += "fit residual (rms, log-log): " + format_scalar(fit.fit_residual) + "\n";
  s += "window drift: " + format_scalar(fit.window_drift) + "\n";
  s += std::string("power-law shape: ") + (fit.power_law ? "credible" : "not credible") + "\n";
  s += "samples used: " + std::to_string(fit.samples_used) + "\n";

  emit(a.out, s, "analysis report");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gonosomal inheritance dynamics: simulate, verify, sweep, analyze"};
  app.set_config("--config", "", "read options from an INI/TOML file (flags win)");
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "iterate the evolution operator and record states");
  c_sim->add_option("--initial", sim.initial, "initial state x,y,u,v (decimals or fractions)")
      ->required();
  c_sim->add_option("--steps", sim.steps, "maximum steps");
  c_sim->add_option("--eps", sim.eps, "stop when L1 distance to the equilibrium drops below this");
  c_sim->add_option("--arith", sim.arith, "exact|f64");
  c_sim->add_option("--out", sim.out, "CSV output path (default stdout)");
  c_sim->add_option("--svg", sim.svg, "plot output path");
  c_sim->add_option("--table", sim.table, "cross-table file (default: hemophilia)");
  c_sim->add_option("--step-cap", sim.step_cap, "exact-mode step cap");
  c_sim->add_option("--bit-cap", sim.bit_cap, "exact-mode state size cap in bits");

  VerifyArgs ver;
  auto* c_ver = app.add_subcommand("verify", "run the property-check suite");
  c_ver->add_option("--samples", ver.samples, "sampled inputs per check");
  c_ver->add_option("--seed", ver.seed, "sampling seed");
  c_ver->add_option("--arith", ver.arith, "exact|f64");
  c_ver->add_option("--orbit-length", ver.orbit_length, "steps per sampled orbit");
  c_ver->add_option("--workers", ver.workers, "worker threads for sampled checks");
  c_ver->add_option("--suite", ver.suite, "substring filter over check ids");
  c_ver->add_option("--step-cap", ver.step_cap, "exact-mode step cap");
  c_ver->add_option("--bit-cap", ver.bit_cap, "exact-mode state size cap in bits");
  c_ver->add_option("--out", ver.out, "report path (default stdout)");

  SweepArgs swp;
  auto* c_swp = app.add_subcommand("sweep", "basin-of-attraction sweep over the simplex");
  c_swp->add_option("--grid", swp.grid, "barycentric lattice resolution per axis");
  c_swp->add_option("--eps", swp.eps, "target L1 distance to the equilibrium");
  c_swp->add_option("--max-iter", swp.max_iter, "iteration budget per point");
  c_swp->add_option("--workers", swp.workers, "worker threads");
  c_swp->add_option("--arith", swp.arith, "f64 (exact sweeps are not supported)");
  c_swp->add_option("--out", swp.out, "CSV output path (default stdout)");
  c_swp->add_option("--svg", swp.svg, "heatmap output path");
  c_swp->add_option("--slice", swp.slice, "heatmap slice: y=v, y=0, v=0, or a share in [0,1]");

  AnalyzeArgs ana;
  auto* c_ana = app.add_subcommand("analyze", "fixed points, spectra, and decay measurement");
  c_ana->add_option("--grid", ana.grid, "fixed-point search grid per axis");
  c_ana->add_option("--decay-steps", ana.decay_steps, "reference orbit length for the decay fit");
  c_ana->add_option("--out", ana.out, "report path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (c_sim->parsed()) return run_simulate(sim);
    if (c_ver->parsed()) return run_verify(ver);
    if (c_swp->parsed()) return run_sweep(swp);
    return run_analyze(ana);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
}
