#include "gonosim/sweep.hpp"

#include <atomic>
#include <thread>

namespace gonosim {

SweepRecord sweep_point(const GonosomalOperator<double>& op, const PopulationState<double>& start,
                        double eps, std::size_t max_iter) {
  const auto target = equilibrium<double>();
  const bool closed_form = op.table == hemophilia_cross_table<double>();
  SweepRecord rec;
  rec.initial = start;
  PopulationState<double> s = start;
  double dist = l1_distance(s, target);
  for (std::size_t step = 0;; ++step) {
    if (dist < eps) {
      rec.iterations_to_eps = step;
      rec.final_distance = dist;
      rec.stop = StopReason::Converged;
      return rec;
    }
    if (step >= max_iter) break;
    try {
      s = closed_form ? apply_W(s) : apply_general(op, s);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::DegenerateSex) {
        rec.final_distance = dist;
        rec.stop = StopReason::DegenerateSex;
        return rec;
      }
      throw;
    }
    dist = l1_distance(s, target);
  }
  rec.final_distance = dist;
  rec.stop = StopReason::BudgetExhausted;
  return rec;
}

std::vector<SweepRecord> basin_sweep(const GonosomalOperator<double>& op,
                                     const SweepOptions& opts) {
  if (opts.grid_per_axis == 0) fail(ErrorCode::BadInput, "grid_per_axis must be positive");
  const std::size_t n = opts.grid_per_axis;

  std::vector<std::array<std::size_t, 4>> lattice;
  for (std::size_t i = 0; i <= n; ++i)
    for (std::size_t j = 0; i + j <= n; ++j)
      for (std::size_t k = 0; i + j + k <= n; ++k) {
        const std::size_t l = n - i - j - k;
        if (i + j == 0 || k + l == 0) continue;
        lattice.push_back({i, j, k, l});
      }

  std::vector<SweepRecord> records(lattice.size());
  std::atomic<std::size_t> cursor{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t idx = cursor.fetch_add(1);
      if (idx >= lattice.size()) return;
      const auto& c = lattice[idx];
      const PopulationState<double> start = validate_population(
          double(c[0]) / n, double(c[1]) / n, double(c[2]) / n, double(c[3]) / n);
      records[idx] = sweep_point(op, start, opts.eps, opts.max_iter);
      records[idx].lattice = c;
    }
  };

  const unsigned workers = opts.workers == 0 ? 1 : opts.workers;
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  return records;
}

}  // namespace gonosim
