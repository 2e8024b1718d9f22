#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "gonosim/cross_table.hpp"
#include "gonosim/state.hpp"
#include "gonosim/trajectory.hpp"

namespace gonosim {

struct SweepRecord {
  std::array<std::size_t, 4> lattice{};  // (i, j, k, l) with i+j+k+l = grid
  PopulationState<double> initial;
  std::optional<std::size_t> iterations_to_eps;  // empty when the budget ran out
  double final_distance = 0;                     // L1 distance to the equilibrium at stop
  StopReason stop = StopReason::BudgetExhausted;
};

struct SweepOptions {
  std::size_t grid_per_axis = 10;
  double eps = 1e-4;
  std::size_t max_iter = 100000;
  unsigned workers = 1;
};

// Iterates every barycentric lattice point outside the degenerate set until
// the orbit is eps-close to the equilibrium in L1 or the budget runs out.
// Output order and content are independent of the worker count.
std::vector<SweepRecord> basin_sweep(const GonosomalOperator<double>& op,
                                     const SweepOptions& opts = {});

// Distance-to-equilibrium iteration without state recording; shared by the
// sweep and the convergence heatmap.
SweepRecord sweep_point(const GonosomalOperator<double>& op, const PopulationState<double>& start,
                        double eps, std::size_t max_iter);

}  // namespace gonosim
