#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gonosim/trajectory.hpp"

namespace gonosim {

// Self-contained deterministic SVG artifacts: no external references, all
// coordinates emitted with fixed precision.

// Two panels: the ratio orbit over its rectangle, and coordinates vs step.
std::string trajectory_svg(const Trajectory<double>& traj);

struct HeatmapCell {
  std::size_t i = 0, j = 0;               // x and u lattice indices
  std::optional<std::size_t> iterations;  // empty when the budget ran out
};

struct Heatmap {
  std::size_t grid = 0;  // lattice resolution per axis
  std::string slice_label;
  double eps = 0;
  std::size_t max_iter = 0;
  std::vector<HeatmapCell> cells;
};

std::string heatmap_svg(const Heatmap& h);

}  // namespace gonosim
