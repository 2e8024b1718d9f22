#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "gonosim/cross_table.hpp"
#include "gonosim/linalg.hpp"
#include "gonosim/state.hpp"

namespace gonosim {

enum class Stability { Hyperbolic, Nonhyperbolic };

inline const char* to_string(Stability s) noexcept {
  return s == Stability::Hyperbolic ? "Hyperbolic" : "Nonhyperbolic";
}

struct FixedPointReport {
  PopulationState<double> location;
  double residual = 0;  // L1 distance between the point and its image
  Mat4d jacobian{};
  std::array<std::complex<double>, 4> eigenvalues{};
  Stability classification = Stability::Hyperbolic;
};

struct FixedPointOptions {
  std::size_t grid_per_axis = 20;   // barycentric resolution, >= 4
  double refine_tol = 1e-10;        // residual bound for accepted points
  double merge_tol = 1e-6;          // L1 radius for deduplication
  std::size_t newton_max_iter = 50;
  double unit_circle_tol = 1e-8;    // eigenvalue modulus band for nonhyperbolicity
  double fd_step = 1e-4;
};

struct FixedPointSearch {
  std::vector<FixedPointReport> points;
  std::vector<std::string> warnings;  // candidates dropped by failed refinement
};

// Barycentric grid scan for local minima of the fixed-point residual,
// followed by damped Newton refinement in the sum-1 affine slice.
FixedPointSearch find_fixed_points(const GonosomalOperator<double>& op,
                                   const FixedPointOptions& opts = {});

}  // namespace gonosim
