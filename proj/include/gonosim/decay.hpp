#pragma once

#include <cstddef>
#include <vector>

#include "gonosim/trajectory.hpp"

namespace gonosim {

struct DecayFit {
  double exponent = 0;      // p in series ~ C * m^(-p)
  double fit_residual = 0;  // rms log-log residual over the fit window
  double window_drift = 0;  // |p(last half) - p(last quarter)|
  bool power_law = false;   // drift small enough for a power law to be credible
  std::size_t samples_used = 0;
};

// Log-log least squares fit of a positive series indexed from m = 1, fitted
// over the last half and cross-checked against the last quarter. Requires at
// least 100 positive entries; zero or negative entries are excluded.
DecayFit fit_power_law(const std::vector<double>& series);

// Fit of the reduced-coordinate sums alpha + beta along a trajectory.
DecayFit estimate_decay_exponent(const Trajectory<double>& traj);

}  // namespace gonosim
