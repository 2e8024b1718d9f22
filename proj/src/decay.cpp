#include "gonosim/decay.hpp"

#include <algorithm>
#include <cmath>

#include "gonosim/errors.hpp"

namespace gonosim {

namespace {

struct LinearFit {
  double slope = 0;
  double intercept = 0;
  double rms = 0;
};

LinearFit least_squares(const std::vector<std::pair<double, double>>& pts) {
  const double n = double(pts.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  LinearFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss = 0;
  for (const auto& [x, y] : pts) {
    const double r = y - (fit.slope * x + fit.intercept);
    ss += r * r;
  }
  fit.rms = std::sqrt(ss / n);
  return fit;
}

double window_exponent(const std::vector<std::pair<double, double>>& loglog, std::size_t from) {
  std::vector<std::pair<double, double>> window(loglog.begin() + from, loglog.end());
  return -least_squares(window).slope;
}

}  // namespace

DecayFit fit_power_law(const std::vector<double>& series) {
  // (log m, log value) for the positive entries, m counted from 1
  std::vector<std::pair<double, double>> loglog;
  loglog.reserve(series.size());
  for (std::size_t i = 0; i < series.size(); ++i)
    if (series[i] > 0) loglog.push_back({std::log(double(i + 1)), std::log(series[i])});
  if (loglog.size() < 100)
    fail(ErrorCode::InsufficientData,
         "power-law fit needs at least 100 positive entries, got " + std::to_string(loglog.size()));

  const std::size_t half = loglog.size() / 2;
  const std::size_t quarter = (3 * loglog.size()) / 4;
  std::vector<std::pair<double, double>> window(loglog.begin() + half, loglog.end());
  const LinearFit fit = least_squares(window);

  DecayFit out;
  out.exponent = -fit.slope;
  out.fit_residual = fit.rms;
  out.window_drift = std::fabs(out.exponent - window_exponent(loglog, quarter));
  out.power_law = out.window_drift <= std::max(0.05, 0.1 * std::fabs(out.exponent));
  out.samples_used = window.size();
  return out;
}

DecayFit estimate_decay_exponent(const Trajectory<double>& traj) {
  std::vector<double> sums;
  sums.reserve(traj.reduced.size());
  for (const auto& r : traj.reduced) sums.push_back(r.alpha + r.beta);
  return fit_power_law(sums);
}

}  // namespace gonosim
