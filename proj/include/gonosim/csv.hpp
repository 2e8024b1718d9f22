#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "gonosim/errors.hpp"
#include "gonosim/numeric.hpp"
#include "gonosim/state.hpp"
#include "gonosim/sweep.hpp"
#include "gonosim/trajectory.hpp"

namespace gonosim {

// CSV contract: header row, comma-separated, newline-terminated rows, UTF-8.
// Exact scalars render as fraction strings, floats as shortest round-trip
// decimals, so files are byte-stable across runs.

template <class S>
std::string trajectory_csv(const Trajectory<S>& traj) {
  std::string out = "m,x,y,u,v,alpha,beta,l1_to_equilibrium\n";
  const auto target = equilibrium<S>();
  for (std::size_t m = 0; m < traj.states.size(); ++m) {
    const auto& s = traj.states[m];
    out += std::to_string(m) + ',' + format_scalar(s.x) + ',' + format_scalar(s.y) + ',' +
           format_scalar(s.u) + ',' + format_scalar(s.v) + ',';
    if (m >= 2 && m - 2 < traj.reduced.size())
      out += format_scalar(traj.reduced[m - 2].alpha) + ',' + format_scalar(traj.reduced[m - 2].beta);
    else
      out += ",";
    out += ',' + format_scalar(l1_distance(s, target)) + '\n';
  }
  return out;
}

inline std::string sweep_csv(const std::vector<SweepRecord>& records) {
  std::string out = "i,j,k,l,x,y,u,v,iterations_to_eps,final_distance,stop\n";
  for (const auto& r : records) {
    out += std::to_string(r.lattice[0]) + ',' + std::to_string(r.lattice[1]) + ',' +
           std::to_string(r.lattice[2]) + ',' + std::to_string(r.lattice[3]) + ',' +
           format_scalar(r.initial.x) + ',' + format_scalar(r.initial.y) + ',' +
           format_scalar(r.initial.u) + ',' + format_scalar(r.initial.v) + ',';
    if (r.iterations_to_eps) out += std::to_string(*r.iterations_to_eps);
    out += ',' + format_scalar(r.final_distance) + ',' + to_string(r.stop) + '\n';
  }
  return out;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::BadInput, "cannot open '" + path + "' for writing");
  f << content;
  if (!f) fail(ErrorCode::BadInput, "write to '" + path + "' failed");
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(ErrorCode::BadInput, "cannot open '" + path + "' for reading");
  return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

}  // namespace gonosim
