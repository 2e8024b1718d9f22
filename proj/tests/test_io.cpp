#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cctype>
#include <cstdio>
#include <string>

#include "gonosim/csv.hpp"
#include "gonosim/svg.hpp"
#include "gonosim/trajectory.hpp"

using namespace gonosim;

namespace {

std::size_t count_occurrences(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1))
    ++n;
  return n;
}

bool has_scientific_number(const std::string& text) {
  for (std::size_t i = 1; i + 2 < text.size(); ++i)
    if (text[i] == 'e' && std::isdigit(static_cast<unsigned char>(text[i - 1])) &&
        (text[i + 1] == '-' || text[i + 1] == '+') &&
        std::isdigit(static_cast<unsigned char>(text[i + 2])))
      return true;
  return false;
}

Trajectory<Rational> corner_orbit(std::size_t steps) {
  TrajectoryOptions opts;
  opts.max_steps = steps;
  const PopulationState<Rational> corner{Rational(0), Rational(1, 2), Rational(1, 2), Rational(0)};
  return iterate(hemophilia_operator<Rational>(), corner, opts);
}

}  // namespace

TEST_CASE("exact trajectory csv is fully fractional and frozen") {
  const auto csv = trajectory_csv(corner_orbit(3));
  CHECK(csv.find("m,x,y,u,v,alpha,beta,l1_to_equilibrium\n") == 0);
  CHECK(csv.find("0,0,1/2,1/2,0,,,1\n") != std::string::npos);
  CHECK(csv.find("1,1/4,1/4,1/4,1/4,,,1\n") != std::string::npos);
  CHECK(csv.find("2,3/16,13/48,19/48,7/48,13/9,7/19,5/6\n") != std::string::npos);
  CHECK(count_occurrences(csv, "\n") == 5);  // header plus four states
  CHECK(csv.back() == '\n');
}

TEST_CASE("ratio columns stay blank before the second iterate") {
  const auto csv = trajectory_csv(corner_orbit(1));
  // both data rows end with empty alpha and beta fields
  CHECK(csv.find("0,0,1/2,1/2,0,,,") != std::string::npos);
  CHECK(csv.find("1,1/4,1/4,1/4,1/4,,,") != std::string::npos);
}

TEST_CASE("float trajectory csv uses shortest round-trip decimals") {
  TrajectoryOptions opts;
  opts.max_steps = 2;
  const auto traj =
      iterate(hemophilia_operator<double>(), PopulationState<double>{0.0, 0.5, 0.5, 0.0}, opts);
  const auto csv = trajectory_csv(traj);
  CHECK(csv.find("1,0.25,0.25,0.25,0.25,,,1\n") != std::string::npos);
  CHECK(csv.find("2,0.1875,") != std::string::npos);  // 3/16 is exact in binary
}

TEST_CASE("sweep csv renders budget exhaustion as an empty iteration field") {
  SweepRecord done;
  done.lattice = {1, 2, 3, 4};
  done.initial = {0.1, 0.2, 0.3, 0.4};
  done.iterations_to_eps = 17;
  done.final_distance = 0.5;
  done.stop = StopReason::Converged;
  SweepRecord spent;
  spent.lattice = {0, 1, 0, 9};
  spent.initial = {0.0, 0.1, 0.0, 0.9};
  spent.final_distance = 0.25;
  spent.stop = StopReason::BudgetExhausted;
  const auto csv = sweep_csv({done, spent});
  CHECK(csv.find("i,j,k,l,x,y,u,v,iterations_to_eps,final_distance,stop\n") == 0);
  CHECK(csv.find("1,2,3,4,0.1,0.2,0.3,0.4,17,0.5,Converged\n") != std::string::npos);
  CHECK(csv.find("0,1,0,9,0,0.1,0,0.9,,0.25,BudgetExhausted\n") != std::string::npos);
}

TEST_CASE("text files round-trip bytes and report IO failures") {
  const std::string path = "test_io_roundtrip.tmp";
  const std::string content = "line one\nline two\n\nno trailing newline";
  write_text_file(path, content);
  CHECK(read_text_file(path) == content);
  std::remove(path.c_str());
  CHECK_THROWS_WITH_AS(read_text_file("definitely_missing_file.tmp"),
                       doctest::Contains("BadInput"), Error);
  CHECK_THROWS_AS(write_text_file("no_such_dir/x.tmp", "data"), Error);
}

TEST_CASE("trajectory svg is a self-contained two-panel picture") {
  TrajectoryOptions opts;
  opts.max_steps = 50;
  const auto traj =
      iterate(hemophilia_operator<double>(), PopulationState<double>{0.0, 0.5, 0.5, 0.0}, opts);
  const auto svg = trajectory_svg(traj);
  CHECK(svg.rfind("<svg xmlns=", 0) == 0);
  CHECK(svg.find("</svg>\n") == svg.size() - 7);
  CHECK(count_occurrences(svg, "http") == 1);  // only the xmlns namespace
  CHECK(svg.find("ratio orbit (alpha, beta)") != std::string::npos);
  CHECK(svg.find("coordinates vs step") != std::string::npos);
  CHECK(svg.find("origin = equilibrium ratios") != std::string::npos);
  CHECK(svg.find("stop: BudgetExhausted, steps: 50") != std::string::npos);
  CHECK(count_occurrences(svg, "<polyline") >= 6);  // ratio path, 4 coordinates, distance
  CHECK(!has_scientific_number(svg));               // plain fixed-point coordinates only
  // deterministic: same orbit, same bytes
  CHECK(trajectory_svg(traj) == svg);
}

TEST_CASE("heatmap svg colors converged cells and marks missed ones") {
  Heatmap h;
  h.grid = 4;
  h.slice_label = "y=v";
  h.eps = 1e-4;
  h.max_iter = 1000;
  for (std::size_t i = 1; i < 4; ++i)
    for (std::size_t j = 1; j < 4; ++j) {
      HeatmapCell c;
      c.i = i;
      c.j = j;
      if (i != 2 || j != 2) c.iterations = i * 10 + j;
      h.cells.push_back(c);
    }
  const auto svg = heatmap_svg(h);
  CHECK(svg.rfind("<svg xmlns=", 0) == 0);
  CHECK(count_occurrences(svg, "http") == 1);
  CHECK(svg.find("iterations to reach eps=1e-04 (slice y=v, budget 1000)") != std::string::npos);
  CHECK(svg.find("not reached") != std::string::npos);
  CHECK(svg.find("#202020") != std::string::npos);  // the missed cell
  CHECK(count_occurrences(svg, "<rect") > h.cells.size());
}
